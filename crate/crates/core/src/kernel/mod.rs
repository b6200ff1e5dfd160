//! Displacement kernels `K(x, y) = ||f(x) - f(y)||^2` over a Cayley ball.
//!
//! Kernels are dense and symmetric, indexed by ball order. Bicombing
//! kernels keep the exact rational matrix next to the float one.

mod cnd;
mod feature;
mod io;

use std::collections::HashMap;
use std::fmt;

use num_traits::{Signed, Zero};

pub use cnd::{cnd_certificate, cnd_min_eigenvalue};
pub use feature::{feature_embed, FeatureVector};
pub use io::{read_kernel_csv, write_kernel_csv};

use crate::bicombing::{Bicombing, Chain1};
use crate::group::{CayleyBall, Group, GroupElement};
use crate::{Error, Rational, Result, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Bicombing,
    TreeAction,
    UserSupplied,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Bicombing => "bicombing",
            Provenance::TreeAction => "tree_action",
            Provenance::UserSupplied => "user_supplied",
        })
    }
}

#[derive(Clone, Debug)]
pub struct DisplacementKernel<T> {
    elements: Vec<GroupElement>,
    positions: HashMap<GroupElement, usize>,
    values: Vec<T>,
    exact: Option<Vec<Rational>>,
    provenance: Provenance,
    displacement_constant: T,
}

impl<T: Scalar> DisplacementKernel<T> {
    /// `values` is row-major `n x n`. No structural checks are made here;
    /// see [`check_structure`].
    pub fn from_values(
        elements: Vec<GroupElement>,
        values: Vec<T>,
        provenance: Provenance,
        displacement_constant: T,
    ) -> Result<DisplacementKernel<T>> {
        let n = elements.len();
        if values.len() != n * n {
            return Err(Error::Invalid(format!(
                "kernel has {} values for {} elements",
                values.len(),
                n
            )));
        }
        let positions = elements
            .iter()
            .enumerate()
            .map(|(i, x)| (x.clone(), i))
            .collect();
        Ok(DisplacementKernel {
            elements,
            positions,
            values,
            exact: None,
            provenance,
            displacement_constant,
        })
    }

    pub(crate) fn from_exact(
        elements: Vec<GroupElement>,
        exact: Vec<Rational>,
        provenance: Provenance,
    ) -> DisplacementKernel<T> {
        let values = exact.iter().map(T::from_rational).collect();
        let mut k = DisplacementKernel::from_values(elements, values, provenance, T::zero())
            .expect("square matrix");
        k.exact = Some(exact);
        k
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &GroupElement {
        &self.elements[i]
    }

    pub fn index_of(&self, x: &GroupElement) -> Option<usize> {
        self.positions.get(x).copied()
    }

    pub fn value(&self, i: usize, j: usize) -> T {
        self.values[i * self.elements.len() + j]
    }

    pub fn exact_value(&self, i: usize, j: usize) -> Option<Rational> {
        self.exact.as_ref().map(|e| e[i * self.elements.len() + j])
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn get(&self, x: &GroupElement, y: &GroupElement) -> Option<T> {
        Some(self.value(self.index_of(x)?, self.index_of(y)?))
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// The constant `M` with `K(sx, sy) <= K(x, y) + M`, empirical or declared.
    pub fn displacement_constant(&self) -> T {
        self.displacement_constant
    }

    pub fn with_displacement_constant(mut self, m: T) -> Self {
        self.displacement_constant = m;
        self
    }
}

/// `K(x, y) = ||q[e, x] - q[e, y]||_1`, exact, with `M` set by
/// [`ball_displacement_constant`].
pub fn kernel_from_bicombing<T: Scalar>(
    b: &Bicombing<'_>,
    ball: &CayleyBall,
) -> Result<DisplacementKernel<T>> {
    let e = GroupElement::identity();
    let chains: Vec<Chain1<Rational>> = ball
        .elements()
        .iter()
        .map(|x| b.combing_chain(&e, x))
        .collect::<Result<_>>()?;
    let n = chains.len();
    let mut exact = vec![Rational::zero(); n * n];
    for i in 0..n {
        for j in i + 1..n {
            let d = (&chains[i] - &chains[j]).l1_norm();
            exact[i * n + j] = d;
            exact[j * n + i] = d;
        }
    }
    let k = DisplacementKernel::from_exact(ball.elements().to_vec(), exact, Provenance::Bicombing);
    let m = ball_displacement_constant(&k, b.group())?;
    Ok(k.with_displacement_constant(m))
}

/// Index of `s * x_i` for every kernel element, `None` when it leaves the ball.
pub fn translation_map<T: Scalar>(
    k: &DisplacementKernel<T>,
    group: &Group,
    s: &GroupElement,
) -> Result<Vec<Option<usize>>> {
    k.elements
        .iter()
        .map(|x| match group.multiply(s, x) {
            Ok(y) => Ok(k.index_of(&y)),
            Err(Error::OutOfBall { .. }) => Ok(None),
            Err(e) => Err(e),
        })
        .collect()
}

fn translated_subset<T: Scalar>(
    k: &DisplacementKernel<T>,
    group: &Group,
    s: &GroupElement,
    subset: &[usize],
) -> Result<Vec<usize>> {
    subset
        .iter()
        .map(|&i| {
            group
                .multiply(s, &k.elements[i])
                .ok()
                .and_then(|y| k.index_of(&y))
                .ok_or_else(|| Error::SupportEscape(group.format(&k.elements[i])))
        })
        .collect()
}

/// `max_{x, y in S} K(sx, sy) - K(x, y)`.
pub fn displacement_excess<T: Scalar>(
    k: &DisplacementKernel<T>,
    group: &Group,
    s: &GroupElement,
    subset: &[usize],
) -> Result<T> {
    let moved = translated_subset(k, group, s, subset)?;
    let mut best = T::zero();
    for (a, &i) in subset.iter().enumerate() {
        for (b, &j) in subset.iter().enumerate() {
            let d = k.value(moved[a], moved[b]) - k.value(i, j);
            if d > best {
                best = d;
            }
        }
    }
    Ok(best)
}

/// `max_{x, y in S} |K(sx, sy) - K(x, y)|`: the excess of `s` on `S`
/// together with the excess of `s^-1` on `sS`.
pub fn two_sided_excess<T: Scalar>(
    k: &DisplacementKernel<T>,
    group: &Group,
    s: &GroupElement,
    subset: &[usize],
) -> Result<T> {
    let moved = translated_subset(k, group, s, subset)?;
    let mut best = T::zero();
    for (a, &i) in subset.iter().enumerate() {
        for (b, &j) in subset.iter().enumerate() {
            let d = num_traits::Float::abs(k.value(moved[a], moved[b]) - k.value(i, j));
            if d > best {
                best = d;
            }
        }
    }
    Ok(best)
}

/// Exact version of [`two_sided_excess`] for kernels with rational values.
pub fn exact_two_sided_excess<T: Scalar>(
    k: &DisplacementKernel<T>,
    group: &Group,
    s: &GroupElement,
    subset: &[usize],
) -> Result<Rational> {
    if !k.is_exact() {
        return Err(Error::Invalid("kernel has no exact values".into()));
    }
    let moved = translated_subset(k, group, s, subset)?;
    let mut best = Rational::zero();
    for (a, &i) in subset.iter().enumerate() {
        for (b, &j) in subset.iter().enumerate() {
            let d =
                (k.exact_value(moved[a], moved[b]).unwrap() - k.exact_value(i, j).unwrap()).abs();
            best = best.max(d);
        }
    }
    Ok(best)
}

/// `max |K(sx, sy) - K(x, y)|` over all `s, x, y` in the ball with both
/// translates inside the ball.
pub fn ball_displacement_constant<T: Scalar>(
    k: &DisplacementKernel<T>,
    group: &Group,
) -> Result<T> {
    let n = k.len();
    let mut best = T::zero();
    for s in k.elements.iter().skip(1) {
        let map = translation_map(k, group, s)?;
        let inside: Vec<(usize, usize)> = map
            .iter()
            .enumerate()
            .filter_map(|(i, t)| t.map(|t| (i, t)))
            .collect();
        for &(i, si) in &inside {
            let row = &k.values[i * n..(i + 1) * n];
            let srow = &k.values[si * n..(si + 1) * n];
            for &(j, sj) in &inside {
                let d = num_traits::Float::abs(srow[sj] - row[j]);
                if d > best {
                    best = d;
                }
            }
        }
    }
    Ok(best)
}

/// Outcome of replaying the two-triangle estimate for one translation.
#[derive(Clone, Debug)]
pub struct TriangleReplay {
    pub pairs: usize,
    /// Largest `K(sx, sy) - K(x, y)` seen.
    pub max_excess: Rational,
    /// Largest two-triangle area sum seen.
    pub max_area_sum: Rational,
    /// Pairs where the excess exceeds the area sum, or where the three-term
    /// decomposition of `q[e, sx] - q[e, sy]` fails.
    pub violations: Vec<(GroupElement, GroupElement)>,
}

/// For every pair `x, y` in `S` checks, in exact arithmetic,
///
/// ```text
/// K(sx, sy) - K(x, y) <= ||q[e,sx] + q[sx,sy] + q[sy,e]||_1
///                      + ||q[sy,sx] + q[sx,s] + q[s,sy]||_1
/// ```
///
/// and that the two triangles plus `q[s,sx] + q[sy,s]` sum to
/// `q[e,sx] - q[e,sy]`, the last term having norm `K(x, y)`.
pub fn replay_two_triangle_bound<T: Scalar>(
    b: &Bicombing<'_>,
    k: &DisplacementKernel<T>,
    s: &GroupElement,
    subset: &[usize],
) -> Result<TriangleReplay> {
    if !b.is_antisymmetric() {
        return Err(Error::IncompatibleBicombing {
            kind: b.kind().to_string(),
            reason: "the two-triangle decomposition needs an antisymmetric bicombing".into(),
        });
    }
    if !k.is_exact() {
        return Err(Error::Invalid("kernel has no exact values".into()));
    }
    let g = b.group();
    let e = GroupElement::identity();
    let moved = translated_subset(k, g, s, subset)?;
    let mut report = TriangleReplay {
        pairs: 0,
        max_excess: Rational::zero(),
        max_area_sum: Rational::zero(),
        violations: Vec::new(),
    };
    for (a, &i) in subset.iter().enumerate() {
        for (c, &j) in subset.iter().enumerate() {
            if i == j {
                continue;
            }
            let (sx, sy) = (k.element(moved[a]), k.element(moved[c]));
            let excess = k.exact_value(moved[a], moved[c]).unwrap() - k.exact_value(i, j).unwrap();
            let mut t1 = b.combing_chain(&e, sx)?;
            t1 += &b.combing_chain(sx, sy)?;
            t1 += &b.combing_chain(sy, &e)?;
            let mut t2 = b.combing_chain(sy, sx)?;
            t2 += &b.combing_chain(sx, s)?;
            t2 += &b.combing_chain(s, sy)?;
            let mut t3 = b.combing_chain(s, sx)?;
            t3 += &b.combing_chain(sy, s)?;
            let target = &b.combing_chain(&e, sx)? - &b.combing_chain(&e, sy)?;
            let decomposition = &(&t1 + &t2) + &t3;
            let area_sum = t1.l1_norm() + t2.l1_norm();
            report.pairs += 1;
            report.max_excess = report.max_excess.max(excess);
            report.max_area_sum = report.max_area_sum.max(area_sum);
            if excess > area_sum
                || decomposition != target
                || t3.l1_norm() != k.exact_value(i, j).unwrap()
            {
                report
                    .violations
                    .push((k.element(i).clone(), k.element(j).clone()));
            }
        }
    }
    Ok(report)
}

/// Structural defects of a kernel matrix.
#[derive(Clone, Debug, PartialEq)]
pub enum KernelDefect {
    NonZeroDiagonal { index: usize, value: f64 },
    Asymmetric { i: usize, j: usize },
    Negative { i: usize, j: usize, value: f64 },
}

/// `K(i, i) = 0`, `K(i, j) = K(j, i)` and `K(i, j) >= 0`.
pub fn check_structure<T: Scalar>(k: &DisplacementKernel<T>) -> Vec<KernelDefect> {
    let mut out = Vec::new();
    let n = k.len();
    for i in 0..n {
        if k.value(i, i) != T::zero() {
            out.push(KernelDefect::NonZeroDiagonal {
                index: i,
                value: k.value(i, i).as_f64(),
            });
        }
        for j in 0..n {
            if j > i && k.value(i, j) != k.value(j, i) {
                out.push(KernelDefect::Asymmetric { i, j });
            }
            if k.value(i, j) < T::zero() {
                out.push(KernelDefect::Negative {
                    i,
                    j,
                    value: k.value(i, j).as_f64(),
                });
            }
        }
    }
    out
}

/// Largest `|K(x, y) - ||J(q[e,x]) - J(q[e,y])||^2|` over all pairs of the
/// ball, in exact arithmetic. Half-integral chains are doubled before
/// embedding and the squared distance halved.
pub fn kernel_cross_validate(b: &Bicombing<'_>, ball: &CayleyBall) -> Result<Rational> {
    let k: DisplacementKernel<f64> = {
        let e = GroupElement::identity();
        let chains: Vec<Chain1<Rational>> = ball
            .elements()
            .iter()
            .map(|x| b.combing_chain(&e, x))
            .collect::<Result<_>>()?;
        let n = chains.len();
        let mut exact = vec![Rational::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                exact[i * n + j] = (&chains[i] - &chains[j]).l1_norm();
            }
        }
        DisplacementKernel::from_exact(ball.elements().to_vec(), exact, Provenance::Bicombing)
    };
    let p = b.group().presentation();
    let scale = if b.is_integral() { 1 } else { 2 };
    let e = GroupElement::identity();
    let features: Vec<FeatureVector> = ball
        .elements()
        .iter()
        .map(|x| {
            let c = b
                .combing_chain(&e, x)?
                .scale(&Rational::from_integer(scale));
            feature_embed(&c, p)
        })
        .collect::<Result<_>>()?;
    let mut worst = Rational::zero();
    for i in 0..ball.len() {
        for j in 0..ball.len() {
            let via_j = Rational::new(features[i].squared_distance(&features[j]), scale);
            worst = worst.max((k.exact_value(i, j).unwrap() - via_j).abs());
        }
    }
    Ok(worst)
}
