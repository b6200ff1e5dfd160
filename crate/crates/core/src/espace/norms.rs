use std::io::Write;

use num_traits::Float;

use super::{cocycle, rep_apply, EVector};
use crate::group::{Group, GroupElement};
use crate::kernel::{two_sided_excess, DisplacementKernel, Provenance};
use crate::scalar::clamped_sqrt;
use crate::{Error, Result, Scalar};

/// Quadratic-form values below `-NORM_HARD_TOLERANCE` are reported as a
/// non-CND kernel; values between it and 0 are clamped under the root.
pub const NORM_HARD_TOLERANCE: f64 = 1e-6;

const LOWER_BOUND_SLACK: f64 = 1e-9;
const BOUND_CHECK_SLACK: f64 = 1e-9;

fn support_indices<T: Scalar>(
    k: &DisplacementKernel<T>,
    v: &EVector<T>,
) -> Result<Vec<(usize, T)>> {
    v.iter()
        .map(|(x, &a)| {
            k.index_of(x)
                .map(|i| (i, a))
                .ok_or_else(|| Error::SupportEscape(format!("{x:?}")))
        })
        .collect()
}

fn form<T: Scalar>(k: &DisplacementKernel<T>, terms: &[(usize, T)]) -> T {
    let mut total = T::zero();
    for &(i, a) in terms {
        for &(j, b) in terms {
            total += a * b * k.value(i, j);
        }
    }
    T::lit(-0.5) * total
}

/// `-1/2 Σ v(x) v(y) K(x, y)` without clamping.
pub fn squared_norm_f<T: Scalar>(v: &EVector<T>, k: &DisplacementKernel<T>) -> Result<T> {
    Ok(form(k, &support_indices(k, v)?))
}

pub fn norm_f<T: Scalar>(v: &EVector<T>, k: &DisplacementKernel<T>) -> Result<T> {
    clamped_sqrt(squared_norm_f(v, k)?, NORM_HARD_TOLERANCE)
}

/// `||v||_f + ||v||_1`.
pub fn norm_e<T: Scalar>(v: &EVector<T>, k: &DisplacementKernel<T>) -> Result<T> {
    Ok(norm_f(v, k)? + v.l1_norm())
}

/// `sqrt(M / 2) + 1`.
pub fn uniform_bound<T: Scalar>(m: T) -> Result<T> {
    if m < T::zero() {
        return Err(Error::NegativeConstant(m.as_f64()));
    }
    Ok(Float::sqrt(m / T::lit(2.0)) + T::one())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundCheck<T> {
    /// `||π(s)v||_f^2 - ||v||_f^2`.
    pub lhs: T,
    /// `(Δ / 2) ||v||_1^2`.
    pub rhs: T,
    /// Two-sided displacement excess of `s` on the support of `v`.
    pub excess: T,
    pub pass: bool,
}

/// Checks `||π(s)v||_f^2 - ||v||_f^2 <= (Δ/2) ||v||_1^2` with
/// `Δ = max_{x,y in supp v} |K(sx, sy) - K(x, y)|`.
///
/// The difference of forms is `-1/2 Σ v(x)v(y) (K(sx,sy) - K(x,y))`, and
/// `v(x)v(y)` takes both signs, so the excess has to be two-sided.
pub fn per_vector_bound_check<T: Scalar>(
    k: &DisplacementKernel<T>,
    group: &Group,
    s: &GroupElement,
    v: &EVector<T>,
) -> Result<BoundCheck<T>> {
    let terms = support_indices(k, v)?;
    let subset: Vec<usize> = terms.iter().map(|&(i, _)| i).collect();
    let excess = two_sided_excess(k, group, s, &subset)?;
    let moved = rep_apply(group, s, v)?;
    let lhs = squared_norm_f(&moved, k)? - form(k, &terms);
    let l1 = v.l1_norm();
    let rhs = excess / T::lit(2.0) * l1 * l1;
    Ok(BoundCheck {
        lhs,
        rhs,
        excess,
        pass: lhs <= rhs + T::lit(BOUND_CHECK_SLACK),
    })
}

#[derive(Clone, Debug)]
pub struct NormRow<T> {
    pub element: GroupElement,
    pub distance: usize,
    pub norm_f: T,
    pub norm_l1: T,
    pub norm_e: T,
    /// `sqrt(d(e, s)) + 2`.
    pub lower_bound: T,
}

#[derive(Clone, Debug)]
pub struct NormReport<T> {
    pub rows: Vec<NormRow<T>>,
    /// Whether the kernel's provenance guarantees the lower bound.
    pub lower_bound_enforced: bool,
    /// Rows below `lower_bound - 1e-9` when the bound is enforced.
    pub violations: Vec<GroupElement>,
}

/// Norm of `b(s)` for every `s != e` of the kernel's ball.
pub fn properness_report<T: Scalar>(k: &DisplacementKernel<T>) -> Result<NormReport<T>> {
    let enforced = k.provenance() == Provenance::Bicombing;
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for s in k.elements().iter().filter(|s| !s.is_identity()) {
        let b = cocycle::<T>(s);
        let nf = norm_f(&b, k)?;
        let l1 = b.l1_norm();
        let row = NormRow {
            element: s.clone(),
            distance: s.len(),
            norm_f: nf,
            norm_l1: l1,
            norm_e: nf + l1,
            lower_bound: Float::sqrt(T::lit(s.len() as f64)) + T::lit(2.0),
        };
        if enforced && row.norm_e < row.lower_bound - T::lit(LOWER_BOUND_SLACK) {
            violations.push(s.clone());
        }
        rows.push(row);
    }
    Ok(NormReport {
        rows,
        lower_bound_enforced: enforced,
        violations,
    })
}

/// CSV body `word,d,norm_f,norm_l1,norm_E,lower_bound`.
pub fn write_norm_csv<T: Scalar, W: Write>(
    report: &NormReport<T>,
    group: &Group,
    out: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["word", "d", "norm_f", "norm_l1", "norm_E", "lower_bound"])?;
    for row in &report.rows {
        w.write_record([
            group.format(&row.element),
            row.distance.to_string(),
            row.norm_f.to_string(),
            row.norm_l1.to_string(),
            row.norm_e.to_string(),
            row.lower_bound.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// One sampled instance of [`per_vector_bound_check`].
#[derive(Clone, Debug)]
pub struct SampledCheck<T> {
    pub s: GroupElement,
    pub v: EVector<T>,
    pub check: BoundCheck<T>,
}

/// Mean-zero vector with integer coefficients in `-3..=3` on up to
/// `max_support` distinct points of `pool`.
pub fn sample_vector<T: Scalar, R: rand::Rng>(
    rng: &mut R,
    pool: &[GroupElement],
    max_support: usize,
) -> EVector<T> {
    let size = rng.gen_range(2..=max_support.max(2).min(pool.len()));
    let points = rand::seq::index::sample(rng, pool.len(), size);
    let mut v = EVector::zero();
    let mut total = 0i64;
    for (n, p) in points.iter().enumerate() {
        let a = if n + 1 == size {
            -total
        } else {
            rng.gen_range(-3..=3)
        };
        total += a;
        v.add_term(pool[p].clone(), T::lit(a as f64));
    }
    v
}

/// Runs [`per_vector_bound_check`] on `count` seeded pairs `(s, v)` with
/// `s != e` from the kernel's ball and `v` supported where `s` keeps it
/// inside the ball.
pub fn sample_bound_checks<T: Scalar>(
    k: &DisplacementKernel<T>,
    group: &Group,
    count: usize,
    max_support: usize,
    seed: u64,
) -> Result<Vec<SampledCheck<T>>> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let candidates: Vec<&GroupElement> = k.elements().iter().filter(|s| !s.is_identity()).collect();
    if candidates.is_empty() {
        return Err(Error::Invalid(
            "kernel ball has no non-identity element".into(),
        ));
    }
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let s = candidates[rng.gen_range(0..candidates.len())];
        let map = crate::kernel::translation_map(k, group, s)?;
        let pool: Vec<GroupElement> = map
            .iter()
            .enumerate()
            .filter(|(_, t)| t.is_some())
            .map(|(i, _)| k.element(i).clone())
            .collect();
        if pool.len() < 2 {
            continue;
        }
        let v = sample_vector(&mut rng, &pool, max_support);
        let check = per_vector_bound_check(k, group, s, &v)?;
        out.push(SampledCheck {
            s: s.clone(),
            v,
            check,
        });
    }
    Ok(out)
}
