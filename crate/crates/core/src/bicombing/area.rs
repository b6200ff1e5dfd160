use std::collections::HashMap;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Bicombing, Chain1, OrientedEdge};
use crate::group::{CayleyBall, GroupElement};
use crate::{Rational, Result};

/// Which vertex triples an area scan visits.
#[derive(Clone, Copy, Debug)]
pub struct SamplingPolicy {
    /// Scan every triple when `n^3` is at most this many.
    pub exhaustive_limit: u64,
    /// Number of uniformly sampled ordered triples otherwise.
    pub samples: usize,
    pub seed: u64,
}

impl Default for SamplingPolicy {
    fn default() -> Self {
        SamplingPolicy {
            exhaustive_limit: 100_000_000,
            samples: 5000,
            seed: 0,
        }
    }
}

impl SamplingPolicy {
    pub fn exhaustive() -> Self {
        SamplingPolicy {
            exhaustive_limit: u64::MAX,
            ..Self::default()
        }
    }

    pub fn sampled(samples: usize, seed: u64) -> Self {
        SamplingPolicy {
            exhaustive_limit: 0,
            samples,
            seed,
        }
    }
}

#[derive(Clone, Debug)]
pub struct AreaEstimate {
    /// Maximum area over the scanned triples.
    pub constant: Rational,
    /// A triple attaining the maximum (least in scan order).
    pub witness: [GroupElement; 3],
    pub triples: u64,
    pub exhaustive: bool,
    /// The chains were computed inside a precomputed ball.
    pub ball_relative: bool,
}

/// Chains as sorted `(edge id, coefficient * scale)` lists for fast sums.
struct PairCache {
    n: usize,
    chains: Vec<Vec<(u32, i64)>>,
}

impl PairCache {
    fn build(b: &Bicombing<'_>, ball: &CayleyBall, scale: i64) -> Result<PairCache> {
        let n = ball.len();
        let mut ids: HashMap<OrientedEdge, u32> = HashMap::new();
        let mut intern = |c: &Chain1<Rational>| -> Vec<(u32, i64)> {
            let mut v: Vec<(u32, i64)> = c
                .iter()
                .map(|(e, a)| {
                    let next = ids.len() as u32;
                    let id = *ids.entry(e.clone()).or_insert(next);
                    (id, (a * Rational::from_integer(scale)).to_integer())
                })
                .collect();
            v.sort_unstable();
            v
        };
        let mut chains: Vec<Vec<(u32, i64)>> = vec![Vec::new(); n * n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                if b.is_antisymmetric() && j < i {
                    chains[i * n + j] = chains[j * n + i].iter().map(|&(e, a)| (e, -a)).collect();
                    continue;
                }
                let c = b.combing_chain(ball.element(i), ball.element(j))?;
                chains[i * n + j] = intern(&c);
            }
        }
        Ok(PairCache { n, chains })
    }

    fn area(&self, i: usize, j: usize, k: usize, scratch: &mut Vec<(u32, i64)>) -> i64 {
        scratch.clear();
        scratch.extend_from_slice(&self.chains[i * self.n + j]);
        scratch.extend_from_slice(&self.chains[j * self.n + k]);
        scratch.extend_from_slice(&self.chains[k * self.n + i]);
        scratch.sort_unstable_by_key(|&(e, _)| e);
        let mut total = 0;
        let mut idx = 0;
        while idx < scratch.len() {
            let edge = scratch[idx].0;
            let mut sum = 0;
            while idx < scratch.len() && scratch[idx].0 == edge {
                sum += scratch[idx].1;
                idx += 1;
            }
            total += sum.abs();
        }
        total
    }
}

/// Maximum of `area(x, y, z)` over the policy's triples of `ball`.
///
/// Exhaustive scans use cyclic invariance of the area and visit only
/// triples whose first index is the smallest.
pub fn empirical_area_constant(
    b: &Bicombing<'_>,
    ball: &CayleyBall,
    policy: &SamplingPolicy,
) -> Result<AreaEstimate> {
    let n = ball.len();
    let total = (n as u64).saturating_pow(3);
    let e = GroupElement::identity();
    let mut best = Rational::zero();
    let mut witness = [e.clone(), e.clone(), e];
    let mut triples = 0u64;

    if total <= policy.exhaustive_limit {
        // Antisymmetrized coefficients are halves; doubling makes them integral.
        let scale = if b.is_integral() { 1 } else { 2 };
        let cache = PairCache::build(b, ball, scale)?;
        let mut scratch = Vec::new();
        let mut best_scaled = -1i64;
        let mut arg = (0, 0, 0);
        for i in 0..n {
            for j in i..n {
                for k in i..n {
                    let a = cache.area(i, j, k, &mut scratch);
                    triples += 1;
                    if a > best_scaled {
                        best_scaled = a;
                        arg = (i, j, k);
                    }
                }
            }
        }
        best = Rational::new(best_scaled.max(0), scale);
        witness = [
            ball.element(arg.0).clone(),
            ball.element(arg.1).clone(),
            ball.element(arg.2).clone(),
        ];
        return Ok(AreaEstimate {
            constant: best,
            witness,
            triples,
            exhaustive: true,
            ball_relative: b.is_ball_relative(),
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(policy.seed);
    let mut best_idx: Option<(usize, usize, usize)> = None;
    for _ in 0..policy.samples {
        let (i, j, k) = (
            rng.gen_range(0..n),
            rng.gen_range(0..n),
            rng.gen_range(0..n),
        );
        let a = b.area(ball.element(i), ball.element(j), ball.element(k))?;
        triples += 1;
        let better = match best_idx {
            None => true,
            Some(prev) => a > best || (a == best && (i, j, k) < prev),
        };
        if better {
            best = a;
            best_idx = Some((i, j, k));
        }
    }
    if let Some((i, j, k)) = best_idx {
        witness = [
            ball.element(i).clone(),
            ball.element(j).clone(),
            ball.element(k).clone(),
        ];
    }
    Ok(AreaEstimate {
        constant: best,
        witness,
        triples,
        exhaustive: false,
        ball_relative: b.is_ball_relative(),
    })
}

#[derive(Clone, Debug)]
pub struct QuasiGeodesicReport {
    /// `max ||q[x, y]||_1 / d(x, y)` over scanned pairs with `x != y`.
    pub multiplicative: Rational,
    /// `max ||q[x, y]||_1 - d(x, y)`.
    pub additive: Rational,
    pub pairs: usize,
    /// Pairs where `||q[x, y]||_1 < d(x, y)`; must be empty.
    pub lower_bound_violations: Vec<(GroupElement, GroupElement)>,
}

/// Scans all ordered pairs of `ball`. The two returned constants are the
/// tight envelopes `||q|| <= lambda d` and `||q|| <= d + c`.
pub fn quasi_geodesic_constants(
    b: &Bicombing<'_>,
    ball: &CayleyBall,
) -> Result<QuasiGeodesicReport> {
    let g = b.group();
    let mut multiplicative = Rational::zero();
    let mut additive = Rational::zero();
    let mut violations = Vec::new();
    let mut pairs = 0;
    for x in ball.elements() {
        for y in ball.elements() {
            let norm = b.combing_chain(x, y)?.l1_norm();
            let d = Rational::from_integer(g.difference(x, y)?.len() as i64);
            pairs += 1;
            if norm < d {
                violations.push((x.clone(), y.clone()));
            }
            if d.is_positive() {
                multiplicative = multiplicative.max(norm / d);
            }
            additive = additive.max(norm - d);
        }
    }
    Ok(QuasiGeodesicReport {
        multiplicative,
        additive,
        pairs,
        lower_bound_violations: violations,
    })
}
