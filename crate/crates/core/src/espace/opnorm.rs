use std::io::Write;

use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::EVector;
use crate::group::{Group, GroupElement};
use crate::kernel::DisplacementKernel;
use crate::scalar::clamped_sqrt;
use crate::{Error, Result, Scalar};

use super::norms::NORM_HARD_TOLERANCE;

/// Multi-start perturbation ascent. The step starts at `initial_step`
/// (relative to `||v||_1 = 1`) and halves every `decay_every` iterations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub iterations: usize,
    pub decay_every: usize,
    pub initial_step: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            restarts: 32,
            iterations: 500,
            decay_every: 50,
            initial_step: 0.5,
            seed: 0,
        }
    }
}

/// A lower bound for `||π(s)||` restricted to vectors supported on a
/// subset, never the norm itself.
#[derive(Clone, Debug)]
pub struct OpNormEstimate<T> {
    pub best: T,
    pub iterations: usize,
    pub seed: u64,
    pub witness: EVector<T>,
}

struct Ratio<'a, T> {
    before: &'a [T],
    after: &'a [T],
    m: usize,
}

impl<T: Scalar> Ratio<'_, T> {
    fn norm_e(matrix: &[T], v: &[T], m: usize) -> Result<T> {
        let mut total = T::zero();
        let mut l1 = T::zero();
        for i in 0..m {
            let mut row = T::zero();
            for j in 0..m {
                row += matrix[i * m + j] * v[j];
            }
            total += v[i] * row;
            l1 += Float::abs(v[i]);
        }
        Ok(clamped_sqrt(T::lit(-0.5) * total, NORM_HARD_TOLERANCE)? + l1)
    }

    fn eval(&self, v: &[T]) -> Result<T> {
        Ok(Self::norm_e(self.after, v, self.m)? / Self::norm_e(self.before, v, self.m)?)
    }
}

fn random_direction<T: Scalar>(rng: &mut ChaCha8Rng, m: usize) -> Vec<T> {
    let mut v: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mean = v.iter().sum::<f64>() / m as f64;
    v.iter_mut().for_each(|x| *x -= mean);
    let l1: f64 = v.iter().map(|x| x.abs()).sum();
    v.iter().map(|&x| T::lit(x / l1)).collect()
}

/// Maximizes `||π(s)v||_E / ||v||_E` over mean-zero `v` supported on
/// `support`. Every move adds `δ` to one coordinate and subtracts it from
/// another, so iterates stay mean zero.
pub fn op_norm_lower_bound<T: Scalar>(
    k: &DisplacementKernel<T>,
    group: &Group,
    s: &GroupElement,
    support: &[GroupElement],
    config: &OptimizerConfig,
) -> Result<OpNormEstimate<T>> {
    let m = support.len();
    if m < 2 {
        return Err(Error::Invalid(
            "operator norm probe needs at least two support points".into(),
        ));
    }
    let lookup = |x: &GroupElement| {
        k.index_of(x)
            .ok_or_else(|| Error::SupportEscape(group.format(x)))
    };
    let base: Vec<usize> = support.iter().map(lookup).collect::<Result<_>>()?;
    let moved: Vec<usize> = support
        .iter()
        .map(|x| lookup(&group.multiply(s, x)?))
        .collect::<Result<_>>()?;
    let before: Vec<T> = (0..m * m)
        .map(|c| k.value(base[c / m], base[c % m]))
        .collect();
    let after: Vec<T> = (0..m * m)
        .map(|c| k.value(moved[c / m], moved[c % m]))
        .collect();
    let ratio = Ratio {
        before: &before,
        after: &after,
        m,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut best = T::neg_infinity();
    let mut best_v = vec![T::zero(); m];
    let mut iterations = 0;
    for _ in 0..config.restarts {
        let mut v: Vec<T> = random_direction(&mut rng, m);
        let mut value = ratio.eval(&v)?;
        let mut step = config.initial_step;
        for it in 0..config.iterations {
            if it > 0 && config.decay_every > 0 && it % config.decay_every == 0 {
                step /= 2.0;
            }
            let i = rng.gen_range(0..m);
            let j = (i + rng.gen_range(1..m)) % m;
            let delta = T::lit(step * rng.gen_range(-1.0..1.0));
            let (old_i, old_j) = (v[i], v[j]);
            v[i] += delta;
            v[j] -= delta;
            let candidate = ratio.eval(&v)?;
            if candidate > value {
                value = candidate;
            } else {
                v[i] = old_i;
                v[j] = old_j;
            }
            iterations += 1;
        }
        if value > best {
            best = value;
            best_v = v;
        }
    }
    Ok(OpNormEstimate {
        best,
        iterations,
        seed: config.seed,
        witness: EVector::from_terms(support.iter().cloned().zip(best_v)),
    })
}

#[derive(Clone, Debug)]
pub struct OpNormRow<T> {
    pub element: GroupElement,
    pub estimate: OpNormEstimate<T>,
    pub theoretical_upper: T,
}

/// CSV body `word,lower_bound_found,theoretical_upper,iters,seed`.
pub fn write_opnorm_csv<T: Scalar, W: Write>(
    rows: &[OpNormRow<T>],
    group: &Group,
    out: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "word",
        "lower_bound_found",
        "theoretical_upper",
        "iters",
        "seed",
    ])?;
    for row in rows {
        w.write_record([
            group.format(&row.element),
            row.estimate.best.to_string(),
            row.theoretical_upper.to_string(),
            row.estimate.iterations.to_string(),
            row.estimate.seed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
