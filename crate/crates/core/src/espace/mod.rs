//! The normed space of mean-zero finitely supported functions on the group,
//! the left-translation representation and the cocycle `b(s) = δ_s - δ_e`.

mod norms;
mod opnorm;
mod vector;

pub use norms::{
    norm_e, norm_f, per_vector_bound_check, properness_report, sample_bound_checks, sample_vector,
    squared_norm_f, uniform_bound, write_norm_csv, BoundCheck, NormReport, NormRow, SampledCheck,
    NORM_HARD_TOLERANCE,
};
pub use opnorm::{
    op_norm_lower_bound, write_opnorm_csv, OpNormEstimate, OpNormRow, OptimizerConfig,
};
pub use vector::EVector;

use crate::group::{Group, GroupElement};
use crate::{Result, Scalar};

/// `b(s) = δ_s - δ_e`, zero at the identity.
pub fn cocycle<T: Scalar>(s: &GroupElement) -> EVector<T> {
    let mut v = EVector::delta(s.clone());
    v.add_term(GroupElement::identity(), -T::one());
    v
}

/// `(π(s)v)(x) = v(s^-1 x)`, i.e. the support moves left by `s`.
pub fn rep_apply<T: Scalar>(group: &Group, s: &GroupElement, v: &EVector<T>) -> Result<EVector<T>> {
    let mut out = EVector::zero();
    for (x, &a) in v.iter() {
        out.add_term(group.multiply(s, x)?, a);
    }
    Ok(out)
}

/// Largest coefficient of `b(st) - π(s)b(t) - b(s)`.
pub fn check_cocycle_identity<T: Scalar>(
    group: &Group,
    s: &GroupElement,
    t: &GroupElement,
) -> Result<T> {
    let st = group.multiply(s, t)?;
    let residual = &(&cocycle::<T>(&st) - &rep_apply(group, s, &cocycle(t))?) - &cocycle(s);
    Ok(residual.max_abs())
}
