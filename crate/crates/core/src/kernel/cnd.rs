use nalgebra::{DMatrix, SymmetricEigen};
use num_traits::Float;

use super::DisplacementKernel;
use crate::{Error, Result, Scalar};

const EIGEN_MAX_ITERATIONS: usize = 10_000;

/// Smallest eigenvalue of `-K_S / 2` restricted to mean-zero vectors.
///
/// The form is pulled back along an orthonormal (Helmert) basis of the
/// mean-zero subspace, so a conditionally negative `K` gives a value
/// `>= 0` up to rounding.
pub fn cnd_min_eigenvalue<T: Scalar>(k: &DisplacementKernel<T>, subset: &[usize]) -> Result<T> {
    Ok(cnd_certificate(k, subset)?.0)
}

/// [`cnd_min_eigenvalue`] together with a unit mean-zero vector on `subset`
/// attaining it. A negative value makes the vector a witness with
/// `sum v(x) v(y) K(x, y) > 0`.
pub fn cnd_certificate<T: Scalar>(
    k: &DisplacementKernel<T>,
    subset: &[usize],
) -> Result<(T, Vec<T>)> {
    let m = subset.len();
    if m < 2 {
        return Err(Error::Invalid(format!(
            "conditional negativity needs at least two points, got {m}"
        )));
    }
    let half = T::lit(-0.5);
    let a = DMatrix::<T>::from_fn(m, m, |i, j| half * k.value(subset[i], subset[j]));
    let q = helmert_basis::<T>(m);
    let form = q.transpose() * a * &q;
    let eig = SymmetricEigen::try_new(form, T::default_epsilon(), EIGEN_MAX_ITERATIONS)
        .ok_or(Error::EigenFailure(m))?;
    let mut best = 0;
    for (i, &v) in eig.eigenvalues.iter().enumerate() {
        if v < eig.eigenvalues[best] {
            best = i;
        }
    }
    let vector = &q * eig.eigenvectors.column(best);
    Ok((eig.eigenvalues[best], vector.iter().copied().collect()))
}

/// `m x (m - 1)` matrix with orthonormal columns spanning `{v : sum v = 0}`.
pub(crate) fn helmert_basis<T: Scalar>(m: usize) -> DMatrix<T> {
    DMatrix::from_fn(m, m - 1, |i, c| {
        let k = c + 1;
        let norm = Float::sqrt(T::lit((k * (k + 1)) as f64));
        if i < k {
            T::one() / norm
        } else if i == k {
            -T::lit(k as f64) / norm
        } else {
            T::zero()
        }
    })
}
