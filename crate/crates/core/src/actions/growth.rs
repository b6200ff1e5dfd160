use std::fmt;

use crate::espace::{properness_report, NormReport};
use crate::kernel::DisplacementKernel;
use crate::{Result, Scalar};

/// Fitted constants at or below this count as no growth.
pub const GROWTH_THRESHOLD: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrowthVerdict {
    UnboundedOnScannedRange,
    BoundedOnScannedRange,
}

impl fmt::Display for GrowthVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GrowthVerdict::UnboundedOnScannedRange => "unbounded on scanned range",
            GrowthVerdict::BoundedOnScannedRange => "bounded on scanned range",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphereGrowth {
    pub radius: usize,
    pub elements: usize,
    /// Largest `||b(s)||_E` over the scanned part of the sphere.
    pub max_norm_e: f64,
}

#[derive(Clone, Debug)]
pub struct GrowthReport<T> {
    pub norms: NormReport<T>,
    pub spheres: Vec<SphereGrowth>,
    /// Largest `c` with `max_n >= sqrt(c n) + 2` on every scanned sphere.
    pub fitted_c: f64,
    pub verdict: GrowthVerdict,
}

/// Norm rows of `b(s)` and a `sqrt(c n) + 2` fit of the per-sphere maxima.
///
/// `subset` restricts the scan to some kernel indices, e.g. a subgroup.
/// A finite scan only ever supports a statement about the scanned range.
pub fn orbit_growth_report<T: Scalar>(
    k: &DisplacementKernel<T>,
    subset: Option<&[usize]>,
) -> Result<GrowthReport<T>> {
    let mut norms = properness_report(k)?;
    if let Some(subset) = subset {
        let keep: std::collections::HashSet<&_> = subset.iter().map(|&i| k.element(i)).collect();
        norms.rows.retain(|r| keep.contains(&r.element));
        norms.violations.retain(|s| keep.contains(s));
    }
    let mut spheres: Vec<SphereGrowth> = Vec::new();
    for row in &norms.rows {
        let e = row.norm_e.as_f64();
        match spheres.iter_mut().find(|s| s.radius == row.distance) {
            Some(s) => {
                s.elements += 1;
                s.max_norm_e = s.max_norm_e.max(e);
            }
            None => spheres.push(SphereGrowth {
                radius: row.distance,
                elements: 1,
                max_norm_e: e,
            }),
        }
    }
    spheres.sort_by_key(|s| s.radius);
    let fitted_c = spheres
        .iter()
        .map(|s| (s.max_norm_e - 2.0).max(0.0).powi(2) / s.radius as f64)
        .fold(f64::INFINITY, f64::min);
    let fitted_c = if fitted_c.is_finite() { fitted_c } else { 0.0 };
    let verdict = if fitted_c > GROWTH_THRESHOLD {
        GrowthVerdict::UnboundedOnScannedRange
    } else {
        GrowthVerdict::BoundedOnScannedRange
    };
    Ok(GrowthReport {
        norms,
        spheres,
        fitted_c,
        verdict,
    })
}
