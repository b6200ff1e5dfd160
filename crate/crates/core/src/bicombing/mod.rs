//! Equivariant bicombings and their measured constants.
//!
//! A bicombing assigns to each ordered pair `(x, y)` a 1-chain `q[x, y]`
//! with boundary `y - x`. All kinds here are defined from a path
//! `q[e, z]` along the normal form of `z` and translated, so
//! `q[x, y] = x . q[e, x^-1 y]` and equivariance holds by construction.

mod area;
mod chain;

use std::fmt;
use std::str::FromStr;

pub use area::{
    empirical_area_constant, quasi_geodesic_constants, AreaEstimate, QuasiGeodesicReport,
    SamplingPolicy,
};
pub use chain::{Chain1, Coefficient, OrientedEdge};

use crate::group::{Group, GroupElement, ReductionMode};
use crate::{Error, Rational, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BicombingKind {
    /// Unique geodesics in a free group's Cayley tree.
    TreeGeodesic,
    /// The shortlex-least geodesic path; tie-breaks follow the generator order.
    Shortlex,
    /// `(q[x, y] - q[y, x]) / 2` of the shortlex bicombing.
    ShortlexAntisymmetrized,
}

impl BicombingKind {
    pub fn name(self) -> &'static str {
        match self {
            BicombingKind::TreeGeodesic => "tree",
            BicombingKind::Shortlex => "shortlex",
            BicombingKind::ShortlexAntisymmetrized => "shortlex-anti",
        }
    }
}

impl fmt::Display for BicombingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BicombingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tree" | "tree_geodesic" => Ok(BicombingKind::TreeGeodesic),
            "shortlex" => Ok(BicombingKind::Shortlex),
            "shortlex-anti" | "shortlex_antisymmetrized" => {
                Ok(BicombingKind::ShortlexAntisymmetrized)
            }
            other => Err(Error::Invalid(format!("unknown bicombing kind '{other}'"))),
        }
    }
}

/// A bicombing on the Cayley graph of `group`.
#[derive(Clone, Copy, Debug)]
pub struct Bicombing<'g> {
    group: &'g Group,
    kind: BicombingKind,
}

impl<'g> Bicombing<'g> {
    pub fn new(group: &'g Group, kind: BicombingKind) -> Result<Bicombing<'g>> {
        if kind == BicombingKind::TreeGeodesic && group.presentation().mode() != ReductionMode::Free
        {
            return Err(Error::IncompatibleBicombing {
                kind: kind.to_string(),
                reason: format!(
                    "requires a free presentation, got mode {}",
                    group.presentation().mode()
                ),
            });
        }
        Ok(Bicombing { group, kind })
    }

    pub fn group(&self) -> &'g Group {
        self.group
    }

    pub fn kind(&self) -> BicombingKind {
        self.kind
    }

    /// `q[y, x] = -q[x, y]` holds exactly. Tree geodesics are unique, so
    /// the tree bicombing is antisymmetric without averaging.
    pub fn is_antisymmetric(&self) -> bool {
        self.kind != BicombingKind::Shortlex
    }

    /// Chains are computed inside a precomputed ball (Dehn mode).
    pub fn is_ball_relative(&self) -> bool {
        !self.group.has_global_normal_forms()
    }

    /// Coefficients are integers.
    pub fn is_integral(&self) -> bool {
        self.kind != BicombingKind::ShortlexAntisymmetrized
    }

    /// The averaged bicombing `(q[x, y] - q[y, x]) / 2`.
    pub fn antisymmetrize(&self) -> Bicombing<'g> {
        let kind = match self.kind {
            BicombingKind::TreeGeodesic => BicombingKind::TreeGeodesic,
            _ => BicombingKind::ShortlexAntisymmetrized,
        };
        Bicombing {
            group: self.group,
            kind,
        }
    }

    /// The underlying path `x . q[e, x^-1 y]`.
    pub fn path_chain(&self, x: &GroupElement, y: &GroupElement) -> Result<Chain1<Rational>> {
        if x == y {
            return Ok(Chain1::zero());
        }
        let z = self.group.difference(x, y)?;
        Chain1::path(self.group, x, z.letters())
    }

    /// `q[x, y]`.
    pub fn combing_chain(&self, x: &GroupElement, y: &GroupElement) -> Result<Chain1<Rational>> {
        match self.kind {
            BicombingKind::TreeGeodesic | BicombingKind::Shortlex => self.path_chain(x, y),
            BicombingKind::ShortlexAntisymmetrized => {
                let forward = self.path_chain(x, y)?;
                let backward = self.path_chain(y, x)?;
                Ok((&forward - &backward).scale(&Rational::new(1, 2)))
            }
        }
    }

    /// `|| q[x, y] + q[y, z] + q[z, x] ||_1`.
    pub fn area(&self, x: &GroupElement, y: &GroupElement, z: &GroupElement) -> Result<Rational> {
        let mut c = self.combing_chain(x, y)?;
        c += &self.combing_chain(y, z)?;
        c += &self.combing_chain(z, x)?;
        Ok(c.l1_norm())
    }
}
