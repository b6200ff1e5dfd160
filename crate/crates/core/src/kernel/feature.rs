//! The coordinate embedding `J` of integral chains into a space of
//! `{0, +-1}`-valued functions, under which `||J(c) - J(c')||^2 = ||c - c'||_1`.

use std::collections::BTreeSet;

use crate::bicombing::{Chain1, OrientedEdge};
use crate::group::Presentation;
use crate::{Rational, Result};

/// Support of `J(c)`. Slot `k >= 1` carries `+1`, slot `k <= 0` carries `-1`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FeatureVector {
    slots: BTreeSet<(OrientedEdge, i64)>,
}

impl FeatureVector {
    /// Coefficient `a > 0` fills slots `1..=a`; `a < 0` fills `a+1..=0`.
    pub fn from_integer_chain(c: &Chain1<i64>) -> FeatureVector {
        let mut slots = BTreeSet::new();
        for (edge, &a) in c.iter() {
            let range = if a > 0 { 1..=a } else { a + 1..=0 };
            for k in range {
                slots.insert((edge.clone(), k));
            }
        }
        FeatureVector { slots }
    }

    pub fn support_size(&self) -> usize {
        self.slots.len()
    }

    /// Every coordinate is `+-1`, so this is the symmetric difference size.
    pub fn squared_norm(&self) -> i64 {
        self.slots.len() as i64
    }

    pub fn squared_distance(&self, other: &FeatureVector) -> i64 {
        self.slots.symmetric_difference(&other.slots).count() as i64
    }

    pub fn value(&self, edge: &OrientedEdge, slot: i64) -> i8 {
        match self.slots.contains(&(edge.clone(), slot)) {
            false => 0,
            true if slot >= 1 => 1,
            true => -1,
        }
    }
}

/// Fails with `NonIntegerCoefficient` unless every coefficient is integral.
pub fn feature_embed(c: &Chain1<Rational>, p: &Presentation) -> Result<FeatureVector> {
    Ok(FeatureVector::from_integer_chain(&c.to_integer(p)?))
}
