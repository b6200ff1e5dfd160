use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use num_traits::Float;

use crate::group::GroupElement;
use crate::Scalar;

/// A finitely supported function on the group. Zero values are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct EVector<T> {
    coefficients: BTreeMap<GroupElement, T>,
}

impl<T: Scalar> Default for EVector<T> {
    fn default() -> Self {
        EVector::zero()
    }
}

impl<T: Scalar> EVector<T> {
    pub fn zero() -> EVector<T> {
        EVector {
            coefficients: BTreeMap::new(),
        }
    }

    pub fn delta(x: GroupElement) -> EVector<T> {
        EVector::from_terms([(x, T::one())])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (GroupElement, T)>) -> EVector<T> {
        let mut v = EVector::zero();
        for (x, a) in terms {
            v.add_term(x, a);
        }
        v
    }

    pub fn add_term(&mut self, x: GroupElement, a: T) {
        let entry = self.coefficients.entry(x);
        match entry {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = *o.get() + a;
                if sum == T::zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
            std::collections::btree_map::Entry::Vacant(slot) => {
                if a != T::zero() {
                    slot.insert(a);
                }
            }
        }
    }

    pub fn coefficient(&self, x: &GroupElement) -> T {
        self.coefficients.get(x).copied().unwrap_or_else(T::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GroupElement, &T)> {
        self.coefficients.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &GroupElement> {
        self.coefficients.keys()
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn sum(&self) -> T {
        self.coefficients
            .values()
            .fold(T::zero(), |acc, &a| acc + a)
    }

    pub fn l1_norm(&self) -> T {
        self.coefficients
            .values()
            .fold(T::zero(), |acc, &a| acc + Float::abs(a))
    }

    pub fn max_abs(&self) -> T {
        self.coefficients
            .values()
            .fold(T::zero(), |acc, &a| Float::max(acc, Float::abs(a)))
    }

    pub fn scale(&self, c: T) -> EVector<T> {
        EVector::from_terms(self.iter().map(|(x, &a)| (x.clone(), c * a)))
    }
}

impl<T: Scalar> Add for &EVector<T> {
    type Output = EVector<T>;

    fn add(self, rhs: &EVector<T>) -> EVector<T> {
        let mut out = self.clone();
        for (x, &a) in rhs.iter() {
            out.add_term(x.clone(), a);
        }
        out
    }
}

impl<T: Scalar> Neg for &EVector<T> {
    type Output = EVector<T>;

    fn neg(self) -> EVector<T> {
        self.scale(-T::one())
    }
}

impl<T: Scalar> Sub for &EVector<T> {
    type Output = EVector<T>;

    fn sub(self, rhs: &EVector<T>) -> EVector<T> {
        self + &(-rhs)
    }
}
