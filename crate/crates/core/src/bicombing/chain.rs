use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};

use num_traits::{Num, Signed};

use crate::group::{Group, GroupElement, Letter, Presentation};
use crate::{Error, Rational, Result};

/// Coefficient ring of a chain: `i64` or [`Rational`].
pub trait Coefficient: Clone + Num + Signed + PartialOrd + fmt::Display + fmt::Debug {}

impl<T: Clone + Num + Signed + PartialOrd + fmt::Display + fmt::Debug> Coefficient for T {}

/// An edge of the Cayley graph in its canonical orientation: from `source`
/// to `source * g` for a positive generator `g`. Traversals against the
/// orientation are recorded as negative coefficients.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct OrientedEdge {
    source: GroupElement,
    generator: usize,
}

impl OrientedEdge {
    pub fn new(source: GroupElement, generator: usize) -> OrientedEdge {
        OrientedEdge { source, generator }
    }

    pub fn source(&self) -> &GroupElement {
        &self.source
    }

    pub fn generator(&self) -> usize {
        self.generator
    }

    pub fn label(&self) -> Letter {
        Letter::new(self.generator, false)
    }

    pub fn target(&self, group: &Group) -> Result<GroupElement> {
        group.multiply_letter(&self.source, self.label())
    }

    pub fn translate(&self, group: &Group, s: &GroupElement) -> Result<OrientedEdge> {
        Ok(OrientedEdge {
            source: group.multiply(s, &self.source)?,
            generator: self.generator,
        })
    }

    pub fn format(&self, p: &Presentation) -> String {
        format!(
            "({}, {})",
            p.format_word(self.source.letters()),
            p.generators()[self.generator]
        )
    }
}

/// A finitely supported 1-chain on the Cayley graph. Zero coefficients are
/// never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Chain1<C> {
    coefficients: BTreeMap<OrientedEdge, C>,
}

impl<C: Coefficient> Default for Chain1<C> {
    fn default() -> Self {
        Chain1::zero()
    }
}

impl<C: Coefficient> Chain1<C> {
    pub fn zero() -> Chain1<C> {
        Chain1 {
            coefficients: BTreeMap::new(),
        }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (OrientedEdge, C)>) -> Chain1<C> {
        let mut c = Chain1::zero();
        for (e, a) in terms {
            c.add_term(e, a);
        }
        c
    }

    /// The edge path starting at `start` and reading `word` letter by letter.
    pub fn path(group: &Group, start: &GroupElement, word: &[Letter]) -> Result<Chain1<C>> {
        let mut chain = Chain1::zero();
        let mut v = start.clone();
        for &l in word {
            let w = group.multiply_letter(&v, l)?;
            if l.is_inverse() {
                chain.add_term(OrientedEdge::new(w.clone(), l.generator()), -C::one());
            } else {
                chain.add_term(OrientedEdge::new(v, l.generator()), C::one());
            }
            v = w;
        }
        Ok(chain)
    }

    pub fn add_term(&mut self, edge: OrientedEdge, a: C) {
        if a.is_zero() {
            return;
        }
        let entry = self.coefficients.entry(edge);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(a);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + a;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn coefficient(&self, edge: &OrientedEdge) -> C {
        self.coefficients.get(edge).cloned().unwrap_or_else(C::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&OrientedEdge, &C)> {
        self.coefficients.iter()
    }

    /// Number of edges in the support.
    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Sum of absolute coefficients.
    pub fn l1_norm(&self) -> C {
        self.coefficients
            .values()
            .fold(C::zero(), |acc, a| acc + a.abs())
    }

    pub fn scale(&self, factor: &C) -> Chain1<C> {
        Chain1::from_terms(
            self.coefficients
                .iter()
                .map(|(e, a)| (e.clone(), a.clone() * factor.clone())),
        )
    }

    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Chain1<D> {
        Chain1::from_terms(self.coefficients.iter().map(|(e, a)| (e.clone(), f(a))))
    }

    /// Left translation `s . c`: every edge `(x, g)` becomes `(s x, g)`.
    pub fn translate(&self, group: &Group, s: &GroupElement) -> Result<Chain1<C>> {
        if s.is_identity() {
            return Ok(self.clone());
        }
        let mut out = BTreeMap::new();
        for (e, a) in &self.coefficients {
            out.insert(e.translate(group, s)?, a.clone());
        }
        Ok(Chain1 { coefficients: out })
    }

    /// `(dc)(v)` = incoming minus outgoing coefficient mass at `v`.
    pub fn boundary(&self, group: &Group) -> Result<BTreeMap<GroupElement, C>> {
        let mut out: BTreeMap<GroupElement, C> = BTreeMap::new();
        let mut bump = |v: GroupElement, a: C| {
            let slot = out.entry(v).or_insert_with(C::zero);
            *slot = slot.clone() + a;
        };
        for (e, a) in &self.coefficients {
            bump(e.target(group)?, a.clone());
            bump(e.source.clone(), -a.clone());
        }
        out.retain(|_, a| !a.is_zero());
        Ok(out)
    }

    /// One line per edge, `sourceWord letter coefficient`, sorted by
    /// (source, letter).
    pub fn dump(&self, p: &Presentation) -> String {
        let mut s = String::new();
        for (e, a) in &self.coefficients {
            s.push_str(&format!(
                "{} {} {}\n",
                p.format_word(e.source.letters()),
                p.generators()[e.generator],
                a
            ));
        }
        s
    }
}

impl Chain1<Rational> {
    /// Converts to integer coefficients, failing on any fraction.
    pub fn to_integer(&self, p: &Presentation) -> Result<Chain1<i64>> {
        let mut out = BTreeMap::new();
        for (e, a) in &self.coefficients {
            if !a.is_integer() {
                return Err(Error::NonIntegerCoefficient {
                    coefficient: a.to_string(),
                    edge: e.format(p),
                });
            }
            out.insert(e.clone(), a.to_integer());
        }
        Ok(Chain1 { coefficients: out })
    }
}

impl<C: Coefficient> AddAssign<&Chain1<C>> for Chain1<C> {
    fn add_assign(&mut self, rhs: &Chain1<C>) {
        for (e, a) in &rhs.coefficients {
            self.add_term(e.clone(), a.clone());
        }
    }
}

impl<C: Coefficient> Add for &Chain1<C> {
    type Output = Chain1<C>;

    fn add(self, rhs: &Chain1<C>) -> Chain1<C> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<C: Coefficient> Neg for &Chain1<C> {
    type Output = Chain1<C>;

    fn neg(self) -> Chain1<C> {
        Chain1 {
            coefficients: self
                .coefficients
                .iter()
                .map(|(e, a)| (e.clone(), -a.clone()))
                .collect(),
        }
    }
}

impl<C: Coefficient> Sub for &Chain1<C> {
    type Output = Chain1<C>;

    fn sub(self, rhs: &Chain1<C>) -> Chain1<C> {
        let mut out = self.clone();
        out += &-rhs;
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type Q = Rational;

    fn random_chain(g: &Group, seed: &[(u8, u8, i8)]) -> Chain1<Q> {
        let ball = g.ball(2).unwrap();
        Chain1::from_terms(seed.iter().map(|&(i, gen, a)| {
            let x = ball.element(i as usize % ball.len()).clone();
            (OrientedEdge::new(x, gen as usize % 2), Q::new(a as i64, 2))
        }))
    }

    #[test]
    fn path_records_reverse_traversals_negatively() {
        let g = Group::free(2);
        let e = g.identity();
        let a = g.element("a").unwrap();
        let c: Chain1<i64> =
            Chain1::path(&g, &a, &g.presentation().parse_word("A").unwrap()).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.coefficient(&OrientedEdge::new(e, 0)), -1);
    }

    #[test]
    fn dump_format() {
        let g = Group::free(2);
        let c: Chain1<Q> = Chain1::path(
            &g,
            &g.identity(),
            &g.presentation().parse_word("aB").unwrap(),
        )
        .unwrap()
        .scale(&Q::new(1, 2));
        assert_eq!(c.dump(g.presentation()), "1 a 1/2\naB b -1/2\n");
    }

    #[test]
    fn zero_chain_has_no_boundary_and_no_norm() {
        let g = Group::free(2);
        let c: Chain1<Q> = Chain1::zero();
        assert!(c.boundary(&g).unwrap().is_empty());
        assert_eq!(c.l1_norm(), Q::from_integer(0));
    }

    #[test]
    fn non_integer_coefficient_is_rejected() {
        let g = Group::free(2);
        let c = Chain1::from_terms([(OrientedEdge::new(g.identity(), 0), Q::new(1, 2))]);
        assert!(matches!(
            c.to_integer(g.presentation()),
            Err(Error::NonIntegerCoefficient { .. })
        ));
    }

    proptest! {
        #[test]
        fn boundary_is_linear(a in prop::collection::vec((any::<u8>(), any::<u8>(), -3i8..=3), 0..8),
                              b in prop::collection::vec((any::<u8>(), any::<u8>(), -3i8..=3), 0..8)) {
            let g = Group::free(2);
            let ca = random_chain(&g, &a);
            let cb = random_chain(&g, &b);
            let mut lhs = (&ca + &cb).boundary(&g).unwrap();
            let mut rhs = ca.boundary(&g).unwrap();
            for (v, x) in cb.boundary(&g).unwrap() {
                *rhs.entry(v).or_insert_with(|| Q::from_integer(0)) += x;
            }
            rhs.retain(|_, x| *x != Q::from_integer(0));
            lhs.retain(|_, x| *x != Q::from_integer(0));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn translation_preserves_l1_norm(a in prop::collection::vec((any::<u8>(), any::<u8>(), -3i8..=3), 0..8),
                                         s in 0usize..17) {
            let g = Group::free(2);
            let c = random_chain(&g, &a);
            let s = g.ball(2).unwrap().element(s).clone();
            let t = c.translate(&g, &s).unwrap();
            prop_assert_eq!(t.l1_norm(), c.l1_norm());
            prop_assert_eq!(t.len(), c.len());
        }

        #[test]
        fn norm_is_homogeneous(a in prop::collection::vec((any::<u8>(), any::<u8>(), -3i8..=3), 0..8)) {
            let g = Group::free(2);
            let c = random_chain(&g, &a);
            let half = Q::new(1, 2);
            prop_assert_eq!(c.scale(&half).l1_norm(), c.l1_norm() * half);
            prop_assert!((&c - &c).is_zero());
        }
    }
}
