//! Hash keys for elements of a finitely presented group.
//!
//! A word is mapped into the free class-2 nilpotent group `Z^n x Z^(n choose 2)`
//! and then projected by integer functionals that kill the image of the
//! normal closure of the relators. The key is a group invariant (equal
//! elements get equal keys), so it can bucket candidates before an exact
//! word-problem test.

use num_rational::Ratio;
use num_traits::{One, Zero};

use super::word::Letter;

#[derive(Clone, Debug)]
pub(crate) struct InvariantKey {
    rank: usize,
    /// Functionals applied to the abelian part.
    on_abelian: Vec<Vec<i64>>,
    /// Functionals applied to the commutator part; empty when some relator
    /// has non-zero exponent sum.
    on_commutator: Vec<Vec<i64>>,
    keep_abelian: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct NilpotentImage {
    abelian: Vec<i64>,
    commutator: Vec<i64>,
}

fn pair_index(i: usize, j: usize, rank: usize) -> usize {
    debug_assert!(i < j);
    i * rank - i * (i + 1) / 2 + (j - i - 1)
}

impl NilpotentImage {
    pub(crate) fn identity(rank: usize) -> NilpotentImage {
        NilpotentImage {
            abelian: vec![0; rank],
            commutator: vec![0; rank * rank.saturating_sub(1) / 2],
        }
    }

    pub(crate) fn push(&mut self, l: Letter) {
        let rank = self.abelian.len();
        let g = l.generator();
        let eps = if l.is_inverse() { -1 } else { 1 };
        for i in 0..g {
            self.commutator[pair_index(i, g, rank)] += self.abelian[i] * eps;
        }
        self.abelian[g] += eps;
    }

    pub(crate) fn of_word(rank: usize, word: &[Letter]) -> NilpotentImage {
        let mut img = NilpotentImage::identity(rank);
        for &l in word {
            img.push(l);
        }
        img
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Integer basis of `{ f : row . f = 0 for every row }`.
fn integer_nullspace(rows: &[Vec<i64>], dim: usize) -> Vec<Vec<i64>> {
    type Q = Ratio<i64>;
    let mut m: Vec<Vec<Q>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| Q::from_integer(x)).collect())
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..dim {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = Q::one() / m[row][col];
        for x in m[row].iter_mut() {
            *x *= inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col];
                let pivot = m[row].clone();
                for (target, p) in m[r].iter_mut().zip(&pivot) {
                    *target -= f * *p;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in (0..dim).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Q::zero(); dim];
        v[free] = Q::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[r][free];
        }
        let lcm = v.iter().fold(1i64, |acc, x| lcm(acc, *x.denom()));
        basis.push(v.iter().map(|x| (x * lcm).to_integer()).collect());
    }
    basis
}

fn lcm(a: i64, b: i64) -> i64 {
    fn gcd(mut a: i64, mut b: i64) -> i64 {
        while b != 0 {
            let t = a % b;
            a = b;
            b = t;
        }
        a.abs()
    }
    (a / gcd(a, b) * b).abs()
}

impl InvariantKey {
    pub(crate) fn new(rank: usize, relators: &[Vec<Letter>]) -> InvariantKey {
        let images: Vec<NilpotentImage> = relators
            .iter()
            .map(|r| NilpotentImage::of_word(rank, r))
            .collect();
        let central = images.iter().all(|img| img.abelian.iter().all(|x| *x == 0));
        if central {
            let rows: Vec<Vec<i64>> = images.iter().map(|i| i.commutator.clone()).collect();
            let dim = rank * rank.saturating_sub(1) / 2;
            InvariantKey {
                rank,
                on_abelian: Vec::new(),
                on_commutator: integer_nullspace(&rows, dim),
                keep_abelian: true,
            }
        } else {
            let rows: Vec<Vec<i64>> = images.iter().map(|i| i.abelian.clone()).collect();
            InvariantKey {
                rank,
                on_abelian: integer_nullspace(&rows, rank),
                on_commutator: Vec::new(),
                keep_abelian: false,
            }
        }
    }

    pub(crate) fn key_of_image(&self, img: &NilpotentImage) -> Vec<i64> {
        let mut key = Vec::new();
        if self.keep_abelian {
            key.extend_from_slice(&img.abelian);
        }
        key.extend(self.on_abelian.iter().map(|f| dot(f, &img.abelian)));
        key.extend(self.on_commutator.iter().map(|f| dot(f, &img.commutator)));
        key
    }

    pub(crate) fn key(&self, word: &[Letter]) -> Vec<i64> {
        self.key_of_image(&NilpotentImage::of_word(self.rank, word))
    }
}
