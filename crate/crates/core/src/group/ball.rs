use std::collections::HashMap;
use std::ops::Range;

use super::word::{GroupElement, Letter};

/// The ball of radius `radius` around the identity in the Cayley graph.
///
/// Elements are ordered by (length, lexicographic) so index 0 is the
/// identity and each sphere is a contiguous range. `neighbor(i, l)` is the
/// index of `elements[i] * l` when that product lies in the ball.
#[derive(Clone, Debug)]
pub struct CayleyBall {
    radius: usize,
    alphabet: usize,
    elements: Vec<GroupElement>,
    positions: HashMap<GroupElement, usize>,
    adjacency: Vec<Option<u32>>,
    sphere_starts: Vec<usize>,
}

impl CayleyBall {
    /// `elements` must be sorted shortlex with every length up to `radius`
    /// present; `adjacency` is row-major `elements.len() x alphabet`.
    pub(crate) fn from_parts(
        radius: usize,
        alphabet: usize,
        elements: Vec<GroupElement>,
        adjacency: Vec<Option<u32>>,
    ) -> CayleyBall {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        debug_assert_eq!(adjacency.len(), elements.len() * alphabet);
        let positions = elements
            .iter()
            .enumerate()
            .map(|(i, x)| (x.clone(), i))
            .collect();
        let mut sphere_starts = vec![0; radius + 2];
        for (n, start) in sphere_starts.iter_mut().enumerate() {
            *start = elements.partition_point(|x| x.len() < n);
        }
        CayleyBall {
            radius,
            alphabet,
            elements,
            positions,
            adjacency,
            sphere_starts,
        }
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &GroupElement {
        &self.elements[i]
    }

    pub fn index_of(&self, x: &GroupElement) -> Option<usize> {
        self.positions.get(x).copied()
    }

    pub(crate) fn index_of_word(&self, word: &[Letter]) -> Option<usize> {
        self.positions.get(word).copied()
    }

    pub fn neighbor(&self, i: usize, l: Letter) -> Option<usize> {
        self.adjacency[i * self.alphabet + l.code()].map(|j| j as usize)
    }

    /// Index range of the sphere of radius `n`.
    pub fn sphere(&self, n: usize) -> Range<usize> {
        if n > self.radius {
            return self.elements.len()..self.elements.len();
        }
        self.sphere_starts[n]..self.sphere_starts[n + 1]
    }

    pub fn sphere_sizes(&self) -> Vec<usize> {
        (0..=self.radius).map(|n| self.sphere(n).len()).collect()
    }

    /// Indices of the sub-ball of radius `r` (a prefix of the ordering).
    pub fn sub_ball(&self, r: usize) -> Range<usize> {
        0..self.sphere(r.min(self.radius)).end
    }

    pub fn truncated(&self, r: usize) -> CayleyBall {
        if r >= self.radius {
            return self.clone();
        }
        let n = self.sphere(r).end;
        let adjacency = self.adjacency[..n * self.alphabet]
            .iter()
            .map(|a| a.filter(|&j| (j as usize) < n))
            .collect();
        CayleyBall::from_parts(r, self.alphabet, self.elements[..n].to_vec(), adjacency)
    }
}
