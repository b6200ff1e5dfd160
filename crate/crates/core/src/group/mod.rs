//! Finitely presented groups: word problem, normal forms, Cayley balls.
//!
//! Every [`GroupElement`] handed out by a [`Group`] carries its
//! shortlex-least geodesic word. In free mode that is the freely reduced
//! word; in rewriting mode the irreducible word of a complete shortlex
//! system; in Dehn mode the first word reached by a breadth-first
//! enumeration of a precomputed ball, deduplicated with Dehn's algorithm.
//! Dehn-mode normal forms therefore exist only inside that ball.

mod ball;
mod dehn;
mod invariant;
mod presentation;
mod rewriting;
mod word;

use std::collections::HashMap;

pub use ball::CayleyBall;
pub use dehn::DehnReducer;
pub use presentation::{Presentation, ReductionMode};
pub use rewriting::RewritingSystem;
pub use word::{free_reduce, invert_word, shortlex_cmp, GroupElement, Letter, Word};

use invariant::{InvariantKey, NilpotentImage};

use crate::{Error, Result};

pub const DEFAULT_ELEMENT_CAP: usize = 200_000;

#[derive(Clone, Copy, Debug)]
pub struct GroupOptions {
    /// Abort ball construction beyond this many elements.
    pub cap: usize,
    /// Radius of the word-problem ball built for Dehn-mode presentations.
    pub index_radius: usize,
}

impl Default for GroupOptions {
    fn default() -> Self {
        GroupOptions {
            cap: DEFAULT_ELEMENT_CAP,
            index_radius: 4,
        }
    }
}

#[derive(Debug)]
struct DehnIndex {
    reducer: DehnReducer,
    invariant: InvariantKey,
    ball: CayleyBall,
    buckets: HashMap<Vec<i64>, Vec<u32>>,
}

impl DehnIndex {
    fn build(p: &Presentation, radius: usize, cap: usize) -> Result<DehnIndex> {
        let reducer = DehnReducer::new(p);
        let invariant = InvariantKey::new(p.rank(), p.relators());
        let alphabet = p.alphabet_size();
        let mut words: Vec<Word> = vec![Vec::new()];
        let mut images = vec![NilpotentImage::identity(p.rank())];
        let mut buckets: HashMap<Vec<i64>, Vec<u32>> = HashMap::new();
        buckets.insert(invariant.key_of_image(&images[0]), vec![0]);
        let mut adjacency: Vec<Option<u32>> = vec![None; alphabet];

        let find = |words: &[Word],
                    buckets: &HashMap<Vec<i64>, Vec<u32>>,
                    key: &Vec<i64>,
                    w: &[Letter]| {
            buckets.get(key).and_then(|b| {
                b.iter()
                    .copied()
                    .find(|&j| reducer.equal(w, &words[j as usize]))
            })
        };

        let mut start = 0;
        for n in 0..=radius {
            let end = words.len();
            for i in start..end {
                for l in p.letters() {
                    let mut cand = words[i].clone();
                    cand.push(l);
                    let mut img = images[i].clone();
                    img.push(l);
                    let key = invariant.key_of_image(&img);
                    let target = match find(&words, &buckets, &key, &cand) {
                        Some(j) => Some(j),
                        None if n < radius => {
                            if words.len() >= cap {
                                return Err(Error::CapExceeded { cap, radius });
                            }
                            let j = words.len() as u32;
                            words.push(cand);
                            images.push(img);
                            adjacency.extend(std::iter::repeat_n(None, alphabet));
                            buckets.entry(key).or_default().push(j);
                            Some(j)
                        }
                        None => None,
                    };
                    adjacency[i * alphabet + l.code()] = target;
                }
            }
            start = end;
        }
        let elements = words
            .into_iter()
            .map(GroupElement::from_normal_form)
            .collect();
        Ok(DehnIndex {
            reducer,
            invariant,
            ball: CayleyBall::from_parts(radius, alphabet, elements, adjacency),
            buckets,
        })
    }

    fn lookup(&self, word: &[Letter]) -> Option<usize> {
        let reduced = self.reducer.reduce(word);
        if let Some(i) = self.ball.index_of_word(&reduced) {
            return Some(i);
        }
        let key = self.invariant.key(&reduced);
        self.buckets.get(&key).and_then(|b| {
            b.iter()
                .map(|&j| j as usize)
                .find(|&j| self.reducer.equal(&reduced, self.ball.element(j).letters()))
        })
    }
}

#[derive(Debug)]
enum Normalizer {
    Free,
    Rewriting,
    Dehn(Box<DehnIndex>),
}

/// A presentation together with a solution of its word problem.
///
/// Immutable after construction and `Sync`; all operations take `&self`.
#[derive(Debug)]
pub struct Group {
    presentation: Presentation,
    normalizer: Normalizer,
    options: GroupOptions,
}

impl Group {
    pub fn new(presentation: Presentation, options: GroupOptions) -> Result<Group> {
        let normalizer = match presentation.mode() {
            ReductionMode::Free => Normalizer::Free,
            ReductionMode::Rewriting => Normalizer::Rewriting,
            ReductionMode::Dehn => Normalizer::Dehn(Box::new(DehnIndex::build(
                &presentation,
                options.index_radius,
                options.cap,
            )?)),
        };
        Ok(Group {
            presentation,
            normalizer,
            options,
        })
    }

    pub fn free(rank: usize) -> Group {
        Group::new(Presentation::free(rank), GroupOptions::default())
            .expect("free groups always build")
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn options(&self) -> GroupOptions {
        self.options
    }

    /// Whether normal forms (hence distances) are exact on the whole group
    /// rather than relative to a precomputed ball.
    pub fn has_global_normal_forms(&self) -> bool {
        !matches!(self.normalizer, Normalizer::Dehn(_))
    }

    /// Radius of the Dehn-mode word-problem ball, if any.
    pub fn index_radius(&self) -> Option<usize> {
        match &self.normalizer {
            Normalizer::Dehn(idx) => Some(idx.ball.radius()),
            _ => None,
        }
    }

    /// The mode's raw reduction: free reduction, exhaustive rewriting, or
    /// Dehn's algorithm. Only the first two are canonical.
    pub fn raw_reduce(&self, word: &[Letter]) -> Word {
        match &self.normalizer {
            Normalizer::Free => free_reduce(word),
            Normalizer::Rewriting => self
                .presentation
                .rewriting_system()
                .expect("rewriting mode carries a validated system")
                .normal_form(word),
            Normalizer::Dehn(idx) => idx.reducer.reduce(word),
        }
    }

    /// The canonical normal form of `word`.
    pub fn reduce_word(&self, word: &[Letter]) -> Result<GroupElement> {
        match &self.normalizer {
            Normalizer::Dehn(idx) => match idx.lookup(word) {
                Some(i) => Ok(idx.ball.element(i).clone()),
                None => Err(Error::OutOfBall {
                    word: self.presentation.format_word(&idx.reducer.reduce(word)),
                    radius: idx.ball.radius(),
                }),
            },
            _ => Ok(GroupElement::from_normal_form(self.raw_reduce(word))),
        }
    }

    /// Parses and reduces a word such as `"abAB"`.
    pub fn element(&self, text: &str) -> Result<GroupElement> {
        self.reduce_word(&self.presentation.parse_word(text)?)
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::identity()
    }

    pub fn multiply(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        if y.is_identity() {
            return Ok(x.clone());
        }
        if x.is_identity() {
            return Ok(y.clone());
        }
        let mut w: Word = x.letters().to_vec();
        w.extend_from_slice(y.letters());
        self.reduce_word(&w)
    }

    pub fn multiply_letter(&self, x: &GroupElement, l: Letter) -> Result<GroupElement> {
        if let Normalizer::Dehn(idx) = &self.normalizer {
            if let Some(i) = idx.ball.index_of(x) {
                if let Some(j) = idx.ball.neighbor(i, l) {
                    return Ok(idx.ball.element(j).clone());
                }
            }
        }
        let mut w: Word = x.letters().to_vec();
        w.push(l);
        self.reduce_word(&w)
    }

    /// Reverses the word and swaps case, then re-canonicalizes (the inverse
    /// of a shortlex-least word need not be shortlex-least).
    pub fn invert(&self, x: &GroupElement) -> Result<GroupElement> {
        let w = invert_word(x.letters());
        match self.normalizer {
            Normalizer::Free => Ok(GroupElement::from_normal_form(w)),
            _ => self.reduce_word(&w),
        }
    }

    /// `x^-1 y`.
    pub fn difference(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        let mut w = invert_word(x.letters());
        w.extend_from_slice(y.letters());
        self.reduce_word(&w)
    }

    /// Edge-path distance `d(x, y)`, the length of the normal form of
    /// `x^-1 y`.
    pub fn word_distance(&self, x: &GroupElement, y: &GroupElement, r_max: usize) -> Result<usize> {
        let distance = self.difference(x, y)?.len();
        if distance > r_max {
            return Err(Error::DistanceOutOfRange { distance, r_max });
        }
        Ok(distance)
    }

    pub fn format(&self, x: &GroupElement) -> String {
        self.presentation.format_word(x.letters())
    }

    /// Ball of radius `r` by breadth-first right multiplication.
    pub fn ball(&self, r: usize) -> Result<CayleyBall> {
        if let Normalizer::Dehn(idx) = &self.normalizer {
            if r > idx.ball.radius() {
                return Err(Error::IndexRadius {
                    requested: r,
                    available: idx.ball.radius(),
                });
            }
            return Ok(idx.ball.truncated(r));
        }
        let alphabet = self.presentation.alphabet_size();
        let mut elements = vec![GroupElement::identity()];
        let mut positions: HashMap<GroupElement, usize> = HashMap::new();
        positions.insert(GroupElement::identity(), 0);
        let mut start = 0;
        for n in 0..r {
            let end = elements.len();
            let mut sphere: Vec<GroupElement> = Vec::new();
            for x in &elements[start..end] {
                for l in self.presentation.letters() {
                    let y = self.multiply_letter(x, l)?;
                    if y.len() == n + 1 && !positions.contains_key(&y) {
                        positions.insert(y.clone(), usize::MAX);
                        sphere.push(y);
                    }
                }
            }
            sphere.sort();
            for y in sphere {
                if elements.len() >= self.options.cap {
                    return Err(Error::CapExceeded {
                        cap: self.options.cap,
                        radius: r,
                    });
                }
                positions.insert(y.clone(), elements.len());
                elements.push(y);
            }
            start = end;
        }
        let mut adjacency = Vec::with_capacity(elements.len() * alphabet);
        for x in &elements {
            for l in self.presentation.letters() {
                let y = self.multiply_letter(x, l)?;
                adjacency.push(positions.get(&y).map(|&j| j as u32));
            }
        }
        Ok(CayleyBall::from_parts(r, alphabet, elements, adjacency))
    }
}
