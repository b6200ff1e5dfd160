//! Dehn's algorithm for C'(1/6) presentations.

use std::collections::{BTreeSet, HashMap};

use super::presentation::Presentation;
use super::word::{invert_word, shortlex_cmp, Letter, Word};
use crate::{Error, Result};

/// All cyclic permutations of the relators and their inverses, deduplicated.
pub(crate) fn symmetrized(p: &Presentation) -> Vec<(Word, usize)> {
    let mut out: BTreeSet<(Word, usize)> = BTreeSet::new();
    for (idx, r) in p.relators().iter().enumerate() {
        for base in [r.clone(), invert_word(r)] {
            for shift in 0..base.len() {
                let rotated: Word = base[shift..]
                    .iter()
                    .chain(&base[..shift])
                    .copied()
                    .collect();
                out.insert((rotated, idx));
            }
        }
    }
    out.into_iter().collect()
}

/// Enumerates pieces (common prefixes of distinct words of the symmetrized
/// set) and rejects any piece of length `>= |r| / 6` in a relator `r`.
pub(crate) fn check_small_cancellation(p: &Presentation) -> Result<()> {
    let set = symmetrized(p);
    for (i, (u, _)) in set.iter().enumerate() {
        for (v, _) in set.iter().skip(i + 1) {
            if u == v {
                continue;
            }
            let lcp = u.iter().zip(v).take_while(|(a, b)| a == b).count();
            for w in [u, v] {
                if 6 * lcp >= w.len() {
                    return Err(Error::SmallCancellation {
                        piece: p.format_word(&u[..lcp]),
                        length: lcp,
                        relator: p.format_word(w),
                        relator_length: w.len(),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Replaces any subword that is more than half of a cyclic relator by the
/// inverse of the complementary part, interleaved with free reduction.
#[derive(Clone, Debug)]
pub struct DehnReducer {
    replacements: HashMap<Word, Word>,
    min_len: usize,
    max_len: usize,
}

impl DehnReducer {
    pub fn new(p: &Presentation) -> DehnReducer {
        let mut replacements: HashMap<Word, Word> = HashMap::new();
        for (t, _) in symmetrized(p) {
            let n = t.len();
            for k in (n / 2 + 1)..=n {
                let rhs = invert_word(&t[k..]);
                replacements
                    .entry(t[..k].to_vec())
                    .and_modify(|r| {
                        if shortlex_cmp(&rhs, r).is_lt() {
                            *r = rhs.clone();
                        }
                    })
                    .or_insert(rhs);
            }
        }
        let min_len = replacements
            .keys()
            .map(Vec::len)
            .min()
            .unwrap_or(usize::MAX);
        let max_len = replacements.keys().map(Vec::len).max().unwrap_or(0);
        DehnReducer {
            replacements,
            min_len,
            max_len,
        }
    }

    /// Returns a freely reduced word containing no more than half of any
    /// relator. The result is empty iff the input represents the identity.
    pub fn reduce(&self, word: &[Letter]) -> Word {
        let mut stack: Word = Vec::with_capacity(word.len());
        let mut pending: Vec<Letter> = word.iter().rev().copied().collect();
        while let Some(l) = pending.pop() {
            if stack.last() == Some(&l.inverse()) {
                stack.pop();
                continue;
            }
            stack.push(l);
            let top = stack.len();
            if top < self.min_len {
                continue;
            }
            for len in self.min_len..=self.max_len.min(top) {
                if let Some(rhs) = self.replacements.get(&stack[top - len..]) {
                    stack.truncate(top - len);
                    pending.extend(rhs.iter().rev());
                    break;
                }
            }
        }
        stack
    }

    pub fn is_identity(&self, word: &[Letter]) -> bool {
        self.reduce(word).is_empty()
    }

    /// Whether `u` and `v` represent the same element.
    pub fn equal(&self, u: &[Letter], v: &[Letter]) -> bool {
        let mut w: Word = u.to_vec();
        w.extend(invert_word(v));
        self.is_identity(&w)
    }
}
