//! Shortlex string rewriting with verified local confluence.
//!
//! The supplied rules are augmented with the free cancellations `xX -> 1`.
//! Every rule must decrease in shortlex order, which gives termination;
//! together with local confluence on all critical pairs (Newman's lemma)
//! the system is complete and its irreducible words are the shortlex-least
//! representatives, hence geodesic.

use std::collections::HashMap;

use super::presentation::Presentation;
use super::word::{shortlex_cmp, Letter, Word};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct RewritingSystem {
    rules: Vec<(Word, Word)>,
    lookup: HashMap<Word, Word>,
    max_lhs: usize,
}

impl RewritingSystem {
    pub(crate) fn new(p: &Presentation) -> Result<RewritingSystem> {
        let mut rules: Vec<(Word, Word)> = Vec::new();
        for (lhs, rhs) in p.rules() {
            if shortlex_cmp(lhs, rhs) != std::cmp::Ordering::Greater {
                return Err(Error::RuleOrientation(format!(
                    "{} -> {}",
                    p.format_word(lhs),
                    p.format_word(rhs)
                )));
            }
            rules.push((lhs.clone(), rhs.clone()));
        }
        for l in p.letters() {
            rules.push((vec![l, l.inverse()], Vec::new()));
        }
        let mut lookup: HashMap<Word, Word> = HashMap::new();
        for (lhs, rhs) in &rules {
            lookup
                .entry(lhs.clone())
                .and_modify(|r| {
                    if shortlex_cmp(rhs, r).is_lt() {
                        *r = rhs.clone();
                    }
                })
                .or_insert_with(|| rhs.clone());
        }
        let max_lhs = rules.iter().map(|(l, _)| l.len()).max().unwrap_or(0);
        let system = RewritingSystem {
            rules,
            lookup,
            max_lhs,
        };
        system.check_local_confluence(p)?;
        Ok(system)
    }

    /// Exhaustive rewriting to the irreducible word.
    pub fn normal_form(&self, word: &[Letter]) -> Word {
        let mut stack: Word = Vec::with_capacity(word.len());
        let mut pending: Vec<Letter> = word.iter().rev().copied().collect();
        while let Some(l) = pending.pop() {
            stack.push(l);
            let top = stack.len();
            for len in 1..=self.max_lhs.min(top) {
                if let Some(rhs) = self.lookup.get(&stack[top - len..]) {
                    stack.truncate(top - len);
                    pending.extend(rhs.iter().rev());
                    break;
                }
            }
        }
        stack
    }

    fn check_local_confluence(&self, p: &Presentation) -> Result<()> {
        let join = |word: Word, left: Word, right: Word| -> Result<()> {
            let l = self.normal_form(&left);
            let r = self.normal_form(&right);
            if l != r {
                return Err(Error::NonConfluent {
                    word: p.format_word(&word),
                    left: p.format_word(&l),
                    right: p.format_word(&r),
                });
            }
            Ok(())
        };
        for (i, (l1, r1)) in self.rules.iter().enumerate() {
            for (j, (l2, r2)) in self.rules.iter().enumerate() {
                // Proper overlaps: a suffix of l1 equals a prefix of l2.
                for k in 1..l1.len().min(l2.len()) {
                    if l1[l1.len() - k..] == l2[..k] {
                        let word: Word = l1.iter().chain(&l2[k..]).copied().collect();
                        let left: Word = r1.iter().chain(&l2[k..]).copied().collect();
                        let right: Word = l1[..l1.len() - k]
                            .iter()
                            .chain(r2.iter())
                            .copied()
                            .collect();
                        join(word, left, right)?;
                    }
                }
                // Inclusions: l2 occurs inside l1.
                if i != j && l2.len() <= l1.len() {
                    for pos in 0..=l1.len() - l2.len() {
                        if l1[pos..pos + l2.len()] == l2[..] {
                            let right: Word = l1[..pos]
                                .iter()
                                .chain(r2.iter())
                                .chain(&l1[pos + l2.len()..])
                                .copied()
                                .collect();
                            join(l1.clone(), r1.clone(), right)?;
                        }
                    }
                }
            }
        }
        Ok(())
    }
}
