use std::cmp::Ordering;
use std::fmt;

/// A generator or its inverse, encoded as `2 * generator + inverse`.
///
/// The derived order is the shortlex letter order: generators in
/// presentation order, each immediately followed by its inverse
/// (`a < A < b < B < ...`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u8);

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Letter {
        assert!(generator < 128, "generator index out of range");
        Letter((generator as u8) << 1 | inverse as u8)
    }

    pub fn from_code(code: usize) -> Letter {
        Letter(code as u8)
    }

    pub fn code(self) -> usize {
        self.0 as usize
    }

    pub fn generator(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn inverse(self) -> Letter {
        Letter(self.0 ^ 1)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "g{}{}",
            self.generator(),
            if self.is_inverse() { "'" } else { "" }
        )
    }
}

pub type Word = Vec<Letter>;

pub fn invert_word(word: &[Letter]) -> Word {
    word.iter().rev().map(|l| l.inverse()).collect()
}

/// Free reduction with a stack.
pub fn free_reduce(word: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(word.len());
    for &l in word {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub fn is_freely_reduced(word: &[Letter]) -> bool {
    word.windows(2).all(|w| w[0] != w[1].inverse())
}

pub fn is_cyclically_reduced(word: &[Letter]) -> bool {
    is_freely_reduced(word)
        && match (word.first(), word.last()) {
            (Some(&a), Some(&b)) => word.len() == 1 || a != b.inverse(),
            _ => true,
        }
}

/// Length first, then lexicographic in the letter order.
pub fn shortlex_cmp(a: &[Letter], b: &[Letter]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// A group element, stored as its canonical normal-form word.
///
/// Normal forms are shortlex-least geodesic words, so two elements are equal
/// exactly when their words are equal, and the word length is the distance
/// to the identity in the Cayley graph. Elements are only produced by a
/// [`Group`](super::Group), which guarantees canonicity.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    word: Box<[Letter]>,
}

impl GroupElement {
    pub fn identity() -> GroupElement {
        GroupElement { word: Box::new([]) }
    }

    pub(crate) fn from_normal_form(word: Word) -> GroupElement {
        GroupElement {
            word: word.into_boxed_slice(),
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.word
    }

    /// Word length, equal to `d(e, self)`.
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_identity()
    }
}

impl std::borrow::Borrow<[Letter]> for GroupElement {
    fn borrow(&self) -> &[Letter] {
        &self.word
    }
}

impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> Ordering {
        shortlex_cmp(&self.word, &other.word)
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupElement({:?})", &self.word[..])
    }
}
