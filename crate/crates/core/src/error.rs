use thiserror::Error;

/// Errors raised anywhere in the pipeline.
///
/// Variants carry the offending token (letter, relator, word, pair) rendered
/// with the presentation's alphabet so messages can be shown verbatim.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("unknown letter '{letter}' in {context}")]
    UnknownLetter { letter: char, context: String },

    #[error("duplicate generator '{0}'")]
    DuplicateGenerator(char),

    #[error("relator {0} is not cyclically reduced")]
    NotCyclicallyReduced(String),

    #[error("C'(1/6) violated: piece {piece} (length {length}) in relator {relator} of length {relator_length}")]
    SmallCancellation {
        piece: String,
        length: usize,
        relator: String,
        relator_length: usize,
    },

    #[error("rule {0} is neither length-reducing nor length-preserving-lexicographic")]
    RuleOrientation(String),

    #[error("rules are not locally confluent: critical word {word} reduces to {left} and {right}")]
    NonConfluent {
        word: String,
        left: String,
        right: String,
    },

    #[error("relator {0} does not reduce to the identity under the supplied rules")]
    RelatorNotTrivial(String),

    #[error("ball of radius {radius} exceeds the element cap {cap}")]
    CapExceeded { cap: usize, radius: usize },

    #[error("radius {requested} exceeds the precomputed word-problem ball of radius {available}")]
    IndexRadius { requested: usize, available: usize },

    #[error("element {word} lies outside the precomputed ball of radius {radius}")]
    OutOfBall { word: String, radius: usize },

    #[error("distance {distance} exceeds r_max {r_max}")]
    DistanceOutOfRange { distance: usize, r_max: usize },

    #[error("bicombing {kind} is not available: {reason}")]
    IncompatibleBicombing { kind: String, reason: String },

    #[error("non-integer coefficient {coefficient} on edge {edge}")]
    NonIntegerCoefficient { coefficient: String, edge: String },

    #[error("quadratic form value {value} is below -{tolerance}: kernel is not conditionally negative definite")]
    NotConditionallyNegative { value: f64, tolerance: f64 },

    #[error("symmetric eigen solver did not converge on a {0}x{0} matrix")]
    EigenFailure(usize),

    #[error("negative displacement constant {0}")]
    NegativeConstant(f64),

    #[error("support element {0} (or its translate) is outside the kernel's ball")]
    SupportEscape(String),

    #[error("not a homomorphism: relator {relator} maps to {image}")]
    NotHomomorphism { relator: String, image: String },

    #[error("{0}")]
    Invalid(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
