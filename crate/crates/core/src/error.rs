use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("symbol {symbol:?} is not in alphabet {alphabet}")]
    UnknownSymbol { symbol: char, alphabet: String },

    #[error("alphabet mismatch: {left} vs {right}")]
    AlphabetMismatch { left: String, right: String },

    #[error("horizon {n} too large: ball would hold about {size} words (cap {cap})")]
    HorizonTooLarge { n: usize, size: u128, cap: u128 },

    #[error("horizon {n} exceeds the exact-value cap {max} for this alphabet")]
    HorizonCap { n: usize, max: usize },

    #[error("cost cap exceeded in {what}: estimated {cost} steps, budget {budget}")]
    CostCapExceeded { what: &'static str, cost: u128, budget: u64 },

    #[error("unbound free variable {0}")]
    UnboundVariable(String),

    #[error("variable {var} assigned position {pos}, outside 1..={len}")]
    PositionOutOfRange { var: String, pos: usize, len: usize },

    #[error("s-expression syntax error at byte {pos}: {msg}")]
    SexprSyntax { pos: usize, msg: String },

    #[error("regex syntax error at position {pos}: {msg}")]
    RegexSyntax { pos: usize, msg: String },

    #[error("malformed DFA: {0}")]
    DfaFormat(String),

    #[error("monoid exceeds {cap} elements")]
    MonoidTooLarge { cap: usize },

    #[error("the syntactic monoid is aperiodic; no cycle witness exists")]
    NoWitness,

    #[error("rank distance is undefined for equal words ({0})")]
    EqualWords(String),

    #[error("member {word} is longer than horizon {n}")]
    MemberTooLong { word: String, n: usize },

    #[error("languages are not disjoint on the ball: both contain {0}")]
    NotDisjoint(String),

    #[error("empty block word in power shortcut")]
    EmptyBlock,

    #[error("invalid language spec {spec:?}: {msg}")]
    LanguageSpec { spec: String, msg: String },

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors that come from a configured resource cap rather than bad input.
    pub fn is_cap(&self) -> bool {
        matches!(
            self,
            Error::HorizonTooLarge { .. }
                | Error::HorizonCap { .. }
                | Error::CostCapExceeded { .. } | Error::MonoidTooLarge { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
