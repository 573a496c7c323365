//! Finite-horizon first-order rank profiles for formal languages.
//!
//! The crate computes, for a language `L` and a horizon `n`, the least
//! quantifier rank of an FO[<] sentence that classifies `L` correctly on all
//! words of length at most `n`, together with certified upper and lower
//! bounds, syntactic cycle witnesses and the formulas behind the upper bound.

pub mod config;
pub mod ef;
pub mod error;
pub mod formula;
pub mod profiles;
pub mod regular;
pub mod words;

pub use config::Caps;
pub use error::{Error, Result};
pub use words::{enumerate_ball, Alphabet, Word};

/// `⌈log₂ n⌉` for `n ≥ 1`; 0 for `n ≤ 1`.
pub fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// `⌊log₂ n⌋` for `n ≥ 1`.
pub fn floor_log2(n: usize) -> usize {
    debug_assert!(n >= 1);
    (usize::BITS - 1 - n.leading_zeros()) as usize
}

/// The universal upper bound `⌈log₂ n⌉ + 4` on the rank profile (n ≥ 1).
pub fn universal_upper_bound(n: usize) -> usize {
    ceil_log2(n) + 4
}
