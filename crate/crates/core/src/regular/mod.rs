//! Regular languages: expressions, minimal automata, syntactic monoids and
//! cycle witnesses.

mod cycle;
mod dfa;
mod monoid;
mod regex;

pub use cycle::{cycle_witness_for, cycle_witnesses, extract_cycle_witness, CycleWitness};
pub use dfa::{Delta, Dfa, DfaFile};
pub use monoid::{EventualCycle, FiniteMonoid};
pub use regex::Regex;
