//! Rank-q equivalence `≡_q` of words.
//!
//! Two independent deciders: interned rank types ([`TypeTable`]) and a
//! direct game search ([`equiv_by_game`]). Convenience functions here use a
//! fresh table per call.

mod game;
mod types;

pub use game::{equiv_by_game, game_cost};
pub use types::{
    power_equiv_shortcut, rank_distance_bound, RankDistance, RankType, TypeTable, NORMAL_FORM_MAGIC,
};

use crate::config::Caps;
use crate::error::Result;
use crate::words::Word;

pub fn rank_type(table: &mut TypeTable, w: &Word, q: usize) -> Result<RankType> {
    table.rank_type(w, q)
}

pub fn equivalent(u: &Word, v: &Word, q: usize) -> Result<bool> {
    u.same_alphabet(v)?;
    TypeTable::new(u.alphabet(), Caps::from_env().budget).equivalent(u, v, q)
}

pub fn rank_distance(u: &Word, v: &Word) -> Result<RankDistance> {
    u.same_alphabet(v)?;
    TypeTable::new(u.alphabet(), Caps::from_env().budget).rank_distance(u, v)
}
