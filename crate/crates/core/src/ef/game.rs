//! Direct Ehrenfeucht–Fraïssé game search, kept as an oracle for the
//! type-based decider. It shares nothing with `types` beyond `Word`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::words::Word;

/// Upper estimate of the unmemoized game tree: `((|u|+|v|) · max(|u|,|v|))^q`.
pub fn game_cost(u_len: usize, v_len: usize, q: usize) -> u128 {
    let per_round = ((u_len + v_len) as u128 * u_len.max(v_len).max(1) as u128).max(1);
    per_round.checked_pow(q as u32).unwrap_or(u128::MAX)
}

/// Does Duplicator win the `q`-round game on `u` and `v`?
pub fn equiv_by_game(u: &Word, v: &Word, q: usize, budget: u64) -> Result<bool> {
    u.same_alphabet(v)?;
    let cost = game_cost(u.len(), v.len(), q);
    if cost > u128::from(budget) {
        return Err(Error::CostCapExceeded { what: "equiv_by_game", cost, budget });
    }
    let mut game = Game { u: u.letters(), v: v.letters(), memo: HashMap::new() };
    Ok(game.duplicator_wins(&mut Vec::new(), q))
}

struct Game<'a> {
    u: &'a [u8],
    v: &'a [u8],
    memo: HashMap<(Vec<(usize, usize)>, usize), bool>,
}

impl Game<'_> {
    /// Can pebble pair `(a, b)` extend the current partial isomorphism?
    fn compatible(&self, pebbles: &[(usize, usize)], a: usize, b: usize) -> bool {
        self.u[a] == self.v[b]
            && pebbles.iter().all(|&(pa, pb)| (a < pa) == (b < pb) && (a == pa) == (b == pb))
    }

    fn duplicator_wins(&mut self, pebbles: &mut Vec<(usize, usize)>, rounds: usize) -> bool {
        if rounds == 0 {
            return true;
        }
        let mut key_pebbles = pebbles.clone();
        key_pebbles.sort_unstable();
        let key = (key_pebbles, rounds);
        if let Some(&won) = self.memo.get(&key) {
            return won;
        }
        let won = self.survives_left(pebbles, rounds) && self.survives_right(pebbles, rounds);
        self.memo.insert(key, won);
        won
    }

    /// Spoiler moves in `u`; Duplicator must answer every move.
    fn survives_left(&mut self, pebbles: &mut Vec<(usize, usize)>, rounds: usize) -> bool {
        (0..self.u.len()).all(|a| {
            (0..self.v.len()).any(|b| self.try_pair(pebbles, a, b, rounds))
        })
    }

    /// Spoiler moves in `v`.
    fn survives_right(&mut self, pebbles: &mut Vec<(usize, usize)>, rounds: usize) -> bool {
        (0..self.v.len()).all(|b| {
            (0..self.u.len()).any(|a| self.try_pair(pebbles, a, b, rounds))
        })
    }

    fn try_pair(&mut self, pebbles: &mut Vec<(usize, usize)>, a: usize, b: usize, rounds: usize) -> bool {
        if !self.compatible(pebbles, a, b) {
            return false;
        }
        pebbles.push((a, b));
        let won = self.duplicator_wins(pebbles, rounds - 1);
        pebbles.pop();
        won
    }
}
