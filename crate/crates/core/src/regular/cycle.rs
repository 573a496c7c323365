//! Cycle witnesses for non-aperiodic syntactic monoids and the lower bound
//! they certify.

use super::monoid::FiniteMonoid;
use crate::error::{Error, Result};
use crate::floor_log2;
use crate::words::Word;

/// Words `r, x, s` with `x`'s powers cycling with period `p ≥ 2` from index
/// `h`, and residues `i ≠ j` such that `r x^(h+i+tp) s` and `r x^(h+j+tp) s`
/// disagree on membership for every `t ≥ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleWitness {
    pub r: Word,
    pub x: Word,
    pub s: Word,
    pub index: usize,
    pub period: usize,
    pub i: usize,
    pub j: usize,
    /// Whether the `i` side is the member.
    pub i_member: bool,
}

impl CycleWitness {
    /// `C = |r| + |s|`.
    pub fn context_len(&self) -> usize {
        self.r.len() + self.s.len()
    }

    /// `ℓ = |x|`.
    pub fn block_len(&self) -> usize {
        self.x.len()
    }

    /// `r x^e s`.
    pub fn word_with_exponent(&self, e: usize) -> Word {
        let mid = self.x.power(e);
        self.r.concat(&mid).and_then(|w| w.concat(&self.s)).expect("witness words share an alphabet")
    }

    /// The disagreeing pair at round `t`: `(r x^(h+i+tp) s, r x^(h+j+tp) s)`.
    pub fn pair(&self, t: usize) -> (Word, Word) {
        let base = self.index + t * self.period;
        (self.word_with_exponent(base + self.i), self.word_with_exponent(base + self.j))
    }

    /// `B(n) = ⌊log₂(K − p + 1)⌋ + 1` with `K = ⌊(n − C)/ℓ⌋`; `None` when
    /// `n < C` or `K − p + 1 < max(h, 1)`.
    pub fn lower_bound(&self, n: usize) -> Option<usize> {
        let c = self.context_len();
        if n < c {
            return None;
        }
        let k = (n - c) / self.block_len();
        let span = (k + 1).checked_sub(self.period)?;
        if span < self.index.max(1) {
            return None;
        }
        Some(floor_log2(span) + 1)
    }

    /// Least `n` at which [`lower_bound`](Self::lower_bound) is defined.
    pub fn min_horizon(&self) -> usize {
        self.context_len() + self.block_len() * (self.period - 1 + self.index.max(1))
    }
}

/// Cycle witness for element `x` of period ≥ 2, with the context of least
/// `|r| + |s|` (ties: shorter and then smaller `r`, then smaller `s`).
pub fn cycle_witness_for(m: &FiniteMonoid, x: u32) -> Result<Option<CycleWitness>> {
    let cyc = m.eventual_cycle(x);
    if cyc.period < 2 {
        return Ok(None);
    }
    let residues: Vec<u32> = (0..cyc.period).map(|t| m.power(x, cyc.index + t)).collect();
    // Elements come in shortlex witness order, so lengths are nondecreasing.
    let mut by_len: Vec<Vec<u32>> = Vec::new();
    for e in 0..m.size() as u32 {
        let len = m.witness_letters(e).len();
        if by_len.len() <= len {
            by_len.resize(len + 1, Vec::new());
        }
        by_len[len].push(e);
    }
    let max_len = by_len.len() - 1;
    for c in 0..=2 * max_len {
        for lr in c.saturating_sub(max_len)..=c.min(max_len) {
            let ls = c - lr;
            for &r in &by_len[lr] {
                for &s in &by_len[ls] {
                    let base = m.accepts_product(r, residues[0], s);
                    if let Some(j) = (1..cyc.period).find(|&t| m.accepts_product(r, residues[t], s) != base) {
                        return Ok(Some(CycleWitness {
                            r: m.witness(r),
                            x: m.witness(x),
                            s: m.witness(s),
                            index: cyc.index,
                            period: cyc.period,
                            i: 0,
                            j,
                            i_member: base,
                        }));
                    }
                }
            }
        }
    }
    // Distinct elements of a syntactic monoid are always separated by some
    // context; reaching here means the automaton was not minimal.
    Err(Error::Internal("no separating context; automaton is not minimal".into()))
}

/// The witness for the period-≥2 element with the shortlex-least word, or
/// `None` when the monoid is aperiodic.
pub fn extract_cycle_witness(m: &FiniteMonoid) -> Result<Option<CycleWitness>> {
    for x in 0..m.size() as u32 {
        if let Some(w) = cycle_witness_for(m, x)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// One witness per element of period ≥ 2, in element order.
pub fn cycle_witnesses(m: &FiniteMonoid) -> Result<Vec<CycleWitness>> {
    let mut out = Vec::new();
    for x in 0..m.size() as u32 {
        if let Some(w) = cycle_witness_for(m, x)? {
            out.push(w);
        }
    }
    Ok(out)
}
