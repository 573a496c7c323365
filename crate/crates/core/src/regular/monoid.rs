//! Transition monoids of complete DFAs.
//!
//! Elements are state transformations, discovered breadth-first over words
//! in shortlex order, so element `e`'s witness is the shortlex-least word
//! inducing it. Element 0 is the identity (witness ε). For a minimal DFA this
//! is the syntactic monoid of the language.

use std::collections::HashMap;
use std::sync::Arc;

use super::dfa::Dfa;
use crate::error::{Error, Result};
use crate::words::{Alphabet, Word};

/// `x^index = x^(index + period)`, with `index ≥ 1` least and `period ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EventualCycle {
    pub index: usize,
    pub period: usize,
}

#[derive(Debug, Clone)]
pub struct FiniteMonoid {
    alphabet: Arc<Alphabet>,
    start: u32,
    accepting_states: Vec<bool>,
    maps: Vec<Box<[u32]>>,
    lookup: HashMap<Box<[u32]>, u32>,
    witnesses: Vec<Vec<u8>>,
    /// `right[e][c]` is `e · c`.
    right: Vec<Vec<u32>>,
}

impl FiniteMonoid {
    /// Fails with `MonoidTooLarge` once more than `cap` elements appear.
    pub fn of(dfa: &Dfa, cap: usize) -> Result<FiniteMonoid> {
        let n = dfa.state_count();
        let k = dfa.alphabet().len();
        let identity: Box<[u32]> = (0..n as u32).collect();
        let mut m = FiniteMonoid {
            alphabet: Arc::clone(dfa.alphabet()),
            start: dfa.start(),
            accepting_states: (0..n as u32).map(|s| dfa.is_accepting(s)).collect(),
            maps: vec![identity.clone()],
            lookup: HashMap::from([(identity, 0)]),
            witnesses: vec![Vec::new()],
            right: Vec::new(),
        };
        let mut e = 0;
        while e < m.maps.len() {
            let mut row = Vec::with_capacity(k);
            for c in 0..k as u8 {
                let next: Box<[u32]> = m.maps[e].iter().map(|&s| dfa.step(s, c)).collect();
                let id = match m.lookup.get(&next) {
                    Some(&id) => id,
                    None => {
                        if m.maps.len() >= cap {
                            return Err(Error::MonoidTooLarge { cap });
                        }
                        let id = m.maps.len() as u32;
                        let mut w = m.witnesses[e].clone();
                        w.push(c);
                        m.witnesses.push(w);
                        m.lookup.insert(next.clone(), id);
                        m.maps.push(next);
                        id
                    }
                };
                row.push(id);
            }
            m.right.push(row);
            e += 1;
        }
        Ok(m)
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn size(&self) -> usize {
        self.maps.len()
    }

    pub fn identity(&self) -> u32 {
        0
    }

    pub fn letter(&self, c: u8) -> u32 {
        self.right[0][c as usize]
    }

    pub fn element_of(&self, letters: &[u8]) -> u32 {
        letters.iter().fold(0, |e, &c| self.right[e as usize][c as usize])
    }

    pub fn witness_letters(&self, e: u32) -> &[u8] {
        &self.witnesses[e as usize]
    }

    pub fn witness(&self, e: u32) -> Word {
        Word::from_letters(&self.alphabet, self.witnesses[e as usize].clone()).expect("witness letters are in range")
    }

    /// The state transformation of `e`.
    pub fn map(&self, e: u32) -> &[u32] {
        &self.maps[e as usize]
    }

    pub fn multiply(&self, a: u32, b: u32) -> u32 {
        let (fa, fb) = (&self.maps[a as usize], &self.maps[b as usize]);
        let composed: Box<[u32]> = fa.iter().map(|&s| fb[s as usize]).collect();
        self.lookup[&composed]
    }

    /// Full multiplication table, row `a`, column `b` holds `a · b`.
    pub fn table(&self) -> Vec<Vec<u32>> {
        let n = self.size() as u32;
        (0..n).map(|a| (0..n).map(|b| self.multiply(a, b)).collect()).collect()
    }

    pub fn power(&self, e: u32, k: usize) -> u32 {
        (0..k).fold(0, |acc, _| self.multiply(acc, e))
    }

    pub fn is_accepting(&self, e: u32) -> bool {
        self.accepting_states[self.maps[e as usize][self.start as usize] as usize]
    }

    pub fn accepting_elems(&self) -> Vec<u32> {
        (0..self.size() as u32).filter(|&e| self.is_accepting(e)).collect()
    }

    /// Is `l · x · r` accepting? Evaluated on the start state only.
    pub fn accepts_product(&self, l: u32, x: u32, r: u32) -> bool {
        let s = self.maps[l as usize][self.start as usize];
        let s = self.maps[x as usize][s as usize];
        let s = self.maps[r as usize][s as usize];
        self.accepting_states[s as usize]
    }

    pub fn eventual_cycle(&self, e: u32) -> EventualCycle {
        let mut first_seen: HashMap<u32, usize> = HashMap::new();
        let mut cur = e;
        let mut k = 1;
        loop {
            if let Some(&j) = first_seen.get(&cur) {
                return EventualCycle { index: j, period: k - j };
            }
            first_seen.insert(cur, k);
            cur = self.multiply(cur, e);
            k += 1;
        }
    }

    /// Every element has period 1.
    pub fn is_aperiodic(&self) -> bool {
        (0..self.size() as u32).all(|e| self.eventual_cycle(e).period == 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn monoid(re: &str) -> FiniteMonoid {
        FiniteMonoid::of(&Dfa::parse_regex(re, None).unwrap(), 5000).unwrap()
    }

    #[test]
    fn parity_monoid_is_z2() {
        let m = monoid("(aa)*");
        assert_eq!(m.size(), 2);
        let a = m.letter(0);
        assert_eq!(m.witness(a).to_string(), "a");
        assert_eq!(m.eventual_cycle(a), EventualCycle { index: 1, period: 2 });
        assert_eq!(m.eventual_cycle(0), EventualCycle { index: 1, period: 1 });
        assert_eq!(m.accepting_elems(), vec![0]);
        assert!(!m.is_aperiodic());
    }

    #[test]
    fn star_free_examples_are_aperiodic() {
        for re in ["(a|b)*a(a|b)*", "a*b*", "(ab)*", "@eps", "@empty"] {
            assert!(monoid(re).is_aperiodic(), "{re}");
        }
        for re in ["(aa)*", "b*(ab*ab*)*", "(aaa)*|a(aaa)*", "((a|b)(a|b))*"] {
            assert!(!monoid(re).is_aperiodic(), "{re}");
        }
    }

    #[test]
    fn witnesses_are_shortlex_least_and_consistent() {
        let m = monoid("(ab|b)*a*");
        let mut prev: Vec<u8> = Vec::new();
        for e in 0..m.size() as u32 {
            let w = m.witness_letters(e).to_vec();
            assert_eq!(m.element_of(&w), e);
            if e > 0 {
                assert_eq!(crate::words::shortlex(&prev, &w), std::cmp::Ordering::Less);
            }
            prev = w;
        }
        // No shorter word reaches a later element.
        let alpha = m.alphabet().clone();
        for w in crate::words::enumerate_ball(&alpha, 5, 1 << 22).unwrap() {
            let e = m.element_of(w.letters());
            assert_ne!(crate::words::shortlex(w.letters(), m.witness_letters(e)), std::cmp::Ordering::Less);
        }
    }

    #[test]
    fn multiplication_agrees_with_words() {
        let m = monoid("b*(ab*ab*)*");
        let t = m.table();
        for a in 0..m.size() as u32 {
            for b in 0..m.size() as u32 {
                let mut w = m.witness_letters(a).to_vec();
                w.extend_from_slice(m.witness_letters(b));
                assert_eq!(t[a as usize][b as usize], m.element_of(&w));
            }
        }
    }

    const SAMPLES: &[&str] = &[
        "(aa)*", "a*b*", "(ab)*", "(a|b)*a(a|b)*", "b*(ab*ab*)*", "(aaa)*|a(aaa)*", "((a|b)(a|b))*",
        "b(aa)*b", "(ab|b)*a*", "a(a|b)*b", "(a|b)*ab(a|b)*", "aaa*",
    ];

    #[test]
    fn distinct_elements_are_separated_by_contexts() {
        for re in SAMPLES {
            let m = monoid(re);
            if m.size() > 24 {
                continue;
            }
            let t = m.table();
            let n = m.size();
            for a in 0..n {
                for b in 0..a {
                    let separated = (0..n).any(|l| {
                        (0..n).any(|r| {
                            m.is_accepting(t[t[l][a] as usize][r]) != m.is_accepting(t[t[l][b] as usize][r])
                        })
                    });
                    assert!(separated, "{re}: {a} {b}");
                }
            }
        }
    }

    /// Nontrivial cyclic subgroup: idempotent `e` and `g ≠ e` in `eMe` with some power of `g` equal to `e`.
    fn has_nontrivial_subgroup(m: &FiniteMonoid) -> bool {
        let t = m.table();
        let n = m.size();
        (0..n).filter(|&e| t[e][e] as usize == e).any(|e| {
            (0..n).filter(|&g| g != e && t[e][g] as usize == g && t[g][e] as usize == g).any(|g| {
                let mut p = g;
                (0..n).any(|_| {
                    p = t[p][g] as usize;
                    p == e
                })
            })
        })
    }

    #[test]
    fn aperiodicity_matches_subgroup_search() {
        for re in SAMPLES {
            let m = monoid(re);
            assert_eq!(m.is_aperiodic(), !has_nontrivial_subgroup(&m), "{re}");
        }
    }

    #[test]
    fn cap_is_enforced() {
        let d = Dfa::parse_regex("(a|b)*a(a|b)(a|b)(a|b)", None).unwrap();
        assert!(matches!(FiniteMonoid::of(&d, 10), Err(Error::MonoidTooLarge { cap: 10 })));
    }
}
