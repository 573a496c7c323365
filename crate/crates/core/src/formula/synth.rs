//! Synthesis of distance, length, exact-word and horizon-classifier sentences.
//!
//! `succ`, `first` and `last` are macros expanded in place; every quantifier
//! gets a fresh variable from a per-call counter, so output is reproducible.

use super::{Formula, Var};
use crate::error::{Error, Result};
use crate::words::Word;

/// Fresh-variable supply for one synthesis call.
#[derive(Debug, Default)]
pub struct Synth {
    next: u32,
}

impl Synth {
    pub fn new() -> Self {
        Synth::default()
    }

    pub fn fresh(&mut self) -> Var {
        let v = Var(self.next);
        self.next += 1;
        v
    }

    /// `x < y ∧ ¬∃z (x < z ∧ z < y)`
    pub fn succ(&mut self, x: Var, y: Var) -> Formula {
        let z = self.fresh();
        Formula::And(vec![
            Formula::Lt(x, y),
            Formula::not(Formula::exists(z, Formula::And(vec![Formula::Lt(x, z), Formula::Lt(z, y)]))),
        ])
    }

    /// `¬∃y (y < x)`
    pub fn first(&mut self, x: Var) -> Formula {
        let y = self.fresh();
        Formula::not(Formula::exists(y, Formula::Lt(y, x)))
    }

    /// `¬∃y (x < y)`
    pub fn last(&mut self, x: Var) -> Formula {
        let y = self.fresh();
        Formula::not(Formula::exists(y, Formula::Lt(x, y)))
    }

    /// Holds iff `y = x + d`, by halving `d` around a midpoint.
    pub fn dist(&mut self, d: usize, x: Var, y: Var) -> Formula {
        match d {
            0 => Formula::Eq(x, y),
            1 => self.succ(x, y),
            _ => {
                let z = self.fresh();
                let left = self.dist(d / 2, x, z);
                let right = self.dist(d - d / 2, z, y);
                Formula::exists(z, Formula::And(vec![left, right]))
            }
        }
    }

    /// `¬∃x (x = x)`: true only on the empty word.
    pub fn empty_word(&mut self) -> Formula {
        let x = self.fresh();
        Formula::not(Formula::exists(x, Formula::Eq(x, x)))
    }

    pub fn length(&mut self, m: usize) -> Formula {
        if m == 0 {
            return self.empty_word();
        }
        let f = self.fresh();
        let l = self.fresh();
        let body = vec![self.first(f), self.last(l), self.dist(m - 1, f, l)];
        Formula::exists(f, Formula::exists(l, Formula::And(body)))
    }

    pub fn exact_word(&mut self, w: &Word) -> Formula {
        let m = w.len();
        if m == 0 {
            return self.empty_word();
        }
        let f = self.fresh();
        let l = self.fresh();
        let mut body = vec![self.first(f), self.last(l), self.dist(m - 1, f, l)];
        for i in 1..=m {
            let x = self.fresh();
            let at = self.dist(i - 1, f, x);
            body.push(Formula::exists(x, Formula::And(vec![at, Formula::Letter(w.symbol_at(i), x)])));
        }
        Formula::exists(f, Formula::exists(l, Formula::And(body)))
    }
}

/// `Dist_d(v0, v1)`.
pub fn synth_dist(d: usize) -> Formula {
    let mut s = Synth::new();
    let (x, y) = (s.fresh(), s.fresh());
    s.dist(d, x, y)
}

/// Sentence true exactly on words of length `m`.
pub fn synth_length(m: usize) -> Formula {
    Synth::new().length(m)
}

/// Sentence true exactly on `w`.
pub fn synth_exact_word(w: &Word) -> Formula {
    Synth::new().exact_word(w)
}

/// Disjunction of exact-word sentences over `members`; classifies the member
/// set exactly on the ball of radius `n`.
pub fn synth_horizon_classifier(members: &[Word], n: usize) -> Result<Formula> {
    if let Some(w) = members.iter().find(|w| w.len() > n) {
        return Err(Error::MemberTooLong { word: w.to_string(), n });
    }
    let mut sorted: Vec<&Word> = members.iter().collect();
    sorted.sort();
    sorted.dedup();
    let mut s = Synth::new();
    let mut disjuncts: Vec<Formula> = sorted.into_iter().map(|w| s.exact_word(w)).collect();
    Ok(match disjuncts.len() {
        0 => Formula::False,
        1 => disjuncts.pop().unwrap(),
        _ => Formula::Or(disjuncts),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{evaluate, Assignment};
    use crate::ceil_log2;
    use crate::words::Alphabet;
    use std::sync::Arc;

    fn word(alpha: &str, s: &str) -> Word {
        Word::parse(&Arc::new(Alphabet::from_chars(alpha).unwrap()), s).unwrap()
    }

    #[test]
    fn dist_examples() {
        let d0 = synth_dist(0);
        assert_eq!(d0, Formula::Eq(Var(0), Var(1)));
        assert_eq!(d0.quantifier_rank(), 0);
        assert!(synth_dist(8).quantifier_rank() <= 4);
        let w = word("abcd", "abcd");
        let env = Assignment::new().with(Var(0), 1).with(Var(1), 4);
        assert!(evaluate(&w, &synth_dist(3), &env).unwrap());
    }

    #[test]
    fn dist_one_is_succ() {
        assert_eq!(
            synth_dist(1).to_string(),
            "(and (lt v0 v1) (not (exists v2 (and (lt v0 v2) (lt v2 v1)))))"
        );
        assert_eq!(synth_dist(1).quantifier_rank(), 1);
    }

    #[test]
    fn length_examples() {
        let l0 = synth_length(0);
        assert_eq!(l0.to_string(), "(not (exists v0 (eq v0 v0)))");
        assert_eq!(l0.quantifier_rank(), 1);
        assert!(evaluate(&word("a", "@eps"), &l0, &Assignment::new()).unwrap());
        assert!(!evaluate(&word("a", "a"), &l0, &Assignment::new()).unwrap());
        assert!(synth_length(4).quantifier_rank() <= 5);
        let l3 = synth_length(3);
        assert!(evaluate(&word("a", "aaa"), &l3, &Assignment::new()).unwrap());
        assert!(!evaluate(&word("a", "aa"), &l3, &Assignment::new()).unwrap());
    }

    #[test]
    fn exact_word_examples() {
        let chi = synth_exact_word(&word("ab", "ab"));
        for (v, expect) in [("ab", true), ("ba", false), ("a", false), ("abb", false)] {
            assert_eq!(evaluate(&word("ab", v), &chi, &Assignment::new()).unwrap(), expect, "{v}");
        }
        assert!(synth_exact_word(&word("ab", "ababa")).quantifier_rank() <= 7);
        assert!(synth_exact_word(&word("ab", "@eps")).quantifier_rank() <= 1);
    }

    #[test]
    fn exact_word_sentences_are_closed() {
        for s in ["@eps", "a", "ab", "abbab"] {
            assert!(synth_exact_word(&word("ab", s)).is_sentence());
        }
    }

    #[test]
    fn classifier_examples() {
        let empty = synth_horizon_classifier(&[], 5).unwrap();
        assert_eq!(empty, Formula::False);
        assert_eq!(empty.quantifier_rank(), 0);

        let eps = word("a", "@eps");
        let only_eps = synth_horizon_classifier(std::slice::from_ref(&eps), 3).unwrap();
        assert_eq!(only_eps, synth_length(0));
        assert_eq!(only_eps.quantifier_rank(), 1);

        let alpha = Arc::new(Alphabet::from_chars("a").unwrap());
        let even: Vec<Word> = (0..=8).step_by(2).map(|m| Word::parse(&alpha, "a").unwrap().power(m)).collect();
        let phi = synth_horizon_classifier(&even, 8).unwrap();
        assert!(phi.quantifier_rank() <= 7);
        for m in 0..=8 {
            let w = Word::parse(&alpha, "a").unwrap().power(m);
            assert_eq!(evaluate(&w, &phi, &Assignment::new()).unwrap(), m % 2 == 0);
        }
    }

    #[test]
    fn classifier_rejects_long_members() {
        let w = word("ab", "abab");
        assert!(matches!(synth_horizon_classifier(&[w], 3), Err(Error::MemberTooLong { n: 3, .. })));
    }

    #[test]
    fn dist_rank_bound_up_to_1024() {
        for d in 1..=1024 {
            assert!(synth_dist(d).quantifier_rank() <= ceil_log2(d) + 1, "d = {d}");
        }
    }

    #[test]
    fn variable_naming_is_reproducible() {
        let w = word("ab", "abba");
        assert_eq!(synth_exact_word(&w).to_string(), synth_exact_word(&w).to_string());
    }
}
