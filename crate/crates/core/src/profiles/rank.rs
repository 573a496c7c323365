//! Exact rank and separator profiles on the ball, defect sets and the
//! global rank search.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use serde::Serialize;

use super::language::LanguageHandle;
use crate::ef::TypeTable;
use crate::error::{Error, Result};
use crate::words::{ball_size, enumerate_ball, Alphabet, Word};
use crate::{universal_upper_bound, Caps};

/// `ρ_L(n)` with a certificate: a member and a non-member that are
/// `≡_(ρ−1)`-equivalent. No certificate when the value is 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RhoResult {
    pub n: usize,
    pub value: usize,
    pub witness: Option<(Word, Word)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DefectPair {
    pub accepting: u32,
    pub rejecting: u32,
    pub member: Word,
    pub nonmember: Word,
}

/// Accepting/rejecting syntactic-element pairs realized by `≡_q`-equivalent
/// words of length at most `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DefectSet {
    pub q: usize,
    pub n: usize,
    pub pairs: Vec<DefectPair>,
}

impl DefectSet {
    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Shortlex ball shared by successive horizons, with rank types cached in a
/// single table.
struct BallCache {
    alphabet: Arc<Alphabet>,
    caps: Caps,
    table: TypeTable,
    words: Vec<Word>,
    radius: Option<usize>,
}

impl BallCache {
    fn new(alphabet: &Arc<Alphabet>, caps: Caps) -> Self {
        BallCache {
            alphabet: Arc::clone(alphabet),
            caps,
            table: TypeTable::new(alphabet, caps.budget),
            words: Vec::new(),
            radius: None,
        }
    }

    /// Makes the ball of radius `n` available; returns its size.
    fn ensure(&mut self, n: usize) -> Result<usize> {
        let max = self.caps.horizon_cap(self.alphabet.is_unary());
        if n > max {
            return Err(Error::HorizonCap { n, max });
        }
        if self.radius.is_none_or(|r| r < n) {
            self.words = enumerate_ball(&self.alphabet, n, self.caps.ball_cap)?.collect();
            self.radius = Some(n);
        }
        Ok(ball_size(self.alphabet.len(), n) as usize)
    }

    fn type_ids(&mut self, count: usize, q: usize) -> Result<Vec<u32>> {
        if q == 0 {
            return Ok(vec![0; count]);
        }
        let table = &mut self.table;
        self.words[..count].iter().map(|w| table.rank_type(w, q).map(|t| t.id())).collect()
    }

    /// Least `q` at which no `≡_q` class holds a `Some(true)` and a
    /// `Some(false)` word, with the first mixed pair at `q − 1`.
    fn least_separating_rank(&mut self, n: usize, labels: &[Option<bool>]) -> Result<(usize, Option<(usize, usize)>)> {
        let first = |want: bool| labels.iter().position(|&l| l == Some(want));
        let (Some(a), Some(b)) = (first(true), first(false)) else {
            return Ok((0, None));
        };
        let mut pair = (a, b);
        let bound = universal_upper_bound(n.max(1));
        for q in 1..=bound {
            let ids = self.type_ids(labels.len(), q)?;
            match first_mixed_class(&ids, labels) {
                None => return Ok((q, Some(pair))),
                Some(p) => pair = p,
            }
        }
        Err(Error::Internal(format!("no separating rank up to the universal bound {bound} at n = {n}")))
    }
}

/// First class (by least word) holding both labels, as (first true, first false).
fn first_mixed_class(ids: &[u32], labels: &[Option<bool>]) -> Option<(usize, usize)> {
    let mut seen: HashMap<u32, (Option<usize>, Option<usize>)> = HashMap::new();
    let mut best: Option<(usize, (usize, usize))> = None;
    let mut class_start: HashMap<u32, usize> = HashMap::new();
    for (i, (&id, &label)) in ids.iter().zip(labels).enumerate() {
        let start = *class_start.entry(id).or_insert(i);
        let Some(label) = label else { continue };
        let slot = seen.entry(id).or_default();
        let side = if label { &mut slot.0 } else { &mut slot.1 };
        if side.is_none() {
            *side = Some(i);
            if let (Some(u), Some(v)) = *slot {
                if best.is_none_or(|(s, _)| start < s) {
                    best = Some((start, (u, v)));
                }
            }
        }
    }
    best.map(|(_, p)| p)
}

/// Exact profile computations for one language.
pub struct Profiler<'a> {
    lang: &'a LanguageHandle,
    ball: BallCache,
}

impl<'a> Profiler<'a> {
    pub fn new(lang: &'a LanguageHandle, caps: Caps) -> Self {
        Profiler { lang, ball: BallCache::new(lang.alphabet(), caps) }
    }

    pub fn language(&self) -> &LanguageHandle {
        self.lang
    }

    /// Least `q` such that `≡_q` saturates `L` on `Σ^{≤n}`.
    pub fn rho(&mut self, n: usize) -> Result<RhoResult> {
        let count = self.ball.ensure(n)?;
        let labels: Vec<Option<bool>> =
            self.ball.words[..count].iter().map(|w| Some(self.lang.dfa().accepts_letters(w.letters()))).collect();
        let (value, pair) = self.ball.least_separating_rank(n, &labels)?;
        let witness = pair.map(|(u, v)| (self.ball.words[u].clone(), self.ball.words[v].clone()));
        Ok(RhoResult { n, value, witness })
    }

    /// `ρ_L(n)` as the least `q` with an empty defect set.
    pub fn rho_via_defect(&mut self, n: usize) -> Result<usize> {
        let bound = universal_upper_bound(n.max(1));
        for q in 0..=bound {
            if self.defect_set(q, n)?.is_empty() {
                return Ok(q);
            }
        }
        Err(Error::Internal(format!("defect set nonempty at the universal bound {bound} at n = {n}")))
    }

    pub fn defect_set(&mut self, q: usize, n: usize) -> Result<DefectSet> {
        let count = self.ball.ensure(n)?;
        let monoid = self.lang.monoid()?;
        let ids = self.ball.type_ids(count, q)?;
        // class -> element -> first word index, in order of appearance.
        let mut classes: Vec<Vec<(u32, usize)>> = Vec::new();
        let mut class_of: HashMap<u32, usize> = HashMap::new();
        for (i, &id) in ids.iter().enumerate() {
            let c = *class_of.entry(id).or_insert_with(|| {
                classes.push(Vec::new());
                classes.len() - 1
            });
            let e = monoid.element_of(self.ball.words[i].letters());
            if !classes[c].iter().any(|&(f, _)| f == e) {
                classes[c].push((e, i));
            }
        }
        let mut found: HashMap<(u32, u32), (usize, usize)> = HashMap::new();
        for class in &classes {
            for &(a, u) in class.iter().filter(|(e, _)| monoid.is_accepting(*e)) {
                for &(r, v) in class.iter().filter(|(e, _)| !monoid.is_accepting(*e)) {
                    found.entry((a, r)).or_insert((u, v));
                }
            }
        }
        let mut pairs: Vec<DefectPair> = found
            .into_iter()
            .map(|((accepting, rejecting), (u, v))| DefectPair {
                accepting,
                rejecting,
                member: self.ball.words[u].clone(),
                nonmember: self.ball.words[v].clone(),
            })
            .collect();
        pairs.sort_by_key(|p| (p.accepting, p.rejecting));
        Ok(DefectSet { q, n, pairs })
    }
}

pub fn rho(lang: &LanguageHandle, n: usize) -> Result<RhoResult> {
    Profiler::new(lang, Caps::from_env()).rho(n)
}

pub fn rho_via_defect(lang: &LanguageHandle, n: usize) -> Result<usize> {
    Profiler::new(lang, Caps::from_env()).rho_via_defect(n)
}

pub fn defect_set(lang: &LanguageHandle, q: usize, n: usize) -> Result<DefectSet> {
    Profiler::new(lang, Caps::from_env()).defect_set(q, n)
}

/// `σ_{K,H}(n)` with a certificate pair `(u ∈ K, v ∈ H)` at rank `σ − 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SigmaResult {
    pub n: usize,
    pub value: usize,
    pub witness: Option<(Word, Word)>,
}

/// Separator profile of two languages over the union of their alphabets.
pub struct Separator {
    k: LanguageHandle,
    h: LanguageHandle,
    ball: BallCache,
    globally_disjoint: bool,
}

impl Separator {
    pub fn new(k: &LanguageHandle, h: &LanguageHandle, caps: Caps) -> Result<Self> {
        let alphabet = Arc::new(k.alphabet().union(h.alphabet()));
        let (k, h) = (k.over(&alphabet)?, h.over(&alphabet)?);
        let globally_disjoint = k.dfa().intersection_witness(h.dfa())?.is_none();
        Ok(Separator { ball: BallCache::new(&alphabet, caps), k, h, globally_disjoint })
    }

    /// No word at all lies in both languages (product automaton check).
    pub fn globally_disjoint(&self) -> bool {
        self.globally_disjoint
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        self.k.alphabet()
    }

    pub fn sigma(&mut self, n: usize) -> Result<SigmaResult> {
        let count = self.ball.ensure(n)?;
        let mut labels = Vec::with_capacity(count);
        for w in &self.ball.words[..count] {
            let (in_k, in_h) = (self.k.dfa().accepts_letters(w.letters()), self.h.dfa().accepts_letters(w.letters()));
            if in_k && in_h {
                return Err(Error::NotDisjoint(w.to_string()));
            }
            labels.push(if in_k { Some(true) } else if in_h { Some(false) } else { None });
        }
        let (value, pair) = self.ball.least_separating_rank(n, &labels)?;
        let witness = pair.map(|(u, v)| (self.ball.words[u].clone(), self.ball.words[v].clone()));
        Ok(SigmaResult { n, value, witness })
    }
}

pub fn sigma(k: &LanguageHandle, h: &LanguageHandle, n: usize) -> Result<SigmaResult> {
    Separator::new(k, h, Caps::from_env())?.sigma(n)
}

/// Least `q ≤ q_max` such that `L` is a union of `≡_q` classes, found on
/// the reachable part of `T_q(Σ) × Syn(L)`. `None` when no such `q` exists
/// up to `q_max`.
pub fn min_global_rank(lang: &LanguageHandle, q_max: usize, caps: Caps) -> Result<Option<usize>> {
    let monoid = lang.monoid()?;
    let mut table = TypeTable::new(lang.alphabet(), caps.budget);
    'ranks: for q in 0..=q_max {
        let type_of = |table: &mut TypeTable, w: &Word| -> Result<u32> {
            if q == 0 {
                Ok(0)
            } else {
                table.rank_type(w, q).map(|t| t.id())
            }
        };
        let eps = Word::empty(lang.alphabet());
        let start = (type_of(&mut table, &eps)?, monoid.identity());
        let mut seen = HashMap::from([(start, ())]);
        let mut queue = VecDeque::from([(eps, start)]);
        let mut polarity: HashMap<u32, bool> = HashMap::new();
        let mut step: HashMap<(u32, u8), u32> = HashMap::new();
        while let Some((w, (t, e))) = queue.pop_front() {
            let acc = monoid.is_accepting(e);
            if *polarity.entry(t).or_insert(acc) != acc {
                continue 'ranks;
            }
            for c in 0..lang.alphabet().len() as u8 {
                let mut letters = w.letters().to_vec();
                letters.push(c);
                let next_word = Word::from_letters(lang.alphabet(), letters)?;
                let nt = type_of(&mut table, &next_word)?;
                if *step.entry((t, c)).or_insert(nt) != nt {
                    return Err(Error::Internal(format!("rank-{q} types are not a right congruence at {next_word}")));
                }
                let node = (nt, monoid.multiply(e, monoid.letter(c)));
                if !seen.contains_key(&node) {
                    if seen.len() >= caps.product_cap {
                        return Err(Error::CostCapExceeded {
                            what: "min_global_rank",
                            cost: seen.len() as u128 + 1,
                            budget: caps.product_cap as u64,
                        });
                    }
                    seen.insert(node, ());
                    queue.push_back((next_word, node));
                }
            }
        }
        return Ok(Some(q));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::language::builtin;

    fn lang(re: &str) -> LanguageHandle {
        LanguageHandle::parse_spec(&format!("regex:{re}")).unwrap()
    }

    #[test]
    fn empty_language_profile_is_zero() {
        let l = lang("@empty");
        for n in 0..5 {
            assert_eq!(rho(&l, n).unwrap(), RhoResult { n, value: 0, witness: None });
        }
    }

    #[test]
    fn parity_small_horizons() {
        let even = builtin("even").unwrap();
        let r1 = rho(&even, 1).unwrap();
        assert_eq!(r1.value, 1);
        let (u, v) = r1.witness.unwrap();
        assert_eq!((u.to_string(), v.to_string()), ("@eps".to_string(), "a".to_string()));
        assert_eq!(rho(&even, 2).unwrap().value, 2);
        assert_eq!(rho_via_defect(&even, 2).unwrap(), 2);
    }

    #[test]
    fn defect_examples() {
        let even = builtin("even").unwrap();
        let d = defect_set(&even, 1, 2).unwrap();
        assert_eq!(d.pairs.len(), 1);
        assert_eq!((d.pairs[0].member.to_string(), d.pairs[0].nonmember.to_string()), ("aa".into(), "a".into()));
        assert!(defect_set(&even, 5, 2).unwrap().is_empty());
        let all = lang("(a|b)*");
        assert!(defect_set(&all, 0, 3).unwrap().is_empty());
        assert_eq!(rho_via_defect(&all, 3).unwrap(), 0);
    }

    #[test]
    fn horizon_cap_is_reported() {
        let l = lang("a*b*");
        assert!(matches!(rho(&l, 11), Err(Error::HorizonCap { n: 11, max: 10 })));
        assert!(matches!(rho(&builtin("even").unwrap(), 65), Err(Error::HorizonCap { n: 65, max: 64 })));
    }

    #[test]
    fn sigma_examples() {
        let (k, h) = (lang("(aa)*"), lang("a(aa)*"));
        let even = builtin("even").unwrap();
        let mut sep = Separator::new(&k, &h, Caps::default()).unwrap();
        assert!(sep.globally_disjoint());
        for n in 0..=8 {
            assert_eq!(sep.sigma(n).unwrap().value, rho(&even, n).unwrap().value, "n = {n}");
        }
        let empty = lang("@empty");
        assert_eq!(sigma(&empty, &h, 5).unwrap().value, 0);
        for n in 1..=4 {
            assert_eq!(sigma(&lang("a"), &lang("b"), n).unwrap().value, 1);
        }
        let err = sigma(&lang("a*"), &lang("aa*"), 2).unwrap_err();
        assert_eq!(err, Error::NotDisjoint("a".into()));
    }

    #[test]
    fn global_rank_examples() {
        assert_eq!(min_global_rank(&lang("(a|b)*"), 3, Caps::default()).unwrap(), Some(0));
        assert_eq!(min_global_rank(&lang("(a|b)*a(a|b)*"), 3, Caps::default()).unwrap(), Some(1));
        assert_eq!(min_global_rank(&builtin("even").unwrap(), 6, Caps::default()).unwrap(), None);
        let t3 = builtin("threshold:3").unwrap();
        assert_eq!(min_global_rank(&t3, 6, Caps::default()).unwrap(), Some(2));
    }
}
