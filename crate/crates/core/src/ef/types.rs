//! Rank-q types of words, computed compositionally and interned.
//!
//! A rank-0 type carries no information: the signature has no constants, so
//! every word (including ε) satisfies the same rank-0 sentences. For `q ≥ 1`
//! the type of `w` is the set of rank-(q−1) types of `w` with one pebble
//! placed, over all positions. A word with one pebble on position `i` is
//! determined up to `≡_{q−1}` by the triple
//!
//! ```text
//! (type_{q-1}(w[..i]), w[i], type_{q-1}(w[i+1..]))
//! ```
//!
//! since formulas about either side relativize to `y < x` / `x < y` without
//! extra quantifiers, and Duplicator can play the two sides independently.
//! So the rank-q type is stored as a sorted, deduplicated set of such
//! triples. Types are memoized on the word's letters, which for a unary
//! alphabet is memoization on `(m, q)`.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::words::{Alphabet, Word};

static NEXT_TABLE: AtomicU64 = AtomicU64::new(0);

/// Magic prefix of the version-1 normal form.
pub const NORMAL_FORM_MAGIC: &[u8; 4] = b"RPT1";

/// Interned rank type. Equality is meaningful only within one [`TypeTable`];
/// compare across tables with [`TypeTable::fingerprint`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RankType {
    table: u64,
    rank: u32,
    id: u32,
}

impl RankType {
    pub fn rank(&self) -> usize {
        self.rank as usize
    }

    /// Dense id within the owning table.
    pub fn id(&self) -> u32 {
        self.id
    }
}

/// `δ_FO(u, v)`: least rank at which two distinct words are told apart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct RankDistance(pub usize);

type Entry = (u32, u8, u32);

struct TypeInfo {
    rank: u32,
    entries: Vec<Entry>,
}

/// Interning table for rank types over one alphabet.
pub struct TypeTable {
    id: u64,
    alphabet: Arc<Alphabet>,
    budget: u64,
    /// `by_word[q]`: letters -> type id at rank q.
    by_word: Vec<HashMap<Vec<u8>, u32>>,
    /// `by_entries[q]`: normal-form entries -> type id at rank q.
    by_entries: Vec<HashMap<Vec<Entry>, u32>>,
    info: Vec<TypeInfo>,
    fingerprints: Vec<Option<[u8; 32]>>,
}

const RANK_ZERO: u32 = 0;

impl TypeTable {
    pub fn new(alphabet: &Arc<Alphabet>, budget: u64) -> Self {
        TypeTable {
            id: NEXT_TABLE.fetch_add(1, Ordering::Relaxed),
            alphabet: Arc::clone(alphabet),
            budget,
            by_word: vec![HashMap::new()],
            by_entries: vec![HashMap::new()],
            info: vec![TypeInfo { rank: 0, entries: Vec::new() }],
            fingerprints: vec![None],
        }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    /// Number of distinct types interned so far, over all ranks.
    pub fn len(&self) -> usize {
        self.info.len()
    }

    pub fn is_empty(&self) -> bool {
        self.info.is_empty()
    }

    /// Upper estimate of the work for `rank_type(w, q)`: `q · (|w|+1)^3`.
    pub fn cost(len: usize, q: usize) -> u128 {
        let l = len as u128 + 1;
        q as u128 * l * l * l
    }

    fn check_word(&self, w: &Word) -> Result<()> {
        if **w.alphabet() != *self.alphabet {
            return Err(Error::AlphabetMismatch {
                left: self.alphabet.to_string(),
                right: w.alphabet().to_string(),
            });
        }
        Ok(())
    }

    fn check_cost(&self, len: usize, q: usize) -> Result<()> {
        let cost = Self::cost(len, q);
        if cost > u128::from(self.budget) {
            return Err(Error::CostCapExceeded { what: "rank_type", cost, budget: self.budget });
        }
        Ok(())
    }

    pub fn rank_type(&mut self, w: &Word, q: usize) -> Result<RankType> {
        self.check_word(w)?;
        self.check_cost(w.len(), q)?;
        let id = self.type_of(q, w.letters());
        Ok(RankType { table: self.id, rank: q as u32, id })
    }

    /// Rank types of many words at once; the cost check applies to the longest.
    pub fn rank_types<'a, I>(&mut self, words: I, q: usize) -> Result<Vec<RankType>>
    where
        I: IntoIterator<Item = &'a Word>,
    {
        words.into_iter().map(|w| self.rank_type(w, q)).collect()
    }

    pub fn equivalent(&mut self, u: &Word, v: &Word, q: usize) -> Result<bool> {
        Ok(self.rank_type(u, q)? == self.rank_type(v, q)?)
    }

    /// `δ_FO(u, v)`. The search runs from q = 1 and must stop by
    /// `max(1, ⌈log₂ max(|u|,|v|,1)⌉ + 4)`, where exact-word sentences
    /// separate any two distinct words.
    pub fn rank_distance(&mut self, u: &Word, v: &Word) -> Result<RankDistance> {
        u.same_alphabet(v)?;
        if u == v {
            return Err(Error::EqualWords(u.to_string()));
        }
        let bound = rank_distance_bound(u.len().max(v.len()));
        for q in 1..=bound {
            if !self.equivalent(u, v, q)? {
                return Ok(RankDistance(q));
            }
        }
        Err(Error::Internal(format!("{u} and {v} not separated by rank {bound}")))
    }

    fn type_of(&mut self, q: usize, w: &[u8]) -> u32 {
        if q == 0 {
            return RANK_ZERO;
        }
        if let Some(&id) = self.by_word.get(q).and_then(|m| m.get(w)) {
            return id;
        }
        let mut entries: Vec<Entry> = (0..w.len())
            .map(|i| (self.type_of(q - 1, &w[..i]), w[i], self.type_of(q - 1, &w[i + 1..])))
            .collect();
        entries.sort_unstable();
        entries.dedup();
        let id = self.intern(q, entries);
        self.by_word[q].insert(w.to_vec(), id);
        id
    }

    fn intern(&mut self, q: usize, entries: Vec<Entry>) -> u32 {
        while self.by_word.len() <= q {
            self.by_word.push(HashMap::new());
            self.by_entries.push(HashMap::new());
        }
        if let Some(&id) = self.by_entries[q].get(&entries) {
            return id;
        }
        let id = self.info.len() as u32;
        self.by_entries[q].insert(entries.clone(), id);
        self.info.push(TypeInfo { rank: q as u32, entries });
        self.fingerprints.push(None);
        id
    }

    fn owned(&self, t: RankType) -> Result<()> {
        if t.table != self.id {
            return Err(Error::Internal("rank type belongs to another table".into()));
        }
        Ok(())
    }

    /// Canonical, versioned byte encoding of a type.
    ///
    /// Layout: `RPT1`, rank (u32 BE), entry count (u32 BE), then for each
    /// entry, sorted bytewise: prefix fingerprint (32 bytes), symbol length
    /// (u8) and UTF-8 bytes, suffix fingerprint (32 bytes). Fingerprints are
    /// SHA-256 of the child's own normal form, so the encoding does not
    /// depend on interning order.
    pub fn normal_form(&mut self, t: RankType) -> Result<Vec<u8>> {
        self.owned(t)?;
        Ok(self.normal_form_of(t.id))
    }

    pub fn fingerprint(&mut self, t: RankType) -> Result<[u8; 32]> {
        self.owned(t)?;
        Ok(self.fingerprint_of(t.id))
    }

    fn normal_form_of(&mut self, id: u32) -> Vec<u8> {
        let rank = self.info[id as usize].rank;
        let entries = self.info[id as usize].entries.clone();
        let mut encoded: Vec<Vec<u8>> = entries
            .iter()
            .map(|&(pre, sym, suf)| {
                let mut e = Vec::with_capacity(70);
                e.extend_from_slice(&self.fingerprint_of(pre));
                let mut buf = [0u8; 4];
                let s = self.alphabet.symbol(sym).encode_utf8(&mut buf);
                e.push(s.len() as u8);
                e.extend_from_slice(s.as_bytes());
                e.extend_from_slice(&self.fingerprint_of(suf));
                e
            })
            .collect();
        encoded.sort();
        let mut out = Vec::with_capacity(12 + encoded.iter().map(Vec::len).sum::<usize>());
        out.extend_from_slice(NORMAL_FORM_MAGIC);
        out.extend_from_slice(&rank.to_be_bytes());
        out.extend_from_slice(&(encoded.len() as u32).to_be_bytes());
        encoded.iter().for_each(|e| out.extend_from_slice(e));
        out
    }

    fn fingerprint_of(&mut self, id: u32) -> [u8; 32] {
        if let Some(fp) = self.fingerprints[id as usize] {
            return fp;
        }
        let nf = self.normal_form_of(id);
        let fp: [u8; 32] = Sha256::digest(&nf).into();
        self.fingerprints[id as usize] = Some(fp);
        fp
    }
}

/// `max(1, ⌈log₂ max(len,1)⌉ + 4)`.
pub fn rank_distance_bound(len: usize) -> usize {
    (crate::ceil_log2(len.max(1)) + 4).max(1)
}

/// Sufficient test for `x^m ≡_q x^m2`: identical exponents, or both at
/// least `2^q`. `None` means the test is inconclusive.
pub fn power_equiv_shortcut(x: &Word, m: usize, m2: usize, q: usize) -> Result<Option<bool>> {
    if x.is_empty() {
        return Err(Error::EmptyBlock);
    }
    if m == m2 {
        return Ok(Some(true));
    }
    let threshold = u32::try_from(q).ok().and_then(|q| 1usize.checked_shl(q));
    Ok(match threshold {
        Some(t) if m >= t && m2 >= t => Some(true),
        _ => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ef::equiv_by_game;

    fn setup(alpha: &str) -> (Arc<Alphabet>, TypeTable) {
        let a = Arc::new(Alphabet::from_chars(alpha).unwrap());
        let t = TypeTable::new(&a, 100_000_000);
        (a, t)
    }

    fn w(a: &Arc<Alphabet>, s: &str) -> Word {
        Word::parse(a, s).unwrap()
    }

    #[test]
    fn rank_zero_is_trivial() {
        let (a, mut t) = setup("ab");
        assert_eq!(t.rank_type(&w(&a, "@eps"), 0).unwrap(), t.rank_type(&w(&a, "abba"), 0).unwrap());
    }

    #[test]
    fn rank_one_sees_letters() {
        let (a, mut t) = setup("ab");
        assert_ne!(t.rank_type(&w(&a, "a"), 1).unwrap(), t.rank_type(&w(&a, "b"), 1).unwrap());
        assert_eq!(t.rank_type(&w(&a, "a"), 1).unwrap(), t.rank_type(&w(&a, "aa"), 1).unwrap());
        assert!(equiv_by_game(&w(&a, "a"), &w(&a, "aa"), 1, 1 << 20).unwrap());
    }

    #[test]
    fn equivalence_examples() {
        let (a, mut t) = setup("ab");
        let u = w(&a, "abba");
        assert!(t.equivalent(&u, &u, 3).unwrap());
        assert!(!t.equivalent(&w(&a, "a"), &w(&a, "aa"), 2).unwrap());
        assert!(!equiv_by_game(&w(&a, "a"), &w(&a, "aa"), 2, 1 << 20).unwrap());
        let ab = w(&a, "ab");
        assert!(t.equivalent(&ab.power(4), &ab.power(5), 2).unwrap());
    }

    #[test]
    fn rank_distance_examples() {
        let (a, mut t) = setup("ab");
        assert_eq!(t.rank_distance(&w(&a, "@eps"), &w(&a, "a")).unwrap(), RankDistance(1));
        assert_eq!(t.rank_distance(&w(&a, "a"), &w(&a, "aa")).unwrap(), RankDistance(2));
        assert!(t.rank_distance(&w(&a, "ab"), &w(&a, "ba")).unwrap().0 <= 5);
        assert!(matches!(t.rank_distance(&w(&a, "ab"), &w(&a, "ab")), Err(Error::EqualWords(_))));
    }

    #[test]
    fn power_shortcut_examples() {
        let (a, _) = setup("ab");
        assert_eq!(power_equiv_shortcut(&w(&a, "a"), 8, 9, 3).unwrap(), Some(true));
        assert_eq!(power_equiv_shortcut(&w(&a, "ab"), 2, 3, 2).unwrap(), None);
        assert_eq!(power_equiv_shortcut(&w(&a, "a"), 4, 4, 10).unwrap(), Some(true));
        assert_eq!(power_equiv_shortcut(&w(&a, "a"), 4, 5, 200).unwrap(), None);
        assert!(matches!(power_equiv_shortcut(&w(&a, "@eps"), 4, 5, 1), Err(Error::EmptyBlock)));
    }

    #[test]
    fn cost_cap_refuses() {
        let a = Arc::new(Alphabet::from_chars("a").unwrap());
        let mut t = TypeTable::new(&a, 1000);
        let long = w(&a, "a").power(20);
        assert!(matches!(t.rank_type(&long, 3), Err(Error::CostCapExceeded { .. })));
        assert!(t.rank_type(&w(&a, "aaa"), 3).is_ok());
    }

    #[test]
    fn alphabet_mismatch_is_rejected() {
        let (_, mut t) = setup("ab");
        let other = Arc::new(Alphabet::from_chars("a").unwrap());
        assert!(matches!(t.rank_type(&w(&other, "a"), 1), Err(Error::AlphabetMismatch { .. })));
    }

    #[test]
    fn fingerprints_agree_across_tables() {
        let (a, mut t1) = setup("ab");
        let mut t2 = TypeTable::new(&a, 1 << 30);
        // Intern in different orders so ids differ.
        for s in ["abab", "b", "aab"] {
            t2.rank_type(&w(&a, s), 3).unwrap();
        }
        for s in ["@eps", "a", "ab", "ba", "abba", "babab"] {
            let x = t1.rank_type(&w(&a, s), 3).unwrap();
            let y = t2.rank_type(&w(&a, s), 3).unwrap();
            assert_eq!(t1.fingerprint(x).unwrap(), t2.fingerprint(y).unwrap(), "{s}");
            assert_eq!(t1.normal_form(x).unwrap(), t2.normal_form(y).unwrap());
        }
        let x = t1.rank_type(&w(&a, "ab"), 2).unwrap();
        let y = t2.rank_type(&w(&a, "ba"), 2).unwrap();
        assert_ne!(t1.fingerprint(x).unwrap(), t2.fingerprint(y).unwrap());
        assert!(t1.fingerprint(y).is_err());
    }

    #[test]
    fn normal_form_layout() {
        let (a, mut t) = setup("ab");
        let zero = t.rank_type(&w(&a, "ab"), 0).unwrap();
        assert_eq!(t.normal_form(zero).unwrap(), b"RPT1\0\0\0\0\0\0\0\0".to_vec());
        let one = t.rank_type(&w(&a, "ab"), 1).unwrap();
        let nf = t.normal_form(one).unwrap();
        assert_eq!(&nf[..12], b"RPT1\0\0\0\x01\0\0\0\x02");
        assert_eq!(nf.len(), 12 + 2 * (32 + 2 + 32));
    }

    #[test]
    fn unary_long_orders_collapse() {
        let (a, mut t) = setup("a");
        for q in 0..=4usize {
            let threshold = 1usize << q;
            let base = t.rank_type(&w(&a, "a").power(threshold), q).unwrap();
            for m in threshold..=threshold + 10 {
                assert_eq!(t.rank_type(&w(&a, "a").power(m), q).unwrap(), base, "q={q} m={m}");
            }
        }
    }
}
