//! Complete deterministic automata.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::regex::{Nfa, Regex};
use crate::error::{Error, Result};
use crate::words::{Alphabet, Word};

/// A complete DFA. `delta[state][letter]` is the successor state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Arc<Alphabet>,
    delta: Vec<Vec<u32>>,
    start: u32,
    accepting: Vec<bool>,
}

impl Dfa {
    pub fn new(alphabet: Arc<Alphabet>, delta: Vec<Vec<u32>>, start: u32, accepting: Vec<bool>) -> Result<Dfa> {
        let n = delta.len();
        if n == 0 {
            return Err(Error::DfaFormat("a DFA needs at least one state".into()));
        }
        if accepting.len() != n {
            return Err(Error::DfaFormat(format!("{} acceptance flags for {n} states", accepting.len())));
        }
        if start as usize >= n {
            return Err(Error::DfaFormat(format!("start state {start} out of range")));
        }
        for (s, row) in delta.iter().enumerate() {
            if row.len() != alphabet.len() {
                return Err(Error::DfaFormat(format!(
                    "state {s} has {} transitions, expected {}",
                    row.len(),
                    alphabet.len()
                )));
            }
            if let Some(t) = row.iter().find(|&&t| t as usize >= n) {
                return Err(Error::DfaFormat(format!("state {s} moves to unknown state {t}")));
            }
        }
        Ok(Dfa { alphabet, delta, start, accepting })
    }

    /// Minimal DFA of `regex`; the alphabet is inferred when not given.
    pub fn from_regex(regex: &Regex, alphabet: Option<Arc<Alphabet>>) -> Result<Dfa> {
        let alphabet = match alphabet {
            Some(a) => a,
            None => regex.inferred_alphabet()?,
        };
        let nfa = Nfa::thompson(regex, &alphabet)?;
        let mut ids: HashMap<Vec<usize>, u32> = HashMap::new();
        let mut sets: Vec<Vec<usize>> = Vec::new();
        let mut delta: Vec<Vec<u32>> = Vec::new();
        let start: Vec<usize> = nfa.closure([nfa.start]).into_iter().collect();
        ids.insert(start.clone(), 0);
        sets.push(start);
        let mut i = 0;
        while i < sets.len() {
            let mut row = Vec::with_capacity(alphabet.len());
            for c in 0..alphabet.len() as u8 {
                let moved = sets[i]
                    .iter()
                    .flat_map(|&q| nfa.moves[q].iter().filter(move |(l, _)| *l == c).map(|&(_, t)| t));
                let target: Vec<usize> = nfa.closure(moved).into_iter().collect();
                let id = match ids.get(&target) {
                    Some(&id) => id,
                    None => {
                        let id = sets.len() as u32;
                        ids.insert(target.clone(), id);
                        sets.push(target);
                        id
                    }
                };
                row.push(id);
            }
            delta.push(row);
            i += 1;
        }
        let accepting = sets.iter().map(|s| s.contains(&nfa.accept)).collect();
        Ok(Dfa { alphabet, delta, start: 0, accepting }.minimize())
    }

    pub fn parse_regex(text: &str, alphabet: Option<Arc<Alphabet>>) -> Result<Dfa> {
        Dfa::from_regex(&Regex::parse(text)?, alphabet)
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.delta.len()
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn is_accepting(&self, state: u32) -> bool {
        self.accepting[state as usize]
    }

    pub fn step(&self, state: u32, letter: u8) -> u32 {
        self.delta[state as usize][letter as usize]
    }

    pub fn transitions(&self) -> &[Vec<u32>] {
        &self.delta
    }

    pub fn run_from(&self, state: u32, letters: &[u8]) -> u32 {
        letters.iter().fold(state, |s, &c| self.step(s, c))
    }

    pub fn accepts_letters(&self, letters: &[u8]) -> bool {
        self.is_accepting(self.run_from(self.start, letters))
    }

    pub fn membership(&self, w: &Word) -> Result<bool> {
        if **w.alphabet() != *self.alphabet {
            return Err(Error::AlphabetMismatch { left: w.alphabet().to_string(), right: self.alphabet.to_string() });
        }
        Ok(self.accepts_letters(w.letters()))
    }

    pub fn complement(&self) -> Dfa {
        Dfa { accepting: self.accepting.iter().map(|a| !a).collect(), ..self.clone() }
    }

    /// Reachable, minimal and canonically numbered (breadth-first from the
    /// start state, letters in alphabet order).
    pub fn minimize(&self) -> Dfa {
        let reach = self.canonical();
        let n = reach.delta.len();
        let k = reach.alphabet.len();
        let mut class: Vec<u32> = reach.accepting.iter().map(|&a| u32::from(a)).collect();
        let mut classes = class.iter().copied().collect::<std::collections::BTreeSet<_>>().len();
        loop {
            let mut sig_ids: HashMap<Vec<u32>, u32> = HashMap::new();
            let mut next = Vec::with_capacity(n);
            for s in 0..n {
                let mut sig = Vec::with_capacity(k + 1);
                sig.push(class[s]);
                sig.extend(reach.delta[s].iter().map(|&t| class[t as usize]));
                let fresh = sig_ids.len() as u32;
                next.push(*sig_ids.entry(sig).or_insert(fresh));
            }
            let count = sig_ids.len();
            class = next;
            if count == classes {
                break;
            }
            classes = count;
        }
        let mut delta = vec![Vec::new(); classes];
        let mut accepting = vec![false; classes];
        for s in 0..n {
            let c = class[s] as usize;
            if delta[c].is_empty() {
                delta[c] = reach.delta[s].iter().map(|&t| class[t as usize]).collect();
                accepting[c] = reach.accepting[s];
            }
        }
        let quotient = Dfa { alphabet: Arc::clone(&reach.alphabet), delta, start: class[reach.start as usize], accepting };
        quotient.canonical()
    }

    /// Drops unreachable states and renumbers in breadth-first order.
    fn canonical(&self) -> Dfa {
        let mut id = vec![u32::MAX; self.delta.len()];
        let mut order = vec![self.start];
        id[self.start as usize] = 0;
        let mut queue = VecDeque::from([self.start]);
        while let Some(s) = queue.pop_front() {
            for &t in &self.delta[s as usize] {
                if id[t as usize] == u32::MAX {
                    id[t as usize] = order.len() as u32;
                    order.push(t);
                    queue.push_back(t);
                }
            }
        }
        let delta = order.iter().map(|&s| self.delta[s as usize].iter().map(|&t| id[t as usize]).collect()).collect();
        let accepting = order.iter().map(|&s| self.accepting[s as usize]).collect();
        Dfa { alphabet: Arc::clone(&self.alphabet), delta, start: 0, accepting }
    }

    /// The same language over a larger alphabet; new letters lead to a
    /// rejecting sink. Symbols keep their identity, not their index.
    pub fn extend_alphabet(&self, target: &Arc<Alphabet>) -> Result<Dfa> {
        let map: Vec<Option<usize>> = target
            .symbols()
            .iter()
            .map(|&c| self.alphabet.index_of(c).map(usize::from))
            .collect();
        if let Some(&c) = self.alphabet.symbols().iter().find(|&&c| target.index_of(c).is_none()) {
            return Err(Error::UnknownSymbol { symbol: c, alphabet: target.to_string() });
        }
        let sink = self.delta.len() as u32;
        let mut delta: Vec<Vec<u32>> = self
            .delta
            .iter()
            .map(|row| map.iter().map(|m| m.map_or(sink, |i| row[i])).collect())
            .collect();
        delta.push(vec![sink; target.len()]);
        let mut accepting = self.accepting.clone();
        accepting.push(false);
        Ok(Dfa { alphabet: Arc::clone(target), delta, start: self.start, accepting }.minimize())
    }

    /// Shortlex-least word accepted by both automata, if any.
    pub fn intersection_witness(&self, other: &Dfa) -> Result<Option<Word>> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch { left: self.alphabet.to_string(), right: other.alphabet.to_string() });
        }
        let key = |a: u32, b: u32| a as usize * other.delta.len() + b as usize;
        let mut parent: HashMap<usize, (usize, u8)> = HashMap::new();
        let root = key(self.start, other.start);
        let mut seen = std::collections::HashSet::from([root]);
        let mut queue = VecDeque::from([(self.start, other.start)]);
        while let Some((a, b)) = queue.pop_front() {
            if self.is_accepting(a) && other.is_accepting(b) {
                let mut letters = Vec::new();
                let mut cur = key(a, b);
                while cur != root {
                    let (prev, c) = parent[&cur];
                    letters.push(c);
                    cur = prev;
                }
                letters.reverse();
                return Word::from_letters(&self.alphabet, letters).map(Some);
            }
            for c in 0..self.alphabet.len() as u8 {
                let (na, nb) = (self.step(a, c), other.step(b, c));
                if seen.insert(key(na, nb)) {
                    parent.insert(key(na, nb), (key(a, b), c));
                    queue.push_back((na, nb));
                }
            }
        }
        Ok(None)
    }

    pub fn to_file(&self) -> DfaFile {
        DfaFile {
            alphabet: self.alphabet.symbols().iter().map(|c| c.to_string()).collect(),
            states: self.delta.len(),
            start: self.start as usize,
            accept: (0..self.delta.len()).filter(|&s| self.accepting[s]).collect(),
            delta: Delta::Rows(
                self.delta.iter().map(|row| row.iter().map(|&t| t as usize).collect()).collect(),
            ),
        }
    }

    pub fn from_file(file: &DfaFile) -> Result<Dfa> {
        let symbols = file
            .alphabet
            .iter()
            .map(|s| {
                let mut it = s.chars();
                match (it.next(), it.next()) {
                    (Some(c), None) => Ok(c),
                    _ => Err(Error::DfaFormat(format!("symbol {s:?} is not a single character"))),
                }
            })
            .collect::<Result<Vec<char>>>()?;
        let alphabet = Arc::new(Alphabet::new(symbols)?);
        let k = alphabet.len();
        let rows: Vec<Vec<usize>> = match &file.delta {
            Delta::Rows(rows) => rows.clone(),
            Delta::Flat(flat) => {
                if flat.len() != file.states * k {
                    return Err(Error::DfaFormat(format!(
                        "flat delta has {} entries, expected {}",
                        flat.len(),
                        file.states * k
                    )));
                }
                flat.chunks(k).map(<[usize]>::to_vec).collect()
            }
        };
        if rows.len() != file.states {
            return Err(Error::DfaFormat(format!("delta has {} rows for {} states", rows.len(), file.states)));
        }
        let mut accepting = vec![false; file.states];
        for &a in &file.accept {
            *accepting
                .get_mut(a)
                .ok_or_else(|| Error::DfaFormat(format!("accepting state {a} out of range")))? = true;
        }
        let to_u32 = |x: usize| u32::try_from(x).map_err(|_| Error::DfaFormat(format!("state {x} out of range")));
        let delta = rows
            .into_iter()
            .map(|row| row.into_iter().map(to_u32).collect::<Result<Vec<u32>>>())
            .collect::<Result<Vec<_>>>()?;
        Dfa::new(alphabet, delta, to_u32(file.start)?, accepting)
    }

    pub fn from_json(text: &str) -> Result<Dfa> {
        let file: DfaFile = serde_json::from_str(text).map_err(|e| Error::DfaFormat(e.to_string()))?;
        Dfa::from_file(&file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("DFA file serializes")
    }
}

/// On-disk DFA description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DfaFile {
    pub alphabet: Vec<String>,
    pub states: usize,
    pub start: usize,
    pub accept: Vec<usize>,
    pub delta: Delta,
}

/// Transition table, one row per state, or flattened row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Delta {
    Rows(Vec<Vec<usize>>),
    Flat(Vec<usize>),
}
