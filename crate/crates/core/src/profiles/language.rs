//! Language handles and the `regex:` / `dfa:` / `builtin:` spec syntax.

use std::cell::OnceCell;
use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::regular::{Dfa, FiniteMonoid};
use crate::words::{Alphabet, Word};

/// A regular language as a minimal complete DFA, with its syntactic monoid
/// built on first use.
#[derive(Debug, Clone)]
pub struct LanguageHandle {
    dfa: Dfa,
    description: String,
    monoid_cap: usize,
    monoid: OnceCell<std::result::Result<FiniteMonoid, Error>>,
}

impl LanguageHandle {
    pub fn from_dfa(dfa: &Dfa, description: impl Into<String>) -> LanguageHandle {
        LanguageHandle {
            dfa: dfa.minimize(),
            description: description.into(),
            monoid_cap: crate::Caps::default().monoid_cap,
            monoid: OnceCell::new(),
        }
    }

    pub fn from_regex(pattern: &str, alphabet: Option<Arc<Alphabet>>) -> Result<LanguageHandle> {
        let dfa = Dfa::parse_regex(pattern, alphabet)?;
        Ok(LanguageHandle::from_dfa(&dfa, format!("regex:{pattern}")))
    }

    /// Parses `regex:<pattern>`, `dfa:<path>` or `builtin:<name>`.
    pub fn parse_spec(spec: &str) -> Result<LanguageHandle> {
        LanguageHandle::parse_spec_with(spec, None)
    }

    /// As [`parse_spec`](Self::parse_spec), over `alphabet` when given: a
    /// regex is read over it, other specs are extended to it.
    pub fn parse_spec_with(spec: &str, alphabet: Option<Arc<Alphabet>>) -> Result<LanguageHandle> {
        let bad = |msg: &str| Error::LanguageSpec { spec: spec.to_string(), msg: msg.to_string() };
        if let Some(pattern) = spec.strip_prefix("regex:") {
            return LanguageHandle::from_regex(pattern, alphabet);
        }
        let handle = LanguageHandle::parse_non_regex(spec, &bad)?;
        match alphabet {
            Some(a) => handle.over(&a),
            None => Ok(handle),
        }
    }

    fn parse_non_regex(spec: &str, bad: &dyn Fn(&str) -> Error) -> Result<LanguageHandle> {
        if let Some(path) = spec.strip_prefix("dfa:") {
            let text = std::fs::read_to_string(path).map_err(|e| bad(&e.to_string()))?;
            Ok(LanguageHandle::from_dfa(&Dfa::from_json(&text)?, spec))
        } else if let Some(name) = spec.strip_prefix("builtin:") {
            builtin(name).map_err(|e| match e {
                Error::LanguageSpec { msg, .. } => bad(&msg),
                other => other,
            })
        } else {
            Err(bad("expected a regex:, dfa: or builtin: prefix"))
        }
    }

    pub fn with_monoid_cap(mut self, cap: usize) -> LanguageHandle {
        self.monoid_cap = cap;
        self.monoid = OnceCell::new();
        self
    }

    pub fn dfa(&self) -> &Dfa {
        &self.dfa
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        self.dfa.alphabet()
    }

    pub fn is_unary(&self) -> bool {
        self.alphabet().is_unary()
    }

    pub fn contains(&self, w: &Word) -> Result<bool> {
        self.dfa.membership(w)
    }

    pub fn monoid(&self) -> Result<&FiniteMonoid> {
        self.monoid
            .get_or_init(|| FiniteMonoid::of(&self.dfa, self.monoid_cap))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn complement(&self) -> LanguageHandle {
        LanguageHandle::from_dfa(&self.dfa.complement(), format!("complement({})", self.description))
    }

    /// The same language over a superset alphabet.
    pub fn over(&self, alphabet: &Arc<Alphabet>) -> Result<LanguageHandle> {
        if self.alphabet() == alphabet {
            return Ok(self.clone());
        }
        let dfa = self.dfa.extend_alphabet(alphabet)?;
        Ok(LanguageHandle { dfa, description: self.description.clone(), monoid_cap: self.monoid_cap, monoid: OnceCell::new() })
    }
}

fn unary() -> Arc<Alphabet> {
    Arc::new(Alphabet::from_chars("a").expect("valid alphabet"))
}

/// Unary language `{a^m : m mod p ∈ residues}`.
pub fn mod_language(p: usize, residues: &BTreeSet<usize>) -> Result<LanguageHandle> {
    if p == 0 {
        return Err(Error::LanguageSpec { spec: format!("mod:{p}"), msg: "modulus must be positive".into() });
    }
    let delta = (0..p).map(|s| vec![((s + 1) % p) as u32]).collect();
    let accepting = (0..p).map(|s| residues.contains(&s)).collect();
    let dfa = Dfa::new(unary(), delta, 0, accepting)?;
    let list: Vec<String> = residues.iter().map(ToString::to_string).collect();
    Ok(LanguageHandle::from_dfa(&dfa, format!("builtin:mod:{p}:{{{}}}", list.join(","))))
}

/// Unary language `{a^m : m ≥ t}`.
pub fn threshold_language(t: usize) -> Result<LanguageHandle> {
    let delta = (0..=t).map(|s| vec![(s + 1).min(t) as u32]).collect();
    let accepting = (0..=t).map(|s| s == t).collect();
    let dfa = Dfa::new(unary(), delta, 0, accepting)?;
    Ok(LanguageHandle::from_dfa(&dfa, format!("builtin:threshold:{t}")))
}

/// The finite language listing `words`; the alphabet is their letters,
/// sorted (`{a}` when only ε is listed).
pub fn exact_language(words: &[&str]) -> Result<LanguageHandle> {
    let symbols: BTreeSet<char> =
        words.iter().filter(|w| **w != crate::words::EPS_TOKEN).flat_map(|w| w.chars()).collect();
    let alphabet = if symbols.is_empty() { unary() } else { Arc::new(Alphabet::new(symbols)?) };
    let k = alphabet.len();
    // Trie with a rejecting sink at index 0.
    let mut delta: Vec<Vec<u32>> = vec![vec![0; k], vec![0; k]];
    let mut accepting = vec![false, false];
    for text in words {
        let w = Word::parse(&alphabet, text)?;
        let mut s = 1usize;
        for &c in w.letters() {
            if delta[s][c as usize] == 0 {
                delta.push(vec![0; k]);
                accepting.push(false);
                delta[s][c as usize] = (delta.len() - 1) as u32;
            }
            s = delta[s][c as usize] as usize;
        }
        accepting[s] = true;
    }
    let dfa = Dfa::new(alphabet, delta, 1, accepting)?;
    Ok(LanguageHandle::from_dfa(&dfa, format!("builtin:exact:{}", words.join(","))))
}

/// `even`, `mod:p:R`, `threshold:t` or `exact:w1,w2,…`.
pub fn builtin(name: &str) -> Result<LanguageHandle> {
    let bad = |msg: String| Error::LanguageSpec { spec: format!("builtin:{name}"), msg };
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad(format!("{s:?} is not a number")));
    if name == "even" {
        let mut h = mod_language(2, &BTreeSet::from([0]))?;
        h.description = "builtin:even".into();
        return Ok(h);
    }
    if let Some(rest) = name.strip_prefix("mod:") {
        let (p, r) = rest.split_once(':').ok_or_else(|| bad("expected mod:p:R".into()))?;
        let p = num(p)?;
        let r = r.trim().trim_start_matches('{').trim_end_matches('}');
        let residues =
            r.split(',').filter(|x| !x.trim().is_empty()).map(num).collect::<Result<BTreeSet<usize>>>()?;
        if let Some(bad_r) = residues.iter().find(|&&x| x >= p.max(1)) {
            return Err(bad(format!("residue {bad_r} is not below {p}")));
        }
        return mod_language(p, &residues).map_err(|_| bad("modulus must be positive".into()));
    }
    if let Some(t) = name.strip_prefix("threshold:") {
        return threshold_language(num(t)?);
    }
    if let Some(list) = name.strip_prefix("exact:") {
        let words: Vec<&str> = list.split(',').collect();
        return exact_language(&words);
    }
    Err(bad("unknown builtin".into()))
}
