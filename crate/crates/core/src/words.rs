//! Alphabets, words and the finite ball `Σ^{≤n}`.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Serialized form of the empty word.
pub const EPS_TOKEN: &str = "@eps";

const RESERVED: &[char] = &['@', '|', '*', '(', ')', ',', ';', '{', '}', ':', '"', '\\'];

/// A finite ordered alphabet of single-character symbols.
///
/// The order of the symbols fixes letter indices and every lexicographic
/// tie-break downstream.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new<I: IntoIterator<Item = char>>(symbols: I) -> Result<Alphabet> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        if symbols.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet must contain at least one symbol".into()));
        }
        if symbols.len() > usize::from(u8::MAX) {
            return Err(Error::InvalidAlphabet(format!("{} symbols is too many", symbols.len())));
        }
        for (i, &c) in symbols.iter().enumerate() {
            if c.is_whitespace() || c.is_control() || RESERVED.contains(&c) {
                return Err(Error::InvalidAlphabet(format!("symbol {c:?} is reserved or not printable")));
            }
            if symbols[..i].contains(&c) {
                return Err(Error::InvalidAlphabet(format!("duplicate symbol {c:?}")));
            }
        }
        Ok(Alphabet { symbols })
    }

    /// Alphabet from the characters of `s`, in order.
    pub fn from_chars(s: &str) -> Result<Alphabet> {
        Alphabet::new(s.chars())
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn is_unary(&self) -> bool {
        self.symbols.len() == 1
    }

    pub fn index_of(&self, c: char) -> Option<u8> {
        self.symbols.iter().position(|&s| s == c).map(|i| i as u8)
    }

    pub fn symbol(&self, index: u8) -> char {
        self.symbols[usize::from(index)]
    }

    /// Union of two alphabets: `self`'s symbols first, then the new ones from `other`.
    pub fn union(&self, other: &Alphabet) -> Alphabet {
        let mut symbols = self.symbols.clone();
        for &c in &other.symbols {
            if !symbols.contains(&c) {
                symbols.push(c);
            }
        }
        Alphabet { symbols }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.symbols.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

/// A finite word over an [`Alphabet`], stored as letter indices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    alphabet: Arc<Alphabet>,
    letters: Vec<u8>,
}

impl Word {
    pub fn empty(alphabet: &Arc<Alphabet>) -> Word {
        Word { alphabet: Arc::clone(alphabet), letters: Vec::new() }
    }

    pub fn from_letters(alphabet: &Arc<Alphabet>, letters: Vec<u8>) -> Result<Word> {
        if let Some(&bad) = letters.iter().find(|&&l| usize::from(l) >= alphabet.len()) {
            return Err(Error::InvalidAlphabet(format!("letter index {bad} out of range for {alphabet}")));
        }
        Ok(Word { alphabet: Arc::clone(alphabet), letters })
    }

    /// Parses a plain symbol string; `@eps` (or the empty string) is the empty word.
    pub fn parse(alphabet: &Arc<Alphabet>, text: &str) -> Result<Word> {
        if text == EPS_TOKEN {
            return Ok(Word::empty(alphabet));
        }
        let letters = text
            .chars()
            .map(|c| {
                alphabet
                    .index_of(c)
                    .ok_or_else(|| Error::UnknownSymbol { symbol: c, alphabet: alphabet.to_string() })
            })
            .collect::<Result<Vec<u8>>>()?;
        Ok(Word { alphabet: Arc::clone(alphabet), letters })
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Symbol at 1-based position `pos`.
    pub fn symbol_at(&self, pos: usize) -> char {
        self.alphabet.symbol(self.letters[pos - 1])
    }

    pub fn same_alphabet(&self, other: &Word) -> Result<()> {
        if Arc::ptr_eq(&self.alphabet, &other.alphabet) || self.alphabet == other.alphabet {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch {
                left: self.alphabet.to_string(),
                right: other.alphabet.to_string(),
            })
        }
    }

    pub fn concat(&self, other: &Word) -> Result<Word> {
        self.same_alphabet(other)?;
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Ok(Word { alphabet: Arc::clone(&self.alphabet), letters })
    }

    /// `self` repeated `m` times.
    pub fn power(&self, m: usize) -> Word {
        Word { alphabet: Arc::clone(&self.alphabet), letters: self.letters.repeat(m) }
    }

    /// The factor at 0-based half-open range `range`.
    pub fn factor(&self, range: std::ops::Range<usize>) -> Word {
        Word { alphabet: Arc::clone(&self.alphabet), letters: self.letters[range].to_vec() }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str(EPS_TOKEN);
        }
        for &l in &self.letters {
            write!(f, "{}", self.alphabet.symbol(l))?;
        }
        Ok(())
    }
}

/// Serializes as the display string (`@eps` for ε).
impl serde::Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// Length-then-lexicographic order on letter indices.
pub fn shortlex(a: &[u8], b: &[u8]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        shortlex(&self.letters, &other.letters)
            .then_with(|| self.alphabet.symbols.cmp(&other.alphabet.symbols))
    }
}

/// Number of words of length at most `n` over `k` symbols.
pub fn ball_size(k: usize, n: usize) -> u128 {
    if k == 1 {
        return n as u128 + 1;
    }
    let k = k as u128;
    let mut total: u128 = 0;
    let mut layer: u128 = 1;
    for _ in 0..=n {
        total = total.saturating_add(layer);
        layer = layer.saturating_mul(k);
    }
    total
}

/// Refuses when `|Σ|^(n+1)` exceeds `cap`.
pub fn check_ball(alphabet: &Alphabet, n: usize, cap: u128) -> Result<()> {
    let k = alphabet.len() as u128;
    let exp = u32::try_from(n + 1).unwrap_or(u32::MAX);
    let size = k.checked_pow(exp).unwrap_or(u128::MAX);
    if size > cap {
        return Err(Error::HorizonTooLarge { n, size, cap });
    }
    Ok(())
}

/// Streams every word of length at most `n` once, in shortlex order.
pub fn enumerate_ball(alphabet: &Arc<Alphabet>, n: usize, cap: u128) -> Result<Ball> {
    check_ball(alphabet, n, cap)?;
    Ok(Ball { alphabet: Arc::clone(alphabet), n, next: Some(Vec::new()) })
}

/// Iterator returned by [`enumerate_ball`].
pub struct Ball {
    alphabet: Arc<Alphabet>,
    n: usize,
    next: Option<Vec<u8>>,
}

impl Iterator for Ball {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let current = self.next.take()?;
        let k = self.alphabet.len() as u8;
        let mut succ = current.clone();
        // Increment as a base-k counter; overflow moves to the next length.
        let mut i = succ.len();
        loop {
            if i == 0 {
                let len = succ.len() + 1;
                if len <= self.n {
                    self.next = Some(vec![0; len]);
                }
                break;
            }
            i -= 1;
            if succ[i] + 1 < k {
                succ[i] += 1;
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(Word { alphabet: Arc::clone(&self.alphabet), letters: current })
    }
}
