//! Regular expressions: parsing and Thompson construction.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! alt    := concat ('|' concat)*
//! concat := star*            (empty concat denotes ε)
//! star   := atom '*'*
//! atom   := symbol | '(' alt ')' | '@eps' | '@empty'
//! ```

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::words::Alphabet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Regex {
    Empty,
    Eps,
    Lit(char),
    Concat(Vec<Regex>),
    Alt(Vec<Regex>),
    Star(Box<Regex>),
}

impl Regex {
    pub fn parse(text: &str) -> Result<Regex> {
        let chars: Vec<char> = text.chars().collect();
        let mut p = Parser { chars, pos: 0 };
        let r = p.alt()?;
        p.skip_ws();
        if p.pos < p.chars.len() {
            return Err(p.err(format!("unexpected {:?}", p.chars[p.pos])));
        }
        Ok(r)
    }

    /// Literal symbols, sorted.
    pub fn literals(&self) -> BTreeSet<char> {
        let mut out = BTreeSet::new();
        self.collect_literals(&mut out);
        out
    }

    fn collect_literals(&self, out: &mut BTreeSet<char>) {
        match self {
            Regex::Empty | Regex::Eps => {}
            Regex::Lit(c) => {
                out.insert(*c);
            }
            Regex::Concat(rs) | Regex::Alt(rs) => rs.iter().for_each(|r| r.collect_literals(out)),
            Regex::Star(r) => r.collect_literals(out),
        }
    }

    /// The alphabet of the literals, or `{a}` when there are none.
    pub fn inferred_alphabet(&self) -> Result<Arc<Alphabet>> {
        let lits = self.literals();
        let alpha = if lits.is_empty() { Alphabet::from_chars("a")? } else { Alphabet::new(lits)? };
        Ok(Arc::new(alpha))
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn err(&self, msg: String) -> Error {
        Error::RegexSyntax { pos: self.pos, msg }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn alt(&mut self) -> Result<Regex> {
        let mut branches = vec![self.concat()?];
        while self.peek() == Some('|') {
            self.pos += 1;
            branches.push(self.concat()?);
        }
        Ok(if branches.len() == 1 { branches.pop().unwrap() } else { Regex::Alt(branches) })
    }

    fn concat(&mut self) -> Result<Regex> {
        let mut parts = Vec::new();
        while let Some(c) = self.peek() {
            if c == '|' || c == ')' {
                break;
            }
            parts.push(self.star()?);
        }
        Ok(match parts.len() {
            0 => Regex::Eps,
            1 => parts.pop().unwrap(),
            _ => Regex::Concat(parts),
        })
    }

    fn star(&mut self) -> Result<Regex> {
        let mut r = self.atom()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            r = Regex::Star(Box::new(r));
        }
        Ok(r)
    }

    fn atom(&mut self) -> Result<Regex> {
        let c = self.peek().ok_or_else(|| self.err("unexpected end of pattern".into()))?;
        match c {
            '(' => {
                self.pos += 1;
                let r = self.alt()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'".into()));
                }
                self.pos += 1;
                Ok(r)
            }
            '@' => {
                let rest: String = self.chars[self.pos..].iter().collect();
                if rest.starts_with("@empty") {
                    self.pos += "@empty".len();
                    Ok(Regex::Empty)
                } else if rest.starts_with("@eps") {
                    self.pos += "@eps".len();
                    Ok(Regex::Eps)
                } else {
                    Err(self.err("expected @eps or @empty".into()))
                }
            }
            '*' => Err(self.err("'*' without operand".into())),
            _ => {
                // Reuse the alphabet's symbol rules.
                if Alphabet::new([c]).is_err() {
                    return Err(self.err(format!("{c:?} cannot be a symbol")));
                }
                self.pos += 1;
                Ok(Regex::Lit(c))
            }
        }
    }
}

/// Thompson NFA with ε-moves; letters are alphabet indices.
#[derive(Debug, Clone)]
pub(crate) struct Nfa {
    pub eps: Vec<Vec<usize>>,
    pub moves: Vec<Vec<(u8, usize)>>,
    pub start: usize,
    pub accept: usize,
}

impl Nfa {
    fn add_state(&mut self) -> usize {
        self.eps.push(Vec::new());
        self.moves.push(Vec::new());
        self.eps.len() - 1
    }

    pub fn thompson(regex: &Regex, alphabet: &Alphabet) -> Result<Nfa> {
        let mut nfa = Nfa { eps: Vec::new(), moves: Vec::new(), start: 0, accept: 0 };
        let (s, t) = nfa.build(regex, alphabet)?;
        nfa.start = s;
        nfa.accept = t;
        Ok(nfa)
    }

    fn build(&mut self, r: &Regex, alphabet: &Alphabet) -> Result<(usize, usize)> {
        let s = self.add_state();
        let t = self.add_state();
        match r {
            Regex::Empty => {}
            Regex::Eps => self.eps[s].push(t),
            Regex::Lit(c) => {
                let idx = alphabet
                    .index_of(*c)
                    .ok_or_else(|| Error::UnknownSymbol { symbol: *c, alphabet: alphabet.to_string() })?;
                self.moves[s].push((idx, t));
            }
            Regex::Concat(rs) => {
                let mut cur = s;
                for part in rs {
                    let (ps, pt) = self.build(part, alphabet)?;
                    self.eps[cur].push(ps);
                    cur = pt;
                }
                self.eps[cur].push(t);
            }
            Regex::Alt(rs) => {
                for part in rs {
                    let (ps, pt) = self.build(part, alphabet)?;
                    self.eps[s].push(ps);
                    self.eps[pt].push(t);
                }
            }
            Regex::Star(inner) => {
                let (ps, pt) = self.build(inner, alphabet)?;
                self.eps[s].push(ps);
                self.eps[s].push(t);
                self.eps[pt].push(ps);
                self.eps[pt].push(t);
            }
        }
        Ok((s, t))
    }

    pub fn closure(&self, states: impl IntoIterator<Item = usize>) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        let mut stack: Vec<usize> = states.into_iter().collect();
        while let Some(q) = stack.pop() {
            if out.insert(q) {
                stack.extend(self.eps[q].iter().copied());
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_operators() {
        assert_eq!(
            Regex::parse("a|bc*").unwrap(),
            Regex::Alt(vec![
                Regex::Lit('a'),
                Regex::Concat(vec![Regex::Lit('b'), Regex::Star(Box::new(Regex::Lit('c')))])
            ])
        );
        assert_eq!(Regex::parse("(aa)*").unwrap().literals().into_iter().collect::<String>(), "a");
        assert_eq!(Regex::parse("@empty").unwrap(), Regex::Empty);
        assert_eq!(Regex::parse("@eps").unwrap(), Regex::Eps);
        assert_eq!(Regex::parse("").unwrap(), Regex::Eps);
        assert_eq!(Regex::parse(" a  b ").unwrap(), Regex::Concat(vec![Regex::Lit('a'), Regex::Lit('b')]));
    }

    #[test]
    fn reports_error_positions() {
        assert!(matches!(Regex::parse("(ab"), Err(Error::RegexSyntax { pos: 3, .. })));
        assert!(matches!(Regex::parse("ab)"), Err(Error::RegexSyntax { pos: 2, .. })));
        assert!(matches!(Regex::parse("*a"), Err(Error::RegexSyntax { pos: 0, .. })));
        assert!(matches!(Regex::parse("a@x"), Err(Error::RegexSyntax { pos: 1, .. })));
        assert!(matches!(Regex::parse("a,b"), Err(Error::RegexSyntax { pos: 1, .. })));
    }

    #[test]
    fn inferred_alphabet_is_sorted() {
        let r = Regex::parse("b*a").unwrap();
        assert_eq!(r.inferred_alphabet().unwrap().symbols(), &['a', 'b']);
        assert_eq!(Regex::parse("@empty").unwrap().inferred_alphabet().unwrap().symbols(), &['a']);
    }
}
