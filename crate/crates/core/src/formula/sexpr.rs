use super::{Formula, Var};
use crate::error::{Error, Result};

/// Parses the s-expression form produced by `Formula`'s `Display`.
pub fn parse_sexpr(text: &str) -> Result<Formula> {
    let mut p = Parser { src: text, pos: 0 };
    let f = p.formula()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(p.err("trailing input"));
    }
    Ok(f)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::SexprSyntax { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.err(&format!("expected {c:?}")))
        }
    }

    fn atom(&mut self) -> Result<&str> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_whitespace() || c == '(' || c == ')' {
                break;
            }
            self.pos += c.len_utf8();
        }
        if start == self.pos {
            return Err(self.err("expected atom"));
        }
        Ok(&self.src[start..self.pos])
    }

    fn var(&mut self) -> Result<Var> {
        let start = self.pos;
        let tok = self.atom()?;
        let digits = tok.strip_prefix('v').filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()));
        match digits.and_then(|d| d.parse().ok()) {
            Some(n) => Ok(Var(n)),
            None => Err(Error::SexprSyntax { pos: start, msg: format!("bad variable {tok:?}") }),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        self.expect('(')?;
        let head_pos = self.pos;
        let head = self.atom()?.to_string();
        let f = match head.as_str() {
            "lt" => Formula::Lt(self.var()?, self.var()?),
            "eq" => Formula::Eq(self.var()?, self.var()?),
            "letter" => {
                let sym = self.atom()?;
                let mut chars = sym.chars();
                let c = chars.next().unwrap();
                if chars.next().is_some() {
                    return Err(self.err("letter symbol must be a single character"));
                }
                Formula::Letter(c, self.var()?)
            }
            "not" => Formula::not(self.formula()?),
            "and" | "or" => {
                let mut children = Vec::new();
                loop {
                    self.skip_ws();
                    if self.peek() == Some(')') {
                        break;
                    }
                    children.push(self.formula()?);
                }
                if head == "and" {
                    Formula::And(children)
                } else {
                    Formula::Or(children)
                }
            }
            "exists" => Formula::exists(self.var()?, self.formula()?),
            "forall" => Formula::forall(self.var()?, self.formula()?),
            "true" => Formula::True,
            "false" => Formula::False,
            other => {
                return Err(Error::SexprSyntax { pos: head_pos, msg: format!("unknown head {other:?}") })
            }
        };
        self.expect(')')?;
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_every_form() {
        let text = "(and (lt v0 v1) (eq v1 v1) (letter a v0) (not (true)) (or) (exists v2 (forall v3 (false))))";
        let f = parse_sexpr(text).unwrap();
        assert_eq!(f.to_string(), text);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_sexpr("(lt x y)").is_err());
        assert!(parse_sexpr("(lt v0 v1").is_err());
        assert!(parse_sexpr("(lt v0 v1) x").is_err());
        assert!(parse_sexpr("(letter ab v0)").is_err());
        assert!(matches!(parse_sexpr("(foo)"), Err(Error::SexprSyntax { pos: 1, .. })));
    }

    fn arb_formula() -> impl Strategy<Value = Formula> {
        let var = (0u32..4).prop_map(Var);
        let leaf = prop_oneof![
            (var.clone(), var.clone()).prop_map(|(x, y)| Formula::Lt(x, y)),
            (var.clone(), var.clone()).prop_map(|(x, y)| Formula::Eq(x, y)),
            (prop_oneof![Just('a'), Just('b')], var.clone()).prop_map(|(c, x)| Formula::Letter(c, x)),
            Just(Formula::True),
            Just(Formula::False),
        ];
        leaf.prop_recursive(4, 32, 4, move |inner| {
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                proptest::collection::vec(inner.clone(), 0..4).prop_map(Formula::And),
                proptest::collection::vec(inner.clone(), 0..4).prop_map(Formula::Or),
                ((0u32..4).prop_map(Var), inner.clone()).prop_map(|(v, f)| Formula::exists(v, f)),
                ((0u32..4).prop_map(Var), inner).prop_map(|(v, f)| Formula::forall(v, f)),
            ]
        })
    }

    proptest! {
        #[test]
        fn display_parse_round_trip(f in arb_formula()) {
            prop_assert_eq!(parse_sexpr(&f.to_string()).unwrap(), f);
        }
    }
}
