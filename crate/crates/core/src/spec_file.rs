//! Line-oriented text format for digit systems.
//!
//! ```text
//! # middle-third Cantor set
//! beta = 1/3
//! preperiod = []
//! period = [ {0,2} ]
//! ```
//!
//! `#` starts a comment. `preperiod` may be omitted (empty); `beta` and
//! `period` are required. Each key may appear once.

use std::fmt::Write as _;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::system::{CantorSystem, DigitSequence, DigitSet};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Int(i64),
    Sym(char),
}

impl Token {
    fn text(&self) -> String {
        match self {
            Token::Ident(s) => s.clone(),
            Token::Int(i) => i.to_string(),
            Token::Sym(c) => c.to_string(),
        }
    }
}

fn parse_error(line: usize, token: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        token: token.into(),
        message: message.into(),
    }
}

fn tokenize(line_no: usize, line: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let mut chars = line.char_indices().peekable();
    while let Some(&(start, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if "[]{},=/".contains(c) {
            tokens.push(Token::Sym(c));
            chars.next();
        } else if c == '-' || c.is_ascii_digit() {
            chars.next();
            let mut end = start + c.len_utf8();
            while let Some(&(i, d)) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                end = i + 1;
                chars.next();
            }
            let text = &line[start..end];
            let value = text
                .parse()
                .map_err(|_| parse_error(line_no, text, "expected an integer"))?;
            tokens.push(Token::Int(value));
        } else if c.is_ascii_alphabetic() || c == '_' {
            chars.next();
            let mut end = start + 1;
            while let Some(&(i, d)) = chars.peek() {
                if !(d.is_ascii_alphanumeric() || d == '_') {
                    break;
                }
                end = i + 1;
                chars.next();
            }
            tokens.push(Token::Ident(line[start..end].to_string()));
        } else {
            return Err(parse_error(line_no, c.to_string(), "unexpected character"));
        }
    }
    Ok(tokens)
}

struct Cursor<'a> {
    line: usize,
    tokens: &'a [Token],
    pos: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self, expected: &str) -> Result<Token> {
        let tok = self
            .tokens
            .get(self.pos)
            .cloned()
            .ok_or_else(|| parse_error(self.line, "end of line", format!("expected {expected}")))?;
        self.pos += 1;
        Ok(tok)
    }

    fn expect(&mut self, sym: char) -> Result<()> {
        match self.next(&format!("`{sym}`"))? {
            Token::Sym(c) if c == sym => Ok(()),
            other => Err(parse_error(self.line, other.text(), format!("expected `{sym}`"))),
        }
    }

    fn int(&mut self) -> Result<i64> {
        match self.next("an integer")? {
            Token::Int(i) => Ok(i),
            other => Err(parse_error(self.line, other.text(), "expected an integer")),
        }
    }

    fn finish(&self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(tok) => Err(parse_error(self.line, tok.text(), "trailing input")),
        }
    }

    fn digit_set(&mut self) -> Result<DigitSet> {
        self.expect('{')?;
        let mut digits = vec![self.int()?];
        loop {
            match self.next("`,` or `}`")? {
                Token::Sym(',') => digits.push(self.int()?),
                Token::Sym('}') => break,
                other => return Err(parse_error(self.line, other.text(), "expected `,` or `}`")),
            }
        }
        let len = digits.len();
        let set = DigitSet::new(digits).expect("at least one digit");
        if set.len() != len {
            return Err(parse_error(self.line, set.to_string(), "duplicate digit in set"));
        }
        Ok(set)
    }

    fn set_list(&mut self) -> Result<Vec<DigitSet>> {
        self.expect('[')?;
        let mut sets = Vec::new();
        if self.peek() == Some(&Token::Sym(']')) {
            self.pos += 1;
            return Ok(sets);
        }
        loop {
            sets.push(self.digit_set()?);
            match self.next("`,` or `]`")? {
                Token::Sym(',') => continue,
                Token::Sym(']') => break,
                other => return Err(parse_error(self.line, other.text(), "expected `,` or `]`")),
            }
        }
        Ok(sets)
    }
}

/// Parses a system description. Errors carry the 1-based line number.
pub fn parse_system(text: &str) -> Result<CantorSystem> {
    let mut beta: Option<(usize, Rational)> = None;
    let mut preperiod: Option<Vec<DigitSet>> = None;
    let mut period: Option<(usize, Vec<DigitSet>)> = None;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let content = raw.split('#').next().unwrap_or("");
        let tokens = tokenize(line_no, content)?;
        if tokens.is_empty() {
            continue;
        }
        let mut cur = Cursor {
            line: line_no,
            tokens: &tokens,
            pos: 0,
        };
        let key = match cur.next("a key")? {
            Token::Ident(k) => k,
            other => return Err(parse_error(line_no, other.text(), "expected a key")),
        };
        cur.expect('=')?;
        let duplicate = || parse_error(line_no, key.clone(), "key given more than once");
        match key.as_str() {
            "beta" => {
                if beta.is_some() {
                    return Err(duplicate());
                }
                let numer = cur.int()?;
                cur.expect('/')?;
                let denom = cur.int()?;
                if denom == 0 {
                    return Err(parse_error(line_no, "0", "zero denominator"));
                }
                cur.finish()?;
                beta = Some((line_no, Rational::new(BigInt::from(numer), BigInt::from(denom))));
            }
            "preperiod" => {
                if preperiod.is_some() {
                    return Err(duplicate());
                }
                let sets = cur.set_list()?;
                cur.finish()?;
                preperiod = Some(sets);
            }
            "period" => {
                if period.is_some() {
                    return Err(duplicate());
                }
                let sets = cur.set_list()?;
                cur.finish()?;
                if sets.is_empty() {
                    return Err(parse_error(line_no, "[]", "period must be nonempty"));
                }
                period = Some((line_no, sets));
            }
            _ => return Err(parse_error(line_no, key.clone(), "unknown key")),
        }
    }

    let (beta_line, beta) =
        beta.ok_or_else(|| parse_error(last_line.max(1), "end of input", "missing `beta`"))?;
    let (_, period) =
        period.ok_or_else(|| parse_error(last_line.max(1), "end of input", "missing `period`"))?;
    let digits = DigitSequence::new(preperiod.unwrap_or_default(), period)?;
    CantorSystem::new(beta.clone(), digits).map_err(|_| {
        parse_error(
            beta_line,
            crate::rational::fraction(&beta),
            "beta must satisfy 0 < beta < 1",
        )
    })
}

/// Renders a system in the text format accepted by [`parse_system`].
pub fn to_spec_text(system: &CantorSystem) -> String {
    let list = |sets: &[DigitSet]| {
        let items: Vec<String> = sets.iter().map(DigitSet::to_string).collect();
        format!("[{}]", items.join(", "))
    };
    let mut out = String::new();
    writeln!(out, "beta = {}", crate::rational::fraction(system.beta())).unwrap();
    writeln!(out, "preperiod = {}", list(system.digits().preperiod())).unwrap();
    writeln!(out, "period = {}", list(system.digits().period())).unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use proptest::prelude::*;

    const FIGURE_ONE: &str = "\
# Figure-style example
beta = 1/5
preperiod = [ {0,2}, {1, 2} ]   # first two positions
period    = [ {0,1,2} ]
";

    #[test]
    fn parses_commented_file() {
        let s = parse_system(FIGURE_ONE).unwrap();
        assert_eq!(
            s,
            CantorSystem::from_lists(ratio(1, 5), &[&[0, 2], &[1, 2]], &[&[0, 1, 2]]).unwrap()
        );
    }

    #[test]
    fn negative_digits_and_missing_preperiod() {
        let s = parse_system("beta=1/3\nperiod=[{-2,0}]").unwrap();
        assert_eq!(s, CantorSystem::from_lists(ratio(1, 3), &[], &[&[-2, 0]]).unwrap());
        let s = parse_system("beta = 1/3\npreperiod = []\nperiod = [{0}]\n").unwrap();
        assert!(s.digits().preperiod().is_empty());
    }

    fn err(text: &str) -> (usize, String) {
        match parse_system(text) {
            Err(Error::Parse { line, token, .. }) => (line, token),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn errors_report_line_and_token() {
        assert_eq!(err("beta = 1/3\nperiod = [{0,x}]"), (2, "x".into()));
        assert_eq!(err("beta = 1/3\n\nperiod = []"), (3, "[]".into()));
        assert_eq!(err("beta = 3/2\nperiod = [{0}]"), (1, "3/2".into()));
        assert_eq!(err("gamma = 1/3"), (1, "gamma".into()));
        assert_eq!(err("beta = 1/3\nbeta = 1/4"), (2, "beta".into()));
        assert_eq!(err("beta = 1/3\nperiod = [{0,1} {2}]"), (2, "{".into()));
        assert_eq!(err("beta = 1/3\nperiod = [{0,0}]"), (2, "{0}".into()));
        assert_eq!(err("period = [{0}]").0, 1);
        assert_eq!(err("beta = 1/3 ;").1, ";");
    }

    proptest! {
        #[test]
        fn echo_reparses(
            num in 1i64..20, extra in 1i64..20,
            pre in prop::collection::vec(prop::collection::btree_set(-5i64..6, 1..4), 0..3),
            per in prop::collection::vec(prop::collection::btree_set(-5i64..6, 1..4), 1..3),
        ) {
            let sets = |v: &Vec<std::collections::BTreeSet<i64>>| -> Vec<DigitSet> {
                v.iter().map(|s| DigitSet::new(s.iter().copied()).unwrap()).collect()
            };
            let system = CantorSystem::new(
                ratio(num, num + extra),
                DigitSequence::new(sets(&pre), sets(&per)).unwrap(),
            ).unwrap();
            prop_assert_eq!(parse_system(&to_spec_text(&system)).unwrap(), system);
        }
    }
}
