//! Text grammars for algebra elements and module parameters.
//!
//! ```text
//! expr  := ['-'] term (('+' | '-') term)*  |  '0'
//! term  := [coeff '*'] atom
//! atom  := 'd(' rational ')' | 'I(' rational ')' | 'CD' | 'CDI' | 'CI'
//! ```
//!
//! Parameters are written `alpha,beta,F@<groupspec>`.

use std::fmt;

use crate::algebra::{AlgebraElement, BasisKey};
use crate::groups::{GroupError, SubgroupSpec};
use crate::intermediate::{ModuleError, ModuleParams};
use crate::scalar::{Rational, RationalParseError};

/// Parse failure; `offset` is the 1-based character position.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at offset {offset}: {message}")]
pub struct SyntaxError {
    pub offset: usize,
    pub message: String,
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
}

impl Cursor {
    fn new(src: &str) -> Self {
        Cursor { chars: src.chars().collect(), pos: 0 }
    }

    fn error(&self, message: impl Into<String>) -> SyntaxError {
        SyntaxError { offset: self.pos + 1, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        let n = s.chars().count();
        if self.chars.len() >= self.pos + n
            && self.chars[self.pos..self.pos + n].iter().copied().eq(s.chars())
        {
            self.pos += n;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), SyntaxError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    fn digits(&mut self) -> usize {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.pos - start
    }

    /// `[sign] digits ['/' digits]`
    fn rational(&mut self, signed: bool) -> Result<Rational, SyntaxError> {
        let start = self.pos;
        if signed && !self.eat('-') {
            self.eat('+');
        }
        if self.digits() == 0 {
            return Err(self.error("expected a rational number"));
        }
        if self.eat('/') && self.digits() == 0 {
            return Err(self.error("expected a denominator"));
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse::<Rational>()
            .map_err(|e: RationalParseError| SyntaxError { offset: start + 1, message: e.to_string() })
    }

    fn atom(&mut self) -> Result<BasisKey, SyntaxError> {
        if self.eat_str("CDI") {
            return Ok(BasisKey::CDI);
        }
        if self.eat_str("CD") {
            return Ok(BasisKey::CD);
        }
        if self.eat_str("CI") {
            return Ok(BasisKey::CI);
        }
        let make: fn(Rational) -> BasisKey = if self.eat_str("d(") {
            BasisKey::D
        } else if self.eat_str("I(") {
            BasisKey::I
        } else {
            return Err(self.error("expected d(..), I(..), CD, CDI or CI"));
        };
        self.skip_ws();
        let g = self.rational(true)?;
        self.skip_ws();
        self.expect(')')?;
        Ok(make(g))
    }

    fn term(&mut self) -> Result<(Rational, BasisKey), SyntaxError> {
        let coeff = if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let c = self.rational(false)?;
            self.skip_ws();
            self.expect('*')?;
            self.skip_ws();
            c
        } else {
            Rational::one()
        };
        Ok((coeff, self.atom()?))
    }
}

pub fn parse_element(text: &str) -> Result<AlgebraElement, SyntaxError> {
    let mut cur = Cursor::new(text);
    cur.skip_ws();
    if cur.eat('0') {
        cur.skip_ws();
        if cur.peek().is_none() {
            return Ok(AlgebraElement::zero());
        }
        cur.pos = 0;
        cur.skip_ws();
    }
    let mut out = AlgebraElement::zero();
    let mut sign = if cur.eat('-') { -Rational::one() } else { Rational::one() };
    loop {
        cur.skip_ws();
        let (c, key) = cur.term()?;
        out.add_term(key, &(c * &sign));
        cur.skip_ws();
        sign = match cur.peek() {
            None => return Ok(out),
            Some('+') => Rational::one(),
            Some('-') => -Rational::one(),
            Some(_) => return Err(cur.error("expected `+`, `-` or end of input")),
        };
        cur.pos += 1;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParamsError {
    #[error("module parameters must look like `alpha,beta,F@<group>`: {0}")]
    Shape(String),
    #[error("bad {field}: {source}")]
    Scalar { field: &'static str, source: RationalParseError },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Module(#[from] ModuleError),
}

pub fn parse_group(text: &str) -> Result<SubgroupSpec, GroupError> {
    text.parse()
}

pub fn parse_params(text: &str) -> Result<ModuleParams, ParamsError> {
    let (scalars, group) = text.split_once('@').ok_or_else(|| ParamsError::Shape(text.to_string()))?;
    let fields: Vec<&str> = scalars.split(',').collect();
    let [a, b, f] = fields[..] else {
        return Err(ParamsError::Shape(text.to_string()));
    };
    let scalar =
        |field, s: &str| s.parse::<Rational>().map_err(|source| ParamsError::Scalar { field, source });
    Ok(ModuleParams::new(scalar("alpha", a)?, scalar("beta", b)?, scalar("F", f)?, parse_group(group)?)?)
}

/// Comma-separated rationals, as used for seed lists.
pub fn parse_rational_list(text: &str) -> Result<Vec<Rational>, RationalParseError> {
    text.split(',').map(str::parse).collect()
}

/// Debug helper showing where a parse failed.
pub struct Caret<'a>(pub &'a str, pub &'a SyntaxError);

impl fmt::Display for Caret<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.0)?;
        write!(f, "{:>width$}", "^", width = self.1.offset)
    }
}
