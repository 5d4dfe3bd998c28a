use super::{Factor, PolyExpr, RingExpr, TermExpr};
use crate::ring::is_prime;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("at column {}: {msg}", .pos + 1)]
pub struct ParseError {
    /// Byte offset into the input.
    pub pos: usize,
    pub msg: String,
}

pub(super) struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

fn is_id_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_id_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

impl<'a> Parser<'a> {
    pub(super) fn new(src: &'a str) -> Self {
        Self { src, pos: 0 }
    }

    fn err<T>(&self, pos: usize, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_raw() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek_raw(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_raw()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            let found = self.peek().map_or("end of input".to_string(), |f| format!("`{f}`"));
            self.err(self.pos, format!("expected `{c}`, found {found}"))
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(kw) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    pub(super) fn finish(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(c) => self.err(self.pos, format!("unexpected `{c}`")),
        }
    }

    fn nat(&mut self) -> Result<u64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.peek_raw().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err(start, "expected a number");
        }
        self.src[start..self.pos].parse().or_else(|_| self.err(start, "number too large"))
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek_raw() {
            Some(c) if is_id_start(c) => self.pos += 1,
            _ => return self.err(start, "expected an identifier"),
        }
        while self.peek_raw().is_some_and(is_id_char) {
            self.pos += 1;
        }
        Ok(self.src[start..self.pos].to_string())
    }

    pub(super) fn expr(&mut self) -> Result<RingExpr, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.keyword("prod(") {
            let a = self.expr()?;
            self.expect(',')?;
            let b = self.expr()?;
            self.expect(')')?;
            return Ok(RingExpr::Prod(Box::new(a), Box::new(b)));
        }
        if self.keyword("op(") {
            let a = self.expr()?;
            self.expect(')')?;
            return Ok(RingExpr::Op(Box::new(a)));
        }
        if self.keyword("load(") {
            self.skip_ws();
            let begin = self.pos;
            let Some(len) = self.src[begin..].find(')') else {
                return self.err(begin, "unterminated load(");
            };
            let path = self.src[begin..begin + len].trim().to_string();
            if path.is_empty() {
                return self.err(begin, "empty path");
            }
            self.pos = begin + len + 1;
            return Ok(RingExpr::Load(path));
        }
        if !self.eat('F') {
            return self.err(start, "expected `F<prime>`, `prod(`, `op(` or `load(`");
        }
        let p = self.nat()?;
        if !is_prime(p) {
            return self.err(start, format!("prime required, got F{p}"));
        }
        if self.eat('[') {
            self.skip_ws();
            let gpos = self.pos;
            let group = self.ident()?;
            let known = matches!(group.as_str(), "Q8" | "S3" | "D4")
                || group.strip_prefix('C').is_some_and(|n| !n.is_empty() && n.bytes().all(|b| b.is_ascii_digit()));
            if !known {
                return self.err(gpos, format!("unknown group `{group}`"));
            }
            self.expect(']')?;
            return Ok(RingExpr::GroupAlgebra { p, group });
        }
        self.expect('<')?;
        let mut gens = vec![self.ident()?];
        while self.eat(',') {
            gens.push(self.ident()?);
        }
        self.expect('>')?;
        self.expect('/')?;
        self.expect('(')?;
        let mut relations = Vec::new();
        if !self.eat(')') {
            relations.push(self.poly()?);
            while self.eat(',') {
                relations.push(self.poly()?);
            }
            self.expect(')')?;
        }
        Ok(RingExpr::FreeQuotient { p, gens, relations })
    }

    pub(super) fn poly(&mut self) -> Result<PolyExpr, ParseError> {
        let first_negative = self.eat('-');
        let mut terms = vec![self.mono(first_negative)?];
        loop {
            if self.eat('+') {
                terms.push(self.mono(false)?);
            } else if self.eat('-') {
                terms.push(self.mono(true)?);
            } else {
                break;
            }
        }
        Ok(PolyExpr { terms })
    }

    fn mono(&mut self, negative: bool) -> Result<TermExpr, ParseError> {
        let mut coeff = None;
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            coeff = Some(self.nat()?);
            if !self.eat('*') && !self.peek().is_some_and(is_id_start) {
                return Ok(TermExpr { negative, coeff, factors: Vec::new() });
            }
        }
        let mut factors = vec![self.factor()?];
        loop {
            if self.eat('*') || self.peek().is_some_and(is_id_start) {
                factors.push(self.factor()?);
            } else {
                break;
            }
        }
        Ok(TermExpr { negative, coeff, factors })
    }

    fn factor(&mut self) -> Result<Factor, ParseError> {
        let name = self.ident()?;
        let exp = if self.eat('^') { Some(self.nat()?) } else { None };
        Ok(Factor { name, exp })
    }
}
