//! Parsers for polynomials and ring-description documents.
//!
//! ```text
//! ring { char = 32003; vars = [x, y, z]; model = local; ideal = ["x^2-y^5", "x*y^2+y*z^3-z^5"] }
//! ```

use super::field::PrimeField;
use super::monomial::Monomial;
use super::poly::Polynomial;
use super::{Model, RingSpec};
use crate::error::{Error, Result};

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let mut line = 1;
    let mut col = 1;
    for (i, ch) in text.char_indices() {
        if i >= offset {
            break;
        }
        if ch == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    (line, col)
}

fn syntax(text: &str, offset: usize, message: impl Into<String>) -> Error {
    let (line, column) = line_col(text, offset);
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

/// Polynomial parse failure with a byte offset into the polynomial string.
struct PolyErr {
    offset: usize,
    message: String,
}

struct PolyParser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a [String],
    field: PrimeField,
}

impl<'a> PolyParser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> std::result::Result<T, PolyErr> {
        Err(PolyErr {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && (self.src[self.pos] as char).is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn integer(&mut self) -> std::result::Result<(u64, u64), PolyErr> {
        // returns (value mod p, raw value saturated) for exponents
        let start = self.pos;
        let p = self.field.characteristic() as u64;
        let (mut modp, mut raw) = (0u64, 0u64);
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            let d = (self.src[self.pos] - b'0') as u64;
            modp = (modp * 10 + d) % p;
            raw = raw.saturating_mul(10).saturating_add(d);
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected integer");
        }
        Ok((modp, raw))
    }

    /// Splits an identifier into known variable names, longest match first.
    fn split_ident(&self, ident: &str) -> Option<Vec<usize>> {
        if let Some(i) = self.vars.iter().position(|v| v == ident) {
            return Some(vec![i]);
        }
        let mut out = Vec::new();
        let mut rest = ident;
        while !rest.is_empty() {
            let (i, len) = self
                .vars
                .iter()
                .enumerate()
                .filter(|(_, v)| rest.starts_with(v.as_str()))
                .map(|(i, v)| (i, v.len()))
                .max_by_key(|&(_, l)| l)?;
            out.push(i);
            rest = &rest[len..];
        }
        Some(out)
    }

    fn term(&mut self) -> std::result::Result<Polynomial, PolyErr> {
        let n = self.vars.len();
        let mut coeff = 1u32;
        let mut exps = vec![0u16; n];
        let mut any = false;
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let (v, _) = self.integer()?;
                    coeff = self.field.mul(coeff, v as u32);
                    any = true;
                }
                Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                    let start = self.pos;
                    while self.pos < self.src.len()
                        && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                    {
                        self.pos += 1;
                    }
                    let ident = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                    let idx = match self.split_ident(ident) {
                        Some(v) => v,
                        None => {
                            self.pos = start;
                            return self.err(format!("unknown variable `{ident}`"));
                        }
                    };
                    let mut e = 1u64;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        self.skip_ws();
                        let (_, raw) = self.integer()?;
                        if raw > u16::MAX as u64 / 2 {
                            return self.err("exponent too large");
                        }
                        e = raw;
                    }
                    // an exponent binds to the last variable of a split identifier
                    for (k, &i) in idx.iter().enumerate() {
                        let add = if k + 1 == idx.len() { e } else { 1 };
                        let ne = exps[i] as u64 + add;
                        if ne > u16::MAX as u64 / 2 {
                            return self.err("exponent too large");
                        }
                        exps[i] = ne as u16;
                    }
                    any = true;
                }
                _ => {
                    if !any {
                        return self.err("expected coefficient or variable");
                    }
                    break;
                }
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
                match self.peek() {
                    Some(c) if c.is_ascii_alphanumeric() || c == b'_' => {}
                    _ => return self.err("expected factor after `*`"),
                }
            }
        }
        Ok(Polynomial::monomial(
            self.field,
            Monomial::from_exps(&exps),
            coeff,
        ))
    }

    fn poly(&mut self) -> std::result::Result<Polynomial, PolyErr> {
        let mut acc = Polynomial::zero(self.field, self.vars.len());
        let mut first = true;
        loop {
            let mut sign = 1u32;
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = self.field.neg(1);
                }
                None if first => return self.err("empty polynomial"),
                None => break,
                Some(_) if first => {}
                Some(c) => return self.err(format!("unexpected character `{}`", c as char)),
            }
            let t = self.term()?;
            acc = acc.add_scaled(&t, sign);
            first = false;
        }
        Ok(acc)
    }
}

fn parse_poly_raw(
    text: &str,
    vars: &[String],
    field: PrimeField,
) -> std::result::Result<Polynomial, PolyErr> {
    let mut p = PolyParser {
        src: text.as_bytes(),
        pos: 0,
        vars,
        field,
    };
    p.poly()
}

/// Parses a polynomial in the given variables.
pub fn parse_polynomial(text: &str, vars: &[String], field: PrimeField) -> Result<Polynomial> {
    parse_poly_raw(text, vars, field).map_err(|e| syntax(text, e.offset, e.message))
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(u64),
    Str(String),
    Punct(char),
}

struct Lexer<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn next(&mut self) -> Result<Option<(Tok, usize)>> {
        let b = self.text.as_bytes();
        loop {
            while self.pos < b.len() && (b[self.pos] as char).is_whitespace() {
                self.pos += 1;
            }
            if self.pos < b.len() && b[self.pos] == b'#' {
                while self.pos < b.len() && b[self.pos] != b'\n' {
                    self.pos += 1;
                }
                continue;
            }
            break;
        }
        if self.pos >= b.len() {
            return Ok(None);
        }
        let start = self.pos;
        let c = b[self.pos];
        if c.is_ascii_alphabetic() || c == b'_' {
            while self.pos < b.len() && (b[self.pos].is_ascii_alphanumeric() || b[self.pos] == b'_') {
                self.pos += 1;
            }
            return Ok(Some((Tok::Ident(self.text[start..self.pos].to_string()), start)));
        }
        if c.is_ascii_digit() {
            while self.pos < b.len() && b[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let v = self.text[start..self.pos]
                .parse::<u64>()
                .map_err(|_| syntax(self.text, start, "integer too large"))?;
            return Ok(Some((Tok::Int(v), start)));
        }
        if c == b'"' {
            self.pos += 1;
            let s = self.pos;
            while self.pos < b.len() && b[self.pos] != b'"' {
                self.pos += 1;
            }
            if self.pos >= b.len() {
                return Err(syntax(self.text, start, "unterminated string"));
            }
            let content = self.text[s..self.pos].to_string();
            self.pos += 1;
            // the offset reported is that of the string content
            return Ok(Some((Tok::Str(content), s)));
        }
        if "{}[]=;,".contains(c as char) {
            self.pos += 1;
            return Ok(Some((Tok::Punct(c as char), start)));
        }
        Err(syntax(self.text, start, format!("unexpected character `{}`", c as char)))
    }
}

struct DocParser<'a> {
    lex: Lexer<'a>,
    peeked: Option<(Tok, usize)>,
}

impl<'a> DocParser<'a> {
    fn text(&self) -> &'a str {
        self.lex.text
    }

    fn peek(&mut self) -> Result<Option<&(Tok, usize)>> {
        if self.peeked.is_none() {
            self.peeked = self.lex.next()?;
        }
        Ok(self.peeked.as_ref())
    }

    fn bump(&mut self) -> Result<Option<(Tok, usize)>> {
        self.peek()?;
        Ok(self.peeked.take())
    }

    fn eof_err(&self) -> Error {
        syntax(self.text(), self.text().len(), "unexpected end of input")
    }

    fn expect_punct(&mut self, p: char) -> Result<usize> {
        match self.bump()? {
            Some((Tok::Punct(c), at)) if c == p => Ok(at),
            Some((t, at)) => Err(syntax(self.text(), at, format!("expected `{p}`, found {t:?}"))),
            None => Err(self.eof_err()),
        }
    }

    fn list<T>(&mut self, mut item: impl FnMut(&mut Self) -> Result<T>) -> Result<Vec<T>> {
        self.expect_punct('[')?;
        let mut out = Vec::new();
        loop {
            if let Some((Tok::Punct(']'), _)) = self.peek()? {
                self.bump()?;
                return Ok(out);
            }
            out.push(item(self)?);
            match self.bump()? {
                Some((Tok::Punct(','), _)) => {}
                Some((Tok::Punct(']'), _)) => return Ok(out),
                Some((t, at)) => {
                    return Err(syntax(self.text(), at, format!("expected `,` or `]`, found {t:?}")))
                }
                None => return Err(self.eof_err()),
            }
        }
    }
}

/// Parses a ring-description document.
pub fn parse_ring(text: &str) -> Result<RingSpec> {
    let mut p = DocParser {
        lex: Lexer { text, pos: 0 },
        peeked: None,
    };
    match p.bump()? {
        Some((Tok::Ident(s), _)) if s == "ring" => {}
        Some((_, at)) => return Err(syntax(text, at, "expected `ring`")),
        None => return Err(p.eof_err()),
    }
    p.expect_punct('{')?;
    let mut char_: Option<(u64, usize)> = None;
    let mut vars: Option<Vec<String>> = None;
    let mut model = Model::Local;
    let mut ideal: Vec<(String, usize)> = Vec::new();
    loop {
        let (key, at) = match p.bump()? {
            Some((Tok::Punct('}'), _)) => break,
            Some((Tok::Punct(';'), _)) => continue,
            Some((Tok::Ident(k), at)) => (k, at),
            Some((t, at)) => return Err(syntax(text, at, format!("expected a key, found {t:?}"))),
            None => return Err(p.eof_err()),
        };
        p.expect_punct('=')?;
        match key.as_str() {
            "char" => match p.bump()? {
                Some((Tok::Int(v), at)) => char_ = Some((v, at)),
                Some((_, at)) => return Err(syntax(text, at, "expected integer characteristic")),
                None => return Err(p.eof_err()),
            },
            "vars" => {
                let vs = p.list(|p| match p.bump()? {
                    Some((Tok::Ident(s), _)) => Ok(s),
                    Some((_, at)) => Err(syntax(p.text(), at, "expected variable name")),
                    None => Err(p.eof_err()),
                })?;
                for (i, v) in vs.iter().enumerate() {
                    if vs[..i].contains(v) {
                        return Err(syntax(text, at, format!("duplicate variable `{v}`")));
                    }
                }
                vars = Some(vs);
            }
            "model" => match p.bump()? {
                Some((Tok::Ident(s), _)) if s == "local" => model = Model::Local,
                Some((Tok::Ident(s), _)) if s == "graded" => model = Model::Graded,
                Some((_, at)) => return Err(syntax(text, at, "expected `local` or `graded`")),
                None => return Err(p.eof_err()),
            },
            "ideal" => {
                ideal = p.list(|p| match p.bump()? {
                    Some((Tok::Str(s), at)) => Ok((s, at)),
                    Some((_, at)) => Err(syntax(p.text(), at, "expected quoted polynomial")),
                    None => Err(p.eof_err()),
                })?;
            }
            other => return Err(syntax(text, at, format!("unknown key `{other}`"))),
        }
    }
    if let Some((t, at)) = p.bump()? {
        return Err(syntax(text, at, format!("trailing input {t:?}")));
    }
    let (c, c_at) = char_.unwrap_or((super::field::DEFAULT_CHAR as u64, 0));
    let field = PrimeField::new(c).map_err(|e| {
        let (line, column) = line_col(text, c_at);
        match e {
            Error::NotPrime(_) => Error::NotPrime(c),
            other => Error::Syntax {
                line,
                column,
                message: other.to_string(),
            },
        }
    })?;
    let vars = vars.ok_or_else(|| syntax(text, text.len(), "missing `vars`"))?;
    let mut gens = Vec::new();
    for (s, at) in &ideal {
        let g = parse_poly_raw(s, &vars, field)
            .map_err(|e| syntax(text, at + e.offset, e.message))?;
        gens.push(g);
    }
    RingSpec::new(field, vars, gens, model)
}
