//! Expression grammar shared by family files, certificates and the catalog.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary ('*' unary)*
//! unary    := ('-' | '+') unary | power
//! power    := atom ('^' exponent)?
//! atom     := number | ident | '(' expr ')'
//! exponent := integer | ident | '(' intexpr ')'
//! number   := digits ('/' digits)?
//! ```
//!
//! Identifiers in an exponent (and identifiers that are not variables) are
//! resolved against an integer parameter environment, which is empty outside
//! the catalog. Juxtaposition such as `2x` is rejected.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ring::{Poly, Rational, Roster};

pub type Params = HashMap<String, i64>;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational, bool),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Comma,
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let num: String = chars[start..i].iter().collect();
            let mut value = Rational::from_integer(num.parse::<BigInt>().unwrap());
            let mut is_int = true;
            if i < chars.len() && chars[i] == '/' {
                let dstart = i + 1;
                let mut j = dstart;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if j == dstart {
                    return Err(Error::parse(1, i + 1, "expected denominator after '/'"));
                }
                let den: BigInt = chars[dstart..j].iter().collect::<String>().parse().unwrap();
                if den.is_zero() {
                    return Err(Error::parse(1, dstart + 1, "zero denominator"));
                }
                value = Rational::new(value.to_integer(), den);
                is_int = false;
                i = j;
            }
            out.push(Token {
                tok: Tok::Num(value, is_int),
                col,
            });
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                col,
            });
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' | '\u{2212}' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            _ => return Err(Error::parse(1, col, format!("unexpected character '{c}'"))),
        };
        out.push(Token { tok, col });
        i += 1;
    }
    out.push(Token {
        tok: Tok::End,
        col: chars.len() + 1,
    });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    vars: Option<&'a Roster>,
    params: &'a Params,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn col(&self) -> usize {
        self.toks[self.pos].col
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::parse(1, self.col(), msg))
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn vars(&self) -> &'a Roster {
        self.vars.expect("polynomial parsing needs a roster")
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc + self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = acc * self.unary()?;
                }
                Tok::Num(..) | Tok::Ident(_) | Tok::LParen => {
                    return self.err("implicit multiplication is not allowed; use '*'")
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Poly> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(-self.unary()?)
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let col = self.col();
            let e = self.exponent()?;
            if e < 0 {
                return Err(Error::parse(1, col, "exponent must be non-negative"));
            }
            let e = u32::try_from(e).map_err(|_| Error::parse(1, col, "exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly> {
        let vars = self.vars();
        match self.peek().clone() {
            Tok::Num(v, _) => {
                self.bump();
                Ok(Poly::constant(vars, v))
            }
            Tok::Ident(name) => {
                if let Some(i) = vars.iter().position(|v| *v == name) {
                    self.bump();
                    Ok(Poly::var(vars, i))
                } else if let Some(&v) = self.params.get(&name) {
                    self.bump();
                    Ok(Poly::int(vars, v))
                } else {
                    self.err(format!("undefined variable `{name}`"))
                }
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::End => self.err("unexpected end of expression"),
            t => self.err(format!("unexpected token {t:?}")),
        }
    }

    fn exponent(&mut self) -> Result<i64> {
        match self.peek().clone() {
            Tok::Num(v, true) => {
                self.bump();
                v.to_integer()
                    .to_i64()
                    .ok_or_else(|| Error::parse(1, self.col(), "exponent too large"))
            }
            Tok::Num(_, false) => self.err("exponent must be an integer"),
            Tok::Ident(name) => match self.params.get(&name) {
                Some(&v) => {
                    self.bump();
                    Ok(v)
                }
                None => self.err(format!("exponent `{name}` is not a known parameter")),
            },
            Tok::LParen => {
                self.bump();
                let v = self.int_expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(v)
            }
            _ => self.err("expected an exponent"),
        }
    }

    fn int_expr(&mut self) -> Result<i64> {
        let mut acc = self.int_term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc += self.int_term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc -= self.int_term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn int_term(&mut self) -> Result<i64> {
        let mut acc = self.int_factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc *= self.int_factor()?;
        }
        Ok(acc)
    }

    fn int_factor(&mut self) -> Result<i64> {
        match self.peek().clone() {
            Tok::Minus => {
                self.bump();
                Ok(-self.int_factor()?)
            }
            Tok::Num(v, true) => {
                self.bump();
                v.to_integer()
                    .to_i64()
                    .ok_or_else(|| Error::parse(1, self.col(), "integer too large"))
            }
            Tok::Ident(name) if name == "min" || name == "max" => {
                self.bump();
                self.expect(Tok::LParen, "'('")?;
                let a = self.int_expr()?;
                self.expect(Tok::Comma, "','")?;
                let b = self.int_expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(if name == "min" { a.min(b) } else { a.max(b) })
            }
            Tok::Ident(name) => match self.params.get(&name) {
                Some(&v) => {
                    self.bump();
                    Ok(v)
                }
                None => self.err(format!("unknown parameter `{name}`")),
            },
            Tok::LParen => {
                self.bump();
                let v = self.int_expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(v)
            }
            _ => self.err("expected an integer expression"),
        }
    }
}

/// Parses a polynomial over `vars`. Identifiers outside the roster resolve
/// to integer parameters from `params`.
pub fn parse_poly_with(src: &str, vars: &Roster, params: &Params) -> Result<Poly> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        vars: Some(vars),
        params,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

pub fn parse_poly(src: &str, vars: &Roster) -> Result<Poly> {
    parse_poly_with(src, vars, &Params::new())
}

/// Evaluates an integer expression (`+ - *`, parentheses, `min`, `max`).
pub fn eval_int(src: &str, params: &Params) -> Result<i64> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        vars: None,
        params,
    };
    let v = p.int_expr()?;
    if *p.peek() != Tok::End {
        return p.err("unexpected trailing input");
    }
    Ok(v)
}

/// Identifiers that look like variables, in order of first appearance.
/// Used when a roster is not given explicitly.
pub fn collect_identifiers(src: &str) -> Result<Vec<String>> {
    let mut seen = Vec::new();
    for t in lex(src)? {
        if let Tok::Ident(s) = t.tok {
            if !seen.contains(&s) {
                seen.push(s);
            }
        }
    }
    Ok(seen)
}

/// Shifts the position of a parse error reported relative to a fragment.
pub(crate) fn relocate(err: Error, line: usize, column_offset: usize) -> Error {
    match err {
        Error::Parse { column, message, .. } => Error::Parse {
            line,
            column: column + column_offset,
            message,
        },
        other => other,
    }
}

/// Splits a bracketed row `[a, b, c]` into its cells, tracking the column
/// (0-based char offset) at which each cell starts. Commas nested inside
/// parentheses do not split.
pub(crate) fn split_row(line: &str, line_no: usize) -> Result<Vec<(String, usize)>> {
    let chars: Vec<char> = line.chars().collect();
    let open = chars
        .iter()
        .position(|&c| c == '[')
        .ok_or_else(|| Error::parse(line_no, 1, "expected '[' to start a matrix row"))?;
    let close = chars
        .iter()
        .rposition(|&c| c == ']')
        .ok_or_else(|| Error::parse(line_no, chars.len(), "expected ']' to end a matrix row"))?;
    if close < open {
        return Err(Error::parse(line_no, close + 1, "unbalanced brackets"));
    }
    if chars[close + 1..].iter().any(|c| !c.is_whitespace()) {
        return Err(Error::parse(line_no, close + 2, "unexpected text after ']'"));
    }
    let mut cells = Vec::new();
    let mut depth = 0i32;
    let mut start = open + 1;
    for i in open + 1..close {
        match chars[i] {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                cells.push((chars[start..i].iter().collect(), start));
                start = i + 1;
            }
            _ => {}
        }
    }
    cells.push((chars[start..close].iter().collect(), start));
    Ok(cells)
}
