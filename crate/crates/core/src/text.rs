//! Canonical polynomial text format.
//!
//! Terms appear in decreasing degree joined by ` + `. Extension-field
//! coefficients are written in the generator `a` (`a^2+2a+1`); a coefficient
//! with more than one term is parenthesized, a non-unit coefficient of a
//! nonconstant term is joined with `*`. Examples: `x^3 + x^2 + x + (a+1)`,
//! `x^2 + a*x + a`, `x^4 + 2*x + 1`.
//!
//! The parser accepts this format plus the looser style `x^3 + x^2 + a+1`,
//! implicit multiplication (`2a`, `3x^2`), subtraction and parentheses.

use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::poly::Poly;

/// Format little-endian prime-field digits in the variable `var`.
pub fn format_digits(digits: &[u32], var: char) -> String {
    let mut terms = Vec::new();
    for (i, &c) in digits.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let t = match (i, c) {
            (0, c) => c.to_string(),
            (1, 1) => var.to_string(),
            (1, c) => format!("{c}{var}"),
            (i, 1) => format!("{var}^{i}"),
            (i, c) => format!("{c}{var}^{i}"),
        };
        terms.push(t);
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}

pub fn format_elem(field: &Field, x: Fe) -> String {
    if field.is_prime_field() {
        return x.index().to_string();
    }
    format_digits(&field.coeffs(x), 'a')
}

pub fn format_poly(p: &Poly) -> String {
    let field = p.field();
    let mut terms = Vec::new();
    for (d, &c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let s = format_elem(field, c);
        let multi = s.contains('+');
        let xs = match d {
            0 => String::new(),
            1 => "x".to_string(),
            d => format!("x^{d}"),
        };
        let t = if d == 0 {
            if multi {
                format!("({s})")
            } else {
                s
            }
        } else if c == Fe::ONE {
            xs
        } else if multi {
            format!("({s})*{xs}")
        } else {
            format!("{s}*{xs}")
        };
        terms.push(t);
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

struct Parser<'a> {
    field: &'a Field,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at byte {} of `{}`", self.pos, String::from_utf8_lossy(self.src)))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap().parse().map_err(|_| self.err("expected a number"))
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = Poly::zero(self.field);
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1
            }
            Some(b'+') => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            acc = if sign > 0 { &acc + &t } else { &acc - &t };
            match self.peek() {
                Some(b'+') => sign = 1,
                Some(b'-') => sign = -1,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(c) if c.is_ascii_digit() || matches!(c, b'a' | b'x' | b'X' | b'(') => {
                    acc = &acc * &self.factor()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.number()?;
            let e = u32::try_from(e).map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly> {
        let f = self.field;
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.number()?;
                let r = (n % f.characteristic()) as i64;
                Ok(Poly::constant(f, f.from_int(r)))
            }
            Some(b'a') => {
                self.pos += 1;
                let g =
                    f.generator_symbol().ok_or_else(|| self.err("generator `a` is undefined over a prime field"))?;
                Ok(Poly::constant(f, g))
            }
            Some(b'x') | Some(b'X') => {
                self.pos += 1;
                Ok(Poly::x(f))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(self.err("unexpected token")),
        }
    }
}

/// Parse a polynomial over `field`.
pub fn parse_poly(field: &Field, s: &str) -> Result<Poly> {
    let mut p = Parser { field, src: s.as_bytes(), pos: 0 };
    let out = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(out)
}

/// Parse a field element written in the generator `a`.
pub fn parse_elem(field: &Field, s: &str) -> Result<Fe> {
    let p = parse_poly(field, s)?;
    match p.deg() {
        None => Ok(Fe::ZERO),
        Some(0) => Ok(p.coeff(0)),
        Some(_) => Err(Error::Parse(format!("`{s}` is not a field element"))),
    }
}
