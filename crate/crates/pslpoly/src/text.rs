//! Parser for the textual forms `GF(p^e|modulus)` and `GF(p^e|modulus){ ... }`.
//!
//! Expressions are sums of products of integers, the field generator `g`,
//! the indeterminate `X` and parenthesised subexpressions, each optionally
//! raised to a non-negative integer power. Coefficients are reduced modulo `p`
//! as soon as `p` is known.

use crate::error::{Error, Result};
use std::collections::BTreeMap;

/// Sparse polynomial in `g` and `X` with coefficients modulo `p`, keyed by `(deg_g, deg_X)`.
pub(crate) type Sparse = BTreeMap<(u64, u64), u64>;

const MAX_GROUP_POWER: u64 = 4096;

pub(crate) struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    modulus: u64,
    allow_x: bool,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        Parser { src, bytes: src.as_bytes(), pos: 0, modulus: 0, allow_x: false }
    }

    pub(crate) fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    pub(crate) fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    pub(crate) fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    pub(crate) fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    pub(crate) fn expect_word(&mut self, w: &str) -> Result<()> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(w) {
            self.pos += w.len();
            Ok(())
        } else {
            self.err(format!("expected '{w}'"))
        }
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    pub(crate) fn uint(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        self.src[start..self.pos]
            .parse::<u64>()
            .map_err(|_| Error::Parse { pos: start, msg: "integer out of range".into() })
    }

    /// Parse an expression; `modulus` is the characteristic used to reduce coefficients.
    pub(crate) fn expr(&mut self, modulus: u64, allow_x: bool) -> Result<Sparse> {
        self.modulus = modulus;
        self.allow_x = allow_x;
        self.sum()
    }

    fn sum(&mut self) -> Result<Sparse> {
        let mut acc = Sparse::new();
        let mut negate = false;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            negate = true;
        }
        loop {
            let t = self.product()?;
            self.accumulate(&mut acc, &t, negate);
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    negate = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    negate = true;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn accumulate(&self, acc: &mut Sparse, t: &Sparse, negate: bool) {
        let m = self.modulus;
        for (&k, &c) in t {
            let c = if negate { (m - c % m) % m } else { c % m };
            let entry = acc.entry(k).or_insert(0);
            *entry = (*entry + c) % m;
        }
        acc.retain(|_, c| *c != 0);
    }

    fn product(&mut self) -> Result<Sparse> {
        let mut acc = self.power()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let rhs = self.power()?;
            acc = self.mul(&acc, &rhs);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Sparse> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let k = self.uint()?;
        if base.len() == 1 {
            let (&(dg, dx), &c) = base.iter().next().unwrap();
            let coeff = crate::numtheory::pow_mod(c, k, self.modulus);
            let mut out = Sparse::new();
            let key = (
                dg.checked_mul(k).ok_or(Error::Parse { pos: self.pos, msg: "exponent overflow".into() })?,
                dx.checked_mul(k).ok_or(Error::Parse { pos: self.pos, msg: "exponent overflow".into() })?,
            );
            if coeff != 0 {
                out.insert(key, coeff);
            }
            return Ok(out);
        }
        if k > MAX_GROUP_POWER {
            return self.err("exponent on a parenthesised group is too large");
        }
        let mut acc = Sparse::new();
        acc.insert((0, 0), 1 % self.modulus);
        for _ in 0..k {
            acc = self.mul(&acc, &base);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Sparse> {
        let mut out = Sparse::new();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.sum()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(b'g') => {
                self.pos += 1;
                out.insert((1, 0), 1 % self.modulus);
                Ok(out)
            }
            Some(b'X') if self.allow_x => {
                self.pos += 1;
                out.insert((0, 1), 1 % self.modulus);
                Ok(out)
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.uint()? % self.modulus;
                if v != 0 {
                    out.insert((0, 0), v);
                }
                Ok(out)
            }
            Some(c) => self.err(format!("unexpected character '{}'", c as char)),
            None => self.err("unexpected end of input"),
        }
    }

    fn mul(&self, a: &Sparse, b: &Sparse) -> Sparse {
        let m = self.modulus as u128;
        let mut out = Sparse::new();
        for (&(ga, xa), &ca) in a {
            for (&(gb, xb), &cb) in b {
                let e = out.entry((ga + gb, xa + xb)).or_insert(0);
                *e = ((*e as u128 + ca as u128 * cb as u128) % m) as u64;
            }
        }
        out.retain(|_, c| *c != 0);
        out
    }
}

/// Render a polynomial with non-negative integer coefficients (index = degree) in `var`.
pub(crate) fn render_int_poly(coeffs: &[u64], var: &str) -> String {
    let mut terms = Vec::new();
    for (i, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let t = match (i, c) {
            (0, c) => c.to_string(),
            (1, 1) => var.to_string(),
            (1, c) => format!("{c}*{var}"),
            (i, 1) => format!("{var}^{i}"),
            (i, c) => format!("{c}*{var}^{i}"),
        };
        terms.push(t);
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sums_products_and_groups() {
        let mut p = Parser::new("2*g^2 + (g+1)^2 - 3");
        let s = p.expr(7, false).unwrap();
        // 2g^2 + g^2 + 2g + 1 - 3 = 3g^2 + 2g + 5
        let expected: Sparse = [((2, 0), 3), ((1, 0), 2), ((0, 0), 5)].into_iter().collect();
        assert_eq!(s, expected);
    }

    #[test]
    fn x_requires_permission() {
        let mut p = Parser::new("X^2");
        assert!(p.expr(5, false).is_err());
        let mut p = Parser::new("(g+1)*X^21 + X");
        let s = p.expr(5, true).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s[&(1, 21)], 1);
        assert_eq!(s[&(0, 1)], 1);
    }

    #[test]
    fn renders_integer_polynomials() {
        assert_eq!(render_int_poly(&[1, 1, 0, 1], "g"), "g^3+g+1");
        assert_eq!(render_int_poly(&[0, 1], "g"), "g");
        assert_eq!(render_int_poly(&[0, 0], "g"), "0");
        assert_eq!(render_int_poly(&[2, 3], "g"), "3*g+2");
    }
}
