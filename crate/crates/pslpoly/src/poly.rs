//! Dense univariate polynomials over a [`Field`].

use crate::error::{precondition, Error, Result};
use crate::gf::{Embedding, Fe, Field};
use crate::text::Parser;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Domains up to this size are tallied in a dense counter array.
pub const DENSE_TALLY_LIMIT: u64 = 1 << 26;

const EVAL_BATCH: u64 = 1 << 18;

/// Polynomial with coefficients stored low degree first and no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Fe>,
}

/// Summary of evaluating a polynomial at every point of a domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalStats {
    pub domain_size: u64,
    pub distinct: u64,
    pub max_fiber: u64,
}

impl EvalStats {
    pub fn bijective(&self) -> bool {
        self.distinct == self.domain_size
    }
}

impl Poly {
    pub fn new(field: &Field, mut coeffs: Vec<Fe>) -> Poly {
        while coeffs.last().is_some_and(|c| c.0 == 0) {
            coeffs.pop();
        }
        Poly { field: field.clone(), coeffs }
    }

    pub fn zero(field: &Field) -> Poly {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field, field.one())
    }

    pub fn constant(field: &Field, c: Fe) -> Poly {
        Poly::new(field, vec![c])
    }

    pub fn x(field: &Field) -> Poly {
        Poly::monomial(field, field.one(), 1)
    }

    pub fn monomial(field: &Field, c: Fe, k: usize) -> Poly {
        let mut coeffs = vec![field.zero(); k + 1];
        coeffs[k] = c;
        Poly::new(field, coeffs)
    }

    /// Build from integer coefficients, low degree first.
    pub fn from_ints(field: &Field, coeffs: &[i64]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    /// Build from `(coefficient, degree)` pairs with integer coefficients.
    pub fn from_terms(field: &Field, terms: &[(i64, usize)]) -> Poly {
        let deg = terms.iter().map(|t| t.1).max().unwrap_or(0);
        let mut coeffs = vec![field.zero(); deg + 1];
        for &(c, k) in terms {
            coeffs[k] = field.add(coeffs[k], field.from_i64(c));
        }
        Poly::new(field, coeffs)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).copied().unwrap_or_default()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lc(&self) -> Fe {
        self.coeffs.last().copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == self.field.one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_monic(&self) -> bool {
        self.lc() == self.field.one()
    }

    fn same_field(&self, other: &Poly) {
        assert!(self.field == other.field, "polynomials over different fields: {} and {}", self.field, other.field);
    }

    /// Nonzero terms as `(degree, coefficient)`, low degree first.
    pub fn terms(&self) -> impl Iterator<Item = (usize, Fe)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| c.0 != 0).map(|(i, &c)| (i, c))
    }

    pub fn scale(&self, c: Fe) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Multiply by `X^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.field.zero(); k];
        coeffs.extend_from_slice(&self.coeffs);
        Poly { field: self.field.clone(), coeffs }
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(self.lc()).expect("nonzero leading coefficient");
        self.scale(inv)
    }

    pub fn eval(&self, a: Fe) -> Fe {
        let f = &self.field;
        self.coeffs.iter().rev().fold(f.zero(), |acc, &c| f.add(f.mul(acc, a), c))
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| f.mul_int(c, i as u64)).collect();
        Poly::new(f, coeffs)
    }

    fn mul_impl(&self, other: &Poly) -> Poly {
        self.same_field(other);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let f = &self.field;
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.0 == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b.0 != 0 {
                    out[i + j] = f.add(out[i + j], f.mul(a, b));
                }
            }
        }
        Poly::new(f, out)
    }

    fn add_impl(&self, other: &Poly, subtract: bool) -> Poly {
        self.same_field(other);
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let (a, b) = (self.coeff(i), other.coeff(i));
                if subtract {
                    f.sub(a, b)
                } else {
                    f.add(a, b)
                }
            })
            .collect();
        Poly::new(f, coeffs)
    }

    pub fn pow(&self, mut n: u64) -> Poly {
        let mut acc = Poly::one(&self.field);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        self.same_field(d);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = &self.field;
        if self.coeffs.len() < d.coeffs.len() {
            return Ok((Poly::zero(f), self.clone()));
        }
        let dn = d.coeffs.len() - 1;
        let inv = f.inv(d.lc())?;
        let mut r = self.coeffs.clone();
        let mut quot = vec![f.zero(); r.len() - dn];
        for k in (0..quot.len()).rev() {
            let c = f.mul(r[k + dn], inv);
            quot[k] = c;
            if c.0 == 0 {
                continue;
            }
            for (j, &dj) in d.coeffs.iter().enumerate().take(dn) {
                if dj.0 != 0 {
                    r[k + j] = f.sub(r[k + j], f.mul(c, dj));
                }
            }
            r[k + dn] = f.zero();
        }
        r.truncate(dn);
        Ok((Poly::new(f, quot), Poly::new(f, r)))
    }

    pub fn rem(&self, d: &Poly) -> Result<Poly> {
        Ok(self.divrem(d)?.1)
    }

    pub fn exact_div(&self, d: &Poly) -> Result<Poly> {
        let (q, r) = self.divrem(d)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::InexactDivision)
        }
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn mulmod(&self, other: &Poly, m: &Poly) -> Poly {
        (self * other).rem(m).expect("nonzero modulus")
    }

    pub fn powmod(&self, mut n: u64, m: &Poly) -> Poly {
        let mut acc = Poly::one(&self.field).rem(m).expect("nonzero modulus");
        let mut base = self.rem(m).expect("nonzero modulus");
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mulmod(&base, m);
            }
            n >>= 1;
            if n > 0 {
                base = base.mulmod(&base, m);
            }
        }
        acc
    }

    /// `self(inner)`.
    pub fn compose(&self, inner: &Poly) -> Poly {
        self.same_field(inner);
        let f = &self.field;
        let mut acc = Poly::zero(f);
        for &c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Poly::constant(f, c);
        }
        acc
    }

    /// Image under a field embedding.
    pub fn map_field(&self, emb: &Embedding) -> Result<Poly> {
        if emb.source() != &self.field {
            return Err(Error::FieldMismatch);
        }
        Ok(Poly::new(emb.target(), self.coeffs.iter().map(|&c| emb.map(c)).collect()))
    }

    /// Image in a field containing the coefficient field, via the canonical embedding.
    pub fn embed_into(&self, target: &Field) -> Result<Poly> {
        if target == &self.field {
            return Ok(self.clone());
        }
        self.map_field(&Embedding::new(&self.field, target)?)
    }

    /// For `self` in `k[X^p]`, the polynomial `r` with `r^p = self`.
    pub fn pth_root(&self) -> Result<Poly> {
        let f = &self.field;
        let p = f.characteristic() as usize;
        let mut coeffs = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if i % p != 0 {
                if c.0 != 0 {
                    return precondition("polynomial is not a p-th power");
                }
                continue;
            }
            coeffs.push(f.frobenius_inv(c, 1));
        }
        Ok(Poly::new(f, coeffs))
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).is_one()
    }

    /// Squarefree decomposition of the monic part: pairwise coprime squarefree factors with multiplicities.
    pub fn squarefree_decomposition(&self) -> Vec<(Poly, u32)> {
        if self.is_constant() {
            return Vec::new();
        }
        let p = self.field.characteristic() as u32;
        let f = self.monic();
        let mut out = Vec::new();
        let mut c = f.gcd(&f.derivative());
        let mut w = f.exact_div(&c).expect("gcd divides");
        let mut i = 1u32;
        while !w.is_one() {
            let y = w.gcd(&c);
            let z = w.exact_div(&y).expect("gcd divides");
            if !z.is_one() {
                out.push((z, i));
            }
            i += 1;
            w = y;
            c = c.exact_div(&w).expect("gcd divides");
        }
        if !c.is_one() {
            let root = c.pth_root().expect("remaining part is a p-th power");
            for (g, m) in root.squarefree_decomposition() {
                out.push((g, m * p));
            }
        }
        out
    }

    /// Distinct-degree factorisation of a monic squarefree polynomial: `(product, degree)` pairs.
    pub fn distinct_degree_factorization(&self) -> Vec<(Poly, usize)> {
        let f = &self.field;
        let mut out = Vec::new();
        let mut rest = self.monic();
        if rest.deg() == 0 {
            return out;
        }
        let frob = FrobeniusMap::new(&rest);
        let x = Poly::x(f).rem(&rest).expect("nonzero");
        let mut h = x.clone();
        let mut d = 1;
        while rest.deg() >= 2 * d {
            h = frob.apply(&h).rem(&rest).expect("nonzero");
            let g = rest.gcd(&(&h - &x));
            if !g.is_one() {
                rest = rest.exact_div(&g).expect("gcd divides");
                h = h.rem(&rest).expect("nonzero");
                out.push((g, d));
            }
            d += 1;
        }
        if rest.deg() > 0 {
            let n = rest.deg();
            out.push((rest, n));
        }
        out
    }

    fn equal_degree_split(&self, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Poly>) {
        let n = self.deg();
        if n == d {
            out.push(self.clone());
            return;
        }
        let f = &self.field;
        let q = f.order();
        let frob = FrobeniusMap::new(self);
        loop {
            let a = Poly::new(f, (0..n).map(|_| f.from_index(rng.gen_range(0..q))).collect());
            if a.is_constant() {
                continue;
            }
            let b = if f.characteristic() == 2 {
                let mut acc = a.clone();
                let mut t = a.clone();
                for _ in 1..(f.degree() as usize * d) {
                    t = t.mulmod(&t, self);
                    acc = &acc + &t;
                }
                acc
            } else {
                let mut acc = a.clone();
                let mut t = a.clone();
                for _ in 1..d {
                    t = frob.apply(&t);
                    acc = acc.mulmod(&t, self);
                }
                &acc.powmod((q - 1) / 2, self) - &Poly::one(f)
            };
            let g = self.gcd(&b);
            if g.deg() > 0 && g.deg() < n {
                let other = self.exact_div(&g).expect("gcd divides");
                g.equal_degree_split(d, rng, out);
                other.equal_degree_split(d, rng, out);
                return;
            }
        }
    }

    /// Monic irreducible factors with multiplicities, using seed 0 for the splitting step.
    pub fn factor(&self) -> Vec<(Poly, u32)> {
        self.factor_seeded(0)
    }

    pub fn factor_seeded(&self, seed: u64) -> Vec<(Poly, u32)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        for (sqf, mult) in self.squarefree_decomposition() {
            for (part, d) in sqf.distinct_degree_factorization() {
                let mut pieces = Vec::new();
                part.equal_degree_split(d, &mut rng, &mut pieces);
                out.extend(pieces.into_iter().map(|g| (g, mult)));
            }
        }
        let field = self.field.clone();
        out.sort_by(|a, b| {
            a.0.deg().cmp(&b.0.deg()).then_with(|| {
                let ka: Vec<u64> = a.0.coeffs.iter().rev().map(|&c| field.index(c)).collect();
                let kb: Vec<u64> = b.0.coeffs.iter().rev().map(|&c| field.index(c)).collect();
                ka.cmp(&kb)
            })
        });
        out
    }

    /// Degrees of the irreducible factors of a squarefree polynomial, ascending.
    pub fn degree_pattern(&self) -> Result<Vec<usize>> {
        if !self.is_squarefree() {
            return precondition("degree pattern requires a squarefree polynomial");
        }
        let mut pattern = Vec::new();
        for (part, d) in self.distinct_degree_factorization() {
            pattern.extend(std::iter::repeat_n(d, part.deg() / d));
        }
        pattern.sort_unstable();
        Ok(pattern)
    }

    /// Rabin's irreducibility test.
    pub fn is_irreducible(&self) -> bool {
        let n = self.deg();
        if n == 0 || self.is_zero() {
            return false;
        }
        if n == 1 {
            return true;
        }
        let f = self.monic();
        let frob = FrobeniusMap::new(&f);
        let x = Poly::x(&self.field).rem(&f).expect("nonzero");
        let primes = crate::numtheory::prime_factors(n as u64);
        let mut h = x.clone();
        let mut powers = vec![x.clone()];
        for _ in 0..n {
            h = frob.apply(&h);
            powers.push(h.clone());
        }
        if powers[n] != x {
            return false;
        }
        primes.iter().all(|&r| f.gcd(&(&powers[n / r as usize] - &x)).is_one())
    }

    /// Distinct roots in the coefficient field, in index order.
    pub fn roots(&self) -> Vec<Fe> {
        let f = &self.field;
        if self.deg() == 0 {
            return Vec::new();
        }
        let frob = FrobeniusMap::new(&self.monic());
        let x = Poly::x(f).rem(&self.monic()).expect("nonzero");
        let xq = frob.apply(&x);
        let linear = self.gcd(&(&xq - &x));
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut pieces = Vec::new();
        if linear.deg() > 0 {
            linear.equal_degree_split(1, &mut rng, &mut pieces);
        }
        let mut roots: Vec<Fe> = pieces.iter().map(|g| f.neg(g.coeff(0))).collect();
        roots.sort_by_key(|&r| f.index(r));
        roots
    }

    /// Digits `a_i` with `deg a_i < deg h` and `self = sum a_i h^i`.
    pub fn h_adic_expand(&self, h: &Poly) -> Result<Vec<Poly>> {
        if h.deg() == 0 {
            return precondition("h-adic expansion requires deg h >= 1");
        }
        let mut digits = Vec::new();
        let mut rest = self.clone();
        loop {
            let (q, r) = rest.divrem(h)?;
            digits.push(r);
            if q.is_zero() {
                break;
            }
            rest = q;
        }
        Ok(digits)
    }

    /// The `g` with `self = g(h)` when it exists, stopping at the first non-constant digit.
    pub fn outer_component(&self, h: &Poly) -> Option<Poly> {
        if h.deg() == 0 {
            return None;
        }
        let f = &self.field;
        let mut coeffs = Vec::new();
        let mut rest = self.clone();
        loop {
            let (q, r) = rest.divrem(h).ok()?;
            if r.deg() > 0 {
                return None;
            }
            coeffs.push(r.coeff(0));
            if q.is_zero() {
                break;
            }
            rest = q;
        }
        Some(Poly::new(f, coeffs))
    }

    /// Evaluate at every element of `domain`, which must contain the coefficient field.
    pub fn bulk_evaluate(&self, domain: &Field) -> Result<EvalStats> {
        let g = self.embed_into(domain)?;
        let size = domain.order();
        let mut max_fiber = 0u64;
        let mut distinct = 0u64;
        if size <= DENSE_TALLY_LIMIT {
            let mut counts = vec![0u16; size as usize];
            let mut start = 0u64;
            while start < size {
                let end = (start + EVAL_BATCH).min(size);
                let values: Vec<u64> = (start..end)
                    .into_par_iter()
                    .map(|i| domain.index(g.eval(domain.from_index(i))))
                    .collect();
                for v in values {
                    let c = &mut counts[v as usize];
                    if *c == 0 {
                        distinct += 1;
                    }
                    *c = c.saturating_add(1);
                    max_fiber = max_fiber.max(*c as u64);
                }
                start = end;
            }
        } else {
            let mut counts: HashMap<u64, u64> = HashMap::new();
            for i in 0..size {
                let v = domain.index(g.eval(domain.from_index(i)));
                let c = counts.entry(v).or_insert(0);
                *c += 1;
                max_fiber = max_fiber.max(*c);
            }
            distinct = counts.len() as u64;
        }
        Ok(EvalStats { domain_size: size, distinct, max_fiber })
    }

    /// Parse `GF(p^e|modulus){ expression in X }`.
    pub fn parse(s: &str) -> Result<Poly> {
        let mut parser = Parser::new(s);
        let field = Field::parse_from(&mut parser)?;
        parser.expect(b'{')?;
        let sparse = parser.expr(field.characteristic(), true)?;
        parser.expect(b'}')?;
        if !parser.at_end() {
            return parser.err("trailing input after polynomial");
        }
        Poly::from_sparse(&field, &sparse)
    }

    /// Parse an expression in `X` over a known field.
    pub fn parse_in(field: &Field, s: &str) -> Result<Poly> {
        let mut parser = Parser::new(s);
        let sparse = parser.expr(field.characteristic(), true)?;
        if !parser.at_end() {
            return parser.err("trailing input after polynomial");
        }
        Poly::from_sparse(field, &sparse)
    }

    fn from_sparse(field: &Field, sparse: &crate::text::Sparse) -> Result<Poly> {
        let deg = sparse.keys().map(|k| k.1).max().unwrap_or(0);
        if deg > 1 << 28 {
            return Err(Error::Parse { pos: 0, msg: "degree too large".into() });
        }
        let mut coeffs = vec![field.zero(); deg as usize + 1];
        let g = field.generator();
        for (&(dg, dx), &c) in sparse {
            let term = field.mul(field.from_int(c), field.pow(g, dg));
            coeffs[dx as usize] = field.add(coeffs[dx as usize], term);
        }
        Ok(Poly::new(field, coeffs))
    }

    /// The body of the textual form, without the field prefix.
    pub fn body_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut terms = Vec::new();
        for (k, c) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            let s = self.field.format_elem(c);
            let compound = s.contains('+');
            let t = match k {
                0 if compound => format!("({s})"),
                0 => s,
                _ => {
                    let mono = if k == 1 { "X".to_string() } else { format!("X^{k}") };
                    if s == "1" {
                        mono
                    } else if compound {
                        format!("({s})*{mono}")
                    } else {
                        format!("{s}*{mono}")
                    }
                }
            };
            terms.push(t);
        }
        terms.join(" + ")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{{ {} }}", self.field, self.body_text())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.add_impl(rhs, false)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.add_impl(rhs, true)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.mul_impl(rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
}

/// The `F_q`-linear map `a -> a^q` on `F_q[X]/(m)`, stored as the images of `X^j`.
struct FrobeniusMap {
    modulus: Poly,
    columns: Vec<Poly>,
}

impl FrobeniusMap {
    fn new(m: &Poly) -> FrobeniusMap {
        let f = m.field();
        let n = m.deg();
        let xq = Poly::x(f).powmod(f.order(), m);
        let mut columns = Vec::with_capacity(n);
        let mut cur = Poly::one(f).rem(m).expect("nonzero");
        for _ in 0..n {
            columns.push(cur.clone());
            cur = cur.mulmod(&xq, m);
        }
        FrobeniusMap { modulus: m.clone(), columns }
    }

    fn apply(&self, a: &Poly) -> Poly {
        let f = self.modulus.field();
        let n = self.columns.len();
        let mut out = vec![f.zero(); n];
        for (j, &c) in a.coeffs().iter().enumerate() {
            if c.0 == 0 {
                continue;
            }
            for (i, &v) in self.columns[j].coeffs().iter().enumerate() {
                out[i] = f.add(out[i], f.mul(c, v));
            }
        }
        Poly::new(f, out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f7() -> Field {
        Field::make(7, 1).unwrap()
    }

    #[test]
    fn division_and_gcd() {
        let f = f7();
        let a = Poly::from_ints(&f, &[-1, 0, 1]);
        let b = Poly::from_ints(&f, &[-1, 1]);
        let (q, r) = a.divrem(&b).unwrap();
        assert_eq!(q, Poly::from_ints(&f, &[1, 1]));
        assert!(r.is_zero());
        let c = Poly::from_ints(&f, &[1, 1]);
        assert_eq!(a.gcd(&(&b * &b)), b);
        assert!(a.divrem(&Poly::zero(&f)).is_err());
        assert_eq!(c.exact_div(&b), Err(Error::InexactDivision));
    }

    #[test]
    fn composition_and_derivative() {
        let f = f7();
        let g = Poly::from_ints(&f, &[0, 0, 1]);
        let h = Poly::from_ints(&f, &[1, 1]);
        assert_eq!(g.compose(&h), Poly::from_ints(&f, &[1, 2, 1]));
        let x7 = Poly::monomial(&f, f.one(), 7);
        assert!(x7.derivative().is_zero());
        assert_eq!(x7.pth_root().unwrap(), Poly::x(&f));
    }

    #[test]
    fn factor_x8_minus_x_over_f2() {
        let f2 = Field::make(2, 1).unwrap();
        let p = Poly::from_terms(&f2, &[(1, 8), (1, 1)]);
        let fac = p.factor();
        let degs: Vec<usize> = fac.iter().map(|(g, _)| g.deg()).collect();
        assert_eq!(degs, vec![1, 1, 3, 3]);
        let prod = fac.iter().fold(Poly::one(&f2), |acc, (g, m)| &acc * &g.pow(*m as u64));
        assert_eq!(prod, p);
    }

    #[test]
    fn factor_with_multiplicities() {
        let f3 = Field::make(3, 1).unwrap();
        let a = Poly::from_ints(&f3, &[1, 0, 1]);
        let b = Poly::from_ints(&f3, &[1, 1]);
        let p = &a.pow(3) * &b.pow(4);
        let fac = p.factor();
        assert_eq!(fac, vec![(b, 4), (a, 3)]);
    }

    #[test]
    fn irreducibility() {
        let f2 = Field::make(2, 1).unwrap();
        assert!(Poly::from_ints(&f2, &[1, 1, 0, 1]).is_irreducible());
        assert!(!Poly::from_ints(&f2, &[1, 0, 0, 1]).is_irreducible());
        let f49 = Field::make(7, 2).unwrap();
        let x2p1 = Poly::from_ints(&f49, &[1, 0, 1]);
        assert!(!x2p1.is_irreducible());
        assert_eq!(x2p1.roots().len(), 2);
    }

    #[test]
    fn h_adic_round_trip() {
        let f = f7();
        let h = Poly::from_ints(&f, &[0, 2, 0, 1]);
        let g = Poly::from_ints(&f, &[3, 1, 4, 1, 5]);
        let composed = g.compose(&h);
        let digits = composed.h_adic_expand(&h).unwrap();
        assert!(digits.iter().all(|d| d.deg() == 0));
        assert_eq!(composed.outer_component(&h), Some(g));
        let bumped = &composed + &Poly::x(&f);
        assert_eq!(bumped.outer_component(&h), None);
    }

    #[test]
    fn bulk_evaluation_counts() {
        let f = f7();
        let cube = Poly::monomial(&f, f.one(), 3);
        let stats = cube.bulk_evaluate(&f).unwrap();
        assert_eq!(stats, EvalStats { domain_size: 7, distinct: 3, max_fiber: 3 });
        let fifth = Poly::monomial(&f, f.one(), 5);
        assert!(fifth.bulk_evaluate(&f).unwrap().bijective());
        assert!(fifth.bulk_evaluate(&Field::make(7, 2).unwrap()).unwrap().bijective());
        assert!(!fifth.bulk_evaluate(&Field::make(7, 4).unwrap()).unwrap().bijective());
    }

    #[test]
    fn text_round_trip() {
        let s = "GF(7^1|g){ X^21 + 3*X^14 + 5 }";
        let p = Poly::parse(s).unwrap();
        assert_eq!(p.to_string(), s);
        let f8 = Field::make(2, 3).unwrap();
        let q = Poly::new(&f8, vec![f8.generator(), f8.one(), f8.zero(), f8.parse_elem("g^2+1").unwrap()]);
        let text = q.to_string();
        assert_eq!(text, "GF(2^3|g^3+g+1){ (g^2+1)*X^3 + X + g }");
        assert_eq!(Poly::parse(&text).unwrap(), q);
        assert_eq!(Poly::zero(&f8).to_string(), "GF(2^3|g^3+g+1){ 0 }");
        assert!(Poly::parse("GF(7^1|g){ X^2 + }").is_err());
    }
}
