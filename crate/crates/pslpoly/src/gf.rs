//! Finite fields `F_{p^e}` with elements stored as packed coefficient vectors.
//!
//! An element is the residue of a polynomial of degree `< e` in the generator `g`
//! modulo the field's monic irreducible modulus. Coefficients are packed into a
//! `u64`: one bit per coefficient in characteristic 2, otherwise a fixed-width slot
//! with one guard bit so that addition can be done slot-wise without carries.

use crate::error::{precondition, Error, Result};
use crate::numtheory;
use crate::poly::Poly;
use crate::text::{render_int_poly, Parser};
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

/// Packed field element. Only meaningful together with the [`Field`] that produced it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fe(pub(crate) u64);

struct Inner {
    p: u64,
    e: u32,
    q: u64,
    modulus: Vec<u64>,
    width: u32,
    slot_mask: u64,
    rep_p: u64,
    rep_bias: u64,
    rep_high: u64,
    neg_modulus: Vec<u64>,
    binary_modulus: u128,
    powers_of_p: Vec<u64>,
}

/// A finite field `F_{p^e}` with a chosen monic irreducible modulus.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.e == other.0.e && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl Hash for Field {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.p.hash(state);
        self.0.modulus.hash(state);
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}|{})", self.0.p, self.0.e, render_int_poly(&self.0.modulus, "g"))
    }
}

fn bit_len(x: u64) -> u32 {
    64 - x.leading_zeros()
}

fn field_cache() -> &'static Mutex<HashMap<(u64, u32), Field>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32), Field>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl Field {
    fn build(p: u64, e: u32, modulus: Vec<u64>) -> Result<Field> {
        if !numtheory::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 || p >= 1 << 31 {
            return Err(Error::FieldTooLarge(p, e));
        }
        let q = numtheory::checked_pow(p, e).filter(|&q| q < 1 << 62).ok_or(Error::FieldTooLarge(p, e))?;
        let width = if p == 2 { 1 } else { bit_len(2 * p - 2) + 1 };
        if width as u64 * e as u64 > 64 {
            return Err(Error::FieldTooLarge(p, e));
        }
        let slot_mask = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };
        let rep = |x: u64| -> u64 { (0..e).fold(0u64, |acc, i| acc | (x << (i * width))) };
        let (rep_p, rep_bias, rep_high) = if p == 2 {
            (0, 0, 0)
        } else {
            let half = 1u64 << (width - 1);
            (rep(p), rep(half - p), rep(half))
        };
        let neg_modulus = modulus[..e as usize].iter().map(|&m| (p - m) % p).collect();
        let binary_modulus = if p == 2 {
            modulus.iter().enumerate().fold(0u128, |acc, (i, &c)| acc | ((c as u128) << i))
        } else {
            0
        };
        let mut powers_of_p = Vec::with_capacity(e as usize);
        let mut pk = 1u64;
        for _ in 0..e {
            powers_of_p.push(pk);
            pk = pk.saturating_mul(p);
        }
        Ok(Field(Arc::new(Inner {
            p,
            e,
            q,
            modulus,
            width,
            slot_mask,
            rep_p,
            rep_bias,
            rep_high,
            neg_modulus,
            binary_modulus,
            powers_of_p,
        })))
    }

    /// The field `F_{p^e}` defined by the lexicographically least monic irreducible of
    /// degree `e`, where candidates are ordered by `sum c_i p^i` over their lower coefficients.
    pub fn make(p: u64, e: u32) -> Result<Field> {
        if let Some(f) = field_cache().lock().unwrap().get(&(p, e)) {
            return Ok(f.clone());
        }
        if !numtheory::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let f = if e == 1 {
            Field::build(p, 1, vec![0, 1])?
        } else {
            let prime = Field::make(p, 1)?;
            let q = numtheory::checked_pow(p, e).ok_or(Error::FieldTooLarge(p, e))?;
            // Validate size limits before searching.
            Field::build(p, e, {
                let mut m = vec![0; e as usize];
                m.push(1);
                m
            })?;
            let mut found = None;
            for n in 0..q {
                let mut m = Vec::with_capacity(e as usize + 1);
                let mut x = n;
                for _ in 0..e {
                    m.push(x % p);
                    x /= p;
                }
                m.push(1);
                if m[0] == 0 {
                    continue;
                }
                if poly_over_prime(&prime, &m).is_irreducible() {
                    found = Some(m);
                    break;
                }
            }
            let m = found.ok_or(Error::Reducible(e))?;
            Field::build(p, e, m)?
        };
        field_cache().lock().unwrap().insert((p, e), f.clone());
        Ok(f)
    }

    /// The field defined by a caller-supplied monic modulus (coefficients low to high).
    pub fn with_modulus(p: u64, modulus: &[u64]) -> Result<Field> {
        if modulus.len() < 2 || *modulus.last().unwrap() % p != 1 {
            return precondition("modulus must be monic of degree at least 1");
        }
        let e = (modulus.len() - 1) as u32;
        let m: Vec<u64> = modulus.iter().map(|c| c % p).collect();
        let f = Field::build(p, e, m.clone())?;
        let prime = Field::make(p, 1)?;
        if !poly_over_prime(&prime, &m).is_irreducible() {
            return Err(Error::Reducible(e));
        }
        Ok(f)
    }

    /// Parse `GF(p^e|modulus)`.
    pub fn parse(s: &str) -> Result<Field> {
        let mut parser = Parser::new(s);
        let f = Field::parse_from(&mut parser)?;
        if !parser.at_end() {
            return parser.err("trailing input after field literal");
        }
        Ok(f)
    }

    pub(crate) fn parse_from(parser: &mut Parser<'_>) -> Result<Field> {
        parser.expect_word("GF")?;
        parser.expect(b'(')?;
        let p = parser.uint()?;
        if !numtheory::is_prime(p) {
            return parser.err(format!("{p} is not a prime"));
        }
        parser.expect(b'^')?;
        let e = parser.uint()?;
        parser.expect(b'|')?;
        let sparse = parser.expr(p, false)?;
        parser.expect(b')')?;
        let deg = sparse.keys().map(|k| k.0).max().unwrap_or(0);
        if deg != e {
            return parser.err(format!("modulus has degree {deg}, expected {e}"));
        }
        let mut m = vec![0u64; e as usize + 1];
        for (&(dg, _), &c) in &sparse {
            m[dg as usize] = c;
        }
        if m[e as usize] != 1 {
            return parser.err("modulus must be monic");
        }
        Field::with_modulus(p, &m)
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.e
    }

    pub fn order(&self) -> u64 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.e == 1
    }

    /// The prime subfield `F_p` with modulus `X`.
    pub fn prime_field(&self) -> Field {
        Field::make(self.0.p, 1).expect("prime field of an existing field")
    }

    pub fn zero(&self) -> Fe {
        Fe(0)
    }

    pub fn one(&self) -> Fe {
        Fe(1)
    }

    /// The class of `g`, a root of the modulus.
    pub fn generator(&self) -> Fe {
        if self.0.e == 1 {
            self.from_int(self.0.p - self.0.modulus[0])
        } else {
            Fe(1 << self.0.width)
        }
    }

    pub fn from_int(&self, c: u64) -> Fe {
        Fe(c % self.0.p)
    }

    pub fn from_i64(&self, c: i64) -> Fe {
        Fe(c.rem_euclid(self.0.p as i64) as u64)
    }

    /// Coefficients `c_0..c_{e-1}` of the element as a polynomial in `g`.
    pub fn digits(&self, a: Fe) -> Vec<u64> {
        let w = self.0.width;
        (0..self.0.e).map(|i| (a.0 >> (i * w)) & self.0.slot_mask).collect()
    }

    pub fn from_digits(&self, digits: &[u64]) -> Fe {
        if digits.len() <= self.0.e as usize {
            let mut v = 0u64;
            for (i, &d) in digits.iter().enumerate() {
                v |= (d % self.0.p) << (i as u32 * self.0.width);
            }
            return Fe(v);
        }
        let g = self.generator();
        digits.iter().rev().fold(self.zero(), |acc, &d| self.add(self.mul(acc, g), self.from_int(d)))
    }

    /// Position of `a` in the enumeration `sum c_i p^i`.
    pub fn index(&self, a: Fe) -> u64 {
        if self.0.p == 2 {
            return a.0;
        }
        let w = self.0.width;
        let mut n = 0u64;
        for i in 0..self.0.e {
            n += ((a.0 >> (i * w)) & self.0.slot_mask) * self.0.powers_of_p[i as usize];
        }
        n
    }

    pub fn from_index(&self, mut n: u64) -> Fe {
        if self.0.p == 2 {
            return Fe(n);
        }
        let mut v = 0u64;
        for i in 0..self.0.e {
            v |= (n % self.0.p) << (i * self.0.width);
            n /= self.0.p;
        }
        Fe(v)
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> + '_ {
        (0..self.0.q).map(move |i| self.from_index(i))
    }

    pub fn is_in_prime_field(&self, a: Fe) -> bool {
        a.0 >> self.0.width == 0
    }

    /// Integer value of an element of the prime subfield.
    pub fn to_int(&self, a: Fe) -> Option<u64> {
        self.is_in_prime_field(a).then_some(a.0)
    }

    #[inline]
    fn reduce_slots(&self, s: u64) -> u64 {
        let u = s.wrapping_add(self.0.rep_bias);
        let high = u & self.0.rep_high;
        s - (high >> (self.0.width - 1)) * self.0.p
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.0.p == 2 {
            Fe(a.0 ^ b.0)
        } else {
            Fe(self.reduce_slots(a.0 + b.0))
        }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        if self.0.p == 2 {
            a
        } else {
            Fe(self.reduce_slots(self.0.rep_p - a.0))
        }
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        if self.0.p == 2 {
            Fe(a.0 ^ b.0)
        } else {
            Fe(self.reduce_slots(a.0 + self.reduce_slots(self.0.rep_p - b.0)))
        }
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe(0);
        }
        let inner = &*self.0;
        if inner.p == 2 {
            return Fe(self.mul_binary(a.0, b.0));
        }
        if inner.e == 1 {
            return Fe(a.0 * b.0 % inner.p);
        }
        self.mul_slots(a.0, b.0)
    }

    fn mul_binary(&self, a: u64, b: u64) -> u64 {
        let e = self.0.e;
        if e <= 32 {
            return self.mul_binary_narrow(a, b);
        }
        let mut prod: u128 = 0;
        let a = a as u128;
        let mut bb = b;
        let mut shift = 0;
        while bb != 0 {
            let tz = bb.trailing_zeros();
            shift += tz;
            bb >>= tz;
            prod ^= a << shift;
            bb >>= 1;
            shift += 1;
        }
        let m = self.0.binary_modulus;
        let mut top = 128 - prod.leading_zeros();
        while top > e {
            let k = top - 1;
            prod ^= m << (k - e);
            top = 128 - prod.leading_zeros();
        }
        prod as u64
    }

    /// Carry-less product in a `u64` with a 4-bit window, then reduction by the modulus.
    fn mul_binary_narrow(&self, a: u64, b: u64) -> u64 {
        let e = self.0.e;
        let mut table = [0u64; 16];
        for i in 1..16 {
            table[i] = if i & 1 == 1 { table[i - 1] ^ a } else { table[i >> 1] << 1 };
        }
        let mut prod = 0u64;
        let mut shift = 0;
        let mut bb = b;
        while bb != 0 {
            prod ^= table[(bb & 15) as usize] << shift;
            bb >>= 4;
            shift += 4;
        }
        let m = self.0.binary_modulus as u64;
        let mut high = prod >> e;
        while high != 0 {
            let k = 63 - high.leading_zeros();
            prod ^= m << k;
            high = prod >> e;
        }
        prod
    }

    fn mul_slots(&self, a: u64, b: u64) -> Fe {
        let inner = &*self.0;
        let e = inner.e as usize;
        let w = inner.width;
        let mask = inner.slot_mask;
        let p = inner.p;
        let mut ad = [0u64; 32];
        let mut bd = [0u64; 32];
        for i in 0..e {
            ad[i] = (a >> (i as u32 * w)) & mask;
            bd[i] = (b >> (i as u32 * w)) & mask;
        }
        let mut c = [0u64; 64];
        for i in 0..e {
            if ad[i] == 0 {
                continue;
            }
            for j in 0..e {
                c[i + j] += ad[i] * bd[j];
            }
        }
        for k in (e..2 * e - 1).rev() {
            let t = c[k] % p;
            if t != 0 {
                for j in 0..e {
                    c[k - e + j] += t * inner.neg_modulus[j];
                }
            }
        }
        let mut v = 0u64;
        for (j, cj) in c.iter().enumerate().take(e) {
            v |= (cj % p) << (j as u32 * w);
        }
        Fe(v)
    }

    /// Multiply by an integer scalar.
    pub fn mul_int(&self, a: Fe, c: u64) -> Fe {
        self.mul(a, self.from_int(c))
    }

    pub fn square(&self, a: Fe) -> Fe {
        self.mul(a, a)
    }

    pub fn pow(&self, a: Fe, mut n: u64) -> Fe {
        let mut acc = self.one();
        let mut base = a;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(base, base);
            }
        }
        acc
    }

    /// `a^n` for a 128-bit exponent.
    pub fn pow_wide(&self, a: Fe, n: u128) -> Fe {
        if a.0 == 0 {
            return if n == 0 { self.one() } else { self.zero() };
        }
        self.pow(a, (n % (self.0.q as u128 - 1)) as u64)
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        if self.0.e == 1 {
            return Ok(Fe(numtheory::pow_mod(a.0, self.0.p - 2, self.0.p)));
        }
        Ok(self.pow(a, self.0.q - 2))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^(p^i)`.
    pub fn frobenius(&self, a: Fe, i: u32) -> Fe {
        let mut x = a;
        for _ in 0..(i % self.0.e) {
            x = self.pow(x, self.0.p);
        }
        x
    }

    /// The inverse Frobenius power, `a^(p^-i)`.
    pub fn frobenius_inv(&self, a: Fe, i: u32) -> Fe {
        let e = self.0.e;
        self.frobenius(a, (e - i % e) % e)
    }

    /// Absolute trace to the prime field.
    pub fn trace(&self, a: Fe) -> u64 {
        let mut acc = self.zero();
        let mut x = a;
        for _ in 0..self.0.e {
            acc = self.add(acc, x);
            x = self.pow(x, self.0.p);
        }
        self.to_int(acc).expect("trace lies in the prime field")
    }

    pub fn is_square(&self, a: Fe) -> bool {
        self.is_mth_power(a, 2)
    }

    /// Whether `b` is an `m`-th power in the field.
    pub fn is_mth_power(&self, b: Fe, m: u64) -> bool {
        if b.0 == 0 {
            return true;
        }
        let q1 = self.0.q - 1;
        let g = numtheory::gcd(m, q1);
        self.pow(b, q1 / g) == self.one()
    }

    /// Least `j >= 1` with `a^j` an `m`-th power: the order of `a` in `F*/(F*)^m`.
    pub fn coset_order(&self, a: Fe, m: u64) -> Result<u64> {
        if a.0 == 0 {
            return precondition("coset order requires a nonzero element");
        }
        if m == 0 {
            return precondition("coset order requires m >= 1");
        }
        let bound = numtheory::gcd(m, self.0.q - 1);
        let mut x = a;
        for j in 1..=bound {
            if self.is_mth_power(x, m) {
                return Ok(j);
            }
            x = self.mul(x, a);
        }
        unreachable!("a^gcd(m, q-1) is always an m-th power")
    }

    pub fn mult_order(&self, a: Fe) -> Result<u64> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let mut n = self.0.q - 1;
        for r in numtheory::prime_factors(n) {
            while n.is_multiple_of(r) && self.pow(a, n / r) == self.one() {
                n /= r;
            }
        }
        Ok(n)
    }

    /// The least element (in index order) generating the multiplicative group.
    pub fn primitive_element(&self) -> Fe {
        let q1 = self.0.q - 1;
        let primes = numtheory::prime_factors(q1);
        (1..self.0.q)
            .map(|i| self.from_index(i))
            .find(|&a| primes.iter().all(|&r| self.pow(a, q1 / r) != self.one()))
            .expect("the multiplicative group is cyclic")
    }

    /// Least nonsquare in index order (odd characteristic).
    pub fn least_nonsquare(&self) -> Option<Fe> {
        if self.0.p == 2 {
            return None;
        }
        (1..self.0.q).map(|i| self.from_index(i)).find(|&a| !self.is_square(a))
    }

    /// Whether `sub` is isomorphic to a subfield of `self`.
    pub fn has_subfield(&self, sub: &Field) -> bool {
        sub.0.p == self.0.p && self.0.e.is_multiple_of(sub.0.e)
    }

    pub fn format_elem(&self, a: Fe) -> String {
        render_int_poly(&self.digits(a), "g")
    }

    pub fn parse_elem(&self, s: &str) -> Result<Fe> {
        let mut parser = Parser::new(s);
        let sparse = parser.expr(self.0.p, false)?;
        if !parser.at_end() {
            return parser.err("trailing input after element");
        }
        Ok(self.elem_from_sparse(sparse.iter().map(|(&(dg, _), &c)| (dg, c))))
    }

    pub(crate) fn elem_from_sparse(&self, terms: impl Iterator<Item = (u64, u64)>) -> Fe {
        let g = self.generator();
        terms.fold(self.zero(), |acc, (dg, c)| self.add(acc, self.mul(self.from_int(c), self.pow(g, dg))))
    }

    pub fn elem(&self, a: Fe) -> FieldElem {
        FieldElem { field: self.clone(), value: a }
    }
}

fn poly_over_prime(prime: &Field, coeffs: &[u64]) -> Poly {
    Poly::new(prime, coeffs.iter().map(|&c| prime.from_int(c)).collect())
}

/// An element bundled with its field, with arithmetic that checks field agreement.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElem {
    pub field: Field,
    pub value: Fe,
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.format_elem(self.value))
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.format_elem(self.value))
    }
}

impl FieldElem {
    fn check(&self, other: &FieldElem) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        Ok(self.field.elem(self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        Ok(self.field.elem(self.field.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        Ok(self.field.elem(self.field.mul(self.value, other.value)))
    }

    pub fn div(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        Ok(self.field.elem(self.field.div(self.value, other.value)?))
    }

    pub fn inv(&self) -> Result<FieldElem> {
        Ok(self.field.elem(self.field.inv(self.value)?))
    }

    pub fn pow(&self, n: u64) -> FieldElem {
        self.field.elem(self.field.pow(self.value, n))
    }

    pub fn frobenius(&self, i: u32) -> FieldElem {
        self.field.elem(self.field.frobenius(self.value, i))
    }

    pub fn coset_order(&self, m: u64) -> Result<u64> {
        self.field.coset_order(self.value, m)
    }
}

/// A field embedding `src -> dst` fixed by the image of the generator of `src`.
#[derive(Clone, Debug)]
pub struct Embedding {
    src: Field,
    dst: Field,
    basis: Vec<Fe>,
}

impl Embedding {
    /// The embedding sending `g` to the least root (in index order) of the source modulus.
    pub fn new(src: &Field, dst: &Field) -> Result<Embedding> {
        if !dst.has_subfield(src) {
            return Err(Error::NoEmbedding(format!("{src} does not embed in {dst}")));
        }
        let image = if src == dst {
            src.generator()
        } else if src.is_prime_field() {
            dst.from_int(src.generator().0)
        } else {
            let m = Poly::new(dst, src.modulus().iter().map(|&c| dst.from_int(c)).collect());
            let mut roots = m.roots();
            roots.sort_by_key(|&r| dst.index(r));
            *roots.first().ok_or_else(|| Error::NoEmbedding("modulus has no root".into()))?
        };
        let mut basis = Vec::with_capacity(src.degree() as usize);
        let mut x = dst.one();
        for _ in 0..src.degree() {
            basis.push(x);
            x = dst.mul(x, image);
        }
        Ok(Embedding { src: src.clone(), dst: dst.clone(), basis })
    }

    pub fn source(&self) -> &Field {
        &self.src
    }

    pub fn target(&self) -> &Field {
        &self.dst
    }

    pub fn image_of_generator(&self) -> Fe {
        if self.src.is_prime_field() {
            self.dst.from_int(self.src.generator().0)
        } else {
            self.basis[1]
        }
    }

    pub fn map(&self, a: Fe) -> Fe {
        let digits = self.src.digits(a);
        let mut acc = self.dst.zero();
        for (d, &b) in digits.iter().zip(&self.basis) {
            if *d != 0 {
                acc = self.dst.add(acc, self.dst.mul(self.dst.from_int(*d), b));
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn least_moduli() {
        assert_eq!(Field::make(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(Field::make(7, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(Field::make(3, 1).unwrap().modulus(), &[0, 1]);
        assert_eq!(Field::make(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(Field::make(3, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(Field::make(2, 3).unwrap().to_string(), "GF(2^3|g^3+g+1)");
        assert_eq!(Field::make(7, 1).unwrap().to_string(), "GF(7^1|g)");
        assert_eq!(Field::make(4, 1).unwrap_err(), Error::NotPrime(4));
    }

    #[test]
    fn relation_in_f8() {
        let f = Field::make(2, 3).unwrap();
        let g = f.generator();
        let g3 = f.pow(g, 3);
        assert_eq!(g3, f.add(g, f.one()));
        assert_eq!(f.pow(g, 7), f.one());
    }

    #[test]
    fn inverses_in_f49() {
        let f = Field::make(7, 2).unwrap();
        for a in f.elements().skip(1) {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
        }
        assert_eq!(f.inv(f.zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn add_sub_neg_agree_with_digits() {
        for (p, e) in [(3, 4), (5, 3), (7, 2), (11, 2), (13, 1), (2, 9)] {
            let f = Field::make(p, e).unwrap();
            let q = f.order();
            for i in (0..q).step_by(((q / 40) as usize).max(1)) {
                for j in (0..q).step_by(((q / 37) as usize).max(1)) {
                    let a = f.from_index(i);
                    let b = f.from_index(j);
                    let s: Vec<u64> = f.digits(a).iter().zip(f.digits(b)).map(|(x, y)| (x + y) % p).collect();
                    assert_eq!(f.digits(f.add(a, b)), s);
                    let d: Vec<u64> = f.digits(a).iter().zip(f.digits(b)).map(|(x, y)| (x + p - y) % p).collect();
                    assert_eq!(f.digits(f.sub(a, b)), d);
                    assert_eq!(f.add(b, f.neg(b)), f.zero());
                }
            }
        }
    }

    #[test]
    fn coset_orders() {
        let f9 = Field::make(3, 2).unwrap();
        let prim = f9.primitive_element();
        assert_eq!(f9.mult_order(prim).unwrap(), 8);
        assert_eq!(f9.coset_order(prim, 2).unwrap(), 2);
        assert_eq!(f9.coset_order(f9.one(), 5).unwrap(), 1);
        let f3 = Field::make(3, 1).unwrap();
        assert_eq!(f3.coset_order(f3.from_int(2), 14).unwrap(), 2);
        assert_eq!(f3.coset_order(f3.from_int(1), 14).unwrap(), 1);
        assert!(f9.coset_order(f9.zero(), 2).is_err());
    }

    #[test]
    fn frobenius_and_trace() {
        let f = Field::make(3, 3).unwrap();
        for a in f.elements() {
            assert_eq!(f.frobenius(a, 3), a);
            assert_eq!(f.frobenius_inv(f.frobenius(a, 1), 1), a);
        }
        let zero_trace = f.elements().filter(|&a| f.trace(a) == 0).count();
        assert_eq!(zero_trace, 9);
    }

    #[test]
    fn index_round_trip() {
        let f = Field::make(5, 3).unwrap();
        for i in 0..f.order() {
            assert_eq!(f.index(f.from_index(i)), i);
        }
    }

    #[test]
    fn parse_and_print_elements() {
        let f = Field::make(2, 3).unwrap();
        let a = f.parse_elem("g^2+1").unwrap();
        assert_eq!(f.format_elem(a), "g^2+1");
        assert_eq!(f.parse_elem("g^3").unwrap(), f.parse_elem("g+1").unwrap());
        let parsed = Field::parse("GF(2^3|g^3+g+1)").unwrap();
        assert_eq!(parsed, f);
        assert!(matches!(Field::parse("GF(2^3|g^3+1)"), Err(Error::Reducible(3))));
        assert!(Field::parse("GF(7^1|g+4)").is_ok());
    }

    #[test]
    fn embeddings() {
        let f4 = Field::make(2, 2).unwrap();
        let f16 = Field::make(2, 4).unwrap();
        let emb = Embedding::new(&f4, &f16).unwrap();
        let img = emb.image_of_generator();
        assert_eq!(f16.add(f16.add(f16.square(img), img), f16.one()), f16.zero());
        for a in f4.elements() {
            for b in f4.elements() {
                assert_eq!(emb.map(f4.mul(a, b)), f16.mul(emb.map(a), emb.map(b)));
                assert_eq!(emb.map(f4.add(a, b)), f16.add(emb.map(a), emb.map(b)));
            }
        }
        let f8 = Field::make(2, 3).unwrap();
        assert!(matches!(Embedding::new(&f4, &f8), Err(Error::NoEmbedding(_))));
    }

    #[test]
    fn large_binary_field() {
        let f = Field::make(2, 20).unwrap();
        let g = f.primitive_element();
        assert_eq!(f.pow(g, f.order() - 1), f.one());
        assert_eq!(f.mult_order(g).unwrap(), (1 << 20) - 1);
    }

    #[test]
    fn checked_elements() {
        let f = Field::make(5, 1).unwrap();
        let h = Field::make(7, 1).unwrap();
        let a = f.elem(f.from_int(2));
        let b = h.elem(h.from_int(3));
        assert_eq!(a.add(&b), Err(Error::FieldMismatch));
        assert_eq!(a.mul(&a).unwrap().value, f.from_int(4));
    }
}
