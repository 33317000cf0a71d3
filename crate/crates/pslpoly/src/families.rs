//! Explicit polynomials of degree `(q^2-q)/2` whose monodromy group contains
//! `PSL(2,q)` as a transitive normal subgroup, plus Dickson and additive polynomials.

use crate::error::{precondition, Error, Result};
use crate::gf::{Fe, Field};
use crate::numtheory::{self, gcd};
use crate::poly::Poly;
use crate::psl2::Flavor;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// `X(X^m+1)^((q+1)/2m) (((X^m+1)^((q-1)/2) - 1)/X^m)^((q+1)/m)`, `q` odd, `m | (q+1)/2`.
    GenOdd { q: u64, m: u64 },
    /// `X^-q (Σ_{i<e} X^(m 2^i))^((q+1)/m)`, `q = 2^e`, `m | q+1`.
    GenEven { q: u64, m: u64 },
    /// `q = 3^e`, `e > 1` odd, `n | (q+1)/4`.
    Char3 { q: u64, n: u64, alpha: Fe },
    /// `X (Σ_{i<e} (α X^n)^(2^i-1))^((q+1)/n)`, `q = 2^e`, `e > 1` odd, `n | q+1`.
    Char2 { q: u64, n: u64, alpha: Fe },
    /// `β + Σ_{i<e} α^(2^i-1) (X+β)^(q(2^i-1)+2^i)`, `q = 2^e`, `e > 1` odd.
    Char2Footnote { q: u64, alpha: Fe, beta: Fe },
    /// Degree 21 in characteristic 7, `n | 2`, `α` a nonsquare.
    Ind7 { n: u64, alpha: Fe },
    /// Degree 55 in characteristic 11, `n | 2`, `α` a nonsquare.
    Ind11 { n: u64, alpha: Fe },
    /// One of the eleven sporadic polynomials, `index` in `1..=11`.
    TableB { index: usize },
    /// `D_d(X, α)` with `D_d(Y + α/Y, α) = Y^d + (α/Y)^d`.
    Dickson { d: u64, alpha: Fe },
    /// `Σ c_i X^(p^i)`.
    Additive { coeffs: Vec<Fe> },
    /// `X M(X)^s` where `X M(X^s)` is the additive polynomial `Σ c_i X^(p^i)`.
    Subadditive { coeffs: Vec<Fe>, s: u64 },
}

impl Family {
    pub fn tag(&self) -> &'static str {
        match self {
            Family::GenOdd { .. } => "gen-odd",
            Family::GenEven { .. } => "gen-even",
            Family::Char3 { .. } => "char3",
            Family::Char2 { .. } => "char2",
            Family::Char2Footnote { .. } => "char2-footnote",
            Family::Ind7 { .. } => "ind7",
            Family::Ind11 { .. } => "ind11",
            Family::TableB { .. } => "table-b",
            Family::Dickson { .. } => "dickson",
            Family::Additive { .. } => "additive",
            Family::Subadditive { .. } => "subadditive",
        }
    }
}

/// A family member together with its field of definition.
#[derive(Clone, Debug)]
pub struct FamilySpec {
    pub family: Family,
    pub field: Field,
}

impl FamilySpec {
    pub fn new(family: Family, field: &Field) -> FamilySpec {
        FamilySpec { family, field: field.clone() }
    }
}

/// Result of a construction.
#[derive(Clone, Debug)]
pub struct Constructed {
    pub poly: Poly,
    /// `GenEven` with `m = q+1`, excluded from the indecomposable exceptional list.
    pub boundary_case: bool,
}

/// Monodromy data predicted for a family member.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GaloisData {
    /// Exponent in `v^q - v = w^n` describing the Galois closure.
    pub n: u64,
    pub genus: u64,
    pub geometric_group: Flavor,
    pub q: u64,
}

/// Factored entries `(q, [(factor, exponent)])` of the eleven exceptional polynomials.
const TABLE_B: [(u64, &[(&str, u32)]); 11] = [
    // f1
    (11, &[
        ("X", 3),
        ("X^2+3", 2),
        ("X^8-X^6+2*X^4-X^2-3", 6),
    ]),
    // f2
    (11, &[
        ("X", 3),
        ("X^4+3", 1),
        ("X^16-X^12+2*X^8-X^4-3", 3),
    ]),
    // f3
    (11, &[
        ("X", 3),
        ("X+3", 4),
        ("X^4-X^3+2*X^2-X-3", 12),
    ]),
    // f4
    (11, &[
        ("X^3-3", 1),
        ("X", 4),
        ("5+6*X^3-X^6-2*X^9+X^12", 4),
    ]),
    // f5
    (23, &[
        ("X-11", 3),
        ("X-10", 4),
        ("X+3", 6),
        (
            concat!(
                "X^20-5*X^19-10*X^18+7*X^17+X^16+5*X^15-9*X^14-10*X^13-8*X^12+11*X^11+8*X^9+10*X^8",
                "+X^7-6*X^6-8*X^5+6*X^4+12*X^3+6*X^2-X-7",
            ),
            12,
        ),
    ]),
    // f6
    (23, &[
        ("X", 3),
        ("X^2+1", 2),
        ("X^2-9", 3),
        (
            concat!(
                "-3-8*X^2-8*X^4+11*X^6+10*X^8-10*X^12-2*X^14+7*X^16-6*X^18+5*X^20-4*X^24+8*X^26",
                "+2*X^28+2*X^30+6*X^32+11*X^34-7*X^36+8*X^38+X^40",
            ),
            6,
        ),
    ]),
    // f7
    (23, &[
        ("X^3-1", 1),
        ("X", 4),
        ("X^3-10", 2),
        (
            concat!(
                "-2-X^3+11*X^6-X^9+X^12-9*X^15-5*X^18+X^24+2*X^27-6*X^30+2*X^33-6*X^36-3*X^39+6*X^42",
                "+9*X^45+4*X^48-3*X^51+8*X^54+11*X^57+X^60",
            ),
            4,
        ),
    ]),
    // f8
    (59, &[
        ("X-41", 6),
        ("X-6", 10),
        ("X-9", 15),
        (
            concat!(
                "19*X+46*X^2+21*X^3+2*X^4+2*X^5+16*X^6+53*X^7+8*X^8+42*X^9+22*X^10+14*X^11+X^12",
                "+4*X^13+12*X^14+33*X^15+41*X^16+50*X^17+27*X^18+37*X^19+42*X^20+8*X^21+16*X^22",
                "+53*X^23+28*X^24+9*X^25+56*X^26+39*X^27+42*X^28+13*X^29+14*X^30+28*X^31+25*X^32",
                "+26*X^33+43*X^34+34*X^35+10*X^36+17*X^37+58*X^38+25*X^39+48*X^40+14*X^41+15*X^42",
                "+53*X^43+39*X^44+58*X^45+48*X^46+5*X^47+8*X^48+9*X^49+9*X^50+9*X^51+27*X^52+4*X^53",
                "+13*X^54+56*X^55+X^56",
            ),
            30,
        ),
    ]),
    // f9
    (59, &[
        ("X^2-32", 3),
        ("X", 15),
        ("X^2+3", 5),
        (
            concat!(
                "43+13*X^2+15*X^4+2*X^6+57*X^8+57*X^10+15*X^12+43*X^14+35*X^16+53*X^18+35*X^20",
                "+37*X^22+51*X^24+5*X^26+44*X^28+6*X^30+3*X^32+28*X^34+44*X^36+26*X^38+57*X^40",
                "+40*X^42+41*X^44+11*X^46+28*X^48+57*X^50+3*X^52+56*X^54+6*X^56+30*X^58+16*X^60",
                "+26*X^62+15*X^64+36*X^66+19*X^68+X^70+7*X^72+53*X^74+X^76+X^78+34*X^80+32*X^82",
                "+16*X^84+28*X^86+12*X^88+15*X^90+53*X^92+20*X^94+8*X^96+8*X^98+14*X^100+53*X^102",
                "+54*X^104+24*X^106+17*X^108+29*X^110+X^112",
            ),
            15,
        ),
    ]),
    // f10
    (59, &[
        ("X^3-35", 2),
        ("X", 10),
        ("X^3-3", 5),
        (
            concat!(
                "27+45*X^3+30*X^6+26*X^9+41*X^12+24*X^15+16*X^18+43*X^21+7*X^24+39*X^27+24*X^33+X^36",
                "+32*X^39+47*X^42+37*X^45+38*X^48+18*X^51+16*X^54+7*X^60+24*X^63+48*X^66+8*X^69",
                "+54*X^72+56*X^75+36*X^78+X^81+33*X^84+35*X^87+31*X^90+34*X^93+19*X^96+17*X^99",
                "+29*X^102+25*X^105+16*X^108+17*X^111+2*X^114+8*X^117+46*X^120+53*X^123+54*X^126",
                "+15*X^129+24*X^132+2*X^135+49*X^138+22*X^141+36*X^144+36*X^147+51*X^150+15*X^153",
                "+9*X^156+32*X^159+6*X^162+38*X^165+X^168",
            ),
            10,
        ),
    ]),
    // f11
    (59, &[
        ("X", 6),
        ("X^5+35", 2),
        ("X^5+32", 3),
        (
            concat!(
                "54+12*X^5+49*X^10+33*X^15+13*X^20+31*X^25+13*X^30+32*X^35+6*X^40+10*X^45+43*X^50",
                "+11*X^60+54*X^65+40*X^70+49*X^75+X^80+13*X^85+37*X^90+49*X^95+40*X^100+10*X^105",
                "+43*X^110+2*X^120+24*X^125+54*X^130+46*X^135+8*X^140+33*X^145+35*X^150+23*X^155",
                "+2*X^160+57*X^165+15*X^170+30*X^180+32*X^185+39*X^190+50*X^195+50*X^200+36*X^205",
                "+55*X^210+15*X^215+30*X^220+35*X^225+3*X^230+53*X^235+37*X^240+52*X^245+31*X^250",
                "+6*X^255+35*X^260+37*X^265+30*X^270+51*X^275+X^280",
            ),
            6,
        ),
    ]),
];

/// `q` for the entry `index` (1-based) of the sporadic table.
pub fn table_b_q(index: usize) -> Result<u64> {
    if !(1..=11).contains(&index) {
        return precondition(format!("table index must be in 1..=11, got {index}"));
    }
    Ok(TABLE_B[index - 1].0)
}

/// Indices of the sporadic polynomials for a given `q`.
///
/// `q = 4` with `G = PΓL(2,4)` is refused: no polynomials exist there, since the
/// Galois closure would have genus one and its automorphism group has no `S_5`.
pub fn table_b_indices(q: u64) -> Result<Vec<usize>> {
    if q == 4 {
        return Err(Error::Unsupported(
            "q = 4 with G = PGammaL(2,4): no polynomials exist (the Galois closure would be an elliptic function field)"
                .into(),
        ));
    }
    let v: Vec<usize> = (1..=11).filter(|&i| TABLE_B[i - 1].0 == q).collect();
    if v.is_empty() {
        return precondition(format!("no sporadic polynomials for q = {q} (only 11, 23, 59)"));
    }
    Ok(v)
}

/// Factors `(g_i, e_i)` of a sporadic polynomial over `field`.
pub fn table_b_factors(index: usize, field: &Field) -> Result<Vec<(Poly, u32)>> {
    let q = table_b_q(index)?;
    if field.characteristic() != q {
        return precondition(format!("sporadic polynomial f{index} is defined in characteristic {q}"));
    }
    TABLE_B[index - 1].1.iter().map(|&(s, e)| Ok((Poly::parse_in(field, s)?, e))).collect()
}

/// `m` in `v^q - v = w^m` for each sporadic polynomial.
const TABLE_B_M: [u64; 11] = [1, 2, 1, 3, 1, 2, 3, 1, 2, 3, 5];

fn prime_power(q: u64) -> Result<(u64, u32)> {
    numtheory::prime_power(q).ok_or_else(|| Error::Precondition(format!("{q} is not a prime power")))
}

fn require(cond: bool, msg: impl Into<String>) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Precondition(msg.into()))
    }
}

fn xpow(k: &Field, n: u64) -> Poly {
    Poly::monomial(k, k.one(), n as usize)
}

fn binom_plus(k: &Field, n: u64, c: Fe) -> Poly {
    &xpow(k, n) + &Poly::constant(k, c)
}

/// Expected degree of the constructed polynomial.
fn expected_degree(spec: &FamilySpec) -> Result<u64> {
    let k = &spec.field;
    Ok(match &spec.family {
        Family::GenOdd { q, .. }
        | Family::GenEven { q, .. }
        | Family::Char3 { q, .. }
        | Family::Char2 { q, .. }
        | Family::Char2Footnote { q, .. } => (q * q - q) / 2,
        Family::Ind7 { .. } => 21,
        Family::Ind11 { .. } => 55,
        Family::TableB { index } => {
            let q = table_b_q(*index)?;
            (q * q - q) / 2
        }
        Family::Dickson { d, .. } => *d,
        Family::Additive { coeffs } | Family::Subadditive { coeffs, .. } => {
            let top = coeffs.iter().rposition(|c| c.0 != 0).unwrap_or(0) as u32;
            k.characteristic().pow(top)
        }
    })
}

/// Build the polynomial, checking exact divisions, degree and a nonzero derivative.
pub fn construct(spec: &FamilySpec) -> Result<Constructed> {
    let k = &spec.field;
    let p = k.characteristic();
    let mut boundary_case = false;
    let poly = match &spec.family {
        &Family::GenOdd { q, m } => {
            let (pq, _) = prime_power(q)?;
            require(pq == p, format!("q = {q} is not a power of the characteristic {p}"))?;
            require(q % 2 == 1 && q > 3, "the odd family requires q odd and q > 3")?;
            require(m >= 1 && q.div_ceil(2) % m == 0, format!("the odd family requires m | (q+1)/2 = {}", q.div_ceil(2)))?;
            let base = binom_plus(k, m, k.one());
            let inner = (&base.pow((q - 1) / 2) - &Poly::one(k)).exact_div(&xpow(k, m))?;
            let t = &base.pow((q + 1) / (2 * m)) * &inner.pow((q + 1) / m);
            t.shift(1)
        }
        &Family::GenEven { q, m } => {
            let (pq, e) = prime_power(q)?;
            require(pq == 2 && p == 2, "the even family requires q a power of 2 over a field of characteristic 2")?;
            require(q >= 4, "the even family requires q >= 4")?;
            require(m >= 1 && (q + 1) % m == 0, format!("the even family requires m | q+1 = {}", q + 1))?;
            boundary_case = m == q + 1;
            let mut s = Poly::zero(k);
            for i in 0..e {
                s = &s + &xpow(k, m << i);
            }
            let t = s.pow((q + 1) / m);
            if t.coeffs().iter().take(q as usize + 1).any(|c| c.0 != 0) {
                return Err(Error::InexactDivision);
            }
            t.exact_div(&xpow(k, q))?
        }
        &Family::Char3 { q, n, alpha } => {
            let (pq, e) = prime_power(q)?;
            require(pq == 3 && p == 3, "the characteristic-3 family requires q = 3^e over a field of characteristic 3")?;
            require(e > 1 && e % 2 == 1, "the characteristic-3 family requires q = 3^e with e > 1 odd")?;
            require(n >= 1 && ((q + 1) / 4) % n == 0, format!("the characteristic-3 family requires n | (q+1)/4 = {}", (q + 1) / 4))?;
            require(alpha.0 != 0, "the characteristic-3 family requires alpha != 0")?;
            let base = binom_plus(k, 2 * n, k.neg(alpha));
            let num = &base.pow((q - 1) / 2) + &Poly::constant(k, k.pow(alpha, (q - 1) / 2));
            let inner = num.exact_div(&xpow(k, 2 * n))?;
            (&base.pow((q + 1) / (4 * n)) * &inner.pow((q + 1) / (2 * n))).shift(1)
        }
        &Family::Char2 { q, n, alpha } => {
            let (pq, e) = prime_power(q)?;
            require(pq == 2 && p == 2, "the characteristic-2 family requires q = 2^e over a field of characteristic 2")?;
            require(e > 1 && e % 2 == 1, "the characteristic-2 family requires q = 2^e with e > 1 odd")?;
            require(n >= 1 && (q + 1) % n == 0, format!("the characteristic-2 family requires n | q+1 = {}", q + 1))?;
            require(alpha.0 != 0, "the characteristic-2 family requires alpha != 0")?;
            let mut s = Poly::zero(k);
            for i in 0..e {
                let j = (1u64 << i) - 1;
                s = &s + &Poly::monomial(k, k.pow(alpha, j), (n * j) as usize);
            }
            s.pow((q + 1) / n).shift(1)
        }
        &Family::Char2Footnote { q, alpha, beta } => {
            let (pq, e) = prime_power(q)?;
            require(pq == 2 && p == 2, "the footnote family requires q = 2^e over a field of characteristic 2")?;
            require(e > 1 && e % 2 == 1, "the footnote family requires q = 2^e with e > 1 odd")?;
            require(alpha.0 != 0, "the footnote family requires alpha != 0")?;
            let shifted = binom_plus(k, 1, beta);
            let mut s = Poly::constant(k, beta);
            for i in 0..e {
                let j = (1u64 << i) - 1;
                let term = shifted.pow(q * j + (1 << i)).scale(k.pow(alpha, j));
                s = &s + &term;
            }
            s
        }
        &Family::Ind7 { n, alpha } => {
            require(p == 7, "the degree-21 family requires characteristic 7")?;
            require(n == 1 || n == 2, "the degree-21 family requires n | 2")?;
            require(alpha.0 != 0 && !k.is_square(alpha), "the degree-21 family requires alpha to be a nonsquare")?;
            let base = binom_plus(k, 2 * n, k.neg(alpha));
            let num = &base.pow(3) + &Poly::constant(k, k.pow(alpha, 3));
            let inner = num.exact_div(&xpow(k, 2 * n))?;
            (&base.pow(2 / n) * &inner.pow(4 / n)).shift(1)
        }
        &Family::Ind11 { n, alpha } => {
            require(p == 11, "the degree-55 family requires characteristic 11")?;
            require(n == 1 || n == 2, "the degree-55 family requires n | 2")?;
            require(alpha.0 != 0 && !k.is_square(alpha), "the degree-55 family requires alpha to be a nonsquare")?;
            let a = |i: u64| k.pow(alpha, i);
            let h = Poly::new(
                k,
                vec![k.neg(k.mul_int(a(4), 3)), k.neg(a(3)), k.mul_int(a(2), 2), k.neg(a(1)), k.one()],
            );
            let h2n = h.compose(&xpow(k, 2 * n));
            let base = binom_plus(k, 2 * n, k.mul_int(alpha, 3));
            (&base.pow(2 / n) * &h2n.pow(6 / n)).shift(3)
        }
        &Family::TableB { index } => {
            let mut acc = Poly::one(k);
            for (g, e) in table_b_factors(index, k)? {
                acc = &acc * &g.pow(e as u64);
            }
            acc
        }
        &Family::Dickson { d, alpha } => dickson(d, alpha, k),
        Family::Additive { coeffs } => {
            require(coeffs.iter().any(|c| c.0 != 0), "additive polynomial needs a nonzero coefficient")?;
            additive(coeffs, k)?
        }
        Family::Subadditive { coeffs, s } => subadditive(coeffs, *s, k)?,
    };
    let expected = expected_degree(spec)?;
    if poly.deg() as u64 != expected || poly.is_zero() {
        return Err(Error::IdentityFailed(format!("degree {} differs from expected {expected}", poly.deg())));
    }
    let classical = matches!(spec.family, Family::Dickson { .. } | Family::Additive { .. } | Family::Subadditive { .. });
    if !classical && poly.derivative().is_zero() {
        return Err(Error::IdentityFailed("derivative vanishes (polynomial lies in k[X^p])".into()));
    }
    Ok(Constructed { poly, boundary_case })
}

fn additive(coeffs: &[Fe], k: &Field) -> Result<Poly> {
    let p = k.characteristic();
    let mut c = Vec::new();
    for (i, &a) in coeffs.iter().enumerate() {
        let deg = numtheory::checked_pow(p, i as u32).filter(|&d| d <= 1 << 24);
        let deg = deg.ok_or_else(|| Error::Precondition("additive polynomial degree is too large".into()))? as usize;
        if c.len() <= deg {
            c.resize(deg + 1, k.zero());
        }
        c[deg] = a;
    }
    Ok(Poly::new(k, c))
}

fn subadditive(coeffs: &[Fe], s: u64, k: &Field) -> Result<Poly> {
    let p = k.characteristic();
    require(s >= 1, "subadditive exponent s must be positive")?;
    require(coeffs.iter().any(|c| c.0 != 0), "subadditive polynomial needs a nonzero coefficient")?;
    let mut m = Vec::new();
    for (i, &a) in coeffs.iter().enumerate() {
        if a.0 == 0 {
            continue;
        }
        let pi = numtheory::checked_pow(p, i as u32).filter(|&d| d <= 1 << 24);
        let pi = pi.ok_or_else(|| Error::Precondition("subadditive polynomial degree is too large".into()))?;
        require((pi - 1) % s == 0, format!("s = {s} must divide p^{i} - 1"))?;
        let deg = ((pi - 1) / s) as usize;
        if m.len() <= deg {
            m.resize(deg + 1, k.zero());
        }
        m[deg] = a;
    }
    Ok(Poly::new(k, m).pow(s).shift(1))
}

/// `D_d(X, α)` by the three-term recurrence.
pub fn dickson(d: u64, alpha: Fe, k: &Field) -> Poly {
    let x = Poly::x(k);
    let mut prev = Poly::constant(k, k.from_int(2));
    if d == 0 {
        return prev;
    }
    let mut cur = x.clone();
    for _ in 1..d {
        let next = &(&x * &cur) - &prev.scale(alpha);
        prev = cur;
        cur = next;
    }
    cur
}

/// `Σ_j c_j a^j b^(total-j)` for the coefficients `c_j` of `poly`.
pub fn homogeneous_eval(poly: &Poly, a: &Poly, b: &Poly, total: usize) -> Result<Poly> {
    let k = poly.field();
    let deg = poly.degree().unwrap_or(0);
    if deg > total {
        return precondition("homogenisation degree is below the polynomial degree");
    }
    let mut acc = Poly::constant(k, poly.coeff(deg));
    let mut bpow = b.pow((total - deg) as u64);
    for j in (0..deg).rev() {
        bpow = &bpow * b;
        acc = &(&acc * a) + &bpow.scale(poly.coeff(j));
    }
    Ok(acc)
}

/// Check `D_d(Y + α/Y, α) Y^d = Y^(2d) + α^d` as a polynomial identity in `Y`.
pub fn verify_dickson_identity(d: u64, alpha: Fe, k: &Field) -> bool {
    let dd = dickson(d, alpha, k);
    let num = binom_plus(k, 2, alpha);
    let den = Poly::x(k);
    let Ok(lhs) = homogeneous_eval(&dd, &num, &den, d as usize) else { return false };
    let rhs = binom_plus(k, 2 * d, k.pow(alpha, d));
    lhs == rhs
}

/// `l1 ∘ f ∘ l2` for linear `l1`, `l2`.
pub fn linear_equiv(f: &Poly, l1: &Poly, l2: &Poly) -> Result<Poly> {
    if l1.degree() != Some(1) || l2.degree() != Some(1) {
        return precondition("linear equivalence needs polynomials of degree exactly 1");
    }
    if l1.field() != f.field() || l2.field() != f.field() {
        return Err(Error::FieldMismatch);
    }
    Ok(l1.compose(&f.compose(l2)))
}

/// Galois closure `v^q - v = w^n`, its genus and the geometric monodromy group.
pub fn galois_closure_data(spec: &FamilySpec) -> Result<GaloisData> {
    let genus = |q: u64, n: u64| (q - 1) * (n - 1) / 2;
    let (q, n, group) = match spec.family {
        Family::GenOdd { q, m } => (q, m / gcd(m, 2), if m % 2 == 0 { Flavor::Psl } else { Flavor::Pgl }),
        Family::GenEven { q, m } => (q, m, Flavor::Pgl),
        Family::Char3 { q, n, .. } => (q, n, Flavor::Psl),
        Family::Char2 { q, n, .. } => (q, n, Flavor::Pgl),
        Family::Char2Footnote { q, .. } => (q, q + 1, Flavor::Pgl),
        Family::Ind7 { n, .. } => (7, n, Flavor::Psl),
        Family::Ind11 { n, .. } => (11, n, Flavor::Psl),
        Family::TableB { index } => {
            let q = table_b_q(index)?;
            let group = if index == 3 || index == 4 { Flavor::Pgl } else { Flavor::Psl };
            (q, TABLE_B_M[index - 1], group)
        }
        _ => return precondition("no monodromy prediction for Dickson or additive polynomials"),
    };
    Ok(GaloisData { n, genus: genus(q, n), geometric_group: group, q })
}

/// Outcome of the invariant-field identity checks for one `q`.
#[derive(Clone, Debug, Serialize)]
pub struct InvariantReport {
    pub q: u64,
    pub gamma: String,
    /// Orbit sum of `v^2` under the dihedral stabiliser equals `(v^(q+1)-γ)^2/(v^q-v)^2`.
    pub orbit_sum: bool,
    /// The quotient `(v^(q^2)-v)^(q+1)/(v^q-v)^(q^2+1)` is invariant under generators of `PGL(2,q)`.
    pub dickson_invariant: bool,
    /// Degree of `x̂` as a rational function.
    pub x_hat_degree: u64,
    /// The closed form for `h` is monic of degree `(q^2-q)/2`.
    pub h_monic_degree: bool,
    /// `h(x̂) = û^n` after clearing denominators.
    pub relation: bool,
    /// `f̂(x̂) = û` for every `n | (q+1)/2`, with the root of unity found.
    pub f_hat: Vec<(u64, bool)>,
}

impl InvariantReport {
    pub fn ok(&self) -> bool {
        self.orbit_sum
            && self.dickson_invariant
            && self.x_hat_degree == 2 * (self.q + 1)
            && self.h_monic_degree
            && self.relation
            && self.f_hat.iter().all(|&(_, b)| b)
    }
}

fn first_difference(a: &Poly, b: &Poly) -> String {
    let n = a.coeffs().len().max(b.coeffs().len());
    for i in 0..n {
        if a.coeff(i) != b.coeff(i) {
            let k = a.field();
            return format!("first differing coefficient at X^{i}: {} vs {}", k.format_elem(a.coeff(i)), k.format_elem(b.coeff(i)));
        }
    }
    "polynomials agree".into()
}

fn identity(name: &str, a: &Poly, b: &Poly) -> Result<bool> {
    if a == b {
        Ok(true)
    } else {
        Err(Error::IdentityFailed(format!("{name}: {}", first_difference(a, b))))
    }
}

/// `h(X) = X^((q+1)/2) (X-γ) ((X^((q-1)/2)+1)/(X-γ))^(q+1)`.
pub fn invariant_h(q: u64, gamma: Fe, k: &Field) -> Result<Poly> {
    let lin = binom_plus(k, 1, k.neg(gamma));
    let ratio = binom_plus(k, (q - 1) / 2, k.one()).exact_div(&lin)?;
    Ok(&lin * &ratio.pow(q + 1)).map(|t| t.shift(q.div_ceil(2) as usize))
}

/// `f̂(X) = X (X^n+γ)^((q+1)/2n) (((X^n+γ)^((q-1)/2)+1)/X^n)^((q+1)/n)`, returned as
/// the factor `F` with `f̂(X) = X F(X^n)`.
fn f_hat_inner(q: u64, n: u64, gamma: Fe, k: &Field) -> Result<Poly> {
    let y = binom_plus(k, 1, gamma);
    let num = &y.pow((q - 1) / 2) + &Poly::one(k);
    let frac = num.exact_div(&Poly::x(k))?;
    Ok(&y.pow((q + 1) / (2 * n)) * &frac.pow((q + 1) / n))
}

/// Check the invariant-field computation for `PGL(2,q)` acting on `k(v)`, `q` odd.
pub fn verify_invariant_identities(q: u64) -> Result<InvariantReport> {
    let (p, e) = prime_power(q)?;
    if p == 2 || !(5..=13).contains(&q) {
        return Err(Error::Unsupported(format!("invariant identities are checked for odd 5 <= q <= 13, got {q}")));
    }
    let k = Field::make(p, e)?;
    let gamma = k.least_nonsquare().expect("odd q has nonsquares");
    let v = Poly::x(&k);
    let vq_v = &xpow(&k, q) - &v;
    let vq1_g = binom_plus(&k, q + 1, k.neg(gamma));
    let a = vq1_g.pow(2);
    let b = vq_v.pow(2);

    // Orbit sum: (v^q - v)^2 [v^2 + Σ_α ((α v + γ)/(v + α))^2] = (v^(q+1) - γ)^2.
    let mut sum = &v.pow(2) * &b;
    for alpha in k.elements() {
        let lin = binom_plus(&k, 1, alpha);
        let cof = vq_v.exact_div(&lin)?;
        let numer = Poly::new(&k, vec![gamma, alpha]);
        sum = &sum + &(&numer * &cof).pow(2);
    }
    let orbit_sum = identity("orbit sum", &sum, &a)?;
    let x_hat_degree = if vq1_g.gcd(&vq_v).is_one() { a.deg().max(b.deg()) as u64 } else { 0 };

    // Invariance of N/M with N = (v^(q^2) - v)^(q+1), M = (v^q - v)^(q^2+1).
    let big = &xpow(&k, q * q) - &v;
    let nn = big.pow(q + 1);
    let mm = vq_v.pow(q * q + 1);
    let total = ((q * q + 1) * (q + 1)) as usize;
    let reverse = |f: &Poly| {
        let mut c = f.coeffs().to_vec();
        c.resize(total + 1, k.zero());
        c.reverse();
        Poly::new(&k, c)
    };
    let zeta = k.primitive_element();
    let mut dickson_invariant = true;
    for g in [binom_plus(&k, 1, k.one()), Poly::monomial(&k, zeta, 1)] {
        dickson_invariant &= identity("invariance", &(&nn.compose(&g) * &mm), &(&mm.compose(&g) * &nn))?;
    }
    dickson_invariant &= identity("invariance under v -> 1/v", &(&reverse(&nn) * &mm), &(&reverse(&mm) * &nn))?;

    let d = ((q * q - q) / 2) as usize;
    let h = invariant_h(q, gamma, &k)?;
    let h_monic_degree = h.is_monic() && h.deg() == d;

    let pp = big.exact_div(&vq_v)?;
    let lhs = homogeneous_eval(&h, &a, &b, d)?;
    let relation = identity("h(x̂) relation", &lhs, &pp.pow(q + 1))?;

    let mut f_hat = Vec::new();
    let s2 = binom_plus(&k, 2, k.neg(gamma));
    for n in numtheory::divisors(q.div_ceil(2)) {
        let c = (q + 1) / n;
        let f_inner = f_hat_inner(q, n, gamma, &k)?;
        let deg_f = f_inner.deg();
        if (d - 1) != n as usize * deg_f {
            return Err(Error::IdentityFailed(format!("deg f̂ is not 1 + n deg F for n = {n}")));
        }
        let f_tilde = homogeneous_eval(&f_inner, &s2.pow(q + 1), &b, deg_f)?;
        let left = &s2.pow(c) * &f_tilde;
        let right = pp.pow(c);
        let ratio = k.div(left.lc(), right.lc())?;
        let ok = k.pow(ratio, n) == k.one() && left == right.scale(ratio);
        if !ok {
            return Err(Error::IdentityFailed(format!("f̂(x̂) = û fails for n = {n}: {}", first_difference(&left, &right))));
        }
        f_hat.push((n, ok));
    }
    Ok(InvariantReport {
        q,
        gamma: k.format_elem(gamma),
        orbit_sum,
        dickson_invariant,
        x_hat_degree,
        h_monic_degree,
        relation,
        f_hat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> Field {
        Field::make(p, 1).unwrap()
    }

    fn build(family: Family, k: &Field) -> Poly {
        construct(&FamilySpec::new(family, k)).unwrap().poly
    }

    #[test]
    fn char2_small_member() {
        let k = fp(2);
        let f = build(Family::Char2 { q: 8, n: 1, alpha: k.one() }, &k);
        let expected = Poly::from_ints(&k, &[1, 1, 0, 1]).pow(9).shift(1);
        assert_eq!(f, expected);
        assert_eq!(f.deg(), 28);
    }

    #[test]
    fn odd_family_degrees() {
        let k = fp(7);
        for m in [1, 2, 4] {
            assert_eq!(build(Family::GenOdd { q: 7, m }, &k).deg(), 21);
        }
        assert!(construct(&FamilySpec::new(Family::GenOdd { q: 7, m: 3 }, &k)).is_err());
    }

    #[test]
    fn even_family_boundary() {
        let k = fp(2);
        for m in [1, 3, 9] {
            let c = construct(&FamilySpec::new(Family::GenEven { q: 8, m }, &k)).unwrap();
            assert_eq!(c.poly.deg(), 28);
            assert_eq!(c.boundary_case, m == 9);
        }
    }

    #[test]
    fn dickson_examples() {
        let k = fp(7);
        assert_eq!(dickson(3, k.one(), &k), Poly::from_ints(&k, &[0, 4, 0, 1]));
        assert_eq!(dickson(2, k.one(), &k), Poly::from_ints(&k, &[-2, 0, 1]));
        for d in 1..=12 {
            assert!(verify_dickson_identity(d, k.from_int(3), &k));
        }
        let k9 = Field::make(3, 2).unwrap();
        assert!(verify_dickson_identity(12, k9.generator(), &k9));
    }

    #[test]
    fn dickson_composition_law() {
        for k in [fp(7), Field::make(3, 2).unwrap()] {
            let alpha = k.from_index(k.order() - 1);
            for a in 1..=4u64 {
                for b in 1..=4u64 {
                    let lhs = dickson(a * b, alpha, &k);
                    let rhs = dickson(a, k.pow(alpha, b), &k).compose(&dickson(b, alpha, &k));
                    assert_eq!(lhs, rhs, "a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn linear_equivalence() {
        let k = fp(3);
        let f = Poly::from_ints(&k, &[0, 0, 1]);
        let x = Poly::x(&k);
        assert_eq!(linear_equiv(&f, &x, &x).unwrap(), f);
        let l1 = Poly::from_ints(&k, &[1, 1]);
        assert_eq!(linear_equiv(&f, &l1, &x).unwrap(), Poly::from_ints(&k, &[1, 0, 1]));
        assert!(linear_equiv(&f, &f, &x).is_err());
    }

    #[test]
    fn char3_members_related_by_scaling() {
        let k = Field::make(3, 2).unwrap();
        let q = 27;
        let n = 1;
        let alpha = k.generator();
        let lambda = k.add(k.generator(), k.one());
        let alpha2 = k.mul(alpha, k.pow(lambda, 2 * n));
        let f = build(Family::Char3 { q, n, alpha }, &k);
        let f2 = build(Family::Char3 { q, n, alpha: alpha2 }, &k);
        let d = f.deg() as u64;
        let l1 = Poly::monomial(&k, k.inv(k.pow(lambda, d)).unwrap(), 1);
        let l2 = Poly::monomial(&k, lambda, 1);
        assert_eq!(linear_equiv(&f2, &l1, &l2).unwrap(), f);
    }

    #[test]
    fn table_b_shapes() {
        let degrees: Vec<usize> = (1..=11).map(|i| build(Family::TableB { index: i }, &fp(table_b_q(i).unwrap())).deg()).collect();
        assert_eq!(degrees, vec![55, 55, 55, 55, 253, 253, 253, 1711, 1711, 1711, 1711]);
        assert!(matches!(table_b_indices(4), Err(Error::Unsupported(_))));
        assert_eq!(table_b_indices(23).unwrap(), vec![5, 6, 7]);
    }

    fn fnv(f: &Poly) -> u64 {
        f.coeffs().iter().fold(0xcbf2_9ce4_8422_2325u64, |h, c| (h ^ c.0).wrapping_mul(0x100_0000_01b3))
    }

    #[test]
    fn table_b_transcription() {
        let frozen: [u64; 11] = [
            0x737420e62cb06f5a,
            0xb082735dbe232cd6,
            0xafe6f4cfe421f5a5,
            0x40e1f36bcc04a2e0,
            0x85f6e58aabb310dc,
            0x3b72304fa89006e2,
            0x395e6105b73450dc,
            0x3ae794241045bdc0,
            0x5bfa2f40b472061c,
            0x08739a3c344e3a59,
            0x92dca3c2cbd3b7e9,
        ];
        for i in 1..=11 {
            let k = fp(table_b_q(i).unwrap());
            let f = build(Family::TableB { index: i }, &k);
            let d = f.derivative();
            let quotient = d.exact_div(&f.gcd(&d)).unwrap();
            assert_eq!(quotient.deg(), 0, "f{i}: derivative has a root outside the roots of f");
            assert_eq!(fnv(&f), frozen[i - 1], "f{i}");
        }
    }

    #[test]
    fn odd_family_matches_invariant_form() {
        let q = 7;
        let k = fp(q);
        let k2 = Field::make(q, 2).unwrap();
        let gamma = k.least_nonsquare().unwrap();
        for n in [1u64, 2, 4] {
            let c = (q + 1) / n;
            let f_hat = f_hat_inner(q, n, gamma, &k).unwrap().compose(&xpow(&k, n)).shift(1).embed_into(&k2).unwrap();
            let gen = build(Family::GenOdd { q, m: n }, &k).embed_into(&k2).unwrap();
            let gamma2 = k2.from_int(gamma.0);
            let lambda = k2.elements().find(|&l| k2.pow(l, n) == gamma2).unwrap();
            let kappa = k2.div(k2.mul(lambda, k2.pow(gamma2, c / 2)), k2.pow(gamma2, c)).unwrap();
            let kappa = if c % 2 == 1 { k2.neg(kappa) } else { kappa };
            let lhs = f_hat.compose(&Poly::monomial(&k2, lambda, 1));
            assert_eq!(lhs, gen.scale(kappa), "n={n}");
        }
    }

    #[test]
    fn galois_data() {
        let k = fp(7);
        let g = galois_closure_data(&FamilySpec::new(Family::GenOdd { q: 7, m: 2 }, &k)).unwrap();
        assert_eq!((g.n, g.genus, g.geometric_group), (1, 0, Flavor::Psl));
        let g = galois_closure_data(&FamilySpec::new(Family::Char2 { q: 8, n: 9, alpha: fp(2).one() }, &fp(2))).unwrap();
        assert_eq!(g.genus, 28);
        let g = galois_closure_data(&FamilySpec::new(Family::TableB { index: 11 }, &fp(59))).unwrap();
        assert_eq!((g.n, g.genus), (5, 116));
    }

    #[test]
    fn invariant_identities_small() {
        let r = verify_invariant_identities(5).unwrap();
        assert!(r.ok(), "{r:?}");
        for q in [7, 9, 11] {
            assert!(verify_invariant_identities(q).unwrap().ok(), "q={q}");
        }
        assert!(matches!(verify_invariant_identities(8), Err(Error::Unsupported(_))));
    }
}

