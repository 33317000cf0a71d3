//! Artin–Schreier ramification for `v^q - v = z(w)` and index bookkeeping for
//! covers with monodromy between `PSL(2,q)` and `PΓL(2,q)`.
//!
//! Polynomials `z` live in `k[w]` for a finite field `k` containing `F_q`; the
//! variable is printed as `X` by [`Poly`].

use crate::error::{precondition, Error, Result};
use crate::gf::{Embedding, Fe, Field};
use crate::numtheory::{self, gcd};
use crate::poly::Poly;
use crate::psl2::{orbit_stats, Action, Flavor, PermAction, ProjElem, SubgroupKind};
use num_rational::Rational64;
use serde::Serialize;
use std::collections::HashSet;

fn check_contains_fq(q: u64, k: &Field) -> Result<u32> {
    let (p, e) = numtheory::prime_power(q).ok_or_else(|| Error::Precondition(format!("{q} is not a prime power")))?;
    if k.characteristic() != p || !k.degree().is_multiple_of(e) {
        return precondition(format!("coefficient field {k} does not contain F_{q}"));
    }
    Ok(e)
}

/// Remove nonconstant terms of degree divisible by `q`, modulo `y^q - y`.
///
/// Each term `a w^(j q)` becomes `a^(1/q) w^j`, repeated until no such term remains.
pub fn as_normalize(z: &Poly, q: u64) -> Result<Poly> {
    let k = z.field();
    let e = check_contains_fq(q, k)?;
    let q = q as usize;
    let mut c = z.coeffs().to_vec();
    for m in (1..c.len()).rev() {
        if m % q == 0 && c[m].0 != 0 {
            let moved = k.frobenius_inv(c[m], e);
            c[m / q] = k.add(c[m / q], moved);
            c[m] = k.zero();
        }
    }
    Ok(Poly::new(k, c))
}

/// Replace each term `a w^(p^i j)` with `p ∤ j` by `a^(p^-i) w^j`.
pub fn p_reduce(z: &Poly) -> Poly {
    let k = z.field();
    let p = k.characteristic();
    let mut c = vec![k.zero(); z.coeffs().len()];
    for (m, a) in z.terms() {
        if m == 0 {
            c[0] = k.add(c[0], a);
            continue;
        }
        let i = numtheory::valuation(m as u64, p);
        let j = m / p.pow(i) as usize;
        c[j] = k.add(c[j], k.frobenius_inv(a, i));
    }
    Poly::new(k, c)
}

/// Largest integer prime to `p` dividing the degree of a nonconstant term.
pub fn largest_coprime_divisor_of_terms(z: &Poly) -> Option<u64> {
    let p = z.field().characteristic();
    z.terms().filter(|&(m, _)| m > 0).map(|(m, _)| numtheory::coprime_part(m as u64, p)).max()
}

/// Elements of `F_q^*` inside `k`.
fn fq_units(k: &Field, e: u32) -> Vec<Fe> {
    if k.degree() == e {
        return k.elements().filter(|a| a.0 != 0).collect();
    }
    let fq = Field::make(k.characteristic(), e).expect("subfield of a supported field");
    let emb = Embedding::new(&fq, k).expect("F_q embeds in k");
    fq.elements().filter(|a| a.0 != 0).map(|a| emb.map(a)).collect()
}

/// The unique jump `n` of the ramification filtration at infinity for `v^q - v = z`.
///
/// Every `ζ z` with `ζ ∈ F_q^*` must reduce to the same degree `n`, which is then
/// cross-checked against the largest prime-to-`p` divisor of a term degree.
pub fn jump_n(z: &Poly, q: u64) -> Result<u64> {
    let k = z.field();
    let e = check_contains_fq(q, k)?;
    let z = as_normalize(z, q)?;
    if z.is_constant() {
        return precondition("z has no nonconstant term");
    }
    let mut degrees = HashSet::new();
    for zeta in fq_units(k, e) {
        degrees.insert(p_reduce(&z.scale(zeta)).deg() as u64);
    }
    if degrees.len() != 1 {
        let mut ds: Vec<u64> = degrees.into_iter().collect();
        ds.sort_unstable();
        return Err(Error::MultipleJumps(format!("reduced degrees {ds:?} differ across F_q^*")));
    }
    let n = degrees.into_iter().next().unwrap();
    if n == 0 {
        return Err(Error::MultipleJumps("every reduced form is constant".into()));
    }
    let c = largest_coprime_divisor_of_terms(&z).unwrap_or(0);
    if c != n {
        return Err(Error::IdentityFailed(format!("reduced degree {n} but largest coprime term divisor {c}")));
    }
    Ok(n)
}

/// Whether `k(v,w)/k(w^r)` is Galois for `v^q - v = γ w^n`.
pub fn galois_over_wr(q: u64, n: u64, r: u64, k: &Field) -> bool {
    if r == 1 {
        return true;
    }
    (q - 1).is_multiple_of(r / gcd(n, r)) && (k.order() - 1).is_multiple_of(r)
}

/// Residues `n p^i mod r` over the Frobenius orbit.
fn orbit_residues(p: u64, n: u64, r: u64) -> Vec<u64> {
    let mut seen = Vec::new();
    let mut x = n % r;
    while !seen.contains(&x) {
        seen.push(x);
        x = ((x as u128 * p as u128) % r as u128) as u64;
    }
    seen
}

/// Every nonnegative `n' ≡ n p^i (mod r)` satisfies `n' ≥ n`.
pub fn star_criterion(p: u64, n: u64, r: u64) -> bool {
    if r == 0 {
        return false;
    }
    orbit_residues(p, n, r).into_iter().all(|x| x >= n)
}

/// Slow reference for [`star_criterion`]: tries every `n' < n` and `0 <= i <= r`.
pub fn star_criterion_bruteforce(p: u64, n: u64, r: u64) -> bool {
    if r == 0 {
        return false;
    }
    for i in 0..=r {
        let target = (n as u128 * numtheory::pow_mod(p, i, r) as u128 % r as u128) as u64;
        if (0..n).any(|np| np % r == target) {
            return false;
        }
    }
    true
}

/// The two sufficient conditions for uniqueness of `v^q - v = γ w^n` over `k(w^r)`.
pub fn thm16_conditions(p: u64, e: u32, n: u64, r: u64, k: &Field) -> (bool, bool) {
    let cond_i = star_criterion(p, n, r);
    let q = p.pow(e);
    let m = r / gcd(n, r);
    let cond_ii = k.order() == q || numtheory::mult_order(p, m) == Some(e as u64);
    (cond_i, cond_ii)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Which {
    I,
    Ii,
}

/// Right-hand side `z` of a cover with the same ramification that is not of the
/// form `γ w^n`, when the selected condition fails; `None` when it holds.
///
/// Case (ii) takes `β` as the image of the generator of `F_{q^2}` when `k`
/// contains it, otherwise the generator of `k`.
pub fn counterexample_z(p: u64, e: u32, n: u64, r: u64, which: Which, k: &Field) -> Result<Option<Poly>> {
    let q = numtheory::checked_pow(p, e).ok_or_else(|| Error::Precondition("q overflows".into()))?;
    check_contains_fq(q, k)?;
    if n.is_multiple_of(p) {
        return precondition("n must be prime to p");
    }
    let (cond_i, cond_ii) = thm16_conditions(p, e, n, r, k);
    match which {
        Which::I => {
            if cond_i {
                return Ok(None);
            }
            for i in 0..e {
                let np = n * p.pow(i);
                let res = np % r;
                if res < n {
                    let z = Poly::from_terms(k, &[(1, np as usize), (1, res as usize)]);
                    return Ok(Some(z));
                }
            }
            Err(Error::IdentityFailed("condition (i) fails but no witness with i < e".into()))
        }
        Which::Ii => {
            if cond_ii {
                return Ok(None);
            }
            let m = r / gcd(n, r);
            let i = (1..e)
                .find(|&i| numtheory::pow_mod(p, i as u64, m) == 1 % m)
                .ok_or_else(|| Error::Precondition("no power p^i ≡ 1 below p^e; r/gcd(n,r) must divide q-1".into()))?;
            let beta = outside_fq(k, e)?;
            let mut c = vec![k.zero(); (n * p.pow(i)) as usize + 1];
            c[n as usize] = k.one();
            c[(n * p.pow(i)) as usize] = beta;
            Ok(Some(Poly::new(k, c)))
        }
    }
}

fn outside_fq(k: &Field, e: u32) -> Result<Fe> {
    if k.degree() == e {
        return precondition("k = F_q has no element outside F_q");
    }
    if k.degree().is_multiple_of(2 * e) {
        let quad = Field::make(k.characteristic(), 2 * e)?;
        return Ok(Embedding::new(&quad, k)?.image_of_generator());
    }
    Ok(k.generator())
}

/// A substitution `w -> β w` making `z` Artin–Schreier equivalent to `γ w^n` over `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialWitness {
    pub beta: Fe,
    pub gamma: Fe,
}

/// Search `β ∈ k^*` such that `z(β w) - γ w^n = y^q - y` for some `y ∈ k[w]`.
pub fn monomial_form(z: &Poly, q: u64, n: u64) -> Result<Option<MonomialWitness>> {
    let k = z.field();
    let e = check_contains_fq(q, k)?;
    for beta in k.elements().filter(|a| a.0 != 0) {
        let mut c = z.coeffs().to_vec();
        let mut pw = k.one();
        for ci in c.iter_mut() {
            *ci = k.mul(*ci, pw);
            pw = k.mul(pw, beta);
        }
        let u = as_normalize(&Poly::new(k, c), q)?;
        let nonconst: Vec<(usize, Fe)> = u.terms().filter(|&(m, _)| m > 0).collect();
        if nonconst.len() != 1 || nonconst[0].0 as u64 != n {
            continue;
        }
        if relative_trace(k, u.coeff(0), e) == k.zero() {
            return Ok(Some(MonomialWitness { beta, gamma: nonconst[0].1 }));
        }
    }
    Ok(None)
}

/// Trace from `k` down to `F_{p^e}`; zero exactly on the image of `y -> y^q - y`.
fn relative_trace(k: &Field, a: Fe, e: u32) -> Fe {
    let mut acc = k.zero();
    let mut x = a;
    for _ in 0..(k.degree() / e) {
        acc = k.add(acc, x);
        x = k.frobenius(x, e);
    }
    acc
}

/// Checks on a generated counterexample.
#[derive(Clone, Debug, Serialize)]
pub struct CounterexampleReport {
    pub z: String,
    /// `z(ζ w) = ζ^c z(w)` with `ζ^c ∈ F_q` for all `r`-th roots of unity `ζ` in `k`.
    pub galois: bool,
    pub jump: Option<u64>,
    pub monomial_equivalent: bool,
}

pub fn check_counterexample(z: &Poly, q: u64, n: u64, r: u64) -> Result<CounterexampleReport> {
    let k = z.field();
    let e = check_contains_fq(q, k)?;
    let degs: Vec<usize> = z.terms().filter(|&(m, _)| m > 0).map(|(m, _)| m).collect();
    let same_class = degs.iter().all(|&m| (m as u64) % r == (degs[0] as u64) % r);
    let c = degs[0] as u64 % r;
    let roots_present = (k.order() - 1).is_multiple_of(r);
    let galois = same_class
        && roots_present
        && k.elements().filter(|a| a.0 != 0 && k.pow(*a, r) == k.one()).all(|zeta| {
            let s = k.pow(zeta, c);
            k.frobenius(s, e) == s
        });
    Ok(CounterexampleReport {
        z: z.body_text(),
        galois,
        jump: jump_n(z, q).ok(),
        monomial_equivalent: monomial_form(z, q, n)?.is_some(),
    })
}

/// Ramification data at one place of the base.
#[derive(Clone, Debug, Serialize)]
pub struct BranchPlace {
    pub label: String,
    pub inertia_order: u64,
    /// Orders `|I_0|, |I_1|, ...` up to the last nontrivial group.
    pub filtration: Vec<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RamProfile {
    pub q: u64,
    pub n: u64,
    pub r: u64,
    pub degree: u64,
    pub branch_places: Vec<BranchPlace>,
    pub genus: i64,
}

/// Ramification of `k(v,w)/k(w^r)` for `v^q - v = w^n` over the smallest `k ⊇ F_q`
/// containing the `r`-th roots of unity.
pub fn ramification_profile(q: u64, n: u64, r: u64) -> Result<RamProfile> {
    let (p, e) = numtheory::prime_power(q).ok_or_else(|| Error::Precondition(format!("{q} is not a prime power")))?;
    if n.is_multiple_of(p) || r.is_multiple_of(p) {
        return precondition("n and r must be prime to p");
    }
    let ord = if r == 1 { 1 } else { numtheory::mult_order(q, r).unwrap() as u32 };
    let k = Field::make(p, e * ord)?;
    if !galois_over_wr(q, n, r, &k) {
        return precondition(format!("k(v,w)/k(w^{r}) is not Galois for q={q}, n={n}"));
    }
    let mut places = Vec::new();
    if r > 1 {
        places.push(BranchPlace { label: "0".into(), inertia_order: r, filtration: vec![r] });
    }
    let mut filt = vec![q * r];
    filt.extend(std::iter::repeat_n(q, n as usize));
    places.push(BranchPlace { label: "inf".into(), inertia_order: q * r, filtration: filt });
    let degree = q * r;
    let mut total: i64 = -2 * degree as i64;
    for pl in &places {
        let cosets = (degree / pl.inertia_order) as i64;
        total += cosets * pl.filtration.iter().map(|&o| o as i64 - 1).sum::<i64>();
    }
    let genus = (total + 2) / 2;
    let expected = ((q - 1) * (n - 1) / 2) as i64;
    if genus != expected {
        return Err(Error::IdentityFailed(format!("genus {genus} differs from (q-1)(n-1)/2 = {expected}")));
    }
    Ok(RamProfile { q, n, r, degree, branch_places: places, genus })
}

/// `Σ_i (d - orb(I_i)) / |I_0 : I_i|` for a chain `I_0 ⊇ I_1 ⊇ ...`.
pub fn index_of_place(act: &dyn Action, chain: &[Vec<ProjElem>]) -> Result<Rational64> {
    let g = act.group();
    let p = g.characteristic();
    let d = act.degree() as i64;
    if chain.is_empty() {
        return Ok(Rational64::from_integer(0));
    }
    let i0 = chain[0].len() as i64;
    let sylow = numtheory::checked_pow(p, numtheory::valuation(i0 as u64, p)).unwrap() as usize;
    let mut prev: Option<HashSet<ProjElem>> = None;
    let mut total = Rational64::from_integer(0);
    for (i, grp) in chain.iter().enumerate() {
        let set: HashSet<ProjElem> = grp.iter().copied().collect();
        if let Some(prev) = &prev {
            if !set.is_subset(prev) {
                return Err(Error::NotSubgroup(format!("ramification group {i} is not contained in its predecessor")));
            }
            if i == 1 && grp.len() != sylow {
                return Err(Error::NotSubgroup("I_1 is not the Sylow p-subgroup of I_0".into()));
            }
            if i > 1 && grp.len() != 1 && grp.len() != prev.len() {
                return Err(Error::NotSubgroup("I_i must stay equal to I_1 until it becomes trivial".into()));
            }
        }
        let orb = orbit_stats(grp, act, p)?.orbits as i64;
        total += Rational64::new(d - orb, i0 / grp.len() as i64);
        prev = Some(set);
    }
    Ok(total)
}

/// Branch configurations for covers of degree `(q^2-q)/2` with `PSL(2,q)` normal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RhCase {
    /// One tame finite branch point with cyclic inertia.
    OneFinite,
    /// No finite branch points, `q ≡ 0 mod 4`, `n = q+1`.
    NoFinite,
    /// One wild finite branch point of order 2, `q ≡ 0 mod 4`, `n = 1`.
    WildOrderTwo,
    /// Two finite branch points of order 2, `q` odd, `n = 1`, `G = PGL`.
    TwoFinite,
}

impl RhCase {
    pub fn parse(s: &str) -> Result<RhCase> {
        match s {
            "one-finite" => Ok(RhCase::OneFinite),
            "no-finite" => Ok(RhCase::NoFinite),
            "wild-order-two" => Ok(RhCase::WildOrderTwo),
            "two-finite" => Ok(RhCase::TwoFinite),
            _ => precondition(format!("unknown case '{s}' (one-finite, no-finite, wild-order-two, two-finite)")),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PlaceIndex {
    pub label: String,
    pub filtration: Vec<u64>,
    pub index: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RhReport {
    pub q: u64,
    pub flavor: Flavor,
    pub case: RhCase,
    pub n: u64,
    pub d: u64,
    pub places: Vec<PlaceIndex>,
    pub total_index: i64,
    pub genus: i64,
    pub expected_genus: i64,
    pub ok: bool,
}

fn integral(x: Rational64, what: &str) -> Result<i64> {
    if !x.is_integer() {
        return Err(Error::IdentityFailed(format!("{what} has non-integral index {x}")));
    }
    Ok(x.to_integer())
}

/// Build the inertia chains of a configuration inside the point action, sum the
/// indices against `2d - 2` and compute the genus of the Galois closure.
pub fn rh_check(q: u64, flavor: Flavor, case: RhCase, n: u64) -> Result<RhReport> {
    let act = PermAction::new(q)?;
    let g = act.group();
    let p = g.characteristic();
    let o = g.o();
    let d = act.degree() as u64;
    if flavor == Flavor::PGammaL && g.field_degree() > 1 {
        return Err(Error::Unsupported("configurations are realised only for G = PSL or PGL".into()));
    }
    let not_realizable = |why: &str| Err(Error::Precondition(format!("not realizable: {why}")));
    let big = g.elements(flavor);
    let index_gl = if p == 2 { 1 } else { g.group_order(flavor) / g.group_order(Flavor::Psl) };
    if p != 2 && q % 4 == 1 && flavor == Flavor::Psl {
        return not_realizable("q ≡ 1 mod 4 requires G = PGL");
    }

    let borel = g.subgroup(SubgroupKind::Borel, flavor)?;
    let sylow = g.subgroup(SubgroupKind::SylowP, flavor)?;
    let mut inf_chain = vec![borel.clone()];
    inf_chain.extend(std::iter::repeat_n(sylow.clone(), n as usize));
    let mut chains: Vec<(String, Vec<Vec<ProjElem>>)> = vec![("inf".into(), inf_chain)];

    match case {
        RhCase::OneFinite => {
            let bound = (q + 1) / gcd(4, q + 1);
            if !bound.is_multiple_of(n) || n > q {
                return not_realizable("n must divide (q+1)/gcd(4,q+1) with n < q+1");
            }
            let ord = index_gl * (q + 1) / (o * n);
            let need_outside = index_gl > 1;
            let c = big
                .iter()
                .find(|x| g.order(x) == ord && (!need_outside || !g.in_psl(x)))
                .ok_or_else(|| Error::Precondition(format!("not realizable: no cyclic inertia of order {ord}")))?;
            chains.push(("Q".into(), vec![g.generate(&[*c])]));
        }
        RhCase::NoFinite => {
            if !q.is_multiple_of(4) || n != q + 1 {
                return not_realizable("requires q ≡ 0 mod 4 and n = q+1");
            }
        }
        RhCase::WildOrderTwo => {
            if !q.is_multiple_of(4) || n != 1 {
                return not_realizable("requires q ≡ 0 mod 4 and n = 1");
            }
            let t = big.iter().find(|x| g.order(x) == 2).unwrap();
            let sub = g.generate(&[*t]);
            chains.push(("Q".into(), vec![sub.clone(), sub]));
        }
        RhCase::TwoFinite => {
            if p == 2 || n != 1 || flavor != Flavor::Pgl {
                return not_realizable("requires q odd, n = 1 and G = PGL");
            }
            let t1 = big.iter().find(|x| g.order(x) == 2 && g.in_psl(x)).unwrap();
            let t2 = big.iter().find(|x| g.order(x) == 2 && !g.in_psl(x)).unwrap();
            chains.push(("Q1".into(), vec![g.generate(&[*t1])]));
            chains.push(("Q2".into(), vec![g.generate(&[*t2])]));
        }
    }

    let order_g = big.len() as i64;
    let mut places = Vec::new();
    let mut total = 0i64;
    let mut rh_sum = -2 * order_g;
    for (label, chain) in &chains {
        let ind = integral(index_of_place(&act, chain)?, label)?;
        total += ind;
        let filtration: Vec<u64> = chain.iter().map(|h| h.len() as u64).collect();
        rh_sum += (order_g / chain[0].len() as i64) * filtration.iter().map(|&o| o as i64 - 1).sum::<i64>();
        places.push(PlaceIndex { label: label.clone(), filtration, index: ind });
    }
    let genus = (rh_sum + 2) / 2;
    let expected_genus = match case {
        RhCase::OneFinite => ((q - 1) * (n - 1) / 2) as i64,
        _ => ((q * q - q) / 2) as i64,
    };
    let ok = total == 2 * d as i64 - 2 && genus == expected_genus && rh_sum % 2 == 0;
    Ok(RhReport { q, flavor, case, n, d, places, total_index: total, genus, expected_genus, ok })
}

/// Every realisable configuration for a given `q`.
pub fn rh_configurations(q: u64) -> Vec<(Flavor, RhCase, u64)> {
    let mut out = Vec::new();
    let bound = (q + 1) / gcd(4, q + 1);
    let flavors: &[Flavor] = if q.is_multiple_of(2) {
        &[Flavor::Psl]
    } else if q % 4 == 3 {
        &[Flavor::Psl, Flavor::Pgl]
    } else {
        &[Flavor::Pgl]
    };
    for &fl in flavors {
        for n in numtheory::divisors(bound) {
            if n < q + 1 {
                out.push((fl, RhCase::OneFinite, n));
            }
        }
    }
    if q.is_multiple_of(4) {
        out.push((Flavor::Psl, RhCase::NoFinite, q + 1));
        out.push((Flavor::Psl, RhCase::WildOrderTwo, 1));
    }
    if q % 2 == 1 {
        out.push((Flavor::Pgl, RhCase::TwoFinite, 1));
    }
    out
}

/// One parameter set of the numerology sweep.
#[derive(Clone, Debug, Serialize)]
pub struct NumerologyRow {
    pub q: u64,
    pub n: u64,
    pub r: u64,
    pub part: &'static str,
    pub holds: bool,
}

/// Criterion (*) for `q ≡ 3 mod 4, n | (q+1)/4, r = (q-1)/2` and for
/// `q ≢ 3 mod 4, n | q+1, n < q+1, r = q-1`, over prime powers `4 <= q <= qmax`.
pub fn numerology_sweep(qmax: u64) -> Vec<NumerologyRow> {
    let mut out = Vec::new();
    for q in 4..=qmax {
        let Some((p, _)) = numtheory::prime_power(q) else { continue };
        if q % 4 == 3 {
            let r = (q - 1) / 2;
            for n in numtheory::divisors((q + 1) / 4) {
                out.push(NumerologyRow { q, n, r, part: "i", holds: star_criterion(p, n, r) });
            }
        } else {
            let r = q - 1;
            for n in numtheory::divisors(q + 1).into_iter().filter(|&n| n < q + 1) {
                out.push(NumerologyRow { q, n, r, part: "ii", holds: star_criterion(p, n, r) });
            }
        }
    }
    out
}

/// For `q ≡ 3 mod 4`, `q > 3`: every residue of `n p^i` with `n = (q+1)/4`,
/// `r = (q-1)/2` lies in `[n, r)`. Returns the values of `q` where this fails.
pub fn top_half_failures(qmax: u64) -> Vec<u64> {
    let mut bad = Vec::new();
    for q in (7..=qmax).filter(|q| q % 4 == 3) {
        let Some((p, _)) = numtheory::prime_power(q) else { continue };
        let n = (q + 1) / 4;
        let r = (q - 1) / 2;
        if !orbit_residues(p, n, r).into_iter().all(|x| x >= n && x < r) {
            bad.push(q);
        }
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(q: u64) -> Field {
        let (p, e) = numtheory::prime_power(q).unwrap();
        Field::make(p, e).unwrap()
    }

    #[test]
    fn normalization_examples() {
        let k4 = field(4);
        let z = Poly::from_terms(&k4, &[(1, 4)]);
        assert_eq!(as_normalize(&z, 4).unwrap(), Poly::x(&k4));
        let k8 = field(8);
        let z = Poly::from_terms(&k8, &[(1, 8), (1, 3)]);
        assert_eq!(as_normalize(&z, 8).unwrap(), Poly::from_terms(&k8, &[(1, 1), (1, 3)]));
        let k9 = field(9);
        let z = Poly::from_terms(&k9, &[(1, 5)]);
        assert_eq!(as_normalize(&z, 9).unwrap(), z);
        let g = k4.generator();
        let z = Poly::monomial(&k4, g, 16);
        assert_eq!(as_normalize(&z, 4).unwrap(), Poly::monomial(&k4, k4.frobenius_inv(g, 4), 1));
    }

    #[test]
    fn jump_examples() {
        let k9 = field(9);
        assert_eq!(jump_n(&Poly::from_terms(&k9, &[(1, 5)]), 9).unwrap(), 5);
        let k8 = field(8);
        assert_eq!(jump_n(&Poly::from_terms(&k8, &[(1, 4)]), 8).unwrap(), 1);
        let a = k8.generator();
        let b = k8.add(a, k8.one());
        let z = Poly::new(&k8, {
            let mut c = vec![k8.zero(); 10];
            c[2] = a;
            c[9] = b;
            c
        });
        assert_eq!(jump_n(&z, 8).unwrap(), 9);
        let k4 = field(4);
        // w^2 + g w reduces to (1 + g) w for ζ = 1 but ζ = g^2 can cancel.
        let w = k4.generator();
        let z2 = Poly::new(&k4, vec![k4.zero(), w, k4.one()]);
        let zeta_cancels = k4
            .elements()
            .filter(|x| x.0 != 0)
            .any(|zeta| p_reduce(&z2.scale(zeta)).deg() == 0);
        assert_eq!(matches!(jump_n(&z2, 4), Err(Error::MultipleJumps(_))), zeta_cancels);
    }

    #[test]
    fn galois_examples() {
        assert!(galois_over_wr(8, 9, 7, &field(8)));
        assert!(!galois_over_wr(3, 1, 5, &field(3)));
        assert!(galois_over_wr(5, 2, 1, &field(5)));
    }

    #[test]
    fn star_examples() {
        assert!(star_criterion(3, 7, 13));
        assert!(star_criterion(2, 3, 7));
        assert!(!star_criterion(2, 3, 5));
        for (p, n, r) in [(3, 7, 13), (2, 3, 7), (2, 3, 5), (5, 2, 12), (7, 3, 10)] {
            assert_eq!(star_criterion(p, n, r), star_criterion_bruteforce(p, n, r));
        }
    }

    #[test]
    fn uniqueness_conditions() {
        let (ci, _) = thm16_conditions(3, 3, 7, 13, &field(27));
        assert!(ci);
        assert!(thm16_conditions(2, 3, 3, 7, &field(8)).1);
        assert!(thm16_conditions(2, 3, 3, 7, &field(64)).1);
        assert!(!thm16_conditions(2, 6, 3, 7, &field(4096)).1);
    }

    #[test]
    fn counterexamples() {
        let k8 = field(8);
        let z = counterexample_z(2, 3, 3, 5, Which::I, &k8).unwrap().unwrap();
        assert_eq!(z, Poly::from_terms(&k8, &[(1, 6), (1, 1)]));
        assert!(counterexample_z(3, 3, 7, 13, Which::I, &field(27)).unwrap().is_none());
        let k = field(4096);
        let z = counterexample_z(2, 6, 3, 7, Which::Ii, &k).unwrap().unwrap();
        assert_eq!(z.deg(), 24);
        assert_eq!(z.coeff(3), k.one());
        let beta = z.coeff(24);
        assert_ne!(k.frobenius(beta, 6), beta);
        assert!(counterexample_z(2, 6, 3, 7, Which::Ii, &field(64)).unwrap().is_none());
    }

    #[test]
    fn counterexample_is_not_monomial() {
        let k8 = field(8);
        let z = counterexample_z(2, 3, 5, 7, Which::I, &k8).unwrap().unwrap();
        let rep = check_counterexample(&z, 8, 5, 7).unwrap();
        assert!(rep.galois);
        assert_eq!(rep.jump, Some(5));
        assert!(!rep.monomial_equivalent);
        let mono = Poly::from_terms(&k8, &[(1, 5)]);
        assert!(monomial_form(&mono, 8, 5).unwrap().is_some());
        let disguised = &mono + &Poly::monomial(&k8, k8.generator(), 40);
        assert!(monomial_form(&disguised, 8, 5).unwrap().is_some());
    }

    #[test]
    fn index_examples() {
        let act = PermAction::new(7).unwrap();
        let g = act.group();
        let b = g.subgroup(SubgroupKind::Borel, Flavor::Psl).unwrap();
        let v = g.subgroup(SubgroupKind::SylowP, Flavor::Psl).unwrap();
        let ind = index_of_place(&act, &[b.clone(), v.clone(), v.clone()]).unwrap();
        assert_eq!(ind, Rational64::from_integer(32));
        let t = g.elements(Flavor::Psl).into_iter().find(|x| g.order(x) == 2).unwrap();
        let ind = index_of_place(&act, &[g.generate(&[t])]).unwrap();
        assert_eq!(ind, Rational64::from_integer(8));
        assert_eq!(index_of_place(&act, &[]).unwrap(), Rational64::from_integer(0));
        assert!(index_of_place(&act, &[v.clone(), b]).is_err());
    }

    #[test]
    fn riemann_hurwitz_configurations() {
        let r = rh_check(7, Flavor::Psl, RhCase::OneFinite, 2).unwrap();
        assert!(r.ok);
        assert_eq!(r.places.iter().map(|p| p.index).collect::<Vec<_>>(), vec![32, 8]);
        assert_eq!(r.genus, 3);
        let r = rh_check(8, Flavor::Psl, RhCase::NoFinite, 9).unwrap();
        assert_eq!(r.places[0].index, 54);
        assert_eq!(r.genus, 28);
        assert!(r.ok);
        let r = rh_check(7, Flavor::Pgl, RhCase::TwoFinite, 1).unwrap();
        assert_eq!(r.places.iter().map(|p| p.index).collect::<Vec<_>>(), vec![23, 8, 9]);
        assert!(r.ok);
        assert!(rh_check(7, Flavor::Pgl, RhCase::OneFinite, 2).is_err());
        for q in [4u64, 5, 7, 8, 9, 11] {
            for (fl, case, n) in rh_configurations(q) {
                if q == 7 && fl == Flavor::Pgl && case == RhCase::OneFinite && n == 2 {
                    continue;
                }
                let r = rh_check(q, fl, case, n).unwrap();
                assert!(r.ok, "{r:?}");
            }
        }
    }

    #[test]
    fn profiles() {
        let pr = ramification_profile(8, 9, 7).unwrap();
        assert_eq!(pr.branch_places.iter().map(|b| b.inertia_order).collect::<Vec<_>>(), vec![7, 56]);
        assert_eq!(pr.genus, 28);
        let pr = ramification_profile(5, 3, 1).unwrap();
        assert_eq!(pr.branch_places.len(), 1);
        let pr = ramification_profile(27, 7, 13).unwrap();
        assert_eq!(pr.branch_places[1].inertia_order, 351);
        assert_eq!(pr.branch_places[1].filtration.len(), 8);
    }

    #[test]
    fn numerology() {
        assert!(numerology_sweep(200).iter().all(|r| r.holds));
        assert!(top_half_failures(200).is_empty());
    }
}
