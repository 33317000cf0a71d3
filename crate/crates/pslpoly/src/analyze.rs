//! Empirical engines: permutation behaviour on extension fields, exceptionality
//! evidence, functional decomposition search and factorization-pattern statistics.

use crate::error::{precondition, Error, Result};
use crate::gf::{Fe, Field};
use crate::numtheory::{self, gcd};
use crate::poly::Poly;
use crate::psl2::{cycle_type_label, CycleType, Flavor, ProjElem, Psl2};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

/// Default cap on the number of evaluations (or candidates) per step.
pub const DEFAULT_BUDGET: u64 = 1 << 26;
/// Cap on normalized candidates in the exhaustive decomposition search.
pub const SEARCH_LIMIT: u64 = 1 << 28;

/// Bijectivity of `f` on one extension of its coefficient field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PermRow {
    /// Relative degree of the extension.
    pub k: u32,
    pub field_size: String,
    /// `None` when the extension was skipped.
    pub bijective: Option<bool>,
    pub max_fiber: Option<u64>,
    pub skipped: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PermReport {
    pub degree: usize,
    pub base: String,
    pub rows: Vec<PermRow>,
}

impl PermReport {
    pub fn bijective_at(&self, k: u32) -> Option<bool> {
        self.rows.iter().find(|r| r.k == k).and_then(|r| r.bijective)
    }

    /// Extension degrees that were evaluated and found bijective.
    pub fn bijective_degrees(&self) -> Vec<u32> {
        self.rows.iter().filter(|r| r.bijective == Some(true)).map(|r| r.k).collect()
    }
}

fn extension(base: &Field, k: u32) -> Result<Field> {
    let e = base.degree().checked_mul(k).ok_or(Error::FieldTooLarge(base.characteristic(), u32::MAX))?;
    Field::make(base.characteristic(), e)
}

fn ext_size(base: &Field, k: u32) -> Option<u64> {
    numtheory::checked_pow(base.order(), k)
}

fn perm_row(f: &Poly, k: u32, budget: u64) -> Result<PermRow> {
    let base = f.field();
    let size = ext_size(base, k);
    let label = match size {
        Some(s) => s.to_string(),
        None => format!("{}^{}", base.order(), k),
    };
    match size {
        Some(s) if s <= budget => {
            let stats = f.bulk_evaluate(&extension(base, k)?)?;
            Ok(PermRow {
                k,
                field_size: label,
                bijective: Some(stats.bijective()),
                max_fiber: Some(stats.max_fiber),
                skipped: None,
            })
        }
        _ => Ok(PermRow {
            k,
            field_size: label,
            bijective: None,
            max_fiber: None,
            skipped: Some(format!("cost exceeds budget {budget}")),
        }),
    }
}

/// Bijectivity of `f` on the degree-`k` extensions of its field for `k = 1..=max_k`.
pub fn permutation_profile(f: &Poly, max_k: u32, budget: u64) -> Result<PermReport> {
    if budget == 0 {
        return precondition("budget must be at least 1");
    }
    let rows = (1..=max_k).map(|k| perm_row(f, k, budget)).collect::<Result<Vec<_>>>()?;
    Ok(PermReport { degree: f.deg(), base: f.field().to_string(), rows })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Consistent,
    Inconsistent,
}

#[derive(Clone, Debug, Serialize)]
pub struct EvidenceReport {
    pub m_hypothesis: u64,
    pub verdict: Verdict,
    /// Least tested `k` coprime to `m` at which `f` is not bijective.
    pub counterexample_k: Option<u32>,
    /// Least `m` consistent with the observations, if any.
    pub best_fit_m: Option<u64>,
    pub profile: PermReport,
}

/// Consistency of the observations with "bijective at every `k` coprime to `m`".
pub fn consistent_with(profile: &PermReport, m: u64) -> Option<u32> {
    profile
        .rows
        .iter()
        .find(|r| gcd(r.k as u64, m) == 1 && r.bijective == Some(false))
        .map(|r| r.k)
}

/// Least squarefree `m` built from primes `<= max_k` that explains every failure.
pub fn best_fit_m(profile: &PermReport) -> Option<u64> {
    let max_k = profile.rows.iter().map(|r| r.k).max().unwrap_or(1) as u64;
    let primes: Vec<u64> = (2..=max_k).filter(|&n| numtheory::is_prime(n)).collect();
    (0u64..1 << primes.len())
        .map(|mask| primes.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).product::<u64>())
        .filter(|&m| consistent_with(profile, m).is_none())
        .min()
}

pub fn exceptionality_evidence(f: &Poly, m: u64, max_k: u32, budget: u64) -> Result<EvidenceReport> {
    if m == 0 {
        return precondition("m must be positive");
    }
    let profile = permutation_profile(f, max_k, budget)?;
    let counterexample_k = consistent_with(&profile, m);
    Ok(EvidenceReport {
        m_hypothesis: m,
        verdict: if counterexample_k.is_none() { Verdict::Consistent } else { Verdict::Inconsistent },
        counterexample_k,
        best_fit_m: best_fit_m(&profile),
        profile,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateStatus {
    Certified,
    EvidenceOnly,
    Refuted,
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub status: CertificateStatus,
    pub m_hypothesis: u64,
    /// Bijectivity on a field larger than this implies exceptionality (classical bound `deg^4`).
    pub external_threshold: u64,
    /// Extension degree that decided the outcome.
    pub decisive_k: Option<u32>,
    pub tested: Vec<(u32, bool)>,
    pub detail: String,
}

/// Certify exceptionality by bijectivity on a large coprime extension.
///
/// All coprime `k` are tested in increasing order up to the first extension with more
/// than `deg(f)^4` elements; any failure refutes.
pub fn exceptionality_certificate(f: &Poly, m: u64, budget: u64) -> Result<Certificate> {
    if m == 0 {
        return precondition("m must be positive");
    }
    let d = f.deg() as u64;
    let threshold = d.checked_pow(4).unwrap_or(u64::MAX);
    let mut cert = Certificate {
        status: CertificateStatus::EvidenceOnly,
        m_hypothesis: m,
        external_threshold: threshold,
        decisive_k: None,
        tested: Vec::new(),
        detail: String::new(),
    };
    if d == 0 || f.is_zero() {
        cert.status = CertificateStatus::Refuted;
        cert.detail = "constant polynomials are not bijective".into();
        return Ok(cert);
    }
    if d == 1 {
        cert.status = CertificateStatus::Certified;
        cert.detail = "linear polynomials are bijective on every extension".into();
        return Ok(cert);
    }
    let mut k = 1u32;
    loop {
        if gcd(k as u64, m) != 1 {
            k += 1;
            continue;
        }
        let size = match ext_size(f.field(), k) {
            Some(s) if s <= budget => s,
            _ => {
                cert.detail = format!("first coprime extension beyond {threshold} elements exceeds the budget {budget}");
                return Ok(cert);
            }
        };
        let row = perm_row(f, k, budget)?;
        let bij = row.bijective == Some(true);
        cert.tested.push((k, bij));
        if !bij {
            cert.status = CertificateStatus::Refuted;
            cert.decisive_k = Some(k);
            cert.detail = format!("not bijective on the degree-{k} extension, which is coprime to m = {m}");
            return Ok(cert);
        }
        if size > threshold {
            cert.status = CertificateStatus::Certified;
            cert.decisive_k = Some(k);
            cert.detail = format!("bijective on the degree-{k} extension of size {size} > deg^4 = {threshold}");
            return Ok(cert);
        }
        k += 1;
    }
}

/// `f = g ∘ h` with `1 < deg h < deg f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionWitness {
    pub g: Poly,
    pub h: Poly,
    pub field: Field,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    /// Inner factors whose derivative divides `f'`.
    Pruned,
    /// Every normalized inner factor.
    Exhaustive,
}

pub fn verify_decomposition(f: &Poly, g: &Poly, h: &Poly) -> bool {
    g.field() == f.field() && h.field() == f.field() && &g.compose(h) == f
}

fn check_inner_degree(f: &Poly, m: usize) -> Result<()> {
    let d = f.deg();
    if m < 2 || m >= d || !d.is_multiple_of(m) {
        return precondition(format!("inner degree {m} must be a proper divisor (> 1) of {d}"));
    }
    Ok(())
}

fn outer(f: &Poly, h: &Poly) -> Option<DecompositionWitness> {
    f.outer_component(h).map(|g| DecompositionWitness { g, h: h.clone(), field: f.field().clone() })
}

/// Degrees `i < m` whose coefficient in a normalized monic `h` with `h(0) = 0` is free.
fn free_degrees(m: usize) -> Vec<usize> {
    (1..m).collect()
}

/// Search over all monic `h` of degree `m` with `h(0) = 0`, in index order.
pub fn decompose_search_exhaustive(f: &Poly, m: usize, field: &Field) -> Result<Option<DecompositionWitness>> {
    check_inner_degree(f, m)?;
    let f = f.embed_into(field)?;
    let free = free_degrees(m);
    let q = field.order();
    let total = numtheory::checked_pow(q, free.len() as u32).filter(|&t| t <= SEARCH_LIMIT);
    let total = total.ok_or_else(|| {
        Error::BudgetExceeded(format!("{q}^{} normalized candidates exceed {SEARCH_LIMIT}", free.len()))
    })?;
    let candidate = |mut idx: u64| {
        let mut c = vec![field.zero(); m + 1];
        c[m] = field.one();
        for &i in &free {
            c[i] = field.from_index(idx % q);
            idx /= q;
        }
        Poly::new(field, c)
    };
    let hit = (0..total).into_par_iter().find_first(|&idx| f.outer_component(&candidate(idx)).is_some());
    Ok(hit.and_then(|idx| outer(&f, &candidate(idx))))
}

/// Monic divisors of `f` of degree at most `max_deg`, from its factorization.
fn small_divisors(factors: &[(Poly, u32)], max_deg: usize, one: Poly) -> Vec<Poly> {
    let mut out = vec![one];
    for (g, e) in factors {
        let mut next = Vec::new();
        for d in &out {
            let mut acc = d.clone();
            next.push(acc.clone());
            for _ in 0..*e {
                if acc.deg() + g.deg() > max_deg {
                    break;
                }
                acc = &acc * g;
                next.push(acc.clone());
            }
        }
        out = next;
    }
    out
}

/// Search using `h' | f'`: every decomposition `f = g(h)` has `f' = g'(h) h'`.
///
/// Requires `f' != 0`. The coefficients of `h` at degrees divisible by `p` do not
/// appear in `h'` and are enumerated.
pub fn decompose_search_pruned(f: &Poly, m: usize, field: &Field) -> Result<Option<DecompositionWitness>> {
    check_inner_degree(f, m)?;
    let f = f.embed_into(field)?;
    let df = f.derivative();
    if df.is_zero() {
        return precondition("the pruned search needs a nonzero derivative");
    }
    let p = field.characteristic() as usize;
    let q = field.order();
    let hidden: Vec<usize> = (1..m).filter(|i| i % p == 0).collect();
    let hidden_total = numtheory::checked_pow(q, hidden.len() as u32).filter(|&t| t <= SEARCH_LIMIT);
    let hidden_total = hidden_total.ok_or_else(|| Error::BudgetExceeded("too many coefficients at degrees divisible by p".into()))?;
    let divisors = small_divisors(&df.factor(), m - 1, Poly::one(field));
    let mut derivs: Vec<Poly> = Vec::new();
    for d in &divisors {
        if !m.is_multiple_of(p) {
            if d.deg() == m - 1 {
                derivs.push(d.scale(field.from_int(m as u64)));
            }
        } else {
            for c in field.elements().filter(|c| c.0 != 0) {
                derivs.push(d.scale(c));
            }
        }
    }
    let mut bases: Vec<Poly> = Vec::new();
    for dh in derivs {
        if (1..m).any(|i| i % p == 0 && dh.coeff(i - 1).0 != 0) {
            continue;
        }
        let mut c = vec![field.zero(); m + 1];
        c[m] = field.one();
        for i in (1..m).filter(|i| i % p != 0) {
            c[i] = field.div(dh.coeff(i - 1), field.from_int(i as u64))?;
        }
        bases.push(Poly::new(field, c));
    }
    bases.sort_by_key(|h| h.coeffs().iter().map(|&c| field.index(c)).collect::<Vec<_>>());
    bases.dedup();
    let total = bases.len() as u64 * hidden_total;
    let candidate = |idx: u64| {
        let mut c = bases[(idx / hidden_total) as usize].coeffs().to_vec();
        let mut rest = idx % hidden_total;
        for &i in &hidden {
            c[i] = field.from_index(rest % q);
            rest /= q;
        }
        Poly::new(field, c)
    };
    let hit = (0..total).into_par_iter().find_first(|&idx| f.outer_component(&candidate(idx)).is_some());
    Ok(hit.and_then(|idx| outer(&f, &candidate(idx))))
}

/// Decomposition with inner degree `m` over `field`, or `None` if there is none.
pub fn decompose_search(f: &Poly, m: usize, field: &Field, mode: SearchMode) -> Result<Option<DecompositionWitness>> {
    match mode {
        SearchMode::Pruned => decompose_search_pruned(f, m, field),
        SearchMode::Exhaustive => decompose_search_exhaustive(f, m, field),
    }
}

/// Observed frequencies of factorization patterns of `f(X) - c`.
#[derive(Clone, Debug, Serialize)]
pub struct CycleStats {
    pub degree: usize,
    pub field: String,
    pub exhaustive: bool,
    /// Values of `c` used, branch values included.
    pub sample_size: u64,
    /// Counts per ascending factor-degree pattern, over non-branch `c`.
    #[serde(serialize_with = "serialize_patterns")]
    pub counts: BTreeMap<CycleType, u64>,
    /// Values `c` where `f(X) - c` has a repeated factor.
    pub branch_values: Vec<String>,
}

fn serialize_patterns<S: serde::Serializer>(m: &BTreeMap<CycleType, u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(m.len()))?;
    for (k, v) in m {
        map.serialize_entry(&cycle_type_label(k), v)?;
    }
    map.end()
}

impl CycleStats {
    pub fn nonbranch(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn frequencies(&self) -> BTreeMap<CycleType, Ratio<u64>> {
        let total = self.nonbranch().max(1);
        self.counts.iter().map(|(k, &c)| (k.clone(), Ratio::new(c, total))).collect()
    }

    /// CSV with header `pattern,count,frequency`.
    pub fn to_csv(&self) -> String {
        let total = self.nonbranch().max(1) as f64;
        let mut out = String::from("pattern,count,frequency\n");
        for (k, &c) in &self.counts {
            out.push_str(&format!("{},{},{:.6}\n", cycle_type_label(k), c, c as f64 / total));
        }
        out
    }
}

/// Factor `f(X) - c` for `c` in `field`: every `c` when `samples` is `None` or at least
/// the field size, otherwise `samples` values drawn with the given seed.
pub fn frobenius_cycle_stats(f: &Poly, field: &Field, samples: Option<u64>, seed: u64) -> Result<CycleStats> {
    if f.deg() == 0 {
        return precondition("cycle statistics need a nonconstant polynomial");
    }
    let g = f.embed_into(field)?;
    let size = field.order();
    let exhaustive = samples.is_none_or(|s| s >= size);
    let values: Vec<Fe> = if exhaustive {
        field.elements().collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..samples.unwrap()).map(|_| field.from_index(rng.gen_range(0..size))).collect()
    };
    let results: Vec<Option<CycleType>> = values
        .par_iter()
        .map(|&c| {
            let h = &g - &Poly::constant(field, c);
            h.degree_pattern().ok()
        })
        .collect();
    let mut counts = BTreeMap::new();
    let mut branch = Vec::new();
    for (c, r) in values.iter().zip(results) {
        match r {
            Some(pat) => *counts.entry(pat).or_insert(0) += 1,
            None => branch.push(field.format_elem(*c)),
        }
    }
    branch.sort();
    branch.dedup();
    Ok(CycleStats {
        degree: f.deg(),
        field: field.to_string(),
        exhaustive,
        sample_size: values.len() as u64,
        counts,
        branch_values: branch,
    })
}

/// Total-variation distance between observed and predicted pattern frequencies.
pub fn compare_to_group(stats: &CycleStats, predicted: &BTreeMap<CycleType, Ratio<u64>>) -> Result<f64> {
    if let Some(k) = predicted.keys().next() {
        let d: usize = k.iter().sum();
        if d != stats.degree {
            return precondition(format!("degree mismatch: statistics for {} points, prediction for {d}", stats.degree));
        }
    }
    let observed = stats.frequencies();
    let mut keys: Vec<&CycleType> = observed.keys().chain(predicted.keys()).collect();
    keys.sort();
    keys.dedup();
    let zero = Ratio::new(0, 1);
    let dist: f64 = keys
        .into_iter()
        .map(|k| {
            let a = observed.get(k).unwrap_or(&zero);
            let b = predicted.get(k).unwrap_or(&zero);
            let diff = if a > b { a - b } else { b - a };
            *diff.numer() as f64 / *diff.denom() as f64
        })
        .sum();
    Ok(dist / 2.0)
}

/// An `A_4` inside `PSL(2,q)` for `q ≡ ±3 mod 8`, `q` odd: a Klein four-group and an
/// element of order 3 permuting its involutions.
pub fn a4_subgroup(group: &Psl2) -> Result<Vec<ProjElem>> {
    let elems = group.elements(Flavor::Psl);
    let involutions: Vec<&ProjElem> = elems.iter().filter(|x| group.order(x) == 2).collect();
    let a = *involutions.first().ok_or_else(|| Error::Unsupported("no involutions".into()))?;
    let b = involutions
        .iter()
        .find(|b| **b != a && group.mul(a, b) == group.mul(b, a))
        .ok_or_else(|| Error::Unsupported("no Klein four-group".into()))?;
    let c = elems
        .iter()
        .find(|c| group.order(c) == 3 && group.conjugate(c, a) == **b)
        .ok_or_else(|| Error::Unsupported("no element of order 3 normalising the Klein four-group".into()))?;
    let sub = group.generate(&[*a, **b, *c]);
    if sub.len() != 12 {
        return Err(Error::Unsupported(format!("generated subgroup has order {}, not 12", sub.len())));
    }
    Ok(sub)
}
