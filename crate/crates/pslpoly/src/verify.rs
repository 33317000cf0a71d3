//! Self-check suite: every published count, identity and example reproduced with
//! exact arithmetic, grouped by module.

use crate::analyze::{self, SearchMode, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::families::{self, construct, Family, FamilySpec};
use crate::gf::Field;
use crate::numtheory;
use crate::poly::Poly;
use crate::psl2::{self, Action, CosetAction, Flavor, PermAction, Psl2};
use crate::ramify::{self, RhCase, Which};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    Group,
    Ramify,
    Families,
    Analyze,
    All,
}

impl Scope {
    pub fn parse(s: &str) -> Result<Scope> {
        match s {
            "group" => Ok(Scope::Group),
            "ramify" => Ok(Scope::Ramify),
            "families" => Ok(Scope::Families),
            "analyze" => Ok(Scope::Analyze),
            "all" => Ok(Scope::All),
            _ => Err(Error::Precondition(format!("unknown scope '{s}' (group, ramify, families, analyze, all)"))),
        }
    }

    fn includes(self, other: Scope) -> bool {
        self == Scope::All || self == other
    }
}

/// Outcome of one assertion.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub id: String,
    pub scope: Scope,
    /// The published statement the assertion reproduces.
    pub citation: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Outcome = Result<(bool, String)>;

fn run(out: &mut Vec<Check>, id: &str, scope: Scope, citation: &'static str, f: impl FnOnce() -> Outcome) {
    let (passed, detail) = match f() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    out.push(Check { id: id.to_string(), scope, citation, passed, detail });
}

fn prime_field(p: u64) -> Result<Field> {
    Field::make(p, 1)
}

fn field_of(q: u64) -> Result<Field> {
    let (p, e) = numtheory::prime_power(q).ok_or_else(|| Error::Precondition(format!("{q} is not a prime power")))?;
    Field::make(p, e)
}

fn build(family: Family, k: &Field) -> Result<Poly> {
    Ok(construct(&FamilySpec::new(family, k))?.poly)
}

fn fixed_points(q: u64) -> Outcome {
    let act = PermAction::new(q)?;
    let rows = psl2::fixed_point_table(&act, Flavor::PGammaL);
    let bad: Vec<String> = rows.iter().filter(|r| !r.matches()).map(|r| format!("{:?}", r.class)).collect();
    let unpredicted = rows.iter().filter(|r| r.predicted.is_none()).count();
    let g = act.group();
    let involution_in_l = rows
        .iter()
        .find(|r| r.class.order == 2 && r.class.in_psl)
        .map(|r| r.observed.keys().copied().collect::<Vec<_>>());
    let expected_inv = if q.is_multiple_of(2) { q / 2 } else if q % 4 == 3 { (q + 3) / 2 } else { (q - 1) / 2 };
    let mut ok = bad.is_empty() && unpredicted == 0 && involution_in_l == Some(vec![expected_inv]);
    let mut detail = format!(
        "{} classes of PΓL(2,{q}) on {} points, all counts match; involutions of L fix {expected_inv}",
        rows.len(),
        act.degree()
    );
    if q == 8 {
        let field_aut = rows
            .iter()
            .filter(|r| !r.class.in_pgl && r.class.order == 3 && g.frobenius_order(r.class.frob) == 3)
            .all(|r| r.observed.keys().eq([1u64].iter()));
        ok &= field_aut;
        detail.push_str("; order-3 field automorphisms fix 1");
    }
    if !bad.is_empty() || unpredicted > 0 {
        detail = format!("mismatched classes {bad:?}, unpredicted classes {unpredicted}");
    }
    Ok((ok, detail))
}

fn census(q: u64) -> Outcome {
    let c = psl2::verify_subgroup_census(q)?;
    let inv_l = if q.is_multiple_of(2) {
        q * q - 1
    } else if q % 4 == 3 {
        (q * q - q) / 2
    } else {
        (q * q + q) / 2
    };
    let inv_pgl = if q.is_multiple_of(2) { q * q - 1 } else { q * q };
    let ok = c.dihedral_subgroups as u64 == (q * q - q) / 2
        && c.dihedral_single_class
        && c.involutions_psl == inv_l
        && c.involutions_pgl == inv_pgl
        && c.psl_involution_classes == 1
        && c.pgl_involution_classes == if q.is_multiple_of(2) { 1 } else { 2 };
    Ok((
        ok,
        format!(
            "{} dihedral subgroups of order {} in one class; {} involutions in L, {} in PGL",
            c.dihedral_subgroups, c.dihedral_order, c.involutions_psl, c.involutions_pgl
        ),
    ))
}

fn riemann_hurwitz(q: u64) -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (fl, case, n) in ramify::rh_configurations(q) {
        match ramify::rh_check(q, fl, case, n) {
            Ok(r) => {
                ok &= r.ok;
                parts.push(format!("{fl} {case:?} n={n}: Σind={} g={}", r.total_index, r.genus));
            }
            Err(Error::Precondition(msg)) if msg.starts_with("not realizable") => {
                parts.push(format!("{fl} {case:?} n={n}: skipped ({msg})"));
            }
            Err(e) => return Err(e),
        }
    }
    Ok((ok, parts.join("; ")))
}

fn numerology() -> Outcome {
    let rows = ramify::numerology_sweep(200);
    let failing = rows.iter().filter(|r| !r.holds).count();
    let top = ramify::top_half_failures(200);
    Ok((failing == 0 && top.is_empty(), format!("{} parameter sets for 4 <= q <= 200, {failing} failures; top-half failures {top:?}", rows.len())))
}

fn star_random(trials: usize, seed: u64) -> Outcome {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let primes = [2u64, 3, 5, 7, 11, 13];
    let mut disagree = 0;
    for _ in 0..trials {
        let p = primes[rng.gen_range(0..primes.len())];
        let r = rng.gen_range(1..=60u64);
        let n = rng.gen_range(1..=60u64);
        if ramify::star_criterion(p, n, r) != ramify::star_criterion_bruteforce(p, n, r) {
            disagree += 1;
        }
    }
    Ok((disagree == 0, format!("{trials} random triples, {disagree} disagreements")))
}

fn profile_agrees(q: u64, n: u64, r: u64) -> Outcome {
    let pr = ramify::ramification_profile(q, n, r)?;
    let k = field_of(q)?;
    let z = Poly::monomial(&k, k.one(), n as usize);
    let jump = ramify::jump_n(&z, q)?;
    let ord = numtheory::mult_order(q, r).unwrap_or(1) as u32;
    let (p, e) = numtheory::prime_power(q).unwrap();
    let big = Field::make(p, e * ord)?;
    let galois = ramify::galois_over_wr(q, n, r, &big);
    let inf = pr.branch_places.last().unwrap();
    let ok = jump == n && galois && inf.inertia_order == q * r && inf.filtration.len() as u64 == n + 1;
    Ok((ok, format!("jump {jump}, Galois over k(w^{r}), inertia {} at infinity, genus {}", inf.inertia_order, pr.genus)))
}

fn counterexample(p: u64, e: u32, n: u64, r: u64, which: Which, ext: u32) -> Outcome {
    let k = Field::make(p, e * ext)?;
    let q = p.pow(e);
    let Some(z) = ramify::counterexample_z(p, e, n, r, which, &k)? else {
        return Ok((false, "no counterexample produced".into()));
    };
    let rep = ramify::check_counterexample(&z, q, n, r)?;
    let ok = rep.galois && rep.jump == Some(n) && !rep.monomial_equivalent;
    Ok((ok, format!("z = {}: Galois {}, jump {:?}, equivalent to a monomial {}", rep.z, rep.galois, rep.jump, rep.monomial_equivalent)))
}

fn family_degrees() -> Outcome {
    let f2 = prime_field(2)?;
    let f3 = prime_field(3)?;
    let f7 = prime_field(7)?;
    let f11 = prime_field(11)?;
    let mut specs: Vec<(Family, Field, usize)> = Vec::new();
    for m in [1, 2, 4] {
        specs.push((Family::GenOdd { q: 7, m }, f7.clone(), 21));
    }
    for m in [1, 3, 9] {
        specs.push((Family::GenEven { q: 8, m }, f2.clone(), 28));
        specs.push((Family::Char2 { q: 8, n: m, alpha: f2.one() }, f2.clone(), 28));
    }
    for n in [1, 7] {
        specs.push((Family::Char3 { q: 27, n, alpha: f3.from_int(2) }, f3.clone(), 351));
    }
    specs.push((Family::Char2Footnote { q: 8, alpha: f2.one(), beta: f2.zero() }, f2.clone(), 28));
    for n in [1, 2] {
        specs.push((Family::Ind7 { n, alpha: f7.from_int(3) }, f7.clone(), 21));
        specs.push((Family::Ind11 { n, alpha: f11.from_int(2) }, f11.clone(), 55));
    }
    for i in 1..=11 {
        let q = families::table_b_q(i)?;
        specs.push((Family::TableB { index: i }, prime_field(q)?, ((q * q - q) / 2) as usize));
    }
    let f13 = prime_field(13)?;
    for d in 1..=12 {
        specs.push((Family::Dickson { d, alpha: f13.one() }, f13.clone(), d as usize));
    }
    let total = specs.len();
    for (fam, k, deg) in specs {
        let tag = fam.tag();
        let f = build(fam, &k)?;
        if f.deg() != deg || f.derivative().is_zero() {
            return Ok((false, format!("{tag} has degree {} (expected {deg})", f.deg())));
        }
    }
    Ok((true, format!("{total} members constructed with exact divisions, expected degrees and f' != 0")))
}

fn dickson_identities() -> Outcome {
    let mut ok = true;
    for k in [prime_field(7)?, Field::make(3, 2)?] {
        let alpha = k.generator();
        for d in 1..=12 {
            ok &= families::verify_dickson_identity(d, alpha, &k);
        }
        for a in 1..=4u64 {
            for b in 1..=4u64 {
                let lhs = families::dickson(a * b, alpha, &k);
                let rhs = families::dickson(a, k.pow(alpha, b), &k).compose(&families::dickson(b, alpha, &k));
                ok &= lhs == rhs;
            }
        }
    }
    Ok((ok, "D_d(Y+α/Y) = Y^d+(α/Y)^d for d <= 12 and D_ab = D_a(D_b, α^b) for a, b <= 4 over F_7, F_9".into()))
}

fn invariants(q: u64) -> Outcome {
    let r = families::verify_invariant_identities(q)?;
    Ok((r.ok(), format!("orbit sum, invariance, h monic of degree {}, relation, f̂ for n in {:?}", (q * q - q) / 2, r.f_hat.iter().map(|x| x.0).collect::<Vec<_>>())))
}

fn bijectivity(f: &Poly, max_k: u32, expected: &[u32]) -> Outcome {
    let r = analyze::permutation_profile(f, max_k, DEFAULT_BUDGET)?;
    let got = r.bijective_degrees();
    Ok((got == expected, format!("bijective for k in {got:?} (k <= {max_k})")))
}

fn char2_certificate() -> Outcome {
    let f2 = prime_field(2)?;
    let f = build(Family::Char2 { q: 8, n: 9, alpha: f2.one() }, &f2)?;
    let c = analyze::exceptionality_certificate(&f, 3, DEFAULT_BUDGET)?;
    Ok((c.status == analyze::CertificateStatus::Certified && c.decisive_k == Some(20), c.detail))
}

fn char3_negative() -> Outcome {
    let f3 = prime_field(3)?;
    let f = build(Family::Char3 { q: 27, n: 7, alpha: f3.one() }, &f3)?;
    let r = analyze::exceptionality_evidence(&f, 6, 5, DEFAULT_BUDGET)?;
    Ok((
        r.counterexample_k == Some(1) && r.best_fit_m.is_none(),
        format!("not bijective at k = {:?}, so no m explains the data", r.counterexample_k),
    ))
}

fn decomposition(f: &Poly, degrees: &[usize], base: &Field, ext: &Field, ext_degree: usize) -> Outcome {
    for &m in degrees {
        if analyze::decompose_search(f, m, base, SearchMode::Pruned)?.is_some() {
            return Ok((false, format!("unexpected decomposition with inner degree {m} over {base}")));
        }
    }
    let Some(w) = analyze::decompose_search(f, ext_degree, ext, SearchMode::Pruned)? else {
        return Ok((false, format!("no decomposition with inner degree {ext_degree} over {ext}")));
    };
    let ok = analyze::verify_decomposition(&f.embed_into(ext)?, &w.g, &w.h);
    Ok((ok, format!("indecomposable over {base} for inner degrees {degrees:?}; over {ext}: h = {}", w.h.body_text())))
}

fn monodromy(f: &Poly, ext: &Field, act: &dyn Action, flavor: Flavor) -> Outcome {
    let s = analyze::frobenius_cycle_stats(f, ext, None, 0)?;
    let g = act.group();
    let pred = g.coset_cycle_distribution(flavor, flavor, &g.identity(), act)?;
    let tv = analyze::compare_to_group(&s, &pred)?;
    Ok((tv < 0.15, format!("total variation {tv:.4} over {} values of c ({} branch)", s.sample_size, s.branch_values.len())))
}

/// Run the checks selected by `scope`, in a fixed order.
pub fn run_suite(scope: Scope) -> Vec<Check> {
    let mut out = Vec::new();
    let o = &mut out;
    if scope.includes(Scope::Group) {
        for q in [7, 8, 13] {
            run(o, &format!("fixed-points-q{q}"), Scope::Group, "fixed points of every element of PΓL(2,q) on the (q^2-q)/2 points", || fixed_points(q));
        }
        for q in [5, 7, 8, 11] {
            run(o, &format!("census-q{q}"), Scope::Group, "dihedral point stabilisers form one class of (q^2-q)/2 subgroups; involution counts", || census(q));
        }
    }
    if scope.includes(Scope::Ramify) {
        for q in [7, 8] {
            run(o, &format!("riemann-hurwitz-q{q}"), Scope::Ramify, "branch configurations: Σ ind = 2d-2 and genus of the Galois closure", || riemann_hurwitz(q));
        }
        run(o, "numerology", Scope::Ramify, "criterion (*) holds for the parameters of degree-(q^2-q)/2 covers; residues lie in the top half", numerology);
        run(o, "star-bruteforce", Scope::Ramify, "criterion (*) matches its definition", || star_random(10_000, 0));
        for (q, n, r) in [(8, 9, 7), (27, 7, 13), (8, 3, 7)] {
            run(o, &format!("profile-{q}-{n}-{r}"), Scope::Ramify, "v^q - v = w^n over k(w^r): one jump after the n-th group, index r over 0 and qr over infinity", || profile_agrees(q, n, r));
        }
        run(o, "counterexample-i", Scope::Ramify, "failure of (*) gives a second extension with the same ramification", || counterexample(2, 3, 5, 7, Which::I, 1));
        run(o, "counterexample-ii", Scope::Ramify, "k ⊋ F_q with the wrong order of p gives a second extension", || counterexample(2, 6, 3, 7, Which::Ii, 2));
    }
    if scope.includes(Scope::Families) {
        run(o, "family-construction", Scope::Families, "explicit exceptional and indecomposable polynomials of degree (q^2-q)/2", family_degrees);
        run(o, "dickson", Scope::Families, "Dickson polynomials D_d(Y+α/Y, α) = Y^d + (α/Y)^d", dickson_identities);
        for q in [5, 7, 9, 11] {
            run(o, &format!("invariants-q{q}"), Scope::Families, "invariant field of PGL(2,q) acting on k(v) and the relation h(x̂) = û^n", || invariants(q));
        }
    }
    if scope.includes(Scope::Analyze) {
        run(o, "char2-bijective", Scope::Analyze, "exceptional over F_2: bijective on F_{2^k} for k prime to 3", || {
            let f2 = prime_field(2)?;
            bijectivity(&build(Family::Char2 { q: 8, n: 9, alpha: f2.one() }, &f2)?, 7, &[1, 2, 4, 5, 7])
        });
        run(o, "char2-certificate", Scope::Analyze, "bijective on a coprime extension larger than deg^4", char2_certificate);
        run(o, "char3-bijective", Scope::Analyze, "exceptional over F_{3^k} exactly when F_{3^k} ∩ F_27 = F_3 and α has even coset order", || {
            let f3 = prime_field(3)?;
            bijectivity(&build(Family::Char3 { q: 27, n: 7, alpha: f3.from_int(2) }, &f3)?, 5, &[1, 5])
        });
        run(o, "char3-negative-control", Scope::Analyze, "α of odd coset order gives a non-exceptional polynomial", char3_negative);
        run(o, "ind7-decomposition", Scope::Analyze, "indecomposable over k but decomposes over an extension (degree 21)", || {
            let f7 = prime_field(7)?;
            let f = build(Family::Ind7 { n: 1, alpha: f7.from_int(3) }, &f7)?;
            decomposition(&f, &[3, 7], &f7, &Field::make(7, 2)?, 3)
        });
        run(o, "ind11-decomposition", Scope::Analyze, "indecomposable over k but decomposes over an extension (degree 55)", || {
            let f11 = prime_field(11)?;
            let f = build(Family::Ind11 { n: 1, alpha: f11.from_int(2) }, &f11)?;
            decomposition(&f, &[5, 11], &f11, &Field::make(11, 2)?, 5)
        });
        run(o, "monodromy-gen-odd-q7", Scope::Analyze, "geometric monodromy PSL(2,7) on 21 points", || {
            let f7 = prime_field(7)?;
            let act = PermAction::new(7)?;
            monodromy(&build(Family::GenOdd { q: 7, m: 2 }, &f7)?, &Field::make(7, 2)?, &act, Flavor::Psl)
        });
        run(o, "monodromy-char2-q8", Scope::Analyze, "geometric monodromy PGL(2,8) on 28 points", || {
            let f2 = prime_field(2)?;
            let act = PermAction::new(8)?;
            let f = build(Family::Char2 { q: 8, n: 9, alpha: f2.one() }, &f2)?.embed_into(&Field::make(2, 3)?)?;
            monodromy(&f, &Field::make(2, 6)?, &act, Flavor::Pgl)
        });
        run(o, "monodromy-table-b-1", Scope::Analyze, "PSL(2,11) on 55 points with point stabiliser A_4", || {
            let f11 = prime_field(11)?;
            let g = Psl2::new(11)?;
            let act = CosetAction::new(&g, Flavor::Psl, &analyze::a4_subgroup(&g)?)?;
            monodromy(&build(Family::TableB { index: 1 }, &f11)?, &Field::make(11, 2)?, &act, Flavor::Psl)
        });
    }
    out
}

/// Check `RhCase` strings stay in sync with the parser used by the CLI.
pub fn rh_case_names() -> [(&'static str, RhCase); 4] {
    [
        ("one-finite", RhCase::OneFinite),
        ("no-finite", RhCase::NoFinite),
        ("wild-order-two", RhCase::WildOrderTwo),
        ("two-finite", RhCase::TwoFinite),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_and_ramify_scopes_pass() {
        for scope in [Scope::Group, Scope::Ramify] {
            for c in run_suite(scope) {
                assert!(c.passed, "{}: {}", c.id, c.detail);
            }
        }
    }

    #[test]
    fn scope_names() {
        assert_eq!(Scope::parse("all").unwrap(), Scope::All);
        assert!(Scope::parse("everything").is_err());
        for (s, c) in rh_case_names() {
            assert_eq!(RhCase::parse(s).unwrap(), c);
        }
    }
}
