//! Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use pslpoly::analyze::{self, CertificateStatus, SearchMode, DEFAULT_BUDGET};
use pslpoly::families::{self, construct, Family, FamilySpec};
use pslpoly::numtheory;
use pslpoly::psl2::{self, Action, CosetAction, Flavor, PermAction, Psl2};
use pslpoly::ramify::{self, Which};
use pslpoly::{Field, Poly};
use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

fn field(p: u64, e: u32) -> Field {
    Field::make(p, e).unwrap()
}

fn build(family: Family, k: &Field) -> Poly {
    construct(&FamilySpec::new(family, k)).unwrap().poly
}

fn within(start: Instant, limit: Duration) -> String {
    let spent = start.elapsed();
    assert!(spent < limit, "took {spent:?}, limit {limit:?}");
    format!("{:.2}s", spent.as_secs_f64())
}

fn fixed_point_tables() -> String {
    let start = Instant::now();
    for q in [7u64, 8, 13] {
        let act = PermAction::new(q).unwrap();
        assert_eq!(act.degree() as u64, (q * q - q) / 2);
        let rows = psl2::fixed_point_table(&act, Flavor::PGammaL);
        let elements: u64 = rows.iter().map(|r| r.count).sum();
        assert_eq!(elements, act.group().group_order(Flavor::PGammaL), "q={q}: every element classified");
        for r in &rows {
            assert!(r.predicted.is_some() && r.matches(), "q={q}: class {:?} observed {:?}, predicted {:?}", r.class, r.observed, r.predicted);
        }
        let inv_fix = |in_psl: bool| rows.iter().find(|r| r.class.order == 2 && r.class.in_psl == in_psl && r.class.frob == 0).map(|r| r.predicted.unwrap());
        match q {
            7 => assert_eq!(inv_fix(true), Some(5)),
            8 => {
                assert_eq!(inv_fix(true), Some(4));
                let field_aut = rows
                    .iter()
                    .filter(|r| r.class.order == 3 && !r.class.in_pgl && act.group().frobenius_order(r.class.frob) == 3)
                    .collect::<Vec<_>>();
                assert!(!field_aut.is_empty());
                assert!(field_aut.iter().all(|r| r.observed.keys().eq([1u64].iter())));
            }
            _ => assert_eq!(inv_fix(true), Some((q - 1) / 2)),
        }
    }
    within(start, Duration::from_secs(10))
}

fn subgroup_census() -> String {
    let start = Instant::now();
    for q in [5u64, 7, 8, 11] {
        let c = psl2::verify_subgroup_census(q).unwrap();
        let o = numtheory::gcd(2, q - 1);
        assert_eq!(c.dihedral_subgroups as u64, (q * q - q) / 2, "q={q}");
        assert_eq!(c.dihedral_order, 2 * (q + 1) / o, "q={q}");
        assert!(c.dihedral_single_class, "q={q}");
        let inv_psl = match (q % 2, q % 4) {
            (0, _) => q * q - 1,
            (_, 3) => q * (q - 1) / 2,
            _ => q * (q + 1) / 2,
        };
        assert_eq!(c.involutions_psl, inv_psl, "q={q}");
        assert_eq!(c.involutions_pgl, if q % 2 == 0 { q * q - 1 } else { q * q }, "q={q}");
    }
    within(start, Duration::from_secs(60))
}

fn riemann_hurwitz() -> String {
    let start = Instant::now();
    let mut checked = 0;
    for q in [7u64, 8] {
        for (fl, case, n) in ramify::rh_configurations(q) {
            let r = match ramify::rh_check(q, fl, case, n) {
                Ok(r) => r,
                Err(pslpoly::Error::Precondition(msg)) if msg.starts_with("not realizable") => continue,
                Err(e) => panic!("q={q} {fl} {case:?} n={n}: {e}"),
            };
            assert_eq!(r.d, (q * q - q) / 2);
            assert_eq!(r.total_index, 2 * r.d as i64 - 2, "q={q} {fl} {case:?} n={n}");
            let one_branch = ((q - 1) * (n - 1) / 2) as i64;
            let two_branch = ((q * q - q) / 2) as i64;
            assert!(r.genus == one_branch || r.genus == two_branch, "q={q} {case:?} n={n}: genus {}", r.genus);
            assert_eq!(r.genus, r.expected_genus, "q={q} {case:?} n={n}");
            checked += 1;
        }
    }
    assert!(checked >= 6);
    format!("{checked} configurations, {}", within(start, Duration::from_secs(10)))
}

fn numerology() -> String {
    use rand::{Rng, SeedableRng};
    let start = Instant::now();
    let rows = ramify::numerology_sweep(200);
    assert!(rows.iter().any(|r| r.part == "i") && rows.iter().any(|r| r.part == "ii"));
    let bad: Vec<_> = rows.iter().filter(|r| !r.holds).map(|r| (r.q, r.n, r.r)).collect();
    assert!(bad.is_empty(), "criterion fails at {bad:?}");
    assert!(ramify::top_half_failures(200).is_empty());
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    let primes = [2u64, 3, 5, 7, 11, 13, 17];
    for _ in 0..10_000 {
        let p = primes[rng.gen_range(0..primes.len())];
        let n = rng.gen_range(1..=80u64);
        let r = rng.gen_range(1..=80u64);
        assert_eq!(ramify::star_criterion(p, n, r), ramify::star_criterion_bruteforce(p, n, r), "p={p} n={n} r={r}");
    }
    format!("{} parameter sets, {}", rows.len(), within(start, Duration::from_secs(30)))
}

fn family_construction() -> String {
    let start = Instant::now();
    let (f2, f3, f7, f11, f13) = (field(2, 1), field(3, 1), field(7, 1), field(11, 1), field(13, 1));
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
    specs.push((Family::Ind7 { n: 1, alpha: f7.from_int(3) }, f7.clone(), 21));
    specs.push((Family::Ind11 { n: 1, alpha: f11.from_int(2) }, f11.clone(), 55));
    for i in 1..=11 {
        let q = families::table_b_q(i).unwrap();
        let deg = ((q * q - q) / 2) as usize;
        assert!([55, 253, 1711].contains(&deg), "f{i} over F_{q}");
        specs.push((Family::TableB { index: i }, field(q, 1), deg));
    }
    for (fam, k, deg) in specs {
        let tag = fam.tag();
        let f = build(fam, &k);
        assert_eq!(f.deg(), deg, "{tag}");
        assert!(!f.derivative().is_zero(), "{tag} has zero derivative");
    }
    for d in 1..=12 {
        let f = build(Family::Dickson { d, alpha: f13.one() }, &f13);
        assert_eq!(f.deg() as u64, d);
        assert!(!f.derivative().is_zero());
        assert!(families::verify_dickson_identity(d, f13.generator(), &f13));
    }
    within(start, Duration::from_secs(30))
}

fn exceptionality() -> String {
    let start = Instant::now();
    let (f2, f3) = (field(2, 1), field(3, 1));
    let char2 = build(Family::Char2 { q: 8, n: 9, alpha: f2.one() }, &f2);
    let p = analyze::permutation_profile(&char2, 7, DEFAULT_BUDGET).unwrap();
    assert_eq!(p.bijective_degrees(), vec![1, 2, 4, 5, 7]);
    let cert = analyze::exceptionality_certificate(&char2, 3, DEFAULT_BUDGET).unwrap();
    assert_eq!(cert.status, CertificateStatus::Certified);
    assert_eq!(cert.decisive_k, Some(20));
    assert!(1u64 << 20 > 28u64.pow(4) && cert.external_threshold == 28u64.pow(4));

    // Bits frozen from an independent brute-force evaluation over F_{3^k}.
    let char3 = build(Family::Char3 { q: 27, n: 7, alpha: f3.from_int(2) }, &f3);
    let bits: Vec<_> = analyze::permutation_profile(&char3, 5, DEFAULT_BUDGET).unwrap().rows.iter().map(|r| r.bijective).collect();
    assert_eq!(bits, vec![Some(true), Some(false), Some(false), Some(false), Some(true)]);

    let control = build(Family::Char3 { q: 27, n: 7, alpha: f3.one() }, &f3);
    let ev = analyze::exceptionality_evidence(&control, 2, 5, DEFAULT_BUDGET).unwrap();
    assert_eq!(ev.verdict, analyze::Verdict::Inconsistent);
    assert!(ev.counterexample_k.is_some());
    format!("char2 certified at 2^20; char3 bijective for k in {{1,5}} of 1..=5; {}", within(start, Duration::from_secs(300)))
}

fn decomposition() -> String {
    let start = Instant::now();
    for (p, alpha, small, ext_m) in [(7u64, 3u64, [3usize, 7], 3usize), (11, 2, [5, 11], 5)] {
        let k = field(p, 1);
        let big = field(p, 2);
        let f = if p == 7 {
            build(Family::Ind7 { n: 1, alpha: k.from_int(alpha) }, &k)
        } else {
            build(Family::Ind11 { n: 1, alpha: k.from_int(alpha) }, &k)
        };
        for m in small {
            let candidates = (p as u128).pow(m as u32 - 1);
            if candidates <= analyze::SEARCH_LIMIT as u128 {
                assert!(analyze::decompose_search(&f, m, &k, SearchMode::Exhaustive).unwrap().is_none(), "p={p} m={m}");
            }
            assert!(analyze::decompose_search(&f, m, &k, SearchMode::Pruned).unwrap().is_none(), "p={p} m={m}");
        }
        let w = analyze::decompose_search(&f, ext_m, &big, SearchMode::Pruned).unwrap().expect("decomposes over the quadratic extension");
        assert_eq!(w.h.deg(), ext_m);
        assert!(analyze::verify_decomposition(&f.embed_into(&big).unwrap(), &w.g, &w.h));
        assert!(w.h.coeffs().iter().any(|&c| !big.is_in_prime_field(c)));
    }
    within(start, Duration::from_secs(900))
}

fn invariant_identities() -> String {
    let start = Instant::now();
    for q in [5u64, 7, 9, 11] {
        let r = families::verify_invariant_identities(q).unwrap();
        assert!(r.ok(), "q={q}: {r:?}");
        assert!(r.h_monic_degree && r.relation && r.dickson_invariant);
        assert!(!r.f_hat.is_empty() && r.f_hat.iter().all(|&(_, ok)| ok));
    }
    within(start, Duration::from_secs(60))
}

fn monodromy() -> String {
    let start = Instant::now();
    let tv = |f: &Poly, ext: &Field, act: &dyn Action, flavor: Flavor| {
        let s = analyze::frobenius_cycle_stats(f, ext, None, 0).unwrap();
        assert!(s.exhaustive);
        let g = act.group();
        let pred = g.coset_cycle_distribution(flavor, flavor, &g.identity(), act).unwrap();
        analyze::compare_to_group(&s, &pred).unwrap()
    };
    let f7 = field(7, 1);
    let a = tv(&build(Family::GenOdd { q: 7, m: 2 }, &f7), &field(7, 2), &PermAction::new(7).unwrap(), Flavor::Psl);
    let f2 = field(2, 1);
    let char2 = build(Family::Char2 { q: 8, n: 9, alpha: f2.one() }, &f2).embed_into(&field(2, 3)).unwrap();
    let b = tv(&char2, &field(2, 6), &PermAction::new(8).unwrap(), Flavor::Pgl);
    let g11 = Psl2::new(11).unwrap();
    let a4 = analyze::a4_subgroup(&g11).unwrap();
    assert_eq!(a4.len(), 12);
    let act = CosetAction::new(&g11, Flavor::Psl, &a4).unwrap();
    assert_eq!(act.degree(), 55);
    let c = tv(&build(Family::TableB { index: 1 }, &field(11, 1)), &field(11, 2), &act, Flavor::Psl);
    for v in [a, b, c] {
        assert!(v < 0.15, "total variation {v}");
    }
    format!("total variation {a:.4}, {b:.4}, {c:.4}; {}", within(start, Duration::from_secs(600)))
}

fn artin_schreier() -> String {
    let start = Instant::now();
    for (q, n, r) in [(8u64, 9u64, 7u64), (27, 7, 13), (8, 3, 7)] {
        let (p, e) = numtheory::prime_power(q).unwrap();
        let k = field(p, e);
        assert_eq!(ramify::jump_n(&Poly::monomial(&k, k.one(), n as usize), q).unwrap(), n);
        let ord = numtheory::mult_order(q, r).unwrap() as u32;
        assert!(ramify::galois_over_wr(q, n, r, &field(p, e * ord)));
        let prof = ramify::ramification_profile(q, n, r).unwrap();
        let inf = prof.branch_places.last().unwrap();
        assert_eq!(inf.inertia_order, q * r);
        assert_eq!(inf.filtration.len() as u64, n + 1);
        assert!(inf.filtration[1..].iter().all(|&x| x == q));
        assert!(prof.branch_places.iter().any(|b| b.inertia_order == r && b.filtration.len() == 1));
    }
    for (p, e, n, r, which, ext) in [(2u64, 3u32, 5u64, 7u64, Which::I, 1u32), (2, 6, 3, 7, Which::Ii, 2)] {
        let k = field(p, e * ext);
        let z = ramify::counterexample_z(p, e, n, r, which, &k).unwrap().expect("counterexample exists");
        let rep = ramify::check_counterexample(&z, p.pow(e), n, r).unwrap();
        assert!(rep.galois && rep.jump == Some(n) && !rep.monomial_equivalent, "{rep:?}");
    }
    within(start, Duration::from_secs(30))
}

type Criterion = (&'static str, fn() -> String);

fn main() {
    let criteria: [Criterion; 10] = [
        ("fixed-point tables q = 7, 8, 13", fixed_point_tables),
        ("subgroup census q = 5, 7, 8, 11", subgroup_census),
        ("Riemann-Hurwitz and genus q = 7, 8", riemann_hurwitz),
        ("ramification numerology 4 <= q <= 200", numerology),
        ("family construction", family_construction),
        ("exceptionality evidence", exceptionality),
        ("decomposition over k and its quadratic extension", decomposition),
        ("invariant identities q = 5, 7, 9, 11", invariant_identities),
        ("monodromy statistics", monodromy),
        ("Artin-Schreier engine", artin_schreier),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match panic::catch_unwind(AssertUnwindSafe(check)) {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(e) => {
                failed += 1;
                let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default();
                println!("FAIL {:>2} {name}: {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
