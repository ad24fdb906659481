//! Acceptance gate: runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use num_bigint::BigInt;
use radonbound::bounds::{catalog_bound, degree_check, q_poly, q_search, SearchMode, SpaceTag};
use radonbound::constrained::{
    build_constrained, build_star, star_size, star_threshold, validate_almost_embedding, validate_constrained,
};
use radonbound::exact::{exact_report, helly_number, radon, separated, verify_main_theorem, RadonNumber, Verdict};
use radonbound::families::{gen_intervals, gen_lowerbound, gen_multipath};
use radonbound::{parse_expr, Error, Graph, Polynomial};
use rand::seq::SliceRandom;
use rand::Rng;

/// Time limits per criterion.
const LIMIT_POLYNOMIALS: Duration = Duration::from_secs(1);
const LIMIT_INTERVALS: Duration = Duration::from_secs(5);
const LIMIT_LOWER_BOUND: Duration = Duration::from_secs(60);
const LIMIT_PIPELINE: Duration = Duration::from_secs(60);

/// Random cases for the degree and b = 1 criteria.
const RANDOM_CASES: usize = 500;
/// Minimum instances per property suite.
const SUITE_INSTANCES: usize = 200;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);
type Suite = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:.2?}, limit {limit:?}"))?;
    Ok(took)
}

fn poly(text: &str) -> Result<Polynomial, String> {
    let e = parse_expr(text).map_err(|e| e.to_string())?;
    Ok(q_poly(&e).map_err(|e| e.to_string())?.poly)
}

/// Coefficients, lowest power first.
fn coeffs(c: &[i64]) -> Polynomial {
    Polynomial::from_coeffs(c.iter().copied())
}

fn c1_polynomials() -> Check {
    let start = Instant::now();
    let cases: [(&str, &[&str], &[i64]); 4] = [
        ("K3", &["K3", "J(K1,K1,K1)"], &[1, 2, -1, 1]),
        ("K1,3", &["J(K1,U(K1,K1,K1))"], &[3, -1, 2]),
        ("K5", &["J(K2,K1,K1,K1)"], &[1, 4, -6, 10, -9, 7, -3, 1]),
        ("K3,3", &["J(U(K1,K1,K1),K1,K1,K1)"], &[3, -3, 9, -10, 10, -5, 2]),
    ];
    for (name, exprs, want) in cases {
        for e in exprs {
            let got = poly(e)?;
            ensure(got == coeffs(want), || format!("{name} via {e}: got {got}"))?;
        }
    }
    let took = within(LIMIT_POLYNOMIALS, start)?;
    Ok(format!("4 polynomials coefficient-exact in {took:.2?}"))
}

fn c2_base_rules() -> Check {
    ensure(poly("K1")? == Polynomial::one(), || "q(K1) != 1".into())?;
    ensure(poly("K2")? == coeffs(&[1, 1]), || "q(K2) != b + 1".into())?;
    Ok("q(K1) = 1, q(K2) = b + 1".into())
}

fn c3_degree_bound() -> Check {
    let mut r = rng(0xDE63);
    for i in 0..RANDOM_CASES {
        let n = r.random_range(2..=8);
        let e = random_expr(&mut r, n);
        let d = q_poly(&e).map_err(|x| format!("{e}: {x}"))?;
        let deg = d.poly.degree().unwrap_or(0);
        ensure(deg + 3 <= 2 * n, || format!("case {i}: {e} has degree {deg}"))?;
        ensure(matches!(degree_check(&d), Ok(true)), || format!("case {i}: degree_check disagrees on {e}"))?;

        let p = r.random_range(0.1..1.0);
        let g = random_graph(&mut r, n, p);
        let b = r.random_range(1..=6u64);
        for mode in [SearchMode::Value, SearchMode::Asymptotic] {
            let d = q_search(&g, b, mode).map_err(|x| x.to_string())?;
            let deg = d.poly.degree().unwrap_or(0);
            ensure(deg + 3 <= 2 * n, || format!("case {i}: search derivation has degree {deg} on {n} vertices"))?;
            ensure(matches!(degree_check(&d), Ok(true)), || format!("case {i}: degree_check disagrees on search"))?;
        }
    }
    Ok(format!("{RANDOM_CASES} expressions and {RANDOM_CASES} graphs, zero violations"))
}

fn c4_b1_collapse() -> Check {
    // coefficient sums are the values at b = 1
    let k5: i64 = [1, 4, -6, 10, -9, 7, -3, 1].iter().sum();
    let k3: i64 = [1, 2, -1, 1].iter().sum();
    ensure(k5 == 5 && k3 == 3, || "coefficient sums".into())?;
    ensure(poly("J(K2,K1,K1,K1)")?.eval(1) == BigInt::from(k5), || "q_K5(1)".into())?;
    ensure(poly("K3")?.eval(1) == BigInt::from(k3), || "q_K3(1)".into())?;

    let mut r = rng(0xB1C0);
    let mut exprs = 0;
    while exprs < RANDOM_CASES {
        let n = r.random_range(1..=10);
        let e = random_expr(&mut r, n);
        if !e.realize().is_connected() {
            continue;
        }
        let v = q_poly(&e).map_err(|x| x.to_string())?.poly.eval(1);
        ensure(v == BigInt::from(n), || format!("{e}: q(1) = {v}, {n} vertices"))?;
        exprs += 1;
    }
    let mut graphs = 0;
    while graphs < RANDOM_CASES {
        let n = r.random_range(1..=10);
        let p = r.random_range(0.2..1.0);
        let g = random_graph(&mut r, n, p);
        if !g.is_connected() {
            continue;
        }
        let v = q_search(&g, 1, SearchMode::Value).map_err(|x| x.to_string())?.poly.eval(1);
        ensure(v == BigInt::from(n), || format!("search on a connected {n}-vertex graph gives {v}"))?;
        graphs += 1;
    }
    Ok(format!("{exprs} connected expressions and {graphs} connected graphs; q_K5(1) = 5, q_K3(1) = 3"))
}

fn c5_search() -> Check {
    let value = |g: &Graph, b: u64| -> Result<BigInt, String> {
        Ok(q_search(g, b, SearchMode::Value).map_err(|e| e.to_string())?.poly.eval(b))
    };
    let star = Graph::complete_bipartite(1, 3);
    for b in 1..=5i128 {
        // peel the center off three isolated leaves
        let hand = join_value(3, b);
        ensure(hand == 2 * b * b - b + 3, || "hand recursion for the star".into())?;
        let got = value(&star, b as u64)?;
        ensure(got == BigInt::from(hand), || format!("K1,3 at b={b}: {got}, want {hand}"))?;
    }
    // K3,3 -> K2,3 -> K1,3 -> 3K1
    let k33 = (0..3).fold(3, |p, _| join_value(p, 2));
    let got = value(&Graph::complete_bipartite(3, 3), 2)?;
    ensure(k33 == 81 && got == BigInt::from(k33), || format!("K3,3 at 2: {got}"))?;
    // K5 -> K4 -> K3 -> K2 -> K1
    let k5 = (0..4).fold(1, |p, _| join_value(p, 2));
    let got = value(&Graph::complete(5), 2)?;
    ensure(k5 == 81 && got == BigInt::from(k5), || format!("K5 at 2: {got}"))?;
    for n in 1..=7 {
        let got = value(&Graph::complete(n), 1)?;
        ensure(got == BigInt::from(n), || format!("K{n} at 1: {got}"))?;
    }
    Ok("K1,3 for b = 1..5, K3,3 and K5 at 2 give 81, Kn at 1 gives n".into())
}

fn c6_intervals() -> Check {
    let start = Instant::now();
    let fam = gen_intervals(6).map_err(|e| e.to_string())?;
    let rep = exact_report(&fam).map_err(|e| e.to_string())?;
    ensure(rep.radon == RadonNumber::Finite(3), || format!("r = {}", rep.radon))?;
    ensure(rep.helly == 2, || format!("h = {}", rep.helly))?;
    ensure(rep.tc1 == 0, || format!("tc1 = {}", rep.tc1))?;
    ensure(rep.levi_holds, || "Levi fails".into())?;
    let k3 = parse_expr("K3").map_err(|e| e.to_string())?;
    let v = verify_main_theorem(&fam, &k3).map_err(|e| e.to_string())?;
    ensure(v.verdict == Verdict::Pass && v.bound == BigInt::from(3), || {
        format!("verdict {} with bound {}", v.verdict, v.bound)
    })?;
    let took = within(LIMIT_INTERVALS, start)?;
    Ok(format!("r = 3, h = 2, TC1 = 0, Levi holds, K3 PASS with bound 3 in {took:.2?}"))
}

fn c7_lower_bound() -> Check {
    let mut detail = Vec::new();
    for n in [5, 6] {
        let start = Instant::now();
        let fam = gen_lowerbound(n).map_err(|e| e.to_string())?;
        let tc1 = fam.tc1().map_err(|e| e.to_string())?;
        ensure(tc1 == 0, || format!("n = {n}: TC1 = {tc1}"))?;
        let h = helly_number(&fam).map_err(|e| e.to_string())?;
        ensure(h == n, || format!("n = {n}: h = {h}"))?;
        let r = radon(&fam).map_err(|e| e.to_string())?;
        ensure(r.number == RadonNumber::Unbounded, || format!("n = {n}: r = {}", r.number))?;
        let all: Vec<usize> = (0..n).collect();
        ensure(r.witness == all, || format!("n = {n}: witness {:?}", r.witness))?;
        ensure(!splits_oracle(&fam, &r.witness), || format!("n = {n}: the witness splits"))?;
        let took = within(LIMIT_LOWER_BOUND, start)?;
        detail.push(format!("n = {n} in {took:.2?}"));
    }
    Ok(format!("TC1 = 0, h = n, r UNBOUNDED with verified witness ({})", detail.join(", ")))
}

fn c8_pipeline() -> Check {
    let start = Instant::now();
    let fam = gen_lowerbound(6).map_err(|e| e.to_string())?;
    let pts = [0, 1, 2, 3, 4];
    ensure(matches!(separated(&fam, &pts), Ok(true)), || "P is not separated".into())?;
    let e = parse_expr("J(K2,K1,K1,K1)").map_err(|e| e.to_string())?;
    let cm = build_constrained(&e, &fam, Some(&pts)).map_err(|e| e.to_string())?;
    validate_constrained(&cm, &fam).map_err(|v| v.to_string())?;
    validate_almost_embedding(&cm).map_err(|v| v.to_string())?;
    let took = within(LIMIT_PIPELINE, start)?;
    Ok(format!("K5 on 5 separated points is constrained and almost-embedded in {took:.2?}"))
}

fn c9_star_suite() -> Check {
    let mut r = rng(0x57A9);
    let mut built = 0;
    let cases = [
        (gen_intervals(6).map_err(|e| e.to_string())?, 1, 5),
        (gen_multipath(2, 6).map_err(|e| e.to_string())?, 2, 3),
    ];
    for (fam, b, max_n) in &cases {
        let nv = fam.space().vertex_count();
        for n in 1..=*max_n {
            let size = star_threshold(n, *b);
            let mut choices = vec![(0..size).collect::<Vec<_>>()];
            for _ in 0..5 {
                let mut s: Vec<usize> = (0..nv).collect();
                s.shuffle(&mut r);
                s.truncate(size);
                choices.push(s);
            }
            for s in choices {
                let star = build_star(fam, &s, n, *b).map_err(|e| format!("n = {n}, b = {b}, S = {s:?}: {e}"))?;
                validate_constrained(&star.map, fam).map_err(|v| format!("n = {n}, b = {b}: {v}"))?;
                built += 1;
            }
        }
    }
    let mp = gen_multipath(2, 6).map_err(|e| e.to_string())?;
    let all: Vec<usize> = (0..12).collect();
    match build_star(&mp, &all, 2, 1) {
        Err(Error::HypothesisViolated(w)) => {
            ensure(w.len() == 2 && w[0].starts_with('a') && w[1].starts_with('b'), || {
                format!("witness {w:?} is not a cross-path pair")
            })?;
        }
        other => return Err(format!("multipath at b = 1 gave {other:?}")),
    }
    Ok(format!("{built} stars at threshold size validated; multipath at b = 1 rejected"))
}

fn c10_identities() -> Check {
    for n in 1..=20i64 {
        for b in 1..=20i64 {
            let lhs = (n - 1) * (b * b - b + 1) + b + 1;
            let rhs = (n - 1) * (b * b - b) + b + n;
            ensure(lhs == rhs, || format!("size identity at n = {n}, b = {b}"))?;
            let c = b;
            let whole = (n - 1) * (c * c - c) + c + n;
            let non_nb = (n - 1) * ((c - 1) * (c - 1) - (c - 1)) + (c - 1) + n;
            let nb = 2 * (c - 1) * (n - 1) + 1;
            ensure(whole == non_nb + nb, || format!("counting identity at n = {n}, c = {c}"))?;
            let (nu, bu) = (n as usize, b as usize);
            ensure(star_threshold(nu, bu) as i64 == lhs && star_size(nu, bu) as i64 == rhs, || {
                format!("library sizes at n = {n}, b = {b}")
            })?;
        }
    }
    Ok("both identities hold for 1 <= n, b <= 20".into())
}

fn c11_catalog() -> Check {
    let cases = [
        (SpaceTag::R1, 1, 3, "K3"),
        (SpaceTag::R2, 2, 81, "J(K2,K1,K1,K1)"),
        (SpaceTag::Star(3), 2, 12, "J(K1,U(K1,K1,K1,K1))"),
    ];
    for (tag, b, value, winner) in cases {
        let c = catalog_bound(tag, b).map_err(|e| e.to_string())?;
        ensure(c.value == BigInt::from(value) && c.winner.to_string() == winner, || {
            format!("{tag} at {b}: {} via {}", c.value, c.winner)
        })?;
    }
    let r2 = catalog_bound(SpaceTag::R2, 2).map_err(|e| e.to_string())?;
    ensure(r2.all.iter().all(|e| e.value == BigInt::from(81)), || "R2 candidates are not tied".into())?;
    Ok("R1 -> 3 via K3, R2 -> 81 via K5 (tied with K3,3), STAR(3) -> 12 via K1,4".into())
}

fn c12_property_suites() -> Check {
    let suites: [Suite; 9] = [
        ("closure axioms", || closure_axioms_suite(SUITE_INSTANCES)),
        ("Levi inequality", || levi_suite(SUITE_INSTANCES)),
        ("splitting monotonicity", || splitting_monotonicity_suite(SUITE_INSTANCES)),
        ("ring laws", || ring_laws_suite(SUITE_INSTANCES)),
        ("constructor soundness", || constructor_soundness_suite(SUITE_INSTANCES)),
        ("star soundness", || star_soundness_suite(SUITE_INSTANCES)),
        ("separated builds", || separated_builds_suite(SUITE_INSTANCES)),
        ("witness soundness", || witness_soundness_suite(SUITE_INSTANCES)),
        ("lower-bound intersections", lowerbound_intersections_suite),
    ];
    let mut counts = Vec::new();
    for (name, suite) in suites {
        let n = suite().map_err(|m| format!("{name}: {m}"))?;
        ensure(n >= SUITE_INSTANCES, || format!("{name}: only {n} instances"))?;
        counts.push(format!("{name} {n}"));
    }
    Ok(counts.join(", "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("polynomial reproduction", c1_polynomials),
        ("base rules", c2_base_rules),
        ("degree bound", c3_degree_bound),
        ("b = 1 collapse", c4_b1_collapse),
        ("search consistency", c5_search),
        ("exact engine on intervals", c6_intervals),
        ("lower-bound construction", c7_lower_bound),
        ("constructive pipeline", c8_pipeline),
        ("star builder suite", c9_star_suite),
        ("identity suite", c10_identities),
        ("catalog", c11_catalog),
        ("property suites", c12_property_suites),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({why})", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
