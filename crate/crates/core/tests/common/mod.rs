//! Seeded instance generators, brute-force oracles and the property suites
//! shared by the property tests and the acceptance gate.
#![allow(dead_code)]

use std::collections::BTreeSet;

use radonbound::constrained::{
    build_constrained, build_star, restrict_map, star_hypothesis_check, star_threshold,
    validate_almost_embedding, validate_constrained, ConstrainedMap,
};
use radonbound::exact::{exact_report, helly, radon, separated, RadonNumber};
use radonbound::families::{gen_intervals, gen_lowerbound, gen_multipath, gen_random};
use radonbound::graphs::subgraph_embed;
use radonbound::{Error, Graph, GraphExpr, Polynomial, Region, SetFamily};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Outcome = Result<usize, String>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `(b^2 - b + 1)(p - 1) + b + 1` on machine integers, kept apart from the
/// library's polynomial version.
pub fn join_value(p: i128, b: i128) -> i128 {
    (b * b - b + 1) * (p - 1) + b + 1
}

pub fn random_family(rng: &mut ChaCha8Rng, max_vertices: usize) -> SetFamily {
    let seed = rng.random();
    let vertices = rng.random_range(1..=max_vertices);
    let prob = rng.random_range(0.2..0.9);
    let sets = rng.random_range(0..=6);
    gen_random(seed, vertices, prob, sets).expect("parameters in range")
}

/// Random expression on exactly `n` vertices that the join rule accepts.
pub fn random_expr(rng: &mut ChaCha8Rng, n: usize) -> GraphExpr {
    if n == 1 {
        return GraphExpr::Complete(1);
    }
    match rng.random_range(0..4) {
        0 => GraphExpr::Complete(n),
        1 => {
            let m = rng.random_range(1..n);
            GraphExpr::Bipartite(m, n - m)
        }
        2 => {
            let a = rng.random_range(1..n);
            GraphExpr::Union(vec![random_expr(rng, a), random_expr(rng, n - a)])
        }
        _ => {
            let k = rng.random_range(1..n);
            let mut cs = vec![random_expr(rng, n - k)];
            cs.extend(std::iter::repeat_n(GraphExpr::Complete(1), k));
            cs.shuffle(rng);
            GraphExpr::Join(cs)
        }
    }
}

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

pub fn random_poly(rng: &mut ChaCha8Rng) -> Polynomial {
    let deg = rng.random_range(0..=8);
    let coeffs: Vec<i64> = (0..=deg).map(|_| rng.random_range(-100..=100)).collect();
    Polynomial::from_coeffs(coeffs)
}

/// Vertex and edge sets of the hull of `s`, recomputed from the members.
pub fn hull_oracle(fam: &SetFamily, s: &BTreeSet<usize>) -> (BTreeSet<usize>, BTreeSet<usize>) {
    let space = fam.space();
    let mut vs: BTreeSet<usize> = (0..space.vertex_count()).collect();
    let mut es: BTreeSet<usize> = (0..space.edge_count()).collect();
    for m in fam.members() {
        let mv: BTreeSet<usize> = m.region.vertices().collect();
        if s.is_subset(&mv) {
            vs = vs.intersection(&mv).copied().collect();
            let me: BTreeSet<usize> = m.region.edges().collect();
            es = es.intersection(&me).copied().collect();
        }
    }
    (vs, es)
}

/// Whether `pts` splits into two nonempty parts with meeting hulls.
pub fn splits_oracle(fam: &SetFamily, pts: &[usize]) -> bool {
    let k = pts.len();
    if k < 2 {
        return false;
    }
    // fix pts[0] on the first side to skip mirrored partitions
    (0..1u32 << (k - 1)).any(|mask| {
        let mut a = BTreeSet::from([pts[0]]);
        let mut b = BTreeSet::new();
        for (i, &p) in pts.iter().enumerate().skip(1) {
            if mask >> (i - 1) & 1 == 1 {
                a.insert(p);
            } else {
                b.insert(p);
            }
        }
        !b.is_empty() && !hull_oracle(fam, &a).0.is_disjoint(&hull_oracle(fam, &b).0)
    })
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0..1u32 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

fn check_anchoring(cm: &ConstrainedMap) -> Result<(), String> {
    for v in 0..cm.graph.vertex_count() {
        if cm.phi_vertex[v] != BTreeSet::from([cm.vertex_image[v]]) {
            return Err(format!("vertex {v} is not anchored at its label"));
        }
    }
    Ok(())
}

/// Extensive, monotone and idempotent hulls, checked against the
/// member-by-member oracle.
pub fn closure_axioms_suite(instances: usize) -> Outcome {
    let mut r = rng(0xC105);
    for i in 0..instances {
        let fam = random_family(&mut r, 12);
        let n = fam.space().vertex_count();
        let mut pool: Vec<usize> = (0..n).collect();
        pool.shuffle(&mut r);
        pool.truncate(6);
        for mask in 0..1u32 << pool.len() {
            let s: BTreeSet<usize> = (0..pool.len()).filter(|j| mask >> j & 1 == 1).map(|j| pool[j]).collect();
            let h = fam.hull(s.iter().copied());
            let (ov, oe) = hull_oracle(&fam, &s);
            if h.vertices().collect::<BTreeSet<_>>() != ov || h.edges().collect::<BTreeSet<_>>() != oe {
                return Err(format!("instance {i}: hull of {s:?} disagrees with the oracle"));
            }
            if !s.iter().all(|&p| h.contains_vertex(p)) {
                return Err(format!("instance {i}: hull of {s:?} is not extensive"));
            }
            if fam.hull(h.vertices()) != h {
                return Err(format!("instance {i}: hull of {s:?} is not idempotent"));
            }
            if !h.is_incidence_closed(fam.space()) {
                return Err(format!("instance {i}: hull of {s:?} is not incidence-closed"));
            }
            for (j, &p) in pool.iter().enumerate() {
                if mask >> j & 1 == 0 {
                    let mut t = s.clone();
                    t.insert(p);
                    if !h.is_subset(&fam.hull(t)) {
                        return Err(format!("instance {i}: hull not monotone adding {p} to {s:?}"));
                    }
                }
            }
        }
    }
    Ok(instances)
}

/// `h + 1 <= r` on random families.
pub fn levi_suite(instances: usize) -> Outcome {
    let mut r = rng(0x1E71);
    for i in 0..instances {
        let fam = random_family(&mut r, 10);
        let rep = exact_report(&fam).map_err(|e| format!("instance {i}: {e}"))?;
        let ok = match rep.radon {
            RadonNumber::Finite(x) => rep.helly < x,
            RadonNumber::Unbounded => true,
        };
        if !ok || !rep.levi_holds {
            return Err(format!("instance {i}: helly {} radon {}", rep.helly, rep.radon));
        }
    }
    Ok(instances)
}

/// A split set stays split after adding a point.
pub fn splitting_monotonicity_suite(instances: usize) -> Outcome {
    let mut r = rng(0x5917);
    let mut done = 0;
    let mut attempts = 0;
    while done < instances {
        attempts += 1;
        if attempts > 50 * instances {
            return Err(format!("only {done} usable instances"));
        }
        let fam = random_family(&mut r, 10);
        let n = fam.space().vertex_count();
        if n < 3 {
            continue;
        }
        let mut pts: Vec<usize> = (0..n).collect();
        pts.shuffle(&mut r);
        let k = r.random_range(2..n.min(7));
        let p = pts[k];
        let mut s: Vec<usize> = pts[..k].to_vec();
        s.sort_unstable();
        let before = splits_oracle(&fam, &s);
        if before != radonbound::exact::splits(&fam, &s) {
            return Err(format!("instance {done}: library and oracle disagree on {s:?}"));
        }
        s.push(p);
        s.sort_unstable();
        if before && !splits_oracle(&fam, &s) {
            return Err(format!("instance {done}: adding {p} undid a split"));
        }
        done += 1;
    }
    Ok(done)
}

/// Associativity, commutativity and distributivity by coefficient equality.
pub fn ring_laws_suite(instances: usize) -> Outcome {
    let mut r = rng(0x2196);
    for i in 0..instances {
        let (p, q, s) = (random_poly(&mut r), random_poly(&mut r), random_poly(&mut r));
        let checks = [
            (&(&p + &q) + &s == &p + &(&q + &s), "additive associativity"),
            (&(&p * &q) * &s == &p * &(&q * &s), "multiplicative associativity"),
            (&p + &q == &q + &p, "additive commutativity"),
            (&p * &q == &q * &p, "multiplicative commutativity"),
            (&p * &(&q + &s) == &(&p * &q) + &(&p * &s), "distributivity"),
        ];
        if let Some((_, law)) = checks.iter().find(|(ok, _)| !ok) {
            return Err(format!("instance {i}: {law} fails"));
        }
        let b = r.random_range(0..50u64);
        if (&p * &q).eval(b) != p.eval(b) * q.eval(b) || (&p + &q).eval(b) != p.eval(b) + q.eval(b) {
            return Err(format!("instance {i}: evaluation is not a homomorphism at {b}"));
        }
    }
    Ok(instances)
}

fn soundness_family(r: &mut ChaCha8Rng) -> SetFamily {
    match r.random_range(0..4) {
        0 => gen_intervals(r.random_range(2..=10)).unwrap(),
        1 => gen_multipath(2, r.random_range(3..=6)).unwrap(),
        2 => gen_lowerbound(r.random_range(3..=7)).unwrap(),
        _ => random_family(r, 12),
    }
}

/// Every successful build passes the validator and is vertex-anchored;
/// restrictions to embedded subgraphs stay constrained.
pub fn constructor_soundness_suite(instances: usize) -> Outcome {
    let mut r = rng(0x50BD);
    let mut done = 0;
    let mut attempts = 0;
    while done < instances {
        attempts += 1;
        if attempts > 100 * instances {
            return Err(format!("only {done} successful builds"));
        }
        let fam = soundness_family(&mut r);
        let size = r.random_range(1..=4);
        let e = random_expr(&mut r, size);
        let cm = match build_constrained(&e, &fam, None) {
            Ok(cm) => cm,
            Err(Error::InsufficientPoints { .. }) => continue,
            Err(err) => return Err(format!("build {done}: {e}: {err}")),
        };
        validate_constrained(&cm, &fam).map_err(|v| format!("build {done}: {e}: {v}"))?;
        check_anchoring(&cm).map_err(|m| format!("build {done}: {e}: {m}"))?;
        if cm.graph != e.realize() {
            return Err(format!("build {done}: {e}: graph differs from the realization"));
        }
        let size = r.random_range(1..=cm.graph.vertex_count());
        let sub = random_graph(&mut r, size, 0.5);
        if let Some(emb) = subgraph_embed(&sub, &cm.graph).map_err(|x| x.to_string())? {
            let rm = restrict_map(&cm, &sub, &emb).map_err(|x| x.to_string())?;
            validate_constrained(&rm, &fam).map_err(|v| format!("restriction {done}: {v}"))?;
        }
        done += 1;
    }
    Ok(done)
}

/// Stars built at the threshold size on families meeting the hypothesis.
pub fn star_soundness_suite(instances: usize) -> Outcome {
    let mut r = rng(0x57A2);
    let mut done = 0;
    let mut attempts = 0;
    while done < instances {
        attempts += 1;
        if attempts > 100 * instances {
            return Err(format!("only {done} stars built"));
        }
        let fam = soundness_family(&mut r);
        let nv = fam.space().vertex_count();
        let b = r.random_range(1..=3);
        let n = r.random_range(1..=4);
        let size = star_threshold(n, b);
        if size > nv.min(12) {
            continue;
        }
        let mut s: Vec<usize> = (0..nv).collect();
        s.shuffle(&mut r);
        s.truncate(size);
        if !star_hypothesis_check(&fam, &s, b).map_err(|e| e.to_string())? {
            continue;
        }
        let star = build_star(&fam, &s, n, b).map_err(|e| format!("star {done} (n={n}, b={b}): {e}"))?;
        validate_constrained(&star.map, &fam).map_err(|v| format!("star {done}: {v}"))?;
        check_anchoring(&star.map)?;
        if star.map.phi_edge.values().any(|l| l.len() > b + 1 || !l.contains(&star.center)) {
            return Err(format!("star {done}: an edge label is too large or misses the center"));
        }
        done += 1;
    }
    Ok(done)
}

/// Builds on separated point sets are almost-embeddings.
pub fn separated_builds_suite(instances: usize) -> Outcome {
    let mut r = rng(0xC2AE);
    let mut done = 0;
    let mut attempts = 0;
    while done < instances {
        attempts += 1;
        if attempts > 200 * instances {
            return Err(format!("only {done} separated builds"));
        }
        let fam = if r.random_bool(0.5) {
            gen_lowerbound(r.random_range(3..=7)).unwrap()
        } else {
            random_family(&mut r, 10)
        };
        let nv = fam.space().vertex_count();
        let size = r.random_range(1..=nv.min(5));
        let e = random_expr(&mut r, size);
        let mut pts: Vec<usize> = (0..nv).collect();
        pts.shuffle(&mut r);
        pts.truncate(r.random_range(1..=nv.min(8)));
        pts.sort_unstable();
        if !separated(&fam, &pts).map_err(|e| e.to_string())? {
            continue;
        }
        let cm = match build_constrained(&e, &fam, Some(&pts)) {
            Ok(cm) => cm,
            Err(Error::InsufficientPoints { .. }) => continue,
            Err(err) => return Err(format!("build {done}: {e}: {err}")),
        };
        validate_constrained(&cm, &fam).map_err(|v| format!("build {done}: {v}"))?;
        validate_almost_embedding(&cm).map_err(|v| format!("build {done}: {e} on {pts:?}: {v}"))?;
        done += 1;
    }
    Ok(done)
}

/// Radon and Helly witnesses re-checked by brute force, including the
/// claim that every set of size `r` splits.
pub fn witness_soundness_suite(instances: usize) -> Outcome {
    let mut r = rng(0x717E);
    for i in 0..instances {
        let fam = random_family(&mut r, 9);
        let rr = radon(&fam).map_err(|e| e.to_string())?;
        if splits_oracle(&fam, &rr.witness) {
            return Err(format!("instance {i}: radon witness {:?} splits", rr.witness));
        }
        let n = fam.space().vertex_count();
        match rr.number {
            RadonNumber::Finite(x) => {
                if rr.witness.len() + 1 != x {
                    return Err(format!("instance {i}: witness size does not match r = {x}"));
                }
                if x <= n && subsets_of_size(n, x).iter().any(|s| !splits_oracle(&fam, s)) {
                    return Err(format!("instance {i}: some {x}-set does not split"));
                }
            }
            RadonNumber::Unbounded => {
                if rr.witness.len() != n {
                    return Err(format!("instance {i}: unbounded without the full vertex set"));
                }
            }
        }
        let h = helly(&fam).map_err(|e| e.to_string())?;
        if let Some(want) = helly_oracle(&fam) {
            if want != h.number {
                return Err(format!("instance {i}: h = {}, brute force says {want}", h.number));
            }
        }
        let meet = |rs: &[&Region]| {
            rs.iter().fold(Region::full(fam.space()), |acc, x| acc.intersect(x))
        };
        let all: Vec<&Region> = h.witness_regions.iter().collect();
        if h.number == 1 {
            if !all.is_empty() && !meet(&all).is_empty() {
                return Err(format!("instance {i}: h = 1 witness is not empty"));
            }
            continue;
        }
        if all.len() != h.number || !meet(&all).is_empty() {
            return Err(format!("instance {i}: helly witness does not have empty intersection"));
        }
        for skip in 0..all.len() {
            let rest: Vec<&Region> = all.iter().enumerate().filter(|(j, _)| *j != skip).map(|(_, x)| *x).collect();
            if meet(&rest).is_empty() {
                return Err(format!("instance {i}: helly witness is not minimal"));
            }
        }
    }
    Ok(instances)
}

/// Helly number by trying every subfamily of distinct closed sets; `None`
/// when there are more than 14 of them.
pub fn helly_oracle(fam: &SetFamily) -> Option<usize> {
    let mut closed = fam.subfamily_intersections().ok()?;
    closed.sort();
    closed.dedup();
    if closed.len() > 14 {
        return None;
    }
    let empty_meet = |mask: u32| {
        (0..closed.len())
            .filter(|j| mask >> j & 1 == 1)
            .fold(Region::full(fam.space()), |acc, j| acc.intersect(&closed[j]))
            .is_empty()
    };
    let mut best = 1;
    for mask in 1u32..1 << closed.len() {
        if empty_meet(mask) && (0..closed.len()).all(|j| mask >> j & 1 == 0 || !empty_meet(mask & !(1 << j))) {
            best = best.max(mask.count_ones() as usize);
        }
    }
    Some(best)
}

/// Intersections of lower-bound members over every nonempty proper index
/// set, against the complete graph on the complement.
pub fn lowerbound_intersections_suite() -> Outcome {
    let mut count = 0;
    for n in 3..=7 {
        let fam = gen_lowerbound(n).unwrap();
        let space = fam.space();
        for mask in 1u32..(1 << n) - 1 {
            let rest: BTreeSet<usize> = (0..n).filter(|i| mask >> i & 1 == 0).collect();
            let got = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| &fam.members()[i].region)
                .fold(Region::full(space), |acc, x| acc.intersect(x));
            let vs: BTreeSet<usize> = got.vertices().collect();
            let es: BTreeSet<(usize, usize)> = got.edges().map(|e| space.edge(e)).collect();
            let want_es: BTreeSet<(usize, usize)> = rest
                .iter()
                .flat_map(|&u| rest.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
                .collect();
            if vs != rest || es != want_es {
                return Err(format!("n = {n}, mask {mask:b}: intersection is not K on the complement"));
            }
            count += 1;
        }
    }
    Ok(count)
}
