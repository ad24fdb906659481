//! Exact Radon and Helly numbers of finite families by enumeration, the
//! separation test, the Levi inequality and the end-to-end bound check.

use std::fmt;

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use serde::Serialize;

use crate::bounds::q_poly;
use crate::error::{Error, Result};
use crate::graphs::GraphExpr;
use crate::polynomial::Polynomial;
use crate::space::{Region, SetFamily};

pub const MAX_RADON_VERTICES: usize = 16;
pub const MAX_SEPARATED_POINTS: usize = 12;
/// Limit on meet-irreducible members searched for Helly witnesses.
pub const MAX_HELLY_GENERATORS: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum RadonNumber {
    Finite(usize),
    /// Even the whole vertex set admits no splitting.
    Unbounded,
}

impl RadonNumber {
    pub fn at_most(&self, bound: &BigInt) -> bool {
        match self {
            RadonNumber::Finite(r) => BigInt::from(*r) <= *bound,
            RadonNumber::Unbounded => false,
        }
    }
}

impl fmt::Display for RadonNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RadonNumber::Finite(r) => write!(f, "{r}"),
            RadonNumber::Unbounded => f.write_str("UNBOUNDED"),
        }
    }
}

impl Serialize for RadonNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            RadonNumber::Finite(r) => s.serialize_u64(*r as u64),
            RadonNumber::Unbounded => s.serialize_str("UNBOUNDED"),
        }
    }
}

/// Whether `points` can be split into two nonempty parts whose hulls meet,
/// by trying every partition. Returns the first such split.
pub fn find_split(fam: &SetFamily, points: &[usize]) -> Option<(Vec<usize>, Vec<usize>)> {
    let k = points.len();
    if k < 2 || k >= usize::BITS as usize {
        return None;
    }
    // keep points[0] in the first part so each partition is tried once
    for mask in 0..(1usize << (k - 1)) {
        let full = (mask << 1) | 1;
        if full == (1 << k) - 1 {
            continue;
        }
        let (a, b): (Vec<usize>, Vec<usize>) = {
            let mut a = Vec::new();
            let mut b = Vec::new();
            for (i, &p) in points.iter().enumerate() {
                if full >> i & 1 == 1 {
                    a.push(p)
                } else {
                    b.push(p)
                }
            }
            (a, b)
        };
        let ha = fam.hull(a.iter().copied());
        let hb = fam.hull(b.iter().copied());
        if !ha.is_disjoint(&hb) {
            return Some((a, b));
        }
    }
    None
}

pub fn splits(fam: &SetFamily, points: &[usize]) -> bool {
    find_split(fam, points).is_some()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadonResult {
    pub number: RadonNumber,
    /// A largest set that admits no splitting, as vertex indices.
    pub witness: Vec<usize>,
}

/// Vertex masks of distinct member vertex sets.
fn member_masks(fam: &SetFamily) -> Vec<u32> {
    let mut masks: Vec<u32> = fam
        .members()
        .iter()
        .map(|m| m.region.vertices().fold(0u32, |acc, v| acc | 1 << v))
        .collect();
    masks.sort_unstable();
    masks.dedup();
    masks
}

/// Smallest `r` such that every `r`-subset of vertices splits.
///
/// Splitting is monotone under adding points, so `r` is one more than the
/// size of a largest unsplittable set.
pub fn radon(fam: &SetFamily) -> Result<RadonResult> {
    let n = fam.space().vertex_count();
    if n > MAX_RADON_VERTICES {
        return Err(Error::TooLarge(format!(
            "Radon number needs at most {MAX_RADON_VERTICES} vertices, space has {n}"
        )));
    }
    let full: u32 = if n == 0 { 0 } else { u32::MAX >> (32 - n) };
    let members = member_masks(fam);
    let size = 1usize << n;
    let hull: Vec<u32> = (0..size as u32)
        .map(|s| {
            members
                .iter()
                .filter(|&&m| s & !m == 0)
                .fold(full, |acc, &m| acc & m)
        })
        .collect();

    let mut split = vec![false; size];
    let mut best: (u32, u32) = (0, 0);
    for s in 1..size as u32 {
        let ok = if s.count_ones() < 2 {
            false
        } else if (0..n).any(|p| s >> p & 1 == 1 && split[(s & !(1 << p)) as usize]) {
            true
        } else {
            let low = s & s.wrapping_neg();
            let rest = s ^ low;
            // parts are low|sub and the complement; sub ranges over proper submasks of rest
            let mut sub = rest;
            let mut found = false;
            loop {
                sub = sub.wrapping_sub(1) & rest;
                let a = low | sub;
                let b = s ^ a;
                if hull[a as usize] & hull[b as usize] != 0 {
                    found = true;
                    break;
                }
                if sub == 0 {
                    break;
                }
            }
            found
        };
        split[s as usize] = ok;
        if !ok && s.count_ones() > best.0 {
            best = (s.count_ones(), s);
        }
    }
    let witness: Vec<usize> = (0..n).filter(|&v| best.1 >> v & 1 == 1).collect();
    let number = if n == 0 || best.1 == full {
        RadonNumber::Unbounded
    } else {
        RadonNumber::Finite(best.0 as usize + 1)
    };
    Ok(RadonResult { number, witness })
}

pub fn radon_number(fam: &SetFamily) -> Result<RadonNumber> {
    Ok(radon(fam)?.number)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HellyResult {
    pub number: usize,
    /// Inclusion-minimal subfamily with empty intersection, as member names.
    pub witness: Vec<String>,
    pub witness_regions: Vec<Region>,
}

/// Members that are not the intersection of the members strictly containing them.
/// Every closed set other than the whole space is an intersection of these.
fn meet_irreducible(fam: &SetFamily) -> Vec<(String, Region)> {
    let mut distinct: Vec<(String, Region)> = Vec::new();
    for m in fam.members() {
        if !distinct.iter().any(|(_, r)| *r == m.region) {
            distinct.push((m.name.clone(), m.region.clone()));
        }
    }
    let full = Region::full(fam.space());
    distinct
        .iter()
        .filter(|(_, r)| {
            let above = distinct
                .iter()
                .filter(|(_, o)| o != r && r.is_subset(o))
                .fold(full.clone(), |acc, (_, o)| acc.intersect(o));
            above != *r
        })
        .cloned()
        .collect()
}

/// Largest inclusion-minimal family of closed sets with empty intersection;
/// 1 when no family of closed sets has empty intersection.
///
/// The search runs over meet-irreducible members only: a minimal empty family
/// of closed sets can be traded for one of generators at least as large.
pub fn helly(fam: &SetFamily) -> Result<HellyResult> {
    let gens = meet_irreducible(fam);
    if gens.len() > MAX_HELLY_GENERATORS {
        return Err(Error::TooLarge(format!(
            "{} meet-irreducible members, the limit is {MAX_HELLY_GENERATORS}",
            gens.len()
        )));
    }
    let mut best: Vec<usize> = Vec::new();
    let mut chosen = Vec::new();
    search_minimal_empty(&gens, 0, &Region::full(fam.space()), &mut chosen, &mut best);
    if best.is_empty() {
        return Ok(HellyResult {
            number: 1,
            witness: Vec::new(),
            witness_regions: Vec::new(),
        });
    }
    Ok(HellyResult {
        number: best.len(),
        witness: best.iter().map(|&i| gens[i].0.clone()).collect(),
        witness_regions: best.iter().map(|&i| gens[i].1.clone()).collect(),
    })
}

fn search_minimal_empty(
    gens: &[(String, Region)],
    start: usize,
    running: &Region,
    chosen: &mut Vec<usize>,
    best: &mut Vec<usize>,
) {
    for i in start..gens.len() {
        let next = running.intersect(&gens[i].1);
        // a set that does not shrink the prefix is redundant in any completion
        if next == *running {
            continue;
        }
        chosen.push(i);
        if next.is_empty() {
            if chosen.len() > best.len() && is_minimal_empty(gens, chosen) {
                *best = chosen.clone();
            }
        } else {
            search_minimal_empty(gens, i + 1, &next, chosen, best);
        }
        chosen.pop();
    }
}

fn is_minimal_empty(gens: &[(String, Region)], chosen: &[usize]) -> bool {
    (0..chosen.len()).all(|skip| {
        let mut it = chosen
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != skip)
            .map(|(_, &i)| &gens[i].1);
        match it.next() {
            None => true,
            Some(first) => !it.fold(first.clone(), |acc, r| acc.intersect(r)).is_empty(),
        }
    })
}

pub fn helly_number(fam: &SetFamily) -> Result<usize> {
    Ok(helly(fam)?.number)
}

/// Whether hulls of any two disjoint subsets of `points` (the empty set
/// included) are disjoint.
pub fn separated(fam: &SetFamily, points: &[usize]) -> Result<bool> {
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    let k = pts.len();
    if k > MAX_SEPARATED_POINTS {
        return Err(Error::TooLarge(format!(
            "separation test needs at most {MAX_SEPARATED_POINTS} points, got {k}"
        )));
    }
    let nv = fam.space().vertex_count();
    if let Some(&bad) = pts.iter().find(|&&p| p >= nv) {
        return Err(Error::UnknownVertex(format!("#{bad}")));
    }
    let hulls: Vec<FixedBitSet> = (0..1usize << k)
        .map(|mask| {
            let h = fam.hull((0..k).filter(|i| mask >> i & 1 == 1).map(|i| pts[i]));
            h.vertex_set().clone()
        })
        .collect();
    let all = (1usize << k) - 1;
    for u in 0..=all {
        let rest = all ^ u;
        let mut v = rest;
        loop {
            if !hulls[u].is_disjoint(&hulls[v]) {
                return Ok(false);
            }
            if v == 0 {
                break;
            }
            v = (v - 1) & rest;
        }
    }
    Ok(true)
}

/// `h + 1 <= r`, with an unbounded Radon number counting as infinity.
pub fn levi_check(fam: &SetFamily) -> Result<bool> {
    let h = helly_number(fam)?;
    Ok(match radon_number(fam)? {
        RadonNumber::Finite(r) => h < r,
        RadonNumber::Unbounded => true,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ExactReport {
    pub radon: RadonNumber,
    pub helly: usize,
    pub tc1: usize,
    pub levi_holds: bool,
    pub radon_witness: Vec<String>,
    pub helly_witness: Vec<String>,
}

pub fn exact_report(fam: &SetFamily) -> Result<ExactReport> {
    let r = radon(fam)?;
    let h = helly(fam)?;
    let levi_holds = match r.number {
        RadonNumber::Finite(x) => h.number < x,
        RadonNumber::Unbounded => true,
    };
    Ok(ExactReport {
        radon: r.number,
        helly: h.number,
        tc1: fam.tc1()?,
        levi_holds,
        radon_witness: fam.space().names_of(r.witness.iter().copied()),
        helly_witness: h.witness,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::NotApplicable => "NOT-APPLICABLE",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    #[serde(serialize_with = "crate::util::display")]
    pub expr: GraphExpr,
    pub tc1: usize,
    pub b: u64,
    pub poly: Polynomial,
    #[serde(serialize_with = "crate::util::display")]
    pub bound: BigInt,
    pub radon: RadonNumber,
    pub verdict: Verdict,
}

/// Compares the exact Radon number with the bound of `e` at `b = TC1 + 1`.
///
/// Whether `e` really fails to almost-embed is not checked; an unbounded
/// exact value is reported as not applicable.
pub fn verify_main_theorem(fam: &SetFamily, e: &GraphExpr) -> Result<TheoremReport> {
    let tc1 = fam.tc1()?;
    let b = tc1 as u64 + 1;
    let d = q_poly(e)?;
    let bound = d.poly.eval(b);
    let radon = radon_number(fam)?;
    let verdict = match radon {
        RadonNumber::Unbounded => Verdict::NotApplicable,
        r if r.at_most(&bound) => Verdict::Pass,
        _ => Verdict::Fail,
    };
    Ok(TheoremReport {
        expr: d.expr,
        tc1,
        b,
        poly: d.poly,
        bound,
        radon,
        verdict,
    })
}
