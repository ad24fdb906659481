use std::collections::BTreeMap;

use super::{ClosureOracle, ConstrainedMap, PinnedOracle, PointSet, Walk};
use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::space::{bfs_walk, components};

/// Largest point set accepted by [`star_hypothesis_check`].
pub const MAX_HYPOTHESIS_POINTS: usize = 16;

/// `(n-1)(b^2-b+1) + b + 1`: points needed for a constrained `K_{1,n}`.
pub fn star_threshold(n: usize, b: usize) -> usize {
    (n - 1) * (b * b - b + 1) + b + 1
}

/// `(n-1)(b^2-b) + b + n`, the same number in the form the recursion uses.
pub fn star_size(n: usize, b: usize) -> usize {
    (n - 1) * (b * b - b) + b + n
}

/// A constrained drawing of `K_{1,n}`: graph vertex 0 is the center at
/// `center`, vertex `i` the leaf at `leaves[i-1]`.
#[derive(Clone, Debug)]
pub struct Star {
    pub map: ConstrainedMap,
    pub center: usize,
    pub leaves: Vec<usize>,
}

/// First `(b+1)`-subset of `pts` (in lexicographic order) none of whose points
/// share a component of its hull.
pub fn star_hypothesis_witness(
    oracle: &dyn ClosureOracle,
    pts: &[usize],
    b: usize,
) -> Result<Option<Vec<usize>>> {
    let mut pts = pts.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() > MAX_HYPOTHESIS_POINTS {
        return Err(Error::TooLarge(format!(
            "hypothesis check takes at most {MAX_HYPOTHESIS_POINTS} points, got {}",
            pts.len()
        )));
    }
    if b == 0 {
        return Err(Error::Range("b must be positive".into()));
    }
    let mut found = None;
    for_each_subset(&pts, b + 1, &mut |set| {
        let ps: PointSet = set.iter().copied().collect();
        let hull = oracle.hull(&ps);
        let comps = components(oracle.space(), &hull);
        let shared = comps
            .iter()
            .any(|c| c.iter().filter(|v| ps.contains(v)).count() >= 2);
        if shared {
            true
        } else {
            found = Some(set.to_vec());
            false
        }
    });
    Ok(found)
}

pub fn star_hypothesis_check(oracle: &dyn ClosureOracle, pts: &[usize], b: usize) -> Result<bool> {
    Ok(star_hypothesis_witness(oracle, pts, b)?.is_none())
}

/// Calls `f` on every `k`-subset of `items` in lexicographic order until it
/// returns false. Returns whether the sweep ran to completion.
fn for_each_subset(items: &[usize], k: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn go(
        items: &[usize],
        k: usize,
        start: usize,
        cur: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if cur.len() == k {
            return f(cur);
        }
        let need = k - cur.len();
        for i in start..=items.len().saturating_sub(need) {
            if i >= items.len() {
                break;
            }
            cur.push(items[i]);
            let go_on = go(items, k, i + 1, cur, f);
            cur.pop();
            if !go_on {
                return false;
            }
        }
        true
    }
    if k > items.len() {
        return true;
    }
    go(items, k, 0, &mut Vec::with_capacity(k), f)
}

/// Builds a constrained `K_{1,n}` from at least `star_threshold(n, b)` points,
/// after checking the pair-connectivity hypothesis on all of `s`.
pub fn build_star(oracle: &dyn ClosureOracle, s: &[usize], n: usize, b: usize) -> Result<Star> {
    if let Some(bad) = star_hypothesis_witness(oracle, s, b)? {
        return Err(Error::HypothesisViolated(oracle.space().names_of(bad)));
    }
    build_star_unchecked(oracle, s, n, b)
}

/// As [`build_star`] without the up-front hypothesis sweep; a failure of the
/// hypothesis met during construction is still reported.
pub(crate) fn build_star_unchecked(
    oracle: &dyn ClosureOracle,
    s: &[usize],
    n: usize,
    b: usize,
) -> Result<Star> {
    if n == 0 || b == 0 {
        return Err(Error::Range("a star needs n >= 1 and b >= 1".into()));
    }
    let mut pts = s.to_vec();
    pts.sort_unstable();
    pts.dedup();
    let needed = star_threshold(n, b);
    if pts.len() < needed {
        return Err(Error::InsufficientPoints {
            needed,
            got: pts.len(),
        });
    }
    pts.truncate(star_size(n, b));
    let parts = star_rec(oracle, &pts, n, b)?;
    Ok(assemble(oracle, parts))
}

struct StarParts {
    center: usize,
    leaves: Vec<usize>,
    labels: Vec<PointSet>,
    walks: Vec<Vec<usize>>,
}

fn assemble(oracle: &dyn ClosureOracle, parts: StarParts) -> Star {
    let n = parts.leaves.len();
    let space = oracle.space();
    let mut vertex_image = vec![parts.center];
    vertex_image.extend(&parts.leaves);
    let phi_vertex = vertex_image.iter().map(|&p| PointSet::from([p])).collect();
    let mut edge_image = BTreeMap::new();
    let mut phi_edge = BTreeMap::new();
    let mut points = PointSet::new();
    for i in 0..n {
        let walk = Walk::new(space, parts.walks[i].clone()).expect("BFS walks follow space edges");
        edge_image.insert((0, i + 1), walk);
        points.extend(&parts.labels[i]);
        phi_edge.insert((0, i + 1), parts.labels[i].clone());
    }
    Star {
        map: ConstrainedMap {
            graph: Graph::complete_bipartite(1, n),
            vertex_image,
            edge_image,
            phi_vertex,
            phi_edge,
            points,
        },
        center: parts.center,
        leaves: parts.leaves,
    }
}

fn connect(oracle: &dyn ClosureOracle, label: &PointSet, from: usize, to: usize) -> Result<Vec<usize>> {
    let hull = oracle.hull(label);
    bfs_walk(oracle.space(), &hull, from, to)
        .ok_or_else(|| Error::HypothesisViolated(oracle.space().names_of([from, to])))
}

/// First `size`-subset `W` of `s - {x, y}` with `x` and `y` in one component
/// of the hull of `W ∪ {x, y}`.
fn pair_witness(
    oracle: &dyn ClosureOracle,
    s: &[usize],
    x: usize,
    y: usize,
    size: usize,
) -> Option<PointSet> {
    let pool: Vec<usize> = s.iter().copied().filter(|&p| p != x && p != y).collect();
    let mut hit = None;
    for_each_subset(&pool, size, &mut |w| {
        let mut label: PointSet = w.iter().copied().collect();
        label.insert(x);
        label.insert(y);
        let hull = oracle.hull(&label);
        if bfs_walk(oracle.space(), &hull, x, y).is_some() {
            hit = Some(w.iter().copied().collect());
            false
        } else {
            true
        }
    });
    hit
}

/// `s` is sorted and has exactly `star_size(n, c)` points.
fn star_rec(oracle: &dyn ClosureOracle, s: &[usize], n: usize, c: usize) -> Result<StarParts> {
    debug_assert_eq!(s.len(), star_size(n, c));
    if c == 1 {
        let center = s[0];
        let leaves = s[1..=n].to_vec();
        let labels: Vec<PointSet> = leaves.iter().map(|&x| PointSet::from([center, x])).collect();
        let walks = leaves
            .iter()
            .zip(&labels)
            .map(|(&x, label)| connect(oracle, label, center, x))
            .collect::<Result<Vec<_>>>()?;
        return Ok(StarParts {
            center,
            leaves,
            labels,
            walks,
        });
    }

    let pivot = s[0];
    let mut witnesses: BTreeMap<usize, PointSet> = BTreeMap::new();
    let mut non_neighbors = Vec::new();
    for &x in &s[1..] {
        match pair_witness(oracle, s, pivot, x, c - 1) {
            Some(w) => {
                witnesses.insert(x, w);
            }
            None => non_neighbors.push(x),
        }
    }

    let need = star_size(n, c - 1);
    if non_neighbors.len() >= need {
        let pinned = PinnedOracle::new(oracle, pivot);
        let mut parts = star_rec(&pinned, &non_neighbors[..need], n, c - 1)?;
        for label in &mut parts.labels {
            label.insert(pivot);
        }
        return Ok(parts);
    }

    let neighbors: Vec<usize> = witnesses.keys().copied().collect();
    let guaranteed = 2 * (c - 1) * (n - 1) + 1;
    if neighbors.len() < guaranteed {
        return Err(Error::Internal(format!(
            "pivot has {} non-neighbors and {} neighbors; neither branch applies",
            non_neighbors.len(),
            neighbors.len()
        )));
    }
    let hits = |x: usize, y: usize| witnesses[&x].contains(&y);
    let mut alive = neighbors.clone();
    let mut chosen = Vec::with_capacity(n);
    while chosen.len() < n {
        let pick = alive.iter().copied().find(|&x| {
            alive.iter().filter(|&&y| y != x && hits(y, x)).count() < c
        });
        let Some(x) = pick else {
            return Err(Error::Internal(format!(
                "greedy leaf selection ran out after {} of {n} leaves ({} neighbors)",
                chosen.len(),
                neighbors.len()
            )));
        };
        chosen.push(x);
        alive.retain(|&y| y != x && !hits(x, y) && !hits(y, x));
    }
    for &x in &chosen {
        if chosen.iter().any(|&y| y != x && hits(x, y)) {
            return Err(Error::Internal("selected leaves hit each other".into()));
        }
    }
    let labels: Vec<PointSet> = chosen
        .iter()
        .map(|&x| {
            let mut l = witnesses[&x].clone();
            l.insert(pivot);
            l.insert(x);
            l
        })
        .collect();
    let walks = chosen
        .iter()
        .zip(&labels)
        .map(|(&x, label)| connect(oracle, label, pivot, x))
        .collect::<Result<Vec<_>>>()?;
    Ok(StarParts {
        center: pivot,
        leaves: chosen,
        labels,
        walks,
    })
}
