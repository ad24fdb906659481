use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;

use super::star::build_star_unchecked;
use super::{ClosureOracle, ConstrainedMap, PointSet, Walk};
use crate::bounds::Shape;
use crate::error::{Error, Result};
use crate::graphs::{Graph, GraphExpr};
use crate::space::{bfs_walk, components, SetFamily};

fn to_count(v: BigInt) -> Result<usize> {
    usize::try_from(&v).map_err(|_| Error::TooLarge(format!("point count {v} does not fit in memory")))
}

/// Builds a map of `realize(e)` constrained by `points` (default: the first
/// `q_e(b)` vertices of the space), with `b = TC1 + 1`.
pub fn build_constrained(e: &GraphExpr, fam: &SetFamily, points: Option<&[usize]>) -> Result<ConstrainedMap> {
    let shape = Shape::from_expr(e)?;
    let b = fam.tc1()? + 1;
    let need = to_count(shape.poly().eval(b as u64))?;
    let pts: Vec<usize> = match points {
        Some(ps) => {
            let set: BTreeSet<usize> = ps.iter().copied().collect();
            if let Some(&bad) = set.iter().find(|&&p| p >= fam.space().vertex_count()) {
                return Err(Error::UnknownVertex(format!("#{bad}")));
            }
            set.into_iter().collect()
        }
        None => (0..fam.space().vertex_count().min(need)).collect(),
    };
    if pts.len() < need {
        return Err(Error::InsufficientPoints { needed: need, got: pts.len() });
    }
    let mut cm = build_shape(fam, &shape, &pts, b)?;
    cm.points = pts.into_iter().collect();
    // the build runs on the normalized shape, which may reorder vertices and,
    // for B(m,n), adds edges inside the second part
    let order = emission_order(e, &mut 0);
    if order.len() != cm.graph.vertex_count() {
        return Err(Error::Internal("vertex order does not match the build".into()));
    }
    let mut emb = vec![0; order.len()];
    for (j, &v) in order.iter().enumerate() {
        emb[v] = j;
    }
    restrict_map(&cm, &e.realize(), &emb).map_err(|err| Error::Internal(err.to_string()))
}

/// Leaf-order indices of `realize(e)` listed in the order [`build_shape`]
/// creates vertices.
fn emission_order(e: &GraphExpr, next: &mut usize) -> Vec<usize> {
    let (mut core, peeled) = split_join(e, next);
    core.extend(peeled);
    core
}

/// Splits the vertices of `e` into the innermost operand of its normalized
/// join chain and the peeled `K1`s. Peeled vertices are interchangeable, so
/// their relative order is free.
fn split_join(e: &GraphExpr, next: &mut usize) -> (Vec<usize>, Vec<usize>) {
    let mut take = |k: usize| {
        let ids: Vec<usize> = (*next..*next + k).collect();
        *next += k;
        ids
    };
    match e {
        GraphExpr::Complete(n) => (Vec::new(), take(*n)),
        GraphExpr::Bipartite(1, n) => (Vec::new(), take(n + 1)),
        GraphExpr::Bipartite(m, n) => {
            let core = take(*m);
            (core, take(*n))
        }
        GraphExpr::Explicit { graph, .. } => (take(graph.vertex_count()), Vec::new()),
        GraphExpr::Union(cs) => (cs.iter().flat_map(|c| emission_order(c, next)).collect(), Vec::new()),
        GraphExpr::Join(cs) => {
            let mut core = Vec::new();
            let mut peeled = Vec::new();
            for c in cs {
                let (c_core, c_peeled) = split_join(c, next);
                core.extend(c_core);
                peeled.extend(c_peeled);
            }
            (core, peeled)
        }
    }
}

/// `pts` is sorted and holds at least `q_shape(b)` points.
fn build_shape(oracle: &dyn ClosureOracle, shape: &Shape, pts: &[usize], b: usize) -> Result<ConstrainedMap> {
    match shape {
        Shape::K1 => Ok(ConstrainedMap::single(pts[0])),
        Shape::Union(parts) => {
            let mut offset = 0;
            let mut out: Option<ConstrainedMap> = None;
            for part in parts {
                let size = to_count(part.poly().eval(b as u64))?;
                let cm = build_shape(oracle, part, &pts[offset..offset + size], b)?;
                offset += size;
                out = Some(match out {
                    None => cm,
                    Some(acc) => acc.disjoint_union(cm),
                });
            }
            out.ok_or_else(|| Error::InvalidExpr("empty union".into()))
        }
        Shape::Peel { inner, k: 1 } if **inner == Shape::K1 => build_edge(oracle, &pts[..b + 1]),
        Shape::Peel { inner, k } => {
            let rest = Shape::peel((**inner).clone(), k - 1);
            let n = to_count(rest.poly().eval(b as u64))?;
            let star = build_star_unchecked(oracle, pts, n, b)?;
            let mut leaves = star.leaves.clone();
            leaves.sort_unstable();
            let sub = build_shape(oracle, &rest, &leaves, b)?;
            attach_center(sub, &star.map, star.center, &star.leaves)
        }
    }
}

/// `K2` on exactly `b + 1` points: two of them share a component of the hull.
fn build_edge(oracle: &dyn ClosureOracle, pts: &[usize]) -> Result<ConstrainedMap> {
    let label: PointSet = pts.iter().copied().collect();
    let hull = oracle.hull(&label);
    let pair = components(oracle.space(), &hull).into_iter().find_map(|comp| {
        let mut inside = pts.iter().copied().filter(|p| comp.contains(p));
        Some((inside.next()?, inside.next()?))
    });
    let Some((x, y)) = pair else {
        return Err(Error::HypothesisViolated(oracle.space().names_of(pts.iter().copied())));
    };
    let walk = bfs_walk(oracle.space(), &hull, x, y)
        .ok_or_else(|| Error::Internal("co-component points without a walk".into()))?;
    let mut cm = ConstrainedMap::single(x).disjoint_union(ConstrainedMap::single(y));
    cm.graph.add_edge(0, 1)?;
    cm.edge_image.insert((0, 1), Walk::new(oracle.space(), walk)?);
    cm.phi_edge.insert((0, 1), label.clone());
    cm.points = label;
    Ok(cm)
}

/// Adds the star center as a new last vertex joined to every vertex of `sub`,
/// reusing the star edge that ends at each vertex's anchor point.
fn attach_center(
    mut sub: ConstrainedMap,
    star: &ConstrainedMap,
    center: usize,
    leaves: &[usize],
) -> Result<ConstrainedMap> {
    let c = sub.graph.vertex_count();
    sub = sub.disjoint_union(ConstrainedMap::single(center));
    for v in 0..c {
        let anchor = sub.vertex_image[v];
        let i = leaves
            .iter()
            .position(|&x| x == anchor)
            .ok_or_else(|| Error::Internal(format!("vertex {v} is not anchored at a leaf")))?;
        let key = (0, i + 1);
        sub.graph.add_edge(v, c)?;
        sub.edge_image.insert((v, c), star.edge_image[&key].reversed());
        sub.phi_edge.insert((v, c), star.phi_edge[&key].clone());
        sub.points.extend(&star.phi_edge[&key]);
    }
    Ok(sub)
}

/// Restricts `cm` to the copy of `g` given by `emb`, where `emb[v]` is the
/// vertex of `cm.graph` that `v` maps to.
pub fn restrict_map(cm: &ConstrainedMap, g: &Graph, emb: &[usize]) -> Result<ConstrainedMap> {
    let n = cm.graph.vertex_count();
    if emb.len() != g.vertex_count() {
        return Err(Error::NotAnEmbedding(format!(
            "{} images for {} vertices",
            emb.len(),
            g.vertex_count()
        )));
    }
    if let Some(&bad) = emb.iter().find(|&&v| v >= n) {
        return Err(Error::NotAnEmbedding(format!("image {bad} is not a vertex")));
    }
    if emb.iter().collect::<BTreeSet<_>>().len() != emb.len() {
        return Err(Error::NotAnEmbedding("two vertices share an image".into()));
    }
    let mut edge_image = BTreeMap::new();
    let mut phi_edge = BTreeMap::new();
    for (u, v) in g.edges() {
        let (a, b) = (emb[u], emb[v]);
        let key = (a.min(b), a.max(b));
        let walk = cm.edge_image.get(&key).ok_or_else(|| {
            Error::NotAnEmbedding(format!("edge {}-{} maps to a non-edge", g.name(u), g.name(v)))
        })?;
        edge_image.insert((u, v), if a < b { walk.clone() } else { walk.reversed() });
        phi_edge.insert((u, v), cm.phi_edge[&key].clone());
    }
    Ok(ConstrainedMap {
        graph: g.clone(),
        vertex_image: emb.iter().map(|&v| cm.vertex_image[v]).collect(),
        edge_image,
        phi_vertex: emb.iter().map(|&v| cm.phi_vertex[v].clone()).collect(),
        phi_edge,
        points: cm.points.clone(),
    })
}
