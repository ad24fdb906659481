use std::fmt;

use super::{ClosureOracle, ConstrainedMap, PointSet};
use crate::space::DiscreteSpace;

/// The first failed condition found by a validator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Structure(String),
    /// Disjoint simplices with overlapping labels.
    Disjointness { a: String, b: String },
    /// A vertex label not inside the label of an incident edge.
    Monotonicity { vertex: String, edge: String },
    /// An image point or edge outside the hull of the label.
    Containment { simplex: String, outside: String },
    /// A vertex label that is not a single point.
    NotSingleton { vertex: String, size: usize },
    CoincidentVertices { a: String, b: String },
    VertexOnEdge { vertex: String, edge: String },
    EdgesMeet { a: String, b: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Structure(m) => write!(f, "malformed map: {m}"),
            Violation::Disjointness { a, b } => {
                write!(f, "condition (i): disjoint simplices {a} and {b} share label points")
            }
            Violation::Monotonicity { vertex, edge } => {
                write!(f, "condition (ii): label of {vertex} is not inside label of {edge}")
            }
            Violation::Containment { simplex, outside } => {
                write!(f, "condition (iii): image of {simplex} leaves its hull at {outside}")
            }
            Violation::NotSingleton { vertex, size } => {
                write!(f, "condition (iv): label of {vertex} has {size} points")
            }
            Violation::CoincidentVertices { a, b } => {
                write!(f, "vertices {a} and {b} are drawn on the same point")
            }
            Violation::VertexOnEdge { vertex, edge } => {
                write!(f, "vertex {vertex} is drawn on non-incident edge {edge}")
            }
            Violation::EdgesMeet { a, b } => write!(f, "disjoint edges {a} and {b} meet"),
        }
    }
}

fn check_structure(cm: &ConstrainedMap, space: &DiscreteSpace) -> Result<(), Violation> {
    let n = cm.graph.vertex_count();
    if cm.vertex_image.len() != n || cm.phi_vertex.len() != n {
        return Err(Violation::Structure("vertex tables do not match the graph".into()));
    }
    if cm.vertex_image.iter().any(|&p| p >= space.vertex_count()) {
        return Err(Violation::Structure("vertex image outside the space".into()));
    }
    for e in cm.graph.edges() {
        let name = cm.edge_name(e);
        let walk = cm
            .edge_image
            .get(&e)
            .ok_or_else(|| Violation::Structure(format!("edge {name} has no image")))?;
        if walk.start() != cm.vertex_image[e.0] || walk.end() != cm.vertex_image[e.1] {
            return Err(Violation::Structure(format!(
                "walk of {name} does not join its endpoint images"
            )));
        }
        if walk.vertices().windows(2).any(|w| space.edge_id(w[0], w[1]).is_none()) {
            return Err(Violation::Structure(format!("walk of {name} leaves the space")));
        }
        if !cm.phi_edge.contains_key(&e) {
            return Err(Violation::Structure(format!("edge {name} has no label")));
        }
    }
    if cm.edge_image.len() != cm.graph.edge_count() || cm.phi_edge.len() != cm.graph.edge_count() {
        return Err(Violation::Structure("images or labels for non-edges".into()));
    }
    let labels = cm.phi_vertex.iter().chain(cm.phi_edge.values());
    if labels.flatten().any(|p| !cm.points.contains(p)) {
        return Err(Violation::Structure("a label leaves the point set".into()));
    }
    Ok(())
}

/// Checks conditions (i) to (iv) against the oracle's hulls.
pub fn validate_constrained(cm: &ConstrainedMap, oracle: &dyn ClosureOracle) -> Result<(), Violation> {
    let space = oracle.space();
    check_structure(cm, space)?;
    let g = &cm.graph;
    let n = g.vertex_count();
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let vname = |v: usize| g.name(v);
    let overlap = |a: &PointSet, b: &PointSet| !a.is_disjoint(b);

    // (i)
    for u in 0..n {
        for v in u + 1..n {
            if overlap(&cm.phi_vertex[u], &cm.phi_vertex[v]) {
                return Err(Violation::Disjointness { a: vname(u), b: vname(v) });
            }
        }
        for &e in &edges {
            if e.0 != u && e.1 != u && overlap(&cm.phi_vertex[u], &cm.phi_edge[&e]) {
                return Err(Violation::Disjointness { a: vname(u), b: cm.edge_name(e) });
            }
        }
    }
    for (i, &e) in edges.iter().enumerate() {
        for &f in &edges[i + 1..] {
            let disjoint = e.0 != f.0 && e.0 != f.1 && e.1 != f.0 && e.1 != f.1;
            if disjoint && overlap(&cm.phi_edge[&e], &cm.phi_edge[&f]) {
                return Err(Violation::Disjointness { a: cm.edge_name(e), b: cm.edge_name(f) });
            }
        }
    }
    // (ii)
    for &e in &edges {
        for v in [e.0, e.1] {
            if !cm.phi_vertex[v].is_subset(&cm.phi_edge[&e]) {
                return Err(Violation::Monotonicity { vertex: vname(v), edge: cm.edge_name(e) });
            }
        }
    }
    // (iii)
    for v in 0..n {
        let hull = oracle.hull(&cm.phi_vertex[v]);
        if !hull.contains_vertex(cm.vertex_image[v]) {
            return Err(Violation::Containment {
                simplex: vname(v),
                outside: space.name(cm.vertex_image[v]).to_string(),
            });
        }
    }
    for &e in &edges {
        let hull = oracle.hull(&cm.phi_edge[&e]);
        let walk = &cm.edge_image[&e];
        if let Some(&p) = walk.vertices().iter().find(|&&p| !hull.contains_vertex(p)) {
            return Err(Violation::Containment {
                simplex: cm.edge_name(e),
                outside: space.name(p).to_string(),
            });
        }
        if let Some(x) = walk.edges(space).into_iter().find(|&x| !hull.contains_edge(x)) {
            let (a, b) = space.edge(x);
            return Err(Violation::Containment {
                simplex: cm.edge_name(e),
                outside: format!("{}-{}", space.name(a), space.name(b)),
            });
        }
    }
    // (iv)
    for v in 0..n {
        if cm.phi_vertex[v].len() != 1 {
            return Err(Violation::NotSingleton { vertex: vname(v), size: cm.phi_vertex[v].len() });
        }
    }
    Ok(())
}

/// Distinct vertices land apart, no vertex lies on a non-incident edge's walk,
/// and walks of disjoint edges share neither a vertex nor an edge.
pub fn validate_almost_embedding(cm: &ConstrainedMap) -> Result<(), Violation> {
    let g = &cm.graph;
    let n = g.vertex_count();
    if cm.vertex_image.len() != n {
        return Err(Violation::Structure("vertex table does not match the graph".into()));
    }
    let edges: Vec<(usize, usize)> = g.edges().collect();
    if edges.iter().any(|e| !cm.edge_image.contains_key(e)) {
        return Err(Violation::Structure("an edge has no image".into()));
    }
    for u in 0..n {
        for v in u + 1..n {
            if cm.vertex_image[u] == cm.vertex_image[v] {
                return Err(Violation::CoincidentVertices { a: g.name(u), b: g.name(v) });
            }
        }
        for &e in &edges {
            if e.0 != u && e.1 != u && cm.edge_image[&e].vertices().contains(&cm.vertex_image[u]) {
                return Err(Violation::VertexOnEdge { vertex: g.name(u), edge: cm.edge_name(e) });
            }
        }
    }
    for (i, &e) in edges.iter().enumerate() {
        let we: PointSet = cm.edge_image[&e].vertices().iter().copied().collect();
        for &f in &edges[i + 1..] {
            let disjoint = e.0 != f.0 && e.0 != f.1 && e.1 != f.0 && e.1 != f.1;
            // walks sharing an edge also share its endpoints
            if disjoint && cm.edge_image[&f].vertices().iter().any(|p| we.contains(p)) {
                return Err(Violation::EdgesMeet { a: cm.edge_name(e), b: cm.edge_name(f) });
            }
        }
    }
    Ok(())
}

/// Spot-checks the closure axioms over all subsets of `points` (at most 12):
/// extensive, monotone under adding one point, and idempotent.
pub fn check_closure_axioms(oracle: &dyn ClosureOracle, points: &[usize]) -> Result<(), String> {
    if points.len() > 12 {
        return Err("axiom spot-check takes at most 12 points".into());
    }
    let k = points.len();
    let subset = |mask: usize| -> PointSet {
        (0..k).filter(|i| mask >> i & 1 == 1).map(|i| points[i]).collect()
    };
    for mask in 0..1usize << k {
        let s = subset(mask);
        let h = oracle.hull(&s);
        if let Some(p) = s.iter().find(|&&p| !h.contains_vertex(p)) {
            return Err(format!("not extensive at point {p}"));
        }
        let again = oracle.hull(&h.vertices().collect());
        if again != h {
            return Err(format!("not idempotent on {s:?}"));
        }
        for i in (0..k).filter(|i| mask >> i & 1 == 0) {
            let bigger = oracle.hull(&subset(mask | 1 << i));
            if !h.is_subset(&bigger) {
                return Err(format!("not monotone adding {} to {s:?}", points[i]));
            }
        }
    }
    Ok(())
}
