//! Simple undirected graphs, join/union expressions and subgraph search.

mod embed;
mod expr;

pub use embed::{subgraph_embed, MAX_PATTERN_VERTICES};
pub use expr::{parse_expr, GraphExpr};

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

type EdgeSet = BTreeSet<(usize, usize)>;

/// Wire form shared by graphs and discrete spaces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
}

impl GraphJson {
    /// Sorts vertex names and checks the edge list, returning the index form.
    pub(crate) fn to_indexed(&self, what: &str) -> Result<(Vec<String>, EdgeSet)> {
        let mut names = self.vertices.clone();
        names.sort();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!("{what} has duplicate vertex names")));
        }
        let index: BTreeMap<&str, usize> =
            names.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let mut edges = BTreeSet::new();
        for [a, b] in &self.edges {
            let u = *index.get(a.as_str()).ok_or_else(|| Error::UnknownVertex(a.clone()))?;
            let v = *index.get(b.as_str()).ok_or_else(|| Error::UnknownVertex(b.clone()))?;
            if u == v {
                return Err(Error::InvalidGraph(format!("{what} has a loop at `{a}`")));
            }
            if !edges.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidGraph(format!("{what} repeats edge {a}-{b}")));
            }
        }
        Ok((names, edges))
    }
}

/// A simple undirected graph on vertices `0..n`.
///
/// Edges are stored as `(u, v)` with `u < v`. Vertex names are either given
/// explicitly (sorted, so index order is name order) or default to zero-padded
/// indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    names: Option<Vec<String>>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            edges: BTreeSet::new(),
            names: None,
        }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Self::empty(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.edges.insert((u, v));
            }
        }
        g
    }

    pub fn complete_bipartite(m: usize, n: usize) -> Self {
        let mut g = Self::empty(m + n);
        for u in 0..m {
            for v in m..m + n {
                g.edges.insert((u, v));
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            let v = (u + 1) % n;
            if u != v {
                g.edges.insert((u.min(v), u.max(v)));
            }
        }
        g
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::InvalidGraph(format!(
                "edge {u}-{v} out of range for {} vertices",
                self.n
            )));
        }
        if u == v {
            return Err(Error::InvalidGraph(format!("loop at {u}")));
        }
        self.edges.insert((u.min(v), u.max(v)));
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter_map(move |&(a, b)| {
            if a == v {
                Some(b)
            } else if b == v {
                Some(a)
            } else {
                None
            }
        })
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors(v).count()
    }

    pub fn name(&self, v: usize) -> String {
        match &self.names {
            Some(names) => names[v].clone(),
            None => {
                let width = self.n.saturating_sub(1).to_string().len();
                format!("{v:0width$}")
            }
        }
    }

    pub fn names(&self) -> Vec<String> {
        (0..self.n).map(|v| self.name(v)).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        (0..self.n).find(|&v| self.name(v) == name)
    }

    /// Disjoint union; the vertices of `other` follow those of `self`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n;
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(u, v)| (u + off, v + off)));
        Graph {
            n: self.n + other.n,
            edges,
            names: None,
        }
    }

    /// Graph join: disjoint union plus every edge between the two parts.
    pub fn join(&self, other: &Graph) -> Graph {
        let mut g = self.disjoint_union(other);
        for u in 0..self.n {
            for v in self.n..g.n {
                g.edges.insert((u, v));
            }
        }
        g
    }

    /// Bitmask adjacency rows; only valid for graphs with at most 64 vertices.
    pub(crate) fn adjacency_masks(&self) -> Vec<u64> {
        debug_assert!(self.n <= 64);
        let mut adj = vec![0u64; self.n];
        for &(u, v) in &self.edges {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for w in self.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: self.names(),
            edges: self
                .edges
                .iter()
                .map(|&(u, v)| [self.name(u), self.name(v)])
                .collect(),
        }
    }

    pub fn from_json(json: &GraphJson) -> Result<Self> {
        let (names, edges) = json.to_indexed("graph")?;
        Ok(Graph {
            n: names.len(),
            edges,
            names: Some(names),
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        let json: GraphJson = serde_json::from_str(&text)?;
        Self::from_json(&json)
    }
}
