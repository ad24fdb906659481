//! Constrained maps of graphs into a discrete space: the data type, its
//! validators, the star builder and the recursive builder over join/union
//! expressions.
//!
//! A map sends every graph vertex to a space vertex and every graph edge to a
//! walk, and labels every vertex and edge with a subset of a point set `P`.
//! It is constrained when
//!
//! - (i) labels of disjoint simplices are disjoint,
//! - (ii) a vertex label lies inside the label of every incident edge,
//! - (iii) every image lies in the hull of its label,
//! - (iv) vertex labels are single points.
//!
//! All builders additionally place each vertex at the unique point of its
//! label.

mod build;
mod star;
mod validate;

pub use build::{build_constrained, restrict_map};
pub use star::{
    build_star, star_hypothesis_check, star_hypothesis_witness, star_size, star_threshold, Star,
};
pub use validate::{check_closure_axioms, validate_almost_embedding, validate_constrained, Violation};

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::space::{DiscreteSpace, Region, SetFamily};

pub type PointSet = BTreeSet<usize>;

/// Maps point sets to regions: the hull operator a builder works against.
pub trait ClosureOracle {
    fn space(&self) -> &DiscreteSpace;
    fn hull(&self, points: &PointSet) -> Region;
}

impl ClosureOracle for SetFamily {
    fn space(&self) -> &DiscreteSpace {
        SetFamily::space(self)
    }

    fn hull(&self, points: &PointSet) -> Region {
        SetFamily::hull(self, points.iter().copied())
    }
}

/// `M -> inner(M ∪ {pinned})`.
pub struct PinnedOracle<'a> {
    inner: &'a dyn ClosureOracle,
    pinned: usize,
}

impl<'a> PinnedOracle<'a> {
    pub fn new(inner: &'a dyn ClosureOracle, pinned: usize) -> Self {
        Self { inner, pinned }
    }
}

impl ClosureOracle for PinnedOracle<'_> {
    fn space(&self) -> &DiscreteSpace {
        self.inner.space()
    }

    fn hull(&self, points: &PointSet) -> Region {
        let mut with = points.clone();
        with.insert(self.pinned);
        self.inner.hull(&with)
    }
}

/// A vertex sequence in which consecutive vertices are adjacent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Walk(Vec<usize>);

impl Walk {
    pub fn new(space: &DiscreteSpace, vertices: Vec<usize>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidSpace("a walk needs at least one vertex".into()));
        }
        for w in vertices.windows(2) {
            if space.edge_id(w[0], w[1]).is_none() {
                return Err(Error::InvalidSpace(format!(
                    "walk steps along non-edge {}-{}",
                    space.name(w[0]),
                    space.name(w[1])
                )));
            }
        }
        Ok(Walk(vertices))
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn start(&self) -> usize {
        self.0[0]
    }

    pub fn end(&self) -> usize {
        *self.0.last().expect("walks are nonempty")
    }

    /// Traversed edge ids.
    pub fn edges(&self, space: &DiscreteSpace) -> Vec<usize> {
        self.0
            .windows(2)
            .map(|w| space.edge_id(w[0], w[1]).expect("walk steps are edges"))
            .collect()
    }

    pub fn reversed(&self) -> Walk {
        Walk(self.0.iter().rev().copied().collect())
    }
}

/// Graph edges are keyed `(u, v)` with `u < v`; the walk runs from the image
/// of `u` to the image of `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstrainedMap {
    pub graph: Graph,
    pub vertex_image: Vec<usize>,
    pub edge_image: BTreeMap<(usize, usize), Walk>,
    pub phi_vertex: Vec<PointSet>,
    pub phi_edge: BTreeMap<(usize, usize), PointSet>,
    pub points: PointSet,
}

impl ConstrainedMap {
    /// A single vertex placed at `p`.
    pub fn single(p: usize) -> Self {
        ConstrainedMap {
            graph: Graph::empty(1),
            vertex_image: vec![p],
            edge_image: BTreeMap::new(),
            phi_vertex: vec![PointSet::from([p])],
            phi_edge: BTreeMap::new(),
            points: PointSet::from([p]),
        }
    }

    /// Places `other` after `self`; vertex indices of `other` are shifted.
    pub fn disjoint_union(mut self, other: ConstrainedMap) -> ConstrainedMap {
        let off = self.graph.vertex_count();
        self.graph = self.graph.disjoint_union(&other.graph);
        self.vertex_image.extend(other.vertex_image);
        self.phi_vertex.extend(other.phi_vertex);
        for ((u, v), w) in other.edge_image {
            self.edge_image.insert((u + off, v + off), w);
        }
        for ((u, v), l) in other.phi_edge {
            self.phi_edge.insert((u + off, v + off), l);
        }
        self.points.extend(other.points);
        self
    }

    pub fn edge_name(&self, (u, v): (usize, usize)) -> String {
        format!("{}-{}", self.graph.name(u), self.graph.name(v))
    }

    pub fn to_json(&self, space: &DiscreteSpace) -> ConstrainedMapJson {
        let names = |s: &PointSet| space.names_of(s.iter().copied());
        let mut phi = BTreeMap::new();
        let mut vertex_images = BTreeMap::new();
        for v in 0..self.graph.vertex_count() {
            vertex_images.insert(self.graph.name(v), space.name(self.vertex_image[v]).to_string());
            phi.insert(self.graph.name(v), names(&self.phi_vertex[v]));
        }
        let mut edge_images = BTreeMap::new();
        for (&e, walk) in &self.edge_image {
            edge_images.insert(self.edge_name(e), space.names_of(walk.vertices().iter().copied()));
        }
        for (&e, label) in &self.phi_edge {
            phi.insert(self.edge_name(e), names(label));
        }
        ConstrainedMapJson {
            vertex_images,
            edge_images,
            phi,
        }
    }

    /// Reads the JSON form against a known graph and space; the point set is
    /// the union of all labels.
    pub fn from_json(json: &ConstrainedMapJson, graph: &Graph, space: &DiscreteSpace) -> Result<Self> {
        let point_set = |names: &[String]| -> Result<PointSet> {
            Ok(space.vertices_of(names)?.into_iter().collect())
        };
        let mut vertex_image = Vec::new();
        let mut phi_vertex = Vec::new();
        for v in 0..graph.vertex_count() {
            let key = graph.name(v);
            let img = json
                .vertex_images
                .get(&key)
                .ok_or_else(|| Error::InvalidGraph(format!("no image for vertex `{key}`")))?;
            vertex_image.push(space.vertex(img)?);
            let label = json
                .phi
                .get(&key)
                .ok_or_else(|| Error::InvalidGraph(format!("no label for vertex `{key}`")))?;
            phi_vertex.push(point_set(label)?);
        }
        let mut edge_image = BTreeMap::new();
        let mut phi_edge = BTreeMap::new();
        for (u, v) in graph.edges() {
            let key = format!("{}-{}", graph.name(u), graph.name(v));
            let walk = json
                .edge_images
                .get(&key)
                .ok_or_else(|| Error::InvalidGraph(format!("no image for edge `{key}`")))?;
            let vs = walk
                .iter()
                .map(|n| space.vertex(n))
                .collect::<Result<Vec<_>>>()?;
            edge_image.insert((u, v), Walk::new(space, vs)?);
            let label = json
                .phi
                .get(&key)
                .ok_or_else(|| Error::InvalidGraph(format!("no label for edge `{key}`")))?;
            phi_edge.insert((u, v), point_set(label)?);
        }
        let points = phi_vertex
            .iter()
            .chain(phi_edge.values())
            .flatten()
            .copied()
            .collect();
        Ok(ConstrainedMap {
            graph: graph.clone(),
            vertex_image,
            edge_image,
            phi_vertex,
            phi_edge,
            points,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstrainedMapJson {
    pub vertex_images: BTreeMap<String, String>,
    pub edge_images: BTreeMap<String, Vec<String>>,
    pub phi: BTreeMap<String, Vec<String>>,
}
