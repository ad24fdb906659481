//! Finite 1-complexes, incidence-closed regions, set families and the
//! closure operator they induce.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::path::Path;

use fixedbitset::FixedBitSet;
use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::GraphJson;

/// Cap on the number of distinct subfamily intersections explored.
pub const MAX_LATTICE: usize = 1 << 20;
/// Cap on family size for intersection sweeps.
pub const MAX_MEMBERS: usize = 4096;

/// A simple graph whose vertices are the points of the model.
///
/// Vertices are kept in lexicographic name order; vertex indices follow that
/// order, as do edge indices over `(smaller, larger)` index pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscreteSpace {
    names: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<(usize, usize)>,
    edge_index: HashMap<(usize, usize), usize>,
    adj: Vec<Vec<(usize, usize)>>,
}

impl DiscreteSpace {
    pub fn new<S: AsRef<str>>(vertices: &[S], edges: &[(S, S)]) -> Result<Self> {
        let json = GraphJson {
            vertices: vertices.iter().map(|s| s.as_ref().to_string()).collect(),
            edges: edges
                .iter()
                .map(|(a, b)| [a.as_ref().to_string(), b.as_ref().to_string()])
                .collect(),
        };
        Self::from_json(&json)
    }

    pub fn from_json(json: &GraphJson) -> Result<Self> {
        let (names, edge_set) = json
            .to_indexed("space")
            .map_err(|e| Error::InvalidSpace(e.to_string()))?;
        let index = names.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let edges: Vec<(usize, usize)> = edge_set.into_iter().collect();
        let edge_index = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut adj = vec![Vec::new(); names.len()];
        for (i, &(u, v)) in edges.iter().enumerate() {
            adj[u].push((v, i));
            adj[v].push((u, i));
        }
        for row in &mut adj {
            row.sort();
        }
        Ok(Self {
            names,
            index,
            edges,
            edge_index,
            adj,
        })
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: self.names.clone(),
            edges: self
                .edges
                .iter()
                .map(|&(u, v)| [self.names[u].clone(), self.names[v].clone()])
                .collect(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn vertices_of<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<usize>> {
        let mut out = names
            .iter()
            .map(|n| self.vertex(n.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    pub fn edge(&self, id: usize) -> (usize, usize) {
        self.edges[id]
    }

    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        self.edge_index.get(&(u.min(v), u.max(v))).copied()
    }

    /// `(neighbor, edge id)` pairs in neighbor order.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn names_of(&self, vs: impl IntoIterator<Item = usize>) -> Vec<String> {
        vs.into_iter().map(|v| self.names[v].clone()).collect()
    }
}

/// A set of vertices plus a set of edges whose endpoints all lie in the vertex set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Region {
    vertices: FixedBitSet,
    edges: FixedBitSet,
}

impl Region {
    pub fn empty(space: &DiscreteSpace) -> Self {
        Self {
            vertices: FixedBitSet::with_capacity(space.vertex_count()),
            edges: FixedBitSet::with_capacity(space.edge_count()),
        }
    }

    pub fn full(space: &DiscreteSpace) -> Self {
        let mut r = Self::empty(space);
        r.vertices.insert_range(..);
        r.edges.insert_range(..);
        r
    }

    /// The given vertices and every space edge between them.
    pub fn induced(space: &DiscreteSpace, vertices: impl IntoIterator<Item = usize>) -> Self {
        let mut r = Self::empty(space);
        r.vertices.extend(vertices);
        for (i, &(u, v)) in space.edges.iter().enumerate() {
            if r.vertices.contains(u) && r.vertices.contains(v) {
                r.edges.insert(i);
            }
        }
        r
    }

    /// Builds a region from vertex indices and edge ids, checking incidence closure.
    pub fn new(
        space: &DiscreteSpace,
        vertices: impl IntoIterator<Item = usize>,
        edges: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let mut r = Self::empty(space);
        for v in vertices {
            if v >= space.vertex_count() {
                return Err(Error::InvalidSpace(format!("vertex index {v} out of range")));
            }
            r.vertices.insert(v);
        }
        for e in edges {
            if e >= space.edge_count() {
                return Err(Error::InvalidSpace(format!("edge index {e} out of range")));
            }
            let (u, v) = space.edges[e];
            if !r.vertices.contains(u) || !r.vertices.contains(v) {
                return Err(Error::NotIncidenceClosed(
                    space.names[u].clone(),
                    space.names[v].clone(),
                ));
            }
            r.edges.insert(e);
        }
        Ok(r)
    }

    pub fn from_names<S: AsRef<str>>(
        space: &DiscreteSpace,
        vertices: &[S],
        edges: &[[S; 2]],
    ) -> Result<Self> {
        let vs = space.vertices_of(vertices)?;
        let es = edges
            .iter()
            .map(|[a, b]| {
                let u = space.vertex(a.as_ref())?;
                let v = space.vertex(b.as_ref())?;
                space.edge_id(u, v).ok_or_else(|| {
                    Error::InvalidSpace(format!(
                        "{}-{} is not an edge of the space",
                        a.as_ref(),
                        b.as_ref()
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(space, vs, es)
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.vertices.ones()
    }

    pub fn edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.edges.ones()
    }

    pub fn vertex_set(&self) -> &FixedBitSet {
        &self.vertices
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.vertices.contains(v)
    }

    pub fn contains_edge(&self, e: usize) -> bool {
        self.edges.contains(e)
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_clear()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.count_ones(..)
    }

    pub fn is_subset(&self, other: &Region) -> bool {
        self.vertices.is_subset(&other.vertices) && self.edges.is_subset(&other.edges)
    }

    pub fn intersect(&self, other: &Region) -> Region {
        let mut r = self.clone();
        r.vertices.intersect_with(&other.vertices);
        r.edges.intersect_with(&other.edges);
        r
    }

    pub fn is_disjoint(&self, other: &Region) -> bool {
        self.vertices.is_disjoint(&other.vertices)
    }

    pub fn belongs_to(&self, space: &DiscreteSpace) -> bool {
        self.vertices.len() == space.vertex_count() && self.edges.len() == space.edge_count()
    }

    pub fn is_incidence_closed(&self, space: &DiscreteSpace) -> bool {
        self.edges.ones().all(|e| {
            let (u, v) = space.edges[e];
            self.vertices.contains(u) && self.vertices.contains(v)
        })
    }

    pub fn to_json(&self, space: &DiscreteSpace) -> RegionJson {
        RegionJson {
            vertices: space.names_of(self.vertices()),
            edges: self
                .edges()
                .map(|e| {
                    let (u, v) = space.edges[e];
                    [space.names[u].clone(), space.names[v].clone()]
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionJson {
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
}

/// Intersection of a nonempty list of regions over one space.
pub fn region_intersect(space: &DiscreteSpace, rs: &[&Region]) -> Result<Region> {
    let (first, rest) = rs
        .split_first()
        .ok_or_else(|| Error::InvalidFamily("intersection of an empty list".into()))?;
    if rs.iter().any(|r| !r.belongs_to(space)) {
        return Err(Error::MixedSpaces);
    }
    Ok(rest.iter().fold((*first).clone(), |acc, r| acc.intersect(r)))
}

/// Connected components of a region as sorted vertex lists, ordered by
/// smallest vertex.
pub fn components(space: &DiscreteSpace, r: &Region) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::<usize>::new(space.vertex_count());
    for e in r.edges() {
        let (u, v) = space.edge(e);
        uf.union(u, v);
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut root_to_first: HashMap<usize, usize> = HashMap::new();
    for v in r.vertices() {
        let first = *root_to_first.entry(uf.find(v)).or_insert(v);
        groups.entry(first).or_default().push(v);
    }
    groups.into_values().collect()
}

pub fn component_count(space: &DiscreteSpace, r: &Region) -> usize {
    components(space, r).len()
}

/// Shortest walk from `from` to `to` using only vertices and edges of `r`;
/// neighbors are explored in index order.
pub fn bfs_walk(space: &DiscreteSpace, r: &Region, from: usize, to: usize) -> Option<Vec<usize>> {
    if !r.contains_vertex(from) || !r.contains_vertex(to) {
        return None;
    }
    let mut prev = vec![usize::MAX; space.vertex_count()];
    prev[from] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        if u == to {
            let mut path = vec![to];
            let mut at = to;
            while at != from {
                at = prev[at];
                path.push(at);
            }
            path.reverse();
            return Some(path);
        }
        for &(w, e) in space.neighbors(u) {
            if prev[w] == usize::MAX && r.contains_edge(e) {
                prev[w] = u;
                queue.push_back(w);
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Member {
    pub name: String,
    pub region: Region,
}

/// Named regions over one space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFamily {
    space: DiscreteSpace,
    members: Vec<Member>,
    closed: bool,
}

impl SetFamily {
    pub fn new(space: DiscreteSpace, members: Vec<Member>, closed: bool) -> Result<Self> {
        let mut seen = HashSet::new();
        for m in &members {
            if !seen.insert(m.name.as_str()) {
                return Err(Error::InvalidFamily(format!("duplicate member name `{}`", m.name)));
            }
            if !m.region.belongs_to(&space) {
                return Err(Error::MixedSpaces);
            }
            if let Some(e) = m.region.edges().find(|&e| {
                let (u, v) = space.edge(e);
                !m.region.contains_vertex(u) || !m.region.contains_vertex(v)
            }) {
                let (u, v) = space.edge(e);
                return Err(Error::NotIncidenceClosed(
                    space.name(u).to_string(),
                    space.name(v).to_string(),
                ));
            }
        }
        Ok(Self {
            space,
            members,
            closed,
        })
    }

    pub fn space(&self) -> &DiscreteSpace {
        &self.space
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn member(&self, name: &str) -> Option<&Region> {
        self.members.iter().find(|m| m.name == name).map(|m| &m.region)
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Intersection of all members whose vertex set contains `points`; the
    /// whole space when no member does.
    pub fn hull_of(&self, points: &FixedBitSet) -> Region {
        let mut acc = Region::full(&self.space);
        for m in &self.members {
            if points.is_subset(&m.region.vertices) {
                acc.vertices.intersect_with(&m.region.vertices);
                acc.edges.intersect_with(&m.region.edges);
            }
        }
        acc
    }

    pub fn hull(&self, points: impl IntoIterator<Item = usize>) -> Region {
        let mut set = FixedBitSet::with_capacity(self.space.vertex_count());
        set.extend(points);
        self.hull_of(&set)
    }

    /// `conv` of named points.
    pub fn closure<S: AsRef<str>>(&self, points: &[S]) -> Result<Region> {
        Ok(self.hull(self.space.vertices_of(points)?))
    }

    /// Every distinct intersection of a subfamily; the empty subfamily
    /// contributes the whole space.
    pub fn subfamily_intersections(&self) -> Result<Vec<Region>> {
        self.check_member_count()?;
        let mut seen: HashSet<Region> = HashSet::new();
        let full = Region::full(&self.space);
        seen.insert(full.clone());
        let mut all = vec![full];
        for m in &self.members {
            let fresh: Vec<Region> = all
                .iter()
                .map(|r| r.intersect(&m.region))
                .filter(|r| !seen.contains(r))
                .collect();
            for r in fresh {
                if seen.insert(r.clone()) {
                    all.push(r);
                }
            }
            if all.len() > MAX_LATTICE {
                return Err(Error::TooLarge(format!(
                    "more than {MAX_LATTICE} distinct intersections"
                )));
            }
        }
        Ok(all)
    }

    fn check_member_count(&self) -> Result<()> {
        if self.members.len() > MAX_MEMBERS {
            return Err(Error::TooLarge(format!(
                "family has {} members, the limit is {MAX_MEMBERS}",
                self.members.len()
            )));
        }
        Ok(())
    }

    /// Largest component count over all subfamily intersections, minus one.
    pub fn tc1(&self) -> Result<usize> {
        Ok(self
            .subfamily_intersections()?
            .iter()
            .map(|r| component_count(&self.space, r).saturating_sub(1))
            .max()
            .unwrap_or(0))
    }

    /// Adds every intersection of a nonempty subfamily as a member.
    ///
    /// New members are named `I(A,B,...)` after the first generating subfamily
    /// found, processing members in order.
    pub fn close_under_intersection(&self) -> Result<SetFamily> {
        self.check_member_count()?;
        let mut known: HashMap<Region, usize> = HashMap::new();
        let mut out: Vec<Member> = Vec::new();
        for m in &self.members {
            if !known.contains_key(&m.region) {
                known.insert(m.region.clone(), out.len());
                out.push(m.clone());
            }
        }
        let names: Vec<&str> = self.members.iter().map(|m| m.name.as_str()).collect();
        // Lattice of nonempty-subfamily intersections with a generator list each.
        let mut lattice: Vec<(Region, Vec<usize>)> = Vec::new();
        let mut in_lattice: HashSet<Region> = HashSet::new();
        for (i, m) in self.members.iter().enumerate() {
            let mut fresh = Vec::new();
            if in_lattice.insert(m.region.clone()) {
                fresh.push((m.region.clone(), vec![i]));
            }
            for (r, g) in &lattice {
                let x = r.intersect(&m.region);
                if in_lattice.insert(x.clone()) {
                    let mut g = g.clone();
                    g.push(i);
                    fresh.push((x, g));
                }
            }
            lattice.extend(fresh);
            if lattice.len() > MAX_LATTICE {
                return Err(Error::TooLarge(format!(
                    "more than {MAX_LATTICE} distinct intersections"
                )));
            }
        }
        for (r, g) in lattice {
            if known.contains_key(&r) {
                continue;
            }
            let mut name = format!(
                "I({})",
                g.iter().map(|&i| names[i]).collect::<Vec<_>>().join(",")
            );
            while out.iter().any(|m| m.name == name) {
                name.push('\'');
            }
            known.insert(r.clone(), out.len());
            out.push(Member { name, region: r });
        }
        SetFamily::new(self.space.clone(), out, true)
    }

    pub fn to_json(&self) -> FamilyJson {
        FamilyJson {
            space: self.space.to_json(),
            sets: self
                .members
                .iter()
                .map(|m| {
                    let r = m.region.to_json(&self.space);
                    SetJson {
                        name: m.name.clone(),
                        vertices: r.vertices,
                        edges: r.edges,
                    }
                })
                .collect(),
            closed_under_intersection: self.closed,
        }
    }

    pub fn from_json(json: &FamilyJson) -> Result<Self> {
        let space = DiscreteSpace::from_json(&json.space)?;
        let members = json
            .sets
            .iter()
            .map(|s| {
                Ok(Member {
                    name: s.name.clone(),
                    region: Region::from_names(&space, &s.vertices, &s.edges)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(space, members, json.closed_under_intersection)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&serde_json::from_str(&text)?)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("family JSON is serializable")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetJson {
    pub name: String,
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyJson {
    pub space: GraphJson,
    pub sets: Vec<SetJson>,
    #[serde(default)]
    pub closed_under_intersection: bool,
}
