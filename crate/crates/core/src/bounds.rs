//! The bound calculus: polynomials `q_G(b)` derived from join/union
//! decompositions, a memoized decomposition search over arbitrary small
//! graphs, the degree bound, and the catalog of graphs that do not
//! almost-embed into standard spaces.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::{Graph, GraphExpr};
use crate::polynomial::Polynomial;

/// Largest graph accepted by [`q_search`].
pub const MAX_SEARCH_VERTICES: usize = 16;

/// `(b^2 - b + 1)(p - 1) + b + 1`: the bound for `K1 + G` given the bound `p` for `G`.
pub fn join_rule(p: &Polynomial) -> Polynomial {
    let quad = Polynomial::from_coeffs([1, -1, 1]);
    let lin = Polynomial::from_coeffs([1, 1]);
    &(&quad * &(p - &Polynomial::one())) + &lin
}

/// [`join_rule`] on a value at a fixed `b`.
pub fn join_rule_value(p: &BigInt, b: u64) -> BigInt {
    let b = BigInt::from(b);
    (&b * &b - &b + 1) * (p - 1) + &b + 1
}

/// Normal form of an expression accepted by the join rule: every join is a
/// chain of single-vertex peels around one innermost operand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Shape {
    K1,
    Union(Vec<Shape>),
    /// `K1 + ... + K1 + inner` with `k >= 1` peeled vertices.
    Peel { inner: Box<Shape>, k: usize },
}

impl Shape {
    pub(crate) fn from_expr(e: &GraphExpr) -> Result<Shape> {
        match e {
            GraphExpr::Complete(0) => Err(Error::InvalidExpr("K0 is not a graph".into())),
            GraphExpr::Complete(1) => Ok(Shape::K1),
            GraphExpr::Complete(n) => Ok(Shape::Peel {
                inner: Box::new(Shape::K1),
                k: n - 1,
            }),
            GraphExpr::Bipartite(m, n) => {
                let inner = if *m == 1 {
                    Shape::K1
                } else {
                    Shape::Union(vec![Shape::K1; *m])
                };
                Ok(Shape::Peel {
                    inner: Box::new(inner),
                    k: *n,
                })
            }
            GraphExpr::Explicit { source, .. } => Err(Error::ExplicitLeaf(source.clone())),
            GraphExpr::Union(cs) => {
                let mut parts = Vec::new();
                for c in cs {
                    match Shape::from_expr(c)? {
                        Shape::Union(inner) => parts.extend(inner),
                        s => parts.push(s),
                    }
                }
                Ok(match parts.len() {
                    0 => return Err(Error::InvalidExpr("empty union".into())),
                    1 => parts.pop().unwrap(),
                    _ => Shape::Union(parts),
                })
            }
            GraphExpr::Join(cs) => {
                let mut k1s = 0usize;
                let mut cores = Vec::new();
                for c in cs {
                    match Shape::from_expr(c)? {
                        Shape::K1 => k1s += 1,
                        Shape::Peel { inner, k } => {
                            k1s += k;
                            match *inner {
                                Shape::K1 => k1s += 1,
                                core => cores.push(core),
                            }
                        }
                        core => cores.push(core),
                    }
                }
                let (inner, k) = match cores.len() {
                    0 if k1s == 0 => return Err(Error::InvalidExpr("empty join".into())),
                    0 => (Shape::K1, k1s - 1),
                    1 => (cores.pop().unwrap(), k1s),
                    n => return Err(Error::JoinRuleInapplicable(n)),
                };
                Ok(Shape::peel(inner, k))
            }
        }
    }

    pub(crate) fn peel(inner: Shape, k: usize) -> Shape {
        match (inner, k) {
            (s, 0) => s,
            (Shape::Peel { inner, k: j }, k) => Shape::Peel { inner, k: j + k },
            (s, k) => Shape::Peel {
                inner: Box::new(s),
                k,
            },
        }
    }

    pub(crate) fn poly(&self) -> Polynomial {
        match self {
            Shape::K1 => Polynomial::one(),
            Shape::Union(cs) => cs.iter().map(Shape::poly).sum(),
            Shape::Peel { inner, k } => (0..*k).fold(inner.poly(), |p, _| join_rule(&p)),
        }
    }

    /// The expression this shape stands for; all-K1 joins print as `Kn`.
    pub(crate) fn to_expr(&self) -> GraphExpr {
        match self {
            Shape::K1 => GraphExpr::k1(),
            Shape::Union(cs) => GraphExpr::Union(cs.iter().map(Shape::to_expr).collect()),
            Shape::Peel { inner, k } if **inner == Shape::K1 => GraphExpr::Complete(k + 1),
            Shape::Peel { inner, k } => {
                let mut cs = vec![inner.to_expr()];
                cs.extend(std::iter::repeat_n(GraphExpr::k1(), *k));
                GraphExpr::Join(cs)
            }
        }
    }
}

/// One rule application; child references index earlier steps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "lowercase")]
pub enum Rule {
    /// `q_{K1} = 1`.
    Base,
    /// `q_{G ⊔ H} = q_G + q_H`.
    Union { children: Vec<usize> },
    /// `q_{K1 + G} = (b^2 - b + 1)(q_G - 1) + b + 1`.
    Join { inner: usize },
    /// The searched graph is a subgraph of the child's graph.
    Subgraph { of: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Step {
    #[serde(flatten)]
    pub rule: Rule,
    pub poly: Polynomial,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundDerivation {
    #[serde(serialize_with = "crate::util::display")]
    pub expr: GraphExpr,
    pub poly: Polynomial,
    /// Bottom-up; the last step is the root.
    pub steps: Vec<Step>,
    /// For searched derivations: `cover[i]` is the vertex of the input graph
    /// placed at vertex `i` of `expr.realize()`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cover: Option<Vec<usize>>,
}

impl BoundDerivation {
    fn from_shape(shape: &Shape) -> Self {
        let mut steps = Vec::new();
        push_steps(shape, &mut steps);
        BoundDerivation {
            expr: shape.to_expr(),
            poly: steps.last().map(|s| s.poly.clone()).unwrap_or_default(),
            steps,
            cover: None,
        }
    }

    /// Recomputes every step from its rule alone and returns the root polynomial.
    pub fn replay(&self) -> Result<Polynomial> {
        let mut values: Vec<Polynomial> = Vec::with_capacity(self.steps.len());
        for (i, step) in self.steps.iter().enumerate() {
            let get = |j: usize| {
                values.get(j).cloned().ok_or_else(|| {
                    Error::Internal(format!("step {i} references later step {j}"))
                })
            };
            let p = match &step.rule {
                Rule::Base => Polynomial::one(),
                Rule::Union { children } => {
                    let mut acc = Polynomial::zero();
                    for &c in children {
                        acc = &acc + &get(c)?;
                    }
                    acc
                }
                Rule::Join { inner } => join_rule(&get(*inner)?),
                Rule::Subgraph { of } => get(*of)?,
            };
            if p != step.poly {
                return Err(Error::Internal(format!("step {i} does not replay")));
            }
            values.push(p);
        }
        values
            .pop()
            .ok_or_else(|| Error::Internal("empty derivation".into()))
    }

    /// Indented rule trace, root first.
    pub fn trace(&self) -> String {
        let mut out = String::new();
        if let Some(root) = self.steps.len().checked_sub(1) {
            self.trace_step(root, 0, &mut out);
        }
        out
    }

    fn trace_step(&self, i: usize, depth: usize, out: &mut String) {
        let step = &self.steps[i];
        let pad = "  ".repeat(depth);
        let label = match &step.rule {
            Rule::Base => "base K1".to_string(),
            Rule::Union { children } => format!("union of {}", children.len()),
            Rule::Join { .. } => "join K1 +".to_string(),
            Rule::Subgraph { .. } => "subgraph of".to_string(),
        };
        out.push_str(&format!("{pad}{label}: {}\n", step.poly));
        match &step.rule {
            Rule::Base => {}
            Rule::Union { children } => {
                for &c in children {
                    self.trace_step(c, depth + 1, out);
                }
            }
            Rule::Join { inner } => self.trace_step(*inner, depth + 1, out),
            Rule::Subgraph { of } => self.trace_step(*of, depth + 1, out),
        }
    }
}

fn push_steps(shape: &Shape, steps: &mut Vec<Step>) -> usize {
    match shape {
        Shape::K1 => {
            steps.push(Step {
                rule: Rule::Base,
                poly: Polynomial::one(),
            });
        }
        Shape::Union(cs) => {
            let children: Vec<usize> = cs.iter().map(|c| push_steps(c, steps)).collect();
            let poly = children.iter().map(|&c| steps[c].poly.clone()).sum();
            steps.push(Step {
                rule: Rule::Union { children },
                poly,
            });
        }
        Shape::Peel { inner, k } => {
            let mut at = push_steps(inner, steps);
            for _ in 0..*k {
                let poly = join_rule(&steps[at].poly);
                steps.push(Step {
                    rule: Rule::Join { inner: at },
                    poly,
                });
                at = steps.len() - 1;
            }
        }
    }
    steps.len() - 1
}

/// Evaluates the bound of an expression by the base, union and join rules.
///
/// `K(n)` is read as a join of `n` copies of `K1` and `B(m,n)` as the
/// supergraph `J(U(K1 x m), K1 x n)`. Every join must leave at most one
/// operand that is not `K1` after flattening.
pub fn q_poly(e: &GraphExpr) -> Result<BoundDerivation> {
    e.validate()?;
    Ok(BoundDerivation::from_shape(&Shape::from_expr(e)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    /// Minimize the bound's value at the given `b`.
    Value,
    /// Minimize by degree, then coefficients from the highest power.
    Asymptotic,
}

impl FromStr for SearchMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "value" => Ok(SearchMode::Value),
            "asymptotic" => Ok(SearchMode::Asymptotic),
            _ => Err(Error::Range(format!("unknown search mode `{s}`"))),
        }
    }
}

struct Entry {
    poly: Polynomial,
    value: BigInt,
    shape: Shape,
    /// Input vertices in realization order of `shape`.
    order: Vec<usize>,
}

/// Searches join/union decompositions of supergraphs of `g`.
///
/// Over every induced vertex subset `S`: a single vertex costs 1, a
/// disconnected `g[S]` costs the sum over its components, and a connected
/// `g[S]` costs the join rule applied to the best `S - {v}`. Ties go to the
/// smallest removed vertex.
pub fn q_search(g: &Graph, b: u64, mode: SearchMode) -> Result<BoundDerivation> {
    let n = g.vertex_count();
    if n > MAX_SEARCH_VERTICES {
        return Err(Error::TooLarge(format!(
            "search needs at most {MAX_SEARCH_VERTICES} vertices, graph has {n}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidGraph("search needs at least one vertex".into()));
    }
    if b == 0 {
        return Err(Error::Range("b must be positive".into()));
    }
    let adj = g.adjacency_masks();
    let full = (1usize << n) - 1;
    let mut memo: Vec<Option<Entry>> = (0..=full).map(|_| None).collect();

    for mask in 1..=full {
        let entry = if mask.count_ones() == 1 {
            Entry {
                poly: Polynomial::one(),
                value: BigInt::from(1),
                shape: Shape::K1,
                order: vec![mask.trailing_zeros() as usize],
            }
        } else {
            let comps = components_of(mask, &adj);
            if comps.len() > 1 {
                let parts: Vec<&Entry> = comps
                    .iter()
                    .map(|&c| memo[c].as_ref().expect("subset visited"))
                    .collect();
                let mut shapes = Vec::new();
                for p in &parts {
                    match &p.shape {
                        Shape::Union(inner) => shapes.extend(inner.iter().cloned()),
                        s => shapes.push(s.clone()),
                    }
                }
                Entry {
                    poly: parts.iter().map(|p| p.poly.clone()).sum(),
                    value: parts.iter().map(|p| &p.value).sum(),
                    shape: Shape::Union(shapes),
                    order: parts.iter().flat_map(|p| p.order.iter().copied()).collect(),
                }
            } else {
                let mut best: Option<(usize, &Entry)> = None;
                for v in (0..n).filter(|v| mask >> v & 1 == 1) {
                    let cand = memo[mask & !(1 << v)].as_ref().expect("subset visited");
                    let better = match best {
                        None => true,
                        Some((_, cur)) => match mode {
                            SearchMode::Value => cand.value < cur.value,
                            SearchMode::Asymptotic => {
                                cand.poly.cmp_asymptotic(&cur.poly) == Ordering::Less
                            }
                        },
                    };
                    if better {
                        best = Some((v, cand));
                    }
                }
                let (v, sub) = best.expect("connected subset has a vertex");
                let mut order = sub.order.clone();
                order.push(v);
                Entry {
                    poly: join_rule(&sub.poly),
                    value: join_rule_value(&sub.value, b),
                    shape: Shape::peel(sub.shape.clone(), 1),
                    order,
                }
            }
        };
        memo[mask] = Some(entry);
    }

    let root = memo[full].take().expect("full set visited");
    let mut d = BoundDerivation::from_shape(&root.shape);
    if d.poly != root.poly {
        return Err(Error::Internal("search polynomial disagrees with its derivation".into()));
    }
    let at = d.steps.len() - 1;
    d.steps.push(Step {
        rule: Rule::Subgraph { of: at },
        poly: d.poly.clone(),
    });
    d.cover = Some(root.order);
    Ok(d)
}

/// Connected components of the induced subgraph on `mask`, as masks ordered
/// by their lowest vertex.
fn components_of(mask: usize, adj: &[u64]) -> Vec<usize> {
    let mut rest = mask;
    let mut out = Vec::new();
    while rest != 0 {
        let start = rest & rest.wrapping_neg();
        let mut comp = start;
        let mut frontier = start;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let new = (adj[v] as usize) & mask & !comp;
            comp |= new;
            frontier |= new;
        }
        rest &= !comp;
        out.push(comp);
    }
    out
}

/// `deg q <= 2|V| - 3` for the derivation's graph, which must have at least
/// two vertices.
pub fn degree_check(d: &BoundDerivation) -> Result<bool> {
    let n = d.expr.vertex_count();
    if n < 2 {
        return Err(Error::Range(
            "the degree bound needs at least two vertices".into(),
        ));
    }
    Ok(d.poly.degree().is_none_or(|deg| deg <= 2 * n - 3))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpaceTag {
    R1,
    S1,
    R2,
    /// Non-orientable surface of Euler genus g.
    N(usize),
    /// Orientable surface of genus g.
    M(usize),
    /// The star graph `K_{1,n}` as a space.
    Star(usize),
    PinchedTorus,
}

impl FromStr for SpaceTag {
    type Err = Error;

    /// Accepts `R1`, `S1`, `R2`, `N(g)`, `M(g)`, `STAR(n)` (also `N3`, `STAR3`)
    /// and `PINCHED_TORUS`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_uppercase();
        let param = |prefix: &str| -> Option<Result<usize>> {
            let rest = t.strip_prefix(prefix)?;
            let inner = rest
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .unwrap_or(rest);
            Some(
                inner
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Range(format!("bad parameter in space tag `{s}`"))),
            )
        };
        let tag = match t.as_str() {
            "R1" => SpaceTag::R1,
            "S1" => SpaceTag::S1,
            "R2" => SpaceTag::R2,
            "PINCHED_TORUS" => SpaceTag::PinchedTorus,
            _ => {
                if let Some(g) = param("STAR") {
                    SpaceTag::Star(g?)
                } else if let Some(g) = param("N") {
                    SpaceTag::N(g?)
                } else if let Some(g) = param("M") {
                    SpaceTag::M(g?)
                } else {
                    return Err(Error::Range(format!("unknown space tag `{s}`")));
                }
            }
        };
        match tag {
            SpaceTag::N(0) | SpaceTag::M(0) | SpaceTag::Star(0) => {
                Err(Error::Range(format!("space tag `{s}` needs a positive parameter")))
            }
            tag => Ok(tag),
        }
    }
}

impl fmt::Display for SpaceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceTag::R1 => f.write_str("R1"),
            SpaceTag::S1 => f.write_str("S1"),
            SpaceTag::R2 => f.write_str("R2"),
            SpaceTag::N(g) => write!(f, "N({g})"),
            SpaceTag::M(g) => write!(f, "M({g})"),
            SpaceTag::Star(n) => write!(f, "STAR({n})"),
            SpaceTag::PinchedTorus => f.write_str("PINCHED_TORUS"),
        }
    }
}

fn k1_union(n: usize) -> GraphExpr {
    GraphExpr::copies(n, GraphExpr::k1())
}

fn k33_expr() -> GraphExpr {
    GraphExpr::Join(vec![
        k1_union(3),
        GraphExpr::k1(),
        GraphExpr::k1(),
        GraphExpr::k1(),
    ])
}

/// Graphs known not to almost-embed into the tagged space, in catalog order.
pub fn catalog(tag: SpaceTag) -> Vec<GraphExpr> {
    let star = |leaves: usize| GraphExpr::Join(vec![GraphExpr::k1(), k1_union(leaves)]);
    match tag {
        SpaceTag::R1 => vec![GraphExpr::Complete(3), star(3)],
        SpaceTag::S1 => vec![
            GraphExpr::Union(vec![GraphExpr::k1(), GraphExpr::Complete(3)]),
            star(3),
        ],
        SpaceTag::R2 => vec![
            GraphExpr::Join(vec![
                GraphExpr::Complete(2),
                GraphExpr::k1(),
                GraphExpr::k1(),
                GraphExpr::k1(),
            ]),
            k33_expr(),
        ],
        SpaceTag::N(g) => vec![GraphExpr::copies(g + 1, k33_expr())],
        SpaceTag::M(g) => vec![GraphExpr::copies(2 * g + 1, k33_expr())],
        SpaceTag::Star(n) => vec![star(n + 1)],
        SpaceTag::PinchedTorus => vec![GraphExpr::Complete(8)],
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    #[serde(serialize_with = "crate::util::display")]
    pub expr: GraphExpr,
    pub poly: Polynomial,
    #[serde(serialize_with = "crate::util::display")]
    pub value: BigInt,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogBound {
    #[serde(serialize_with = "crate::util::display")]
    pub value: BigInt,
    #[serde(serialize_with = "crate::util::display")]
    pub winner: GraphExpr,
    pub all: Vec<CatalogEntry>,
}

/// Smallest catalog bound for the space at `b`; ties go to the earlier entry.
pub fn catalog_bound(tag: SpaceTag, b: u64) -> Result<CatalogBound> {
    let all = catalog(tag)
        .into_iter()
        .map(|expr| {
            let poly = q_poly(&expr)?.poly;
            let value = poly.eval(b);
            Ok(CatalogEntry { expr, poly, value })
        })
        .collect::<Result<Vec<_>>>()?;
    let best = all
        .iter()
        .reduce(|best, e| if e.value < best.value { e } else { best })
        .expect("every catalog row is nonempty");
    Ok(CatalogBound {
        value: best.value.clone(),
        winner: best.expr.clone(),
        all,
    })
}
