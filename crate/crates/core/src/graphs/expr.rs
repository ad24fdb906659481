use std::fmt;

use super::Graph;
use crate::error::{Error, Result};

/// Expression tree over complete, complete bipartite and explicit graphs,
/// combined by join (`J`) and disjoint union (`U`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphExpr {
    /// `K(n)`, n >= 1.
    Complete(usize),
    /// `B(m,n)`, m, n >= 1.
    Bipartite(usize, usize),
    /// A graph loaded from `file(path)`.
    Explicit { graph: Graph, source: String },
    Join(Vec<GraphExpr>),
    Union(Vec<GraphExpr>),
}

impl GraphExpr {
    pub fn k1() -> Self {
        GraphExpr::Complete(1)
    }

    /// `t` disjoint copies of `e`.
    pub fn copies(t: usize, e: GraphExpr) -> Self {
        GraphExpr::Union(vec![e; t])
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            GraphExpr::Complete(0) => Err(Error::InvalidExpr("K0 is not a graph".into())),
            GraphExpr::Bipartite(m, n) if *m == 0 || *n == 0 => {
                Err(Error::InvalidExpr(format!("B({m},{n}) needs both parts nonempty")))
            }
            GraphExpr::Join(cs) | GraphExpr::Union(cs) => {
                if cs.is_empty() {
                    return Err(Error::InvalidExpr("empty join or union".into()));
                }
                cs.iter().try_for_each(GraphExpr::validate)
            }
            _ => Ok(()),
        }
    }

    pub fn vertex_count(&self) -> usize {
        match self {
            GraphExpr::Complete(n) => *n,
            GraphExpr::Bipartite(m, n) => m + n,
            GraphExpr::Explicit { graph, .. } => graph.vertex_count(),
            GraphExpr::Join(cs) | GraphExpr::Union(cs) => cs.iter().map(Self::vertex_count).sum(),
        }
    }

    /// Builds the graph; vertices are numbered in left-to-right leaf order.
    pub fn realize(&self) -> Graph {
        match self {
            GraphExpr::Complete(n) => Graph::complete(*n),
            GraphExpr::Bipartite(m, n) => Graph::complete_bipartite(*m, *n),
            GraphExpr::Explicit { graph, .. } => {
                let mut g = graph.clone();
                g.names = None;
                g
            }
            GraphExpr::Join(cs) => cs
                .iter()
                .map(Self::realize)
                .reduce(|a, b| a.join(&b))
                .unwrap_or_else(|| Graph::empty(0)),
            GraphExpr::Union(cs) => cs
                .iter()
                .map(Self::realize)
                .reduce(|a, b| a.disjoint_union(&b))
                .unwrap_or_else(|| Graph::empty(0)),
        }
    }
}

impl fmt::Display for GraphExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphExpr::Complete(n) => write!(f, "K{n}"),
            GraphExpr::Bipartite(m, n) => write!(f, "B({m},{n})"),
            GraphExpr::Explicit { source, .. } => write!(f, "file({source})"),
            GraphExpr::Join(cs) | GraphExpr::Union(cs) => {
                f.write_str(if matches!(self, GraphExpr::Join(_)) { "J(" } else { "U(" })?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Parses the expression grammar
///
/// ```text
/// expr := "K" INT | "B(" INT "," INT ")" | "U(" expr ("," expr)* ")"
///       | "J(" expr ("," expr)* ")" | INT "*" expr | "file(" path ")"
/// ```
///
/// Whitespace between tokens is ignored. `t*e` becomes a union of `t` copies.
pub fn parse_expr(text: &str) -> Result<GraphExpr> {
    let mut p = Parser { src: text, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(p.error("trailing input"));
    }
    e.validate()?;
    Ok(e)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    /// `name` followed by `(`, with optional whitespace between them.
    fn eat_open(&mut self, name: &str) -> bool {
        let save = self.pos;
        if self.eat(name) && self.eat("(") {
            return true;
        }
        self.pos = save;
        false
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{token}`")))
        }
    }

    fn peek_int(&mut self) -> bool {
        self.skip_ws();
        self.rest().starts_with(|c: char| c.is_ascii_digit())
    }

    fn int(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        let len = self
            .rest()
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(self.rest().len());
        if len == 0 {
            return Err(self.error("expected integer"));
        }
        self.pos += len;
        self.src[start..self.pos].parse().map_err(|_| Error::Syntax {
            offset: start,
            message: "integer too large".into(),
        })
    }

    fn expr(&mut self) -> Result<GraphExpr> {
        self.skip_ws();
        let start = self.pos;
        if self.peek_int() {
            let t = self.int()?;
            self.expect("*")?;
            let e = self.expr()?;
            if t == 0 {
                return Err(Error::Syntax {
                    offset: start,
                    message: "repetition count must be positive".into(),
                });
            }
            return Ok(GraphExpr::copies(t, e));
        }
        if self.eat_open("file") {
            let close = self
                .rest()
                .find(')')
                .ok_or_else(|| self.error("unterminated file(...)"))?;
            let path = self.rest()[..close].trim().to_string();
            if path.is_empty() {
                return Err(self.error("empty path"));
            }
            let graph = Graph::load(&path)?;
            self.pos += close + 1;
            return Ok(GraphExpr::Explicit {
                graph,
                source: path,
            });
        }
        if self.eat_open("B") {
            let m = self.int()?;
            self.expect(",")?;
            let n = self.int()?;
            self.expect(")")?;
            if m == 0 || n == 0 {
                return Err(Error::Syntax {
                    offset: start,
                    message: format!("B({m},{n}) needs both parts nonempty"),
                });
            }
            return Ok(GraphExpr::Bipartite(m, n));
        }
        for (tok, is_join) in [("J", true), ("U", false)] {
            if self.eat_open(tok) {
                let mut children = vec![self.expr()?];
                while self.eat(",") {
                    children.push(self.expr()?);
                }
                self.expect(")")?;
                return Ok(if is_join {
                    GraphExpr::Join(children)
                } else {
                    GraphExpr::Union(children)
                });
            }
        }
        if self.eat("K") {
            let n = self.int()?;
            if n == 0 {
                return Err(Error::Syntax {
                    offset: start,
                    message: "K0 is not a graph".into(),
                });
            }
            return Ok(GraphExpr::Complete(n));
        }
        Err(self.error("expected K, B(, J(, U(, file( or a repetition count"))
    }
}
