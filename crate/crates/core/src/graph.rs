//! The social graph: an immutable undirected simple graph on vertices `1..=n`.
//!
//! Vertex ids are 1-based throughout the public API. Edges are stored as
//! `(u, v)` with `u < v` and kept in lexicographic order, so every iteration
//! over edges or neighbors is deterministic.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::rng::Stream;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    // adjacency[v - 1] holds the neighbors of v in ascending order
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from 1-based edge pairs in any orientation.
    ///
    /// Rejects self-loops, out-of-range endpoints and duplicates (`{1,2}`
    /// and `{2,1}` are the same edge).
    pub fn new<I>(n: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut builder = Builder::new(n)?;
        for (u, v) in edges {
            builder.add(u, v)?;
        }
        Ok(builder.finish())
    }

    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Result<Graph> {
        Graph::new(n, std::iter::empty())
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonically ordered edges, each as `(min, max)`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Neighbors of `v` in ascending order.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v - 1]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v - 1].len()
    }

    /// Δ(G). Zero for an edgeless graph.
    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if u == 0 || v == 0 || u > self.n || v > self.n {
            return false;
        }
        self.adjacency[u - 1].binary_search(&v).is_ok()
    }

    /// True iff every pair of vertices is joined by a path. A single vertex
    /// counts as connected.
    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Vertex sets of the connected components, each sorted, ordered by
    /// smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        components_of(self.n, |v| self.neighbors(v).iter().copied())
    }

    /// True iff the graph is a star `K_{1,m}` with `m >= 1`: connected with
    /// one center adjacent to every other vertex and no further edges.
    ///
    /// A single edge (`K_{1,1}`) is a star; a single vertex is not.
    pub fn is_star(&self) -> bool {
        self.n >= 2
            && self.edges.len() == self.n - 1
            && self.adjacency.iter().any(|nb| nb.len() == self.n - 1)
    }

    /// `L = D - A`. Entries are small integers, so the zero row and column
    /// sums are exact in floating point.
    pub fn laplacian(&self) -> DMatrix<f64> {
        let mut l = DMatrix::zeros(self.n, self.n);
        for &(u, v) in &self.edges {
            l[(u - 1, v - 1)] -= 1.0;
            l[(v - 1, u - 1)] -= 1.0;
            l[(u - 1, u - 1)] += 1.0;
            l[(v - 1, v - 1)] += 1.0;
        }
        l
    }

    /// Canonical edge-list text, accepted back by [`parse_edge_list`].
    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n {}", self.n)?;
        for (u, v) in &self.edges {
            writeln!(f, "{u} {v}")?;
        }
        Ok(())
    }
}

/// Connected components of an implicit graph on `1..=n`.
pub(crate) fn components_of<F, I>(n: usize, neighbors: F) -> Vec<Vec<usize>>
where
    F: Fn(usize) -> I,
    I: IntoIterator<Item = usize>,
{
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 1..=n {
        if seen[start - 1] {
            continue;
        }
        seen[start - 1] = true;
        let mut comp = vec![start];
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for w in neighbors(v) {
                if !seen[w - 1] {
                    seen[w - 1] = true;
                    comp.push(w);
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

struct Builder {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Builder {
    fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidOrder);
        }
        Ok(Builder {
            n,
            edges: BTreeSet::new(),
        })
    }

    fn add(&mut self, u: usize, v: usize) -> Result<()> {
        for vertex in [u, v] {
            if vertex == 0 || vertex > self.n {
                return Err(Error::VertexOutOfRange { vertex, n: self.n });
            }
        }
        if u == v {
            return Err(Error::SelfLoop { vertex: u });
        }
        let key = (u.min(v), u.max(v));
        if !self.edges.insert(key) {
            return Err(Error::DuplicateEdge { u, v });
        }
        Ok(())
    }

    fn finish(self) -> Graph {
        let mut adjacency = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adjacency[u - 1].push(v);
            adjacency[v - 1].push(u);
        }
        for nb in &mut adjacency {
            nb.sort_unstable();
        }
        Graph {
            n: self.n,
            edges: self.edges.into_iter().collect(),
            adjacency,
        }
    }
}

/// Parses the edge-list format:
///
/// ```text
/// # comments start with '#'
/// n 3
/// 1 2
/// 2 3
/// ```
///
/// Blank lines are skipped. Errors carry the 1-based line number.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut builder: Option<Builder> = None;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        match builder.as_mut() {
            None => {
                let n = match fields.as_slice() {
                    ["n", count] => count.parse::<usize>().map_err(|_| Error::Parse {
                        line,
                        msg: format!("invalid vertex count {count:?}"),
                    })?,
                    _ => {
                        return Err(Error::Parse {
                            line,
                            msg: "expected header \"n <count>\"".into(),
                        })
                    }
                };
                builder = Some(Builder::new(n).map_err(|e| at(line, e))?);
            }
            Some(b) => {
                let (u, v) = match fields.as_slice() {
                    [u, v] => (parse_vertex(u, line)?, parse_vertex(v, line)?),
                    _ => {
                        return Err(Error::Parse {
                            line,
                            msg: format!("expected \"<u> <v>\", got {trimmed:?}"),
                        })
                    }
                };
                b.add(u, v).map_err(|e| at(line, e))?;
            }
        }
    }
    builder.map(Builder::finish).ok_or(Error::Parse {
        line: last_line.max(1),
        msg: "missing header \"n <count>\"".into(),
    })
}

fn parse_vertex(field: &str, line: usize) -> Result<usize> {
    field.parse::<usize>().map_err(|_| Error::Parse {
        line,
        msg: format!("invalid vertex id {field:?}"),
    })
}

fn at(line: usize, source: Error) -> Error {
    Error::AtLine {
        line,
        source: Box::new(source),
    }
}

/// Graph families understood by [`generate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GraphKind {
    Path(usize),
    /// For order 1 and 2 this degenerates to the path of the same order.
    Cycle(usize),
    /// Vertex 1 is the center.
    Star(usize),
    Complete(usize),
    ErdosRenyi { order: usize, p: f64 },
}

impl GraphKind {
    pub fn order(&self) -> usize {
        match *self {
            GraphKind::Path(n)
            | GraphKind::Cycle(n)
            | GraphKind::Star(n)
            | GraphKind::Complete(n) => n,
            GraphKind::ErdosRenyi { order, .. } => order,
        }
    }
}

/// Parses `path:5`, `cycle:4`, `star:6`, `complete:3`, `erdos_renyi:8:0.5`.
impl FromStr for GraphKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: String| Error::Parse { line: 1, msg };
        let parts: Vec<&str> = s.split(':').collect();
        let order = |field: &str| {
            field
                .parse::<usize>()
                .map_err(|_| bad(format!("invalid order {field:?}")))
        };
        match parts.as_slice() {
            ["path", n] => Ok(GraphKind::Path(order(n)?)),
            ["cycle", n] => Ok(GraphKind::Cycle(order(n)?)),
            ["star", n] => Ok(GraphKind::Star(order(n)?)),
            ["complete", n] => Ok(GraphKind::Complete(order(n)?)),
            ["erdos_renyi", n, p] => Ok(GraphKind::ErdosRenyi {
                order: order(n)?,
                p: p.parse().map_err(|_| bad(format!("invalid probability {p:?}")))?,
            }),
            _ => Err(bad(format!(
                "unknown generator {s:?} (expected path:N, cycle:N, star:N, complete:N or erdos_renyi:N:P)"
            ))),
        }
    }
}

/// Deterministic graph generation. Only `ErdosRenyi` consumes the seed:
/// one uniform draw per vertex pair `(u, v)`, `u < v`, in lexicographic
/// order, keeping the edge when the draw is below `p`.
pub fn generate(kind: GraphKind, seed: u64) -> Result<Graph> {
    let n = kind.order();
    if n == 0 {
        return Err(Error::InvalidOrder);
    }
    match kind {
        GraphKind::Path(_) => Graph::new(n, (1..n).map(|v| (v, v + 1))),
        GraphKind::Cycle(_) => {
            let closing = (n >= 3).then_some((1, n));
            Graph::new(n, (1..n).map(|v| (v, v + 1)).chain(closing))
        }
        GraphKind::Star(_) => Graph::new(n, (2..=n).map(|k| (1, k))),
        GraphKind::Complete(_) => Graph::new(n, pairs(n)),
        GraphKind::ErdosRenyi { p, .. } => {
            let mut stream = Stream::new(seed);
            erdos_renyi(n, p, &mut stream)
        }
    }
}

/// `G(n, p)` drawn from an existing stream.
pub fn erdos_renyi(n: usize, p: f64, stream: &mut Stream) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidOrder);
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    let edges: Vec<_> = pairs(n).filter(|_| stream.next_f64() < p).collect();
    Graph::new(n, edges)
}

/// Draws `G(n, p)` repeatedly from `stream` until the result is connected
/// and, when `allow_star` is false, not a star. `p` must be positive when
/// `n > 1`.
pub fn random_connected(n: usize, p: f64, allow_star: bool, stream: &mut Stream) -> Result<Graph> {
    if n > 1 && p <= 0.0 {
        return Err(Error::InvalidProbability(p));
    }
    loop {
        let g = erdos_renyi(n, p, stream)?;
        if g.is_connected() && (allow_star || !g.is_star()) {
            return Ok(g);
        }
    }
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=n).flat_map(move |u| (u + 1..=n).map(move |v| (u, v)))
}
