//! Exact graph representation and edge-stream preprocessing.
//!
//! Vertices are dense `u32` labels. Streams produced by [`preprocess`] carry
//! labels in `0..n` with no self-loops and no duplicate edges; estimators
//! downstream trust that and do not re-check.

use std::collections::HashMap;
use std::collections::HashSet;
use std::io::BufRead;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub type VertexId = u32;

/// Undirected edge stored as `(min, max)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    u: VertexId,
    v: VertexId,
}

impl Edge {
    pub fn new(a: VertexId, b: VertexId) -> Result<Self> {
        if a == b {
            return Err(Error::SelfLoop(a));
        }
        Ok(Edge {
            u: a.min(b),
            v: a.max(b),
        })
    }

    #[inline]
    pub fn u(&self) -> VertexId {
        self.u
    }

    #[inline]
    pub fn v(&self) -> VertexId {
        self.v
    }

    #[inline]
    pub fn endpoints(&self) -> (VertexId, VertexId) {
        (self.u, self.v)
    }
}

/// An ordered, insert-only sequence of edges.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgeStream {
    edges: Vec<Edge>,
    n_hint: Option<usize>,
}

impl EdgeStream {
    pub fn new(edges: Vec<Edge>) -> Self {
        EdgeStream {
            edges,
            n_hint: None,
        }
    }

    /// Builds a stream from raw pairs without cleaning. Self-loops are
    /// rejected; duplicates are kept and will be refused by [`build_graph`].
    pub fn from_pairs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let edges = pairs
            .into_iter()
            .map(|(a, b)| Edge::new(a, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(EdgeStream::new(edges))
    }

    pub fn with_n_hint(mut self, n: usize) -> Self {
        self.n_hint = Some(n);
        self
    }

    pub fn n_hint(&self) -> Option<usize> {
        self.n_hint
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn iter(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn max_label(&self) -> Option<VertexId> {
        self.edges.iter().map(|e| e.v).max()
    }

    /// `n_hint` when present, otherwise max label + 1 (0 for an empty stream).
    pub fn vertex_count(&self) -> usize {
        let seen = self.max_label().map_or(0, |l| l as usize + 1);
        match self.n_hint {
            Some(h) => h.max(seen),
            None => seen,
        }
    }
}

/// Drops self-loops and duplicate edges (either orientation, first kept),
/// relabels vertices to `0..n` by first appearance, then applies a seeded
/// uniform shuffle.
pub fn preprocess(raw: &[(u64, u64)], seed: u64) -> EdgeStream {
    let mut labels: HashMap<u64, VertexId> = HashMap::new();
    let mut seen: HashSet<(u64, u64)> = HashSet::with_capacity(raw.len());
    let mut edges = Vec::with_capacity(raw.len());

    for &(a, b) in raw {
        if a == b {
            continue;
        }
        if !seen.insert((a.min(b), a.max(b))) {
            continue;
        }
        let mut label = |x: u64| {
            let next = labels.len() as VertexId;
            *labels.entry(x).or_insert(next)
        };
        let (la, lb) = (label(a), label(b));
        edges.push(Edge {
            u: la.min(lb),
            v: la.max(lb),
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    edges.shuffle(&mut rng);
    EdgeStream::new(edges)
}

/// Parses the whitespace-separated edge-list text format: one `u v` pair per
/// line, extra columns ignored, `#` and `%` lines are comments.
pub fn parse_edge_list<R: BufRead>(reader: R, origin: &Path) -> Result<Vec<(u64, u64)>> {
    let mut pairs = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx as u64 + 1;
        let line = line.map_err(|e| Error::io(origin, e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let mut next = |what: &str| -> Result<u64> {
            let tok = tokens
                .next()
                .ok_or_else(|| Error::parse(origin, lineno, format!("missing {what} vertex")))?;
            tok.parse::<u64>()
                .map_err(|_| Error::parse(origin, lineno, format!("invalid vertex label {tok:?}")))
        };
        let a = next("first")?;
        let b = next("second")?;
        pairs.push((a, b));
    }
    Ok(pairs)
}

pub fn read_edge_list(path: &Path) -> Result<Vec<(u64, u64)>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list(std::io::BufReader::new(file), path)
}

/// Exact, in-memory adjacency view.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<VertexId>>,
    m: usize,
}

impl Graph {
    /// Builds a graph on `n` vertices; duplicate edges are an error.
    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        let stream = EdgeStream::from_pairs(edges.iter().copied())?.with_n_hint(n);
        build_graph(&stream)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v as usize].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        let (x, y) = if self.adj[a as usize].len() <= self.adj[b as usize].len() {
            (a, b)
        } else {
            (b, a)
        };
        self.adj[x as usize].binary_search(&y).is_ok()
    }

    /// Edges as `(min, max)` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, ns)| {
            ns.iter()
                .filter(move |&&w| (w as usize) > u)
                .map(move |&w| Edge {
                    u: u as VertexId,
                    v: w,
                })
        })
    }

    /// Returns the graph with vertex `v` renamed to `perm[v]`.
    pub fn relabeled(&self, perm: &[VertexId]) -> Result<Self> {
        if perm.len() != self.n() {
            return Err(Error::LengthMismatch(perm.len(), self.n()));
        }
        let edges: Vec<_> = self
            .edges()
            .map(|e| (perm[e.u as usize], perm[e.v as usize]))
            .collect();
        Graph::from_edges(self.n(), &edges)
    }
}

pub fn build_graph(stream: &EdgeStream) -> Result<Graph> {
    let n = stream.vertex_count();
    let mut adj: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    for e in stream.iter() {
        adj[e.u as usize].push(e.v);
        adj[e.v as usize].push(e.u);
    }
    for (u, ns) in adj.iter_mut().enumerate() {
        ns.sort_unstable();
        if let Some(w) = ns.windows(2).find(|w| w[0] == w[1]) {
            let (a, b) = (u as VertexId, w[0]);
            return Err(Error::DuplicateEdge(a.min(b), a.max(b)));
        }
    }
    Ok(Graph {
        adj,
        m: stream.len(),
    })
}
