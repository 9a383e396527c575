//! Brute-force ground truth for pattern counts and vertex features.
//!
//! Subgraph counts are taken by enumerating every edge subset inside every
//! vertex subset of size 2..=4; induced counts by classifying each vertex
//! subset once. The two routes share nothing beyond the classifier, so
//! `H = O Ĥ` is a real check rather than an identity.

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::maeve::VertexFeatures;
use crate::patterns::{classify, pair_bit, spanning_subgraph_census, Pattern, PATTERN_COUNT};

pub const DEFAULT_ORACLE_LIMIT: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountKind {
    Subgraph,
    Induced,
}

/// Per-pattern counts in canonical order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatternCounts {
    pub values: [f64; PATTERN_COUNT],
    pub kind: CountKind,
}

impl PatternCounts {
    pub fn get(&self, p: Pattern) -> f64 {
        self.values[p.index()]
    }

    pub fn order_block(&self, k: usize) -> &[f64] {
        &self.values[Pattern::order_range(k)]
    }
}

impl std::ops::Index<Pattern> for PatternCounts {
    type Output = f64;

    fn index(&self, p: Pattern) -> &f64 {
        &self.values[p.index()]
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Oracle {
    pub limit: usize,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle {
            limit: DEFAULT_ORACLE_LIMIT,
        }
    }
}

impl Oracle {
    pub fn new(limit: usize) -> Self {
        Oracle { limit }
    }

    fn check(&self, g: &Graph) -> Result<()> {
        if g.n() > self.limit {
            return Err(Error::OracleLimit {
                n: g.n(),
                limit: self.limit,
            });
        }
        Ok(())
    }

    pub fn subgraph_counts(&self, g: &Graph) -> Result<PatternCounts> {
        self.check(g)?;
        let mut counts = [0u64; PATTERN_COUNT];
        for_each_subset(g, |k, mask| spanning_subgraph_census(k, mask, &mut counts));
        Ok(PatternCounts {
            values: counts.map(|c| c as f64),
            kind: CountKind::Subgraph,
        })
    }

    pub fn induced_counts(&self, g: &Graph) -> Result<PatternCounts> {
        self.check(g)?;
        let mut counts = [0u64; PATTERN_COUNT];
        for_each_subset(g, |k, mask| counts[classify(k, mask).index()] += 1);
        Ok(PatternCounts {
            values: counts.map(|c| c as f64),
            kind: CountKind::Induced,
        })
    }
}

/// Calls `f(k, mask)` for every vertex subset of size 2, 3 and 4, with the
/// induced edges encoded over local positions in increasing vertex order.
fn for_each_subset(g: &Graph, mut f: impl FnMut(usize, u8)) {
    let n = g.n() as VertexId;
    let adj = |a: VertexId, b: VertexId| g.has_edge(a, b);
    for a in 0..n {
        for b in a + 1..n {
            let m2 = (adj(a, b) as u8) << pair_bit(0, 1);
            f(2, m2);
            for c in b + 1..n {
                let m3 =
                    m2 | (adj(a, c) as u8) << pair_bit(0, 2) | (adj(b, c) as u8) << pair_bit(1, 2);
                f(3, m3);
                for d in c + 1..n {
                    let m4 = m3
                        | (adj(a, d) as u8) << pair_bit(0, 3)
                        | (adj(b, d) as u8) << pair_bit(1, 3)
                        | (adj(c, d) as u8) << pair_bit(2, 3);
                    f(4, m4);
                }
            }
        }
    }
}

pub fn exact_subgraph_counts(g: &Graph) -> Result<PatternCounts> {
    Oracle::default().subgraph_counts(g)
}

pub fn exact_induced_counts(g: &Graph) -> Result<PatternCounts> {
    Oracle::default().induced_counts(g)
}

/// Exact per-vertex degree, triangle count and endpoint three-path count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct VertexCounts {
    pub degree: u64,
    pub triangles: u64,
    pub paths: u64,
}

pub fn exact_vertex_counts(g: &Graph) -> Vec<VertexCounts> {
    (0..g.n() as VertexId)
        .map(|v| {
            let ns = g.neighbors(v);
            let mut triangles = 0;
            for (i, &a) in ns.iter().enumerate() {
                for &b in &ns[i + 1..] {
                    if g.has_edge(a, b) {
                        triangles += 1;
                    }
                }
            }
            // v - u - w with w != v
            let paths = ns
                .iter()
                .flat_map(|&u| g.neighbors(u).iter().filter(move |&&w| w != v))
                .count() as u64;
            VertexCounts {
                degree: ns.len() as u64,
                triangles,
                paths,
            }
        })
        .collect()
}

/// Features of `v` read directly off its egonet (no triangle/path identities).
pub fn exact_vertex_features(g: &Graph, v: VertexId) -> Result<VertexFeatures> {
    if v as usize >= g.n() {
        return Err(Error::VertexOutOfRange {
            vertex: v as usize,
            n: g.n(),
        });
    }
    let ns = g.neighbors(v);
    let d = ns.len();
    let mut ego: Vec<VertexId> = ns.to_vec();
    ego.push(v);
    ego.sort_unstable();
    let in_ego = |x: VertexId| ego.binary_search(&x).is_ok();

    let mut inside = 0u64;
    let mut leaving = 0u64;
    for &x in &ego {
        for &y in g.neighbors(x) {
            if in_ego(y) {
                if x < y {
                    inside += 1;
                }
            } else {
                leaving += 1;
            }
        }
    }
    let among_neighbors = inside - d as u64;
    let pairs = (d * d.saturating_sub(1) / 2) as f64;
    let clustering = if d < 2 {
        0.0
    } else {
        among_neighbors as f64 / pairs
    };
    let avg_neighbor_degree = if d == 0 {
        0.0
    } else {
        ns.iter().map(|&u| g.degree(u)).sum::<usize>() as f64 / d as f64
    };
    Ok(VertexFeatures {
        degree: d as f64,
        clustering,
        avg_neighbor_degree,
        egonet_edges: inside as f64,
        egonet_boundary: leaving as f64,
    })
}
