//! Seeded random graph models for experiments and tests.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, VertexId};

/// Erdős–Rényi G(n, p) edge list.
pub fn gnp(n: usize, p: f64, seed: u64) -> Vec<(u64, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for a in 0..n as u64 {
        for b in a + 1..n as u64 {
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    edges
}

/// Preferential attachment: a clique on `m + 1` vertices, then each new
/// vertex links to `m` distinct existing vertices picked with probability
/// proportional to degree.
pub fn barabasi_albert(n: usize, m: usize, seed: u64) -> Vec<(u64, u64)> {
    assert!(m >= 1, "attachment count must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let core = (m + 1).min(n) as u64;
    let mut edges = Vec::new();
    let mut ends: Vec<u64> = Vec::new();
    for a in 0..core {
        for b in a + 1..core {
            edges.push((a, b));
            ends.extend([a, b]);
        }
    }
    let mut picked = Vec::with_capacity(m);
    for v in core..n as u64 {
        picked.clear();
        while picked.len() < m {
            let w = ends[rng.gen_range(0..ends.len())];
            if !picked.contains(&w) {
                picked.push(w);
            }
        }
        for &w in &picked {
            edges.push((w, v));
            ends.extend([w, v]);
        }
    }
    edges
}

/// G(n, p) as an exact graph on exactly `n` vertices.
pub fn gnp_graph(n: usize, p: f64, seed: u64) -> Graph {
    let edges: Vec<(VertexId, VertexId)> = gnp(n, p, seed)
        .into_iter()
        .map(|(a, b)| (a as VertexId, b as VertexId))
        .collect();
    Graph::from_edges(n, &edges).expect("G(n,p) is simple")
}

/// A uniformly random permutation of `0..n`.
pub fn random_permutation(n: usize, seed: u64) -> Vec<VertexId> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<VertexId> = (0..n as VertexId).collect();
    perm.shuffle(&mut rng);
    perm
}
