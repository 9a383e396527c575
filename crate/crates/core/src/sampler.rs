//! Budgeted reservoir of stream edges with a sorted adjacency index.

use std::collections::{BTreeSet, HashMap};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Edge, VertexId};

/// What happened to an edge offered to the reservoir.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleOutcome {
    Kept,
    Replaced(Edge),
    Dropped,
}

/// Probability that `m` particular earlier edges are all in a size-`b`
/// reservoir when edge `t` (1-based) arrives.
pub fn detection_probability(t: u64, b: u64, m: u64) -> Result<f64> {
    if t == 0 || b == 0 || m == 0 {
        return Err(Error::InvalidArgument(format!(
            "detection probability needs t, b, m >= 1 (got t={t}, b={b}, m={m})"
        )));
    }
    if m > b {
        return Err(Error::BudgetTooSmall {
            budget: b,
            required: m,
        });
    }
    if t - 1 <= b {
        return Ok(1.0);
    }
    let p = (0..m).fold(1.0, |acc, i| acc * (b - i) as f64 / (t - 1 - i) as f64);
    Ok(p)
}

/// Upper bound on the variance of a stream estimate of a pattern with
/// `pattern_edges` edges and true count `count` over `m_total` edges.
///
/// Reported as 0 once `b >= m_total - 1`, where every estimate is exact.
pub fn variance_bound(count: f64, m_total: u64, pattern_edges: u64, b: u64) -> Result<f64> {
    if pattern_edges == 0 {
        return Err(Error::InvalidArgument("pattern must have an edge".into()));
    }
    if b + 2 <= pattern_edges {
        return Err(Error::BudgetTooSmall {
            budget: b,
            required: pattern_edges - 1,
        });
    }
    if count == 0.0 || b + 1 >= m_total {
        return Ok(0.0);
    }
    let ratio =
        (0..pattern_edges - 1).fold(1.0, |acc, i| acc * (m_total - i) as f64 / (b - i) as f64);
    Ok(count * count * ratio)
}

/// A uniform size-`b` sample of the edges seen so far.
#[derive(Debug, Clone)]
pub struct ReservoirState {
    budget: usize,
    slots: Vec<Edge>,
    adj: HashMap<VertexId, BTreeSet<VertexId>>,
    t: u64,
    peak: usize,
    rng: ChaCha8Rng,
}

impl ReservoirState {
    pub fn new(budget: usize, seed: u64) -> Result<Self> {
        if budget == 0 {
            return Err(Error::BudgetTooSmall {
                budget: 0,
                required: 1,
            });
        }
        Ok(ReservoirState {
            budget,
            slots: Vec::with_capacity(budget.min(1 << 20)),
            adj: HashMap::new(),
            t: 0,
            peak: 0,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    /// Edges offered so far.
    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    /// Largest number of edges ever held at once.
    pub fn peak(&self) -> usize {
        self.peak
    }

    pub fn edges(&self) -> &[Edge] {
        &self.slots
    }

    /// Offers the next stream edge. Call after detection for that edge.
    pub fn maybe_sample(&mut self, e: Edge) -> SampleOutcome {
        self.t += 1;
        let outcome = if self.slots.len() < self.budget {
            self.slots.push(e);
            self.link(e);
            SampleOutcome::Kept
        } else {
            let j = self.rng.gen_range(0..self.t);
            if j < self.budget as u64 {
                let evicted = std::mem::replace(&mut self.slots[j as usize], e);
                self.unlink(evicted);
                self.link(e);
                SampleOutcome::Replaced(evicted)
            } else {
                SampleOutcome::Dropped
            }
        };
        self.peak = self.peak.max(self.slots.len());
        outcome
    }

    fn link(&mut self, e: Edge) {
        let (u, v) = e.endpoints();
        self.adj.entry(u).or_default().insert(v);
        self.adj.entry(v).or_default().insert(u);
    }

    fn unlink(&mut self, e: Edge) {
        let (u, v) = e.endpoints();
        for (a, b) in [(u, v), (v, u)] {
            if let Some(set) = self.adj.get_mut(&a) {
                set.remove(&b);
                if set.is_empty() {
                    self.adj.remove(&a);
                }
            }
        }
    }

    /// Sorted neighbors of `v` in the sample; empty when `v` is absent.
    pub fn sampled_neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adj.get(&v).into_iter().flat_map(|s| s.iter().copied())
    }

    pub(crate) fn neighbor_set(&self, v: VertexId) -> Option<&BTreeSet<VertexId>> {
        self.adj.get(&v)
    }

    pub fn sampled_degree(&self, v: VertexId) -> usize {
        self.adj.get(&v).map_or(0, BTreeSet::len)
    }

    pub fn contains(&self, a: VertexId, b: VertexId) -> bool {
        self.adj.get(&a).is_some_and(|s| s.contains(&b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn detection_probability_examples() {
        assert_eq!(detection_probability(3, 5, 2).unwrap(), 1.0);
        assert!((detection_probability(11, 5, 1).unwrap() - 0.5).abs() < 1e-15);
        assert!((detection_probability(11, 5, 2).unwrap() - 2.0 / 9.0).abs() < 1e-15);
        assert!(matches!(
            detection_probability(20, 3, 5),
            Err(Error::BudgetTooSmall { .. })
        ));
        assert!(detection_probability(0, 3, 1).is_err());
    }

    #[test]
    fn detection_probability_monotone() {
        for m in 1..=5u64 {
            for b in m..20 {
                let mut prev = 1.0;
                for t in 1..60u64 {
                    let p = detection_probability(t, b, m).unwrap();
                    assert!(p <= prev && p > 0.0 && p <= 1.0);
                    assert_eq!(p == 1.0, t - 1 <= b, "t={t} b={b} m={m}");
                    let wider = detection_probability(t, b + 1, m).unwrap();
                    assert!(wider >= p);
                    prev = p;
                }
            }
        }
    }

    #[test]
    fn variance_bound_examples() {
        let v = variance_bound(10.0, 100, 3, 50).unwrap();
        let expect = 100.0 * (100.0 / 50.0) * (99.0 / 49.0);
        assert!((v - expect).abs() < 1e-9 && (v - 404.08).abs() < 0.01);
        assert_eq!(variance_bound(7.0, 100, 3, 99).unwrap(), 0.0);
        assert_eq!(variance_bound(0.0, 100, 3, 10).unwrap(), 0.0);
        assert!(variance_bound(1.0, 100, 6, 4).is_err());
    }

    fn e(a: u32, b: u32) -> Edge {
        Edge::new(a, b).unwrap()
    }

    #[test]
    fn keeps_first_b_edges() {
        let mut r = ReservoirState::new(10, 1).unwrap();
        for i in 0..10 {
            assert_eq!(r.maybe_sample(e(i, i + 1)), SampleOutcome::Kept);
        }
        assert_eq!(r.len(), 10);
        for i in 10..100 {
            r.maybe_sample(e(i, i + 1));
            assert!(r.len() <= 10);
        }
        assert_eq!(r.peak(), 10);
        assert_eq!(r.t(), 100);
    }

    #[test]
    fn neighbors_and_probes() {
        let mut r = ReservoirState::new(4, 0).unwrap();
        r.maybe_sample(e(0, 1));
        r.maybe_sample(e(1, 2));
        assert_eq!(r.sampled_neighbors(1).collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(r.sampled_neighbors(99).count(), 0);
        assert!(r.contains(2, 1) && !r.contains(0, 2));
    }

    #[test]
    fn index_consistent_after_evictions() {
        let mut r = ReservoirState::new(7, 42).unwrap();
        let mut k = 0u32;
        for a in 0..25u32 {
            for b in a + 1..25 {
                if (a * 31 + b * 17) % 5 == 0 {
                    r.maybe_sample(e(a, b));
                    k += 1;
                }
            }
        }
        assert!(k > 7);
        let stored: BTreeSet<Edge> = r.edges().iter().copied().collect();
        assert_eq!(stored.len(), r.len());
        let mut from_index = BTreeSet::new();
        for v in 0..25u32 {
            for w in r.sampled_neighbors(v) {
                assert!(r.contains(w, v));
                from_index.insert(e(v, w));
            }
        }
        assert_eq!(stored, from_index);
    }
}
