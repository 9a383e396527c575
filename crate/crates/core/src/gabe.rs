//! GABE: normalized order-2/3/4 graphlet frequencies from one pass.
//!
//! Triangle and the five connected 4-vertex patterns are estimated from the
//! edge sample; every other subgraph count follows exactly from the degree
//! sequence, the edge count and the vertex count. Induced counts are then
//! recovered through the overlap matrix and normalized per order.
//!
//! Estimated induced counts may come out negative. They are kept raw:
//! clamping would bias them.

use std::collections::BTreeSet;

use crate::compare::{Descriptor, Method};
use crate::error::Result;
use crate::estimator::{binomial, EstimatorConfig, StreamEstimator, StreamStats};
use crate::graph::{Edge, Graph, VertexId};
use crate::oracle::{CountKind, Oracle, PatternCounts};
use crate::patterns::{solve_overlap, Pattern, PATTERN_COUNT};
use crate::sampler::{detection_probability, ReservoirState};

/// Smallest budget that can hold the five other edges of a K4.
pub const GABE_MIN_BUDGET: usize = 5;

pub const GABE_DIM: usize = PATTERN_COUNT;

const TRIANGLE: usize = 0;
const PATH4: usize = 1;
const CYCLE4: usize = 2;
const PAW: usize = 3;
const DIAMOND: usize = 4;
const K4: usize = 5;

static EMPTY: BTreeSet<VertexId> = BTreeSet::new();

#[derive(Debug, Clone)]
pub struct GabeState {
    config: EstimatorConfig,
    reservoir: ReservoirState,
    degrees: Vec<u64>,
    m_seen: u64,
    max_label: Option<VertexId>,
    /// Running estimates, ordered as [`Pattern::STREAM_ESTIMATED`].
    est: [f64; 6],
    stats: StreamStats,
}

impl GabeState {
    pub fn new(config: EstimatorConfig) -> Result<Self> {
        config.validate(GABE_MIN_BUDGET)?;
        Ok(GabeState {
            config,
            reservoir: ReservoirState::new(config.budget, config.seed)?,
            degrees: vec![0; config.n_hint.unwrap_or(0)],
            m_seen: 0,
            max_label: None,
            est: [0.0; 6],
            stats: StreamStats::default(),
        })
    }

    pub fn config(&self) -> &EstimatorConfig {
        &self.config
    }

    pub fn reservoir(&self) -> &ReservoirState {
        &self.reservoir
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn m_seen(&self) -> u64 {
        self.m_seen
    }

    pub fn vertex_count(&self) -> usize {
        let seen = self.max_label.map_or(0, |l| l as usize + 1);
        self.config.n_hint.map_or(seen, |h| h.max(seen))
    }

    /// Stream estimates, ordered as [`Pattern::STREAM_ESTIMATED`].
    pub fn estimates(&self) -> [f64; 6] {
        self.est
    }

    pub fn estimate(&self, p: Pattern) -> Option<f64> {
        Pattern::STREAM_ESTIMATED
            .iter()
            .position(|&q| q == p)
            .map(|i| self.est[i])
    }

    /// Counts of copies of each estimated pattern that contain `(u, v)` in
    /// the current sample plus `(u, v)`, and the probe work spent.
    fn local_counts(&self, u: VertexId, v: VertexId) -> ([u64; 6], u64) {
        let r = &self.reservoir;
        let nu = r.neighbor_set(u).unwrap_or(&EMPTY);
        let nv = r.neighbor_set(v).unwrap_or(&EMPTY);
        let nbrs = |w: VertexId| r.neighbor_set(w).unwrap_or(&EMPTY);
        let mut work = 0u64;

        let (small, large) = if nu.len() <= nv.len() {
            (nu, nv)
        } else {
            (nv, nu)
        };
        let common: Vec<VertexId> = small
            .iter()
            .copied()
            .filter(|w| large.contains(w))
            .collect();
        work += small.len() as u64;

        let (du, dv, c) = (nu.len() as u64, nv.len() as u64, common.len() as u64);
        let mut counts = [0u64; 6];
        counts[TRIANGLE] = c;

        // Middle-edge paths a-u-v-b, a != b.
        let mut path4 = du * dv - c;
        let mut cycle4 = 0;
        let mut tri_at_u = 0;
        let mut tri_at_v = 0;
        let mut diamond_rim = 0;

        for &w in nu {
            let nw = nbrs(w);
            work += nw.len() as u64;
            // End-edge paths v-u-w-x, x not in {u, v}.
            path4 += nw.len() as u64 - 1;
            let in_u = nw.iter().filter(|x| nu.contains(x)).count() as u64;
            let in_v = nw.iter().filter(|x| nv.contains(x)).count() as u64;
            tri_at_u += in_u;
            cycle4 += in_v;
            if nv.contains(&w) {
                path4 -= 1;
                diamond_rim += in_u + in_v;
            }
        }
        for &w in nv {
            let nw = nbrs(w);
            work += nw.len() as u64;
            path4 += nw.len() as u64 - 1;
            tri_at_v += nw.iter().filter(|x| nv.contains(x)).count() as u64;
            if nu.contains(&w) {
                path4 -= 1;
            }
        }
        counts[PATH4] = path4;
        counts[CYCLE4] = cycle4;

        // Pendant (u, v) on a sampled triangle at u or v, or (u, v) inside a
        // triangle with a sampled pendant at u, v or w.
        let mut paw = tri_at_u / 2 + tri_at_v / 2;
        let mut k4 = 0;
        for &w in &common {
            let nw = nbrs(w);
            paw += (du - 1) + (dv - 1) + (nw.len() as u64 - 2);
            work += nw.len() as u64;
            k4 += nw
                .range(w + 1..)
                .filter(|x| common.binary_search(x).is_ok())
                .count() as u64;
        }
        counts[PAW] = paw;
        counts[DIAMOND] = c * c.saturating_sub(1) / 2 + diamond_rim;
        counts[K4] = k4;

        (counts, work)
    }

    /// The eleven subgraph counts given by closed forms, with the triangle
    /// estimate feeding triangle+isolated.
    pub fn closed_form_counts(&self) -> [(Pattern, f64); 11] {
        let n = self.vertex_count() as u64;
        let m = self.m_seen;
        let wedges: f64 = self.degrees.iter().map(|&d| binomial(d, 2)).sum();
        let claws: f64 = self.degrees.iter().map(|&d| binomial(d, 3)).sum();
        let mf = m as f64;
        let n_minus = |k: u64| n.saturating_sub(k) as f64;
        [
            (Pattern::EdgelessTwo, binomial(n, 2)),
            (Pattern::EdgelessThree, binomial(n, 3)),
            (Pattern::EdgelessFour, binomial(n, 4)),
            (Pattern::Edge, mf),
            (Pattern::EdgeIsolated, mf * n_minus(2)),
            (
                Pattern::EdgeTwoIsolated,
                mf * binomial(n.saturating_sub(2), 2),
            ),
            (Pattern::TwoDisjointEdges, binomial(m, 2) - wedges),
            (Pattern::Wedge, wedges),
            (Pattern::Claw, claws),
            (Pattern::WedgeIsolated, wedges * n_minus(3)),
            (Pattern::TriangleIsolated, self.est[TRIANGLE] * n_minus(3)),
        ]
    }

    /// Full 17-entry subgraph count vector (closed forms plus estimates).
    pub fn subgraph_counts(&self) -> PatternCounts {
        let mut values = [0.0; PATTERN_COUNT];
        for (p, v) in self.closed_form_counts() {
            values[p.index()] = v;
        }
        for (p, v) in Pattern::STREAM_ESTIMATED.iter().zip(self.est) {
            values[p.index()] = v;
        }
        PatternCounts {
            values,
            kind: CountKind::Subgraph,
        }
    }

    pub fn finalize(&self) -> GabeDescriptor {
        let induced = PatternCounts {
            values: solve_overlap(&self.subgraph_counts().values),
            kind: CountKind::Induced,
        };
        GabeDescriptor::from_induced(
            &induced,
            self.vertex_count(),
            self.m_seen,
            self.config.budget as u64,
            self.config.seed,
        )
    }

    /// Averages the stream estimates of independent replicas that consumed
    /// the same stream. Exact accumulators are taken from the first replica.
    pub fn average_replicas(mut replicas: Vec<GabeState>) -> Option<GabeState> {
        let w = replicas.len();
        let mut sum = [0.0; 6];
        for r in &replicas {
            for (s, e) in sum.iter_mut().zip(r.est) {
                *s += e;
            }
        }
        let mut first = replicas.drain(..).next()?;
        first.est = sum.map(|s| s / w as f64);
        Some(first)
    }
}

impl StreamEstimator for GabeState {
    fn process_edge(&mut self, e: Edge) -> Result<()> {
        let t = self.reservoir.t() + 1;
        self.config.check_arrival(t, GABE_MIN_BUDGET)?;
        let (u, v) = e.endpoints();

        let (counts, work) = self.local_counts(u, v);
        let b = self.config.budget as u64;
        for (i, (&c, p)) in counts.iter().zip(Pattern::STREAM_ESTIMATED).enumerate() {
            if c > 0 {
                let prob = detection_probability(t, b, p.edge_count() as u64 - 1)?;
                self.est[i] += c as f64 / prob;
            }
        }

        let hi = v as usize;
        if self.degrees.len() <= hi {
            self.degrees.resize(hi + 1, 0);
        }
        self.degrees[u as usize] += 1;
        self.degrees[hi] += 1;
        self.m_seen += 1;
        self.max_label = Some(self.max_label.map_or(v, |l| l.max(v)));

        self.reservoir.maybe_sample(e);
        self.stats.record(work, self.reservoir.len());
        Ok(())
    }

    fn stats(&self) -> StreamStats {
        self.stats
    }
}

/// Concatenation of the per-order graphlet distributions φ2 (2), φ3 (4) and
/// φ4 (11).
#[derive(Debug, Clone, PartialEq)]
pub struct GabeDescriptor {
    pub phi: [f64; GABE_DIM],
    pub budget: u64,
    pub seed: u64,
    pub n: u64,
    pub m: u64,
    /// Set when fewer than two vertices made every block empty.
    pub degenerate: bool,
}

impl GabeDescriptor {
    /// Normalizes induced counts by `C(n, k)` per order. Orders with
    /// `C(n, k) = 0` yield an all-zero block.
    pub fn from_induced(induced: &PatternCounts, n: usize, m: u64, budget: u64, seed: u64) -> Self {
        let mut phi = [0.0; GABE_DIM];
        let degenerate = n < 2;
        if !degenerate {
            for k in 2..=4u32 {
                let total = binomial(n as u64, k);
                if total == 0.0 {
                    continue;
                }
                for i in Pattern::order_range(k as usize) {
                    phi[i] = induced.values[i] / total;
                }
            }
        } else {
            log::warn!("GABE descriptor on {n} vertices is degenerate (all zeros)");
        }
        GabeDescriptor {
            phi,
            budget,
            seed,
            n: n as u64,
            m,
            degenerate,
        }
    }

    /// Oracle-derived descriptor (budget recorded as 0).
    pub fn exact(g: &Graph) -> Result<Self> {
        Self::exact_with(g, &Oracle::default())
    }

    pub fn exact_with(g: &Graph, oracle: &Oracle) -> Result<Self> {
        let induced = oracle.induced_counts(g)?;
        Ok(Self::from_induced(&induced, g.n(), g.m() as u64, 0, 0))
    }

    pub fn block(&self, k: usize) -> &[f64] {
        &self.phi[Pattern::order_range(k)]
    }

    pub fn into_descriptor(self, graph_id: u64) -> Descriptor {
        Descriptor {
            graph_id,
            method: Method::Gabe,
            budget: self.budget,
            seed: self.seed,
            n: self.n,
            m: self.m,
            values: self.phi.to_vec(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::EdgeStream;
    use crate::oracle::exact_subgraph_counts;

    fn run(pairs: &[(u32, u32)], budget: usize, seed: u64) -> GabeState {
        let s = EdgeStream::from_pairs(pairs.iter().copied()).unwrap();
        let mut st = GabeState::new(EstimatorConfig::for_stream(budget, seed, &s)).unwrap();
        st.process_stream(s.iter()).unwrap();
        st
    }

    const K4: [(u32, u32); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

    #[test]
    fn triangle_in_exact_regime() {
        let st = run(&[(0, 1), (1, 2), (0, 2)], 3, 0);
        assert_eq!(st.estimate(Pattern::Triangle), Some(1.0));
    }

    #[test]
    fn k4_estimates_exact() {
        let st = run(&K4, 6, 0);
        assert_eq!(st.estimates(), [4.0, 12.0, 3.0, 12.0, 6.0, 1.0]);
    }

    #[test]
    fn all_orders_of_k4_are_exact() {
        // Every one of the 720 arrival orders must find each copy once.
        let mut idx = [0usize, 1, 2, 3, 4, 5];
        let mut count = 0;
        permute(&mut idx, 0, &mut |perm| {
            let pairs: Vec<_> = perm.iter().map(|&i| K4[i]).collect();
            assert_eq!(
                run(&pairs, 6, 0).estimates(),
                [4.0, 12.0, 3.0, 12.0, 6.0, 1.0]
            );
            count += 1;
        });
        assert_eq!(count, 720);
    }

    fn permute(a: &mut [usize; 6], k: usize, f: &mut dyn FnMut(&[usize; 6])) {
        if k == a.len() {
            f(a);
            return;
        }
        for i in k..a.len() {
            a.swap(k, i);
            permute(a, k + 1, f);
            a.swap(k, i);
        }
    }

    #[test]
    fn closed_forms_match_oracle() {
        let k3 = run(&[(0, 1), (1, 2), (0, 2)], 3, 0);
        let cf: std::collections::HashMap<_, _> = k3.closed_form_counts().into_iter().collect();
        assert_eq!(cf[&Pattern::Wedge], 3.0);
        assert_eq!(cf[&Pattern::TwoDisjointEdges], 0.0);
        assert_eq!(cf[&Pattern::EdgeIsolated], 3.0);

        let claw = run(&[(0, 1), (0, 2), (0, 3)], 3, 0);
        let cf: std::collections::HashMap<_, _> = claw.closed_form_counts().into_iter().collect();
        assert_eq!(cf[&Pattern::Claw], 1.0);
        assert_eq!(cf[&Pattern::Wedge], 3.0);
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(claw.subgraph_counts(), exact_subgraph_counts(&g).unwrap());

        let single = run(&[(0, 1)], 1, 0);
        let h = single.subgraph_counts();
        assert_eq!(h[Pattern::Edge], 1.0);
        assert_eq!(h[Pattern::EdgelessTwo], 1.0);
        assert!(h.values[2..].iter().all(|&x| x == 0.0));
    }

    #[test]
    fn finalize_small_graphs() {
        let d = run(&[(0, 1), (1, 2), (0, 2)], 3, 0).finalize();
        assert_eq!(d.block(2), &[0.0, 1.0]);
        assert_eq!(d.block(3), &[0.0, 0.0, 0.0, 1.0]);
        assert!(d.block(4).iter().all(|&x| x == 0.0));

        let d = run(&[(0, 1), (1, 2)], 2, 0).finalize();
        assert!((d.block(2)[0] - 1.0 / 3.0).abs() < 1e-15);
        assert!((d.block(2)[1] - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(d.block(3), &[0.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn degenerate_descriptor() {
        let st = GabeState::new(EstimatorConfig::new(5, 0)).unwrap();
        let d = st.finalize();
        assert!(d.degenerate);
        assert!(d.phi.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn rejects_small_budget() {
        assert!(GabeState::new(EstimatorConfig::new(4, 0)).is_err());
        let cfg = EstimatorConfig::new(3, 0).with_stream_len(3);
        let mut st = GabeState::new(cfg).unwrap();
        for (a, b) in [(0, 1), (1, 2), (0, 2)] {
            st.process_edge(Edge::new(a, b).unwrap()).unwrap();
        }
        assert!(st.process_edge(Edge::new(0, 3).unwrap()).is_err());
    }
}
