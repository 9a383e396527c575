//! MAEVE: moments of five per-vertex structural features.
//!
//! Every feature is a function of the vertex degree `d`, its triangle count
//! `T` and the number `P` of three-vertex paths ending at it:
//!
//! | feature                  | formula      |
//! |--------------------------|--------------|
//! | degree                   | `d`          |
//! | clustering coefficient   | `T / C(d,2)` |
//! | mean neighbor degree     | `1 + P / d`  |
//! | edges inside the egonet  | `d + T`      |
//! | edges leaving the egonet | `P - 2T`     |
//!
//! Degrees are exact; `T` and `P` are reweighted sample counts. Clustering
//! is 0 for `d < 2` and mean neighbor degree is 0 for `d = 0`. Estimated
//! features are not clamped to their feasible ranges.

use crate::compare::{Descriptor, Method};
use crate::error::{Error, Result};
use crate::estimator::{EstimatorConfig, StreamEstimator, StreamStats};
use crate::graph::{Edge, Graph, VertexId};
use crate::oracle::exact_vertex_counts;
use crate::sampler::{detection_probability, ReservoirState};

pub const MAEVE_MIN_BUDGET: usize = 2;
pub const FEATURE_COUNT: usize = 5;
pub const MAEVE_DIM: usize = FEATURE_COUNT * 4;

pub const FEATURE_NAMES: [&str; FEATURE_COUNT] = [
    "degree",
    "clustering",
    "avg_neighbor_degree",
    "egonet_edges",
    "egonet_boundary",
];

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct VertexFeatures {
    pub degree: f64,
    pub clustering: f64,
    pub avg_neighbor_degree: f64,
    pub egonet_edges: f64,
    pub egonet_boundary: f64,
}

impl VertexFeatures {
    pub fn from_counts(degree: f64, triangles: f64, paths: f64) -> Self {
        let pairs = degree * (degree - 1.0) / 2.0;
        VertexFeatures {
            degree,
            clustering: if degree < 2.0 { 0.0 } else { triangles / pairs },
            avg_neighbor_degree: if degree == 0.0 {
                0.0
            } else {
                (degree + paths) / degree
            },
            egonet_edges: degree + triangles,
            egonet_boundary: paths - 2.0 * triangles,
        }
    }

    pub fn to_array(&self) -> [f64; FEATURE_COUNT] {
        [
            self.degree,
            self.clustering,
            self.avg_neighbor_degree,
            self.egonet_edges,
            self.egonet_boundary,
        ]
    }
}

/// Population mean, standard deviation, skewness and Pearson kurtosis.
/// Skewness and kurtosis are 0 for a constant sample.
pub fn moments(values: &[f64]) -> Result<[f64; 4]> {
    if values.is_empty() {
        return Err(Error::Empty("moments of an empty list"));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &x in values {
        let d = x - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    let std = m2.sqrt();
    if std == 0.0 {
        return Ok([mean, 0.0, 0.0, 0.0]);
    }
    Ok([mean, std, m3 / (std * m2), m4 / (m2 * m2)])
}

#[derive(Debug, Clone)]
pub struct MaeveState {
    config: EstimatorConfig,
    reservoir: ReservoirState,
    deg: Vec<u64>,
    tri: Vec<f64>,
    path: Vec<f64>,
    m_seen: u64,
    max_label: Option<VertexId>,
    stats: StreamStats,
}

impl MaeveState {
    pub fn new(config: EstimatorConfig) -> Result<Self> {
        config.validate(MAEVE_MIN_BUDGET)?;
        let n = config.n_hint.unwrap_or(0);
        Ok(MaeveState {
            config,
            reservoir: ReservoirState::new(config.budget, config.seed)?,
            deg: vec![0; n],
            tri: vec![0.0; n],
            path: vec![0.0; n],
            m_seen: 0,
            max_label: None,
            stats: StreamStats::default(),
        })
    }

    pub fn config(&self) -> &EstimatorConfig {
        &self.config
    }

    pub fn reservoir(&self) -> &ReservoirState {
        &self.reservoir
    }

    pub fn m_seen(&self) -> u64 {
        self.m_seen
    }

    pub fn vertex_count(&self) -> usize {
        let seen = self.max_label.map_or(0, |l| l as usize + 1);
        self.config.n_hint.map_or(seen, |h| h.max(seen))
    }

    pub fn degrees(&self) -> &[u64] {
        &self.deg
    }

    /// Per-vertex triangle estimates, indexed by label up to the vertex count.
    pub fn triangles(&self) -> &[f64] {
        &self.tri
    }

    /// Per-vertex endpoint three-path estimates.
    pub fn paths(&self) -> &[f64] {
        &self.path
    }

    fn grow(&mut self, v: VertexId) {
        let need = v as usize + 1;
        if self.deg.len() < need {
            self.deg.resize(need, 0);
            self.tri.resize(need, 0.0);
            self.path.resize(need, 0.0);
        }
    }

    pub fn vertex_features(&self, v: VertexId) -> VertexFeatures {
        let i = v as usize;
        if i >= self.deg.len() {
            return VertexFeatures::default();
        }
        VertexFeatures::from_counts(self.deg[i] as f64, self.tri[i], self.path[i])
    }

    pub fn finalize(&self) -> MaeveDescriptor {
        let n = self.vertex_count();
        let rows: Vec<VertexFeatures> = (0..n as VertexId)
            .map(|v| self.vertex_features(v))
            .collect();
        MaeveDescriptor::from_features(
            &rows,
            self.m_seen,
            self.config.budget as u64,
            self.config.seed,
        )
    }

    /// Averages per-vertex triangle and path estimates across replicas.
    pub fn average_replicas(mut replicas: Vec<MaeveState>) -> Option<MaeveState> {
        let w = replicas.len() as f64;
        let len = replicas.iter().map(|r| r.tri.len()).max()?;
        let mut tri = vec![0.0; len];
        let mut path = vec![0.0; len];
        for r in &replicas {
            for (acc, x) in tri.iter_mut().zip(&r.tri) {
                *acc += x;
            }
            for (acc, x) in path.iter_mut().zip(&r.path) {
                *acc += x;
            }
        }
        let mut first = replicas.drain(..).next()?;
        first.tri = tri.into_iter().map(|x| x / w).collect();
        first.path = path.into_iter().map(|x| x / w).collect();
        first.deg.resize(len, 0);
        Some(first)
    }
}

impl StreamEstimator for MaeveState {
    fn process_edge(&mut self, e: Edge) -> Result<()> {
        let t = self.reservoir.t() + 1;
        self.config.check_arrival(t, MAEVE_MIN_BUDGET)?;
        let (u, v) = e.endpoints();
        self.grow(v.max(u));

        let b = self.config.budget as u64;
        let r = &self.reservoir;
        let (du, dv) = (r.sampled_degree(u), r.sampled_degree(v));
        let mut work = (du + dv) as u64;

        if du + dv > 0 {
            let q = detection_probability(t, b, 1)?;
            // v-u-w and u-v-w
            for (center, other) in [(u, v), (v, u)] {
                for w in r.sampled_neighbors(center) {
                    if w == other {
                        continue;
                    }
                    self.path[other as usize] += 1.0 / q;
                    self.path[w as usize] += 1.0 / q;
                }
            }
            let (small, large) = if du <= dv { (u, v) } else { (v, u) };
            let closing: Vec<VertexId> = r
                .sampled_neighbors(small)
                .filter(|&w| r.contains(large, w))
                .collect();
            work += du.min(dv) as u64;
            if !closing.is_empty() {
                let p = 1.0 / detection_probability(t, b, 2)?;
                for w in closing {
                    self.tri[u as usize] += p;
                    self.tri[v as usize] += p;
                    self.tri[w as usize] += p;
                }
            }
        }

        self.deg[u as usize] += 1;
        self.deg[v as usize] += 1;
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

/// Feature-major moments: for each feature in [`FEATURE_NAMES`] order,
/// (mean, std, skewness, kurtosis).
#[derive(Debug, Clone, PartialEq)]
pub struct MaeveDescriptor {
    pub values: [f64; MAEVE_DIM],
    pub budget: u64,
    pub seed: u64,
    pub n: u64,
    pub m: u64,
    /// Set when there were no vertices to aggregate.
    pub degenerate: bool,
}

impl MaeveDescriptor {
    pub fn from_features(rows: &[VertexFeatures], m: u64, budget: u64, seed: u64) -> Self {
        let mut values = [0.0; MAEVE_DIM];
        let degenerate = rows.is_empty();
        if degenerate {
            log::warn!("MAEVE descriptor on an empty graph is degenerate (all zeros)");
        } else {
            let mut column = vec![0.0; rows.len()];
            for f in 0..FEATURE_COUNT {
                for (slot, row) in column.iter_mut().zip(rows) {
                    *slot = row.to_array()[f];
                }
                let mo = moments(&column).expect("non-empty column");
                values[4 * f..4 * f + 4].copy_from_slice(&mo);
            }
        }
        MaeveDescriptor {
            values,
            budget,
            seed,
            n: rows.len() as u64,
            m,
            degenerate,
        }
    }

    /// Descriptor from exact `(d, T, P)` (budget recorded as 0).
    pub fn exact(g: &Graph) -> Self {
        let rows: Vec<VertexFeatures> = exact_vertex_counts(g)
            .into_iter()
            .map(|c| {
                VertexFeatures::from_counts(c.degree as f64, c.triangles as f64, c.paths as f64)
            })
            .collect();
        Self::from_features(&rows, g.m() as u64, 0, 0)
    }

    /// The four moments of feature `f`.
    pub fn feature(&self, f: usize) -> &[f64] {
        &self.values[4 * f..4 * f + 4]
    }

    pub fn into_descriptor(self, graph_id: u64) -> Descriptor {
        Descriptor {
            graph_id,
            method: Method::Maeve,
            budget: self.budget,
            seed: self.seed,
            n: self.n,
            m: self.m,
            values: self.values.to_vec(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::EdgeStream;

    fn run(pairs: &[(u32, u32)], budget: usize) -> MaeveState {
        let s = EdgeStream::from_pairs(pairs.iter().copied()).unwrap();
        let mut st = MaeveState::new(EstimatorConfig::for_stream(budget, 9, &s)).unwrap();
        st.process_stream(s.iter()).unwrap();
        st
    }

    #[test]
    fn k3_counts() {
        let st = run(&[(0, 1), (1, 2), (0, 2)], 3);
        assert_eq!(st.triangles(), &[1.0, 1.0, 1.0]);
        // Each vertex ends two paths: one through each other vertex.
        assert_eq!(st.paths(), &[2.0, 2.0, 2.0]);
    }

    #[test]
    fn claw_counts_any_order() {
        for order in [
            [(0, 1), (0, 2), (0, 3)],
            [(0, 3), (0, 1), (0, 2)],
            [(0, 2), (0, 3), (0, 1)],
        ] {
            let st = run(&order, 3);
            assert_eq!(st.paths(), &[0.0, 2.0, 2.0, 2.0]);
            assert!(st.triangles().iter().all(|&t| t == 0.0));
            assert_eq!(st.vertex_features(0).to_array(), [3.0, 0.0, 1.0, 3.0, 0.0]);
            assert_eq!(st.vertex_features(1).to_array(), [1.0, 0.0, 3.0, 1.0, 2.0]);
        }
    }

    #[test]
    fn isolated_vertex_features() {
        let s = EdgeStream::from_pairs([(0, 1)]).unwrap().with_n_hint(3);
        let mut st = MaeveState::new(EstimatorConfig::for_stream(2, 0, &s)).unwrap();
        st.process_stream(s.iter()).unwrap();
        assert_eq!(st.vertex_count(), 3);
        assert_eq!(st.vertex_features(2).to_array(), [0.0; 5]);
    }

    #[test]
    fn moment_examples() {
        assert_eq!(moments(&[4.0, 4.0, 4.0]).unwrap(), [4.0, 0.0, 0.0, 0.0]);
        assert_eq!(
            moments(&[0.0, 0.0, 1.0, 1.0]).unwrap(),
            [0.5, 0.5, 0.0, 1.0]
        );
        let m = moments(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(m[0], 2.0);
        assert!((m[1] - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(m[2], 0.0);
        assert!((m[3] - 1.5).abs() < 1e-12);
        assert!(moments(&[]).is_err());
    }

    #[test]
    fn finalize_examples() {
        let d = run(&[(0, 1), (1, 2), (0, 2)], 3).finalize();
        assert_eq!(d.feature(0), &[2.0, 0.0, 0.0, 0.0]);
        assert_eq!(d.feature(1), &[1.0, 0.0, 0.0, 0.0]);

        let d = run(&[(0, 1), (0, 2), (0, 3)], 3).finalize();
        assert_eq!(d.feature(0)[0], 1.5);
        assert!((d.feature(0)[1] - 0.75f64.sqrt()).abs() < 1e-15);

        let d = run(&[(0, 1), (2, 3)], 2).finalize();
        for f in 0..FEATURE_COUNT {
            assert_eq!(d.feature(f)[1], 0.0);
        }

        let empty = MaeveState::new(EstimatorConfig::new(2, 0))
            .unwrap()
            .finalize();
        assert!(empty.degenerate && empty.values.iter().all(|&x| x == 0.0));
    }
}
