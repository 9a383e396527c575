//! Configuration and instrumentation shared by the stream estimators.

use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeStream};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EstimatorConfig {
    /// Maximum number of stored edges.
    pub budget: usize,
    pub seed: u64,
    /// Vertex count override; the stream otherwise implies max label + 1.
    pub n_hint: Option<usize>,
    /// Declared stream length. When the budget covers the whole stream the
    /// estimator runs exactly and the per-method minimum budget is waived.
    pub stream_len: Option<usize>,
}

impl EstimatorConfig {
    pub fn new(budget: usize, seed: u64) -> Self {
        EstimatorConfig {
            budget,
            seed,
            n_hint: None,
            stream_len: None,
        }
    }

    /// Config for `stream` with the stream's own length and vertex hint.
    pub fn for_stream(budget: usize, seed: u64, stream: &EdgeStream) -> Self {
        EstimatorConfig {
            budget,
            seed,
            n_hint: stream.n_hint(),
            stream_len: Some(stream.len()),
        }
    }

    pub fn with_n_hint(mut self, n: usize) -> Self {
        self.n_hint = Some(n);
        self
    }

    pub fn with_stream_len(mut self, len: usize) -> Self {
        self.stream_len = Some(len);
        self
    }

    /// The budget is accepted when it reaches `min_budget`, or when it holds
    /// the entire declared stream.
    pub(crate) fn validate(&self, min_budget: usize) -> Result<()> {
        if self.budget == 0 {
            return Err(Error::BudgetTooSmall {
                budget: 0,
                required: 1,
            });
        }
        let covers_stream = self.stream_len.is_some_and(|len| self.budget >= len);
        if self.budget < min_budget && !covers_stream {
            return Err(Error::BudgetTooSmall {
                budget: self.budget as u64,
                required: min_budget as u64,
            });
        }
        Ok(())
    }

    /// Errors when an under-minimum budget was admitted on a declared length
    /// and the stream is about to exceed it.
    pub(crate) fn check_arrival(&self, t: u64, min_budget: usize) -> Result<()> {
        if self.budget < min_budget {
            if let Some(len) = self.stream_len {
                if t > len as u64 {
                    return Err(Error::StreamLongerThanDeclared {
                        declared: len as u64,
                        budget: self.budget as u64,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Counters recorded while consuming a stream.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StreamStats {
    pub edges_processed: u64,
    pub peak_stored: usize,
    /// Neighbor-set visits and membership probes for the costliest edge.
    pub max_edge_work: u64,
    pub total_work: u64,
}

impl StreamStats {
    pub(crate) fn record(&mut self, work: u64, stored: usize) {
        self.edges_processed += 1;
        self.peak_stored = self.peak_stored.max(stored);
        self.max_edge_work = self.max_edge_work.max(work);
        self.total_work += work;
    }
}

/// A single-pass consumer of an edge stream.
pub trait StreamEstimator {
    fn process_edge(&mut self, e: Edge) -> Result<()>;

    fn stats(&self) -> StreamStats;

    /// Consumes `edges` once, in order.
    fn process_stream<I>(&mut self, edges: I) -> Result<()>
    where
        I: IntoIterator<Item = Edge>,
        Self: Sized,
    {
        for e in edges {
            self.process_edge(e)?;
        }
        Ok(())
    }
}

/// `C(n, k)` as a float; zero when `n < k`.
pub(crate) fn binomial(n: u64, k: u32) -> f64 {
    if n < k as u64 {
        return 0.0;
    }
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = acc * (n as u128 - i) / (i + 1);
    }
    acc as f64
}
