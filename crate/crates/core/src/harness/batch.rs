use rayon::prelude::*;

use crate::compare::{Descriptor, Method};
use crate::error::{Error, Result};
use crate::estimator::{EstimatorConfig, StreamEstimator};
use crate::gabe::{GabeDescriptor, GabeState};
use crate::graph::{build_graph, EdgeStream};
use crate::harness::{with_pool, Dataset};
use crate::maeve::{MaeveDescriptor, MaeveState};
use crate::oracle::Oracle;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BudgetSpec {
    Absolute(usize),
    /// Fraction of each graph's edge count, rounded up.
    Fraction(f64),
}

impl BudgetSpec {
    pub fn resolve(&self, m: usize) -> usize {
        match *self {
            BudgetSpec::Absolute(b) => b,
            // 0.1 * 120 must give 12, not 13.
            BudgetSpec::Fraction(f) => (f * m as f64 - 1e-9).ceil().max(0.0) as usize,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BatchConfig {
    pub method: Method,
    pub budget: BudgetSpec,
    /// Independent estimator replicas per graph (W).
    pub replicas: usize,
    pub seed: u64,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

/// Runs `replicas` estimators with seeds `seed..seed + replicas` over the
/// same stream and finalizes the averaged raw estimates.
pub fn estimate_descriptor(
    stream: &EdgeStream,
    method: Method,
    budget: usize,
    replicas: usize,
    seed: u64,
    graph_id: u64,
) -> Result<Descriptor> {
    if replicas == 0 {
        return Err(Error::InvalidArgument(
            "at least one replica is required".into(),
        ));
    }
    let config =
        |i: usize| EstimatorConfig::for_stream(budget, seed.wrapping_add(i as u64), stream);
    let desc = match method {
        Method::Gabe => {
            let states = (0..replicas)
                .into_par_iter()
                .map(|i| {
                    let mut st = GabeState::new(config(i))?;
                    st.process_stream(stream.iter())?;
                    Ok(st)
                })
                .collect::<Result<Vec<_>>>()?;
            let mut d = GabeState::average_replicas(states)
                .expect("replicas >= 1")
                .finalize();
            d.seed = seed;
            d.into_descriptor(graph_id)
        }
        Method::Maeve => {
            let states = (0..replicas)
                .into_par_iter()
                .map(|i| {
                    let mut st = MaeveState::new(config(i))?;
                    st.process_stream(stream.iter())?;
                    Ok(st)
                })
                .collect::<Result<Vec<_>>>()?;
            let mut d = MaeveState::average_replicas(states)
                .expect("replicas >= 1")
                .finalize();
            d.seed = seed;
            d.into_descriptor(graph_id)
        }
    };
    Ok(desc)
}

/// Oracle-derived descriptor. GABE is bounded by the oracle's vertex limit.
pub fn exact_descriptor(
    stream: &EdgeStream,
    method: Method,
    oracle: &Oracle,
    graph_id: u64,
) -> Result<Descriptor> {
    let g = build_graph(stream)?;
    Ok(match method {
        Method::Gabe => GabeDescriptor::exact_with(&g, oracle)?.into_descriptor(graph_id),
        Method::Maeve => MaeveDescriptor::exact(&g).into_descriptor(graph_id),
    })
}

/// Descriptors for every graph, in input order. A failing graph yields its
/// error in place and the batch continues.
pub fn compute_descriptors(ds: &Dataset, cfg: &BatchConfig) -> Vec<Result<Descriptor>> {
    with_pool(cfg.threads, || {
        ds.graphs
            .par_iter()
            .enumerate()
            .map(|(i, stream)| {
                let b = cfg.budget.resolve(stream.len());
                estimate_descriptor(stream, cfg.method, b, cfg.replicas, cfg.seed, i as u64)
            })
            .collect()
    })
}

pub fn exact_descriptors(
    ds: &Dataset,
    method: Method,
    oracle: &Oracle,
    threads: Option<usize>,
) -> Vec<Result<Descriptor>> {
    with_pool(threads, || {
        ds.graphs
            .par_iter()
            .enumerate()
            .map(|(i, stream)| exact_descriptor(stream, method, oracle, i as u64))
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::gnp;
    use crate::graph::preprocess;

    fn dataset() -> Dataset {
        let raw: Vec<_> = (0..6).map(|i| gnp(14, 0.35, i)).collect();
        Dataset::from_raw("t", &raw, vec![0, 1, 0, 1, 0, 1], 4).unwrap()
    }

    #[test]
    fn single_replica_matches_plain_estimator() {
        let s = preprocess(&gnp(20, 0.3, 8), 1);
        let d = estimate_descriptor(&s, Method::Gabe, 10, 1, 77, 0).unwrap();
        let mut st = GabeState::new(EstimatorConfig::for_stream(10, 77, &s)).unwrap();
        st.process_stream(s.iter()).unwrap();
        assert_eq!(d.values, st.finalize().phi.to_vec());
    }

    #[test]
    fn full_budget_is_exact() {
        let ds = dataset();
        for method in [Method::Gabe, Method::Maeve] {
            let cfg = BatchConfig {
                method,
                budget: BudgetSpec::Fraction(1.0),
                replicas: 2,
                seed: 5,
                threads: Some(2),
            };
            let est = compute_descriptors(&ds, &cfg);
            let exact = exact_descriptors(&ds, method, &Oracle::default(), None);
            for (a, b) in est.iter().zip(&exact) {
                let (a, b) = (a.as_ref().unwrap(), b.as_ref().unwrap());
                for (x, y) in a.values.iter().zip(&b.values) {
                    assert!((x - y).abs() < 1e-9, "{method}: {x} vs {y}");
                }
            }
        }
    }

    #[test]
    fn deterministic_across_pool_sizes() {
        let ds = dataset();
        let run = |threads| {
            let cfg = BatchConfig {
                method: Method::Maeve,
                budget: BudgetSpec::Fraction(0.4),
                replicas: 3,
                seed: 11,
                threads: Some(threads),
            };
            compute_descriptors(&ds, &cfg)
                .into_iter()
                .map(Result::unwrap)
                .collect::<Vec<_>>()
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn per_graph_errors_do_not_stop_the_batch() {
        let ds = dataset();
        let cfg = BatchConfig {
            method: Method::Gabe,
            budget: BudgetSpec::Absolute(4),
            replicas: 1,
            seed: 0,
            threads: None,
        };
        let out = compute_descriptors(&ds, &cfg);
        assert_eq!(out.len(), ds.len());
        assert!(out
            .iter()
            .all(|r| matches!(r, Err(Error::BudgetTooSmall { .. }))));
    }

    #[test]
    fn budget_resolution() {
        assert_eq!(BudgetSpec::Fraction(0.25).resolve(87), 22);
        assert_eq!(BudgetSpec::Fraction(1.0).resolve(10), 10);
        assert_eq!(BudgetSpec::Absolute(7).resolve(1000), 7);
    }
}
