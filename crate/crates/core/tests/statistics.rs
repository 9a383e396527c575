//! Monte-Carlo checks of the sampler and estimators, plus a runtime scaling
//! spot check.

use std::time::{Duration, Instant};

use streamdesc::estimator::{EstimatorConfig, StreamEstimator};
use streamdesc::gabe::GabeState;
use streamdesc::generate::gnp;
use streamdesc::graph::{build_graph, preprocess, Edge, EdgeStream};
use streamdesc::maeve::MaeveState;
use streamdesc::oracle::exact_subgraph_counts;
use streamdesc::patterns::Pattern;
use streamdesc::sampler::ReservoirState;

fn path_stream(len: u32) -> Vec<Edge> {
    (0..len).map(|i| Edge::new(i, i + 1).unwrap()).collect()
}

/// Fraction of trials in which each stream position survives.
fn inclusion_rates(len: u32, b: usize, trials: u64) -> Vec<f64> {
    let edges = path_stream(len);
    let mut hits = vec![0u64; len as usize];
    for seed in 0..trials {
        let mut r = ReservoirState::new(b, seed).unwrap();
        for &e in &edges {
            r.maybe_sample(e);
        }
        for e in r.edges() {
            hits[e.u() as usize] += 1;
        }
    }
    hits.iter().map(|&h| h as f64 / trials as f64).collect()
}

fn within_sigmas(rate: f64, p: f64, trials: u64, k: f64) -> bool {
    (rate - p).abs() <= k * (p * (1.0 - p) / trials as f64).sqrt()
}

#[test]
fn single_slot_reservoir_keeps_each_edge_with_probability_one_over_t() {
    let trials = 10_000;
    let t = 40;
    let rates = inclusion_rates(t, 1, trials);
    let p = 1.0 / t as f64;
    let bad: Vec<_> = rates
        .iter()
        .enumerate()
        .filter(|(_, &r)| !within_sigmas(r, p, trials, 3.0))
        .collect();
    // At 3 sigma a stray position or two is expected among 40.
    assert!(bad.len() <= 2, "{bad:?}");
    let last = rates[t as usize - 1];
    assert!(within_sigmas(last, p, trials, 3.0), "last edge rate {last}");
}

#[test]
fn reservoir_inclusion_is_b_over_t() {
    let trials = 10_000;
    let (t, b) = (30, 6);
    let p = b as f64 / t as f64;
    let rates = inclusion_rates(t, b, trials);
    let bad = rates
        .iter()
        .filter(|&&r| !within_sigmas(r, p, trials, 3.0))
        .count();
    assert!(bad <= 2, "{rates:?}");
    let mean = rates.iter().sum::<f64>() / t as f64;
    assert!((mean - p).abs() < 1e-12);
}

fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[test]
fn dense_graph_estimates_are_unbiased() {
    // Denser than G(30, 0.2) so every pattern, K4 included, occurs.
    let s = preprocess(&gnp(16, 0.45, 161), 161);
    let h = exact_subgraph_counts(&build_graph(&s).unwrap()).unwrap();
    assert!(h[Pattern::K4] >= 3.0, "{}", h[Pattern::K4]);
    let b = s.len().div_ceil(3);
    let runs = 2_000;
    let samples: Vec<[f64; 6]> = (0..runs)
        .map(|r| {
            let mut st = GabeState::new(EstimatorConfig::for_stream(b, r, &s)).unwrap();
            st.process_stream(s.iter()).unwrap();
            st.estimates()
        })
        .collect();
    for (i, p) in Pattern::STREAM_ESTIMATED.iter().enumerate() {
        let xs: Vec<f64> = samples.iter().map(|x| x[i]).collect();
        let (mean, se) = mean_se(&xs);
        assert!(se > 0.0, "{p}: no variation");
        assert!(
            (mean - h[*p]).abs() <= 4.0 * se,
            "{p}: mean {mean}, oracle {}, se {se}",
            h[*p]
        );
    }
}

#[test]
fn replica_averages_stay_unbiased() {
    let s = preprocess(&gnp(25, 0.3, 77), 77);
    let g = build_graph(&s).unwrap();
    let h = exact_subgraph_counts(&g).unwrap();
    let b = s.len().div_ceil(4);
    let w = 4;
    let mut tri = Vec::new();
    let mut tri_sum = Vec::new();
    for trial in 0..300u64 {
        let gabe: Vec<_> = (0..w)
            .map(|i| {
                let mut st =
                    GabeState::new(EstimatorConfig::for_stream(b, trial * 100 + i, &s)).unwrap();
                st.process_stream(s.iter()).unwrap();
                st
            })
            .collect();
        tri.push(GabeState::average_replicas(gabe).unwrap().estimates()[0]);

        let maeve: Vec<_> = (0..w)
            .map(|i| {
                let mut st =
                    MaeveState::new(EstimatorConfig::for_stream(b, trial * 100 + i, &s)).unwrap();
                st.process_stream(s.iter()).unwrap();
                st
            })
            .collect();
        tri_sum.push(
            MaeveState::average_replicas(maeve)
                .unwrap()
                .triangles()
                .iter()
                .sum(),
        );
    }
    let (mean, se) = mean_se(&tri);
    assert!((mean - h[Pattern::Triangle]).abs() <= 4.0 * se);
    let (mean, se) = mean_se(&tri_sum);
    assert!((mean - 3.0 * h[Pattern::Triangle]).abs() <= 4.0 * se);
}

fn timed<F: FnMut()>(mut f: F) -> Duration {
    (0..5)
        .map(|_| {
            let start = Instant::now();
            f();
            start.elapsed()
        })
        .min()
        .unwrap()
}

#[test]
fn doubling_the_stream_at_most_doubles_runtime() {
    // Long, sparse streams so the reservoir is saturated for almost all of
    // both runs.
    let long = preprocess(&gnp(3_000, 0.004, 5), 5);
    let half = EdgeStream::new(long.edges()[..long.len() / 2].to_vec());
    let b = 200;
    for gabe in [true, false] {
        let run = |s: &EdgeStream| {
            timed(|| {
                if gabe {
                    let mut st = GabeState::new(EstimatorConfig::for_stream(b, 1, s)).unwrap();
                    st.process_stream(s.iter()).unwrap();
                } else {
                    let mut st = MaeveState::new(EstimatorConfig::for_stream(b, 1, s)).unwrap();
                    st.process_stream(s.iter()).unwrap();
                }
            })
        };
        let ratio = run(&long).as_secs_f64() / run(&half).as_secs_f64();
        assert!(ratio <= 2.0 * 1.3, "gabe={gabe}: runtime ratio {ratio:.2}");
    }
}
