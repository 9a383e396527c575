use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::compare::{descriptor_distance, Descriptor};
use crate::error::{Error, Result};
use crate::harness::derive_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CvConfig {
    pub folds: usize,
    pub repeats: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationReport {
    /// Accuracy of every fold of every repeat, repeat-major.
    pub fold_accuracies: Vec<f64>,
    pub mean_accuracy: f64,
    pub std_accuracy: f64,
    pub config: CvConfig,
}

/// Repeated plain k-fold cross-validation of a 1-nearest-neighbour
/// classifier under Canberra distance. Ties go to the lowest `graph_id`.
pub fn cross_validate(
    descs: &[Descriptor],
    labels: &[i64],
    cfg: CvConfig,
) -> Result<ClassificationReport> {
    let n = descs.len();
    if labels.len() != n {
        return Err(Error::LengthMismatch(n, labels.len()));
    }
    if cfg.folds < 2 {
        return Err(Error::InvalidArgument("need at least 2 folds".into()));
    }
    if n < cfg.folds {
        return Err(Error::InvalidArgument(format!(
            "{n} items cannot be split into {} folds",
            cfg.folds
        )));
    }
    if labels.iter().collect::<BTreeSet<_>>().len() < 2 {
        return Err(Error::InvalidArgument("need at least 2 classes".into()));
    }
    if cfg.repeats == 0 {
        return Err(Error::InvalidArgument("need at least 1 repeat".into()));
    }

    // Pairwise distances once; folds only select from them.
    let mut dist = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let d = descriptor_distance(&descs[i], &descs[j])?;
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }

    let mut fold_accuracies = Vec::with_capacity(cfg.folds * cfg.repeats);
    let mut in_test = vec![false; n];
    for r in 0..cfg.repeats {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(derive_seed(
            cfg.seed, r as u64,
        )));
        for f in 0..cfg.folds {
            let test = &order[f * n / cfg.folds..(f + 1) * n / cfg.folds];
            for &i in test {
                in_test[i] = true;
            }
            let correct = test
                .iter()
                .filter(|&&i| {
                    let nearest = (0..n)
                        .filter(|&j| !in_test[j])
                        .min_by(|&a, &b| {
                            dist[i * n + a]
                                .total_cmp(&dist[i * n + b])
                                .then(descs[a].graph_id.cmp(&descs[b].graph_id))
                        })
                        .expect("training split is non-empty");
                    labels[nearest] == labels[i]
                })
                .count();
            for &i in test {
                in_test[i] = false;
            }
            fold_accuracies.push(correct as f64 / test.len() as f64);
        }
    }

    let k = fold_accuracies.len() as f64;
    let mean = fold_accuracies.iter().sum::<f64>() / k;
    let var = fold_accuracies
        .iter()
        .map(|a| (a - mean).powi(2))
        .sum::<f64>()
        / k;
    Ok(ClassificationReport {
        fold_accuracies,
        mean_accuracy: mean,
        std_accuracy: var.sqrt(),
        config: cfg,
    })
}
