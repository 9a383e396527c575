use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::compare::{descriptor_distance, Method};
use crate::error::{Error, Result};
use crate::harness::batch::{estimate_descriptor, exact_descriptor, BudgetSpec};
use crate::harness::{derive_seed, with_pool, Dataset};
use crate::oracle::Oracle;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorRow {
    pub budget_fraction: f64,
    /// Mean Canberra distance between estimated and exact descriptors.
    pub mean_error: f64,
    pub std_error: f64,
    pub samples: usize,
}

/// Approximation error as a function of the budget fraction. Trial `t` on
/// graph `g` uses the same seed at every budget.
pub fn error_vs_budget(
    ds: &Dataset,
    method: Method,
    budgets: &[f64],
    trials: usize,
    seed: u64,
    oracle: &Oracle,
    threads: Option<usize>,
) -> Result<Vec<ErrorRow>> {
    if trials == 0 || budgets.is_empty() || ds.is_empty() {
        return Err(Error::InvalidArgument(
            "need at least one graph, budget and trial".into(),
        ));
    }
    if let Some(f) = budgets.iter().find(|&&f| !(f > 0.0 && f <= 1.0)) {
        return Err(Error::InvalidArgument(format!(
            "budget fraction {f} outside (0, 1]"
        )));
    }
    with_pool(threads, || {
        let exact = ds
            .graphs
            .par_iter()
            .enumerate()
            .map(|(i, s)| exact_descriptor(s, method, oracle, i as u64))
            .collect::<Result<Vec<_>>>()?;

        budgets
            .iter()
            .map(|&frac| {
                let errors = (0..ds.len() * trials)
                    .into_par_iter()
                    .map(|job| {
                        let g = job / trials;
                        let stream = &ds.graphs[g];
                        let b = BudgetSpec::Fraction(frac).resolve(stream.len());
                        let trial_seed = derive_seed(seed, job as u64);
                        let est = estimate_descriptor(stream, method, b, 1, trial_seed, g as u64)?;
                        descriptor_distance(&est, &exact[g])
                    })
                    .collect::<Result<Vec<f64>>>()?;
                let k = errors.len() as f64;
                let mean = errors.iter().sum::<f64>() / k;
                let var = errors.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / k;
                Ok(ErrorRow {
                    budget_fraction: frac,
                    mean_error: mean,
                    std_error: var.sqrt(),
                    samples: errors.len(),
                })
            })
            .collect()
    })
}

pub fn write_error_table<W: Write>(out: W, rows: &[ErrorRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let err = |e: csv::Error| Error::io("<output>", e.into());
    for r in rows {
        w.serialize(r).map_err(err)?;
    }
    w.flush().map_err(|e| Error::io("<output>", e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::gnp;

    #[test]
    fn full_budget_has_zero_error() {
        let raw: Vec<_> = (0..3).map(|i| gnp(12, 0.4, i)).collect();
        let ds = Dataset::from_raw("t", &raw, vec![0; 3], 1).unwrap();
        for method in [Method::Gabe, Method::Maeve] {
            let rows =
                error_vs_budget(&ds, method, &[1.0], 2, 0, &Oracle::default(), None).unwrap();
            assert!(rows[0].mean_error < 1e-9, "{method}: {rows:?}");
            assert_eq!(rows[0].samples, 6);
        }
    }

    #[test]
    fn deterministic_single_trial() {
        let ds = Dataset::from_raw("t", &[gnp(15, 0.4, 3)], vec![0], 1).unwrap();
        let run = || error_vs_budget(&ds, Method::Maeve, &[0.5], 1, 8, &Oracle::default(), None);
        assert_eq!(run().unwrap(), run().unwrap());
    }

    #[test]
    fn table_has_header() {
        let mut buf = Vec::new();
        let rows = [ErrorRow {
            budget_fraction: 0.5,
            mean_error: 0.25,
            std_error: 0.0,
            samples: 1,
        }];
        write_error_table(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("budget_fraction,mean_error,std_error,samples\n0.5,0.25,"));
    }
}
