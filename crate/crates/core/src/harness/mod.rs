//! Experiment engine: dataset ingestion, batch descriptor computation with
//! replica averaging, 1-NN cross-validation and the error-vs-budget sweep.

mod batch;
mod classify;
mod dataset;
mod experiment;

pub use batch::{
    compute_descriptors, estimate_descriptor, exact_descriptor, exact_descriptors, BatchConfig,
    BudgetSpec,
};
pub use classify::{cross_validate, ClassificationReport, CvConfig};
pub use dataset::{load_benchmark_dataset, Dataset};
pub use experiment::{error_vs_budget, write_error_table, ErrorRow};

/// SplitMix64 mix of a base seed and a stream index.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base
        .wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs `f` on a pool of `threads` workers, or on the global pool.
pub(crate) fn with_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match threads {
        Some(n) if n > 0 => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(f),
            Err(e) => {
                log::warn!("could not build a {n}-thread pool ({e}); using the global pool");
                f()
            }
        },
        _ => f(),
    }
}
