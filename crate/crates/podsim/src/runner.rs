use podsim_core::pod::{self, batch_seeds};
use podsim_core::{BatchTrace, RunConfig, SimulationTrace};
use rayon::prelude::*;

use crate::error::{CliError, Result};

/// Thread pool for independent runs. Results always come back in input
/// order, so output never depends on the worker count.
pub struct Runner {
    pool: rayon::ThreadPool,
}

impl Runner {
    /// `None` uses one worker per available core.
    pub fn new(workers: Option<usize>) -> Result<Self> {
        if workers == Some(0) {
            return Err(CliError::Usage("--workers must be at least 1".into()));
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers.unwrap_or(0))
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
        Ok(Runner { pool })
    }

    pub fn map<T, U, F>(&self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
    {
        self.pool.install(|| items.par_iter().map(f).collect())
    }

    /// Runs every `(config, repetitions)` pair, repetition `i` with seed
    /// `config.seed + i`, and aggregates each pair.
    pub fn batches(&self, jobs: &[(RunConfig, usize)]) -> Result<Vec<BatchTrace>> {
        let flat: Vec<(usize, RunConfig)> = jobs
            .iter()
            .enumerate()
            .flat_map(|(i, (c, reps))| batch_seeds(c.seed, *reps).map(move |s| (i, c.with_seed(s))))
            .collect();
        let runs = self.map(&flat, |(_, c)| pod::run(c));
        let mut grouped: Vec<Vec<SimulationTrace>> = vec![Vec::new(); jobs.len()];
        for ((i, _), r) in flat.iter().zip(runs) {
            grouped[*i].push(r?);
        }
        grouped
            .iter()
            .map(|runs| BatchTrace::from_runs(runs).map_err(CliError::from))
            .collect()
    }
}
