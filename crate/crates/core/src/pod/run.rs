use alloc::vec;
use alloc::vec::Vec;

use super::engine::{ExposurePolicy, SimState};
use super::{Institution, MessageSchedule};
use crate::belief::{Belief, Histogram};
use crate::error::{invalid, Result};
use crate::graph::GraphKind;
use crate::kernel::ContagionModel;
use crate::rng::{stream, Stream};

/// Everything needed to reproduce one simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub graph: GraphKind,
    pub model: ContagionModel,
    pub schedule: MessageSchedule,
    pub ticks: u32,
    pub institution_belief: Belief,
    pub epsilon: u8,
    pub policy: ExposurePolicy,
    /// Seeds both the graph realization and the simulation stream.
    pub seed: u64,
}

impl RunConfig {
    /// The comparison setup: 100 ticks, one institution at 6, `epsilon = 0`.
    pub fn new(
        graph: GraphKind,
        model: ContagionModel,
        schedule: MessageSchedule,
        seed: u64,
    ) -> Self {
        RunConfig {
            graph,
            model,
            schedule,
            ticks: 100,
            institution_belief: Belief::MAX,
            epsilon: 0,
            policy: ExposurePolicy::default(),
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.ticks == 0 {
            return Err(invalid("T", "must be at least 1"));
        }
        if self.epsilon > 6 {
            return Err(invalid("epsilon", "must lie in 0..=6"));
        }
        self.graph.validate()?;
        self.model.validate()?;
        self.schedule.validate(self.ticks)
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        RunConfig {
            seed,
            ..self.clone()
        }
    }
}

/// Per-tick belief histograms of a single run; index 0 is the initial state.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationTrace {
    pub histograms: Vec<Histogram>,
    /// Beliefs adopted during each tick (0 at tick 0).
    pub believed: Vec<u64>,
}

impl SimulationTrace {
    pub fn initial(&self) -> &Histogram {
        &self.histograms[0]
    }

    pub fn last(&self) -> &Histogram {
        self.histograms
            .last()
            .expect("trace holds the initial histogram")
    }

    pub fn total_believed(&self) -> u64 {
        self.believed.iter().sum()
    }
}

/// Generates the graph, wires one institution and runs `ticks` steps.
pub fn run(config: &RunConfig) -> Result<SimulationTrace> {
    config.validate()?;
    let graph = config.graph.clone().with_seed(config.seed).generate()?;
    let institution =
        Institution::with_subscribers(0, &graph, config.institution_belief, config.epsilon);
    let mut histograms = Vec::with_capacity(config.ticks as usize + 1);
    let mut believed = Vec::with_capacity(config.ticks as usize + 1);
    histograms.push(graph.histogram());
    believed.push(0);

    let rng = stream(config.seed, Stream::Simulation);
    let mut state =
        SimState::new(graph, vec![institution], config.model, rng).with_policy(config.policy);
    for _ in 0..config.ticks {
        let report = state.step(&config.schedule, config.ticks)?;
        histograms.push(report.histogram);
        believed.push(report.believed);
    }
    Ok(SimulationTrace {
        histograms,
        believed,
    })
}

/// Mean and variance of per-tick histograms across repetitions.
///
/// Variance is the population variance (divided by the number of runs), so a
/// single run has zero variance.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchTrace {
    pub mean: Vec<Histogram>,
    pub variance: Vec<Histogram>,
    /// Total beliefs adopted over each run, in repetition order.
    pub believed: Vec<u64>,
}

impl BatchTrace {
    /// Aggregates runs in the given order. All traces must share one length.
    pub fn from_runs(runs: &[SimulationTrace]) -> Result<Self> {
        let first = runs
            .first()
            .ok_or(invalid("repetitions", "must be at least 1"))?;
        let len = first.histograms.len();
        if runs.iter().any(|r| r.histograms.len() != len) {
            return Err(invalid("runs", "traces differ in length"));
        }
        let count = runs.len() as f64;
        let mut mean = vec![Histogram::default(); len];
        let mut variance = vec![Histogram::default(); len];
        for t in 0..len {
            for level in 0..Belief::LEVELS {
                let mu = runs.iter().map(|r| r.histograms[t].0[level]).sum::<f64>() / count;
                let var = runs
                    .iter()
                    .map(|r| {
                        let d = r.histograms[t].0[level] - mu;
                        d * d
                    })
                    .sum::<f64>()
                    / count;
                mean[t].0[level] = mu;
                variance[t].0[level] = var;
            }
        }
        Ok(BatchTrace {
            mean,
            variance,
            believed: runs.iter().map(SimulationTrace::total_believed).collect(),
        })
    }

    pub fn ticks(&self) -> usize {
        self.mean.len() - 1
    }

    pub fn final_mean(&self) -> &Histogram {
        self.mean.last().expect("non-empty")
    }

    pub fn final_variance(&self) -> &Histogram {
        self.variance.last().expect("non-empty")
    }
}

/// Seeds used by [`run_batch`]: `seed, seed + 1, ...`.
pub fn batch_seeds(seed: u64, repetitions: usize) -> impl Iterator<Item = u64> {
    (0..repetitions as u64).map(move |i| seed.wrapping_add(i))
}

/// Runs `repetitions` independent runs with seeds `seed + i` and aggregates them.
pub fn run_batch(config: &RunConfig, repetitions: usize) -> Result<BatchTrace> {
    if repetitions == 0 {
        return Err(invalid("repetitions", "must be at least 1"));
    }
    let runs = batch_seeds(config.seed, repetitions)
        .map(|s| run(&config.with_seed(s)))
        .collect::<Result<Vec<_>>>()?;
    BatchTrace::from_runs(&runs)
}
