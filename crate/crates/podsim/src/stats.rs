use podsim_core::{BatchTrace, Belief};
use serde::Serialize;

use crate::config::RunFile;

/// Dominant-level share at which a run counts as converged.
pub const CONVERGENCE_THRESHOLD: f64 = 0.99;

/// Per-condition digest written next to each trace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryStats {
    pub config: RunFile,
    pub final_mean: [f64; Belief::LEVELS],
    pub final_variance: [f64; Belief::LEVELS],
    pub dominant_level: u8,
    /// First tick whose mean histogram has a level at or above the threshold.
    pub convergence_tick: Option<usize>,
    /// Beliefs adopted over each repetition.
    pub believed: Vec<u64>,
    pub believed_total: u64,
}

impl SummaryStats {
    pub fn new(config: RunFile, trace: &BatchTrace) -> Self {
        let convergence_tick = trace
            .mean
            .iter()
            .position(|h| h.dominant().1 >= CONVERGENCE_THRESHOLD);
        SummaryStats {
            config,
            final_mean: trace.final_mean().0,
            final_variance: trace.final_variance().0,
            dominant_level: trace.final_mean().dominant().0.get(),
            convergence_tick,
            believed: trace.believed.clone(),
            believed_total: trace.believed.iter().sum(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{GraphConfig, ModelConfig, PolicyConfig, ScheduleConfig};
    use podsim_core::Histogram;

    fn file() -> RunFile {
        RunFile {
            name: None,
            graph: GraphConfig::Er { n: 10, rho: 0.1 },
            model: ModelConfig::Dcc,
            schedule: ScheduleConfig::default(),
            ticks: 2,
            institution_belief: 6,
            epsilon: 0,
            repetitions: 2,
            seed: 0,
            policy: PolicyConfig::FirstCopy,
        }
    }

    #[test]
    fn convergence_tick_is_first_dominant_tick() {
        let mut almost = Histogram::default();
        almost.0[2] = 0.985;
        almost.0[3] = 0.015;
        let mut done = Histogram::default();
        done.0[2] = 0.995;
        done.0[4] = 0.005;
        let trace = BatchTrace {
            mean: vec![almost, done, done],
            variance: vec![Histogram::default(); 3],
            believed: vec![3, 4],
        };
        let s = SummaryStats::new(file(), &trace);
        assert_eq!(s.convergence_tick, Some(1));
        assert_eq!(s.dominant_level, 2);
        assert_eq!(s.believed_total, 7);

        let flat = BatchTrace {
            mean: vec![almost; 3],
            variance: vec![Histogram::default(); 3],
            believed: vec![0, 0],
        };
        assert_eq!(SummaryStats::new(file(), &flat).convergence_tick, None);
    }
}
