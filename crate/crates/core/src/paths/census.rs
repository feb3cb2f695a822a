use alloc::vec::Vec;

use rand::Rng;

use super::min_bottleneck;
use crate::belief::Belief;
use crate::error::{invalid, Result};
use crate::graph::{GraphKind, NodeId, SocialGraph};
use crate::pod::Institution;
use crate::rng::{stream, Stream};

/// Share of sampled graphs in which a randomly picked agent of each belief
/// level can be reached by a route of agents within `tau` of the message.
#[derive(Debug, Clone, PartialEq)]
pub struct PathCensusRow {
    pub graph_type: &'static str,
    pub tau: u32,
    /// Indexed by the target's belief `b_u`.
    pub proportions: [f64; Belief::LEVELS],
}

/// Graph seed for `trial` on its `attempt`-th resample: `seed + trial + attempt * trials`.
pub fn census_seed(seed: u64, trial: usize, attempt: usize, trials: usize) -> u64 {
    seed.wrapping_add(trial as u64)
        .wrapping_add((attempt as u64).wrapping_mul(trials as u64))
}

/// Census for a single `tau`. See [`path_census_multi`].
pub fn path_census(
    kind: &GraphKind,
    tau: u32,
    msg_level: Belief,
    trials: usize,
    seed: u64,
) -> Result<PathCensusRow> {
    Ok(path_census_multi(kind, &[tau], msg_level, trials, seed)?.remove(0))
}

/// Runs the census for several `tau` values over the same sampled graphs.
///
/// Each trial draws a fresh graph; the institution broadcasts at `msg_level`
/// and subscribes the agents holding exactly that level. For every `b_u` a
/// uniformly random agent with that belief becomes the target. When a graph
/// has no agent at some level, that level's target comes from a resampled
/// graph (see [`census_seed`]).
pub fn path_census_multi(
    kind: &GraphKind,
    taus: &[u32],
    msg_level: Belief,
    trials: usize,
    seed: u64,
) -> Result<Vec<PathCensusRow>> {
    if trials == 0 {
        return Err(invalid("trials", "must be at least 1"));
    }
    kind.validate()?;
    let mut hits = alloc::vec![[0usize; Belief::LEVELS]; taus.len()];
    for trial in 0..trials {
        let mut pending: Vec<Belief> = Belief::all().collect();
        let mut attempt = 0;
        while !pending.is_empty() {
            let graph_seed = census_seed(seed, trial, attempt, trials);
            let graph = kind.clone().with_seed(graph_seed).generate()?;
            let institution = Institution::with_subscribers(0, &graph, msg_level, 0);
            let mut rng = stream(graph_seed, Stream::Census);
            let mut still_pending = Vec::new();
            for &level in &pending {
                let Some(target) = pick(&graph, level, &mut rng) else {
                    still_pending.push(level);
                    continue;
                };
                let bottleneck = min_bottleneck(&graph, &institution, target, msg_level)?;
                for (row, &tau) in hits.iter_mut().zip(taus) {
                    if bottleneck.is_some_and(|c| u32::from(c) <= tau) {
                        row[level.index()] += 1;
                    }
                }
            }
            pending = still_pending;
            attempt += 1;
        }
    }
    Ok(taus
        .iter()
        .zip(hits)
        .map(|(&tau, row)| PathCensusRow {
            graph_type: kind.tag(),
            tau,
            proportions: row.map(|h| h as f64 / trials as f64),
        })
        .collect())
}

fn pick(graph: &SocialGraph, level: Belief, rng: &mut impl Rng) -> Option<NodeId> {
    let candidates: Vec<NodeId> = graph.nodes_with_belief(level).collect();
    if candidates.is_empty() {
        None
    } else {
        Some(candidates[rng.gen_range(0..candidates.len())])
    }
}
