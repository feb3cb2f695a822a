//! Public opinion diffusion: institutions broadcast belief-valued messages to
//! their subscribers, and every agent that believes a message passes the
//! original message on to all of its neighbors.

mod engine;
mod run;

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::belief::Belief;
use crate::error::{invalid, Error, Result};
use crate::graph::{NodeId, SocialGraph};

pub use engine::{ExposurePolicy, Randomness, SimState, StepReport};
pub use run::{batch_seeds, run, run_batch, BatchTrace, RunConfig, SimulationTrace};

pub type MessageId = u64;

/// A broadcaster with directed edges to its subscribers. Its belief never changes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Institution {
    pub id: usize,
    pub belief: Belief,
    pub subscribers: Vec<NodeId>,
}

impl Institution {
    /// Subscribes every agent whose current belief is within `epsilon` of `belief`.
    pub fn with_subscribers(id: usize, graph: &SocialGraph, belief: Belief, epsilon: u8) -> Self {
        Institution {
            id,
            belief,
            subscribers: subscribe(graph, belief, epsilon),
        }
    }
}

/// One broadcast. `uid` is unique across a whole run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Message {
    pub uid: MessageId,
    pub belief: Belief,
    pub origin: usize,
    pub tick: u32,
}

/// Agents `u` with `|b_u - institution_belief| <= epsilon`, in ascending order.
pub fn subscribe(graph: &SocialGraph, institution_belief: Belief, epsilon: u8) -> Vec<NodeId> {
    (0..graph.node_count())
        .filter(|&u| graph.belief(u).distance(institution_belief) <= epsilon)
        .collect()
}

/// What an institution broadcasts at each tick `1..=T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MessageSchedule {
    /// The same level every tick.
    Single { level: Belief },
    /// `first` up to and including `switch_tick`, `second` afterwards.
    Split {
        first: Belief,
        second: Belief,
        switch_tick: u32,
    },
    /// Starts at `start` and moves one level toward `end` every `interval` ticks.
    Gradual {
        start: Belief,
        end: Belief,
        interval: u32,
    },
    /// Levels listed per tick; a tick may broadcast several messages.
    Explicit(BTreeMap<u32, Vec<Belief>>),
}

impl MessageSchedule {
    pub const fn single() -> Self {
        Self::Single { level: Belief::MAX }
    }

    pub const fn split() -> Self {
        Self::Split {
            first: Belief::MAX,
            second: Belief::MIN,
            switch_tick: 50,
        }
    }

    pub const fn gradual() -> Self {
        Self::Gradual {
            start: Belief::MAX,
            end: Belief::MIN,
            interval: 10,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Single { .. } => "single",
            Self::Split { .. } => "split",
            Self::Gradual { .. } => "gradual",
            Self::Explicit(_) => "explicit",
        }
    }

    /// Checks the schedule covers every tick in `1..=horizon`.
    pub fn validate(&self, horizon: u32) -> Result<()> {
        match self {
            Self::Gradual { interval: 0, .. } => Err(invalid("interval", "must be at least 1")),
            Self::Explicit(map) => {
                if (1..=horizon).any(|t| !map.contains_key(&t)) {
                    return Err(invalid(
                        "schedule",
                        "explicit schedule must list every tick",
                    ));
                }
                if map.keys().any(|&t| t == 0 || t > horizon) {
                    return Err(invalid(
                        "schedule",
                        "explicit schedule lists ticks outside 1..=T",
                    ));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn levels_at(&self, tick: u32, horizon: u32) -> Result<Vec<Belief>> {
        if tick == 0 || tick > horizon {
            return Err(Error::TickOutOfRange { tick, horizon });
        }
        Ok(match self {
            Self::Single { level } => vec![*level],
            Self::Split {
                first,
                second,
                switch_tick,
            } => vec![if tick <= *switch_tick {
                *first
            } else {
                *second
            }],
            Self::Gradual {
                start,
                end,
                interval,
            } => {
                let steps = (tick - 1) / (*interval).max(1);
                let span = u32::from(start.distance(*end));
                let moved = steps.min(span) as u8;
                let level = if start >= end {
                    start.get() - moved
                } else {
                    start.get() + moved
                };
                vec![Belief::new(level)?]
            }
            Self::Explicit(map) => map.get(&tick).cloned().unwrap_or_default(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::belief::b;

    fn at(s: &MessageSchedule, t: u32) -> Vec<Belief> {
        s.levels_at(t, 100).unwrap()
    }

    #[test]
    fn default_schedules() {
        assert_eq!(at(&MessageSchedule::single(), 77), [b(6)]);
        let split = MessageSchedule::split();
        assert_eq!(at(&split, 50), [b(6)]);
        assert_eq!(at(&split, 51), [b(0)]);
        let gradual = MessageSchedule::gradual();
        assert_eq!(at(&gradual, 1), [b(6)]);
        assert_eq!(at(&gradual, 10), [b(6)]);
        assert_eq!(at(&gradual, 11), [b(5)]);
        assert_eq!(at(&gradual, 15), [b(5)]);
        assert_eq!(at(&gradual, 60), [b(1)]);
        assert_eq!(at(&gradual, 61), [b(0)]);
        assert_eq!(at(&gradual, 95), [b(0)]);
    }

    #[test]
    fn gradual_upwards() {
        let up = MessageSchedule::Gradual {
            start: b(1),
            end: b(3),
            interval: 2,
        };
        let got: Vec<u8> = (1..=8).map(|t| at(&up, t)[0].get()).collect();
        assert_eq!(got, [1, 1, 2, 2, 3, 3, 3, 3]);
    }

    #[test]
    fn tick_range() {
        let s = MessageSchedule::single();
        assert_eq!(
            s.levels_at(0, 100),
            Err(Error::TickOutOfRange {
                tick: 0,
                horizon: 100
            })
        );
        assert!(s.levels_at(101, 100).is_err());
        assert!(s.levels_at(100, 100).is_ok());
    }

    #[test]
    fn explicit_validation() {
        let mut map = BTreeMap::new();
        map.insert(1, vec![b(4), b(3)]);
        map.insert(2, vec![]);
        let s = MessageSchedule::Explicit(map);
        assert!(s.validate(2).is_ok());
        assert!(s.validate(3).is_err());
        assert_eq!(s.levels_at(1, 2).unwrap(), [b(4), b(3)]);
        assert!(MessageSchedule::Gradual {
            start: b(6),
            end: b(0),
            interval: 0
        }
        .validate(10)
        .is_err());
    }

    #[test]
    fn subscription_by_distance() {
        let beliefs = vec![b(6), b(5), b(0), b(6), b(3)];
        let g = SocialGraph::from_edges(beliefs, []).unwrap();
        assert_eq!(subscribe(&g, b(6), 0), [0, 3]);
        assert_eq!(subscribe(&g, b(6), 1), [0, 1, 3]);
        assert_eq!(subscribe(&g, b(6), 6), [0, 1, 2, 3, 4]);
        let none = SocialGraph::from_edges(vec![b(1), b(2)], []).unwrap();
        assert!(subscribe(&none, b(6), 0).is_empty());
    }
}
