use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Institution, Message, MessageId, MessageSchedule};
use crate::belief::{Belief, Histogram};
use crate::error::Result;
use crate::graph::{NodeId, SocialGraph};
use crate::kernel::{contagion_prob, ContagionModel, Probability};
use crate::rng::StreamRng;

/// Source of the two random decisions the engine makes.
pub trait Randomness {
    /// One Bernoulli trial with success probability `p`.
    fn trial(&mut self, p: Probability) -> bool;
    /// Permutes an institution's fan-out before it is queued.
    fn shuffle(&mut self, nodes: &mut [NodeId]);
}

impl Randomness for StreamRng {
    fn trial(&mut self, p: Probability) -> bool {
        let p = p.get();
        if p <= 0.0 {
            false
        } else if p >= 1.0 {
            true
        } else {
            self.gen_bool(p)
        }
    }

    fn shuffle(&mut self, nodes: &mut [NodeId]) {
        nodes.shuffle(self);
    }
}

/// How many Bernoulli trials an agent gets for one message.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExposurePolicy {
    /// A trial per received copy until the agent believes; later copies are ignored.
    PerCopy,
    /// A single trial on the first copy; every later copy is ignored.
    #[default]
    FirstCopy,
}

/// Outcome of one tick.
#[derive(Debug, Clone, PartialEq)]
pub struct StepReport {
    pub tick: u32,
    pub histogram: Histogram,
    /// Number of (agent, message) beliefs during the tick.
    pub believed: u64,
    pub messages: Vec<Message>,
}

/// Mutable state of a single run.
#[derive(Debug, Clone)]
pub struct SimState<R = StreamRng> {
    graph: SocialGraph,
    institutions: Vec<Institution>,
    model: ContagionModel,
    policy: ExposurePolicy,
    tick: u32,
    /// Message uids each agent is done with and will ignore from now on.
    processed: Vec<BTreeSet<MessageId>>,
    next_uid: MessageId,
    rng: R,
}

impl<R: Randomness> SimState<R> {
    pub fn new(
        graph: SocialGraph,
        institutions: Vec<Institution>,
        model: ContagionModel,
        rng: R,
    ) -> Self {
        let n = graph.node_count();
        SimState {
            graph,
            institutions,
            model,
            policy: ExposurePolicy::default(),
            tick: 0,
            processed: alloc::vec![BTreeSet::new(); n],
            next_uid: 0,
            rng,
        }
    }

    pub fn with_policy(mut self, policy: ExposurePolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn graph(&self) -> &SocialGraph {
        &self.graph
    }

    pub fn institutions(&self) -> &[Institution] {
        &self.institutions
    }

    pub fn model(&self) -> &ContagionModel {
        &self.model
    }

    pub fn tick(&self) -> u32 {
        self.tick
    }

    pub fn policy(&self) -> ExposurePolicy {
        self.policy
    }

    pub fn has_processed(&self, agent: NodeId, uid: MessageId) -> bool {
        self.processed[agent].contains(&uid)
    }

    pub fn processed(&self, agent: NodeId) -> &BTreeSet<MessageId> {
        &self.processed[agent]
    }

    pub fn into_graph(self) -> SocialGraph {
        self.graph
    }

    /// Share of `agent`'s neighbors whose current belief equals `level`.
    /// Isolated agents report 0.
    pub fn matching_fraction(&self, agent: NodeId, level: Belief) -> f64 {
        let neighbors = self.graph.neighbors(agent);
        if neighbors.is_empty() {
            return 0.0;
        }
        let matching = neighbors
            .iter()
            .filter(|&&v| self.graph.belief(v) == level)
            .count();
        matching as f64 / neighbors.len() as f64
    }

    /// Hands one copy of `msg` to `receiver` and rolls whether it is believed.
    ///
    /// The caller must not deliver a uid the receiver has already processed.
    /// On belief the receiver adopts the message level and is done with the
    /// uid. On rejection nothing changes under [`ExposurePolicy::PerCopy`];
    /// under [`ExposurePolicy::FirstCopy`] the uid is marked processed.
    pub fn deliver(&mut self, receiver: NodeId, msg: &Message, neighbor_fraction: f64) -> bool {
        debug_assert!(!self.processed[receiver].contains(&msg.uid));
        let p = contagion_prob(
            &self.model,
            self.graph.belief(receiver),
            msg.belief,
            neighbor_fraction,
        );
        let believed = self.rng.trial(p);
        if believed {
            self.graph.set_belief(receiver, msg.belief);
        }
        if believed || self.policy == ExposurePolicy::FirstCopy {
            self.processed[receiver].insert(msg.uid);
        }
        believed
    }

    /// Broadcasts one message and runs its cascade to quiescence. Returns the
    /// number of agents that believed it.
    pub fn broadcast(&mut self, institution: usize, level: Belief) -> (Message, u64) {
        let msg = Message {
            uid: self.next_uid,
            belief: level,
            origin: self.institutions[institution].id,
            tick: self.tick,
        };
        self.next_uid += 1;

        let mut fanout = self.institutions[institution].subscribers.clone();
        self.rng.shuffle(&mut fanout);
        let mut queue: VecDeque<NodeId> = fanout.into();
        let mut believed = 0;
        while let Some(receiver) = queue.pop_front() {
            if self.processed[receiver].contains(&msg.uid) {
                continue;
            }
            let fraction = match self.model {
                ContagionModel::Complex { .. } => self.matching_fraction(receiver, msg.belief),
                _ => 0.0,
            };
            if self.deliver(receiver, &msg, fraction) {
                believed += 1;
                // the original message travels on, never the sharer's prior belief
                queue.extend(
                    self.graph
                        .neighbors(receiver)
                        .iter()
                        .copied()
                        .filter(|&w| !self.processed[w].contains(&msg.uid)),
                );
            }
        }
        (msg, believed)
    }

    /// Advances one tick: every institution broadcasts its scheduled levels in order.
    pub fn step(&mut self, schedule: &MessageSchedule, horizon: u32) -> Result<StepReport> {
        let tick = self.tick + 1;
        let levels = schedule.levels_at(tick, horizon)?;
        self.tick = tick;
        let mut believed = 0;
        let mut messages = Vec::new();
        for i in 0..self.institutions.len() {
            for &level in &levels {
                let (msg, n) = self.broadcast(i, level);
                believed += n;
                messages.push(msg);
            }
        }
        Ok(StepReport {
            tick,
            histogram: self.graph.histogram(),
            believed,
            messages,
        })
    }
}
