//! How likely a broadcast is to travel from an institution to a given agent.
//!
//! A transmission path starts at the institution, enters the graph at one of
//! its subscribers and then follows graph edges. The institution hop always
//! delivers, so a path's probability is the product of `β(b_v, b_msg)` over
//! its agents only. Path searches are Dijkstra runs in the (max, ×) semiring,
//! which is the same as shortest paths under `-ln β` node weights but keeps
//! the probabilities exact.

mod census;

use alloc::collections::{BTreeSet, BinaryHeap};
use alloc::vec::Vec;
use core::cmp::{Ordering, Reverse};

use crate::belief::Belief;
use crate::error::{invalid, Error, Result};
use crate::graph::{NodeId, SocialGraph};
use crate::kernel::{contagion_prob, ContagionModel, Probability};
use crate::pod::Institution;

pub use census::{census_seed, path_census, path_census_multi, PathCensusRow};

/// Agents a message passes through after leaving the institution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransmissionPath {
    pub nodes: Vec<NodeId>,
    /// Beliefs of `nodes` when the path was taken.
    pub levels: Vec<Belief>,
}

impl TransmissionPath {
    pub fn new(graph: &SocialGraph, nodes: Vec<NodeId>) -> Self {
        let levels = nodes.iter().map(|&v| graph.belief(v)).collect();
        TransmissionPath { nodes, levels }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn target(&self) -> Option<NodeId> {
        self.nodes.last().copied()
    }

    /// First agent subscribes to `institution`, consecutive agents are
    /// adjacent and no agent repeats.
    pub fn is_valid(&self, graph: &SocialGraph, institution: &Institution) -> bool {
        let Some(&first) = self.nodes.first() else {
            return false;
        };
        let distinct: BTreeSet<_> = self.nodes.iter().collect();
        institution.subscribers.contains(&first)
            && distinct.len() == self.nodes.len()
            && self.nodes.windows(2).all(|w| graph.has_edge(w[0], w[1]))
    }
}

fn unsupported(model: &ContagionModel, operation: &'static str) -> Error {
    Error::UnsupportedModel {
        model: model.name(),
        operation,
    }
}

fn require_path_local(model: &ContagionModel, operation: &'static str) -> Result<()> {
    match model {
        ContagionModel::Complex { .. } => Err(unsupported(model, operation)),
        _ => Ok(()),
    }
}

/// Product of each agent's chance to believe a message at `msg_level`.
pub fn path_probability(
    path: &TransmissionPath,
    msg_level: Belief,
    model: &ContagionModel,
) -> Result<Probability> {
    require_path_local(model, "path_probability")?;
    Ok(path.levels.iter().fold(Probability::ONE, |acc, &b| {
        acc * contagion_prob(model, b, msg_level, 0.0)
    }))
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Frontier {
    prob: f64,
    node: NodeId,
}

impl Eq for Frontier {}

impl Ord for Frontier {
    // larger probability first, then smaller node id
    fn cmp(&self, other: &Self) -> Ordering {
        self.prob
            .total_cmp(&other.prob)
            .then_with(|| Reverse(self.node).cmp(&Reverse(other.node)))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Best path probabilities from the institution to every agent.
struct BestPaths {
    prob: Vec<f64>,
    parent: Vec<Option<NodeId>>,
}

impl BestPaths {
    fn search(
        graph: &SocialGraph,
        institution: &Institution,
        msg_level: Belief,
        model: &ContagionModel,
        blocked: &[bool],
    ) -> Self {
        let n = graph.node_count();
        let weight = |v: NodeId| contagion_prob(model, graph.belief(v), msg_level, 0.0).get();
        let mut prob = alloc::vec![0.0; n];
        let mut parent = alloc::vec![None; n];
        let mut done = alloc::vec![false; n];
        let mut heap = BinaryHeap::new();
        for &s in &institution.subscribers {
            let w = weight(s);
            if !blocked[s] && w > prob[s] {
                prob[s] = w;
                heap.push(Frontier { prob: w, node: s });
            }
        }
        while let Some(Frontier { prob: p, node: u }) = heap.pop() {
            if done[u] || p < prob[u] {
                continue;
            }
            done[u] = true;
            for &v in graph.neighbors(u) {
                if blocked[v] || done[v] {
                    continue;
                }
                let cand = p * weight(v);
                if cand > prob[v] {
                    prob[v] = cand;
                    parent[v] = Some(u);
                    heap.push(Frontier {
                        prob: cand,
                        node: v,
                    });
                }
            }
        }
        BestPaths { prob, parent }
    }

    fn path_to(&self, graph: &SocialGraph, target: NodeId) -> Option<TransmissionPath> {
        if self.prob[target] <= 0.0 {
            return None;
        }
        let mut nodes = alloc::vec![target];
        let mut cur = target;
        while let Some(p) = self.parent[cur] {
            nodes.push(p);
            cur = p;
        }
        nodes.reverse();
        Some(TransmissionPath::new(graph, nodes))
    }
}

/// The most probable transmission path ending at `target` (which must
/// believe too), or `None` if every path has probability 0.
pub fn max_probability_path(
    graph: &SocialGraph,
    institution: &Institution,
    target: NodeId,
    msg_level: Belief,
    model: &ContagionModel,
) -> Result<Option<(TransmissionPath, Probability)>> {
    require_path_local(model, "max_probability_path")?;
    check_node(graph, target)?;
    let blocked = alloc::vec![false; graph.node_count()];
    let best = BestPaths::search(graph, institution, msg_level, model, &blocked);
    Ok(best.path_to(graph, target).map(|path| {
        let p = Probability::saturating(best.prob[target]);
        (path, p)
    }))
}

/// Neighbors of `target` whose best transmission path, not passing through
/// `target`, has probability at least `1 - delta`.
pub fn believing_neighbors(
    graph: &SocialGraph,
    institution: &Institution,
    target: NodeId,
    msg_level: Belief,
    model: &ContagionModel,
    delta: f64,
) -> Result<BTreeSet<NodeId>> {
    require_path_local(model, "believing_neighbors")?;
    check_node(graph, target)?;
    if !(0.0..1.0).contains(&delta) {
        return Err(invalid("delta", "must lie in [0, 1)"));
    }
    let mut blocked = alloc::vec![false; graph.node_count()];
    blocked[target] = true;
    let best = BestPaths::search(graph, institution, msg_level, model, &blocked);
    Ok(graph
        .neighbors(target)
        .iter()
        .copied()
        .filter(|&v| best.prob[v] > 0.0 && best.prob[v] >= 1.0 - delta)
        .collect())
}

/// Greedy stand-in for the best set of node-disjoint paths into `target`'s
/// neighborhood: take the most probable path to any neighbor of `target`,
/// remove its agents from the graph, and repeat until nothing is reachable.
///
/// This is a heuristic; it is not guaranteed to maximize the total
/// probability of the returned set.
pub fn disjoint_paths_greedy(
    graph: &SocialGraph,
    institution: &Institution,
    target: NodeId,
    msg_level: Belief,
    model: &ContagionModel,
) -> Result<Vec<(TransmissionPath, Probability)>> {
    require_path_local(model, "disjoint_paths_greedy")?;
    check_node(graph, target)?;
    let mut blocked = alloc::vec![false; graph.node_count()];
    blocked[target] = true;
    let mut out = Vec::new();
    loop {
        let best = BestPaths::search(graph, institution, msg_level, model, &blocked);
        let mut pick: Option<NodeId> = None;
        for &v in graph.neighbors(target) {
            if best.prob[v] > 0.0 && pick.is_none_or(|p| best.prob[v] > best.prob[p]) {
                pick = Some(v);
            }
        }
        let Some(end) = pick else {
            break;
        };
        let path = best.path_to(graph, end).expect("positive probability");
        for &v in &path.nodes {
            blocked[v] = true;
        }
        out.push((path, Probability::saturating(best.prob[end])));
    }
    Ok(out)
}

/// Smallest `tau` for which a belief-bounded route reaches `target`.
///
/// A route goes institution → subscriber → ... → neighbor of `target` →
/// `target`, and its cost is the largest `|b_v - msg_level|` among the agents
/// strictly between the institution and `target`. A subscribed `target`
/// is reached directly at cost 0. Returns `None` when no route exists.
pub fn min_bottleneck(
    graph: &SocialGraph,
    institution: &Institution,
    target: NodeId,
    msg_level: Belief,
) -> Result<Option<u8>> {
    check_node(graph, target)?;
    if institution.subscribers.contains(&target) {
        return Ok(Some(0));
    }
    let n = graph.node_count();
    let cost = |v: NodeId| graph.belief(v).distance(msg_level);
    let mut label = alloc::vec![u8::MAX; n];
    let mut done = alloc::vec![false; n];
    let mut heap = BinaryHeap::new();
    for &s in &institution.subscribers {
        if s != target && cost(s) < label[s] {
            label[s] = cost(s);
            heap.push(Reverse((label[s], s)));
        }
    }
    while let Some(Reverse((c, u))) = heap.pop() {
        if done[u] || c > label[u] {
            continue;
        }
        done[u] = true;
        for &v in graph.neighbors(u) {
            if v == target || done[v] {
                continue;
            }
            let cand = c.max(cost(v));
            if cand < label[v] {
                label[v] = cand;
                heap.push(Reverse((cand, v)));
            }
        }
    }
    Ok(graph
        .neighbors(target)
        .iter()
        .map(|&v| label[v])
        .filter(|&c| c != u8::MAX)
        .min())
}

/// Whether a route into `target` exists whose intermediate agents all hold
/// beliefs within `tau` of `msg_level`.
pub fn tau_path_exists(
    graph: &SocialGraph,
    institution: &Institution,
    target: NodeId,
    tau: u32,
    msg_level: Belief,
) -> Result<bool> {
    Ok(min_bottleneck(graph, institution, target, msg_level)?.is_some_and(|c| u32::from(c) <= tau))
}

fn check_node(graph: &SocialGraph, node: NodeId) -> Result<()> {
    if node < graph.node_count() {
        Ok(())
    } else {
        Err(Error::NodeOutOfRange {
            node,
            nodes: graph.node_count(),
        })
    }
}
