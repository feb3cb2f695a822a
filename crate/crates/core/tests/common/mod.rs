#![allow(dead_code)]

use podsim_core::kernel::contagion_prob;
use podsim_core::{Belief, ContagionModel, Institution, NodeId, SocialGraph};
use proptest::prelude::*;

pub fn b(x: u8) -> Belief {
    Belief::new(x).unwrap()
}

/// Random graph on 2..=max_n nodes with arbitrary beliefs and edges.
pub fn small_graph(max_n: usize) -> impl Strategy<Value = SocialGraph> {
    (2..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        (
            proptest::collection::vec(0u8..=6, n),
            proptest::collection::vec(any::<bool>(), pairs),
        )
            .prop_map(move |(levels, mask)| graph_from_mask(&levels, &mask))
    })
}

pub fn graph_from_mask(levels: &[u8], mask: &[bool]) -> SocialGraph {
    let n = levels.len();
    let mut edges = Vec::new();
    let mut i = 0;
    for u in 0..n {
        for v in u + 1..n {
            if mask[i] {
                edges.push((u, v));
            }
            i += 1;
        }
    }
    SocialGraph::from_edges(levels.iter().map(|&x| b(x)).collect(), edges).unwrap()
}

/// Best product of per-agent probabilities over every simple path from a
/// subscriber to `target`, skipping `blocked` nodes. Plain depth-first search.
pub fn brute_best(
    graph: &SocialGraph,
    institution: &Institution,
    target: NodeId,
    msg: Belief,
    model: &ContagionModel,
    blocked: &[NodeId],
) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn walk(
        g: &SocialGraph,
        at: NodeId,
        target: NodeId,
        p: f64,
        seen: &mut Vec<bool>,
        msg: Belief,
        model: &ContagionModel,
        best: &mut f64,
    ) {
        let p = p * contagion_prob(model, g.belief(at), msg, 0.0).get();
        if at == target {
            *best = best.max(p);
            return;
        }
        for &w in g.neighbors(at) {
            if !seen[w] {
                seen[w] = true;
                walk(g, w, target, p, seen, msg, model, best);
                seen[w] = false;
            }
        }
    }
    let mut best = 0.0;
    for &s in &institution.subscribers {
        if blocked.contains(&s) {
            continue;
        }
        let mut seen = vec![false; graph.node_count()];
        for &x in blocked {
            seen[x] = true;
        }
        seen[s] = true;
        walk(graph, s, target, 1.0, &mut seen, msg, model, &mut best);
    }
    best
}
