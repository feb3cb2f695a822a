use std::collections::VecDeque;

use podsim_core::paths::{
    believing_neighbors, disjoint_paths_greedy, max_probability_path, min_bottleneck,
    path_census_multi, path_probability, tau_path_exists, TransmissionPath,
};
use podsim_core::{Belief, ContagionModel, GraphKind, Institution, NodeId, SocialGraph};
use proptest::prelude::*;

mod common;
use common::{b, brute_best};

fn dcc() -> ContagionModel {
    ContagionModel::dcc()
}

fn institution(g: &SocialGraph, level: Belief) -> Institution {
    Institution::with_subscribers(0, g, level, 0)
}

fn path_of(levels: &[u8]) -> TransmissionPath {
    TransmissionPath {
        nodes: (0..levels.len()).collect(),
        levels: levels.iter().map(|&x| b(x)).collect(),
    }
}

/// Reachability through agents within `tau` of the message, by plain BFS.
fn bfs_tau(g: &SocialGraph, inst: &Institution, target: NodeId, tau: u32, msg: Belief) -> bool {
    if inst.subscribers.contains(&target) {
        return true;
    }
    let ok = |v: NodeId| v != target && u32::from(g.belief(v).distance(msg)) <= tau;
    let mut seen = vec![false; g.node_count()];
    let mut queue = VecDeque::new();
    for &s in &inst.subscribers {
        if ok(s) {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        if g.has_edge(u, target) {
            return true;
        }
        for &w in g.neighbors(u) {
            if !seen[w] && ok(w) {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    false
}

#[test]
fn simple_contagion_collapses_in_two_hops() {
    let p = path_probability(&path_of(&[0, 3]), b(6), &ContagionModel::Simple { p: 0.15 }).unwrap();
    assert!((p.get() - 0.0225).abs() < 1e-15);
}

#[test]
fn near_beliefs_relay_reliably() {
    let p = path_probability(&path_of(&[5, 6, 5]), b(6), &dcc())
        .unwrap()
        .get();
    assert!(p >= 0.982f64.powi(3) - 1e-3, "{p}");
}

#[test]
fn complex_contagion_has_no_path_probability() {
    let c = ContagionModel::Complex { alpha: 0.35 };
    assert!(path_probability(&path_of(&[6]), b(6), &c).is_err());
    let g = SocialGraph::from_edges(vec![b(6), b(5)], [(0, 1)]).unwrap();
    let inst = institution(&g, b(6));
    assert!(max_probability_path(&g, &inst, 1, b(6), &c).is_err());
    assert!(believing_neighbors(&g, &inst, 1, b(6), &c, 0.5).is_err());
    assert!(disjoint_paths_greedy(&g, &inst, 1, b(6), &c).is_err());
}

#[test]
fn five_node_line_believers_match_enumeration() {
    let g = SocialGraph::from_edges(
        vec![b(6), b(6), b(5), b(5), b(4)],
        [(0, 1), (1, 2), (2, 3), (3, 4)],
    )
    .unwrap();
    let inst = institution(&g, b(6));
    assert_eq!(inst.subscribers, [0, 1]);
    for target in 0..5 {
        let got = believing_neighbors(&g, &inst, target, b(6), &dcc(), 0.1).unwrap();
        let want: Vec<NodeId> = g
            .neighbors(target)
            .iter()
            .copied()
            .filter(|&v| {
                let p = brute_best(&g, &inst, v, b(6), &dcc(), &[target]);
                p >= 0.9
            })
            .collect();
        assert_eq!(got.into_iter().collect::<Vec<_>>(), want, "target {target}");
    }
    let far = believing_neighbors(&g, &inst, 4, b(6), &dcc(), 0.1).unwrap();
    assert_eq!(far.into_iter().collect::<Vec<_>>(), [3]);
}

#[test]
fn prefers_two_near_hops_over_a_risky_one() {
    // route 0-2: 0.5 * 0.982, route 1-3: 0.982 * 0.982, both into target 4
    let g = SocialGraph::from_edges(
        vec![b(4), b(5), b(5), b(5), b(6)],
        [(0, 2), (2, 4), (1, 3), (3, 4)],
    )
    .unwrap();
    let inst = Institution {
        id: 0,
        belief: b(6),
        subscribers: vec![0, 1],
    };
    let (path, p) = max_probability_path(&g, &inst, 4, b(6), &dcc())
        .unwrap()
        .unwrap();
    assert_eq!(path.nodes, [1, 3, 4]);
    assert_eq!(p, path_probability(&path, b(6), &dcc()).unwrap());
}

#[test]
fn two_disjoint_routes_are_both_found() {
    // 0-2-4-7 (about 0.964) and 1-3-5-7 (about 0.491) are node-disjoint; 6 is
    // a low-belief detour between them
    let beliefs = [6, 6, 5, 5, 5, 4, 0, 3].map(b).to_vec();
    let edges = [
        (0, 2),
        (2, 4),
        (4, 7),
        (1, 3),
        (3, 5),
        (5, 7),
        (4, 6),
        (6, 5),
    ];
    let g = SocialGraph::from_edges(beliefs, edges).unwrap();
    let inst = institution(&g, b(6));
    let paths = disjoint_paths_greedy(&g, &inst, 7, b(6), &dcc()).unwrap();
    let routes: Vec<Vec<NodeId>> = paths.iter().map(|(p, _)| p.nodes.clone()).collect();
    assert_eq!(routes, [vec![0, 2, 4], vec![1, 3, 5]]);
    for (path, p) in &paths {
        let end = path.target().unwrap();
        let brute = brute_best(&g, &inst, end, b(6), &dcc(), &[7]);
        assert!(path.is_valid(&g, &inst));
        assert!(p.get() <= brute + 1e-15);
    }
    let (_, first) = &paths[0];
    assert!((first.get() - brute_best(&g, &inst, 4, b(6), &dcc(), &[7])).abs() < 1e-15);
}

#[test]
fn single_neighbor_caps_disjoint_paths() {
    let g =
        SocialGraph::from_edges(vec![b(6), b(6), b(6), b(2)], [(0, 2), (1, 2), (2, 3)]).unwrap();
    let inst = institution(&g, b(6));
    assert_eq!(
        disjoint_paths_greedy(&g, &inst, 3, b(6), &dcc())
            .unwrap()
            .len(),
        1
    );
}

#[test]
fn far_beliefs_block_tau_paths() {
    let g =
        SocialGraph::from_edges(vec![b(6), b(3), b(2), b(0)], [(0, 1), (1, 2), (2, 3)]).unwrap();
    let inst = institution(&g, b(6));
    assert!(tau_path_exists(&g, &inst, 1, 1, b(6)).unwrap());
    assert!(!tau_path_exists(&g, &inst, 3, 2, b(6)).unwrap());
    assert_eq!(min_bottleneck(&g, &inst, 3, b(6)).unwrap(), Some(4));
}

#[test]
fn census_is_monotone_in_tau() {
    let rows = path_census_multi(
        &GraphKind::BarabasiAlbert { n: 150, m: 2 },
        &[1, 2],
        b(6),
        30,
        11,
    )
    .unwrap();
    for level in 0..7 {
        assert!(rows[0].proportions[level] <= rows[1].proportions[level]);
    }
    assert_eq!(rows[0].proportions[6], 1.0);
}

fn path_model() -> impl Strategy<Value = ContagionModel> {
    prop_oneof![
        Just(ContagionModel::dcc()),
        (0.01f64..0.99).prop_map(|p| ContagionModel::Simple { p }),
        (0u32..=6).prop_map(|gamma| ContagionModel::CognitiveThreshold { gamma }),
        (0.1f64..3.0, 0.0f64..3.0)
            .prop_map(|(gamma, alpha)| ContagionModel::CognitiveLinear { gamma, alpha }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn max_path_matches_enumeration(g in common::small_graph(8), model in path_model(), msg in 0u8..=6, pick in any::<usize>()) {
        let inst = institution(&g, b(msg));
        let target = pick % g.node_count();
        let brute = brute_best(&g, &inst, target, b(msg), &model, &[]);
        match max_probability_path(&g, &inst, target, b(msg), &model).unwrap() {
            None => prop_assert_eq!(brute, 0.0),
            Some((path, p)) => {
                prop_assert!(path.is_valid(&g, &inst));
                prop_assert_eq!(path.target(), Some(target));
                prop_assert!((p.get() - brute).abs() <= 1e-12 * brute);
                prop_assert_eq!(p, path_probability(&path, b(msg), &model).unwrap());
            }
        }
    }

    #[test]
    fn tau_paths_match_bfs(g in common::small_graph(9), msg in 0u8..=6, pick in any::<usize>()) {
        let inst = institution(&g, b(msg));
        let target = pick % g.node_count();
        let mut before = false;
        for tau in 0..=6 {
            let got = tau_path_exists(&g, &inst, target, tau, b(msg)).unwrap();
            prop_assert_eq!(got, bfs_tau(&g, &inst, target, tau, b(msg)));
            prop_assert!(!before || got);
            before = got;
        }
    }

    #[test]
    fn path_probability_is_multiplicative(
        a in proptest::collection::vec(0u8..=6, 1..6),
        c in proptest::collection::vec(0u8..=6, 1..6),
        model in path_model(),
        msg in 0u8..=6,
    ) {
        let joined: Vec<u8> = a.iter().chain(&c).copied().collect();
        let pa = path_probability(&path_of(&a), b(msg), &model).unwrap().get();
        let pc = path_probability(&path_of(&c), b(msg), &model).unwrap().get();
        let pj = path_probability(&path_of(&joined), b(msg), &model).unwrap().get();
        prop_assert!((pj - pa * pc).abs() <= 1e-12 * pj.max(f64::MIN_POSITIVE));
    }

    #[test]
    fn one_distant_agent_sinks_a_dcc_path(levels in proptest::collection::vec(0u8..=6, 1..8), far in 0u8..=3, at in any::<usize>()) {
        let mut levels = levels;
        let i = at % levels.len();
        levels[i] = far;
        let p = path_probability(&path_of(&levels), b(6), &dcc()).unwrap().get();
        prop_assert!(p <= 0.018);
    }

    #[test]
    fn greedy_paths_are_disjoint(g in common::small_graph(9), msg in 0u8..=6, pick in any::<usize>()) {
        let inst = institution(&g, b(msg));
        let target = pick % g.node_count();
        let paths = disjoint_paths_greedy(&g, &inst, target, b(msg), &dcc()).unwrap();
        let mut used = vec![false; g.node_count()];
        for (path, p) in &paths {
            prop_assert!(path.is_valid(&g, &inst));
            prop_assert!(p.get() > 0.0);
            prop_assert!(g.has_edge(path.target().unwrap(), target));
            for &v in &path.nodes {
                prop_assert!(v != target && !used[v]);
                used[v] = true;
            }
        }
    }

    #[test]
    fn loose_delta_admits_every_reachable_neighbor(g in common::small_graph(8), pick in any::<usize>()) {
        let inst = institution(&g, b(6));
        let target = pick % g.node_count();
        let model = ContagionModel::Simple { p: 0.5 };
        let got = believing_neighbors(&g, &inst, target, b(6), &model, 1.0 - 1e-9).unwrap();
        for &v in g.neighbors(target) {
            let reachable = brute_best(&g, &inst, v, b(6), &model, &[target]) > 0.0;
            prop_assert_eq!(got.contains(&v), reachable);
        }
    }
}
