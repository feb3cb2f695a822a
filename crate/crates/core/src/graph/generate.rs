use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use rand::Rng;

use super::{AffinityMatrix, GraphKind, NodeId, SocialGraph};
use crate::belief::Belief;
use crate::error::{invalid, Result};
use crate::rng::{stream, Stream};

/// Draws `n` beliefs i.i.d. uniform over `0..=6`.
pub fn assign_beliefs(n: usize, seed: u64) -> Result<Vec<Belief>> {
    if n == 0 {
        return Err(invalid("n", "must be at least 1"));
    }
    let mut rng = stream(seed, Stream::Beliefs);
    Ok((0..n)
        .map(|_| Belief::new(rng.gen_range(0..Belief::LEVELS as u8)).expect("in range"))
        .collect())
}

/// Erdős–Rényi `G(n, rho)`: every unordered pair is an edge with probability `rho`.
pub fn gen_er(n: usize, rho: f64, seed: u64) -> Result<SocialGraph> {
    GraphKind::ErdosRenyi { n, rho }.validate()?;
    let beliefs = assign_beliefs(n, seed)?;
    let mut rng = stream(seed, Stream::Edges);
    let mut edges = BTreeSet::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(rho) {
                edges.insert((u, v));
            }
        }
    }
    Ok(SocialGraph::from_edge_set(beliefs, &edges))
}

/// Watts–Strogatz small world.
///
/// Every node links to its `k` nearest clockwise neighbors (so `n * k` edges
/// and degree `2k` before rewiring). Each lattice edge `(u, u + j)` is then,
/// with probability `rho`, moved to `(u, w)` for a uniform `w` that is neither
/// `u` nor already adjacent to `u`. Rewiring preserves the edge count.
pub fn gen_ws(n: usize, k: usize, rho: f64, seed: u64) -> Result<SocialGraph> {
    GraphKind::WattsStrogatz { n, k, rho }.validate()?;
    let beliefs = assign_beliefs(n, seed)?;
    let mut rng = stream(seed, Stream::Edges);
    let mut adj: Vec<BTreeSet<NodeId>> = alloc::vec![BTreeSet::new(); n];
    for u in 0..n {
        for j in 1..=k {
            let v = (u + j) % n;
            adj[u].insert(v);
            adj[v].insert(u);
        }
    }
    for j in 1..=k {
        for u in 0..n {
            let v = (u + j) % n;
            if !rng.gen_bool(rho) || !adj[u].contains(&v) {
                continue;
            }
            if adj[u].len() >= n - 1 {
                continue;
            }
            let w = loop {
                let w = rng.gen_range(0..n);
                if w != u && !adj[u].contains(&w) {
                    break w;
                }
            };
            adj[u].remove(&v);
            adj[v].remove(&u);
            adj[u].insert(w);
            adj[w].insert(u);
        }
    }
    let edges = adj
        .iter()
        .enumerate()
        .flat_map(|(u, s)| s.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
        .collect();
    Ok(SocialGraph::from_edge_set(beliefs, &edges))
}

/// Barabási–Albert preferential attachment.
///
/// Starts from a clique on `min(n, 2m + 1)` nodes; each later node attaches
/// `m` edges to distinct existing nodes chosen with probability proportional
/// to degree. The clique holds `m(2m + 1)` edges, so for `n >= 2m + 1` the
/// total is exactly `n * m`.
pub fn gen_ba(n: usize, m: usize, seed: u64) -> Result<SocialGraph> {
    GraphKind::BarabasiAlbert { n, m }.validate()?;
    let beliefs = assign_beliefs(n, seed)?;
    let mut rng = stream(seed, Stream::Edges);
    let core = n.min(2 * m + 1);
    let mut edges = BTreeSet::new();
    // every edge endpoint once, so a uniform pick is degree-proportional
    let mut endpoints: Vec<NodeId> = Vec::with_capacity(2 * n * m);
    for u in 0..core {
        for v in u + 1..core {
            edges.insert((u, v));
            endpoints.push(u);
            endpoints.push(v);
        }
    }
    let mut targets: Vec<NodeId> = Vec::with_capacity(m);
    for v in core..n {
        targets.clear();
        while targets.len() < m {
            let t = endpoints[rng.gen_range(0..endpoints.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            edges.insert((t, v));
            endpoints.push(t);
            endpoints.push(v);
        }
    }
    Ok(SocialGraph::from_edge_set(beliefs, &edges))
}

/// The homophilic affinity matrix: entries fall off with belief distance.
pub fn mag_affinity() -> AffinityMatrix {
    const BY_DISTANCE: [f64; Belief::LEVELS] = [0.167, 0.018, 0.005, 0.002, 0.001, 0.0008, 0.0006];
    let mut theta = [[0.0; Belief::LEVELS]; Belief::LEVELS];
    for (i, row) in theta.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = BY_DISTANCE[i.abs_diff(j)];
        }
    }
    AffinityMatrix(theta)
}

/// Multiplicative attribute graph over the single belief attribute: beliefs
/// are drawn first, then each pair `(u, v)` is linked with probability
/// `theta[b_u][b_v]`.
pub fn gen_mag(n: usize, theta: &AffinityMatrix, seed: u64) -> Result<SocialGraph> {
    let beliefs = assign_beliefs(n, seed)?;
    let mut rng = stream(seed, Stream::Edges);
    let mut edges = BTreeSet::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(theta.get(beliefs[u], beliefs[v])) {
                edges.insert((u, v));
            }
        }
    }
    Ok(SocialGraph::from_edge_set(beliefs, &edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{homophily, Normalization};

    #[test]
    fn beliefs_are_deterministic_and_in_range() {
        let a = assign_beliefs(1000, 9).unwrap();
        assert_eq!(a, assign_beliefs(1000, 9).unwrap());
        assert_ne!(a, assign_beliefs(1000, 10).unwrap());
        assert!(assign_beliefs(0, 1).is_err());
        assert_eq!(assign_beliefs(1, 77).unwrap().len(), 1);
    }

    #[test]
    fn er_extremes() {
        assert_eq!(gen_er(500, 0.0, 1).unwrap().edge_count(), 0);
        assert_eq!(gen_er(500, 1.0, 1).unwrap().edge_count(), 124_750);
    }

    #[test]
    fn ws_lattice_without_rewiring() {
        let g = gen_ws(500, 5, 0.0, 3).unwrap();
        assert_eq!(g.edge_count(), 2500);
        assert!((0..500).all(|u| g.degree(u) == 10));
        assert!(g.has_edge(0, 5) && g.has_edge(0, 495) && !g.has_edge(0, 6));
    }

    #[test]
    fn ws_rejects_dense_lattice() {
        assert!(gen_ws(10, 5, 0.1, 0).is_err());
    }

    #[test]
    fn ba_minimal_is_complete() {
        let g = gen_ba(4, 3, 11).unwrap();
        assert_eq!(g.edge_count(), 6);
        assert!((0..4).all(|u| g.degree(u) == 3));
    }

    #[test]
    fn mag_degenerate_thetas() {
        let zero = AffinityMatrix::new([[0.0; 7]; 7]).unwrap();
        assert_eq!(gen_mag(200, &zero, 5).unwrap().edge_count(), 0);

        let mut diag = [[0.0; 7]; 7];
        for (i, row) in diag.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        let g = gen_mag(200, &AffinityMatrix::new(diag).unwrap(), 5).unwrap();
        assert!(g.edge_count() > 0);
        assert!(g.edges().all(|(u, v)| g.belief(u) == g.belief(v)));
        assert_eq!(homophily(&g, Normalization::PerEdge), Ok(0.0));
    }

    #[test]
    fn printed_affinity_entries() {
        let t = mag_affinity();
        assert_eq!(t.rows()[0][0], 0.167);
        assert_eq!(t.rows()[0][6], 0.0006);
        assert_eq!(t.rows()[3][5], 0.005);
        for i in 0..7 {
            for j in 0..7 {
                assert_eq!(t.rows()[i][j], t.rows()[j][i]);
            }
        }
    }
}
