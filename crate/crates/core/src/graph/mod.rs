//! Belief-labeled undirected graphs, their generators and the homophily measure.

mod generate;

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::belief::{Belief, Histogram};
use crate::error::{invalid, Error, Result};

pub use generate::{assign_beliefs, gen_ba, gen_er, gen_mag, gen_ws, mag_affinity};

pub type NodeId = usize;

/// Undirected simple graph whose nodes carry a belief.
///
/// Neighbor lists are kept sorted, which makes iteration order (and with it
/// every downstream simulation) a pure function of the edge set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SocialGraph {
    adjacency: Vec<Vec<NodeId>>,
    beliefs: Vec<Belief>,
    edge_count: usize,
}

impl SocialGraph {
    /// Builds a graph, rejecting self-loops, duplicate edges and unknown nodes.
    /// Edges may be given in either orientation.
    pub fn from_edges<I>(beliefs: Vec<Belief>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let n = beliefs.len();
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            for node in [u, v] {
                if node >= n {
                    return Err(Error::NodeOutOfRange { node, nodes: n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if !set.insert((u.min(v), u.max(v))) {
                return Err(Error::DuplicateEdge(u.min(v), u.max(v)));
            }
        }
        Ok(Self::from_edge_set(beliefs, &set))
    }

    pub(crate) fn from_edge_set(beliefs: Vec<Belief>, edges: &BTreeSet<(NodeId, NodeId)>) -> Self {
        let mut adjacency = alloc::vec![Vec::new(); beliefs.len()];
        // (u, v) arrive sorted, so both push orders keep the lists sorted
        for &(u, v) in edges {
            adjacency[u].push(v);
        }
        for &(u, v) in edges {
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        SocialGraph {
            adjacency,
            beliefs,
            edge_count: edges.len(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.beliefs.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.adjacency[u]
    }

    pub fn degree(&self, u: NodeId) -> usize {
        self.adjacency[u].len()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn belief(&self, u: NodeId) -> Belief {
        self.beliefs[u]
    }

    pub fn beliefs(&self) -> &[Belief] {
        &self.beliefs
    }

    pub fn set_belief(&mut self, u: NodeId, b: Belief) {
        self.beliefs[u] = b;
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn histogram(&self) -> Histogram {
        Histogram::from_beliefs(&self.beliefs)
    }

    pub fn nodes_with_belief(&self, b: Belief) -> impl Iterator<Item = NodeId> + '_ {
        self.beliefs
            .iter()
            .enumerate()
            .filter(move |(_, &x)| x == b)
            .map(|(u, _)| u)
    }
}

/// Edge probability between belief levels, used by the MAG generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffinityMatrix([[f64; Belief::LEVELS]; Belief::LEVELS]);

impl AffinityMatrix {
    pub fn new(theta: [[f64; Belief::LEVELS]; Belief::LEVELS]) -> Result<Self> {
        for (i, row) in theta.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                if !(0.0..=1.0).contains(&x) {
                    return Err(invalid("theta", "entries must lie in [0, 1]"));
                }
                if x != theta[j][i] {
                    return Err(invalid("theta", "matrix must be symmetric"));
                }
            }
        }
        Ok(AffinityMatrix(theta))
    }

    pub fn get(&self, a: Belief, b: Belief) -> f64 {
        self.0[a.index()][b.index()]
    }

    pub fn rows(&self) -> &[[f64; Belief::LEVELS]; Belief::LEVELS] {
        &self.0
    }
}

/// Topology and parameters of a random graph, without the seed.
#[derive(Debug, Clone, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum GraphKind {
    ErdosRenyi {
        n: usize,
        rho: f64,
    },
    /// Ring lattice with `k` clockwise links per node, rewired with probability `rho`.
    WattsStrogatz {
        n: usize,
        k: usize,
        rho: f64,
    },
    BarabasiAlbert {
        n: usize,
        m: usize,
    },
    Mag {
        n: usize,
        theta: AffinityMatrix,
    },
}

impl GraphKind {
    pub fn node_count(&self) -> usize {
        match *self {
            Self::ErdosRenyi { n, .. }
            | Self::WattsStrogatz { n, .. }
            | Self::BarabasiAlbert { n, .. }
            | Self::Mag { n, .. } => n,
        }
    }

    /// Short lowercase tag: `er`, `ws`, `ba` or `mag`.
    pub fn tag(&self) -> &'static str {
        match self {
            Self::ErdosRenyi { .. } => "er",
            Self::WattsStrogatz { .. } => "ws",
            Self::BarabasiAlbert { .. } => "ba",
            Self::Mag { .. } => "mag",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.node_count();
        if n == 0 {
            return Err(invalid("n", "must be at least 1"));
        }
        match *self {
            Self::ErdosRenyi { rho, .. } if !(0.0..=1.0).contains(&rho) => {
                Err(invalid("rho", "must lie in [0, 1]"))
            }
            Self::WattsStrogatz { k, rho, .. } => {
                if !(0.0..=1.0).contains(&rho) {
                    Err(invalid("rho", "must lie in [0, 1]"))
                } else if k == 0 {
                    Err(invalid("k", "must be at least 1"))
                } else if n <= 2 * k {
                    Err(invalid("k", "n must exceed 2k"))
                } else {
                    Ok(())
                }
            }
            Self::BarabasiAlbert { m, .. } => {
                if m == 0 {
                    Err(invalid("m", "must be at least 1"))
                } else if n <= m {
                    Err(invalid("m", "n must exceed m"))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    pub fn with_seed(self, seed: u64) -> GraphSpec {
        GraphSpec { kind: self, seed }
    }
}

/// A graph topology plus the seed that pins one realization of it.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphSpec {
    pub kind: GraphKind,
    pub seed: u64,
}

impl GraphSpec {
    pub fn generate(&self) -> Result<SocialGraph> {
        self.kind.validate()?;
        match self.kind {
            GraphKind::ErdosRenyi { n, rho } => gen_er(n, rho, self.seed),
            GraphKind::WattsStrogatz { n, k, rho } => gen_ws(n, k, rho, self.seed),
            GraphKind::BarabasiAlbert { n, m } => gen_ba(n, m, self.seed),
            GraphKind::Mag { n, ref theta } => gen_mag(n, theta, self.seed),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// Mean belief distance across edges: numerator over `2|E|`.
    PerEdge,
    /// Numerator over `2|V|²`.
    Eq11,
}

/// Global average neighbor distance.
///
/// The numerator sums `|b_u - b_v|` over ordered neighbor pairs, so every
/// edge is counted twice.
pub fn homophily(g: &SocialGraph, normalization: Normalization) -> Result<f64> {
    let numerator: u64 = (0..g.node_count())
        .flat_map(|v| g.neighbors(v).iter().map(move |&u| (u, v)))
        .map(|(u, v)| u64::from(g.belief(u).distance(g.belief(v))))
        .sum();
    let denom = match normalization {
        Normalization::PerEdge => {
            if g.edge_count() == 0 {
                return Err(Error::EmptyEdgeSet);
            }
            2.0 * g.edge_count() as f64
        }
        Normalization::Eq11 => {
            let n = g.node_count() as f64;
            2.0 * n * n
        }
    };
    Ok(numerator as f64 / denom)
}

/// Population variance, across agents with at least one neighbor, of each
/// agent's mean belief distance to its neighbors.
pub fn node_distance_variance(g: &SocialGraph) -> Result<f64> {
    let means: Vec<f64> = (0..g.node_count())
        .filter(|&u| g.degree(u) > 0)
        .map(|u| {
            let total: u32 = g
                .neighbors(u)
                .iter()
                .map(|&v| u32::from(g.belief(u).distance(g.belief(v))))
                .sum();
            f64::from(total) / g.degree(u) as f64
        })
        .collect();
    if means.is_empty() {
        return Err(Error::EmptyEdgeSet);
    }
    let count = means.len() as f64;
    let mu = means.iter().sum::<f64>() / count;
    Ok(means.iter().map(|m| (m - mu) * (m - mu)).sum::<f64>() / count)
}
