//! Asynchronous label propagation over arbitrary node subsets.
//!
//! Used both for grouping a node's neighborhood and for cutting the backbone
//! graph into seed communities. Nodes start with their own label; each pass
//! visits them in a freshly shuffled order and adopts the most frequent
//! neighbor label, breaking ties toward the smallest label. A pass with no
//! change ends the run.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::seq::SliceRandom;

use crate::netio::{AttributedNetwork, NodeId};
use crate::rng::rng_from;

pub const MAX_SWEEPS: usize = 100;

/// Result of a propagation run: a community index per node plus the member
/// lists. Communities are sorted by their smallest member, members ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    assignment: BTreeMap<NodeId, usize>,
    communities: Vec<Vec<NodeId>>,
}

impl Partition {
    pub fn communities(&self) -> &[Vec<NodeId>] {
        &self.communities
    }

    pub fn community_of(&self, v: NodeId) -> Option<usize> {
        self.assignment.get(&v).copied()
    }

    pub fn len(&self) -> usize {
        self.communities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.communities.is_empty()
    }
}

/// Propagates labels over the subgraph given by `nodes` and `edges`.
/// Endpoints missing from `nodes` are included; nodes without edges stay
/// singletons. The same seed always yields the same partition.
pub fn lpa(nodes: &[NodeId], edges: &[(NodeId, NodeId)], rng_seed: u64) -> Partition {
    let node_set: BTreeSet<NodeId> = nodes
        .iter()
        .copied()
        .chain(edges.iter().flat_map(|&(a, b)| [a, b]))
        .collect();
    let index: HashMap<NodeId, usize> = node_set.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let globals: Vec<NodeId> = node_set.into_iter().collect();
    let n = globals.len();

    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(a, b) in edges {
        if a == b {
            continue;
        }
        let (ai, bi) = (index[&a], index[&b]);
        adjacency[ai].push(bi);
        adjacency[bi].push(ai);
    }

    let mut labels: Vec<usize> = (0..n).collect();
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = rng_from(rng_seed);
    let mut counts: HashMap<usize, usize> = HashMap::new();

    for _ in 0..MAX_SWEEPS {
        order.shuffle(&mut rng);
        let mut changed = false;
        for &i in &order {
            if adjacency[i].is_empty() {
                continue;
            }
            counts.clear();
            for &j in &adjacency[i] {
                *counts.entry(labels[j]).or_insert(0) += 1;
            }
            // Order-independent even though HashMap iteration is not:
            // highest count wins, then the smallest label.
            let (&best, _) = counts
                .iter()
                .max_by_key(|&(label, count)| (count, std::cmp::Reverse(label)))
                .expect("non-empty neighbor counts");
            if best != labels[i] {
                labels[i] = best;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let mut groups: BTreeMap<usize, Vec<NodeId>> = BTreeMap::new();
    for (i, &v) in globals.iter().enumerate() {
        groups.entry(labels[i]).or_default().push(v);
    }
    let mut communities: Vec<Vec<NodeId>> = groups.into_values().collect();
    for c in &mut communities {
        c.sort_unstable();
    }
    communities.sort_by_key(|c| c[0]);

    let mut assignment = BTreeMap::new();
    for (ci, c) in communities.iter().enumerate() {
        for &v in c {
            assignment.insert(v, ci);
        }
    }
    Partition {
        assignment,
        communities,
    }
}

/// Communities among the neighbors of `v`, with `v` itself excluded from the
/// neighborhood graph. Singleton neighbors count as communities of their
/// own; an isolated `v` has none.
pub fn detect_nei_community(
    net: &AttributedNetwork,
    v: NodeId,
    rng_seed: u64,
) -> Vec<Vec<NodeId>> {
    let nb = net.neighbors(v);
    if nb.is_empty() {
        return Vec::new();
    }
    let nb_set: BTreeSet<NodeId> = nb.iter().copied().collect();
    let mut edges = Vec::new();
    for &u in nb {
        for &w in net.neighbors(u) {
            if w > u && nb_set.contains(&w) {
                edges.push((u, w));
            }
        }
    }
    lpa(nb, &edges, rng_seed).communities().to_vec()
}
