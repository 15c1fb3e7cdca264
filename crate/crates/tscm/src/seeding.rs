//! Re-weights the network under a subspace and extracts seed communities.
//!
//! Edge weights are node similarities under the subspace, so weights live in
//! (0, 1]. The backbone keeps edges at or above the midpoint between the
//! maximum and the mean edge weight; label propagation over the backbone
//! yields the seed communities, which cover exactly the backbone nodes.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lpa::lpa;
use crate::metrics::{node_similarity, Subspace};
use crate::netio::{AttributedNetwork, NodeId};

/// Absolute slack for the threshold comparison. Uniform-weight networks
/// must keep every edge, but the mean of m identical weights can land one
/// ulp above the weight itself.
pub const BACKBONE_SLACK: f64 = 1e-12;

/// The input graph with per-edge subspace weights and cached aggregates.
#[derive(Debug, Clone)]
pub struct WeightedAdjacency {
    adjacency: Vec<Vec<(NodeId, f64)>>,
    edges: Vec<(NodeId, NodeId)>,
    weights: Vec<f64>,
    weighted_degree: Vec<f64>,
    max_weight: f64,
    mean_weight: f64,
}

impl WeightedAdjacency {
    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Neighbors of `v` with the weight of the connecting edge, ascending
    /// by neighbor index.
    pub fn neighbors(&self, v: NodeId) -> &[(NodeId, f64)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adjacency[v].len()
    }

    pub fn weighted_degree(&self, v: NodeId) -> f64 {
        self.weighted_degree[v]
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    /// Weights aligned with [`edges`](Self::edges).
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Largest edge weight; 0 on an edgeless network.
    pub fn max_weight(&self) -> f64 {
        self.max_weight
    }

    /// Mean edge weight; 0 on an edgeless network.
    pub fn mean_weight(&self) -> f64 {
        self.mean_weight
    }

    /// Midpoint of max and mean edge weight.
    pub fn backbone_threshold(&self) -> f64 {
        0.5 * (self.max_weight + self.mean_weight)
    }

    /// Whether an edge of weight `w` belongs to the backbone.
    pub fn in_backbone(&self, w: f64) -> bool {
        w + BACKBONE_SLACK >= self.backbone_threshold()
    }
}

/// Scores every edge of `net` under `l`.
pub fn reweight(net: &AttributedNetwork, l: &Subspace) -> Result<WeightedAdjacency> {
    if l.len() != net.attribute_count() {
        return Err(Error::SubspaceLength {
            expected: net.attribute_count(),
            got: l.len(),
        });
    }
    let edges = net.edges().to_vec();
    let weights: Vec<f64> = edges
        .par_iter()
        .map(|&(a, b)| node_similarity(net, l, a, b).expect("length checked"))
        .collect();

    let n = net.node_count();
    let mut adjacency: Vec<Vec<(NodeId, f64)>> = vec![Vec::new(); n];
    let mut weighted_degree = vec![0.0; n];
    for (&(a, b), &w) in edges.iter().zip(&weights) {
        adjacency[a].push((b, w));
        adjacency[b].push((a, w));
        weighted_degree[a] += w;
        weighted_degree[b] += w;
    }

    // Sequential reduction keeps max and mean independent of thread count.
    let max_weight = weights.iter().copied().fold(0.0, f64::max);
    let mean_weight = if weights.is_empty() {
        0.0
    } else {
        weights.iter().sum::<f64>() / weights.len() as f64
    };

    Ok(WeightedAdjacency {
        adjacency,
        edges,
        weights,
        weighted_degree,
        max_weight,
        mean_weight,
    })
}

/// Builds seed communities by running label propagation on the backbone.
///
/// Returns the seeds together with the weighted adjacency so callers can
/// keep using the edge weights. Errors on an edgeless network, where the
/// threshold is undefined.
pub fn construct_seed_set(
    net: &AttributedNetwork,
    l: &Subspace,
    rng_seed: u64,
) -> Result<(Vec<Vec<NodeId>>, WeightedAdjacency)> {
    if net.edge_count() == 0 {
        return Err(Error::EdgelessNetwork);
    }
    let w = reweight(net, l)?;

    let mut backbone_edges = Vec::new();
    let mut backbone_nodes: BTreeSet<NodeId> = BTreeSet::new();
    for (&(a, b), &weight) in w.edges().iter().zip(w.weights()) {
        if w.in_backbone(weight) {
            backbone_edges.push((a, b));
            backbone_nodes.insert(a);
            backbone_nodes.insert(b);
        }
    }
    let nodes: Vec<NodeId> = backbone_nodes.into_iter().collect();
    let seeds = lpa(&nodes, &backbone_edges, rng_seed).communities().to_vec();
    Ok((seeds, w))
}
