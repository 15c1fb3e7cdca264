//! Subspace weights and the distance and similarity measures built on them.

use crate::error::{Error, Result};
use crate::netio::{AttributedNetwork, NodeId};

pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-12;

/// Per-attribute weights, non-negative and summing to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    weights: Vec<f64>,
}

impl Subspace {
    /// Accepts weights that already satisfy the invariant.
    pub fn try_new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidSubspace("no weights".into()));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidSubspace(format!("bad weight {w}")));
        }
        let sum = kahan_sum(&weights);
        if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(Error::InvalidSubspace(format!(
                "weights sum to {sum}, expected 1"
            )));
        }
        Ok(Subspace { weights })
    }

    /// Scales non-negative raw weights to sum to 1. Scale-invariant: any
    /// positive multiple of `raw` produces the same subspace.
    pub fn from_unnormalized(raw: &[f64]) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::InvalidSubspace("no weights".into()));
        }
        if let Some(w) = raw.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidSubspace(format!("bad weight {w}")));
        }
        let sum = kahan_sum(raw);
        if sum <= 0.0 {
            return Err(Error::InvalidSubspace("all weights are zero".into()));
        }
        let weights: Vec<f64> = raw.iter().map(|w| w / sum).collect();
        Ok(Subspace { weights })
    }

    pub fn uniform(r: usize) -> Self {
        assert!(r > 0, "uniform subspace needs at least one attribute");
        Subspace {
            weights: vec![1.0 / r as f64; r],
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, t: usize) -> f64 {
        self.weights[t]
    }
}

/// Compensated summation; keeps the invariant check meaningful for wide
/// attribute spaces where naive summation drifts past the tolerance.
fn kahan_sum(xs: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for &x in xs {
        let y = x - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}

fn check_len(net: &AttributedNetwork, l: &Subspace) -> Result<()> {
    if l.len() != net.attribute_count() {
        return Err(Error::SubspaceLength {
            expected: net.attribute_count(),
            got: l.len(),
        });
    }
    Ok(())
}

/// Weighted Euclidean distance between two nodes over the attribute diffs.
pub fn weighted_distance(
    net: &AttributedNetwork,
    l: &Subspace,
    v: NodeId,
    u: NodeId,
) -> Result<f64> {
    check_len(net, l)?;
    let mut sum = 0.0;
    for t in 0..l.len() {
        let d = net.attribute_diff(t, v, u);
        sum += l.weight(t) * d * d;
    }
    Ok(sum.sqrt())
}

/// exp(-distance); lands in (0, 1], with 1 meaning indistinguishable under
/// the subspace.
pub fn node_similarity(net: &AttributedNetwork, l: &Subspace, v: NodeId, u: NodeId) -> Result<f64> {
    Ok((-weighted_distance(net, l, v, u)?).exp())
}

/// Cosine similarity between two subspaces, clamped into [0, 1] against
/// round-off. Weights are non-negative so the angle can never pass 90
/// degrees.
pub fn subspace_cosine(a: &Subspace, b: &Subspace) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::SubspaceLength {
            expected: a.len(),
            got: b.len(),
        });
    }
    let mut dot = 0.0;
    let mut na = 0.0;
    let mut nb = 0.0;
    for t in 0..a.len() {
        dot += a.weight(t) * b.weight(t);
        na += a.weight(t) * a.weight(t);
        nb += b.weight(t) * b.weight(t);
    }
    debug_assert!(na > 0.0 && nb > 0.0, "subspace weights sum to 1");
    Ok((dot / (na.sqrt() * nb.sqrt())).clamp(0.0, 1.0))
}
