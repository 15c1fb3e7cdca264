//! Learns attribute weights from a set of exemplar nodes.
//!
//! The idea: an attribute matters when the exemplars agree on it more than
//! random node pairs do. For each attribute we compare the mean squared
//! difference over all exemplar pairs against the same statistic over a
//! random sample of pairs drawn from the rest of the network, keep only
//! attributes where the exemplars are tighter than background, and weight
//! them by how much tighter they are. A smoothing term keeps exact
//! agreement from exploding the ratio; it shrinks with the exemplar count,
//! not the pair count, because the pairs reuse the same few nodes and carry
//! far fewer independent observations than their number suggests.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::metrics::Subspace;
use crate::netio::{AttributedNetwork, NodeId};
use crate::rng::rng_from;

/// Beyond roughly this many candidate pairs we sample by rejection instead
/// of materializing the whole pair list.
const ENUMERATION_LIMIT: usize = 200_000;

/// Computes the subspace induced by `exemplars`.
///
/// Draws `r * |exemplar pairs|` background pairs (fewer when the complement
/// is small; none when it has less than two nodes, which leaves every
/// attribute at background level and falls back to uniform weights). Errors
/// when fewer than two distinct exemplars are given or an index is out of
/// range.
pub fn compute_subspace(
    net: &AttributedNetwork,
    exemplars: &[NodeId],
    rng_seed: u64,
) -> Result<Subspace> {
    let mut ts: Vec<NodeId> = exemplars.to_vec();
    ts.sort_unstable();
    ts.dedup();
    if ts.len() < 2 {
        return Err(Error::TooFewExemplars { got: ts.len() });
    }
    if let Some(&bad) = ts.iter().find(|&&v| v >= net.node_count()) {
        return Err(Error::NodeOutOfRange {
            node: bad,
            n: net.node_count(),
        });
    }

    let ps = exemplar_pairs(&ts);
    let in_ts: HashSet<NodeId> = ts.iter().copied().collect();
    let complement: Vec<NodeId> = (0..net.node_count()).filter(|v| !in_ts.contains(v)).collect();
    let want = net.attribute_count() * ps.len();
    let mut rng = rng_from(rng_seed);
    let pr = sample_background_pairs(&complement, want, &mut rng);
    subspace_from_pairs(net, ts.len(), &ps, &pr)
}

/// All unordered exemplar pairs in lexicographic order.
pub(crate) fn exemplar_pairs(ts: &[NodeId]) -> Vec<(NodeId, NodeId)> {
    let mut pairs = Vec::with_capacity(ts.len() * ts.len().saturating_sub(1) / 2);
    for (i, &a) in ts.iter().enumerate() {
        for &b in &ts[i + 1..] {
            pairs.push((a, b));
        }
    }
    pairs
}

/// Samples up to `want` distinct unordered pairs from `pool` without
/// replacement. Small pools are enumerated and shuffled; large ones are
/// rejection-sampled. Deterministic for a given generator state.
pub(crate) fn sample_background_pairs(
    pool: &[NodeId],
    want: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<(NodeId, NodeId)> {
    let q = pool.len();
    if q < 2 || want == 0 {
        return Vec::new();
    }
    let available = q * (q - 1) / 2;
    let k = want.min(available);

    if available <= ENUMERATION_LIMIT || k * 3 >= available {
        let mut all = Vec::with_capacity(available);
        for (i, &a) in pool.iter().enumerate() {
            for &b in &pool[i + 1..] {
                all.push((a, b));
            }
        }
        let (chosen, _) = all.partial_shuffle(rng, k);
        return chosen.to_vec();
    }

    let mut seen: HashSet<(NodeId, NodeId)> = HashSet::with_capacity(k);
    let mut pairs = Vec::with_capacity(k);
    while pairs.len() < k {
        let a = rng.random_range(0..q);
        let b = rng.random_range(0..q);
        if a == b {
            continue;
        }
        let pair = (pool[a.min(b)], pool[a.max(b)]);
        if seen.insert(pair) {
            pairs.push(pair);
        }
    }
    pairs
}

/// The weight rule applied to fixed pair sets. An attribute scores
/// `h_bg / (h_ex + 1/k)` when the exemplar spread `h_ex` is strictly below
/// the background spread `h_bg`, otherwise zero; `k` is the exemplar node
/// count. Scores are normalized to sum to 1; if every attribute ties or
/// exceeds background, weights fall back to uniform.
pub(crate) fn subspace_from_pairs(
    net: &AttributedNetwork,
    exemplar_count: usize,
    exemplar: &[(NodeId, NodeId)],
    background: &[(NodeId, NodeId)],
) -> Result<Subspace> {
    if exemplar.is_empty() {
        return Err(Error::TooFewExemplars { got: 0 });
    }
    let r = net.attribute_count();
    let smoothing = 1.0 / exemplar_count as f64;
    let mut raw = vec![0.0; r];
    for (t, slot) in raw.iter_mut().enumerate() {
        let h_ex = mean_squared_diff(net, t, exemplar);
        let h_bg = mean_squared_diff(net, t, background);
        if h_ex < h_bg {
            *slot = h_bg / (h_ex + smoothing);
        }
    }
    if raw.iter().all(|&w| w == 0.0) {
        return Ok(Subspace::uniform(r));
    }
    Subspace::from_unnormalized(&raw)
}

fn mean_squared_diff(net: &AttributedNetwork, t: usize, pairs: &[(NodeId, NodeId)]) -> f64 {
    if pairs.is_empty() {
        return 0.0;
    }
    let mut sum = 0.0;
    for &(a, b) in pairs {
        let d = net.attribute_diff(t, a, b);
        sum += d * d;
    }
    sum / pairs.len() as f64
}
