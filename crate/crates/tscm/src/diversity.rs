//! Filters overlapping communities so only the best of each overlap group
//! survives.

use std::cmp::Ordering;

use crate::expansion::Community;
use crate::netio::NodeId;

/// Jaccard overlap of two sorted member lists.
pub fn jaccard(a: &[NodeId], b: &[NodeId]) -> f64 {
    debug_assert!(a.windows(2).all(|w| w[0] < w[1]));
    debug_assert!(b.windows(2).all(|w| w[0] < w[1]));
    let mut i = 0;
    let mut j = 0;
    let mut both = 0usize;
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                both += 1;
                i += 1;
                j += 1;
            }
        }
    }
    let union = a.len() + b.len() - both;
    if union == 0 {
        return 1.0;
    }
    both as f64 / union as f64
}

/// `candidate` is redundant against `kept` when it fits no better and the
/// two overlap at least `beta`.
pub fn is_redundant(candidate: &Community, kept: &Community, beta: f64) -> bool {
    debug_assert!((0.0..=1.0).contains(&beta));
    candidate.fitness() <= kept.fitness() && jaccard(candidate.members(), kept.members()) >= beta
}

/// Greedy filter: walk communities from best to worst and keep each one
/// that is not redundant against anything already kept. The output is
/// ordered best first and every kept pair overlaps below `beta`.
///
/// The walk order makes the fitness condition in [`is_redundant`] hold
/// automatically, so survival depends only on overlap. Ordering ties are
/// broken toward larger communities, then the smallest member index, to
/// keep the result independent of input order.
pub fn select_diverse(communities: Vec<Community>, beta: f64) -> Vec<Community> {
    debug_assert!((0.0..=1.0).contains(&beta));
    let mut ranked = communities;
    ranked.sort_by(|a, b| {
        b.fitness()
            .partial_cmp(&a.fitness())
            .expect("fitness is finite")
            .then(b.len().cmp(&a.len()))
            .then(a.min_member().cmp(&b.min_member()))
    });

    let mut kept: Vec<Community> = Vec::new();
    for c in ranked {
        if kept.iter().all(|k| !is_redundant(&c, k, beta)) {
            kept.push(c);
        }
    }
    kept
}
