//! Infers the target subspace from sample nodes.
//!
//! Each sample node proposes one candidate subspace per community found in
//! its neighborhood (the sample joins each group of its neighbors as an
//! exemplar set). With two samples, the pair of candidates that agree most,
//! one from each side, decides the final exemplar set; their union, fed back
//! through the subspace learner, gives the target subspace. More samples
//! first elect two prototypes and rank everyone else against them. Ego
//! analysis skips the agreement step and expands a community per candidate.

use rand::seq::index;

use crate::error::{Error, Result};
use crate::expansion::{adjust_community, Community};
use crate::lpa::detect_nei_community;
use crate::metrics::{subspace_cosine, Subspace};
use crate::netio::{AttributedNetwork, NodeId};
use crate::rng::{derive_seed, rng_from};
use crate::seeding::reweight;
use crate::subspace::compute_subspace;

const NEI_SALT: u64 = 0x11;
const CAND_SALT: u64 = 0x22;
const FINAL_SALT: u64 = 0x33;
const PROTO_SALT: u64 = 0x44;

/// One candidate: the subspace learned from a neighborhood community of
/// `owner` plus the owner itself.
#[derive(Debug, Clone)]
pub struct CandidateSubspace {
    pub owner: NodeId,
    /// Sorted; always contains `owner`.
    pub exemplars: Vec<NodeId>,
    pub subspace: Subspace,
}

/// All candidates of one sample node, ordered by neighborhood community
/// (which are themselves ordered by smallest member).
///
/// Candidate seeds are derived from the owner id, not the sample position,
/// so a node contributes identical candidates regardless of where it
/// appears in a sample list.
pub fn candidate_subspaces(
    net: &AttributedNetwork,
    v: NodeId,
    rng_seed: u64,
) -> Result<Vec<CandidateSubspace>> {
    if v >= net.node_count() {
        return Err(Error::NodeOutOfRange {
            node: v,
            n: net.node_count(),
        });
    }
    if net.degree(v) == 0 {
        return Err(Error::IsolatedSample { node: v });
    }
    let nei_seed = derive_seed(derive_seed(rng_seed, NEI_SALT), v as u64);
    let ncs = detect_nei_community(net, v, nei_seed);

    let mut out = Vec::with_capacity(ncs.len());
    for (i, nc) in ncs.iter().enumerate() {
        let mut exemplars = nc.clone();
        exemplars.push(v);
        exemplars.sort_unstable();
        let cand_seed = derive_seed(
            derive_seed(rng_seed, CAND_SALT),
            ((v as u64) << 24) | i as u64,
        );
        match compute_subspace(net, &exemplars, cand_seed) {
            Ok(subspace) => out.push(CandidateSubspace {
                owner: v,
                exemplars,
                subspace,
            }),
            Err(e) => log::debug!("candidate {i} of node {v} skipped: {e}"),
        }
    }
    if out.is_empty() {
        return Err(Error::NoCandidateSubspace { node: v });
    }
    Ok(out)
}

/// Drops two-node exemplar sets when a sample has anything larger. A
/// singleton neighborhood community contributes exactly one similar pair,
/// so its subspace is dominated by sampling noise, and one lucky agreement
/// between two such candidates can outrank every informative pair.
fn keep_informative(mut cands: Vec<CandidateSubspace>) -> Vec<CandidateSubspace> {
    if cands.iter().any(|c| c.exemplars.len() > 2) {
        cands.retain(|c| c.exemplars.len() > 2);
    }
    cands
}

/// Pair of candidate lists with the highest mutual agreement; ties go to
/// the lexicographically smallest exemplar sets.
fn best_cross_pair<'a>(
    left: &'a [CandidateSubspace],
    right: &'a [CandidateSubspace],
) -> Result<(&'a CandidateSubspace, &'a CandidateSubspace)> {
    let mut best: Option<(f64, &CandidateSubspace, &CandidateSubspace)> = None;
    for a in left {
        for b in right {
            let ss = subspace_cosine(&a.subspace, &b.subspace)?;
            let better = match &best {
                None => true,
                Some((bs, ba, bb)) => {
                    ss > *bs
                        || (ss == *bs
                            && (a.exemplars.as_slice(), b.exemplars.as_slice())
                                < (ba.exemplars.as_slice(), bb.exemplars.as_slice()))
                }
            };
            if better {
                best = Some((ss, a, b));
            }
        }
    }
    let (_, a, b) = best.expect("candidate lists are non-empty");
    Ok((a, b))
}

fn union_sorted(sets: &[&[NodeId]]) -> Vec<NodeId> {
    let mut t: Vec<NodeId> = sets.iter().flat_map(|s| s.iter().copied()).collect();
    t.sort_unstable();
    t.dedup();
    t
}

/// Two-sample mining: returns the target subspace and the exemplar set it
/// was learned from.
pub fn mine_target_subspace(
    net: &AttributedNetwork,
    s1: NodeId,
    s2: NodeId,
    rng_seed: u64,
) -> Result<(Subspace, Vec<NodeId>)> {
    if s1 == s2 {
        return Err(Error::DuplicateSample { node: s1 });
    }
    let c1 = keep_informative(candidate_subspaces(net, s1, rng_seed)?);
    let c2 = keep_informative(candidate_subspaces(net, s2, rng_seed)?);
    let (a, b) = best_cross_pair(&c1, &c2)?;
    let exemplars = union_sorted(&[&a.exemplars, &b.exemplars]);
    let l = compute_subspace(net, &exemplars, derive_seed(rng_seed, FINAL_SALT))?;
    Ok((l, exemplars))
}

/// Multi-sample mining for three or more samples.
///
/// Two prototype samples are drawn by the seeded generator; their best
/// cross pair anchors the target. Every other sample contributes the
/// candidate agreeing most with the two anchors (sum of cosines, ties to
/// the lexicographically smallest exemplar set). All chosen exemplar sets
/// and all samples merge into the final exemplar set.
pub fn mine_target_subspace_multi(
    net: &AttributedNetwork,
    samples: &[NodeId],
    rng_seed: u64,
) -> Result<(Subspace, Vec<NodeId>)> {
    if samples.len() < 3 {
        return Err(Error::TooFewSamples {
            need: 3,
            got: samples.len(),
        });
    }
    let mut uniq = samples.to_vec();
    uniq.sort_unstable();
    if let Some(dup) = uniq.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateSample { node: dup[0] });
    }

    let candidates: Vec<Vec<CandidateSubspace>> = samples
        .iter()
        .map(|&s| candidate_subspaces(net, s, rng_seed).map(keep_informative))
        .collect::<Result<_>>()?;

    let mut proto_rng = rng_from(derive_seed(rng_seed, PROTO_SALT));
    let picked = index::sample(&mut proto_rng, samples.len(), 2);
    let (p1, p2) = (picked.index(0), picked.index(1));
    let (a1, a2) = best_cross_pair(&candidates[p1], &candidates[p2])?;

    let mut chosen: Vec<&[NodeId]> = vec![&a1.exemplars, &a2.exemplars];
    for (i, cands) in candidates.iter().enumerate() {
        if i == p1 || i == p2 {
            continue;
        }
        let mut best: Option<(f64, &CandidateSubspace)> = None;
        for c in cands {
            let score = subspace_cosine(&c.subspace, &a1.subspace)?
                + subspace_cosine(&c.subspace, &a2.subspace)?;
            let better = match &best {
                None => true,
                Some((bs, bc)) => {
                    score > *bs
                        || (score == *bs && c.exemplars.as_slice() < bc.exemplars.as_slice())
                }
            };
            if better {
                best = Some((score, c));
            }
        }
        chosen.push(&best.expect("candidate list is non-empty").1.exemplars);
    }
    chosen.push(samples);

    let exemplars = union_sorted(&chosen);
    let l = compute_subspace(net, &exemplars, derive_seed(rng_seed, FINAL_SALT))?;
    Ok((l, exemplars))
}

/// Expands one community per candidate subspace of `v`, without any
/// redundancy filtering. Useful for exploring which contexts a single node
/// lives in.
pub fn ego_analysis(
    net: &AttributedNetwork,
    v: NodeId,
    rng_seed: u64,
) -> Result<Vec<(Subspace, Community)>> {
    let candidates = candidate_subspaces(net, v, rng_seed)?;
    let mut out = Vec::with_capacity(candidates.len());
    for cand in candidates {
        let w = reweight(net, &cand.subspace)?;
        let community = adjust_community(&w, &cand.exemplars)?;
        out.push((cand.subspace, community));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn toy_bridge_nodes_agree_on_the_middle_group() {
        // Samples "5" and "10" (indices 4 and 9). Node 5's candidates
        // favor music (with the left clique) or work+location (with its
        // own group); node 10's favor work+location or sport. The matching
        // pair is the middle one, so the exemplars are exactly nodes 5-10
        // and the subspace concentrates on work and location.
        let net = fixtures::three_group_toy();
        for seed in [0u64, 7, 42, 1234] {
            let (l, exemplars) = mine_target_subspace(&net, 4, 9, seed).unwrap();
            assert_eq!(exemplars, vec![4, 5, 6, 7, 8, 9], "seed {seed}");
            // Attributes: sport, music, work, location.
            assert_eq!(l.weight(0), 0.0, "seed {seed}");
            assert_eq!(l.weight(1), 0.0, "seed {seed}");
            assert!(l.weight(2) > 0.3 && l.weight(3) > 0.3, "seed {seed}");
        }
    }

    #[test]
    fn candidates_cover_each_neighborhood_community() {
        let net = fixtures::three_group_toy();
        let cands = candidate_subspaces(&net, 4, 42).unwrap();
        assert_eq!(cands.len(), 2);
        assert_eq!(cands[0].exemplars, vec![2, 3, 4]);
        assert_eq!(cands[1].exemplars, vec![4, 5, 6, 7]);
        assert!(cands.iter().all(|c| c.owner == 4));
    }

    #[test]
    fn mined_subspace_is_recomputable_from_the_exemplars() {
        let net = fixtures::three_group_toy();
        let seed = 9;
        let (l, exemplars) = mine_target_subspace(&net, 4, 9, seed).unwrap();
        let again = compute_subspace(&net, &exemplars, derive_seed(seed, FINAL_SALT)).unwrap();
        assert_eq!(l.weights(), again.weights());
    }

    #[test]
    fn sample_validation() {
        let net = fixtures::three_group_toy();
        assert!(matches!(
            mine_target_subspace(&net, 4, 4, 0),
            Err(Error::DuplicateSample { node: 4 })
        ));
        assert!(matches!(
            mine_target_subspace_multi(&net, &[4, 9], 0),
            Err(Error::TooFewSamples { .. })
        ));
        assert!(matches!(
            mine_target_subspace_multi(&net, &[4, 9, 4], 0),
            Err(Error::DuplicateSample { node: 4 })
        ));

        let iso = fixtures::random_network(1, 6, 0, 2);
        assert!(matches!(
            candidate_subspaces(&iso, 0, 0),
            Err(Error::IsolatedSample { node: 0 })
        ));
    }

    #[test]
    fn homogeneous_clique_falls_back_to_uniform_weights() {
        // Every neighborhood community swallows the whole clique, so the
        // exemplar set is the entire node set and no background remains.
        let net = fixtures::homogeneous_clique(8);
        let (l, exemplars) = mine_target_subspace(&net, 0, 5, 3).unwrap();
        assert_eq!(exemplars, (0..8).collect::<Vec<_>>());
        assert_eq!(l.weights(), Subspace::uniform(3).weights());
    }

    #[test]
    fn multi_sample_includes_every_sample_in_the_exemplars() {
        let net = fixtures::three_group_toy();
        // Samples 5, 7, 10 (indices 4, 6, 9), all middle-group nodes.
        for seed in [1u64, 13, 99] {
            let (l, exemplars) = mine_target_subspace_multi(&net, &[4, 6, 9], seed).unwrap();
            for s in [4, 6, 9] {
                assert!(exemplars.contains(&s), "seed {seed}");
            }
            assert!(l.weight(2) > 0.0 && l.weight(3) > 0.0, "seed {seed}");
            assert_eq!(l.weight(1), 0.0, "seed {seed}");
        }
    }

    #[test]
    fn star_center_yields_one_candidate_per_leaf() {
        let net = fixtures::star(5);
        let cands = candidate_subspaces(&net, 0, 11).unwrap();
        assert_eq!(cands.len(), 5);
        for (i, c) in cands.iter().enumerate() {
            assert_eq!(c.exemplars, vec![0, i + 1]);
        }
        let pairs = ego_analysis(&net, 0, 11).unwrap();
        assert_eq!(pairs.len(), 5);
    }

    #[test]
    fn ego_communities_contain_their_exemplar_seeds_context() {
        let net = fixtures::three_group_toy();
        let pairs = ego_analysis(&net, 4, 42).unwrap();
        assert_eq!(pairs.len(), 2);
        for (l, c) in &pairs {
            assert_eq!(l.len(), net.attribute_count());
            assert!(!c.is_empty());
            assert!(c.fitness() > 0.0);
        }
    }

    #[test]
    fn same_seed_same_result() {
        let net = fixtures::three_group_toy();
        let a = mine_target_subspace(&net, 4, 9, 5).unwrap();
        let b = mine_target_subspace(&net, 4, 9, 5).unwrap();
        assert_eq!(a.0.weights(), b.0.weights());
        assert_eq!(a.1, b.1);
    }
}
