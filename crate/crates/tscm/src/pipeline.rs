//! End-to-end mining: target the subspace, re-weight, seed, expand, filter.

use std::time::Instant;

use rayon::prelude::*;

use crate::diversity::select_diverse;
use crate::error::{Error, Result};
use crate::expansion::{adjust_community, Community};
use crate::metrics::Subspace;
use crate::netio::{AttributedNetwork, NodeId};
use crate::rng::derive_seed;
use crate::seeding::construct_seed_set;
use crate::targeting::{mine_target_subspace, mine_target_subspace_multi};

const TARGET_STAGE: u64 = 0x1001;
const SEED_STAGE: u64 = 0x1002;

/// Run bookkeeping returned with every mining result.
#[derive(Debug, Clone)]
pub struct RunMeta {
    pub rng_seed: u64,
    pub elapsed_ms: u128,
    pub seed_count: usize,
    pub expanded_count: usize,
    pub kept_count: usize,
    pub notes: Vec<String>,
}

/// Everything a mining run produces: the inferred subspace, the exemplar
/// set behind it, and the surviving communities best first.
#[derive(Debug, Clone)]
pub struct MiningResult {
    pub subspace: Subspace,
    pub exemplars: Vec<NodeId>,
    pub communities: Vec<Community>,
    pub meta: RunMeta,
}

/// Mines target communities from two sample nodes.
pub fn tscm(
    net: &AttributedNetwork,
    s1: NodeId,
    s2: NodeId,
    beta: f64,
    rng_seed: u64,
) -> Result<MiningResult> {
    check_beta(beta)?;
    let started = Instant::now();
    let (subspace, exemplars) =
        mine_target_subspace(net, s1, s2, derive_seed(rng_seed, TARGET_STAGE))?;
    finish(net, subspace, exemplars, beta, rng_seed, started)
}

/// Mines target communities from three or more sample nodes.
pub fn tscm_multi(
    net: &AttributedNetwork,
    samples: &[NodeId],
    beta: f64,
    rng_seed: u64,
) -> Result<MiningResult> {
    check_beta(beta)?;
    let started = Instant::now();
    let (subspace, exemplars) =
        mine_target_subspace_multi(net, samples, derive_seed(rng_seed, TARGET_STAGE))?;
    finish(net, subspace, exemplars, beta, rng_seed, started)
}

fn check_beta(beta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::InvalidBeta(beta));
    }
    Ok(())
}

fn finish(
    net: &AttributedNetwork,
    subspace: Subspace,
    exemplars: Vec<NodeId>,
    beta: f64,
    rng_seed: u64,
    started: Instant,
) -> Result<MiningResult> {
    let (seeds, weighted) = construct_seed_set(net, &subspace, derive_seed(rng_seed, SEED_STAGE))?;
    let mut notes = Vec::new();
    if seeds.is_empty() {
        notes.push("backbone produced no seed communities".to_string());
    }

    // Expansion runs per seed in parallel; collecting into a Vec keeps the
    // seed order, so thread count cannot change the outcome.
    let expanded: Vec<Community> = seeds
        .par_iter()
        .map(|seed| adjust_community(&weighted, seed))
        .collect::<Result<_>>()?;

    let seed_count = seeds.len();
    let expanded_count = expanded.len();
    let communities = select_diverse(expanded, beta);

    log::info!(
        "mined {} communities from {} seeds in {} ms",
        communities.len(),
        seed_count,
        started.elapsed().as_millis()
    );

    Ok(MiningResult {
        subspace,
        exemplars,
        meta: RunMeta {
            rng_seed,
            elapsed_ms: started.elapsed().as_millis(),
            seed_count,
            expanded_count,
            kept_count: communities.len(),
            notes,
        },
        communities,
    })
}
