//! Synthetic attributed networks with planted subspace communities.
//!
//! Structure follows the usual power-law benchmark recipe: node degrees and
//! community sizes are drawn from truncated power laws, each node splits its
//! degree into an internal part (fraction `1 - mu`) spent inside its
//! community and an external part wired across communities, and stubs are
//! matched into edges configuration-model style. On top of that every
//! community gets a focus set of `t` attributes on which its members agree
//! with probability `p`; `b` target communities share one focus set, whose
//! indicator (weight `1/t` on each focus attribute) is the planted target
//! subspace.
//!
//! Generation is fully deterministic for a fixed configuration.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::seq::{index, SliceRandom};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::Subspace;
use crate::netio::{AttributeKind, AttributeValue, AttributedNetwork, NodeId, ValueKind};
use crate::rng::rng_from;

/// Gaussian spread of numerical values around their community center.
pub const NUMERIC_NOISE_SIGMA: f64 = 0.05;
/// Label domain size for categorical attributes.
pub const CATEGORY_DOMAIN: usize = 10;
/// Matching passes before leftover stubs are dropped.
const MATCHING_PASSES: usize = 1000;
/// Attempts to hit the requested total community size exactly.
const SIZE_ATTEMPTS: usize = 1000;

#[derive(Debug, Clone)]
pub struct BenchmarkConfig {
    /// Degree distribution exponent.
    pub tau1: f64,
    /// Community size distribution exponent.
    pub tau2: f64,
    pub n: usize,
    pub d_avg: f64,
    pub d_max: usize,
    pub c_min: usize,
    pub c_max: usize,
    /// Fraction of each node's edges that leave its community.
    pub mu: f64,
    /// Total attribute count.
    pub r: usize,
    /// Focus attributes per community.
    pub t: usize,
    /// Number of target communities sharing the target focus.
    pub b: usize,
    /// Probability that a focus attribute takes the characteristic value.
    pub p: f64,
    pub attr_kind: ValueKind,
    pub rng_seed: u64,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        BenchmarkConfig {
            tau1: 2.0,
            tau2: 1.0,
            n: 5000,
            d_avg: 30.0,
            d_max: 100,
            c_min: 40,
            c_max: 80,
            mu: 0.2,
            r: 20,
            t: 6,
            b: 5,
            p: 0.9,
            attr_kind: ValueKind::Numerical,
            rng_seed: 42,
        }
    }
}

/// Counters for the places where generation had to bend the request.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GenerationStats {
    /// Nodes whose internal degree was clamped to fit their community.
    pub clamped_internal: usize,
    /// Stubs dropped because no valid partner remained.
    pub dropped_internal_stubs: usize,
    pub dropped_external_stubs: usize,
}

#[derive(Debug, Clone)]
pub struct BenchmarkInstance {
    pub network: AttributedNetwork,
    /// Communities as sorted node lists, covering every node exactly once.
    pub ground_truth: Vec<Vec<NodeId>>,
    /// Per-community focus indicators, aligned with `ground_truth`.
    pub planted_subspaces: Vec<Subspace>,
    /// Indices into `ground_truth` of the target communities.
    pub target_ids: Vec<usize>,
    pub stats: GenerationStats,
}

impl BenchmarkInstance {
    /// The subspace shared by all target communities.
    pub fn target_subspace(&self) -> &Subspace {
        &self.planted_subspaces[self.target_ids[0]]
    }

    pub fn target_communities(&self) -> Vec<&Vec<NodeId>> {
        self.target_ids.iter().map(|&i| &self.ground_truth[i]).collect()
    }

    /// Fraction of edges that cross community borders.
    pub fn empirical_mixing(&self) -> f64 {
        let mut community_of = vec![0usize; self.network.node_count()];
        for (ci, c) in self.ground_truth.iter().enumerate() {
            for &v in c {
                community_of[v] = ci;
            }
        }
        let m = self.network.edge_count();
        if m == 0 {
            return 0.0;
        }
        let crossing = self
            .network
            .edges()
            .iter()
            .filter(|&&(a, b)| community_of[a] != community_of[b])
            .count();
        crossing as f64 / m as f64
    }

    pub fn mean_degree(&self) -> f64 {
        2.0 * self.network.edge_count() as f64 / self.network.node_count() as f64
    }

    pub fn write_truth<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for c in &self.ground_truth {
            let ids: Vec<&str> = c.iter().map(|&v| self.network.id(v)).collect();
            writeln!(w, "{}", ids.join(" "))?;
        }
        Ok(())
    }

    pub fn write_subspaces<W: Write>(&self, w: W) -> std::io::Result<()> {
        let sidecar = SubspaceSidecar {
            attribute_count: self.network.attribute_count(),
            target_ids: self.target_ids.clone(),
            subspaces: self
                .planted_subspaces
                .iter()
                .map(|s| s.weights().to_vec())
                .collect(),
        };
        sidecar.write(w)
    }

    /// Writes the four benchmark files under `prefix` (see
    /// [`BenchmarkFiles`]).
    pub fn save(&self, prefix: &Path) -> Result<BenchmarkFiles> {
        let files = BenchmarkFiles::at(prefix);
        self.network.save(&files.edges, &files.attributes)?;
        let f = File::create(&files.truth).map_err(|e| Error::io(&files.truth, e))?;
        self.write_truth(BufWriter::new(f))
            .map_err(|e| Error::io(&files.truth, e))?;
        let f = File::create(&files.subspaces).map_err(|e| Error::io(&files.subspaces, e))?;
        self.write_subspaces(BufWriter::new(f))
            .map_err(|e| Error::io(&files.subspaces, e))?;
        Ok(files)
    }
}

/// File layout of a saved benchmark: `<prefix>.edges`, `<prefix>.attrs`,
/// `<prefix>.truth` and `<prefix>.subspaces.json`.
#[derive(Debug, Clone)]
pub struct BenchmarkFiles {
    pub edges: PathBuf,
    pub attributes: PathBuf,
    pub truth: PathBuf,
    pub subspaces: PathBuf,
}

impl BenchmarkFiles {
    pub fn at(prefix: &Path) -> Self {
        let with = |ext: &str| {
            let mut name = prefix.file_name().unwrap_or_default().to_os_string();
            name.push(ext);
            prefix.with_file_name(name)
        };
        BenchmarkFiles {
            edges: with(".edges"),
            attributes: with(".attrs"),
            truth: with(".truth"),
            subspaces: with(".subspaces.json"),
        }
    }
}

/// Ground-truth subspace sidecar, written next to the generated network.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubspaceSidecar {
    pub attribute_count: usize,
    pub target_ids: Vec<usize>,
    pub subspaces: Vec<Vec<f64>>,
}

impl SubspaceSidecar {
    pub fn write<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut w, self)?;
        writeln!(w)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f = File::open(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_reader(std::io::BufReader::new(f))
            .map_err(|e| Error::parse(path, 0, e.to_string()))
    }
}

pub fn generate(cfg: &BenchmarkConfig) -> Result<BenchmarkInstance> {
    validate(cfg)?;
    let mut rng = rng_from(cfg.rng_seed);

    let sizes = sample_community_sizes(cfg, &mut rng)?;
    if cfg.b > sizes.len() {
        return Err(Error::InfeasibleConfig(format!(
            "{} target communities requested but only {} fit",
            cfg.b,
            sizes.len()
        )));
    }

    let degrees = sample_degrees(cfg, &mut rng)?;
    let mut internal: Vec<usize> = degrees
        .iter()
        .map(|&d| (((1.0 - cfg.mu) * d as f64).round() as usize).min(d))
        .collect();

    let (community_of, clamped_internal) =
        assign_nodes(&sizes, &degrees, &mut internal, &mut rng);
    let mut members: Vec<Vec<NodeId>> = vec![Vec::new(); sizes.len()];
    for (v, &c) in community_of.iter().enumerate() {
        members[c].push(v);
    }

    fix_internal_parity(&members, &mut internal);

    let mut edge_set: HashSet<(NodeId, NodeId)> = HashSet::new();
    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    let mut stats = GenerationStats {
        clamped_internal,
        ..GenerationStats::default()
    };

    for c in &members {
        let mut stubs = Vec::new();
        for &v in c {
            stubs.extend(std::iter::repeat_n(v, internal[v]));
        }
        let dropped = match_stubs(stubs, &mut edge_set, &mut edges, &mut rng, |_, _| true);
        stats.dropped_internal_stubs += dropped;
    }

    let mut external_stubs = Vec::new();
    for (v, (&d, &int)) in degrees.iter().zip(&internal).enumerate() {
        external_stubs.extend(std::iter::repeat_n(v, d - int));
    }
    stats.dropped_external_stubs = match_stubs(
        external_stubs,
        &mut edge_set,
        &mut edges,
        &mut rng,
        |a, b| community_of[a] != community_of[b],
    );

    let target_ids = {
        let mut picked: Vec<usize> = index::sample(&mut rng, sizes.len(), cfg.b).into_vec();
        picked.sort_unstable();
        picked
    };
    let target_set: HashSet<usize> = target_ids.iter().copied().collect();

    let target_focus: Vec<usize> = sorted_sample(&mut rng, cfg.r, cfg.t);
    let focus_sets: Vec<Vec<usize>> = (0..sizes.len())
        .map(|c| {
            if target_set.contains(&c) {
                target_focus.clone()
            } else {
                sorted_sample(&mut rng, cfg.r, cfg.t)
            }
        })
        .collect();

    let characteristic = draw_characteristic_values(cfg, &focus_sets, &mut rng);
    let values = draw_node_values(cfg, &community_of, &focus_sets, &characteristic, &mut rng);

    let kinds: Vec<AttributeKind> = (0..cfg.r)
        .map(|tdx| {
            let name = format!("attr{tdx}");
            match cfg.attr_kind {
                ValueKind::Numerical => AttributeKind::numerical(name),
                ValueKind::Binary => AttributeKind::binary(name),
                ValueKind::Categorical => AttributeKind::categorical(
                    name,
                    (0..CATEGORY_DOMAIN).map(|c| format!("c{c}")).collect(),
                ),
            }
        })
        .collect();
    let ids: Vec<String> = (0..cfg.n).map(|v| v.to_string()).collect();
    let network = AttributedNetwork::new(ids, edges, kinds, values)?;

    let planted_subspaces: Vec<Subspace> = focus_sets
        .iter()
        .map(|focus| {
            let mut raw = vec![0.0; cfg.r];
            for &tdx in focus {
                raw[tdx] = 1.0;
            }
            Subspace::from_unnormalized(&raw).expect("focus set is non-empty")
        })
        .collect();

    for c in &mut members {
        c.sort_unstable();
    }

    log::debug!(
        "generated n={} m={} communities={} stats={:?}",
        network.node_count(),
        network.edge_count(),
        members.len(),
        stats
    );

    Ok(BenchmarkInstance {
        network,
        ground_truth: members,
        planted_subspaces,
        target_ids,
        stats,
    })
}

fn validate(cfg: &BenchmarkConfig) -> Result<()> {
    let fail = |msg: String| Err(Error::InfeasibleConfig(msg));
    if cfg.n == 0 {
        return fail("n must be positive".into());
    }
    if cfg.c_min == 0 || cfg.c_min > cfg.c_max {
        return fail(format!("need 0 < c_min <= c_max, got [{}, {}]", cfg.c_min, cfg.c_max));
    }
    if cfg.c_min > cfg.n {
        return fail(format!("c_min {} exceeds n {}", cfg.c_min, cfg.n));
    }
    if cfg.d_max == 0 || cfg.d_max >= cfg.n {
        return fail(format!("need 0 < d_max < n, got {}", cfg.d_max));
    }
    if !(1.0..cfg.d_max as f64).contains(&cfg.d_avg) {
        return fail(format!(
            "d_avg {} must lie in [1, d_max = {})",
            cfg.d_avg, cfg.d_max
        ));
    }
    if !(0.0..=1.0).contains(&cfg.mu) {
        return fail(format!("mu {} outside [0, 1]", cfg.mu));
    }
    if !(0.0..=1.0).contains(&cfg.p) {
        return fail(format!("p {} outside [0, 1]", cfg.p));
    }
    if cfg.r == 0 || cfg.t == 0 || cfg.t > cfg.r {
        return fail(format!("need 0 < t <= r, got t={} r={}", cfg.t, cfg.r));
    }
    if cfg.b == 0 {
        return fail("b must be positive".into());
    }
    if cfg.tau1 <= 0.0 || cfg.tau2 <= 0.0 {
        return fail("power-law exponents must be positive".into());
    }
    Ok(())
}

/// Inverse-CDF draw from a continuous power law with density proportional
/// to `x^-tau` on `[lo, hi]`.
fn power_law_sample(rng: &mut ChaCha8Rng, tau: f64, lo: f64, hi: f64) -> f64 {
    let u: f64 = rng.random();
    if (tau - 1.0).abs() < 1e-9 {
        lo * (hi / lo).powf(u)
    } else {
        let e = 1.0 - tau;
        (u * (hi.powf(e) - lo.powf(e)) + lo.powf(e)).powf(1.0 / e)
    }
}

/// Mean of the truncated power law; closed forms for the two singular
/// exponents.
fn power_law_mean(tau: f64, lo: f64, hi: f64) -> f64 {
    let z = if (tau - 1.0).abs() < 1e-9 {
        (hi / lo).ln()
    } else {
        (hi.powf(1.0 - tau) - lo.powf(1.0 - tau)) / (1.0 - tau)
    };
    let m1 = if (tau - 2.0).abs() < 1e-9 {
        (hi / lo).ln()
    } else {
        (hi.powf(2.0 - tau) - lo.powf(2.0 - tau)) / (2.0 - tau)
    };
    m1 / z
}

/// Finds the lower cutoff that makes the expected degree hit `d_avg`.
/// The mean is monotone in the cutoff, so bisection suffices.
fn solve_degree_cutoff(cfg: &BenchmarkConfig) -> Result<f64> {
    let hi = cfg.d_max as f64;
    if power_law_mean(cfg.tau1, 1.0, hi) > cfg.d_avg {
        return Err(Error::InfeasibleConfig(format!(
            "d_avg {} is below the minimum mean {:.3} reachable with d_max {}",
            cfg.d_avg,
            power_law_mean(cfg.tau1, 1.0, hi),
            cfg.d_max
        )));
    }
    let mut lo = 1.0;
    let mut up = hi;
    for _ in 0..200 {
        let mid = 0.5 * (lo + up);
        if power_law_mean(cfg.tau1, mid, hi) < cfg.d_avg {
            lo = mid;
        } else {
            up = mid;
        }
    }
    Ok(0.5 * (lo + up))
}

fn sample_degrees(cfg: &BenchmarkConfig, rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
    let cutoff = solve_degree_cutoff(cfg)?;
    let hi = cfg.d_max as f64;
    let mut degrees: Vec<usize> = (0..cfg.n)
        .map(|_| {
            let d = power_law_sample(rng, cfg.tau1, cutoff, hi).round();
            (d as usize).clamp(1, cfg.d_max)
        })
        .collect();
    if degrees.iter().sum::<usize>() % 2 == 1 {
        // One stub short of pairing up; nudge the first node with slack.
        if let Some(d) = degrees.iter_mut().find(|d| **d < cfg.d_max) {
            *d += 1;
        } else {
            degrees[0] -= 1;
        }
    }
    Ok(degrees)
}

/// Draws community sizes until they sum to at least `n`, then shaves the
/// excess off the largest communities. Retries when the excess cannot be
/// absorbed without pushing a community below `c_min`.
fn sample_community_sizes(cfg: &BenchmarkConfig, rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
    let lo = cfg.c_min as f64;
    let hi = (cfg.c_max + 1) as f64;
    for _ in 0..SIZE_ATTEMPTS {
        let mut sizes: Vec<usize> = Vec::new();
        let mut total = 0usize;
        while total < cfg.n {
            let s = (power_law_sample(rng, cfg.tau2, lo, hi) as usize).clamp(cfg.c_min, cfg.c_max);
            sizes.push(s);
            total += s;
        }
        let mut excess = total - cfg.n;
        // Largest first so the trim spreads over communities with slack.
        let mut order: Vec<usize> = (0..sizes.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(sizes[i]));
        for &i in &order {
            let take = excess.min(sizes[i] - cfg.c_min);
            sizes[i] -= take;
            excess -= take;
            if excess == 0 {
                break;
            }
        }
        if excess == 0 {
            return Ok(sizes);
        }
    }
    Err(Error::InfeasibleConfig(format!(
        "cannot partition n = {} into communities of size [{}, {}]",
        cfg.n, cfg.c_min, cfg.c_max
    )))
}

/// Assigns nodes to communities, most demanding first. A node needs a
/// community strictly larger than its internal degree; among those with
/// room the draw is weighted by remaining capacity. When nothing fits the
/// node goes to the roomiest community left and its internal degree is
/// clamped.
fn assign_nodes(
    sizes: &[usize],
    degrees: &[usize],
    internal: &mut [usize],
    rng: &mut ChaCha8Rng,
) -> (Vec<usize>, usize) {
    let n = degrees.len();
    let mut capacity = sizes.to_vec();
    let mut order: Vec<NodeId> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(internal[v]), v));

    let mut community_of = vec![usize::MAX; n];
    let mut clamped = 0usize;
    for &v in &order {
        let need = internal[v];
        let total_fit: usize = sizes
            .iter()
            .zip(&capacity)
            .filter(|&(&s, &cap)| cap > 0 && s > need)
            .map(|(_, &cap)| cap)
            .sum();
        let chosen = if total_fit > 0 {
            let mut x = rng.random_range(0..total_fit);
            let mut pick = usize::MAX;
            for (c, (&s, &cap)) in sizes.iter().zip(&capacity).enumerate() {
                if cap > 0 && s > need {
                    if x < cap {
                        pick = c;
                        break;
                    }
                    x -= cap;
                }
            }
            pick
        } else {
            // Fall back to the roomiest community; capacity > 0 must exist
            // because total capacity equals the node count.
            let pick = (0..sizes.len())
                .filter(|&c| capacity[c] > 0)
                .max_by_key(|&c| (sizes[c], std::cmp::Reverse(c)))
                .expect("capacity left");
            if internal[v] >= sizes[pick] {
                internal[v] = sizes[pick] - 1;
                clamped += 1;
            }
            pick
        };
        capacity[chosen] -= 1;
        community_of[v] = chosen;
    }
    (community_of, clamped)
}

/// Internal stubs must pair up inside each community; an odd total moves
/// one stub of the highest-degree member to the external side.
fn fix_internal_parity(members: &[Vec<NodeId>], internal: &mut [usize]) {
    for c in members {
        let total: usize = c.iter().map(|&v| internal[v]).sum();
        if total % 2 == 0 {
            continue;
        }
        let &v = c
            .iter()
            .filter(|&&v| internal[v] > 0)
            .max_by_key(|&&v| (internal[v], std::cmp::Reverse(v)))
            .expect("odd total implies a positive entry");
        internal[v] -= 1;
    }
}

/// Configuration-model matching: shuffle the stubs, pair neighbors, keep
/// pairs that form a new well-formed edge and requeue the rest. Stubs still
/// unmatched after the pass budget are dropped.
fn match_stubs<F>(
    mut stubs: Vec<NodeId>,
    edge_set: &mut HashSet<(NodeId, NodeId)>,
    edges: &mut Vec<(NodeId, NodeId)>,
    rng: &mut ChaCha8Rng,
    accept: F,
) -> usize
where
    F: Fn(NodeId, NodeId) -> bool,
{
    for _ in 0..MATCHING_PASSES {
        if stubs.len() < 2 {
            break;
        }
        stubs.shuffle(rng);
        let mut requeued = Vec::new();
        let mut chunks = stubs.chunks_exact(2);
        for pair in &mut chunks {
            let (a, b) = (pair[0], pair[1]);
            let key = (a.min(b), a.max(b));
            if a != b && !edge_set.contains(&key) && accept(a, b) {
                edge_set.insert(key);
                edges.push(key);
            } else {
                requeued.push(a);
                requeued.push(b);
            }
        }
        requeued.extend_from_slice(chunks.remainder());
        stubs = requeued;
    }
    stubs.len()
}

fn sorted_sample(rng: &mut ChaCha8Rng, universe: usize, k: usize) -> Vec<usize> {
    let mut picked = index::sample(rng, universe, k).into_vec();
    picked.sort_unstable();
    picked
}

enum Characteristic {
    Numerical(f64),
    Binary,
    Categorical(u32),
}

/// Per (community, focus attribute) characteristic values.
fn draw_characteristic_values(
    cfg: &BenchmarkConfig,
    focus_sets: &[Vec<usize>],
    rng: &mut ChaCha8Rng,
) -> Vec<Vec<Characteristic>> {
    focus_sets
        .iter()
        .map(|focus| {
            focus
                .iter()
                .map(|_| match cfg.attr_kind {
                    ValueKind::Numerical => Characteristic::Numerical(rng.random()),
                    ValueKind::Binary => Characteristic::Binary,
                    ValueKind::Categorical => {
                        Characteristic::Categorical(rng.random_range(0..CATEGORY_DOMAIN as u32))
                    }
                })
                .collect()
        })
        .collect()
}

fn draw_node_values(
    cfg: &BenchmarkConfig,
    community_of: &[usize],
    focus_sets: &[Vec<usize>],
    characteristic: &[Vec<Characteristic>],
    rng: &mut ChaCha8Rng,
) -> Vec<Vec<AttributeValue>> {
    let noise = Normal::new(0.0, NUMERIC_NOISE_SIGMA).expect("valid sigma");
    let uniform_value = |rng: &mut ChaCha8Rng| match cfg.attr_kind {
        ValueKind::Numerical => AttributeValue::Numerical(rng.random()),
        ValueKind::Binary => AttributeValue::Binary(rng.random_bool(0.5)),
        ValueKind::Categorical => {
            AttributeValue::Categorical(rng.random_range(0..CATEGORY_DOMAIN as u32))
        }
    };

    (0..cfg.n)
        .map(|v| {
            let c = community_of[v];
            let focus = &focus_sets[c];
            (0..cfg.r)
                .map(|tdx| {
                    let slot = focus.iter().position(|&f| f == tdx);
                    match slot {
                        Some(i) if rng.random::<f64>() < cfg.p => {
                            match characteristic[c][i] {
                                Characteristic::Numerical(center) => {
                                    let x = (center + noise.sample(rng)).clamp(0.0, 1.0);
                                    AttributeValue::Numerical(x)
                                }
                                Characteristic::Binary => AttributeValue::Binary(true),
                                Characteristic::Categorical(label) => {
                                    AttributeValue::Categorical(label)
                                }
                            }
                        }
                        _ => uniform_value(rng),
                    }
                })
                .collect()
        })
        .collect()
}
