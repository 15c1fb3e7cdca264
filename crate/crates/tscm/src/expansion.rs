//! Greedy community refinement under the weighted graph.
//!
//! Community fitness is internal weight over total incident weight: with
//! `invol` counting both directions of every internal edge and `vol` the sum
//! of weighted degrees, fitness is `invol / vol`. An isolated full component
//! scores 1; a set leaking most of its weight scores near 0.
//!
//! `adjust_community` hill-climbs from a seed. Each step scores adding any
//! outside node adjacent to the community and removing any member, takes
//! the best strictly improving action, and stops when none remains. Ties
//! prefer additions over removals and then the smallest node index. Deltas
//! come from O(degree) bookkeeping, not from rescoring the whole set.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::netio::NodeId;
use crate::seeding::WeightedAdjacency;

/// Hard stop for pathological inputs: no sensible run needs more steps than
/// ten times the node count.
pub const ACTION_CAP_FACTOR: usize = 10;

/// A node set with its cached fitness terms. `invol` and `vol` always match
/// a from-scratch recomputation to within accumulated round-off.
#[derive(Debug, Clone, PartialEq)]
pub struct Community {
    members: Vec<NodeId>,
    invol: f64,
    vol: f64,
}

impl Community {
    /// Members in ascending order.
    pub fn members(&self) -> &[NodeId] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    /// Twice the total internal edge weight.
    pub fn invol(&self) -> f64 {
        self.invol
    }

    /// Total weighted degree of the members.
    pub fn vol(&self) -> f64 {
        self.vol
    }

    pub fn fitness(&self) -> f64 {
        self.invol / self.vol
    }

    pub fn min_member(&self) -> NodeId {
        self.members[0]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    Add(NodeId),
    Remove(NodeId),
}

/// One accepted hill-climbing step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdjustStep {
    pub action: Action,
    pub delta: f64,
    pub fitness: f64,
}

/// From-scratch fitness of a node set; the reference every incremental path
/// is tested against.
pub fn subspace_fitness(w: &WeightedAdjacency, members: &[NodeId]) -> Result<f64> {
    Ok(community_from_members(w, members)?.fitness())
}

/// Builds a community with caches computed from scratch.
pub fn community_from_members(w: &WeightedAdjacency, members: &[NodeId]) -> Result<Community> {
    let mut sorted = members.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.is_empty() {
        return Err(Error::EmptyCommunity);
    }
    if let Some(&bad) = sorted.iter().find(|&&v| v >= w.node_count()) {
        return Err(Error::NodeOutOfRange {
            node: bad,
            n: w.node_count(),
        });
    }
    let set: HashSet<NodeId> = sorted.iter().copied().collect();
    let mut invol = 0.0;
    let mut vol = 0.0;
    for &v in &sorted {
        vol += w.weighted_degree(v);
        for &(u, weight) in w.neighbors(v) {
            if set.contains(&u) {
                invol += weight;
            }
        }
    }
    if vol <= 0.0 {
        return Err(Error::UndefinedFitness);
    }
    Ok(Community {
        members: sorted,
        invol,
        vol,
    })
}

/// Fitness change from applying one action to `c`, without mutating it.
///
/// Additions require an edge into the community; removals may not empty it
/// or leave it with zero volume.
pub fn delta_fitness(w: &WeightedAdjacency, c: &Community, action: Action) -> Result<f64> {
    let fit = c.fitness();
    match action {
        Action::Add(v) => {
            if v >= w.node_count() {
                return Err(Error::NodeOutOfRange {
                    node: v,
                    n: w.node_count(),
                });
            }
            if c.contains(v) {
                return Err(Error::InvalidAction(format!("node {v} is already a member")));
            }
            let link = link_weight(w, c, v);
            if link.1 == 0 {
                return Err(Error::InvalidAction(format!(
                    "node {v} has no edge into the community"
                )));
            }
            Ok((c.invol() + 2.0 * link.0) / (c.vol() + w.weighted_degree(v)) - fit)
        }
        Action::Remove(v) => {
            if !c.contains(v) {
                return Err(Error::InvalidAction(format!("node {v} is not a member")));
            }
            if c.len() == 1 {
                return Err(Error::InvalidAction(
                    "removal would empty the community".into(),
                ));
            }
            let new_vol = c.vol() - w.weighted_degree(v);
            if new_vol <= 0.0 {
                return Err(Error::UndefinedFitness);
            }
            let link = link_weight(w, c, v);
            Ok((c.invol() - 2.0 * link.0) / new_vol - fit)
        }
    }
}

fn link_weight(w: &WeightedAdjacency, c: &Community, v: NodeId) -> (f64, usize) {
    let mut total = 0.0;
    let mut count = 0;
    for &(u, weight) in w.neighbors(v) {
        if c.contains(u) {
            total += weight;
            count += 1;
        }
    }
    (total, count)
}

/// Hill-climbs from `seed` and returns the refined community.
pub fn adjust_community(w: &WeightedAdjacency, seed: &[NodeId]) -> Result<Community> {
    Ok(adjust_community_traced(w, seed)?.0)
}

/// Like [`adjust_community`] but also reports every accepted step.
pub fn adjust_community_traced(
    w: &WeightedAdjacency,
    seed: &[NodeId],
) -> Result<(Community, Vec<AdjustStep>)> {
    let mut state = State::init(w, seed)?;
    let cap = ACTION_CAP_FACTOR * w.node_count();
    let mut trace = Vec::new();

    loop {
        let Some((delta, action)) = state.best_action() else {
            break;
        };
        if trace.len() >= cap {
            return Err(Error::ActionCapExceeded { cap });
        }
        state.apply(action);
        trace.push(AdjustStep {
            action,
            delta,
            fitness: state.fitness(),
        });
    }
    Ok((state.into_community(), trace))
}

/// Incremental bookkeeping for the climb. For every node touching the
/// community, `link[v]` holds (weight into members, member neighbor count);
/// a member's own entry excludes itself. Updating after an add or remove
/// costs one pass over the moved node's neighbors.
struct State<'a> {
    w: &'a WeightedAdjacency,
    members: HashSet<NodeId>,
    link: HashMap<NodeId, (f64, usize)>,
    invol: f64,
    vol: f64,
}

impl<'a> State<'a> {
    fn init(w: &'a WeightedAdjacency, seed: &[NodeId]) -> Result<Self> {
        let mut sorted = seed.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.is_empty() {
            return Err(Error::EmptyCommunity);
        }
        if let Some(&bad) = sorted.iter().find(|&&v| v >= w.node_count()) {
            return Err(Error::NodeOutOfRange {
                node: bad,
                n: w.node_count(),
            });
        }
        let members: HashSet<NodeId> = sorted.iter().copied().collect();
        let mut link: HashMap<NodeId, (f64, usize)> = HashMap::new();
        let mut vol = 0.0;
        for &v in &sorted {
            vol += w.weighted_degree(v);
            for &(u, weight) in w.neighbors(v) {
                let e = link.entry(u).or_insert((0.0, 0));
                e.0 += weight;
                e.1 += 1;
            }
        }
        let invol: f64 = sorted
            .iter()
            .map(|v| link.get(v).map_or(0.0, |e| e.0))
            .sum();
        if vol <= 0.0 {
            return Err(Error::UndefinedFitness);
        }
        Ok(State {
            w,
            members,
            link,
            invol,
            vol,
        })
    }

    fn fitness(&self) -> f64 {
        self.invol / self.vol
    }

    /// Best strictly improving action, or None. Candidates are scanned in a
    /// canonical order (additions ascending, then removals ascending) and a
    /// later candidate must beat the incumbent strictly, which implements
    /// the add-first smallest-index tie rule.
    fn best_action(&self) -> Option<(f64, Action)> {
        let fit = self.fitness();
        let mut best: Option<(f64, Action)> = None;
        let mut consider = |delta: f64, action: Action| {
            if delta > 0.0 && best.as_ref().is_none_or(|&(d, _)| delta > d) {
                best = Some((delta, action));
            }
        };

        let mut additions: Vec<NodeId> = self
            .link
            .iter()
            .filter(|(v, e)| e.1 > 0 && !self.members.contains(v))
            .map(|(&v, _)| v)
            .collect();
        additions.sort_unstable();
        for v in additions {
            let (lw, _) = self.link[&v];
            let delta = (self.invol + 2.0 * lw) / (self.vol + self.w.weighted_degree(v)) - fit;
            consider(delta, Action::Add(v));
        }

        if self.members.len() > 1 {
            let mut removals: Vec<NodeId> = self.members.iter().copied().collect();
            removals.sort_unstable();
            for v in removals {
                let new_vol = self.vol - self.w.weighted_degree(v);
                if new_vol <= 0.0 {
                    continue;
                }
                let lw = self.link.get(&v).map_or(0.0, |e| e.0);
                let delta = (self.invol - 2.0 * lw) / new_vol - fit;
                consider(delta, Action::Remove(v));
            }
        }
        best
    }

    fn apply(&mut self, action: Action) {
        match action {
            Action::Add(v) => {
                let lw = self.link.get(&v).map_or(0.0, |e| e.0);
                self.invol += 2.0 * lw;
                self.vol += self.w.weighted_degree(v);
                self.members.insert(v);
                for &(u, weight) in self.w.neighbors(v) {
                    let e = self.link.entry(u).or_insert((0.0, 0));
                    e.0 += weight;
                    e.1 += 1;
                }
            }
            Action::Remove(v) => {
                let lw = self.link.get(&v).map_or(0.0, |e| e.0);
                self.invol -= 2.0 * lw;
                self.vol -= self.w.weighted_degree(v);
                self.members.remove(&v);
                for &(u, weight) in self.w.neighbors(v) {
                    if let Some(e) = self.link.get_mut(&u) {
                        e.0 -= weight;
                        e.1 -= 1;
                        if e.1 == 0 {
                            self.link.remove(&u);
                        }
                    }
                }
            }
        }
    }

    fn into_community(self) -> Community {
        let mut members: Vec<NodeId> = self.members.into_iter().collect();
        members.sort_unstable();
        Community {
            members,
            invol: self.invol,
            vol: self.vol,
        }
    }
}
