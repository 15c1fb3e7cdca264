//! Targeted subspace community mining for node-attributed networks.
//!
//! Given a network whose nodes carry numerical, binary and categorical
//! attributes, plus a couple of sample nodes from a community of interest,
//! this crate infers which attributes that community cares about (its
//! subspace), re-weights the network accordingly, and extracts all
//! non-redundant communities that are dense under those weights. A
//! synthetic benchmark generator and scoring utilities support end-to-end
//! evaluation against planted ground truth.
//!
//! The typical entry points are [`pipeline::tscm`] for a full run,
//! [`targeting::ego_analysis`] for exploring one node's contexts,
//! [`benchgen::generate`] for synthetic instances and [`eval::report`]
//! for scoring.

pub mod benchgen;
pub mod diversity;
mod error;
pub mod eval;
pub mod expansion;
pub mod lpa;
pub mod metrics;
pub mod netio;
pub mod pipeline;
mod rng;
pub mod seeding;
pub mod subspace;
pub mod targeting;

#[cfg(test)]
pub(crate) mod fixtures;

pub use error::{Error, Result};
