//! Certification of short-range vs. long-range quantum correlations in
//! routed Bell experiments.
//!
//! A routed Bell experiment sends Bob's particle through a switch to either a
//! nearby measurement device (`z = S`) or a remote one (`z = L`). This crate
//! models the resulting correlations, generates them from explicit two-qubit
//! strategies with losses and noise, bounds Bell expressions over four
//! correlation classes via moment-matrix semidefinite relaxations, computes
//! critical detection efficiencies, and machine-checks the analytic
//! certificates behind those bounds.
//!
//! Main entry points:
//! - [`table::CorrelationTable`] and [`expression::BellExpression`] for the
//!   data model,
//! - [`strategy`] for explicit qubit strategies and noise models,
//! - [`bounds`] and [`critical`] for semidefinite upper bounds,
//! - [`seesaw`] for heuristic lower bounds and explicit models,
//! - [`certificates`] for the analytic verification suite.

pub mod error;

pub mod correlators;
pub mod detection;
pub mod expression;
pub mod localbound;
pub mod parallel;
pub mod scenario;
pub mod table;

pub mod qmat;
pub mod strategy;
pub mod povm;

pub mod nc;

pub mod sdp;

pub mod bounds;
pub mod critical;
pub mod seesaw;

pub mod certificates;

pub use error::{Error, Result};
