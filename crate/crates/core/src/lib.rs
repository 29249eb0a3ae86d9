//! Critical-region biased sampling for sampling-based motion planning.
//!
//! Demonstration plans from a baseline planner are reduced to a per-cell
//! criticality score and per-cell joint-value histograms. Those labels drive
//! an α-mixture sampler used by the Learn-and-Link planners in [`llp`], and
//! [`bench`] compares them against uniform RRT, BiRRT and PRM.

pub mod bench;
pub mod cli;
pub mod criticality;
pub mod dataset;
pub mod error;
pub mod llp;
pub mod model;
pub mod planners;
pub mod tensor;
pub mod workspace;

pub use error::{Error, Result};
