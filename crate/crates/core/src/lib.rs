//! Separation bodies of convex polytopes and K-cells of Poisson hyperplane
//! processes.
//!
//! The crate has three layers:
//!
//! - [`geometry`] and [`directional`]: vertex polytopes, support functions,
//!   halfspace intersection, and even atomic directional distributions on
//!   the sphere;
//! - [`sepbody`]: the separating-hyperplane measure `m(K,x)`, the bodies
//!   `K[phi,delta]` it defines, and their support functions computed along
//!   two independent routes;
//! - [`poisson`] and [`verify`]: simulation of the K-cell of a stationary
//!   Poisson hyperplane process, and experiment drivers that test the
//!   expectation bounds relating the cell to the separation body.
//!
//! Monte Carlo replication loops run on rayon when the `parallel` feature
//! (default) is enabled; per-replication RNG substreams make results
//! identical to the sequential fallback.

pub mod directional;
pub mod error;
pub mod geometry;
pub mod parallel;
pub mod poisson;
pub mod sepbody;
pub mod stats;
pub mod verify;

pub use error::{Error, Result};
