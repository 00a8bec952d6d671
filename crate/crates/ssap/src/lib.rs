//! Sequential stochastic assignment (SSA) toolkit for online deployment
//! decisions.
//!
//! The core problem: `N` rewards are revealed one at a time, drawn i.i.d.
//! from a known prior, and `R` deployments must be committed online, at most
//! one per stage, to maximize the expected sum of collected rewards. The
//! optimal policy is a table of observation thresholds computed by a
//! recurrence over expected assignment values (the classic sequential
//! assignment result of Derman, Lieberman & Ross, restricted to the `R`
//! thresholds that matter per stage, so the table costs `O(NR)`).
//!
//! The crate provides:
//!
//! - [`distributions`]: the prior contract plus Poisson, Conway-Maxwell-
//!   Poisson, empirical-histogram, and uniform priors.
//! - [`thresholds`]: threshold-table computation and the online executor.
//! - [`policies`]: comparison strategies (offline oracle, partitioned
//!   oracle, partitioned Cayley-Moser, partitioned classic secretary,
//!   random) behind one interface.
//! - [`sim`]: seeded, replayable Monte-Carlo experiments over i.i.d. or
//!   spatial-Poisson worlds.
//! - [`frontier`]: voxel-grid frontier extraction that turns an occupancy
//!   grid and a carrier path into a deployment-reward sequence.
//!
//! The `ssap` binary exposes all of the above as subcommands; see the
//! repository README.

pub mod bound;
pub mod cli;
pub mod distributions;
pub mod frontier;
mod math;
pub mod policies;
pub mod sim;
pub mod stats;
pub mod thresholds;

pub use bound::Bound;
