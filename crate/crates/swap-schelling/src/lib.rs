//! Swap Schelling games on graphs.
//!
//! Agents of `k` types occupy every vertex of a connected graph, one agent
//! per vertex, and an agent's utility is the fraction of its neighbors that
//! share its type. Two agents of different types may exchange positions when
//! the exchange strictly increases both utilities; restricting exchanges to
//! adjacent agents gives the *local* variant of the game.
//!
//! The crate provides:
//!
//! - exact rational utilities, social welfare and the potentials `phi`
//!   (monochromatic edge count) and `psi` (its lexicographic refinement),
//! - graph generators for the topologies the analysis targets (paths,
//!   cycles, 4- and 8-neighbor grids, regular gadget rings, pendant cycles,
//!   double stars),
//! - improving-swap dynamics with deterministic schedulers, convergence and
//!   cycle detection, and a searcher for improving-response cycles,
//! - equilibrium predicates (direct and via the pairwise-sum
//!   characterization) plus constructive equilibrium builders,
//! - brute-force optima and equilibrium enumeration with exact
//!   Price-of-Anarchy reports, and a table of closed-form bounds to audit
//!   them against.
//!
//! Everything that feeds a decision (profitability, equilibrium-ness,
//! welfare comparisons) is computed in exact rational arithmetic; floating
//! point never appears on a decision path.

pub mod analysis;
pub mod dynamics;
pub mod equilibrium;
mod error;
pub mod game;
pub mod graph;
pub mod rational;
pub mod rng;
pub mod suites;

pub use error::{Error, Result};
pub use game::{Coloring, PsiValue, TypeVector};
pub use graph::{Graph, GridKind, GridMeta};
pub use rational::Rational;
