//! Verification, construction and enumeration engine for the hypercube
//! dismantling process.
//!
//! Starting from the full box `[n]^d`, a move removes a cube with exactly
//! `d` present neighbours. A *solution* is a set of `n^(d-1)` pairwise
//! non-adjacent cubes reachable this way. The reverse process (build-up)
//! can be run greedily, which gives a fast decision procedure
//! ([`engine::is_solution`]).

pub mod bitset;
pub mod constructions;
pub mod engine;
pub mod enumeration;
pub mod error;
pub mod grid;
pub mod kernel;
pub mod latin;
pub mod percolation;
pub mod position;
pub mod symmetry;

pub use bitset::BitSet;
pub use engine::{Direction, MoveStar, Trace};
pub use error::{Error, MoveError, Result};
pub use grid::{CellId, Coord, GridShape};
pub use latin::LatinHypercube;
pub use position::Position;
pub use symmetry::Isometry;

/// Environment variable that unlocks long-running enumerations.
pub const LONG_RUNNING_ENV: &str = "DISMANTLER_LONG_RUNNING";

/// True when `DISMANTLER_LONG_RUNNING=1` is set.
pub fn long_running_enabled() -> bool {
    std::env::var(LONG_RUNNING_ENV).is_ok_and(|v| v == "1")
}
