//! Grid diagrams of knots and the combinatorial Floer package built on them.
//!
//! The crate is organised the way the computation flows:
//! [`grid`] holds diagrams and their classical Legendrian invariants,
//! [`floer`] the fully blocked chain complex and its homology,
//! [`legendrian`] the canonical classes, their vanishing and `tau`,
//! [`concordance`] the obstruction pipeline over pairs of grids.
//! [`alexander`] is an independent Alexander polynomial used as an oracle.

pub mod alexander;
pub mod concordance;
pub mod f2;
pub mod floer;
pub mod grid;
pub mod legendrian;
pub mod state;

pub use concordance::{obstruct, obstruct_stabilized, ObstructionKind, ObstructionVerdict};
pub use floer::{homology, Bigrading, HomologyTable};
pub use grid::{ClassicalInvariants, GridDiagram, GridError, StabilizationKind};
pub use legendrian::{tau, theta, Sign, TauResult, ThetaVerdict};
pub use state::GridState;

/// Largest grid size the packed state encoding supports.
pub const MAX_CAP: usize = 16;

/// Default grid-size cap for computations that enumerate all `n!` states.
pub const DEFAULT_CAP: usize = 10;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum CapacityError {
    #[error("grid size {n} exceeds the capacity {cap}")]
    TooLarge { n: usize, cap: usize },
}

pub(crate) fn check_cap(n: usize, cap: usize) -> Result<(), CapacityError> {
    let cap = cap.min(MAX_CAP);
    if n > cap {
        Err(CapacityError::TooLarge { n, cap })
    } else {
        Ok(())
    }
}
