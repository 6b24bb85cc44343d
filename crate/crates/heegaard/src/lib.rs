//! Domain calculus on combinatorial Heegaard diagrams.
//!
//! Everything is exact: Euler measures and point multiplicities are
//! rationals, domains are integer vectors over regions, and admissibility is
//! decided by exact elimination.

pub mod diagram;
pub mod domain;
pub mod linalg;
pub mod periodic;

pub use diagram::{CurveDiagram, RawDiagram};
pub use domain::{
    chern_pairing, euler_measure, generator_families, generators, maslov_of_periodic, periodic_boundary,
    point_multiplicity, tuple_multiplicity, DomainVector,
};
pub use periodic::{is_weakly_admissible, periodic_domain_basis, Admissibility};

pub type Rational = num_rational::BigRational;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum HeegaardError {
    #[error("malformed diagram json: {0}")]
    Json(String),
    #[error("duplicate {kind} {name:?}")]
    Duplicate { kind: &'static str, name: String },
    #[error("unknown {kind} {name:?}")]
    Unknown { kind: &'static str, name: String },
    #[error("bad fraction {0:?}")]
    BadFraction(String),
    #[error("point {0:?} must lie on exactly two curves")]
    PointCurves(String),
    #[error("point {0:?} joins two curves of one family")]
    NotTransverse(String),
    #[error("point {point:?} has {total} corners, expected 4")]
    CornerSum { point: String, total: u32 },
    #[error("region Euler measures sum to {found}, surface has {expected}")]
    EulerSum { expected: i64, found: String },
    #[error("edges of curve {0:?} do not form a cycle through its points")]
    CurveCycle(String),
    #[error("corners at {0:?} disagree with the edges through it")]
    Quadrants(String),
    #[error("domain is missing region {0:?}")]
    MissingRegion(String),
    #[error("domain is not periodic")]
    NotPeriodic,
    #[error("not a generator: {0}")]
    NotGenerator(String),
    #[error("pairing {0} is not an integer")]
    NotIntegral(String),
    #[error("diagram has no region marked z")]
    NoBasepoint,
    #[error("curve {0:?} is not in the chosen families")]
    NotInFamilies(String),
    #[error("integer overflow")]
    Overflow,
}

/// The least integer `N` with `N > m^2 K^2 + m K`.
pub fn winding_bound(m: u64, k: u64) -> u128 {
    let (m, k) = (m as u128, k as u128);
    m * m * k * k + m * k + 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn winding_examples() {
        assert_eq!(winding_bound(2, 3), 43);
        assert_eq!(winding_bound(0, 7), 1);
        assert_eq!(winding_bound(5, 0), 1);
    }
}
