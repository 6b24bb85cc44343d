//! Obstructions to Lagrangian concordance between Legendrian grids.
//!
//! A concordance from `K1` to `K2` forces equal classical invariants, and a
//! nonvanishing class at `K1` cannot map to a vanishing class at `K2`. The
//! direction matters: `obstruct(k1, k2)` only ever uses `theta(k1) != 0` and
//! `theta(k2) = 0`. A `NotObstructed` verdict claims nothing.
//!
//! Vanishing is tested over F2. Over a larger coefficient field the class
//! is `theta (x) 1`, which vanishes exactly when `theta` does, so the F2
//! test is taken to be enough.

use crate::grid::{ClassicalInvariants, GridDiagram, GridError, StabilizationKind};
use crate::legendrian::{theta, LegendrianError, Sign};
use crate::CapacityError;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObstructionKind {
    ObstructedClassical,
    ObstructedTheta,
    NotObstructed,
}

impl fmt::Display for ObstructionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ObstructionKind::ObstructedClassical => "obstructed_classical",
            ObstructionKind::ObstructedTheta => "obstructed_theta",
            ObstructionKind::NotObstructed => "not_obstructed",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    pub n1: usize,
    pub n2: usize,
    pub k1: ClassicalInvariants,
    pub k2: ClassicalInvariants,
    /// `None` when the classical prefilter already decided.
    pub theta1_vanishes: Option<bool>,
    pub theta2_vanishes: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionVerdict {
    pub kind: ObstructionKind,
    pub evidence: Evidence,
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum ConcordanceError {
    #[error("invalid grid: {0}")]
    Grid(#[from] GridError),
    #[error(transparent)]
    Capacity(#[from] CapacityError),
    #[error("convention failure: {0}")]
    Convention(String),
    #[error("{0}")]
    Io(String),
}

impl From<LegendrianError> for ConcordanceError {
    fn from(e: LegendrianError) -> Self {
        match e {
            LegendrianError::Capacity(c) => ConcordanceError::Capacity(c),
            LegendrianError::Convention(s) => ConcordanceError::Convention(s),
        }
    }
}

/// The verdict as a function of the invariants alone.
pub fn decide(
    k1: &ClassicalInvariants,
    k2: &ClassicalInvariants,
    theta1_vanishes: Option<bool>,
    theta2_vanishes: Option<bool>,
) -> ObstructionKind {
    if (k1.tb, k1.r) != (k2.tb, k2.r) {
        ObstructionKind::ObstructedClassical
    } else if theta1_vanishes == Some(false) && theta2_vanishes == Some(true) {
        ObstructionKind::ObstructedTheta
    } else {
        ObstructionKind::NotObstructed
    }
}

pub fn obstruct(k1: &GridDiagram, k2: &GridDiagram, cap: usize) -> Result<ObstructionVerdict, ConcordanceError> {
    crate::check_cap(k1.n().max(k2.n()), cap)?;
    let (c1, c2) = (k1.classical_invariants(), k2.classical_invariants());
    let (t1, t2) = if (c1.tb, c1.r) == (c2.tb, c2.r) {
        (
            Some(theta(k1, Sign::Plus, cap)?.vanishes),
            Some(theta(k2, Sign::Plus, cap)?.vanishes),
        )
    } else {
        (None, None)
    };
    Ok(ObstructionVerdict {
        kind: decide(&c1, &c2, t1, t2),
        evidence: Evidence {
            n1: k1.n(),
            n2: k2.n(),
            k1: c1,
            k2: c2,
            theta1_vanishes: t1,
            theta2_vanishes: t2,
        },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizedVerdict {
    /// Negative stabilizations applied to `k1` and `k2`.
    pub i: usize,
    pub j: usize,
    pub verdict: ObstructionVerdict,
}

/// Runs [`obstruct`] on every pair `(S^-^i k1, S^-^j k2)` with `i, j <= depth`.
pub fn obstruct_stabilized(
    k1: &GridDiagram,
    k2: &GridDiagram,
    depth: usize,
    cap: usize,
) -> Result<Vec<StabilizedVerdict>, ConcordanceError> {
    let chain = |k: &GridDiagram| {
        let mut out = vec![k.clone()];
        for _ in 0..depth {
            let next = out.last().unwrap().stabilize(StabilizationKind::Negative);
            out.push(next);
        }
        out
    };
    let (s1, s2) = (chain(k1), chain(k2));
    let pairs: Vec<(usize, usize)> = (0..=depth).flat_map(|i| (0..=depth).map(move |j| (i, j))).collect();
    pairs
        .par_iter()
        .map(|&(i, j)| {
            Ok(StabilizedVerdict {
                i,
                j,
                verdict: obstruct(&s1[i], &s2[j], cap)?,
            })
        })
        .collect()
}

/// Checks that every classically matching stabilized pair repeats the base
/// theta verdict.
pub fn inherits_base(list: &[StabilizedVerdict]) -> bool {
    let Some(base) = list.iter().find(|v| v.i == 0 && v.j == 0) else {
        return true;
    };
    list.iter()
        .filter(|v| v.verdict.kind != ObstructionKind::ObstructedClassical)
        .all(|v| v.verdict.kind == base.verdict.kind)
}

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    pub index: usize,
    pub k1: String,
    pub k2: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub verdict: Option<ObstructionVerdict>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<RowError>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowError {
    /// One of `parse`, `capacity`, `convention`, `io`.
    pub kind: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchReport {
    pub schema_version: u32,
    pub rows: Vec<ReportRow>,
}

impl BatchReport {
    pub fn has_errors(&self) -> bool {
        self.rows.iter().any(|r| r.error.is_some())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_tsv(&self) -> String {
        let mut s = String::from("index\tk1\tk2\tverdict\ttb1\tr1\ttb2\tr2\ttheta1_vanishes\ttheta2_vanishes\n");
        let opt = |v: Option<bool>| v.map_or("-".to_string(), |b| b.to_string());
        for r in &self.rows {
            match (&r.verdict, &r.error) {
                (Some(v), _) => {
                    let e = &v.evidence;
                    s.push_str(&format!(
                        "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                        r.index,
                        r.k1,
                        r.k2,
                        v.kind,
                        e.k1.tb,
                        e.k1.r,
                        e.k2.tb,
                        e.k2.r,
                        opt(e.theta1_vanishes),
                        opt(e.theta2_vanishes)
                    ));
                }
                (None, Some(err)) => {
                    s.push_str(&format!(
                        "{}\t{}\t{}\terror:{}\t-\t-\t-\t-\t-\t-\n",
                        r.index, r.k1, r.k2, err.kind
                    ));
                }
                (None, None) => unreachable!("rows carry a verdict or an error"),
            }
        }
        s
    }
}

fn row_error(e: &ConcordanceError) -> RowError {
    let kind = match e {
        ConcordanceError::Grid(_) => "parse",
        ConcordanceError::Capacity(_) => "capacity",
        ConcordanceError::Convention(_) => "convention",
        ConcordanceError::Io(_) => "io",
    };
    RowError {
        kind: kind.into(),
        message: e.to_string(),
    }
}

/// Evaluates every pair in parallel; rows keep input order and failures stay
/// local to their row.
pub fn batch_report(pairs: &[(String, String)], cap: usize) -> BatchReport {
    let load = |p: &str| -> Result<GridDiagram, ConcordanceError> {
        let text = std::fs::read_to_string(p).map_err(|e| ConcordanceError::Io(format!("{p}: {e}")))?;
        Ok(GridDiagram::parse(&text)?)
    };
    let rows = pairs
        .par_iter()
        .enumerate()
        .map(|(index, (a, b))| {
            let result = load(a).and_then(|k1| {
                let k2 = load(b)?;
                obstruct(&k1, &k2, cap)
            });
            let (verdict, error) = match result {
                Ok(v) => (Some(v), None),
                Err(e) => (None, Some(row_error(&e))),
            };
            ReportRow {
                index,
                k1: a.clone(),
                k2: b.clone(),
                verdict,
                error,
            }
        })
        .collect();
    BatchReport {
        schema_version: REPORT_SCHEMA_VERSION,
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknot_examples() {
        let u = GridDiagram::unknot();
        let v = obstruct(&u, &u, 9).unwrap();
        assert_eq!(v.kind, ObstructionKind::NotObstructed);
        let s = u.stabilize(StabilizationKind::Negative);
        assert_eq!(obstruct(&u, &s, 9).unwrap().kind, ObstructionKind::ObstructedClassical);
        let list = obstruct_stabilized(&u, &u, 0, 9).unwrap();
        assert_eq!(list.len(), 1);
        assert_eq!(list[0].verdict, v);
    }

    #[test]
    fn empty_batch() {
        let r = batch_report(&[], 9);
        assert!(r.rows.is_empty() && !r.has_errors());
    }
}
