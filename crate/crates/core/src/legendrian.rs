//! Canonical grid classes of a Legendrian grid, their vanishing, and `tau`.
//!
//! `x+` occupies the upper-right corner of every X cell and `x-` the lower-left
//! one. Both are cycles of the fully blocked complex with
//! `M(x+) = 2A(x+) = tb - r + 1` and `M(x-) = 2A(x-) = tb + r + 1`.
//!
//! Vanishing is decided inside the connected component of the boundary graph
//! that contains the canonical state: the boundary map is block diagonal
//! over components, so membership in its image never needs anything else.

use crate::f2::{self, Reducer};
use crate::floer::{self, cancel_pairs, Bigrading, Blocking, Gradings, Rectangles};
use crate::grid::{ClassicalInvariants, GridDiagram};
use crate::state::GridState;
use crate::{check_cap, CapacityError};
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use std::collections::hash_map::Entry;
use std::collections::VecDeque;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum LegendrianError {
    #[error(transparent)]
    Capacity(#[from] CapacityError),
    /// A structural identity failed; this signals a convention bug.
    #[error("convention failure: {0}")]
    Convention(String),
}

pub fn canonical_state(d: &GridDiagram, sign: Sign) -> GridState {
    let n = d.n();
    let mut sigma = vec![0; n];
    for c in 0..n {
        match sign {
            Sign::Plus => sigma[(c + 1) % n] = (d.x()[c] + 1) % n,
            Sign::Minus => sigma[c] = d.x()[c],
        }
    }
    GridState::new(&sigma)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaVerdict {
    pub sign: Sign,
    pub state: GridState,
    pub bigrading: Bigrading,
    pub is_cycle: bool,
    pub vanishes: bool,
    /// Generators in the two degrees of the component that decided it.
    pub component: (usize, usize),
}

pub fn theta(d: &GridDiagram, sign: Sign, cap: usize) -> Result<ThetaVerdict, LegendrianError> {
    check_cap(d.n(), cap)?;
    let state = canonical_state(d, sign);
    let bigrading = Gradings::new(d).of_word(state.word());
    let rects = Rectangles::new(d, Blocking::Full);
    let mut out = Vec::new();
    rects.outgoing(state.word(), |t| out.push(t));
    cancel_pairs(&mut out);
    if !out.is_empty() {
        return Err(LegendrianError::Convention(format!(
            "canonical state {:?} is not a cycle",
            state
        )));
    }
    let (vanishes, component) = in_image(&rects, state.word());
    Ok(ThetaVerdict {
        sign,
        state,
        bigrading,
        is_cycle: true,
        vanishes,
        component,
    })
}

/// Decides whether the cycle `word` is a boundary.
fn in_image(rects: &Rectangles, word: u64) -> (bool, (usize, usize)) {
    let mut rows: FxHashMap<u64, u32> = FxHashMap::default();
    let mut cols: FxHashMap<u64, u32> = FxHashMap::default();
    let mut row_list = vec![word];
    let mut col_list = Vec::new();
    rows.insert(word, 0);
    // alternate: rows discover columns by incoming rectangles, columns
    // discover rows by outgoing ones
    let mut queue: VecDeque<(bool, u64)> = VecDeque::from([(true, word)]);
    while let Some((is_row, w)) = queue.pop_front() {
        if is_row {
            rects.incoming(w, |y| {
                if let Entry::Vacant(e) = cols.entry(y) {
                    e.insert(col_list.len() as u32);
                    col_list.push(y);
                    queue.push_back((false, y));
                }
            });
        } else {
            rects.outgoing(w, |z| {
                if let Entry::Vacant(e) = rows.entry(z) {
                    e.insert(row_list.len() as u32);
                    row_list.push(z);
                    queue.push_back((true, z));
                }
            });
        }
    }
    let mut red = Reducer::new(row_list.len());
    for &y in &col_list {
        let mut col = Vec::new();
        rects.outgoing(y, |z| col.push(rows[&z]));
        f2::normalize(&mut col);
        red.push(col);
    }
    let vanishes = red.reduce(vec![0]).is_empty();
    (vanishes, (row_list.len(), col_list.len()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauResult {
    /// `tau` of the knot type of the Legendrian front.
    pub tau: i32,
    /// `tau` of the grid knot itself, the mirror of the front's knot type.
    pub grid_tau: i32,
    /// Generator of the surviving Maslov-0 class, at its birth level.
    pub generator: GridState,
    /// Sizes of the Maslov 1, 0, -1 slices used.
    pub slices: [usize; 3],
}

/// `tau` by persistence on the Alexander-filtered complex whose rectangles
/// avoid the O markings only.
pub fn tau(d: &GridDiagram, cap: usize) -> Result<TauResult, LegendrianError> {
    check_cap(d.n(), cap)?;
    let n = d.n();
    let mut slices: [Vec<(i32, u64)>; 3] = Default::default();
    Gradings::new(d).for_each(|w, g| {
        if (-1..=1).contains(&g.maslov) {
            slices[(1 - g.maslov) as usize].push((g.two_a, w));
        }
    });
    for s in &mut slices {
        s.sort_unstable();
    }
    let index =
        |s: &[(i32, u64)]| -> FxHashMap<u64, u32> { s.iter().enumerate().map(|(i, &(_, w))| (w, i as u32)).collect() };
    let (idx0, idx_neg) = (index(&slices[1]), index(&slices[2]));
    let rects = Rectangles::new(d, Blocking::OOnly);
    let column = |w: u64, target: &FxHashMap<u64, u32>| {
        let mut col = Vec::new();
        rects.outgoing(w, |t| col.push(target[&t]));
        f2::normalize(&mut col);
        col
    };

    let mut d1 = Reducer::new(slices[1].len());
    for &(_, w) in &slices[0] {
        d1.push(column(w, &idx0));
    }
    let mut d0 = Reducer::new(slices[2].len());
    let mut essential = Vec::new();
    for (i, &(a, w)) in slices[1].iter().enumerate() {
        if d1.is_pivot_row(i as u32) {
            continue;
        }
        if d0.push(column(w, &idx_neg)).is_none() {
            essential.push((a, w));
        }
    }
    if essential.len() != 1 {
        return Err(LegendrianError::Convention(format!(
            "expected one essential Maslov-0 class, found {}",
            essential.len()
        )));
    }
    let (two_a, w) = essential[0];
    if two_a % 2 != 0 {
        return Err(LegendrianError::Convention(
            "odd Alexander grading on a knot grid".into(),
        ));
    }
    let grid_tau = two_a / 2;
    Ok(TauResult {
        tau: -grid_tau,
        grid_tau,
        generator: GridState::from_word(n, w),
        slices: [slices[0].len(), slices[1].len(), slices[2].len()],
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BennequinReport {
    pub sl: i64,
    pub tau: i32,
    /// `2 tau - 1`
    pub bound: i64,
    pub slack: i64,
    pub sharp: bool,
}

pub fn bennequin_checks(d: &GridDiagram, cap: usize) -> Result<BennequinReport, LegendrianError> {
    let sl = d.classical_invariants().sl;
    let t = tau(d, cap)?.tau;
    let bound = 2 * t as i64 - 1;
    if sl > bound {
        return Err(LegendrianError::Convention(format!(
            "self-linking {sl} exceeds 2 tau - 1 = {bound}"
        )));
    }
    Ok(BennequinReport {
        sl,
        tau: t,
        bound,
        slack: bound - sl,
        sharp: sl == bound,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThinVerdict {
    Nonzero,
    Zero,
    NotApplicable,
}

/// For thin knots the class survives exactly when the slice-Bennequin bound
/// is sharp.
pub fn thin_shortcut(d: &GridDiagram, cap: usize) -> Result<ThinVerdict, LegendrianError> {
    if !floer::homology(d, cap)?.is_thin() {
        return Ok(ThinVerdict::NotApplicable);
    }
    let b = bennequin_checks(d, cap)?;
    Ok(if b.sharp {
        ThinVerdict::Nonzero
    } else {
        ThinVerdict::Zero
    })
}

/// The combined per-grid report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LegendrianSummary {
    pub tb: i64,
    pub r: i64,
    pub sl: i64,
    pub theta_plus_vanishes: bool,
    pub tau: i32,
    pub thin: bool,
}

pub fn summarize(d: &GridDiagram, cap: usize) -> Result<LegendrianSummary, LegendrianError> {
    let ClassicalInvariants { tb, r, sl, .. } = d.classical_invariants();
    Ok(LegendrianSummary {
        tb,
        r,
        sl,
        theta_plus_vanishes: theta(d, Sign::Plus, cap)?.vanishes,
        tau: tau(d, cap)?.tau,
        thin: floer::homology(d, cap)?.is_thin(),
    })
}
