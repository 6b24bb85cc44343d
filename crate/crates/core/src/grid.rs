//! Grid diagrams, their validation, grid moves and the classical invariants of
//! the associated Legendrian front.
//!
//! Conventions, fixed once for the whole crate:
//!
//! * `o[c]` and `x[c]` are the rows of the O and X markings in column `c`;
//!   rows are counted from the bottom, columns from the left.
//! * The knot runs from X to O along each column and from O to X along each
//!   row. Vertical strands cross over horizontal ones.
//! * The Legendrian front is the grid turned by 45 degrees so that NE and SW
//!   corners become cusps and NW/SE corners are smoothed. At every crossing
//!   the front strand of smaller slope lies in front, which makes the front
//!   the mirror of the grid knot: its writhe is the negative of the grid
//!   writhe.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum GridError {
    #[error("grid size must be at least 2, got {0}")]
    TooSmall(usize),
    #[error("{which} has length {len}, expected {n}")]
    Length { which: &'static str, len: usize, n: usize },
    #[error("{which} is not a permutation of 0..{n}")]
    NotPermutation { which: &'static str, n: usize },
    #[error("column {column} carries both markings in row {row}")]
    SharedCell { column: usize, row: usize },
    #[error("diagram presents a link with {components} components")]
    Link { components: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl GridError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            GridError::TooSmall(_) => "too_small",
            GridError::Length { .. } => "bad_length",
            GridError::NotPermutation { .. } => "not_permutation",
            GridError::SharedCell { .. } => "shared_cell",
            GridError::Link { .. } => "link",
            GridError::Parse { .. } => "parse",
        }
    }
}

/// Unchecked grid data as it appears on disk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawGrid {
    pub n: usize,
    pub o: Vec<usize>,
    pub x: Vec<usize>,
}

/// Result of [`validate`]: every violated diagram invariant, in check order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub issues: Vec<GridError>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

fn is_permutation(p: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    for &v in p {
        if v >= n || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    p.len() == n
}

fn inverse(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &v) in p.iter().enumerate() {
        inv[v] = i;
    }
    inv
}

/// Number of cycles of the row permutation `r -> o[x^-1(r)]`, i.e. the number
/// of link components.
fn components(o: &[usize], x: &[usize]) -> usize {
    let xi = inverse(x);
    let n = o.len();
    let mut seen = vec![false; n];
    let mut count = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        count += 1;
        let mut r = start;
        while !seen[r] {
            seen[r] = true;
            r = o[xi[r]];
        }
    }
    count
}

/// Checks all three diagram invariants and reports each failure.
pub fn validate(raw: &RawGrid) -> ValidationReport {
    let mut issues = Vec::new();
    let n = raw.n;
    if n < 2 {
        issues.push(GridError::TooSmall(n));
        return ValidationReport { issues };
    }
    let mut perms_ok = true;
    for (which, p) in [("o", &raw.o), ("x", &raw.x)] {
        if p.len() != n {
            issues.push(GridError::Length { which, len: p.len(), n });
            perms_ok = false;
        } else if !is_permutation(p, n) {
            issues.push(GridError::NotPermutation { which, n });
            perms_ok = false;
        }
    }
    if !perms_ok {
        return ValidationReport { issues };
    }
    for c in 0..n {
        if raw.o[c] == raw.x[c] {
            issues.push(GridError::SharedCell {
                column: c,
                row: raw.o[c],
            });
        }
    }
    let k = components(&raw.o, &raw.x);
    if k != 1 {
        issues.push(GridError::Link { components: k });
    }
    ValidationReport { issues }
}

/// A validated knot grid. Construction always goes through [`validate`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGrid", into = "RawGrid")]
pub struct GridDiagram {
    o: Vec<usize>,
    x: Vec<usize>,
    oi: Vec<usize>,
    xi: Vec<usize>,
}

impl TryFrom<RawGrid> for GridDiagram {
    type Error = GridError;

    fn try_from(raw: RawGrid) -> Result<Self, GridError> {
        let report = validate(&raw);
        if let Some(e) = report.issues.into_iter().next() {
            return Err(e);
        }
        let oi = inverse(&raw.o);
        let xi = inverse(&raw.x);
        Ok(GridDiagram {
            o: raw.o,
            x: raw.x,
            oi,
            xi,
        })
    }
}

impl From<GridDiagram> for RawGrid {
    fn from(d: GridDiagram) -> RawGrid {
        RawGrid {
            n: d.o.len(),
            o: d.o,
            x: d.x,
        }
    }
}

/// Shape of the knot projection at a marking, named by the corner of the
/// bounding box it occupies: `NE` is a corner whose strands leave downwards
/// and to the left.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Corner {
    NW,
    NE,
    SW,
    SE,
}

impl Corner {
    fn from_directions(up: bool, right: bool) -> Corner {
        match (up, right) {
            (false, false) => Corner::NE,
            (false, true) => Corner::NW,
            (true, false) => Corner::SE,
            (true, true) => Corner::SW,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StabilizationKind {
    Positive,
    Negative,
}

impl StabilizationKind {
    /// Corner of the 2x2 stabilization block that receives the new O.
    ///
    /// Pinned by the (tb, r) table: the NE split lowers r, the SW split
    /// raises it. The NW and SE splits leave (tb, r) unchanged.
    pub fn block_corner(self) -> Corner {
        match self {
            StabilizationKind::Negative => Corner::NE,
            StabilizationKind::Positive => Corner::SW,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassicalInvariants {
    pub tb: i64,
    pub r: i64,
    pub sl: i64,
    /// Writhe of the front, i.e. minus the writhe of the grid projection.
    pub writhe: i64,
}

impl fmt::Display for ClassicalInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "tb={} r={} sl={}", self.tb, self.r, self.sl)
    }
}

impl GridDiagram {
    pub fn new(o: Vec<usize>, x: Vec<usize>) -> Result<Self, GridError> {
        GridDiagram::try_from(RawGrid { n: o.len(), o, x })
    }

    /// The 2x2 grid of the unknot.
    pub fn unknot() -> Self {
        GridDiagram::new(vec![0, 1], vec![1, 0]).unwrap()
    }

    pub fn n(&self) -> usize {
        self.o.len()
    }

    pub fn o(&self) -> &[usize] {
        &self.o
    }

    pub fn x(&self) -> &[usize] {
        &self.x
    }

    /// Column of the O marking in row `r`.
    pub fn o_col(&self, r: usize) -> usize {
        self.oi[r]
    }

    /// Column of the X marking in row `r`.
    pub fn x_col(&self, r: usize) -> usize {
        self.xi[r]
    }

    pub fn to_raw(&self) -> RawGrid {
        self.clone().into()
    }

    /// Writhe of the grid projection (vertical over horizontal).
    pub fn grid_writhe(&self) -> i64 {
        let n = self.n();
        let mut w = 0;
        for c in 0..n {
            let (lo, hi) = minmax(self.o[c], self.x[c]);
            let sv = if self.o[c] > self.x[c] { 1 } else { -1 };
            for r in lo + 1..hi {
                let (l, h) = minmax(self.oi[r], self.xi[r]);
                if l < c && c < h {
                    let sh = if self.xi[r] > self.oi[r] { 1 } else { -1 };
                    w -= sv * sh;
                }
            }
        }
        w
    }

    /// Corner shape at the O marking of column `c`.
    pub fn o_corner(&self, c: usize) -> Corner {
        let r = self.o[c];
        Corner::from_directions(self.x[c] > r, self.xi[r] > c)
    }

    /// Corner shape at the X marking of column `c`.
    pub fn x_corner(&self, c: usize) -> Corner {
        let r = self.x[c];
        Corner::from_directions(self.o[c] > r, self.oi[r] > c)
    }

    pub fn classical_invariants(&self) -> ClassicalInvariants {
        let writhe = -self.grid_writhe();
        let (mut down, mut up) = (0i64, 0i64);
        for c in 0..self.n() {
            match self.x_corner(c) {
                Corner::NE => down += 1,
                Corner::SW => up += 1,
                _ => {}
            }
            match self.o_corner(c) {
                Corner::NE => up += 1,
                Corner::SW => down += 1,
                _ => {}
            }
        }
        let tb = writhe - (down + up) / 2;
        let r = (down - up) / 2;
        ClassicalInvariants {
            tb,
            r,
            sl: tb - r,
            writhe,
        }
    }

    /// Planar reflection in a vertical line: presents the mirror knot.
    pub fn mirror(&self) -> GridDiagram {
        let rev = |p: &[usize]| p.iter().rev().copied().collect::<Vec<_>>();
        GridDiagram::new(rev(&self.o), rev(&self.x)).expect("reflection keeps validity")
    }

    /// Exchanges the roles of O and X: the same knot with reversed orientation.
    pub fn reverse(&self) -> GridDiagram {
        GridDiagram::new(self.x.clone(), self.o.clone()).expect("swap keeps validity")
    }

    /// Exchanges rows and columns.
    pub fn transpose(&self) -> GridDiagram {
        GridDiagram::new(self.oi.clone(), self.xi.clone()).expect("transpose keeps validity")
    }

    /// Cyclic permutation of the columns: column `c` moves to `c + k`.
    pub fn shift_columns(&self, k: usize) -> GridDiagram {
        let n = self.n();
        let mut o = vec![0; n];
        let mut x = vec![0; n];
        for c in 0..n {
            o[(c + k) % n] = self.o[c];
            x[(c + k) % n] = self.x[c];
        }
        GridDiagram::new(o, x).expect("cyclic shift keeps validity")
    }

    /// Cyclic permutation of the rows: row `r` moves to `r + k`.
    pub fn shift_rows(&self, k: usize) -> GridDiagram {
        let n = self.n();
        let o = self.o.iter().map(|&r| (r + k) % n).collect();
        let x = self.x.iter().map(|&r| (r + k) % n).collect();
        GridDiagram::new(o, x).expect("cyclic shift keeps validity")
    }

    /// Swaps columns `c` and `c + 1` when their vertical segments are nested
    /// or disjoint; `None` when they interleave or share an endpoint.
    pub fn commute_columns(&self, c: usize) -> Option<GridDiagram> {
        if c + 1 >= self.n() {
            return None;
        }
        let a = minmax(self.o[c], self.x[c]);
        let b = minmax(self.o[c + 1], self.x[c + 1]);
        if interleave(a, b) {
            return None;
        }
        let mut o = self.o.clone();
        let mut x = self.x.clone();
        o.swap(c, c + 1);
        x.swap(c, c + 1);
        Some(GridDiagram::new(o, x).expect("commutation keeps validity"))
    }

    /// Swaps rows `r` and `r + 1` under the same non-interleaving condition.
    pub fn commute_rows(&self, r: usize) -> Option<GridDiagram> {
        if r + 1 >= self.n() {
            return None;
        }
        let a = minmax(self.oi[r], self.xi[r]);
        let b = minmax(self.oi[r + 1], self.xi[r + 1]);
        if interleave(a, b) {
            return None;
        }
        let sw = |v: usize| {
            if v == r {
                r + 1
            } else if v == r + 1 {
                r
            } else {
                v
            }
        };
        let o = self.o.iter().map(|&v| sw(v)).collect();
        let x = self.x.iter().map(|&v| sw(v)).collect();
        Some(GridDiagram::new(o, x).expect("commutation keeps validity"))
    }

    /// Splits the X marking of `column` into a 2x2 block: a new column is
    /// inserted right of it and a new row above it, and the new O sits in
    /// `corner` of the block with the two X markings on the other diagonal.
    pub fn stabilize_at(&self, column: usize, corner: Corner) -> GridDiagram {
        let n = self.n();
        let c = column;
        let r = self.x[c];
        let mc = |j: usize| if j <= c { j } else { j + 1 };
        let mr = |i: usize| if i <= r { i } else { i + 1 };
        let mut o = vec![usize::MAX; n + 1];
        let mut x = vec![usize::MAX; n + 1];
        // where the O of row r ends up, and which new column takes column c's O
        let (row_o_row, old_o_col) = match corner {
            Corner::NW => (r, c + 1),
            Corner::SE => (r + 1, c),
            Corner::NE => (r, c),
            Corner::SW => (r + 1, c + 1),
        };
        for j in 0..n {
            if j == c {
                continue;
            }
            x[mc(j)] = mr(self.x[j]);
            o[mc(j)] = if self.o[j] == r { row_o_row } else { mr(self.o[j]) };
        }
        o[old_o_col] = mr(self.o[c]);
        match corner {
            Corner::NW => {
                x[c] = r;
                o[c] = r + 1;
                x[c + 1] = r + 1;
            }
            Corner::SE => {
                x[c] = r;
                o[c + 1] = r;
                x[c + 1] = r + 1;
            }
            Corner::NE => {
                x[c] = r + 1;
                x[c + 1] = r;
                o[c + 1] = r + 1;
            }
            Corner::SW => {
                o[c] = r;
                x[c] = r + 1;
                x[c + 1] = r;
            }
        }
        GridDiagram::new(o, x).expect("stabilization keeps validity")
    }

    /// Legendrian stabilization, performed at the X marking of column 0.
    pub fn stabilize(&self, kind: StabilizationKind) -> GridDiagram {
        self.stabilize_at(0, kind.block_corner())
    }

    /// Legendrian connected sum.
    ///
    /// `self` is shifted so that the X of its last column sits in the bottom
    /// row, `other` so that the O of its first column sits in the top row.
    /// The two grids are then glued along that shared corner cell and both
    /// markings in it are dropped. The new crossing is positive in the front
    /// and both dropped corners are smooth, so tb adds up with a +1 and r adds.
    pub fn connected_sum(&self, other: &GridDiagram) -> GridDiagram {
        let (n1, n2) = (self.n(), other.n());
        let g1 = self.shift_rows(n1 - self.x[n1 - 1]);
        let g2 = other.shift_rows((2 * n2 - 1 - other.o[0]) % n2);
        let size = n1 + n2 - 1;
        let mut o = Vec::with_capacity(size);
        let mut x = Vec::with_capacity(size);
        for c in 0..n1 - 1 {
            o.push(g1.o[c] + n2 - 1);
            x.push(g1.x[c] + n2 - 1);
        }
        o.push(g1.o[n1 - 1] + n2 - 1);
        x.push(g2.x[0]);
        for c in 1..n2 {
            o.push(g2.o[c]);
            x.push(g2.x[c]);
        }
        GridDiagram::new(o, x).expect("connected sum keeps validity")
    }

    pub fn to_text(&self) -> String {
        format!("{}\n{}\n{}\n", self.n(), join(&self.o), join(&self.x))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("grid serializes")
    }

    /// Parses either the text or the JSON format.
    pub fn parse(s: &str) -> Result<Self, GridError> {
        if s.trim_start().starts_with('{') {
            let raw: RawGrid = serde_json::from_str(s).map_err(|e| GridError::Parse {
                line: e.line(),
                msg: e.to_string(),
            })?;
            GridDiagram::try_from(raw)
        } else {
            parse_text(s)
        }
    }
}

fn join(p: &[usize]) -> String {
    p.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn minmax(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// True unless the segments are strictly disjoint or strictly nested; a
/// shared endpoint blocks the move.
fn interleave(a: (usize, usize), b: (usize, usize)) -> bool {
    let disjoint = a.1 < b.0 || b.1 < a.0;
    let nested = (a.0 < b.0 && b.1 < a.1) || (b.0 < a.0 && a.1 < b.1);
    !(disjoint || nested)
}

/// Parses the text format into unchecked data.
pub fn parse_raw(s: &str) -> Result<RawGrid, GridError> {
    let mut lines = s
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let mut next = |what: &str| {
        lines.next().ok_or_else(|| GridError::Parse {
            line: 0,
            msg: format!("missing {what} line"),
        })
    };
    let (ln, head) = next("size")?;
    let n: usize = head.parse().map_err(|_| GridError::Parse {
        line: ln,
        msg: format!("expected grid size, found {head:?}"),
    })?;
    let mut row = |what: &str| -> Result<Vec<usize>, GridError> {
        let (ln, l) = next(what)?;
        l.split_whitespace()
            .map(|t| {
                t.parse().map_err(|_| GridError::Parse {
                    line: ln,
                    msg: format!("expected a non-negative integer, found {t:?}"),
                })
            })
            .collect()
    };
    let o = row("o")?;
    let x = row("x")?;
    if let Some((ln, _)) = lines.next() {
        return Err(GridError::Parse {
            line: ln,
            msg: "trailing content".into(),
        });
    }
    Ok(RawGrid { n, o, x })
}

pub fn parse_text(s: &str) -> Result<GridDiagram, GridError> {
    GridDiagram::try_from(parse_raw(s)?)
}

impl FromStr for GridDiagram {
    type Err = GridError;

    fn from_str(s: &str) -> Result<Self, GridError> {
        GridDiagram::parse(s)
    }
}

impl fmt::Display for GridDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(o: &[usize], x: &[usize]) -> RawGrid {
        RawGrid {
            n: o.len(),
            o: o.to_vec(),
            x: x.to_vec(),
        }
    }

    #[test]
    fn validation_examples() {
        assert!(validate(&raw(&[0, 1], &[1, 0])).is_valid());
        let r = validate(&raw(&[0, 1], &[0, 1]));
        assert_eq!(r.issues[0].code(), "shared_cell");
        let r = validate(&raw(&[0, 1, 2, 3], &[1, 0, 3, 2]));
        assert_eq!(r.issues, vec![GridError::Link { components: 2 }]);
        let r = validate(&raw(&[0, 0], &[1, 0]));
        assert_eq!(r.issues[0].code(), "not_permutation");
    }

    #[test]
    fn unknot_invariants() {
        let u = GridDiagram::unknot();
        let ci = u.classical_invariants();
        assert_eq!((ci.tb, ci.r, ci.sl), (-1, 0, -1));
        assert_eq!(u.mirror(), u.mirror().mirror().mirror());
    }

    #[test]
    fn text_round_trip() {
        let g: GridDiagram = "# comment\n3\n0 1 2\n1 2 0\n".parse().unwrap();
        assert_eq!(g.to_text().parse::<GridDiagram>().unwrap(), g);
        assert_eq!(GridDiagram::parse(&g.to_json()).unwrap(), g);
        assert!(matches!(
            "3\n0 1 2\n".parse::<GridDiagram>(),
            Err(GridError::Parse { .. })
        ));
    }

    #[test]
    fn stabilizations_of_unknot() {
        let u = GridDiagram::unknot();
        let neg = u.stabilize(StabilizationKind::Negative).classical_invariants();
        let pos = u.stabilize(StabilizationKind::Positive).classical_invariants();
        assert_eq!((neg.tb, neg.r), (-2, -1));
        assert_eq!((pos.tb, pos.r), (-2, 1));
    }
}
