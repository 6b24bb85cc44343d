//! The fully blocked grid complex over F2.
//!
//! Gradings use the planar lattice counts
//! `M_O(x) = J(x - O, x - O) + 1`, `2A = M_O - M_X - (n - 1)`, with state
//! points on lattice points `(c, sigma[c])` and markings at cell centres.
//! The differential counts empty rectangles on the torus: no O, no X and no
//! state point in the interior.
//!
//! Homology of this complex is hat-HFK tensored with `n - 1` copies of a
//! two-dimensional space supported in bigradings `(0, 0)` and `(-1, -2)`
//! (Maslov, 2A). [`HomologyTable::desmear`] divides that factor back out.

use crate::f2::{self, BitMatrix, Reducer};
use crate::grid::GridDiagram;
use crate::state::{entry, swap, GridState};
use crate::{check_cap, CapacityError};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
pub struct Bigrading {
    pub maslov: i32,
    /// Twice the Alexander grading.
    pub two_a: i32,
}

impl Bigrading {
    pub fn new(maslov: i32, two_a: i32) -> Self {
        Bigrading { maslov, two_a }
    }

    fn below(self) -> Bigrading {
        Bigrading::new(self.maslov - 1, self.two_a)
    }

    fn above(self) -> Bigrading {
        Bigrading::new(self.maslov + 1, self.two_a)
    }
}

/// Per-cell lookup tables for the lattice-count gradings.
pub struct Gradings {
    n: usize,
    o_tab: Vec<i32>,
    x_tab: Vec<i32>,
    o_const: i32,
    x_const: i32,
}

/// `tab[c * n + s]` counts markings strictly north-east of the lattice point
/// `(c, s)` plus markings strictly south-west of it.
fn point_table(p: &[usize]) -> Vec<i32> {
    let n = p.len();
    let mut tab = vec![0; n * n];
    for c in 0..n {
        for s in 0..n {
            tab[c * n + s] = (0..n).filter(|&k| (k >= c && p[k] >= s) || (k < c && p[k] < s)).count() as i32;
        }
    }
    tab
}

fn self_count(p: &[usize]) -> i32 {
    let n = p.len();
    let mut k = 0;
    for a in 0..n {
        for b in a + 1..n {
            if p[a] < p[b] {
                k += 1;
            }
        }
    }
    k
}

impl Gradings {
    pub fn new(d: &GridDiagram) -> Self {
        Gradings {
            n: d.n(),
            o_tab: point_table(d.o()),
            x_tab: point_table(d.x()),
            o_const: self_count(d.o()) + 1,
            x_const: self_count(d.x()) + 1,
        }
    }

    fn pair(&self, word: u64) -> (i32, i32) {
        let n = self.n;
        let sigma: Vec<usize> = (0..n).map(|c| entry(word, c)).collect();
        let own = self_count(&sigma);
        let (mut mo, mut mx) = (own + self.o_const, own + self.x_const);
        for (c, &s) in sigma.iter().enumerate() {
            mo -= self.o_tab[c * n + s];
            mx -= self.x_tab[c * n + s];
        }
        (mo, mx)
    }

    fn combine(&self, mo: i32, mx: i32) -> Bigrading {
        Bigrading::new(mo, mo - mx - (self.n as i32 - 1))
    }

    pub fn of_word(&self, word: u64) -> Bigrading {
        let (mo, mx) = self.pair(word);
        self.combine(mo, mx)
    }

    /// Maslov grading with respect to the O markings only.
    pub fn maslov(&self, word: u64) -> i32 {
        self.pair(word).0
    }

    /// Visits every state in lexicographic order with its bigrading.
    pub fn for_each(&self, mut f: impl FnMut(u64, Bigrading)) {
        self.walk(0, 0, 0, self.o_const, self.x_const, &mut f);
    }

    fn walk(&self, c: usize, used: u32, word: u64, mo: i32, mx: i32, f: &mut impl FnMut(u64, Bigrading)) {
        let n = self.n;
        if c == n {
            f(word, self.combine(mo, mx));
            return;
        }
        for s in 0..n {
            if used & (1 << s) != 0 {
                continue;
            }
            let below = (used & ((1 << s) - 1)).count_ones() as i32;
            self.walk(
                c + 1,
                used | (1 << s),
                word | ((s as u64) << crate::state::shift(c)),
                mo + below - self.o_tab[c * n + s],
                mx + below - self.x_tab[c * n + s],
                f,
            );
        }
    }
}

pub fn bigrading(d: &GridDiagram, s: &GridState) -> Result<Bigrading, FloerError> {
    if s.n() != d.n() {
        return Err(FloerError::SizeMismatch {
            grid: d.n(),
            state: s.n(),
        });
    }
    Ok(Gradings::new(d).of_word(s.word()))
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum FloerError {
    #[error("state has {state} columns but the grid has {grid}")]
    SizeMismatch { grid: usize, state: usize },
    #[error(transparent)]
    Capacity(#[from] CapacityError),
}

/// Which markings a rectangle must avoid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Blocking {
    /// All O and all X markings: the fully blocked complex.
    Full,
    /// Only the O markings: the Alexander-filtered complex.
    OOnly,
}

/// Empty-rectangle enumeration by a sweep over right edges.
///
/// For a fixed left edge the admissible heights shrink monotonically as the
/// right edge moves on, so each left edge costs `O(n)`.
pub struct Rectangles {
    n: usize,
    up: Vec<u8>,
    down: Vec<u8>,
}

impl Rectangles {
    pub fn new(d: &GridDiagram, blocking: Blocking) -> Self {
        let n = d.n();
        let mut up = vec![0u8; n * n];
        let mut down = vec![0u8; n * n];
        for c in 0..n {
            let marks: Vec<usize> = match blocking {
                Blocking::Full => vec![d.o()[c], d.x()[c]],
                Blocking::OOnly => vec![d.o()[c]],
            };
            for p in 0..n {
                up[c * n + p] = marks.iter().map(|&m| (m + n - p) % n).min().unwrap() as u8;
                down[c * n + p] = marks.iter().map(|&m| (p + 2 * n - 1 - m) % n).min().unwrap() as u8;
            }
        }
        Rectangles { n, up, down }
    }

    /// Calls `f` with the target of every empty rectangle leaving `word`.
    #[inline]
    pub fn outgoing(&self, word: u64, mut f: impl FnMut(u64)) {
        let n = self.n;
        for a in 0..n {
            let p = entry(word, a);
            let mut room = self.up[a * n + p] as usize;
            let mut b = a;
            for _ in 1..n {
                if room == 0 {
                    break;
                }
                b += 1;
                if b == n {
                    b = 0;
                }
                let h = (entry(word, b) + n - p) % n;
                if h <= room {
                    f(swap(word, a, b));
                }
                room = room.min(h).min(self.up[b * n + p] as usize);
            }
        }
    }

    /// Calls `f` with the source of every empty rectangle arriving at `word`.
    #[inline]
    pub fn incoming(&self, word: u64, mut f: impl FnMut(u64)) {
        let n = self.n;
        for a in 0..n {
            let q = entry(word, a);
            let mut room = self.down[a * n + q] as usize;
            let mut b = a;
            for _ in 1..n {
                if room == 0 {
                    break;
                }
                b += 1;
                if b == n {
                    b = 0;
                }
                let h = (q + n - entry(word, b)) % n;
                if h <= room {
                    f(swap(word, a, b));
                }
                room = room.min(h).min(self.down[b * n + q] as usize);
            }
        }
    }
}

/// Boundary of a single state in the fully blocked complex, reduced mod 2
/// and sorted.
pub fn boundary(d: &GridDiagram, s: &GridState) -> Vec<GridState> {
    let rects = Rectangles::new(d, Blocking::Full);
    let mut out = Vec::new();
    rects.outgoing(s.word(), |t| out.push(t));
    cancel_pairs(&mut out);
    out.into_iter().map(|w| GridState::from_word(d.n(), w)).collect()
}

pub(crate) fn cancel_pairs(v: &mut Vec<u64>) {
    v.sort_unstable();
    let mut out = Vec::with_capacity(v.len());
    let mut i = 0;
    while i < v.len() {
        if i + 1 < v.len() && v[i] == v[i + 1] {
            i += 2;
        } else {
            out.push(v[i]);
            i += 1;
        }
    }
    *v = out;
}

/// The complex with generators bucketed by bigrading.
pub struct BlockedComplex {
    n: usize,
    rects: Rectangles,
    blocks: BTreeMap<Bigrading, Vec<u64>>,
}

impl BlockedComplex {
    pub fn build(d: &GridDiagram, cap: usize) -> Result<Self, CapacityError> {
        check_cap(d.n(), cap)?;
        let mut blocks: BTreeMap<Bigrading, Vec<u64>> = BTreeMap::new();
        Gradings::new(d).for_each(|w, g| blocks.entry(g).or_default().push(w));
        Ok(BlockedComplex {
            n: d.n(),
            rects: Rectangles::new(d, Blocking::Full),
            blocks,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bigradings(&self) -> impl Iterator<Item = Bigrading> + '_ {
        self.blocks.keys().copied()
    }

    /// Generators in bigrading `g`, in lexicographic order.
    pub fn block(&self, g: Bigrading) -> &[u64] {
        self.blocks.get(&g).map_or(&[], |v| v.as_slice())
    }

    /// Sparse columns of the differential out of bigrading `g`, indexed into
    /// the block one Maslov degree lower.
    pub fn boundary_columns(&self, g: Bigrading) -> Vec<Vec<u32>> {
        let target = self.block(g.below());
        self.block(g)
            .iter()
            .map(|&w| {
                let mut col = Vec::new();
                self.rects.outgoing(w, |t| {
                    let i = target
                        .binary_search(&t)
                        .expect("empty rectangles lower Maslov grading by one");
                    col.push(i as u32);
                });
                f2::normalize(&mut col);
                col
            })
            .collect()
    }

    fn boundary_ranks(&self, dense: bool) -> BTreeMap<Bigrading, usize> {
        let keys: Vec<Bigrading> = self.blocks.keys().copied().collect();
        keys.par_iter()
            .map(|&g| {
                let rows = self.block(g.below()).len();
                if rows == 0 {
                    return (g, 0);
                }
                let cols = self.boundary_columns(g);
                let r = if dense {
                    let mut m = BitMatrix::zeros(rows, cols.len());
                    for (j, c) in cols.iter().enumerate() {
                        for &i in c {
                            m.flip(i as usize, j);
                        }
                    }
                    m.rank()
                } else {
                    f2::rank(rows, cols)
                };
                (g, r)
            })
            .collect()
    }

    fn homology_from_ranks(&self, ranks: &BTreeMap<Bigrading, usize>) -> HomologyTable {
        let mut out = BTreeMap::new();
        for (&g, words) in &self.blocks {
            let out_rank = ranks.get(&g).copied().unwrap_or(0);
            let in_rank = ranks.get(&g.above()).copied().unwrap_or(0);
            let h = words.len() - out_rank - in_rank;
            if h > 0 {
                out.insert(g, h);
            }
        }
        HomologyTable { n: self.n, ranks: out }
    }

    /// Homology by sparse column reduction per bigrading block.
    pub fn homology(&self) -> HomologyTable {
        self.homology_from_ranks(&self.boundary_ranks(false))
    }

    /// Homology by dense Gaussian elimination; used as an oracle.
    pub fn homology_dense(&self) -> HomologyTable {
        self.homology_from_ranks(&self.boundary_ranks(true))
    }

    /// Whether the words in `g` listed by `cycle` sum to a boundary, decided
    /// on the whole block.
    pub fn is_boundary(&self, g: Bigrading, cycle: &[u64]) -> bool {
        let rows = self.block(g);
        let mut r = Reducer::new(rows.len());
        for col in self.boundary_columns(g.above()) {
            r.push(col);
        }
        let mut v: Vec<u32> = cycle
            .iter()
            .map(|w| rows.binary_search(w).expect("cycle lies in block") as u32)
            .collect();
        f2::normalize(&mut v);
        r.reduce(v).is_empty()
    }
}

pub fn homology(d: &GridDiagram, cap: usize) -> Result<HomologyTable, CapacityError> {
    Ok(BlockedComplex::build(d, cap)?.homology())
}

/// Bigraded ranks over F2, keyed by (Maslov, 2A).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "TableJson", try_from = "TableJson")]
pub struct HomologyTable {
    pub n: usize,
    pub ranks: BTreeMap<Bigrading, usize>,
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    n: usize,
    ranks: Vec<TableEntry>,
}

#[derive(Serialize, Deserialize)]
struct TableEntry {
    maslov: i32,
    two_a: i32,
    rank: usize,
}

impl From<HomologyTable> for TableJson {
    fn from(t: HomologyTable) -> Self {
        TableJson {
            n: t.n,
            ranks: t
                .ranks
                .iter()
                .map(|(g, &rank)| TableEntry {
                    maslov: g.maslov,
                    two_a: g.two_a,
                    rank,
                })
                .collect(),
        }
    }
}

impl TryFrom<TableJson> for HomologyTable {
    type Error = String;

    fn try_from(j: TableJson) -> Result<Self, String> {
        let mut ranks = BTreeMap::new();
        for e in j.ranks {
            if e.rank == 0 {
                continue;
            }
            if ranks.insert(Bigrading::new(e.maslov, e.two_a), e.rank).is_some() {
                return Err(format!("duplicate bigrading ({}, {})", e.maslov, e.two_a));
            }
        }
        Ok(HomologyTable { n: j.n, ranks })
    }
}

impl HomologyTable {
    pub fn total_rank(&self) -> usize {
        self.ranks.values().sum()
    }

    pub fn rank(&self, maslov: i32, two_a: i32) -> usize {
        self.ranks.get(&Bigrading::new(maslov, two_a)).copied().unwrap_or(0)
    }

    /// True iff all nonzero ranks share one value of `M - A`.
    pub fn is_thin(&self) -> bool {
        let mut diag = self.ranks.keys().map(|g| 2 * g.maslov - g.two_a);
        match diag.next() {
            None => true,
            Some(first) => diag.all(|d| d == first),
        }
    }

    /// Divides out the `n - 1` factors of `1 + q^-1 t^-1` along each diagonal.
    /// `None` if the table is not of that form.
    pub fn desmear(&self) -> Option<HomologyTable> {
        let mut lines: BTreeMap<i32, BTreeMap<i32, i64>> = BTreeMap::new();
        for (g, &r) in &self.ranks {
            lines
                .entry(2 * g.maslov - g.two_a)
                .or_default()
                .insert(g.maslov, r as i64);
        }
        let mut ranks = BTreeMap::new();
        for (diag, mut line) in lines {
            for _ in 1..self.n {
                let Some((&lo, _)) = line.iter().next() else {
                    break;
                };
                let hi = *line.keys().next_back().unwrap();
                // P(M) = Q(M) + Q(M + 1), solved from the top down
                let mut q = BTreeMap::new();
                let mut carry = 0;
                for m in (lo..=hi).rev() {
                    let v = line.get(&m).copied().unwrap_or(0) - carry;
                    if v < 0 || (m == lo && v != 0) {
                        return None;
                    }
                    if v > 0 {
                        q.insert(m, v);
                    }
                    carry = v;
                }
                line = q;
            }
            for (m, r) in line {
                ranks.insert(Bigrading::new(m, 2 * m - diag), r as usize);
            }
        }
        Some(HomologyTable { n: 1, ranks })
    }

    /// Checks `rank(M, 2A) = rank(M - 2A, -2A)` on every entry.
    pub fn is_symmetric(&self) -> bool {
        self.ranks
            .iter()
            .all(|(g, &r)| self.rank(g.maslov - g.two_a, -g.two_a) == r)
    }

    /// Graded Euler characteristic `sum (-1)^M t^A rank` as `(A, coefficient)`
    /// pairs; `None` when some 2A is odd.
    pub fn euler_characteristic(&self) -> Option<BTreeMap<i32, i64>> {
        let mut chi = BTreeMap::new();
        for (g, &r) in &self.ranks {
            if g.two_a % 2 != 0 {
                return None;
            }
            let sign = if g.maslov.rem_euclid(2) == 0 { 1 } else { -1 };
            *chi.entry(g.two_a / 2).or_insert(0) += sign * r as i64;
        }
        chi.retain(|_, c| *c != 0);
        Some(chi)
    }

    pub fn to_tsv(&self) -> String {
        let mut s = String::new();
        for (g, r) in &self.ranks {
            writeln!(s, "{}\t{}\t{}", g.maslov, g.two_a, r).unwrap();
        }
        s
    }

    pub fn from_tsv(n: usize, s: &str) -> Result<HomologyTable, String> {
        let mut ranks = BTreeMap::new();
        for (i, line) in s.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let f: Vec<&str> = line.split('\t').collect();
            let bad = || format!("line {}: expected M<TAB>2A<TAB>rank", i + 1);
            if f.len() != 3 {
                return Err(bad());
            }
            let m = f[0].parse().map_err(|_| bad())?;
            let a = f[1].parse().map_err(|_| bad())?;
            let r: usize = f[2].parse().map_err(|_| bad())?;
            ranks.insert(Bigrading::new(m, a), r);
        }
        Ok(HomologyTable { n, ranks })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }
}

pub fn is_thin(t: &HomologyTable) -> bool {
    t.is_thin()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trefoil() -> GridDiagram {
        GridDiagram::new(vec![0, 1, 2, 3, 4], vec![2, 3, 4, 0, 1]).unwrap()
    }

    #[test]
    fn unknot_has_no_differential() {
        let u = GridDiagram::unknot();
        let c = BlockedComplex::build(&u, 9).unwrap();
        let t = c.homology();
        assert_eq!(t.total_rank(), 2);
        for s in crate::state::enumerate_states(2, 9).unwrap() {
            assert!(boundary(&u, &s).is_empty());
        }
        let a = bigrading(&u, &GridState::new(&[0, 1])).unwrap();
        let b = bigrading(&u, &GridState::new(&[1, 0])).unwrap();
        assert_eq!((a.maslov - b.maslov).abs(), 1);
    }

    #[test]
    fn incremental_gradings_match_direct() {
        let d = trefoil();
        let g = Gradings::new(&d);
        g.for_each(|w, b| assert_eq!(g.of_word(w), b));
    }

    #[test]
    fn incoming_inverts_outgoing() {
        let d = trefoil();
        let r = Rectangles::new(&d, Blocking::Full);
        for s in crate::state::enumerate_states(5, 9).unwrap() {
            r.outgoing(s.word(), |t| {
                let mut back = Vec::new();
                r.incoming(t, |u| back.push(u));
                assert!(back.contains(&s.word()));
            });
        }
    }

    #[test]
    fn trefoil_table() {
        let c = BlockedComplex::build(&trefoil(), 9).unwrap();
        let t = c.homology();
        assert_eq!(t.total_rank(), 48);
        assert_eq!(t, c.homology_dense());
        let hat = t.desmear().unwrap();
        assert_eq!(hat.total_rank(), 3);
        assert!(hat.is_symmetric());
        assert!(t.is_thin());
    }

    #[test]
    fn thin_detects_two_diagonals() {
        let mut ranks = BTreeMap::new();
        ranks.insert(Bigrading::new(0, 0), 1);
        ranks.insert(Bigrading::new(1, 0), 1);
        assert!(!HomologyTable { n: 1, ranks }.is_thin());
    }
}
