//! Linear algebra over F2.
//!
//! Sparse columns are sorted, duplicate-free lists of row indices. The
//! reducer is the standard column reduction used for persistence: a column is
//! reduced by adding earlier columns that share its lowest (largest) row.

/// Sorts `col` and cancels repeated entries in pairs.
pub fn normalize(col: &mut Vec<u32>) {
    col.sort_unstable();
    let mut out = 0;
    let mut i = 0;
    while i < col.len() {
        if i + 1 < col.len() && col[i] == col[i + 1] {
            i += 2;
        } else {
            col[out] = col[i];
            out += 1;
            i += 1;
        }
    }
    col.truncate(out);
}

/// Symmetric difference of two sorted columns.
pub fn add(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

const NONE: u32 = u32::MAX;

/// Incremental column reduction.
pub struct Reducer {
    pivot_of_row: Vec<u32>,
    reduced: Vec<Vec<u32>>,
}

impl Reducer {
    pub fn new(nrows: usize) -> Self {
        Reducer {
            pivot_of_row: vec![NONE; nrows],
            reduced: Vec::new(),
        }
    }

    /// Reduces `col` against the stored pivots.
    pub fn reduce(&self, mut col: Vec<u32>) -> Vec<u32> {
        while let Some(&low) = col.last() {
            let k = self.pivot_of_row[low as usize];
            if k == NONE {
                break;
            }
            col = add(&col, &self.reduced[k as usize]);
        }
        col
    }

    /// Reduces `col` and stores it; returns its lowest row when the column is
    /// independent of the ones pushed before.
    pub fn push(&mut self, col: Vec<u32>) -> Option<u32> {
        let col = self.reduce(col);
        let low = col.last().copied();
        if let Some(low) = low {
            self.pivot_of_row[low as usize] = self.reduced.len() as u32;
            self.reduced.push(col);
        }
        low
    }

    pub fn rank(&self) -> usize {
        self.reduced.len()
    }

    pub fn is_pivot_row(&self, row: u32) -> bool {
        self.pivot_of_row[row as usize] != NONE
    }
}

/// Rank of the matrix with the given columns.
pub fn rank(nrows: usize, cols: impl IntoIterator<Item = Vec<u32>>) -> usize {
    let mut r = Reducer::new(nrows);
    for c in cols {
        r.push(c);
    }
    r.rank()
}

/// Dense bit matrix, one row per bitset.
#[derive(Clone, Debug)]
pub struct BitMatrix {
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64);
        BitMatrix {
            cols,
            words,
            data: vec![0; rows * words],
        }
    }

    pub fn rows(&self) -> usize {
        self.data.len().checked_div(self.words).unwrap_or(0)
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        self.data[r * self.words + c / 64] ^= 1 << (c % 64);
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    /// Product over F2; panics on shape mismatch.
    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.rows());
        let mut out = BitMatrix::zeros(self.rows(), other.cols);
        for i in 0..self.rows() {
            for k in 0..self.cols {
                if self.get(i, k) {
                    for w in 0..other.words {
                        out.data[i * out.words + w] ^= other.data[k * other.words + w];
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// Gaussian elimination on a copy.
    pub fn rank(&self) -> usize {
        let rows = self.rows();
        let mut m = self.data.clone();
        let w = self.words;
        let mut rank = 0;
        for c in 0..self.cols {
            let (word, bit) = (c / 64, 1u64 << (c % 64));
            let Some(p) = (rank..rows).find(|&r| m[r * w + word] & bit != 0) else {
                continue;
            };
            if p != rank {
                for k in 0..w {
                    m.swap(p * w + k, rank * w + k);
                }
            }
            for r in 0..rows {
                if r != rank && m[r * w + word] & bit != 0 {
                    for k in 0..w {
                        m[r * w + k] ^= m[rank * w + k];
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}
