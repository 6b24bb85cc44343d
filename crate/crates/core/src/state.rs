//! Grid states: permutations packed into one machine word.
//!
//! Entry `c` lives in the nibble at bit `60 - 4c`, so column 0 is the most
//! significant nibble and numeric order on words is lexicographic order on
//! permutations. Sixteen columns fit.

use crate::{check_cap, CapacityError};
use serde::{Deserialize, Serialize};
use std::fmt;

#[inline]
pub(crate) fn shift(c: usize) -> u32 {
    60 - 4 * c as u32
}

#[inline]
pub(crate) fn entry(word: u64, c: usize) -> usize {
    ((word >> shift(c)) & 0xf) as usize
}

#[inline]
pub(crate) fn swap(word: u64, a: usize, b: usize) -> u64 {
    let (va, vb) = (entry(word, a) as u64, entry(word, b) as u64);
    let d = va ^ vb;
    word ^ (d << shift(a)) ^ (d << shift(b))
}

pub(crate) fn pack(sigma: &[usize]) -> u64 {
    sigma
        .iter()
        .enumerate()
        .fold(0, |w, (c, &v)| w | ((v as u64) << shift(c)))
}

pub(crate) fn unpack(word: u64, n: usize) -> Vec<usize> {
    (0..n).map(|c| entry(word, c)).collect()
}

/// A generator of the grid complex: `sigma[c]` is the row of the state point
/// on the vertical line `c`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridState {
    n: u8,
    word: u64,
}

impl GridState {
    /// Panics unless `sigma` is a permutation of `0..n` with `n <= 16`.
    pub fn new(sigma: &[usize]) -> Self {
        let n = sigma.len();
        assert!(n <= crate::MAX_CAP, "grid states support at most 16 columns");
        let mut seen = 0u32;
        for &v in sigma {
            assert!(v < n && seen & (1 << v) == 0, "not a permutation");
            seen |= 1 << v;
        }
        GridState {
            n: n as u8,
            word: pack(sigma),
        }
    }

    pub(crate) fn from_word(n: usize, word: u64) -> Self {
        GridState { n: n as u8, word }
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn word(&self) -> u64 {
        self.word
    }

    pub fn get(&self, c: usize) -> usize {
        entry(self.word, c)
    }

    pub fn sigma(&self) -> Vec<usize> {
        unpack(self.word, self.n())
    }
}

impl fmt::Debug for GridState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GridState{:?}", self.sigma())
    }
}

impl Serialize for GridState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.sigma().serialize(s)
    }
}

impl<'de> Deserialize<'de> for GridState {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let sigma = Vec::<usize>::deserialize(d)?;
        let n = sigma.len();
        let ok = n <= crate::MAX_CAP && {
            let mut s = sigma.clone();
            s.sort_unstable();
            s.iter().enumerate().all(|(i, &v)| i == v)
        };
        if !ok {
            return Err(serde::de::Error::custom("grid state is not a permutation"));
        }
        Ok(GridState::new(&sigma))
    }
}

/// All permutations of `0..n` in lexicographic order.
pub struct States {
    perm: Vec<usize>,
    done: bool,
}

impl Iterator for States {
    type Item = GridState;

    fn next(&mut self) -> Option<GridState> {
        if self.done {
            return None;
        }
        let out = GridState::new(&self.perm);
        self.done = !next_permutation(&mut self.perm);
        Some(out)
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

pub fn enumerate_states(n: usize, cap: usize) -> Result<States, CapacityError> {
    check_cap(n, cap)?;
    Ok(States {
        perm: (0..n).collect(),
        done: false,
    })
}

/// Lexicographic rank of a permutation.
pub fn lex_rank(sigma: &[usize]) -> u64 {
    let n = sigma.len();
    let mut used = 0u32;
    let mut rank = 0u64;
    for (c, &v) in sigma.iter().enumerate() {
        let smaller = v as u32 - (used & ((1 << v) - 1)).count_ones();
        rank = rank * (n - c) as u64 + smaller as u64;
        used |= 1 << v;
    }
    rank
}
