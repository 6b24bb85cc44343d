//! Alexander polynomial of a grid knot from its winding-number matrix.
//!
//! `det(t^{w(i,j)}) = ±t^k (1 - t)^{n-1} Δ(t)` where `w(i,j)` is the winding
//! number of the projection around the lattice point `(i, j)`. This uses
//! nothing from the chain complex and serves as the oracle for its graded
//! Euler characteristic.

use crate::grid::GridDiagram;
use std::collections::BTreeMap;
use std::fmt;

/// Dense polynomial in `t`, lowest coefficient first, trailing zeros trimmed.
type Poly = Vec<i128>;

fn trim(mut p: Poly) -> Poly {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

fn mul(a: &[i128], b: &[i128]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn sub(a: &[i128], b: &[i128]) -> Poly {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, &x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, &y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

/// Exact quotient `a / b`, or `None` if `b` does not divide `a` in `Z[t]`.
fn div_exact(a: &[i128], b: &[i128]) -> Option<Poly> {
    let b = trim(b.to_vec());
    let lead = *b.last()?;
    let mut rem = trim(a.to_vec());
    if rem.is_empty() {
        return Some(Vec::new());
    }
    if rem.len() < b.len() {
        return None;
    }
    let mut q = vec![0; rem.len() - b.len() + 1];
    while rem.len() >= b.len() {
        let top = *rem.last().unwrap();
        if top % lead != 0 {
            return None;
        }
        let c = top / lead;
        let shift = rem.len() - b.len();
        q[shift] = c;
        for (i, &y) in b.iter().enumerate() {
            rem[shift + i] -= c * y;
        }
        rem = trim(rem);
        if rem.is_empty() {
            break;
        }
    }
    if rem.is_empty() {
        Some(trim(q))
    } else {
        None
    }
}

fn pow_one_minus_t(k: usize) -> Poly {
    let mut p = vec![1];
    for _ in 0..k {
        p = mul(&p, &[1, -1]);
    }
    p
}

/// Fraction-free determinant.
fn bareiss(mut m: Vec<Vec<Poly>>) -> Poly {
    let n = m.len();
    let mut prev: Poly = vec![1];
    let mut negate = false;
    for k in 0..n {
        if m[k][k].is_empty() {
            match (k + 1..n).find(|&i| !m[i][k].is_empty()) {
                Some(i) => {
                    m.swap(i, k);
                    negate = !negate;
                }
                None => return Vec::new(),
            }
        }
        if k + 1 == n {
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = sub(&mul(&m[k][k], &m[i][j]), &mul(&m[i][k], &m[k][j]));
                m[i][j] = div_exact(&num, &prev).expect("Bareiss quotients are exact");
            }
        }
        prev = m[k][k].clone();
    }
    let mut det = m[n - 1][n - 1].clone();
    if negate {
        det.iter_mut().for_each(|c| *c = -*c);
    }
    det
}

/// A Laurent polynomial in `t` with integer coefficients.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Laurent {
    terms: BTreeMap<i32, i128>,
}

impl Laurent {
    pub fn from_terms(terms: impl IntoIterator<Item = (i32, i128)>) -> Self {
        let mut out = BTreeMap::new();
        for (e, c) in terms {
            *out.entry(e).or_insert(0) += c;
        }
        out.retain(|_, c| *c != 0);
        Laurent { terms: out }
    }

    fn from_poly(low: i32, p: &[i128]) -> Self {
        Laurent::from_terms(p.iter().enumerate().map(|(i, &c)| (low + i as i32, c)))
    }

    fn to_poly(&self) -> (i32, Poly) {
        let low = self.terms.keys().next().copied().unwrap_or(0);
        let high = self.terms.keys().next_back().copied().unwrap_or(0);
        let mut p = vec![0; (high - low + 1) as usize];
        for (&e, &c) in &self.terms {
            p[(e - low) as usize] = c;
        }
        (low, trim(p))
    }

    pub fn terms(&self) -> &BTreeMap<i32, i128> {
        &self.terms
    }

    pub fn eval_one(&self) -> i128 {
        self.terms.values().sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.terms.iter().all(|(&e, &c)| self.terms.get(&-e) == Some(&c))
    }

    /// Exact division by `(1 - t^-1)^k`.
    pub fn div_one_minus_inv_t(&self, k: usize) -> Option<Laurent> {
        // (1 - t^-1)^k = t^-k (t - 1)^k = (-1)^k t^-k (1 - t)^k
        let (low, p) = self.to_poly();
        let q = div_exact(&p, &pow_one_minus_t(k))?;
        let sign = if k.is_multiple_of(2) { 1 } else { -1 };
        Some(Laurent::from_poly(low + k as i32, &q).scale(sign))
    }

    fn scale(&self, s: i128) -> Laurent {
        Laurent::from_terms(self.terms.iter().map(|(&e, &c)| (e, s * c)))
    }

    /// Shifts to a symmetric exponent range and fixes the sign so the value
    /// at 1 is positive. `None` if no shift makes the polynomial symmetric.
    pub fn symmetrize(&self) -> Option<Laurent> {
        let (low, p) = self.to_poly();
        let _ = low;
        let span = p.len() as i32 - 1;
        if span % 2 != 0 {
            return None;
        }
        let out = Laurent::from_poly(-span / 2, &p);
        let out = if out.eval_one() < 0 { out.scale(-1) } else { out };
        out.is_symmetric().then_some(out)
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&e, &c)| match e {
                0 => format!("{c}"),
                1 => format!("{c}t"),
                _ => format!("{c}t^{e}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Winding number of the grid projection around the lattice point `(i, j)`.
pub fn winding_number(d: &GridDiagram, i: usize, j: usize) -> i32 {
    (i..d.n())
        .filter(|&c| {
            let (o, x) = (d.o()[c], d.x()[c]);
            o.min(x) < j && j <= o.max(x)
        })
        .map(|c| if d.o()[c] > d.x()[c] { 1 } else { -1 })
        .sum()
}

/// Symmetrized Alexander polynomial with `Δ(1) = 1`.
pub fn alexander_polynomial(d: &GridDiagram) -> Laurent {
    let n = d.n();
    let mut m = Vec::with_capacity(n);
    for i in 0..n {
        let w: Vec<i32> = (0..n).map(|j| winding_number(d, i, j)).collect();
        let lo = *w.iter().min().unwrap();
        m.push(
            w.iter()
                .map(|&e| {
                    let mut p = vec![0; (e - lo) as usize + 1];
                    p[(e - lo) as usize] = 1;
                    p
                })
                .collect::<Vec<Poly>>(),
        );
    }
    let det = bareiss(m);
    let delta = div_exact(&det, &pow_one_minus_t(n - 1)).expect("(1-t)^(n-1) divides the determinant");
    Laurent::from_poly(0, &delta)
        .symmetrize()
        .expect("Alexander polynomials are symmetric")
}
