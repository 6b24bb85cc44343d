//! Periodic domains and weak admissibility.

use crate::diagram::CurveDiagram;
use crate::domain::DomainVector;
use crate::linalg::{self, nullspace, primitive, rref};
use crate::{HeegaardError, Rational};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Basis of the domains with `n_z = 0` whose boundary is a combination of
/// whole curves from `families` and avoids every other curve.
///
/// The basis is brought to a normal form: rows are reduced against their
/// boundary coefficients with the curves of `eliminate` first, so each of
/// those curves appears in the boundary of at most one basis element. The
/// result does not depend on how the nullspace was found.
pub fn periodic_domain_basis(
    d: &CurveDiagram,
    families: &[&str],
    eliminate: &[&str],
) -> Result<Vec<DomainVector>, HeegaardError> {
    let nr = d.regions.len();
    let z = d.z_regions();
    if z.is_empty() {
        return Err(HeegaardError::NoBasepoint);
    }
    let unit = |pairs: &[(usize, i64)]| {
        let mut row = vec![Rational::zero(); nr];
        for &(r, k) in pairs {
            row[r] += Rational::from_integer(k.into());
        }
        row
    };
    let mut rows: Vec<Vec<Rational>> = z.iter().map(|&r| unit(&[(r, 1)])).collect();
    let mut boundary_curves = Vec::new();
    for (ci, c) in d.curves.iter().enumerate() {
        let coeff = |e: &crate::diagram::Edge| [(e.left, 1), (e.right, -1)];
        if families.contains(&c.family.as_str()) {
            boundary_curves.push(ci);
            for w in c.edges.windows(2) {
                let [a, b] = [coeff(&w[0]), coeff(&w[1])];
                rows.push(unit(&[a[0], a[1], (b[0].0, -1), (b[1].0, 1)]));
            }
        } else {
            for e in &c.edges {
                rows.push(unit(&coeff(e)));
            }
        }
    }
    let kernel = nullspace(rows, nr);

    // boundary coefficient of each kernel vector on each selected curve,
    // eliminated curves first
    let mut order: Vec<usize> = Vec::new();
    for name in eliminate {
        let c = d.curve(name)?;
        if !boundary_curves.contains(&c) {
            return Err(HeegaardError::NotInFamilies(name.to_string()));
        }
        if !order.contains(&c) {
            order.push(c);
        }
    }
    let rest: Vec<usize> = boundary_curves.iter().copied().filter(|c| !order.contains(c)).collect();
    order.extend(rest);
    let mut table: Vec<Vec<Rational>> = kernel
        .iter()
        .map(|v| {
            let mut row: Vec<Rational> = order
                .iter()
                .map(|&c| {
                    let e = &d.curves[c].edges[0];
                    &v[e.left] - &v[e.right]
                })
                .collect();
            row.extend(v.iter().cloned());
            row
        })
        .collect();
    rref(&mut table);
    table
        .iter()
        .map(|row| {
            let v = primitive(&row[order.len()..])?;
            Ok(DomainVector::from_dense(d, &v))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Admissibility {
    Admissible,
    /// A nontrivial combination of the basis with one sign everywhere.
    Inadmissible {
        coefficients: Vec<i64>,
        domain: DomainVector,
    },
}

impl Admissibility {
    pub fn is_admissible(&self) -> bool {
        matches!(self, Admissibility::Admissible)
    }
}

/// `coeffs . c >= rhs`
#[derive(Clone, Debug, PartialEq, Eq)]
struct Ineq {
    coeffs: Vec<Rational>,
    rhs: Rational,
}

impl Ineq {
    /// Scales so the first nonzero entry has absolute value 1.
    fn normalized(mut self) -> Self {
        if let Some(lead) = self.coeffs.iter().find(|x| !x.is_zero()).map(|x| x.abs()) {
            for x in &mut self.coeffs {
                *x = &*x / &lead;
            }
            self.rhs = &self.rhs / &lead;
        }
        self
    }
}

/// Feasibility of `A c >= b` by Fourier–Motzkin elimination, with a point
/// in the feasible set when it is nonempty.
fn fourier_motzkin(system: Vec<Ineq>, nvars: usize) -> Option<Vec<Rational>> {
    let mut stages = vec![system];
    for k in 0..nvars {
        let cur = stages.last().unwrap();
        let mut next: Vec<Ineq> = Vec::new();
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for q in cur {
            if q.coeffs[k].is_positive() {
                pos.push(q);
            } else if q.coeffs[k].is_negative() {
                neg.push(q);
            } else {
                next.push(q.clone());
            }
        }
        for p in &pos {
            for n in &neg {
                let (a, b) = (n.coeffs[k].abs(), p.coeffs[k].clone());
                let coeffs = p.coeffs.iter().zip(&n.coeffs).map(|(x, y)| x * &a + y * &b).collect();
                next.push(
                    Ineq {
                        coeffs,
                        rhs: &p.rhs * &a + &n.rhs * &b,
                    }
                    .normalized(),
                );
            }
        }
        next.sort_by(|x, y| x.coeffs.cmp(&y.coeffs).then(y.rhs.cmp(&x.rhs)));
        // among parallel constraints only the strongest matters
        next.dedup_by(|later, earlier| later.coeffs == earlier.coeffs);
        stages.push(next);
    }
    if stages[nvars].iter().any(|q| q.rhs.is_positive()) {
        return None;
    }
    let mut c = vec![Rational::zero(); nvars];
    for k in (0..nvars).rev() {
        let (mut lo, mut hi): (Option<Rational>, Option<Rational>) = (None, None);
        for q in &stages[k] {
            let a = &q.coeffs[k];
            if a.is_zero() {
                continue;
            }
            let rest: Rational = (k + 1..nvars).map(|j| &q.coeffs[j] * &c[j]).sum();
            let bound = (&q.rhs - rest) / a;
            if a.is_positive() {
                lo = Some(lo.map_or(bound.clone(), |l| l.max(bound)));
            } else {
                hi = Some(hi.map_or(bound.clone(), |h| h.min(bound)));
            }
        }
        c[k] = lo.or(hi).unwrap_or_else(Rational::zero);
    }
    Some(c)
}

/// Decides whether some nonzero combination of `basis` has all
/// multiplicities of one sign. Exact; no search bound.
pub fn is_weakly_admissible(d: &CurveDiagram, basis: &[DomainVector]) -> Result<Admissibility, HeegaardError> {
    let m = basis.len();
    if m == 0 {
        return Ok(Admissibility::Admissible);
    }
    let cols: Vec<Vec<i64>> = basis.iter().map(|b| b.dense(d)).collect::<Result<_, _>>()?;
    let q = |k: i64| Rational::from_integer(k.into());
    // D = sum c_i B_i >= 0 in every region and sum of multiplicities >= 1;
    // nonpositive domains are the negatives of these
    let mut system: Vec<Ineq> = (0..d.regions.len())
        .map(|r| Ineq {
            coeffs: cols.iter().map(|b| q(b[r])).collect(),
            rhs: Rational::zero(),
        })
        .collect();
    system.push(Ineq {
        coeffs: cols.iter().map(|b| q(b.iter().sum())).collect(),
        rhs: Rational::one(),
    });
    let Some(c) = fourier_motzkin(system, m) else {
        return Ok(Admissibility::Admissible);
    };
    let coefficients = primitive(&c)?;
    let mut dense = vec![0i64; d.regions.len()];
    for (k, b) in coefficients.iter().zip(&cols) {
        for (x, y) in dense.iter_mut().zip(b) {
            *x = x
                .checked_add(k.checked_mul(*y).ok_or(HeegaardError::Overflow)?)
                .ok_or(HeegaardError::Overflow)?;
        }
    }
    debug_assert!(linalg::is_nonnegative(&dense.iter().map(|&k| q(k)).collect::<Vec<_>>()));
    Ok(Admissibility::Inadmissible {
        coefficients,
        domain: DomainVector::from_dense(d, &dense),
    })
}
