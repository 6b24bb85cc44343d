//! Domains, their Euler measure, point multiplicities and Chern pairings.

use crate::diagram::CurveDiagram;
use crate::{HeegaardError, Rational};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Integer multiplicity per region, keyed by region name.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DomainVector {
    pub mult: BTreeMap<String, i64>,
}

impl DomainVector {
    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, i64)>) -> Self {
        DomainVector {
            mult: pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        }
    }

    pub fn zero(d: &CurveDiagram) -> Self {
        Self::constant(d, 0)
    }

    /// The whole surface.
    pub fn whole(d: &CurveDiagram) -> Self {
        Self::constant(d, 1)
    }

    fn constant(d: &CurveDiagram, m: i64) -> Self {
        DomainVector {
            mult: d.regions.iter().map(|r| (r.name.clone(), m)).collect(),
        }
    }

    pub fn from_dense(d: &CurveDiagram, v: &[i64]) -> Self {
        DomainVector {
            mult: d.regions.iter().zip(v).map(|(r, &m)| (r.name.clone(), m)).collect(),
        }
    }

    /// Multiplicities in region order; every region must be present.
    pub fn dense(&self, d: &CurveDiagram) -> Result<Vec<i64>, HeegaardError> {
        for k in self.mult.keys() {
            d.region(k)?;
        }
        d.regions
            .iter()
            .map(|r| {
                self.mult
                    .get(&r.name)
                    .copied()
                    .ok_or_else(|| HeegaardError::MissingRegion(r.name.clone()))
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut mult = self.mult.clone();
        for (k, v) in &other.mult {
            *mult.entry(k.clone()).or_insert(0) += v;
        }
        DomainVector { mult }
    }

    pub fn scale(&self, k: i64) -> Self {
        DomainVector {
            mult: self.mult.iter().map(|(r, v)| (r.clone(), k * v)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mult.values().all(|&v| v == 0)
    }
}

pub fn euler_measure(d: &CurveDiagram, v: &DomainVector) -> Result<Rational, HeegaardError> {
    let m = v.dense(d)?;
    Ok(d.regions
        .iter()
        .zip(&m)
        .map(|(r, &k)| &r.euler * Rational::from_integer(k.into()))
        .sum())
}

pub fn point_multiplicity(d: &CurveDiagram, v: &DomainVector, p: &str) -> Result<Rational, HeegaardError> {
    let m = v.dense(d)?;
    Ok(corner_average(d, &m, d.point(p)?))
}

fn corner_average(d: &CurveDiagram, m: &[i64], p: usize) -> Rational {
    let sum: i64 = d.points[p].corners.iter().map(|&(r, k)| k as i64 * m[r]).sum();
    Rational::new(sum.into(), 4.into())
}

/// `n_x`, summed over the points of a tuple.
pub fn tuple_multiplicity(d: &CurveDiagram, v: &DomainVector, x: &[&str]) -> Result<Rational, HeegaardError> {
    let m = v.dense(d)?;
    let mut total = Rational::zero();
    for p in x {
        total += corner_average(d, &m, d.point(p)?);
    }
    Ok(total)
}

/// Boundary coefficient on every edge of every curve: the multiplicity on
/// the left minus the one on the right.
pub fn edge_boundary(d: &CurveDiagram, v: &DomainVector) -> Result<Vec<Vec<i64>>, HeegaardError> {
    let m = v.dense(d)?;
    Ok(d.curves
        .iter()
        .map(|c| c.edges.iter().map(|e| m[e.left] - m[e.right]).collect())
        .collect())
}

/// The boundary as a combination of whole curves, if it is one.
pub fn periodic_boundary(d: &CurveDiagram, v: &DomainVector) -> Result<Option<BTreeMap<String, i64>>, HeegaardError> {
    let eb = edge_boundary(d, v)?;
    let mut out = BTreeMap::new();
    for (c, coeffs) in d.curves.iter().zip(&eb) {
        if coeffs.iter().any(|&k| k != coeffs[0]) {
            return Ok(None);
        }
        if coeffs[0] != 0 {
            out.insert(c.name.clone(), coeffs[0]);
        }
    }
    Ok(Some(out))
}

/// Checks that `x` is a generator for some pair of families: one point on
/// every curve of exactly two families. Returns those families.
pub fn generator_families(d: &CurveDiagram, x: &[&str]) -> Result<(String, String), HeegaardError> {
    let bad = |why: &str| HeegaardError::NotGenerator(why.to_string());
    let mut used = vec![false; d.curves.len()];
    let mut fams: Vec<String> = Vec::new();
    for name in x {
        let p = d.point(name)?;
        for &c in &d.points[p].curves {
            if used[c] {
                return Err(bad(&format!("curve {} used twice", d.curves[c].name)));
            }
            used[c] = true;
            if !fams.contains(&d.curves[c].family) {
                fams.push(d.curves[c].family.clone());
            }
        }
    }
    if fams.len() != 2 {
        return Err(bad("points must pair exactly two families"));
    }
    for f in &fams {
        if d.curves_in(f).iter().any(|&c| !used[c]) {
            return Err(bad(&format!("family {f} is not covered")));
        }
    }
    fams.sort();
    Ok((fams[0].clone(), fams[1].clone()))
}

/// All generators for the families `a` and `b`, as point-name tuples listed
/// in the order of the curves of `a`.
pub fn generators(d: &CurveDiagram, a: &str, b: &str) -> Vec<Vec<String>> {
    let ca = d.curves_in(a);
    let cb = d.curves_in(b);
    if ca.len() != cb.len() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut used = vec![false; d.curves.len()];
    let mut cur = Vec::new();
    fn rec(
        d: &CurveDiagram,
        ca: &[usize],
        b: &str,
        used: &mut [bool],
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<String>>,
    ) {
        let Some(&alpha) = ca.get(cur.len()) else {
            out.push(cur.iter().map(|&p| d.points[p].name.clone()).collect());
            return;
        };
        for (p, pt) in d.points.iter().enumerate() {
            let Some(&other) = pt.curves.iter().find(|&&c| c != alpha) else {
                continue;
            };
            if !pt.curves.contains(&alpha) || d.curves[other].family != b || used[other] {
                continue;
            }
            used[other] = true;
            cur.push(p);
            rec(d, ca, b, used, cur, out);
            cur.pop();
            used[other] = false;
        }
    }
    rec(d, &ca, b, &mut used, &mut cur, &mut out);
    out
}

/// `e(P) + 2 n_x(P)` for a periodic domain `P` and a generator `x`.
pub fn chern_pairing(d: &CurveDiagram, p: &DomainVector, x: &[&str]) -> Result<i64, HeegaardError> {
    if periodic_boundary(d, p)?.is_none() {
        return Err(HeegaardError::NotPeriodic);
    }
    generator_families(d, x)?;
    let value = euler_measure(d, p)? + Rational::from_integer(2.into()) * tuple_multiplicity(d, p, x)?;
    if !value.denom().is_one() {
        return Err(HeegaardError::NotIntegral(crate::diagram::format_fraction(&value)));
    }
    value.to_integer().to_i64().ok_or(HeegaardError::Overflow)
}

/// The Maslov index of a periodic domain read at `x`; the same quantity as
/// [`chern_pairing`].
pub fn maslov_of_periodic(d: &CurveDiagram, p: &DomainVector, x: &[&str]) -> Result<i64, HeegaardError> {
    chern_pairing(d, p, x)
}
