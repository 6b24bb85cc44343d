//! Incidence data for a pointed Heegaard (multi-)diagram.
//!
//! The surface itself is never stored. A diagram is a list of regions with
//! their Euler measures, intersection points with the two curves through
//! each, the number of corners each region has at each point, and for every
//! attaching curve the cyclic sequence of its edges with the regions on
//! either side.

use crate::{HeegaardError, Rational};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawDiagram {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub surface_euler: i64,
    pub regions: Vec<RawRegion>,
    #[serde(default)]
    pub points: Vec<RawPoint>,
    #[serde(default)]
    pub corners: Vec<RawCorner>,
    pub curves: Vec<RawCurve>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawRegion {
    pub name: String,
    /// Exact fraction such as `"-3/2"`.
    pub euler: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub basepoints: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawPoint {
    pub name: String,
    pub curves: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawCorner {
    pub region: String,
    pub point: String,
    pub count: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawCurve {
    pub name: String,
    pub family: String,
    pub edges: Vec<RawEdge>,
}

/// `from`/`to` are omitted for a curve that meets nothing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawEdge {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub from: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub to: Option<String>,
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub name: String,
    pub euler: Rational,
    pub basepoints: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Point {
    pub name: String,
    pub curves: [usize; 2],
    /// `(region, count)` with positive counts summing to 4.
    pub corners: Vec<(usize, u8)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: Option<usize>,
    pub to: Option<usize>,
    pub left: usize,
    pub right: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curve {
    pub name: String,
    pub family: String,
    pub edges: Vec<Edge>,
}

/// A validated diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveDiagram {
    pub name: Option<String>,
    pub surface_euler: i64,
    pub regions: Vec<Region>,
    pub points: Vec<Point>,
    pub curves: Vec<Curve>,
    region_index: HashMap<String, usize>,
    point_index: HashMap<String, usize>,
    curve_index: HashMap<String, usize>,
}

pub fn parse_fraction(s: &str) -> Result<Rational, HeegaardError> {
    let bad = || HeegaardError::BadFraction(s.to_string());
    let (num, den) = match s.trim().split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

pub fn format_fraction(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn index_of<'a>(
    names: impl Iterator<Item = &'a String>,
    kind: &'static str,
) -> Result<HashMap<String, usize>, HeegaardError> {
    let mut out = HashMap::new();
    for (i, n) in names.enumerate() {
        if out.insert(n.clone(), i).is_some() {
            return Err(HeegaardError::Duplicate { kind, name: n.clone() });
        }
    }
    Ok(out)
}

fn lookup(map: &HashMap<String, usize>, kind: &'static str, name: &str) -> Result<usize, HeegaardError> {
    map.get(name).copied().ok_or_else(|| HeegaardError::Unknown {
        kind,
        name: name.to_string(),
    })
}

impl CurveDiagram {
    pub fn from_raw(raw: &RawDiagram) -> Result<Self, HeegaardError> {
        let region_index = index_of(raw.regions.iter().map(|r| &r.name), "region")?;
        let point_index = index_of(raw.points.iter().map(|p| &p.name), "point")?;
        let curve_index = index_of(raw.curves.iter().map(|c| &c.name), "curve")?;

        let regions = raw
            .regions
            .iter()
            .map(|r| {
                Ok(Region {
                    name: r.name.clone(),
                    euler: parse_fraction(&r.euler)?,
                    basepoints: r.basepoints.clone(),
                })
            })
            .collect::<Result<Vec<_>, HeegaardError>>()?;

        let mut points = Vec::with_capacity(raw.points.len());
        for p in &raw.points {
            if p.curves.len() != 2 {
                return Err(HeegaardError::PointCurves(p.name.clone()));
            }
            let a = lookup(&curve_index, "curve", &p.curves[0])?;
            let b = lookup(&curve_index, "curve", &p.curves[1])?;
            if raw.curves[a].family == raw.curves[b].family {
                return Err(HeegaardError::NotTransverse(p.name.clone()));
            }
            points.push(Point {
                name: p.name.clone(),
                curves: [a, b],
                corners: Vec::new(),
            });
        }
        for c in &raw.corners {
            let r = lookup(&region_index, "region", &c.region)?;
            let p = lookup(&point_index, "point", &c.point)?;
            if c.count == 0 {
                continue;
            }
            let slot = &mut points[p].corners;
            match slot.iter_mut().find(|(q, _)| *q == r) {
                Some(e) => e.1 += c.count,
                None => slot.push((r, c.count)),
            }
        }
        for p in &mut points {
            p.corners.sort_unstable();
            let total: u32 = p.corners.iter().map(|&(_, k)| k as u32).sum();
            if total != 4 {
                return Err(HeegaardError::CornerSum {
                    point: p.name.clone(),
                    total,
                });
            }
        }

        let mut curves = Vec::with_capacity(raw.curves.len());
        for c in &raw.curves {
            let mut edges = Vec::with_capacity(c.edges.len());
            for e in &c.edges {
                let end = |s: &Option<String>| s.as_deref().map(|s| lookup(&point_index, "point", s)).transpose();
                edges.push(Edge {
                    from: end(&e.from)?,
                    to: end(&e.to)?,
                    left: lookup(&region_index, "region", &e.left)?,
                    right: lookup(&region_index, "region", &e.right)?,
                });
            }
            curves.push(Curve {
                name: c.name.clone(),
                family: c.family.clone(),
                edges,
            });
        }

        let d = CurveDiagram {
            name: raw.name.clone(),
            surface_euler: raw.surface_euler,
            regions,
            points,
            curves,
            region_index,
            point_index,
            curve_index,
        };
        d.check_curves()?;
        d.check_quadrants()?;
        let total: Rational = d.regions.iter().map(|r| r.euler.clone()).sum();
        if total != Rational::from_integer(d.surface_euler.into()) {
            return Err(HeegaardError::EulerSum {
                expected: d.surface_euler,
                found: format_fraction(&total),
            });
        }
        Ok(d)
    }

    /// Every curve is a closed cycle of edges through exactly the points
    /// that name it, each visited once.
    fn check_curves(&self) -> Result<(), HeegaardError> {
        for (ci, c) in self.curves.iter().enumerate() {
            let bad = || HeegaardError::CurveCycle(c.name.clone());
            let on: Vec<usize> = (0..self.points.len())
                .filter(|&p| self.points[p].curves.contains(&ci))
                .collect();
            if c.edges.is_empty() {
                return Err(bad());
            }
            if on.is_empty() {
                if c.edges.len() != 1 || c.edges[0].from.is_some() || c.edges[0].to.is_some() {
                    return Err(bad());
                }
                continue;
            }
            if c.edges.len() != on.len() {
                return Err(bad());
            }
            let mut seen = vec![false; self.points.len()];
            for (i, e) in c.edges.iter().enumerate() {
                let next = &c.edges[(i + 1) % c.edges.len()];
                let (Some(to), Some(from)) = (e.to, next.from) else {
                    return Err(bad());
                };
                if to != from || !on.contains(&to) || seen[to] {
                    return Err(bad());
                }
                seen[to] = true;
            }
        }
        Ok(())
    }

    /// The regions around each crossing must be the four quadrants cut out by
    /// the incoming and outgoing edges of both curves, for one of the two
    /// crossing signs.
    fn check_quadrants(&self) -> Result<(), HeegaardError> {
        for (pi, p) in self.points.iter().enumerate() {
            let [(a_in, a_out), (b_in, b_out)] = p.curves.map(|c| self.edges_at(c, pi));
            let positive = [
                (a_out.left, b_out.right),
                (a_in.left, b_out.left),
                (a_in.right, b_in.left),
                (a_out.right, b_in.right),
            ];
            let negative = [
                (a_out.left, b_in.left),
                (a_in.left, b_in.right),
                (a_in.right, b_out.right),
                (a_out.right, b_out.left),
            ];
            let ok = [positive, negative].iter().any(|quads| {
                if quads.iter().any(|(x, y)| x != y) {
                    return false;
                }
                let mut found: Vec<(usize, u8)> = Vec::new();
                for &(r, _) in quads {
                    match found.iter_mut().find(|(q, _)| *q == r) {
                        Some(e) => e.1 += 1,
                        None => found.push((r, 1)),
                    }
                }
                found.sort_unstable();
                found == p.corners
            });
            if !ok {
                return Err(HeegaardError::Quadrants(p.name.clone()));
            }
        }
        Ok(())
    }

    fn edges_at(&self, curve: usize, point: usize) -> (Edge, Edge) {
        let edges = &self.curves[curve].edges;
        let incoming = edges.iter().find(|e| e.to == Some(point)).copied();
        let outgoing = edges.iter().find(|e| e.from == Some(point)).copied();
        (
            incoming.expect("curve passes through point"),
            outgoing.expect("curve passes through point"),
        )
    }

    pub fn parse(text: &str) -> Result<Self, HeegaardError> {
        let raw: RawDiagram = serde_json::from_str(text).map_err(|e| HeegaardError::Json(e.to_string()))?;
        Self::from_raw(&raw)
    }

    pub fn to_raw(&self) -> RawDiagram {
        let pname = |p: Option<usize>| p.map(|i| self.points[i].name.clone());
        RawDiagram {
            name: self.name.clone(),
            surface_euler: self.surface_euler,
            regions: self
                .regions
                .iter()
                .map(|r| RawRegion {
                    name: r.name.clone(),
                    euler: format_fraction(&r.euler),
                    basepoints: r.basepoints.clone(),
                })
                .collect(),
            points: self
                .points
                .iter()
                .map(|p| RawPoint {
                    name: p.name.clone(),
                    curves: p.curves.iter().map(|&c| self.curves[c].name.clone()).collect(),
                })
                .collect(),
            corners: self
                .points
                .iter()
                .flat_map(|p| {
                    p.corners.iter().map(|&(r, count)| RawCorner {
                        region: self.regions[r].name.clone(),
                        point: p.name.clone(),
                        count,
                    })
                })
                .collect(),
            curves: self
                .curves
                .iter()
                .map(|c| RawCurve {
                    name: c.name.clone(),
                    family: c.family.clone(),
                    edges: c
                        .edges
                        .iter()
                        .map(|e| RawEdge {
                            from: pname(e.from),
                            to: pname(e.to),
                            left: self.regions[e.left].name.clone(),
                            right: self.regions[e.right].name.clone(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_raw()).expect("diagram serializes")
    }

    pub fn region(&self, name: &str) -> Result<usize, HeegaardError> {
        lookup(&self.region_index, "region", name)
    }

    pub fn point(&self, name: &str) -> Result<usize, HeegaardError> {
        lookup(&self.point_index, "point", name)
    }

    pub fn curve(&self, name: &str) -> Result<usize, HeegaardError> {
        lookup(&self.curve_index, "curve", name)
    }

    /// Family names in order of first appearance.
    pub fn families(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for c in &self.curves {
            if !out.contains(&c.family) {
                out.push(c.family.clone());
            }
        }
        out
    }

    pub fn curves_in(&self, family: &str) -> Vec<usize> {
        (0..self.curves.len())
            .filter(|&c| self.curves[c].family == family)
            .collect()
    }

    /// Regions carrying the basepoint `z`.
    pub fn z_regions(&self) -> Vec<usize> {
        (0..self.regions.len())
            .filter(|&r| self.regions[r].basepoints.iter().any(|b| b == "z"))
            .collect()
    }
}

impl std::str::FromStr for CurveDiagram {
    type Err = HeegaardError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}
