//! The finite abelian group `E(F_q)` in coordinates `Z/d x Z/e`.
//!
//! Group elements are handled as codes `i * e + j` standing for
//! `i g1 + j g2`, so the group law is integer arithmetic. Curve-derived
//! tables keep the point behind every code.

mod sumset;
mod theory;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::{Curve, CurveError, Point};

pub use sumset::{k_sumset, k_sumset_witness, Sumset};
pub use theory::{admissible_traces, isqrt, gcd_plus_minus, is_admissible, possible_structures, predict_cyclic_binary_maximal};

/// Largest group that gets a full table.
pub const TABLE_BUDGET: u64 = 1 << 14;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("group of order {0} exceeds the table budget")]
    BudgetExceeded(u64),
    #[error("sumset input repeats an element")]
    DuplicateElements,
    #[error("k = {k} is outside 0..={n}")]
    BadK { k: usize, n: usize },
    #[error("invariant factors ({d}, {e}) are invalid")]
    BadFactors { d: u64, e: u64 },
    #[error("no elliptic curve over GF({q}) has {n} points")]
    InadmissibleCount { q: u64, n: u64 },
    #[error("computed structure ({d}, {e}) is not among the possible ones")]
    StructureMismatch { d: u64, e: u64 },
    #[error("point is not in the group")]
    UnknownPoint,
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// An element of a [`GroupTable`]: the code `i * e + j`.
pub type Elem = u32;

#[derive(Clone, Debug)]
pub struct GroupTable {
    d: u32,
    e: u32,
    curve: Option<CurveData>,
}

#[derive(Clone, Debug)]
struct CurveData {
    /// Points by code.
    points: Vec<Point>,
    codes: HashMap<Point, Elem>,
    /// Points in enumeration order, O last.
    enumeration: Vec<Point>,
}

impl GroupTable {
    /// The abstract group `Z/d x Z/e`, `d | e`.
    pub fn synthetic(d: u64, e: u64) -> Result<GroupTable, GroupError> {
        if d == 0 || e == 0 || e % d != 0 {
            return Err(GroupError::BadFactors { d, e });
        }
        if d * e > TABLE_BUDGET {
            return Err(GroupError::BudgetExceeded(d * e));
        }
        Ok(GroupTable { d: d as u32, e: e as u32, curve: None })
    }

    /// Structure and coordinates of the rational points of `curve`.
    pub fn from_curve(curve: &Curve) -> Result<GroupTable, GroupError> {
        let pts = curve.enumerate_points()?;
        let n = pts.len() as u64;
        if n > TABLE_BUDGET {
            return Err(GroupError::BudgetExceeded(n));
        }
        let m = curve.base();
        let primes = crate::field::prime_factors(n);
        let order_of = |p: &Point| {
            let mut ord = n;
            for &l in &primes {
                while ord % l == 0 && m.scalar_mul((ord / l) as i64, p).is_inf() {
                    ord /= l;
                }
            }
            ord
        };
        let orders: Vec<u64> = pts.iter().map(order_of).collect();
        let e = *orders.iter().max().expect("O is always present");
        let d = n / e;
        if e % d != 0 {
            return Err(GroupError::BadFactors { d, e });
        }

        // l-torsion ranks must agree with d
        for &l in &primes {
            let torsion = orders.iter().filter(|&&o| l % o == 0 || o == 1).count() as u64;
            let want = if d % l == 0 { l * l } else { l };
            assert_eq!(torsion, want, "{l}-torsion disagrees with the invariant factors");
        }

        let g2_pos = orders.iter().position(|&o| o == e).expect("an element of maximal order");
        let g2 = pts[g2_pos].clone();
        let mut cyclic: HashMap<Point, u64> = HashMap::with_capacity(e as usize);
        let mut cur = Point::Inf;
        for j in 0..e {
            cyclic.insert(cur.clone(), j);
            cur = m.add(&cur, &g2);
        }
        let g1 = if d == 1 {
            Point::Inf
        } else {
            pts.iter()
                .zip(&orders)
                .find(|(p, &o)| {
                    o == d && {
                        let mut c = (*p).clone();
                        (1..d).all(|_| {
                            let fresh = !cyclic.contains_key(&c);
                            c = m.add(&c, p);
                            fresh
                        })
                    }
                })
                .map(|(p, _)| p.clone())
                .expect("an independent element of order d")
        };

        let mut points = Vec::with_capacity(n as usize);
        let mut codes = HashMap::with_capacity(n as usize);
        let mut row = Point::Inf;
        for i in 0..d {
            let mut c = row.clone();
            for j in 0..e {
                codes.insert(c.clone(), (i * e + j) as Elem);
                points.push(c.clone());
                c = m.add(&c, &g2);
            }
            row = m.add(&row, &g1);
        }
        assert_eq!(codes.len() as u64, n, "coordinates are not a bijection");

        let f = curve.field();
        let (p, a) = (f.characteristic(), f.degree_over_prime());
        let possible = possible_structures(p, a, n)?;
        if !possible.contains(&(d, e)) || (f.order() - 1) % d != 0 {
            return Err(GroupError::StructureMismatch { d, e });
        }
        Ok(GroupTable {
            d: d as u32,
            e: e as u32,
            curve: Some(CurveData { points, codes, enumeration: pts }),
        })
    }

    pub fn order(&self) -> u64 {
        self.d as u64 * self.e as u64
    }

    /// Invariant factors `(d, e)`.
    pub fn invariants(&self) -> (u64, u64) {
        (self.d as u64, self.e as u64)
    }

    pub fn identity(&self) -> Elem {
        0
    }

    /// Generator of order `d`.
    pub fn g1(&self) -> Elem {
        if self.d == 1 {
            0
        } else {
            self.e
        }
    }

    /// Generator of order `e`.
    pub fn g2(&self) -> Elem {
        if self.e == 1 {
            0
        } else {
            1
        }
    }

    pub fn coords(&self, g: Elem) -> (u32, u32) {
        (g / self.e, g % self.e)
    }

    pub fn from_coords(&self, i: i64, j: i64) -> Elem {
        let i = i.rem_euclid(self.d as i64) as u32;
        let j = j.rem_euclid(self.e as i64) as u32;
        i * self.e + j
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..(self.d * self.e)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let (i1, j1) = self.coords(a);
        let (i2, j2) = self.coords(b);
        let i = (i1 + i2) % self.d;
        let j = (j1 + j2) % self.e;
        i * self.e + j
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        let (i, j) = self.coords(a);
        ((self.d - i) % self.d) * self.e + (self.e - j) % self.e
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, k: i64, a: Elem) -> Elem {
        let (i, j) = self.coords(a);
        self.from_coords(k.rem_euclid(self.d as i64) * i as i64, k.rem_euclid(self.e as i64) * j as i64)
    }

    pub fn elem_order(&self, a: Elem) -> u64 {
        let (i, j) = self.coords(a);
        let oi = self.d as u64 / gcd(i as u64, self.d as u64);
        let oj = self.e as u64 / gcd(j as u64, self.e as u64);
        oi / gcd(oi, oj) * oj
    }

    /// `{g : 2g = 0}`.
    pub fn two_torsion(&self) -> Vec<Elem> {
        let mut out = Vec::new();
        for i in [0, self.d / 2] {
            for j in [0, self.e / 2] {
                let g = i * self.e + j;
                if self.add(g, g) == 0 && !out.contains(&g) {
                    out.push(g);
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn is_curve_table(&self) -> bool {
        self.curve.is_some()
    }

    /// The point with code `g` (curve tables only).
    pub fn point(&self, g: Elem) -> &Point {
        &self.curve.as_ref().expect("curve-derived table").points[g as usize]
    }

    /// Code of a rational point.
    pub fn code(&self, p: &Point) -> Result<Elem, GroupError> {
        let data = self.curve.as_ref().expect("curve-derived table");
        data.codes.get(p).copied().ok_or(GroupError::UnknownPoint)
    }

    /// Rational points in enumeration order.
    pub fn enumeration(&self) -> &[Point] {
        &self.curve.as_ref().expect("curve-derived table").enumeration
    }
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The index-2 subgroup `{(i, j) : c1 i + c2 j = 0 mod 2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Index2Subgroup {
    pub c1: u8,
    pub c2: u8,
}

impl Index2Subgroup {
    pub fn contains(&self, g: &GroupTable, a: Elem) -> bool {
        let (i, j) = g.coords(a);
        (self.c1 as u32 * i + self.c2 as u32 * j) % 2 == 0
    }

    pub fn members(&self, g: &GroupTable) -> Vec<Elem> {
        g.elements().filter(|&a| self.contains(g, a)).collect()
    }

    /// The other coset.
    pub fn complement(&self, g: &GroupTable) -> Vec<Elem> {
        g.elements().filter(|&a| !self.contains(g, a)).collect()
    }
}

/// Kernels of the nontrivial characters to `Z/2`, in the order
/// `(0,1), (1,0), (1,1)`.
pub fn index2_subgroups(g: &GroupTable) -> Vec<Index2Subgroup> {
    let (d, e) = g.invariants();
    [(0u8, 1u8), (1, 0), (1, 1)]
        .into_iter()
        .filter(|&(c1, c2)| (c1 == 0 || d % 2 == 0) && (c2 == 0 || e % 2 == 0))
        .map(|(c1, c2)| Index2Subgroup { c1, c2 })
        .collect()
}
