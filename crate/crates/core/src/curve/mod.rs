//! Elliptic curves in long Weierstrass form
//! `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`.

mod search;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{extend_field, make_field, ElemJson, Field, FieldElem, FieldError, FieldId, FieldSpec};

pub use search::{find_curve, SearchStrategy};

/// Largest base field whose points are enumerated one by one.
pub const ENUMERATION_BUDGET: u64 = 1 << 13;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("curve is singular")]
    SingularCurve,
    #[error("point is not on the curve")]
    PointNotOnCurve,
    #[error("points live over different fields")]
    MixedContexts,
    #[error("field of order {0} exceeds the enumeration budget")]
    FieldTooLarge(u64),
    #[error("no elliptic curve over GF({q}) has {n} points")]
    InadmissibleCount { q: u64, n: u64 },
    #[error("no curve with {0} points found in the search space")]
    SearchExhausted(u64),
    #[error("no maximal family covers GF({p}^{a}) with {n} points")]
    NoFamily { p: u32, a: u32, n: u64 },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A point over the base field or one of its extensions. `Affine < Inf`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Affine { x: FieldElem, y: FieldElem },
    Inf,
}

impl Point {
    pub fn affine(x: FieldElem, y: FieldElem) -> Point {
        Point::Affine { x, y }
    }

    pub fn is_inf(&self) -> bool {
        matches!(self, Point::Inf)
    }

    pub fn x(&self) -> Option<&FieldElem> {
        match self {
            Point::Affine { x, .. } => Some(x),
            Point::Inf => None,
        }
    }

    pub fn y(&self) -> Option<&FieldElem> {
        match self {
            Point::Affine { y, .. } => Some(y),
            Point::Inf => None,
        }
    }

    /// Field of the coordinates, `None` for the point at infinity.
    pub fn field_id(&self) -> Option<FieldId> {
        self.x().map(|x| x.field_id())
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Inf => write!(f, "O"),
            Point::Affine { x, y } => write!(f, "({x:?}, {y:?})"),
        }
    }
}

/// The curve's coefficients viewed over one particular field.
pub struct Model {
    pub field: Field,
    pub a1: FieldElem,
    pub a2: FieldElem,
    pub a3: FieldElem,
    pub a4: FieldElem,
    pub a6: FieldElem,
}

/// A line `y = lambda x + nu`, a vertical `x = gamma`, or the constant 1
/// (the "line" through O and O).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LineKind {
    Slope { lambda: FieldElem, nu: FieldElem },
    Vertical { gamma: FieldElem },
    One,
}

impl Model {
    fn new(field: Field, a: [FieldElem; 5]) -> Model {
        let [a1, a2, a3, a4, a6] = a;
        Model { field, a1, a2, a3, a4, a6 }
    }

    fn lifted(&self, ext: &Field) -> Model {
        let l = |e: &FieldElem| ext.embed(e);
        Model::new(ext.clone(), [l(&self.a1), l(&self.a2), l(&self.a3), l(&self.a4), l(&self.a6)])
    }

    pub fn coeffs(&self) -> [&FieldElem; 5] {
        [&self.a1, &self.a2, &self.a3, &self.a4, &self.a6]
    }

    pub fn b_invariants(&self) -> [FieldElem; 4] {
        let f = &self.field;
        let b2 = f.add(&f.square(&self.a1), &f.mul_int(&self.a2, 4));
        let b4 = f.add(&f.mul_int(&self.a4, 2), &f.mul(&self.a1, &self.a3));
        let b6 = f.add(&f.square(&self.a3), &f.mul_int(&self.a6, 4));
        let b8 = {
            let t1 = f.mul(&f.square(&self.a1), &self.a6);
            let t2 = f.mul_int(&f.mul(&self.a2, &self.a6), 4);
            let t3 = f.mul(&f.mul(&self.a1, &self.a3), &self.a4);
            let t4 = f.mul(&self.a2, &f.square(&self.a3));
            let t5 = f.square(&self.a4);
            f.sub(&f.add(&f.sub(&f.add(&t1, &t2), &t3), &t4), &t5)
        };
        [b2, b4, b6, b8]
    }

    pub fn discriminant(&self) -> FieldElem {
        let f = &self.field;
        let [b2, b4, b6, b8] = self.b_invariants();
        let t1 = f.neg(&f.mul(&f.square(&b2), &b8));
        let t2 = f.mul_int(&f.mul(&f.square(&b4), &b4), 8);
        let t3 = f.mul_int(&f.square(&b6), 27);
        let t4 = f.mul_int(&f.mul(&f.mul(&b2, &b4), &b6), 9);
        f.add(&f.sub(&f.sub(&t1, &t2), &t3), &t4)
    }

    /// `x^3 + a2 x^2 + a4 x + a6`.
    pub fn rhs(&self, x: &FieldElem) -> FieldElem {
        let f = &self.field;
        let t = f.add(&f.mul(&f.add(x, &self.a2), x), &self.a4);
        f.add(&f.mul(&t, x), &self.a6)
    }

    /// `y^2 + a1 xy + a3 y - rhs(x)`.
    pub fn equation(&self, x: &FieldElem, y: &FieldElem) -> FieldElem {
        let f = &self.field;
        let lhs = f.mul(y, &f.add(&f.add(y, &f.mul(&self.a1, x)), &self.a3));
        f.sub(&lhs, &self.rhs(x))
    }

    pub fn contains(&self, p: &Point) -> bool {
        match p {
            Point::Inf => true,
            Point::Affine { x, y } => {
                x.field_id() == self.field.id()
                    && y.field_id() == self.field.id()
                    && self.field.is_zero(&self.equation(x, y))
            }
        }
    }

    /// The `y` values over `x`.
    pub fn ys_over(&self, x: &FieldElem) -> Vec<FieldElem> {
        let f = &self.field;
        let b = f.add(&f.mul(&self.a1, x), &self.a3);
        let c = f.neg(&self.rhs(x));
        crate::field::solve_quadratic(f, &f.one(), &b, &c).expect("monic quadratic")
    }

    pub fn neg(&self, p: &Point) -> Point {
        match p {
            Point::Inf => Point::Inf,
            Point::Affine { x, y } => {
                let f = &self.field;
                let ny = f.sub(&f.neg(y), &f.add(&f.mul(&self.a1, x), &self.a3));
                Point::affine(x.clone(), ny)
            }
        }
    }

    /// The line through `p` and `q` (tangent when equal) and the sum `p + q`.
    pub fn line_and_sum(&self, p: &Point, q: &Point) -> (LineKind, Point) {
        let f = &self.field;
        let (x1, y1, x2, y2) = match (p, q) {
            (Point::Inf, Point::Inf) => return (LineKind::One, Point::Inf),
            (Point::Inf, Point::Affine { x, .. }) | (Point::Affine { x, .. }, Point::Inf) => {
                let s = if p.is_inf() { q.clone() } else { p.clone() };
                return (LineKind::Vertical { gamma: x.clone() }, s);
            }
            (Point::Affine { x: x1, y: y1 }, Point::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let (lambda, nu) = if x1 != x2 {
            let dx = f.inv(&f.sub(x2, x1)).expect("distinct x");
            let lambda = f.mul(&f.sub(y2, y1), &dx);
            let nu = f.mul(&f.sub(&f.mul(y1, x2), &f.mul(y2, x1)), &dx);
            (lambda, nu)
        } else {
            let s = f.add(&f.add(y1, y2), &f.add(&f.mul(&self.a1, x2), &self.a3));
            if f.is_zero(&s) {
                return (LineKind::Vertical { gamma: x1.clone() }, Point::Inf);
            }
            // p == q, and the tangent is not vertical
            let den = f.inv(&f.add(&f.add(&f.mul_int(y1, 2), &f.mul(&self.a1, x1)), &self.a3)).expect("non-vertical tangent");
            let x1sq = f.square(x1);
            let num_l = f.sub(
                &f.add(&f.add(&f.mul_int(&x1sq, 3), &f.mul_int(&f.mul(&self.a2, x1), 2)), &self.a4),
                &f.mul(&self.a1, y1),
            );
            let num_n = f.sub(
                &f.add(&f.add(&f.neg(&f.mul(&x1sq, x1)), &f.mul(&self.a4, x1)), &f.mul_int(&self.a6, 2)),
                &f.mul(&self.a3, y1),
            );
            (f.mul(&num_l, &den), f.mul(&num_n, &den))
        };
        let x3 = f.sub(&f.sub(&f.sub(&f.add(&f.square(&lambda), &f.mul(&self.a1, &lambda)), &self.a2), x1), x2);
        let y3 = f.sub(&f.sub(&f.neg(&f.mul(&f.add(&lambda, &self.a1), &x3)), &nu), &self.a3);
        (LineKind::Slope { lambda, nu }, Point::affine(x3, y3))
    }

    pub fn add(&self, p: &Point, q: &Point) -> Point {
        self.line_and_sum(p, q).1
    }

    pub fn sub(&self, p: &Point, q: &Point) -> Point {
        self.add(p, &self.neg(q))
    }

    pub fn double(&self, p: &Point) -> Point {
        self.add(p, p)
    }

    pub fn scalar_mul(&self, m: i64, p: &Point) -> Point {
        let base = if m < 0 { self.neg(p) } else { p.clone() };
        let mut k = m.unsigned_abs();
        let mut acc = Point::Inf;
        let mut cur = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &cur);
            }
            k >>= 1;
            if k > 0 {
                cur = self.double(&cur);
            }
        }
        acc
    }

    /// Relative Frobenius on coordinates.
    pub fn frobenius(&self, p: &Point) -> Point {
        match p {
            Point::Inf => Point::Inf,
            Point::Affine { x, y } => Point::affine(self.field.frobenius(x), self.field.frobenius(y)),
        }
    }
}

struct CurveInner {
    base: Arc<Model>,
    exts: Mutex<BTreeMap<usize, Arc<Model>>>,
}

/// An elliptic curve over a base field, with cached models over extensions.
#[derive(Clone)]
pub struct Curve(Arc<CurveInner>);

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.0.base;
        write!(f, "E[{:?}, {:?}, {:?}, {:?}, {:?}] over {:?}", m.a1, m.a2, m.a3, m.a4, m.a6, m.field)
    }
}

impl PartialEq for Curve {
    fn eq(&self, other: &Self) -> bool {
        self.field() == other.field() && self.coeffs() == other.coeffs()
    }
}

/// Build the curve `[a1, a2, a3, a4, a6]` over `field`.
pub fn make_curve(field: &Field, a: [FieldElem; 5]) -> Result<Curve, CurveError> {
    if a.iter().any(|e| e.field_id() != field.id()) {
        return Err(CurveError::MixedContexts);
    }
    let model = Model::new(field.clone(), a);
    if field.is_zero(&model.discriminant()) {
        return Err(CurveError::SingularCurve);
    }
    Ok(Curve(Arc::new(CurveInner { base: Arc::new(model), exts: Mutex::new(BTreeMap::new()) })))
}

impl Curve {
    pub fn field(&self) -> &Field {
        &self.0.base.field
    }

    pub fn base(&self) -> &Model {
        &self.0.base
    }

    pub fn q(&self) -> u64 {
        self.field().order()
    }

    pub fn coeffs(&self) -> [FieldElem; 5] {
        self.0.base.coeffs().map(|e| e.clone())
    }

    /// Model over the degree-`d` extension (the base model for `d = 1`).
    /// The extension field is built once per degree and shared.
    pub fn over(&self, d: usize) -> Result<Arc<Model>, CurveError> {
        if d == 1 {
            return Ok(self.0.base.clone());
        }
        let mut exts = self.0.exts.lock().expect("extension cache");
        if let Some(m) = exts.get(&d) {
            return Ok(m.clone());
        }
        let ext = extend_field(self.field(), d)?;
        let m = Arc::new(self.0.base.lifted(&ext));
        exts.insert(d, m.clone());
        Ok(m)
    }

    /// Model whose field matches the coordinates of `p` (base for O).
    pub fn model_of(&self, p: &Point) -> Result<Arc<Model>, CurveError> {
        match p.field_id() {
            None => Ok(self.0.base.clone()),
            Some(id) => self.model_by_id(id),
        }
    }

    pub fn model_by_id(&self, id: FieldId) -> Result<Arc<Model>, CurveError> {
        if id == self.field().id() {
            return Ok(self.0.base.clone());
        }
        let exts = self.0.exts.lock().expect("extension cache");
        exts.values().find(|m| m.field.id() == id).cloned().ok_or(CurveError::MixedContexts)
    }

    fn model_of_pair(&self, p: &Point, q: &Point) -> Result<Arc<Model>, CurveError> {
        match (p.field_id(), q.field_id()) {
            (Some(a), Some(b)) if a != b => Err(CurveError::MixedContexts),
            (Some(a), _) | (None, Some(a)) => self.model_by_id(a),
            (None, None) => Ok(self.0.base.clone()),
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.model_of(p).map(|m| m.contains(p)).unwrap_or(false)
    }

    fn check(&self, m: &Model, p: &Point) -> Result<(), CurveError> {
        if m.contains(p) {
            Ok(())
        } else {
            Err(CurveError::PointNotOnCurve)
        }
    }

    pub fn point_add(&self, p: &Point, q: &Point) -> Result<Point, CurveError> {
        let m = self.model_of_pair(p, q)?;
        self.check(&m, p)?;
        self.check(&m, q)?;
        Ok(m.add(p, q))
    }

    pub fn point_neg(&self, p: &Point) -> Result<Point, CurveError> {
        let m = self.model_of(p)?;
        self.check(&m, p)?;
        Ok(m.neg(p))
    }

    pub fn scalar_mul(&self, k: i64, p: &Point) -> Result<Point, CurveError> {
        let m = self.model_of(p)?;
        self.check(&m, p)?;
        Ok(m.scalar_mul(k, p))
    }

    /// Lift a point into the degree-`d` model.
    pub fn lift(&self, p: &Point, d: usize) -> Result<Point, CurveError> {
        let m = self.over(d)?;
        Ok(match p {
            Point::Inf => Point::Inf,
            Point::Affine { x, y } => Point::affine(m.field.lift(x), m.field.lift(y)),
        })
    }

    /// Project a point with base-field coordinates down from an extension.
    pub fn project(&self, p: &Point) -> Option<Point> {
        match p {
            Point::Inf => Some(Point::Inf),
            Point::Affine { x, y } => {
                let m = self.model_of(p).ok()?;
                Some(Point::affine(m.field.project(x)?, m.field.project(y)?))
            }
        }
    }

    /// All rational points: `x` in index order, roots sorted, then O.
    pub fn enumerate_points(&self) -> Result<Vec<Point>, CurveError> {
        let f = self.field();
        if f.is_extension() || f.order() > ENUMERATION_BUDGET {
            return Err(CurveError::FieldTooLarge(f.order()));
        }
        let m = self.base();
        let mut out = Vec::new();
        for x in f.elements() {
            for y in m.ys_over(&x) {
                out.push(Point::affine(x.clone(), y));
            }
        }
        out.push(Point::Inf);
        let n = out.len() as u64;
        assert!(hasse_ok(f.order(), n), "Hasse bound violated: q = {}, N = {n}", f.order());
        Ok(out)
    }

    /// Number of rational points, without listing them.
    pub fn count_points(&self) -> u64 {
        count_points_model(self.base())
    }

    pub fn to_json(&self) -> CurveJson {
        let f = self.field();
        let m = self.base();
        CurveJson {
            field: f.spec(),
            a1: f.elem_to_json(&m.a1),
            a2: f.elem_to_json(&m.a2),
            a3: f.elem_to_json(&m.a3),
            a4: f.elem_to_json(&m.a4),
            a6: f.elem_to_json(&m.a6),
        }
    }

    pub fn from_json(j: &CurveJson) -> Result<Curve, CurveError> {
        let f = make_field(j.field.p, j.field.a, Some(j.field.modulus.clone()))?;
        Self::from_json_in(&f, j)
    }

    /// Rebuild a curve over an already constructed field.
    pub fn from_json_in(f: &Field, j: &CurveJson) -> Result<Curve, CurveError> {
        if f.spec() != j.field {
            return Err(CurveError::MixedContexts);
        }
        let e = |v: &ElemJson| f.elem_from_json(v);
        make_curve(f, [e(&j.a1)?, e(&j.a2)?, e(&j.a3)?, e(&j.a4)?, e(&j.a6)?])
    }

    pub fn point_to_json(&self, p: &Point) -> PointJson {
        match p {
            Point::Inf => PointJson::Inf(InfTag::O),
            Point::Affine { x, y } => {
                let m = self.model_of(p).expect("point over a known field");
                PointJson::Affine { x: m.field.elem_to_json(x), y: m.field.elem_to_json(y) }
            }
        }
    }

    /// Parse a point over the degree-`d` model.
    pub fn point_from_json(&self, j: &PointJson, d: usize) -> Result<Point, CurveError> {
        let m = self.over(d)?;
        let p = match j {
            PointJson::Inf(_) => Point::Inf,
            PointJson::Affine { x, y } => Point::affine(m.field.elem_from_json(x)?, m.field.elem_from_json(y)?),
        };
        self.check(&m, &p)?;
        Ok(p)
    }
}

pub(crate) fn hasse_ok(q: u64, n: u64) -> bool {
    let t = q as i64 + 1 - n as i64;
    (t * t) as u64 <= 4 * q
}

/// Point count over a base field through quadratic characters (odd
/// characteristic) or traces (characteristic 2).
pub(crate) fn count_points_model(m: &Model) -> u64 {
    let f = &m.field;
    let mut n = 1u64;
    if f.characteristic() == 2 {
        for x in f.elements() {
            let b = f.add(&f.mul(&m.a1, &x), &m.a3);
            let c = m.rhs(&x);
            if f.is_zero(&b) {
                n += 1;
            } else {
                let t = f.mul(&c, &f.inv(&f.square(&b)).expect("b nonzero"));
                if f.trace_fast(&t) == 0 {
                    n += 2;
                }
            }
        }
    } else {
        for x in f.elements() {
            let b = f.add(&f.mul(&m.a1, &x), &m.a3);
            let disc = f.add(&f.square(&b), &f.mul_int(&m.rhs(&x), 4));
            n = (n as i64 + 1 + f.chi(&disc) as i64) as u64;
        }
    }
    n
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveJson {
    pub field: FieldSpec,
    pub a1: ElemJson,
    pub a2: ElemJson,
    pub a3: ElemJson,
    pub a4: ElemJson,
    pub a6: ElemJson,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum InfTag {
    O,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointJson {
    Inf(InfTag),
    Affine { x: ElemJson, y: ElemJson },
}
