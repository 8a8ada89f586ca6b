//! Functions on the curve kept in factored form: a constant, a polynomial
//! `A(x) + B(x) y`, and integer powers of lines.
//!
//! Values at points where some factor vanishes come from local power series
//! in a uniformizer, so cancelling zeros and poles are handled exactly.

use crate::curve::{Curve, Model, Point};
use crate::field::{Field, FieldElem};

use super::CodeError;

/// A line over the coefficient field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LineFn {
    /// `x - gamma`
    Vertical(FieldElem),
    /// `y - lambda x - nu`
    Slope(FieldElem, FieldElem),
}

#[derive(Clone, Debug)]
pub struct Factor {
    pub line: LineFn,
    pub exp: i32,
    /// Affine points where the line vanishes.
    pub zeros: Vec<Point>,
}

/// `scale * (A(x) + B(x) y) * prod line_i^exp_i` over `GF(q^degree)`.
#[derive(Clone, Debug)]
pub struct FunctionRep {
    pub(crate) degree: usize,
    pub(crate) scale: FieldElem,
    pub(crate) a: Vec<FieldElem>,
    pub(crate) b: Vec<FieldElem>,
    pub(crate) factors: Vec<Factor>,
}

/// Local data of a function at a point: valuation and leading coefficient
/// in the chosen uniformizer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Local {
    pub val: i64,
    pub lead: FieldElem,
}

fn trim(f: &Field, v: &mut Vec<FieldElem>) {
    while v.last().is_some_and(|c| f.is_zero(c)) {
        v.pop();
    }
}

impl FunctionRep {
    pub fn constant(field: &Field, degree: usize, c: FieldElem) -> FunctionRep {
        FunctionRep { degree, scale: c, a: vec![field.one()], b: Vec::new(), factors: Vec::new() }
    }

    /// `A(x) + B(x) y`, coefficients constant term first.
    pub fn polynomial(field: &Field, degree: usize, mut a: Vec<FieldElem>, mut b: Vec<FieldElem>) -> FunctionRep {
        trim(field, &mut a);
        trim(field, &mut b);
        FunctionRep { degree, scale: field.one(), a, b, factors: Vec::new() }
    }

    /// Degree of the coefficient field over `F_q`.
    pub fn coeff_degree(&self) -> usize {
        self.degree
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_empty() && self.b.is_empty()
    }

    /// Multiply by `line^exp`, merging with an equal line already present.
    pub fn mul_line(&mut self, line: LineFn, exp: i32, zeros: Vec<Point>) {
        if exp == 0 {
            return;
        }
        if let Some(i) = self.factors.iter().position(|f| f.line == line) {
            self.factors[i].exp += exp;
            if self.factors[i].exp == 0 {
                self.factors.remove(i);
            }
        } else {
            self.factors.push(Factor { line, exp, zeros });
        }
    }

    /// Pole order of the polynomial part at O.
    pub(crate) fn poly_pole_order(&self) -> i64 {
        let pa = if self.a.is_empty() { i64::MIN } else { 2 * (self.a.len() as i64 - 1) };
        let pb = if self.b.is_empty() { i64::MIN } else { 2 * (self.b.len() as i64 - 1) + 3 };
        pa.max(pb)
    }

    fn max_pole_order(&self) -> i64 {
        self.poly_pole_order().max(3)
    }

    /// Value at `p` (rational or over the coefficient field).
    pub fn eval(&self, curve: &Curve, p: &Point) -> Result<FieldElem, CodeError> {
        let m = curve.over(self.degree)?;
        let f = &m.field;
        let p = lift_point(&m, p);
        if self.is_zero() {
            return Ok(f.zero());
        }
        if let Point::Affine { x, y } = &p {
            // fast path: every line is a unit at p
            let mut acc = f.mul(&self.scale, &poly_value(f, &self.a, &self.b, x, y));
            let mut ok = true;
            for fac in &self.factors {
                let v = line_value(f, &fac.line, x, y);
                if f.is_zero(&v) {
                    ok = false;
                    break;
                }
                acc = f.mul(&acc, &pow_signed(f, &v, fac.exp));
            }
            if ok {
                return Ok(acc);
            }
        }
        let l = self.local(&m, &p)?;
        match l.val.cmp(&0) {
            std::cmp::Ordering::Greater => Ok(f.zero()),
            std::cmp::Ordering::Less => Err(CodeError::PoleAtPoint),
            std::cmp::Ordering::Equal => Ok(l.lead),
        }
    }

    /// Valuation at `p`.
    pub fn valuation(&self, curve: &Curve, p: &Point) -> Result<i64, CodeError> {
        let m = curve.over(self.degree)?;
        let p = lift_point(&m, p);
        Ok(self.local(&m, &p)?.val)
    }

    pub(crate) fn local(&self, m: &Model, p: &Point) -> Result<Local, CodeError> {
        let f = &m.field;
        if self.is_zero() {
            return Err(CodeError::DimensionMismatch("zero function has no valuation".into()));
        }
        let mut val;
        let mut lead;
        match p {
            Point::Inf => {
                // uniformizer z = -x/y with x = z^-2 + ..., y = -z^-3 + ...
                val = -self.poly_pole_order();
                lead = if self.poly_pole_order() % 2 == 0 {
                    self.a.last().unwrap().clone()
                } else {
                    f.neg(self.b.last().unwrap())
                };
                for fac in &self.factors {
                    let (v, c) = match &fac.line {
                        LineFn::Vertical(_) => (-2, f.one()),
                        LineFn::Slope(..) => (-3, f.neg(&f.one())),
                    };
                    val += v * fac.exp as i64;
                    lead = f.mul(&lead, &pow_signed(f, &c, fac.exp));
                }
            }
            Point::Affine { x, y } => {
                let prec = self.max_pole_order() as usize + 2;
                let (xs, ys) = expansion(m, x, y, prec);
                let first = |s: Vec<FieldElem>| -> Result<(i64, FieldElem), CodeError> {
                    s.into_iter()
                        .enumerate()
                        .find(|(_, c)| !f.is_zero(c))
                        .map(|(i, c)| (i as i64, c))
                        .ok_or(CodeError::DegenerateStep("series precision exhausted".into()))
                };
                let (v0, c0) = first(poly_series(f, &self.a, &self.b, &xs, &ys, prec))?;
                val = v0;
                lead = f.mul(&self.scale, &c0);
                for fac in &self.factors {
                    let s = match &fac.line {
                        LineFn::Vertical(g) => {
                            let mut s = xs.clone();
                            s[0] = f.sub(&s[0], g);
                            s
                        }
                        LineFn::Slope(l, n) => {
                            let mut s: Vec<FieldElem> = ys.iter().zip(&xs).map(|(yy, xx)| f.sub(yy, &f.mul(l, xx))).collect();
                            s[0] = f.sub(&s[0], n);
                            s
                        }
                    };
                    let (v, c) = first(s)?;
                    val += v * fac.exp as i64;
                    lead = f.mul(&lead, &pow_signed(f, &c, fac.exp));
                }
            }
        }
        if p.is_inf() {
            lead = f.mul(&lead, &self.scale);
        }
        Ok(Local { val, lead })
    }
}

pub(crate) fn lift_point(m: &Model, p: &Point) -> Point {
    match p {
        Point::Inf => Point::Inf,
        Point::Affine { x, y } => Point::affine(m.field.lift(x), m.field.lift(y)),
    }
}

fn pow_signed(f: &Field, v: &FieldElem, e: i32) -> FieldElem {
    let p = f.pow(v, e.unsigned_abs() as u64);
    if e < 0 {
        f.inv(&p).expect("nonzero base")
    } else {
        p
    }
}

fn horner(f: &Field, c: &[FieldElem], x: &FieldElem) -> FieldElem {
    c.iter().rev().fold(f.zero(), |acc, k| f.add(&f.mul(&acc, x), k))
}

fn poly_value(f: &Field, a: &[FieldElem], b: &[FieldElem], x: &FieldElem, y: &FieldElem) -> FieldElem {
    f.add(&horner(f, a, x), &f.mul(&horner(f, b, x), y))
}

fn line_value(f: &Field, l: &LineFn, x: &FieldElem, y: &FieldElem) -> FieldElem {
    match l {
        LineFn::Vertical(g) => f.sub(x, g),
        LineFn::Slope(lambda, nu) => f.sub(&f.sub(y, &f.mul(lambda, x)), nu),
    }
}

fn smul(f: &Field, s: &[FieldElem], t: &[FieldElem], prec: usize) -> Vec<FieldElem> {
    let mut out = vec![f.zero(); prec];
    for (i, a) in s.iter().enumerate().take(prec) {
        if f.is_zero(a) {
            continue;
        }
        for (j, b) in t.iter().enumerate().take(prec - i) {
            out[i + j] = f.add(&out[i + j], &f.mul(a, b));
        }
    }
    out
}

fn sadd(f: &Field, s: &[FieldElem], t: &[FieldElem]) -> Vec<FieldElem> {
    s.iter().zip(t).map(|(a, b)| f.add(a, b)).collect()
}

fn sscale(f: &Field, s: &[FieldElem], c: &FieldElem) -> Vec<FieldElem> {
    s.iter().map(|a| f.mul(a, c)).collect()
}

fn poly_series(f: &Field, a: &[FieldElem], b: &[FieldElem], xs: &[FieldElem], ys: &[FieldElem], prec: usize) -> Vec<FieldElem> {
    let horner_s = |c: &[FieldElem]| {
        let mut acc = vec![f.zero(); prec];
        for k in c.iter().rev() {
            acc = smul(f, &acc, xs, prec);
            acc[0] = f.add(&acc[0], k);
        }
        acc
    };
    sadd(f, &horner_s(a), &smul(f, &horner_s(b), ys, prec))
}

/// Power series of `x` and `y` at an affine point in a uniformizer: `x - x0`
/// when the tangent is not vertical, `y - y0` otherwise.
pub(crate) fn expansion(m: &Model, x0: &FieldElem, y0: &FieldElem, prec: usize) -> (Vec<FieldElem>, Vec<FieldElem>) {
    let f = &m.field;
    let fy = f.add(&f.add(&f.mul_int(y0, 2), &f.mul(&m.a1, x0)), &m.a3);
    let fx = f.sub(
        &f.mul(&m.a1, y0),
        &f.add(&f.add(&f.mul_int(&f.square(x0), 3), &f.mul_int(&f.mul(&m.a2, x0), 2)), &m.a4),
    );
    let c2 = f.add(&f.mul_int(x0, 3), &m.a2);
    let mut t = vec![f.zero(); prec];
    if prec > 1 {
        t[1] = f.one();
    }
    let t2 = smul(f, &t, &t, prec);
    let t3 = smul(f, &t2, &t, prec);
    let iterate = |pivot: &FieldElem, linear: Vec<FieldElem>, step: &dyn Fn(&[FieldElem]) -> Vec<FieldElem>| {
        let ninv = f.neg(&f.inv(pivot).expect("smooth point"));
        let mut u = vec![f.zero(); prec];
        for _ in 0..prec {
            u = sscale(f, &sadd(f, &linear, &step(&u)), &ninv);
        }
        u
    };
    if !f.is_zero(&fy) {
        // fx t + fy u + u^2 + a1 t u - c2 t^2 - t^3 = 0
        let linear = sscale(f, &t, &fx);
        let u = iterate(&fy, linear, &|u: &[FieldElem]| {
            let uu = smul(f, u, u, prec);
            let tu = sscale(f, &smul(f, &t, u, prec), &m.a1);
            let rest = sadd(f, &sscale(f, &t2, &f.neg(&c2)), &sscale(f, &t3, &f.neg(&f.one())));
            sadd(f, &sadd(f, &uu, &tu), &rest)
        });
        let mut xs = t.clone();
        xs[0] = x0.clone();
        let mut ys = u;
        ys[0] = f.add(&ys[0], y0);
        (xs, ys)
    } else {
        // fx w + t^2 + a1 w t - c2 w^2 - w^3 = 0
        let w = iterate(&fx, t2.clone(), &|w: &[FieldElem]| {
            let wt = sscale(f, &smul(f, w, &t, prec), &m.a1);
            let ww = smul(f, w, w, prec);
            let www = smul(f, &ww, w, prec);
            sadd(f, &wt, &sadd(f, &sscale(f, &ww, &f.neg(&c2)), &sscale(f, &www, &f.neg(&f.one()))))
        });
        let mut xs = w;
        xs[0] = f.add(&xs[0], x0);
        let mut ys = t;
        ys[0] = y0.clone();
        (xs, ys)
    }
}
