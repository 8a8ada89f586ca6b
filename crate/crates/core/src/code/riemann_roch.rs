//! Riemann-Roch spaces `L(G)` by Miller reduction to `[T] + m[O]`.

use crate::curve::{Curve, LineKind, Model, Point};
use crate::places::Divisor;

use super::function::{lift_point, FunctionRep, LineFn};
use super::CodeError;

/// Degree of the field all of `G`'s points live in. Places of two different
/// non-rational degrees are not supported.
pub(crate) fn coefficient_degree(g: &Divisor) -> Result<usize, CodeError> {
    let mut d = 1;
    for (p, _) in g.terms() {
        if p.degree() > 1 {
            if d > 1 && d != p.degree() {
                return Err(CodeError::MixedPlaceDegrees);
            }
            d = p.degree();
        }
    }
    Ok(d)
}

fn vertical_through(m: &Model, p: &Point) -> (LineFn, Vec<Point>) {
    let x = p.x().expect("affine point").clone();
    (LineFn::Vertical(x), vec![p.clone(), m.neg(p)])
}

/// `h` with `div(h) = G - deg(G)[O] - [T] + [O]` and `T = sum(G)`.
pub fn miller_reduce(curve: &Curve, g: &Divisor) -> Result<(FunctionRep, Point), CodeError> {
    let degree = coefficient_degree(g)?;
    let m = curve.over(degree)?;
    let f = &m.field;
    let mut h = FunctionRep::constant(f, degree, f.one());
    let mut acc = Point::Inf;
    for (place, c) in g.terms() {
        if place.is_infinity() {
            continue;
        }
        for q in place.orbit() {
            let q = lift_point(&m, q);
            for _ in 0..c.unsigned_abs() {
                let target = if *c > 0 { q.clone() } else { m.neg(&q) };
                let (kind, s) = m.line_and_sum(&acc, &target);
                match kind {
                    LineKind::One => return Err(CodeError::DegenerateStep("line through O and O".into())),
                    LineKind::Vertical { .. } => {
                        let affine = if acc.is_inf() { &target } else { &acc };
                        let (l, z) = vertical_through(&m, affine);
                        h.mul_line(l, 1, z);
                    }
                    LineKind::Slope { lambda, nu } => {
                        let zeros = vec![acc.clone(), target.clone(), m.neg(&s)];
                        h.mul_line(LineFn::Slope(lambda, nu), 1, zeros);
                    }
                }
                if !s.is_inf() {
                    let (l, z) = vertical_through(&m, &s);
                    h.mul_line(l, -1, z);
                }
                if *c < 0 {
                    let (l, z) = vertical_through(&m, &q);
                    h.mul_line(l, -1, z);
                }
                acc = s;
            }
        }
    }
    let t = curve.project(&acc).ok_or_else(|| CodeError::DegenerateStep("sum of G is not rational".into()))?;
    Ok((h, t))
}

/// The monomial of pole order `n` at O: `1`, `x^(n/2)` or `x^((n-3)/2) y`.
fn monomial(m: &Model, degree: usize, n: usize) -> FunctionRep {
    let f = &m.field;
    let mut a = Vec::new();
    let mut b = Vec::new();
    if n % 2 == 0 {
        a = vec![f.zero(); n / 2 + 1];
        a[n / 2] = f.one();
    } else {
        debug_assert!(n >= 3);
        b = vec![f.zero(); (n - 3) / 2 + 1];
        b[(n - 3) / 2] = f.one();
    }
    FunctionRep::polynomial(f, degree, a, b)
}

/// A basis of `L(G)`, `deg G >= 1`, each element checked against `div(f) + G >= 0`.
pub fn rr_basis(curve: &Curve, g: &Divisor) -> Result<Vec<FunctionRep>, CodeError> {
    let k = g.degree();
    if k < 1 {
        return Err(CodeError::InvalidSpec(format!("deg G = {k} must be positive")));
    }
    let (h, t) = miller_reduce(curve, g)?;
    let degree = h.degree;
    let m = curve.over(degree)?;
    let f = &m.field;
    let top = (k - 1) as usize;

    let mut basis: Vec<FunctionRep> = Vec::with_capacity(k as usize);
    if t.is_inf() {
        basis.push(monomial(&m, degree, 0));
        for n in 2..=top + 1 {
            basis.push(monomial(&m, degree, n));
        }
    } else {
        let tl = lift_point(&m, &t);
        let neg_t = m.neg(&tl);
        let (vx, vz) = vertical_through(&m, &tl);
        for n in 2..=top + 2 {
            let mut g_n = monomial(&m, degree, n);
            let c = g_n.eval(curve, &neg_t)?;
            if g_n.a.is_empty() {
                g_n.a.push(f.zero());
            }
            g_n.a[0] = f.sub(&g_n.a[0], &c);
            g_n.mul_line(vx.clone(), -1, vz.clone());
            basis.push(g_n);
        }
    }
    // distinct pole orders of the numerators give independence
    let mut orders: Vec<i64> = basis.iter().map(|b| b.poly_pole_order()).collect();
    orders.sort_unstable();
    orders.dedup();
    if orders.len() != k as usize {
        return Err(CodeError::DimensionMismatch(format!("{} independent functions for deg G = {k}", orders.len())));
    }

    let hinv = f.inv(&h.scale).expect("nonzero scale");
    for b in &mut basis {
        b.scale = f.mul(&b.scale, &hinv);
        for fac in h.factors() {
            b.mul_line(fac.line.clone(), -fac.exp, fac.zeros.clone());
        }
    }
    for b in &basis {
        check_divisor(curve, &m, b, g)?;
    }
    Ok(basis)
}

/// `div(f) + G >= 0` at every point where it could fail: O, the zeros of
/// the line factors, and the support of `G`.
pub fn check_divisor(curve: &Curve, m: &Model, func: &FunctionRep, g: &Divisor) -> Result<(), CodeError> {
    let mut pts: Vec<(Point, i64)> = vec![(Point::Inf, 0)];
    for fac in func.factors() {
        for z in &fac.zeros {
            pts.push((lift_point(m, z), 0));
        }
    }
    for (place, c) in g.terms() {
        for p in place.orbit() {
            pts.push((lift_point(m, p), *c));
        }
    }
    pts.sort_by(|a, b| a.0.cmp(&b.0));
    pts.dedup_by(|a, b| {
        if a.0 == b.0 {
            b.1 += a.1;
            true
        } else {
            false
        }
    });
    for (p, c) in &pts {
        let v = func.valuation(curve, p)?;
        if v + c < 0 {
            return Err(CodeError::DimensionMismatch(format!("valuation {v} at {p:?} below -{c}")));
        }
    }
    Ok(())
}
