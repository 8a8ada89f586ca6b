//! Places as explicit Frobenius orbits, and divisors over them.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::{Curve, CurveError, LineKind, Point, PointJson};
use crate::field::{poly_roots, ElemJson, FieldElem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlaceError {
    #[error("orbit of size {orbit} does not fit the degree-{ambient} coordinate field")]
    UnsupportedOrbit { orbit: usize, ambient: usize },
    #[error("divisor sum is not rational")]
    SumNotRational,
    #[error("no b in F_q with b^2 outside the image of f")]
    NoWitnessFound,
    #[error("curve is not of the form y^2 = f(x) in odd characteristic")]
    WrongCurveShape,
    #[error("no point in the kernel of the trace map after {0} samples")]
    SampleBudgetExhausted(u64),
    #[error("line vanishes identically on the curve")]
    DegenerateLine,
    #[error("place of degree {0} is malformed")]
    MalformedPlace(usize),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// A closed point: a Frobenius orbit of `degree` points over `GF(q^degree)`,
/// starting from its smallest point.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Place {
    degree: usize,
    orbit: Vec<Point>,
}

impl std::fmt::Debug for Place {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Place{}{:?}", self.degree, self.orbit[0])
    }
}

impl Place {
    /// The degree-1 place of a rational point (including O).
    pub fn rational(p: Point) -> Place {
        Place { degree: 1, orbit: vec![p] }
    }

    pub fn infinity() -> Place {
        Place::rational(Point::Inf)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn orbit(&self) -> &[Point] {
        &self.orbit
    }

    pub fn representative(&self) -> &Point {
        &self.orbit[0]
    }

    pub fn is_infinity(&self) -> bool {
        self.degree == 1 && self.orbit[0].is_inf()
    }

    /// The rational point of a degree-1 place.
    pub fn as_rational(&self) -> Option<&Point> {
        (self.degree == 1).then(|| &self.orbit[0])
    }

    /// Sum of the orbit, as a rational point.
    pub fn sum(&self, curve: &Curve) -> Result<Point, PlaceError> {
        let m = curve.over(self.degree)?;
        let s = self.orbit.iter().fold(Point::Inf, |acc, p| m.add(&acc, p));
        curve.project(&s).ok_or(PlaceError::SumNotRational)
    }
}

/// The place through `p`, whose coordinates may lie in an extension.
pub fn make_place(curve: &Curve, p: &Point) -> Result<Place, PlaceError> {
    let m = curve.model_of(p)?;
    if !m.contains(p) {
        return Err(CurveError::PointNotOnCurve.into());
    }
    let ambient = m.field.ext_degree();
    let mut orbit = vec![p.clone()];
    let mut cur = m.frobenius(p);
    while &cur != p {
        orbit.push(cur.clone());
        cur = m.frobenius(&cur);
    }
    match orbit.len() {
        1 => Ok(Place::rational(curve.project(p).expect("Frobenius-fixed point is rational"))),
        r if r == ambient => {
            let start = (0..r).min_by(|&i, &j| orbit[i].cmp(&orbit[j])).unwrap();
            orbit.rotate_left(start);
            Ok(Place { degree: r, orbit })
        }
        r => Err(PlaceError::UnsupportedOrbit { orbit: r, ambient }),
    }
}

/// A finite formal sum of places with nonzero integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Divisor {
    terms: Vec<(Place, i64)>,
}

impl Divisor {
    pub fn zero() -> Divisor {
        Divisor::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Place, i64)>) -> Divisor {
        let mut d = Divisor::zero();
        for (p, c) in terms {
            d.add_term(p, c);
        }
        d
    }

    pub fn point(p: Point, c: i64) -> Divisor {
        Divisor::from_terms([(Place::rational(p), c)])
    }

    pub fn add_term(&mut self, place: Place, c: i64) {
        if c == 0 {
            return;
        }
        if let Some(i) = self.terms.iter().position(|(p, _)| *p == place) {
            self.terms[i].1 += c;
            if self.terms[i].1 == 0 {
                self.terms.remove(i);
            }
        } else {
            self.terms.push((place, c));
        }
    }

    pub fn plus(&self, other: &Divisor) -> Divisor {
        let mut d = self.clone();
        for (p, c) in &other.terms {
            d.add_term(p.clone(), *c);
        }
        d
    }

    pub fn scaled(&self, k: i64) -> Divisor {
        Divisor::from_terms(self.terms.iter().map(|(p, c)| (p.clone(), c * k)))
    }

    pub fn terms(&self) -> &[(Place, i64)] {
        &self.terms
    }

    pub fn degree(&self) -> i64 {
        self.terms.iter().map(|(p, c)| c * p.degree() as i64).sum()
    }

    pub fn support(&self) -> Vec<&Place> {
        self.terms.iter().map(|(p, _)| p).collect()
    }

    pub fn coeff(&self, place: &Place) -> i64 {
        self.terms.iter().find(|(p, _)| p == place).map_or(0, |(_, c)| *c)
    }

    /// Largest place degree in the support (1 when empty).
    pub fn max_place_degree(&self) -> usize {
        self.terms.iter().map(|(p, _)| p.degree()).max().unwrap_or(1)
    }

    pub fn is_effective(&self) -> bool {
        self.terms.iter().all(|(_, c)| *c > 0)
    }
}

/// `sum(D)`, computed place by place.
pub fn divisor_sum(curve: &Curve, d: &Divisor) -> Result<Point, PlaceError> {
    let m = curve.base();
    let mut acc = Point::Inf;
    for (place, c) in d.terms() {
        let s = place.sum(curve)?;
        acc = m.add(&acc, &m.scalar_mul(*c, &s));
    }
    Ok(acc)
}

/// A line over the base field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Line {
    /// `x = gamma`
    Vertical(FieldElem),
    /// `y = lambda x + nu`
    Slope(FieldElem, FieldElem),
}

/// Principal divisor of a line function over the base field.
pub fn line_divisor(curve: &Curve, line: &Line) -> Result<Divisor, PlaceError> {
    let f = curve.field();
    let m = curve.base();
    // x-coordinates of the zeros, as a polynomial over F_q
    let (poly, y_of): (Vec<FieldElem>, Box<dyn Fn(&Curve, usize, &FieldElem) -> Vec<FieldElem>>) = match line {
        Line::Vertical(g) => {
            let lin = vec![f.neg(g), f.one()];
            (lin, Box::new(|c: &Curve, d: usize, x: &FieldElem| c.over(d).map(|m| m.ys_over(x)).unwrap_or_default()))
        }
        Line::Slope(lambda, nu) => {
            // rhs(x) - (lx + n)^2 - a1 x (lx + n) - a3 (lx + n)
            let l = lambda;
            let n = nu;
            let c3 = f.one();
            let c2 = f.sub(&f.sub(&m.a2, &f.square(l)), &f.mul(&m.a1, l));
            let c1 = f.sub(&f.sub(&f.sub(&m.a4, &f.mul_int(&f.mul(l, n), 2)), &f.mul(&m.a1, n)), &f.mul(&m.a3, l));
            let c0 = f.sub(&f.sub(&m.a6, &f.square(n)), &f.mul(&m.a3, n));
            let (l, n) = (l.clone(), n.clone());
            (
                vec![c0, c1, c2, c3],
                Box::new(move |c: &Curve, d: usize, x: &FieldElem| {
                    let mm = c.over(d).expect("extension");
                    let fe = &mm.field;
                    vec![fe.add(&fe.mul(&fe.lift(&l), x), &fe.lift(&n))]
                }),
            )
        }
    };
    let pole = poly.len() as i64 - 1;
    let pole = if matches!(line, Line::Vertical(_)) { 2 } else { pole };
    let mut div = Divisor::point(Point::Inf, -pole);
    let mut rest = poly;
    // peel off rational roots with multiplicity
    loop {
        let roots = poly_roots(f, &rest, 1);
        let Some(r) = roots.first().cloned() else { break };
        let (q, _) = crate::field::poly::divrem(f, &rest, &[f.neg(&r), f.one()]);
        rest = q;
        let ys = y_of(curve, 1, &r);
        add_zero_over(curve, &mut div, 1, &r, &ys, line);
    }
    let deg = rest.len().saturating_sub(1);
    if deg >= 2 {
        let mm = curve.over(deg)?;
        let fe = &mm.field;
        let lifted: Vec<FieldElem> = rest.iter().map(|c| fe.lift(c)).collect();
        let roots = poly_roots(fe, &lifted, 2);
        let x0 = roots.first().cloned().ok_or(PlaceError::DegenerateLine)?;
        let ys = y_of(curve, deg, &x0);
        let y0 = ys.first().cloned().ok_or(PlaceError::DegenerateLine)?;
        let place = make_place(curve, &Point::affine(x0, y0))?;
        div.add_term(place, 1);
    }
    if div.degree() != 0 {
        return Err(PlaceError::DegenerateLine);
    }
    Ok(div)
}

fn add_zero_over(curve: &Curve, div: &mut Divisor, d: usize, x: &FieldElem, ys: &[FieldElem], line: &Line) {
    match line {
        Line::Vertical(_) => {
            // each linear factor of a vertical is hit once per x-root; split over the ys
            match ys.len() {
                2 => {
                    for y in ys {
                        div.add_term(Place::rational(Point::affine(x.clone(), y.clone())), 1);
                    }
                }
                1 => div.add_term(Place::rational(Point::affine(x.clone(), ys[0].clone())), 2),
                _ => {
                    // the two points are conjugate over GF(q^2)
                    let m2 = curve.over(2).expect("quadratic extension");
                    let x2 = m2.field.lift(x);
                    let y2 = m2.ys_over(&x2)[0].clone();
                    let place = make_place(curve, &Point::affine(x2, y2)).expect("degree-2 place");
                    div.add_term(place, 1);
                }
            }
        }
        Line::Slope(..) => {
            debug_assert_eq!(d, 1);
            div.add_term(Place::rational(Point::affine(x.clone(), ys[0].clone())), 1);
        }
    }
}

/// The line through `p` and `q` as base-field [`Line`] plus their sum.
pub fn chord(curve: &Curve, p: &Point, q: &Point) -> Option<(Line, Point)> {
    let (kind, s) = curve.base().line_and_sum(p, q);
    match kind {
        LineKind::Slope { lambda, nu } => Some((Line::Slope(lambda, nu), s)),
        LineKind::Vertical { gamma } => Some((Line::Vertical(gamma), s)),
        LineKind::One => None,
    }
}

/// A degree-3 place `R` with `div(y - b) = [R] - 3[O]`, scanning `b` in
/// index order for `b^2` outside the image of `f`.
pub fn find_degree3_avoid(curve: &Curve) -> Result<(Place, FieldElem), PlaceError> {
    let f = curve.field();
    let m = curve.base();
    if f.characteristic() == 2 || !f.is_zero(&m.a1) || !f.is_zero(&m.a3) || f.is_extension() {
        return Err(PlaceError::WrongCurveShape);
    }
    let q = f.order() as usize;
    let mut image = vec![false; q];
    for x in f.elements() {
        image[f.index(&m.rhs(&x)) as usize] = true;
    }
    let b = f
        .elements()
        .find(|b| !image[f.index(&f.square(b)) as usize])
        .ok_or(PlaceError::NoWitnessFound)?;
    let m3 = curve.over(3)?;
    let e = &m3.field;
    let b2 = f.square(&b);
    let cubic = [e.lift(&f.sub(&m.a6, &b2)), e.lift(&m.a4), e.lift(&m.a2), e.one()];
    let roots = poly_roots(e, &cubic, 3);
    let x0 = roots.first().cloned().ok_or(PlaceError::NoWitnessFound)?;
    let place = make_place(curve, &Point::affine(x0, e.lift(&b)))?;
    debug_assert_eq!(place.degree(), 3);
    Ok((place, b))
}

/// A degree-3 place with orbit sum O, by sampling the kernel of
/// `P + pi(P) + pi^2(P)` on `E(GF(q^3))`.
pub fn find_degree3_trace(curve: &Curve, seed: u64) -> Result<Place, PlaceError> {
    let m3 = curve.over(3)?;
    let e = &m3.field;
    let budget = 100 * curve.q();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..budget {
        let x = e.random(&mut rng);
        if e.in_base(&x) {
            continue;
        }
        for y in m3.ys_over(&x) {
            let p = Point::affine(x.clone(), y);
            let p1 = m3.frobenius(&p);
            let p2 = m3.frobenius(&p1);
            if m3.add(&m3.add(&p, &p1), &p2).is_inf() {
                return make_place(curve, &p);
            }
        }
    }
    Err(PlaceError::SampleBudgetExhausted(budget))
}

/// A uniformly drawn place of exact degree `d` (for tests and sweeps).
pub fn random_place(curve: &Curve, d: usize, rng: &mut ChaCha8Rng) -> Result<Place, PlaceError> {
    let m = curve.over(d)?;
    for _ in 0..10_000 {
        let x = m.field.random(rng);
        if let Some(y) = m.ys_over(&x).into_iter().next() {
            let place = make_place(curve, &Point::affine(x, y))?;
            if place.degree() == d {
                return Ok(place);
            }
        }
    }
    Err(PlaceError::SampleBudgetExhausted(10_000))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaceJson {
    pub degree: usize,
    pub representative: PointJson,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness_b: Option<ElemJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorTermJson {
    pub place: PlaceJson,
    pub coeff: i64,
}

impl Place {
    pub fn to_json(&self, curve: &Curve, witness_b: Option<&FieldElem>) -> PlaceJson {
        PlaceJson {
            degree: self.degree,
            representative: curve.point_to_json(self.representative()),
            witness_b: witness_b.map(|b| curve.field().elem_to_json(b)),
        }
    }

    pub fn from_json(curve: &Curve, j: &PlaceJson) -> Result<Place, PlaceError> {
        let p = curve.point_from_json(&j.representative, j.degree)?;
        let place = if j.degree == 1 { Place::rational(p.clone()) } else { make_place(curve, &p)? };
        if place.degree() != j.degree || place.representative() != &p {
            return Err(PlaceError::MalformedPlace(j.degree));
        }
        Ok(place)
    }
}

impl Divisor {
    pub fn to_json(&self, curve: &Curve) -> Vec<DivisorTermJson> {
        self.terms.iter().map(|(p, c)| DivisorTermJson { place: p.to_json(curve, None), coeff: *c }).collect()
    }

    pub fn from_json(curve: &Curve, j: &[DivisorTermJson]) -> Result<Divisor, PlaceError> {
        let mut d = Divisor::zero();
        for t in j {
            d.add_term(Place::from_json(curve, &t.place)?, t.coeff);
        }
        Ok(d)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::curve::make_curve;
    use crate::field::make_field;

    pub(crate) fn gf289_curve() -> Curve {
        let f = make_field(17, 2, Some(vec![3, 16, 1])).unwrap();
        let z = f.zero();
        make_curve(&f, [z.clone(), z.clone(), z.clone(), z, f.one()]).unwrap()
    }

    #[test]
    fn avoid_method_matches_worked_examples() {
        let e = gf289_curve();
        let (r, b) = find_degree3_avoid(&e).unwrap();
        assert_eq!(b, e.field().from_coeffs(&[1, 1]).unwrap());
        assert_eq!(r.degree(), 3);
        assert_eq!(r.sum(&e).unwrap(), Point::Inf);
        // x-coordinates are the roots of x^3 + 14 eta + 3
        let m3 = e.over(3).unwrap();
        let c0 = m3.field.lift(&e.field().from_coeffs(&[3, 14]).unwrap());
        for p in r.orbit() {
            let x = p.x().unwrap();
            assert!(m3.field.is_zero(&m3.field.add(&m3.field.pow(x, 3), &c0)));
        }

        let f = make_field(3, 6, Some(vec![2, 2, 1, 0, 2, 0, 1])).unwrap();
        let z = f.zero();
        let e729 = make_curve(&f, [z.clone(), z.clone(), z.clone(), f.one(), z]).unwrap();
        let (r, b) = find_degree3_avoid(&e729).unwrap();
        assert_eq!(b, f.generator());
        assert_eq!(r.sum(&e729).unwrap(), Point::Inf);
    }

    #[test]
    fn trace_method_over_gf7() {
        let f = make_field(7, 1, None).unwrap();
        let e = make_curve(&f, [0, 0, 0, 3, 1].map(|v| f.from_int(v))).unwrap();
        let r = find_degree3_trace(&e, 1).unwrap();
        assert_eq!(r.degree(), 3);
        assert_eq!(r.orbit().len(), 3);
        assert_eq!(r.sum(&e).unwrap(), Point::Inf);
    }

    #[test]
    fn line_divisors_are_principal() {
        let e = gf289_curve();
        let pts = e.enumerate_points().unwrap();
        let f = e.field();
        for (i, p) in pts.iter().enumerate().step_by(23) {
            let q = &pts[(i * 7 + 3) % pts.len()];
            if let Some((line, _)) = chord(&e, p, q) {
                let d = line_divisor(&e, &line).unwrap();
                assert_eq!(d.degree(), 0);
                assert_eq!(divisor_sum(&e, &d).unwrap(), Point::Inf);
            }
        }
        // a vertical with no rational points meets the curve in a degree-2 place
        let gamma = f.elements().find(|x| e.base().ys_over(x).is_empty()).unwrap();
        let d = line_divisor(&e, &Line::Vertical(gamma)).unwrap();
        assert_eq!(d.max_place_degree(), 2);
        assert_eq!(divisor_sum(&e, &d).unwrap(), Point::Inf);
        // 2-torsion: (-1, 0)
        let t = Point::affine(f.from_int(-1), f.zero());
        let d = line_divisor(&e, &Line::Vertical(f.from_int(-1))).unwrap();
        assert_eq!(d.coeff(&Place::rational(t)), 2);
    }

    #[test]
    fn json_round_trip() {
        let e = gf289_curve();
        let (r, b) = find_degree3_avoid(&e).unwrap();
        let j = r.to_json(&e, Some(&b));
        assert_eq!(Place::from_json(&e, &j).unwrap(), r);
        let d = Divisor::from_terms([(r, 1), (Place::infinity(), -3)]);
        assert_eq!(Divisor::from_json(&e, &d.to_json(&e)).unwrap(), d);
    }
}
