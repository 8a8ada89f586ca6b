//! Maximum-length MDS elliptic codes: the bound table, the two explicit
//! constructions, end-to-end building and a structural audit.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::{mds_combinatorial, CodeError, CodeSpec, Provenance};
use crate::curve::{find_curve, Curve, CurveError, Point, SearchStrategy};
use crate::field::{make_field, prime_factors, Field, FieldElem, FieldError};
use crate::group::isqrt;
use crate::group::{index2_subgroups, GroupError, GroupTable, Index2Subgroup};
use crate::places::{find_degree3_avoid, find_degree3_trace, divisor_sum, Divisor, Place, PlaceError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("group order {0} is odd")]
    OddGroupOrder(u64),
    #[error("place has degree {0}, expected 3")]
    NotDegreeThree(usize),
    #[error("the points of the place do not sum to O")]
    PlaceSumNotZero,
    #[error("odd k needs the odd-k extension of the coset construction")]
    OddDimension,
    #[error("built a code of length {got}, the bound is {expected}")]
    LengthMismatch { expected: u64, got: u64 },
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Place(#[from] PlaceError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// A value of the maximal-length table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundResult {
    pub q: u64,
    pub k: u64,
    pub restricted: bool,
    /// Parity of `q + 1 + floor(2 sqrt q)`.
    pub parity_regime: Parity,
    pub value: u64,
    /// Row used for the value (1-based).
    pub row: u8,
    pub citation: String,
    /// Every row whose conditions hold; they all give `value`.
    pub matching_rows: Vec<u8>,
    pub preconditions_ok: bool,
    pub preconditions: Vec<String>,
}

fn prime_power(q: u64) -> Option<(u64, u32)> {
    let f = prime_factors(q);
    if f.len() != 1 {
        return None;
    }
    let p = f[0];
    let mut a = 0;
    let mut r = q;
    while r % p == 0 {
        r /= p;
        a += 1;
    }
    Some((p, a))
}

/// `10 k <= q + 1 - 2 sqrt(q)`, exactly.
fn k_in_range(q: u64, k: u64) -> bool {
    let q = q as i128;
    let lhs = q + 1 - 10 * k as i128;
    lhs >= 0 && 4 * q <= lhs * lhs
}

/// `floor(2 sqrt(q))`.
pub fn floor_two_sqrt(q: u64) -> u64 {
    isqrt(4 * q)
}

/// The maximal length of a nontrivial MDS elliptic code of dimension `k`
/// over `F_q`, with `restricted` meaning `Supp(G)` is rational.
pub fn mec_bound(q: u64, k: u64, restricted: bool) -> Result<BoundResult, ConstructionError> {
    let (p, a) = prime_power(q).ok_or_else(|| ConstructionError::PreconditionFailed(format!("{q} is not a prime power")))?;
    if q < 289 {
        return Err(ConstructionError::PreconditionFailed(format!("q = {q} < 289")));
    }
    if k < 3 {
        return Err(ConstructionError::PreconditionFailed(format!("k = {k} < 3")));
    }
    if !k_in_range(q, k) {
        return Err(ConstructionError::PreconditionFailed(format!("k = {k} > (q + 1 - 2 sqrt q) / 10")));
    }
    let s = floor_two_sqrt(q);
    let even = (q + 1 + s) % 2 == 0;
    let k_even = k % 2 == 0;
    let odd_square = p != 2 && a % 2 == 0;
    let binary_square = p == 2 && a % 2 == 0;
    let binary = 1u64 << (a / 2).min(63);

    let mut rows: Vec<(u8, u64)> = Vec::new();
    if odd_square && !k_even {
        rows.push((1, (q + 1 + s) / 2));
    }
    if even {
        match (k_even, restricted) {
            (false, _) => rows.push((2, (q + 1 + s) / 2)),
            (true, true) => rows.push((3, (q + 1 + s) / 2 - 1)),
            (true, false) => rows.push((4, (q + 1 + s) / 2)),
        }
    } else {
        match (k_even, restricted) {
            (false, _) => rows.push((5, (q + s) / 2)),
            (true, true) => rows.push((6, (q + s) / 2 - 1)),
            (true, false) => rows.push((7, (q + s) / 2)),
        }
    }
    if binary_square {
        let v = q / 2 + binary;
        match (k_even, restricted) {
            (true, true) => rows.push((8, v - 1)),
            (true, false) => rows.push((9, v)),
            (false, _) => rows.push((10, v)),
        }
    }
    let value = rows[0].1;
    assert!(rows.iter().all(|r| r.1 == value), "table rows disagree: {rows:?}");
    // the special-case rows are the more specific citations
    let row = rows.iter().map(|r| r.0).find(|r| [1, 8, 9, 10].contains(r)).unwrap_or(rows[0].0);
    Ok(BoundResult {
        q,
        k,
        restricted,
        parity_regime: if even { Parity::Even } else { Parity::Odd },
        value,
        row,
        citation: format!("Table 1 row {row}"),
        matching_rows: rows.iter().map(|r| r.0).collect(),
        preconditions_ok: true,
        preconditions: vec![format!("q = {p}^{a} >= 289"), format!("3 <= k = {k} <= (q + 1 - 2 sqrt q) / 10")],
    })
}

fn first_outside(table: &GroupTable, h: Index2Subgroup) -> Point {
    table
        .enumeration()
        .iter()
        .find(|p| !h.contains(table, table.code(p).expect("enumerated")))
        .expect("index-2 subgroup has a complement")
        .clone()
}

fn in_coset(table: &GroupTable, h: Index2Subgroup, inside: bool) -> Vec<Point> {
    table
        .enumeration()
        .iter()
        .filter(|p| h.contains(table, table.code(p).expect("enumerated")) == inside)
        .cloned()
        .collect()
}

fn assert_mds(spec: &CodeSpec, table: &GroupTable) -> Result<(), ConstructionError> {
    let v = mds_combinatorial(spec, table)?;
    assert!(v.is_mds(), "construction {} produced a non-MDS code: {v:?}", spec.provenance.construction);
    Ok(())
}

fn even_order(table: &GroupTable) -> Result<Index2Subgroup, ConstructionError> {
    if table.order() % 2 == 1 {
        return Err(ConstructionError::OddGroupOrder(table.order()));
    }
    Ok(index2_subgroups(table)[0])
}

/// Length `N/2 - 1` with rational `G`: `D = (u + H) \ {u}`,
/// `G = (k + 1)[O] - [u]`. With `allow_odd_k`, odd `k` gives instead the
/// length-`N/2` code `D = u + H`, `G = k[O]`.
pub fn construct_coset_code(curve: &Curve, table: &GroupTable, k: u64, allow_odd_k: bool) -> Result<CodeSpec, ConstructionError> {
    if k < 3 {
        return Err(ConstructionError::PreconditionFailed(format!("k = {k} < 3")));
    }
    let h = even_order(table)?;
    let u = first_outside(table, h);
    let coset = in_coset(table, h, false);
    let mut provenance = Provenance {
        subgroup: Some(h),
        coset_representative: Some(curve.point_to_json(&u)),
        ..Default::default()
    };
    let (points, g) = if k % 2 == 0 {
        provenance.construction = "coset".into();
        let pts = coset.into_iter().filter(|p| *p != u).collect();
        let mut g = Divisor::point(Point::Inf, k as i64 + 1);
        g.add_term(Place::rational(u), -1);
        (pts, g)
    } else {
        if !allow_odd_k {
            return Err(ConstructionError::OddDimension);
        }
        provenance.construction = "coset-odd-k".into();
        (coset, Divisor::point(Point::Inf, k as i64))
    };
    let spec = CodeSpec::new(curve.clone(), points, g, provenance)?;
    assert_mds(&spec, table)?;
    Ok(spec)
}

/// Length `N/2` with a degree-3 place `R` summing to `O`. Even `k`:
/// `D = H`, `G = [R] + P_1 + ... + P_{k-3}` with `P_i` in `u + H`. Odd `k`:
/// `D = u + H`, `G = [R] + (k - 3)[O]`.
pub fn construct_deg3_code(curve: &Curve, table: &GroupTable, k: u64, r: &Place) -> Result<CodeSpec, ConstructionError> {
    if k < 3 {
        return Err(ConstructionError::PreconditionFailed(format!("k = {k} < 3")));
    }
    if r.degree() != 3 {
        return Err(ConstructionError::NotDegreeThree(r.degree()));
    }
    if !r.sum(curve)?.is_inf() {
        return Err(ConstructionError::PlaceSumNotZero);
    }
    let h = even_order(table)?;
    let u = first_outside(table, h);
    let mut g = Divisor::from_terms([(r.clone(), 1)]);
    let points = if k % 2 == 0 {
        let outside = in_coset(table, h, false);
        if outside.len() < (k - 3) as usize {
            return Err(ConstructionError::PreconditionFailed(format!("k = {k} is too large for the group")));
        }
        for p in outside.into_iter().take((k - 3) as usize) {
            g.add_term(Place::rational(p), 1);
        }
        in_coset(table, h, true)
    } else {
        g.add_term(Place::infinity(), k as i64 - 3);
        in_coset(table, h, false)
    };
    let provenance = Provenance {
        construction: "degree-3".into(),
        subgroup: Some(h),
        coset_representative: Some(curve.point_to_json(&u)),
        ..Default::default()
    };
    let spec = CodeSpec::new(curve.clone(), points, g, provenance)?;
    assert_mds(&spec, table)?;
    Ok(spec)
}

/// A degree-3 place summing to O: the line `y = b` when the curve has the
/// shape `y^2 = f(x)`, otherwise a point in the kernel of the trace.
pub fn degree3_place(curve: &Curve, seed: u64) -> Result<(Place, Option<FieldElem>, &'static str), ConstructionError> {
    match find_degree3_avoid(curve) {
        Ok((r, b)) => Ok((r, Some(b), "avoid")),
        Err(PlaceError::WrongCurveShape | PlaceError::NoWitnessFound) => Ok((find_degree3_trace(curve, seed)?, None, "trace")),
        Err(e) => Err(e.into()),
    }
}

/// Build an MDS code of the maximal length given by [`mec_bound`].
pub fn build_max_code(p: u32, a: u32, k: u64, restricted: bool, seed: u64) -> Result<CodeSpec, ConstructionError> {
    build_max_code_in(&make_field(p, a, None)?, k, restricted, seed)
}

/// [`build_max_code`] over a given field (for a chosen modulus).
pub fn build_max_code_in(field: &Field, k: u64, restricted: bool, seed: u64) -> Result<CodeSpec, ConstructionError> {
    if field.is_extension() {
        return Err(ConstructionError::PreconditionFailed("codes are built over a base field".into()));
    }
    let q = field.order();
    let bound = mec_bound(q, k, restricted)?;
    let s = floor_two_sqrt(q);
    let target = if (q + 1 + s) % 2 == 0 { q + 1 + s } else { q + s };
    let (curve, search) = match find_curve(field, target, SearchStrategy::Family) {
        Ok(c) => (c, "family"),
        Err(CurveError::NoFamily { .. } | CurveError::SearchExhausted(_)) => {
            (find_curve(field, target, SearchStrategy::Exhaustive)?, "exhaustive")
        }
        Err(e) => return Err(e.into()),
    };
    let table = GroupTable::from_curve(&curve)?;
    let mut spec = if restricted {
        construct_coset_code(&curve, &table, k, true)?
    } else {
        let (r, b, method) = degree3_place(&curve, seed)?;
        let mut spec = construct_deg3_code(&curve, &table, k, &r)?;
        spec.provenance.place_method = Some(method.into());
        spec.provenance.witness_b = b.map(|b| curve.field().elem_to_json(&b));
        if method == "trace" {
            spec.provenance.seed = Some(seed);
        }
        spec
    };
    spec.provenance.curve_search = Some(search.into());
    spec.provenance.citation = Some(bound.citation.clone());
    if spec.n() as u64 != bound.value {
        return Err(ConstructionError::LengthMismatch { expected: bound.value, got: spec.n() as u64 });
    }
    Ok(spec)
}

/// Structural facts about a code relevant to the necessary conditions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub n: u64,
    pub k: u64,
    #[serde(rename = "N")]
    pub big_n: u64,
    pub structure: (u64, u64),
    pub two_torsion: u64,
    /// `n = N/2`.
    pub half_length: bool,
    /// The index-2 subgroup `D` is a coset of, if any.
    pub coset_of: Option<Index2Subgroup>,
    /// `Supp(G)` contains a place of degree > 1.
    pub nonrational_place: bool,
    pub k_even: bool,
    /// Whether the even-`N` necessity conditions hold (`None` for odd `N`).
    pub even_n_hypotheses: Option<bool>,
    /// The non-MDS regime for odd `N` (`None` for even `N`).
    pub odd_n_regime: Option<bool>,
    pub predicts_not_mds: bool,
    pub reasons: Vec<String>,
}

pub fn audit_code(spec: &CodeSpec, table: &GroupTable) -> Result<AuditReport, ConstructionError> {
    let big_n = table.order();
    let n = spec.n() as u64;
    let k = spec.k() as u64;
    let codes = spec.points.iter().map(|p| table.code(p)).collect::<Result<Vec<_>, _>>()?;
    let two_torsion = table.two_torsion().len() as u64;
    let half_length = 2 * n == big_n;
    let mut coset_of = None;
    if half_length {
        for h in index2_subgroups(table) {
            let side = h.contains(table, codes[0]);
            if codes.iter().all(|&c| h.contains(table, c) == side) {
                coset_of = Some(h);
                break;
            }
        }
    }
    let nonrational_place = spec.g.max_place_degree() > 1;
    let k_even = k % 2 == 0;
    let mut reasons = Vec::new();
    let (even_n_hypotheses, odd_n_regime) = if big_n % 2 == 0 {
        let hyp = half_length && k_even && k >= 3 && 10 * k <= big_n && big_n >= 30 * two_torsion + 135;
        if hyp && coset_of.is_none() {
            reasons.push("n = N/2, k even and D is not a coset of an index-2 subgroup".into());
        }
        if hyp && !nonrational_place {
            reasons.push("n = N/2, k even and Supp(G) is rational".into());
        }
        (Some(hyp), None)
    } else {
        let regime = big_n >= 165 && 5 * n >= 2 * big_n + 5 && k >= 3 && 5 * k + 2 * big_n <= 5 * n + 10;
        if regime {
            reasons.push("odd N with n >= 2N/5 + 1 and 3 <= k <= n - 2N/5 + 2".into());
        }
        (None, Some(regime))
    };
    // keep the sum map honest: it must be defined for every audited code
    divisor_sum(&spec.curve, &spec.g)?;
    Ok(AuditReport {
        n,
        k,
        big_n,
        structure: table.invariants(),
        two_torsion,
        half_length,
        coset_of,
        nonrational_place,
        k_even,
        even_n_hypotheses,
        odd_n_regime,
        predicts_not_mds: !reasons.is_empty(),
        reasons,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{generator_matrix, mds_matrix, MatrixMode};
    use crate::places::tests::gf289_curve;

    #[test]
    fn bound_rows() {
        let b = mec_bound(289, 4, false).unwrap();
        assert_eq!((b.value, b.row), (162, 4));
        assert_eq!(mec_bound(289, 4, true).unwrap().value, 161);
        assert_eq!(mec_bound(289, 3, true).unwrap().value, 162);
        assert_eq!(mec_bound(289, 3, false).unwrap().row, 1);
        let b = mec_bound(1024, 4, false).unwrap();
        assert_eq!((b.value, b.row), (544, 9));
        assert_eq!(b.matching_rows, vec![7, 9]);
        assert_eq!(mec_bound(1024, 4, true).unwrap().value, 543);
        assert_eq!(mec_bound(1024, 3, true).unwrap().row, 10);
        assert_eq!(mec_bound(293, 3, false).unwrap().value, 164);
        assert_eq!(mec_bound(512, 4, false).unwrap().parity_regime, Parity::Even);
    }

    #[test]
    fn bound_preconditions() {
        assert!(mec_bound(256, 3, false).is_err());
        assert!(mec_bound(289, 2, false).is_err());
        assert!(mec_bound(300, 3, false).is_err());
        // (289 + 1 - 34) / 10 = 25.6
        assert!(mec_bound(289, 25, false).is_ok());
        assert!(mec_bound(289, 26, false).is_err());
        // 361: (362 - 38) / 10 = 32.4
        assert!(mec_bound(361, 32, false).is_ok());
        assert!(mec_bound(361, 33, false).is_err());
    }

    #[test]
    fn range_check_is_exact_at_the_boundary() {
        // q = 2401 = 7^4: q + 1 - 2 sqrt q = 2304 = 10 * 230.4
        assert!(k_in_range(2401, 230));
        assert!(!k_in_range(2401, 231));
        // q = 1681 = 41^2: 1600 exactly
        assert!(k_in_range(1681, 160));
        assert!(!k_in_range(1681, 161));
    }

    #[test]
    fn coset_and_degree_three_codes_on_gf289() {
        let e = gf289_curve();
        let t = GroupTable::from_curve(&e).unwrap();
        let c = construct_coset_code(&e, &t, 4, false).unwrap();
        assert_eq!((c.n(), c.k()), (161, 4));
        assert_eq!(construct_coset_code(&e, &t, 5, false).unwrap_err(), ConstructionError::OddDimension);
        let c = construct_coset_code(&e, &t, 5, true).unwrap();
        assert_eq!((c.n(), c.k()), (162, 5));

        let (r, _, method) = degree3_place(&e, 0).unwrap();
        assert_eq!(method, "avoid");
        for k in [3, 4, 5, 6] {
            let c = construct_deg3_code(&e, &t, k, &r).unwrap();
            assert_eq!((c.n(), c.k()), (162, k as usize));
            let a = audit_code(&c, &t).unwrap();
            assert!(a.half_length && a.coset_of.is_some() && a.nonrational_place);
            assert!(!a.predicts_not_mds);
        }
        let c = construct_deg3_code(&e, &t, 4, &r).unwrap();
        let m = generator_matrix(&c).unwrap();
        let v = mds_matrix(&m, MatrixMode::SampledMinors { count: 20_000, seed: 1 }, None).unwrap();
        assert!(v.is_mds());
        assert!(matches!(construct_deg3_code(&e, &t, 4, &Place::infinity()), Err(ConstructionError::NotDegreeThree(1))));
    }

    #[test]
    fn audit_predicts_rational_half_length_codes() {
        let e = gf289_curve();
        let t = GroupTable::from_curve(&e).unwrap();
        let h = index2_subgroups(&t)[0];
        let outside = in_coset(&t, h, false);
        let g = Divisor::from_terms(outside[..4].iter().map(|p| (Place::rational(p.clone()), 1)));
        let spec = CodeSpec::new(e.clone(), in_coset(&t, h, true), g, Provenance::default()).unwrap();
        let a = audit_code(&spec, &t).unwrap();
        assert_eq!(a.even_n_hypotheses, Some(true));
        assert!(a.predicts_not_mds);
        assert!(!mds_combinatorial(&spec, &t).unwrap().is_mds());
    }
}
