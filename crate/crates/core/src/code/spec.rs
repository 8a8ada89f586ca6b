//! Code descriptions, generator matrices and their file formats.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::curve::{Curve, CurveJson, Point, PointJson};
use crate::field::{ElemJson, Field, FieldElem, FieldSpec};
use crate::group::Index2Subgroup;
use crate::places::{Divisor, DivisorTermJson};

use super::riemann_roch::rr_basis;
use super::CodeError;

/// Where a code came from: enough to rebuild it and to audit it.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub construction: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub curve_search: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub subgroup: Option<Index2Subgroup>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub coset_representative: Option<PointJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub place_method: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness_b: Option<ElemJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub citation: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

/// An elliptic code `C(E, D, G)`.
#[derive(Clone, Debug)]
pub struct CodeSpec {
    pub curve: Curve,
    pub points: Vec<Point>,
    pub g: Divisor,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeSpecJson {
    pub curve: CurveJson,
    pub n: usize,
    pub k: usize,
    #[serde(rename = "D")]
    pub d: Vec<PointJson>,
    #[serde(rename = "G")]
    pub g: Vec<DivisorTermJson>,
    pub provenance: Provenance,
}

impl CodeSpec {
    pub fn new(curve: Curve, points: Vec<Point>, g: Divisor, provenance: Provenance) -> Result<CodeSpec, CodeError> {
        let base = curve.field().id();
        let mut seen = HashSet::with_capacity(points.len());
        for p in &points {
            if p.field_id().is_some_and(|id| id != base) || !curve.contains(p) {
                return Err(CodeError::InvalidSpec(format!("{p:?} is not a rational point of the curve")));
            }
            if !seen.insert(p.clone()) {
                return Err(CodeError::InvalidSpec(format!("{p:?} appears twice in D")));
            }
        }
        for (place, _) in g.terms() {
            if let Some(p) = place.as_rational() {
                if seen.contains(p) {
                    return Err(CodeError::InvalidSpec(format!("{p:?} lies in both D and Supp(G)")));
                }
            }
        }
        let k = g.degree();
        if k <= 0 || k as usize >= points.len() {
            return Err(CodeError::InvalidSpec(format!("need 0 < deg G = {k} < n = {}", points.len())));
        }
        Ok(CodeSpec { curve, points, g, provenance })
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn k(&self) -> usize {
        self.g.degree() as usize
    }

    /// `k = 1` codes are legal but degenerate.
    pub fn is_degenerate(&self) -> bool {
        self.k() == 1
    }

    pub fn to_json(&self) -> CodeSpecJson {
        CodeSpecJson {
            curve: self.curve.to_json(),
            n: self.n(),
            k: self.k(),
            d: self.points.iter().map(|p| self.curve.point_to_json(p)).collect(),
            g: self.g.to_json(&self.curve),
            provenance: self.provenance.clone(),
        }
    }

    pub fn from_json(j: &CodeSpecJson) -> Result<CodeSpec, CodeError> {
        let curve = Curve::from_json(&j.curve)?;
        let points = j.d.iter().map(|p| curve.point_from_json(p, 1)).collect::<Result<Vec<_>, _>>()?;
        let g = Divisor::from_json(&curve, &j.g)?;
        let spec = CodeSpec::new(curve, points, g, j.provenance.clone())?;
        if spec.n() != j.n || spec.k() != j.k {
            return Err(CodeError::InvalidSpec("n or k disagrees with D and G".into()));
        }
        Ok(spec)
    }
}

/// A `k x n` generator matrix over the base field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenMatrix {
    pub field: Field,
    pub rows: Vec<Vec<FieldElem>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixHeader {
    pub n: usize,
    pub k: usize,
    pub field: FieldSpec,
    pub provenance: Provenance,
}

impl GenMatrix {
    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len())
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        rref(&self.field, &mut rows)
    }

    /// CSV with a leading `#` line holding the JSON header.
    pub fn to_csv(&self, provenance: &Provenance) -> String {
        let header = MatrixHeader { n: self.n(), k: self.k(), field: self.field.spec(), provenance: provenance.clone() };
        let mut out = format!("# {}\n", serde_json::to_string(&header).expect("header serializes"));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|e| self.field.render(e)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(field: &Field, text: &str) -> Result<(MatrixHeader, GenMatrix), CodeError> {
        let mut header = None;
        let mut rows = Vec::new();
        for line in text.lines() {
            if let Some(h) = line.strip_prefix('#') {
                header = Some(
                    serde_json::from_str::<MatrixHeader>(h.trim())
                        .map_err(|e| CodeError::InvalidSpec(format!("matrix header: {e}")))?,
                );
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let row = line.split(',').map(|c| field.parse_rendered(c)).collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        let header = header.ok_or_else(|| CodeError::InvalidSpec("missing matrix header".into()))?;
        let m = GenMatrix { field: field.clone(), rows };
        if m.k() != header.k || m.rows.iter().any(|r| r.len() != header.n) || header.field != field.spec() {
            return Err(CodeError::InvalidSpec("matrix shape disagrees with its header".into()));
        }
        Ok((header, m))
    }
}

/// Reduced row echelon form in place; returns the rank and drops zero rows.
pub(crate) fn rref(f: &Field, rows: &mut Vec<Vec<FieldElem>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !f.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, p);
        let inv = f.inv(&rows[r][c]).expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = f.mul(x, &inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || f.is_zero(&row[c]) {
                continue;
            }
            let factor = row[c].clone();
            for (x, pv) in row.iter_mut().zip(&pivot_row) {
                *x = f.sub(x, &f.mul(&factor, pv));
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    r
}

/// Evaluate a basis of `L(G)` on `D`. With non-rational places in `G` the
/// evaluations live in `GF(q^d)`; their echelon form is rational and is
/// projected back to `F_q`.
pub fn generator_matrix(spec: &CodeSpec) -> Result<GenMatrix, CodeError> {
    let curve = &spec.curve;
    let basis = rr_basis(curve, &spec.g)?;
    let k = spec.k();
    if basis.len() != k {
        return Err(CodeError::DimensionMismatch(format!("basis of size {} for k = {k}", basis.len())));
    }
    let degree = basis[0].coeff_degree();
    let ext = curve.over(degree)?.field.clone();
    let mut rows = Vec::with_capacity(k);
    for b in &basis {
        let row = spec.points.iter().map(|p| b.eval(curve, p)).collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    let base = curve.field().clone();
    if degree == 1 {
        let m = GenMatrix { field: base, rows };
        if m.rank() != k {
            return Err(CodeError::DimensionMismatch(format!("generator matrix has rank {} < {k}", m.rank())));
        }
        return Ok(m);
    }
    let rank = rref(&ext, &mut rows);
    if rank != k {
        return Err(CodeError::DimensionMismatch(format!("generator matrix has rank {rank} < {k}")));
    }
    let projected = rows
        .iter()
        .map(|r| r.iter().map(|e| ext.project(e).ok_or(CodeError::EchelonNotRational)).collect())
        .collect::<Result<Vec<Vec<_>>, _>>()?;
    Ok(GenMatrix { field: base, rows: projected })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::places::tests::gf289_curve;
    use crate::places::{find_degree3_avoid, Place};

    fn sample() -> CodeSpec {
        let e = gf289_curve();
        let (r, _) = find_degree3_avoid(&e).unwrap();
        let pts: Vec<Point> = e.enumerate_points().unwrap().into_iter().filter(|p| !p.is_inf()).take(12).collect();
        let g = Divisor::from_terms([(r, 1), (Place::infinity(), 2)]);
        CodeSpec::new(e, pts, g, Provenance { construction: "test".into(), ..Default::default() }).unwrap()
    }

    #[test]
    fn json_round_trip() {
        let s = sample();
        let j = s.to_json();
        let text = serde_json::to_string(&j).unwrap();
        let back = CodeSpec::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back.to_json(), j);
        assert_eq!((back.n(), back.k()), (12, 5));
    }

    #[test]
    fn csv_round_trip_and_rank() {
        let s = sample();
        let m = generator_matrix(&s).unwrap();
        assert_eq!(m.rank(), 5);
        let text = m.to_csv(&s.provenance);
        assert!(text.starts_with("# {"));
        let (h, back) = GenMatrix::from_csv(s.curve.field(), &text).unwrap();
        assert_eq!(back, m);
        assert_eq!((h.n, h.k), (12, 5));
    }

    #[test]
    fn validation() {
        let s = sample();
        let mut pts = s.points.clone();
        pts.push(pts[0].clone());
        assert!(CodeSpec::new(s.curve.clone(), pts, s.g.clone(), Provenance::default()).is_err());
        let mut g = s.g.clone();
        g.add_term(Place::rational(s.points[0].clone()), 1);
        assert!(CodeSpec::new(s.curve.clone(), s.points.clone(), g, Provenance::default()).is_err());
        let g = Divisor::point(Point::Inf, 12);
        assert!(CodeSpec::new(s.curve.clone(), s.points.clone(), g, Provenance::default()).is_err());
    }
}
