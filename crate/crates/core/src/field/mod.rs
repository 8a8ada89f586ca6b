//! Finite fields `GF(p^a)` and one-step towers `GF(q^d) / GF(q)`.
//!
//! A [`Field`] is a cheap, shareable handle. Elements ([`FieldElem`]) remember
//! which field they belong to; the unchecked arithmetic methods on `Field`
//! assume their operands come from it, while [`field_arith`] validates.

mod base;
pub(crate) mod poly;
mod quadratic;

use std::cmp::Ordering;
use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering as AtomicOrdering};
use std::sync::{Arc, OnceLock};

use rand::Rng as _;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

pub use base::MAX_TABLE_ORDER;
pub(crate) use base::prime_factors;
pub(crate) use base::BaseField;
use poly::Ring;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u32),
    #[error("extension degree must be positive, got {0}")]
    InvalidDegree(u32),
    #[error("modulus is not monic of the requested degree over GF(p)")]
    MalformedModulus,
    #[error("modulus is reducible")]
    ReducibleModulus,
    #[error("GF({p}^{a}) exceeds the table budget")]
    FieldTooLarge { p: u32, a: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    MixedContexts,
    #[error("not a subfield of the element's field")]
    NotASubfield,
    #[error("degenerate quadratic: both A and B are zero")]
    DegenerateEquation,
    #[error("towers are one level deep: cannot extend an extension field")]
    NestedTower,
    #[error("element coefficients are malformed for this field")]
    MalformedElement,
    #[error("operation {op} expects {expected} operands")]
    Arity { op: &'static str, expected: usize },
}

static NEXT_FIELD_ID: AtomicU32 = AtomicU32::new(1);

/// Identifier tying elements to the field that produced them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldId(u32);

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElem {
    field: FieldId,
    /// Base fields: one table index. Extensions: `d` base-field indices, constant first.
    c: SmallVec<[u32; 3]>,
}

impl FieldElem {
    pub fn field_id(&self) -> FieldId {
        self.field
    }

    /// Raw representation; see the type docs.
    pub fn raw(&self) -> &[u32] {
        &self.c
    }
}

impl PartialOrd for FieldElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.field
            .cmp(&other.field)
            .then_with(|| self.c.iter().rev().cmp(other.c.iter().rev()))
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.c.as_slice())
    }
}

struct ExtField {
    base: Field,
    degree: usize,
    /// Monic, `degree + 1` base indices.
    modulus: Vec<u32>,
    /// `(w^i)^q` for `i < degree`, as coefficient vectors.
    frob: Vec<Vec<u32>>,
}

enum Kind {
    Base(BaseField),
    Ext(ExtField),
}

struct Inner {
    id: FieldId,
    kind: Kind,
    nonresidue: OnceLock<Option<FieldElem>>,
    traces: OnceLock<Vec<u8>>,
}

/// A finite field context. Cloning shares the same field.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            Kind::Base(b) => write!(f, "GF({}^{})", b.p, b.a),
            Kind::Ext(e) => write!(f, "{:?}[w]/deg {}", e.base, e.degree),
        }
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.0.id == other.0.id
    }
}
impl Eq for Field {}

/// Serializable description of a base field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub a: u32,
    pub modulus: Vec<u32>,
}

/// Build `GF(p^a)`; without a modulus the smallest monic irreducible is used.
pub fn make_field(p: u32, a: u32, modulus: Option<Vec<u32>>) -> Result<Field, FieldError> {
    let base = BaseField::new(p, a, modulus)?;
    Ok(Field::wrap(Kind::Base(base)))
}

/// Build `GF(q^d)` over the base field `base`, using the smallest monic
/// irreducible of degree `d` over `base`.
pub fn extend_field(base: &Field, d: usize) -> Result<Field, FieldError> {
    let b = base.base_tables().ok_or(FieldError::NestedTower)?;
    if d < 2 {
        return Err(FieldError::InvalidDegree(d as u32));
    }
    let q = b.q as u64;
    let count = q.checked_pow(d as u32).ok_or(FieldError::FieldTooLarge { p: b.p, a: b.a * d as u32 })?;
    for n in 0..count {
        let mut m: Vec<u32> = (0..d).map(|i| ((n / q.pow(i as u32)) % q) as u32).collect();
        m.push(1);
        if poly::is_irreducible(b, &m) {
            return extend_field_with(base, m);
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Build an extension with an explicit monic modulus over `base`.
pub fn extend_field_with(base: &Field, modulus: Vec<u32>) -> Result<Field, FieldError> {
    let b = base.base_tables().ok_or(FieldError::NestedTower)?;
    let d = modulus.len().saturating_sub(1);
    if d < 2 || *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= b.q) {
        return Err(FieldError::MalformedModulus);
    }
    if !poly::is_irreducible(b, &modulus) {
        return Err(FieldError::ReducibleModulus);
    }
    let w = vec![0u32, 1];
    let wq = poly::powmod(b, &w, b.q as u64, &modulus);
    let mut frob = Vec::with_capacity(d);
    let mut cur = vec![1u32];
    for _ in 0..d {
        let mut v = cur.clone();
        v.resize(d, 0);
        frob.push(v);
        cur = poly::mulmod(b, &cur, &wq, &modulus);
    }
    Ok(Field::wrap(Kind::Ext(ExtField { base: base.clone(), degree: d, modulus, frob })))
}

/// Checked arithmetic entry point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Inv,
    Pow(u64),
}

pub fn field_arith(ctx: &Field, op: ArithOp, operands: &[&FieldElem]) -> Result<FieldElem, FieldError> {
    if operands.iter().any(|e| e.field != ctx.id()) {
        return Err(FieldError::MixedContexts);
    }
    let arity = match op {
        ArithOp::Add | ArithOp::Sub | ArithOp::Mul => 2,
        ArithOp::Inv | ArithOp::Pow(_) => 1,
    };
    if operands.len() != arity {
        let name = match op {
            ArithOp::Add => "add",
            ArithOp::Sub => "sub",
            ArithOp::Mul => "mul",
            ArithOp::Inv => "inv",
            ArithOp::Pow(_) => "pow",
        };
        return Err(FieldError::Arity { op: name, expected: arity });
    }
    Ok(match op {
        ArithOp::Add => ctx.add(operands[0], operands[1]),
        ArithOp::Sub => ctx.sub(operands[0], operands[1]),
        ArithOp::Mul => ctx.mul(operands[0], operands[1]),
        ArithOp::Inv => ctx.inv(operands[0]).ok_or(FieldError::DivisionByZero)?,
        ArithOp::Pow(e) => ctx.pow(operands[0], e),
    })
}

/// `e^|relative_to|`, the Frobenius of `ctx` relative to a subfield.
pub fn frobenius(ctx: &Field, e: &FieldElem, relative_to: &Field) -> Result<FieldElem, FieldError> {
    if e.field != ctx.id() {
        return Err(FieldError::MixedContexts);
    }
    if ctx.base().is_some_and(|b| b == relative_to) {
        return Ok(ctx.frobenius(e));
    }
    if relative_to.degree_over_prime() == 1 && relative_to.characteristic() == ctx.characteristic() {
        return Ok(ctx.pow(e, ctx.characteristic() as u64));
    }
    if relative_to == ctx {
        return Ok(e.clone());
    }
    Err(FieldError::NotASubfield)
}

/// Solve `A y^2 + B y + C = 0` in `ctx`. Roots come back sorted.
pub fn solve_quadratic(
    ctx: &Field,
    a: &FieldElem,
    b: &FieldElem,
    c: &FieldElem,
) -> Result<Vec<FieldElem>, FieldError> {
    if [a, b, c].iter().any(|e| e.field != ctx.id()) {
        return Err(FieldError::MixedContexts);
    }
    quadratic::solve(ctx, a, b, c)
}

impl Field {
    fn wrap(kind: Kind) -> Field {
        let id = FieldId(NEXT_FIELD_ID.fetch_add(1, AtomicOrdering::Relaxed));
        Field(Arc::new(Inner { id, kind, nonresidue: OnceLock::new(), traces: OnceLock::new() }))
    }

    pub fn id(&self) -> FieldId {
        self.0.id
    }

    pub(crate) fn base_tables(&self) -> Option<&BaseField> {
        match &self.0.kind {
            Kind::Base(b) => Some(b),
            Kind::Ext(_) => None,
        }
    }

    fn base_field_tables(&self) -> &BaseField {
        match &self.0.kind {
            Kind::Base(b) => b,
            Kind::Ext(e) => e.base.base_field_tables(),
        }
    }

    /// The field this one extends, if it is an extension.
    pub fn base(&self) -> Option<&Field> {
        match &self.0.kind {
            Kind::Base(_) => None,
            Kind::Ext(e) => Some(&e.base),
        }
    }

    pub fn is_extension(&self) -> bool {
        matches!(self.0.kind, Kind::Ext(_))
    }

    pub fn characteristic(&self) -> u32 {
        self.base_field_tables().p
    }

    /// Degree over the base field (1 for base fields).
    pub fn ext_degree(&self) -> usize {
        match &self.0.kind {
            Kind::Base(_) => 1,
            Kind::Ext(e) => e.degree,
        }
    }

    pub fn degree_over_prime(&self) -> u32 {
        self.base_field_tables().a * self.ext_degree() as u32
    }

    pub fn order(&self) -> u64 {
        (self.characteristic() as u64).pow(self.degree_over_prime())
    }

    /// Order of the base field (the field itself when not an extension).
    pub fn base_order(&self) -> u64 {
        self.base_field_tables().q as u64
    }

    pub fn spec(&self) -> FieldSpec {
        let b = self.base_field_tables();
        FieldSpec { p: b.p, a: b.a, modulus: b.modulus.clone() }
    }

    /// Modulus of the extension over its base, as base elements.
    pub fn ext_modulus(&self) -> Option<Vec<FieldElem>> {
        match &self.0.kind {
            Kind::Base(_) => None,
            Kind::Ext(e) => Some(e.modulus.iter().map(|&c| e.base.from_index(c)).collect()),
        }
    }

    fn mk(&self, c: SmallVec<[u32; 3]>) -> FieldElem {
        FieldElem { field: self.id(), c }
    }

    fn scalar(&self, v: u32) -> FieldElem {
        let mut c: SmallVec<[u32; 3]> = SmallVec::from_elem(0, self.ext_degree());
        c[0] = v;
        self.mk(c)
    }

    pub fn zero(&self) -> FieldElem {
        self.scalar(0)
    }

    pub fn one(&self) -> FieldElem {
        self.scalar(1)
    }

    pub fn from_int(&self, n: i64) -> FieldElem {
        let b = self.base_field_tables();
        self.scalar(b.from_int(n))
    }

    /// Base field element with the given table index.
    pub fn from_index(&self, idx: u32) -> FieldElem {
        debug_assert!(!self.is_extension());
        self.mk(SmallVec::from_slice(&[idx]))
    }

    /// Table index of a base field element.
    pub fn index(&self, e: &FieldElem) -> u32 {
        debug_assert!(!self.is_extension() && e.field == self.id());
        e.c[0]
    }

    /// The element `w` (or `eta` for a base field): class of the variable.
    pub fn generator(&self) -> FieldElem {
        match &self.0.kind {
            Kind::Base(b) => {
                if b.a == 1 {
                    // GF(p) = GF(p)[x]/(x - r); the class of x is r
                    self.from_index(b.neg(b.modulus[0]))
                } else {
                    self.from_index(b.p)
                }
            }
            Kind::Ext(e) => {
                let mut c: SmallVec<[u32; 3]> = SmallVec::from_elem(0, e.degree);
                c[1] = 1;
                self.mk(c)
            }
        }
    }

    /// All elements of a base field in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        let q = self.base_field_tables().q;
        let n = if self.is_extension() { 0 } else { q };
        (0..n).map(move |i| self.from_index(i))
    }

    /// Build an element from its coefficients over GF(p) for base fields, or
    /// from base-field elements for extensions.
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElem, FieldError> {
        match &self.0.kind {
            Kind::Base(b) => b.from_digits(coeffs).map(|i| self.from_index(i)).ok_or(FieldError::MalformedElement),
            Kind::Ext(e) => {
                if coeffs.len() != e.degree || coeffs.iter().any(|&c| c >= e.base.base_field_tables().q) {
                    return Err(FieldError::MalformedElement);
                }
                Ok(self.mk(SmallVec::from_slice(coeffs)))
            }
        }
    }

    /// Parse from nested coefficient lists: `[c0, c1, ...]` over GF(p) for a
    /// base field, or `[[..], [..], ...]` for an extension.
    pub fn elem_from_json(&self, v: &ElemJson) -> Result<FieldElem, FieldError> {
        match (v, &self.0.kind) {
            (ElemJson::Flat(c), Kind::Base(_)) => self.from_coeffs(c),
            (ElemJson::Nested(parts), Kind::Ext(e)) => {
                if parts.len() != e.degree {
                    return Err(FieldError::MalformedElement);
                }
                let mut c = SmallVec::new();
                for part in parts {
                    c.push(e.base.from_coeffs(part)?.c[0]);
                }
                Ok(self.mk(c))
            }
            _ => Err(FieldError::MalformedElement),
        }
    }

    pub fn elem_to_json(&self, e: &FieldElem) -> ElemJson {
        match &self.0.kind {
            Kind::Base(b) => ElemJson::Flat(b.digits(e.c[0])),
            Kind::Ext(x) => {
                let b = x.base.base_field_tables();
                ElemJson::Nested(e.c.iter().map(|&i| b.digits(i)).collect())
            }
        }
    }

    /// Coefficients over GF(p), concatenated over tower coordinates.
    pub fn abs_coords(&self, e: &FieldElem) -> Vec<u32> {
        let b = self.base_field_tables();
        e.c.iter().flat_map(|&i| b.digits(i)).collect()
    }

    fn from_abs_coords(&self, coords: &[u32]) -> FieldElem {
        let b = self.base_field_tables();
        let a = b.a as usize;
        let c = coords.chunks(a).map(|ch| b.from_digits(ch).expect("valid digits")).collect();
        self.mk(c)
    }

    /// Render as `c0:c1:...` over GF(p).
    pub fn render(&self, e: &FieldElem) -> String {
        self.abs_coords(e).iter().map(|d| d.to_string()).collect::<Vec<_>>().join(":")
    }

    /// Inverse of [`Field::render`].
    pub fn parse_rendered(&self, s: &str) -> Result<FieldElem, FieldError> {
        let digits: Result<Vec<u32>, _> = s.split(':').map(|t| t.trim().parse::<u32>()).collect();
        let digits = digits.map_err(|_| FieldError::MalformedElement)?;
        let p = self.characteristic();
        if digits.len() != self.degree_over_prime() as usize || digits.iter().any(|&d| d >= p) {
            return Err(FieldError::MalformedElement);
        }
        Ok(self.from_abs_coords(&digits))
    }

    pub fn random(&self, rng: &mut ChaCha8Rng) -> FieldElem {
        let q = self.base_field_tables().q;
        let c = (0..self.ext_degree()).map(|_| rng.gen_range(0..q)).collect();
        self.mk(c)
    }

    #[inline]
    pub fn is_zero(&self, e: &FieldElem) -> bool {
        e.c.iter().all(|&c| c == 0)
    }

    #[inline]
    pub fn is_one(&self, e: &FieldElem) -> bool {
        e.c[0] == 1 && e.c[1..].iter().all(|&c| c == 0)
    }

    #[inline]
    pub fn add(&self, x: &FieldElem, y: &FieldElem) -> FieldElem {
        debug_assert_eq!(x.field, y.field);
        let b = self.base_field_tables();
        self.mk(x.c.iter().zip(&y.c).map(|(&u, &v)| b.add(u, v)).collect())
    }

    #[inline]
    pub fn sub(&self, x: &FieldElem, y: &FieldElem) -> FieldElem {
        debug_assert_eq!(x.field, y.field);
        let b = self.base_field_tables();
        self.mk(x.c.iter().zip(&y.c).map(|(&u, &v)| b.sub(u, v)).collect())
    }

    #[inline]
    pub fn neg(&self, x: &FieldElem) -> FieldElem {
        let b = self.base_field_tables();
        self.mk(x.c.iter().map(|&u| b.neg(u)).collect())
    }

    pub fn mul(&self, x: &FieldElem, y: &FieldElem) -> FieldElem {
        debug_assert_eq!(x.field, y.field);
        match &self.0.kind {
            Kind::Base(b) => self.from_index(b.mul(x.c[0], y.c[0])),
            Kind::Ext(e) => {
                let b = e.base.base_field_tables();
                let d = e.degree;
                let mut prod = [0u32; 16];
                let mut prod_v;
                let buf: &mut [u32] = if 2 * d - 1 <= 16 {
                    &mut prod[..2 * d - 1]
                } else {
                    prod_v = vec![0u32; 2 * d - 1];
                    &mut prod_v[..]
                };
                for (i, &u) in x.c.iter().enumerate() {
                    if u == 0 {
                        continue;
                    }
                    for (j, &v) in y.c.iter().enumerate() {
                        buf[i + j] = b.add(buf[i + j], b.mul(u, v));
                    }
                }
                // reduce by the monic modulus from the top
                for k in (d..2 * d - 1).rev() {
                    let t = buf[k];
                    if t == 0 {
                        continue;
                    }
                    buf[k] = 0;
                    for i in 0..d {
                        let m = e.modulus[i];
                        if m != 0 {
                            buf[k - d + i] = b.sub(buf[k - d + i], b.mul(t, m));
                        }
                    }
                }
                self.mk(SmallVec::from_slice(&buf[..d]))
            }
        }
    }

    #[inline]
    pub fn square(&self, x: &FieldElem) -> FieldElem {
        self.mul(x, x)
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self, x: &FieldElem) -> Option<FieldElem> {
        match &self.0.kind {
            Kind::Base(b) => b.inv(x.c[0]).map(|i| self.from_index(i)),
            Kind::Ext(e) => {
                if self.is_zero(x) {
                    return None;
                }
                let b = e.base.base_field_tables();
                let mut f: Vec<u32> = x.c.to_vec();
                poly::trim(b, &mut f);
                let mut inv = poly::inv_mod(b, &f, &e.modulus)?;
                inv.resize(e.degree, 0);
                Some(self.mk(SmallVec::from_vec(inv)))
            }
        }
    }

    pub fn div(&self, x: &FieldElem, y: &FieldElem) -> Option<FieldElem> {
        self.inv(y).map(|yi| self.mul(x, &yi))
    }

    pub fn pow(&self, x: &FieldElem, mut e: u64) -> FieldElem {
        if let Kind::Base(b) = &self.0.kind {
            return self.from_index(b.pow(x.c[0], e));
        }
        let mut result = self.one();
        let mut base = x.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.square(&base);
            }
        }
        result
    }

    /// Integer multiple `n * x`.
    pub fn mul_int(&self, x: &FieldElem, n: i64) -> FieldElem {
        self.mul(x, &self.from_int(n))
    }

    /// Frobenius relative to the base (extensions) or to GF(p) (base fields).
    pub fn frobenius(&self, x: &FieldElem) -> FieldElem {
        match &self.0.kind {
            Kind::Base(b) => self.from_index(b.pow(x.c[0], b.p as u64)),
            Kind::Ext(e) => {
                let b = e.base.base_field_tables();
                let mut out: SmallVec<[u32; 3]> = SmallVec::from_elem(0, e.degree);
                for (i, &ci) in x.c.iter().enumerate() {
                    if ci == 0 {
                        continue;
                    }
                    for (k, &w) in e.frob[i].iter().enumerate() {
                        if w != 0 {
                            out[k] = b.add(out[k], b.mul(ci, w));
                        }
                    }
                }
                self.mk(out)
            }
        }
    }

    /// Embed a base-field element into this extension.
    pub fn embed(&self, x: &FieldElem) -> FieldElem {
        match &self.0.kind {
            Kind::Base(_) => {
                debug_assert_eq!(x.field, self.id());
                x.clone()
            }
            Kind::Ext(e) => {
                debug_assert_eq!(x.field, e.base.id());
                self.scalar(x.c[0])
            }
        }
    }

    /// Project an element of this extension back to the base, if it lies there.
    pub fn project(&self, x: &FieldElem) -> Option<FieldElem> {
        match &self.0.kind {
            Kind::Base(_) => Some(x.clone()),
            Kind::Ext(e) => x.c[1..].iter().all(|&c| c == 0).then(|| e.base.from_index(x.c[0])),
        }
    }

    /// Bring `x` into this field: embed base elements, pass own elements through.
    pub fn lift(&self, x: &FieldElem) -> FieldElem {
        if x.field == self.id() {
            x.clone()
        } else {
            self.embed(x)
        }
    }

    pub fn in_base(&self, x: &FieldElem) -> bool {
        x.c[1..].iter().all(|&c| c == 0)
    }

    /// Square root in odd characteristic via exponentiation (Tonelli-Shanks
    /// unless the order is 3 mod 4); in characteristic 2 every element has
    /// the unique root `x^(Q/2)`.
    pub fn sqrt(&self, x: &FieldElem) -> Option<FieldElem> {
        quadratic::sqrt(self, x)
    }

    /// Absolute trace to GF(p), as an integer residue.
    pub fn abs_trace(&self, x: &FieldElem) -> u32 {
        let p = self.characteristic() as u64;
        let mut acc = self.zero();
        let mut t = x.clone();
        for _ in 0..self.degree_over_prime() {
            acc = self.add(&acc, &t);
            t = self.pow(&t, p);
        }
        let base = self.project(&acc).expect("trace lies in GF(p)");
        let b = self.base_field_tables();
        b.digits(base.c[0])[0]
    }

    /// Quadratic character of a base field element: 0, 1 or -1.
    /// Odd characteristic only.
    pub fn chi(&self, x: &FieldElem) -> i32 {
        let b = self.base_tables().expect("quadratic character on a base field");
        debug_assert!(b.p != 2);
        match b.log(x.c[0]) {
            None => 0,
            Some(l) if l % 2 == 0 => 1,
            Some(_) => -1,
        }
    }

    /// Absolute trace of a base field element, through a cached table.
    pub fn trace_fast(&self, x: &FieldElem) -> u32 {
        let table = self.0.traces.get_or_init(|| {
            let b = self.base_tables().expect("trace table on a base field");
            let basis: Vec<u32> = (0..b.a)
                .map(|i| self.abs_trace(&self.from_index((b.p).pow(i))))
                .collect();
            (0..b.q)
                .map(|n| {
                    let d = b.digits(n);
                    (d.iter().zip(&basis).map(|(&u, &v)| u * v).sum::<u32>() % b.p) as u8
                })
                .collect()
        });
        table[x.c[0] as usize] as u32
    }

    pub(crate) fn cached_nonresidue(&self) -> Option<FieldElem> {
        self.0
            .nonresidue
            .get_or_init(|| {
                if self.characteristic() == 2 {
                    return None;
                }
                let q = self.order();
                let mut rng = ChaCha8Rng::seed_from_u64(0x6e6f6e72);
                (0..10_000).map(|_| self.random(&mut rng)).find(|z| {
                    !self.is_zero(z) && {
                        let e = self.pow(z, (q - 1) / 2);
                        !self.is_one(&e)
                    }
                })
            })
            .clone()
    }
}

impl Ring for Field {
    type E = FieldElem;

    fn zero(&self) -> FieldElem {
        Field::zero(self)
    }
    fn one(&self) -> FieldElem {
        Field::one(self)
    }
    fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        Field::add(self, a, b)
    }
    fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        Field::sub(self, a, b)
    }
    fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        Field::mul(self, a, b)
    }
    fn inv(&self, a: &FieldElem) -> Option<FieldElem> {
        Field::inv(self, a)
    }
    fn is_zero(&self, a: &FieldElem) -> bool {
        Field::is_zero(self, a)
    }
    fn order(&self) -> u64 {
        Field::order(self)
    }
    fn characteristic(&self) -> u32 {
        Field::characteristic(self)
    }
    fn absolute_degree(&self) -> u32 {
        self.degree_over_prime()
    }
    fn random(&self, rng: &mut ChaCha8Rng) -> FieldElem {
        Field::random(self, rng)
    }
}

/// All roots in `field` of the polynomial with the given coefficients
/// (constant first), sorted.
pub fn poly_roots(field: &Field, coeffs: &[FieldElem], seed: u64) -> Vec<FieldElem> {
    let mut f = coeffs.to_vec();
    poly::trim(field, &mut f);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = poly::roots(field, &f, &mut rng);
    r.sort();
    r.dedup();
    r
}

/// Element serialization: flat coefficient list over GF(p) for base fields,
/// list of such lists (one per tower coordinate) for extensions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElemJson {
    Flat(Vec<u32>),
    Nested(Vec<Vec<u32>>),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf289() -> Field {
        make_field(17, 2, Some(vec![3, 16, 1])).unwrap()
    }

    #[test]
    fn example_moduli_are_irreducible() {
        assert!(make_field(17, 2, Some(vec![3, 16, 1])).is_ok());
        assert!(make_field(3, 6, Some(vec![2, 2, 1, 0, 2, 0, 1])).is_ok());
        assert!(make_field(2, 10, Some(vec![1, 1, 1, 1, 0, 1, 1, 0, 0, 0, 1])).is_ok());
    }

    #[test]
    fn eta_squared_in_gf289() {
        let f = gf289();
        let eta = f.generator();
        let want = f.from_coeffs(&[14, 1]).unwrap();
        assert_eq!(f.mul(&eta, &eta), want);
        assert_eq!(field_arith(&f, ArithOp::Inv, &[&f.one()]).unwrap(), f.one());
        assert_eq!(field_arith(&f, ArithOp::Inv, &[&f.zero()]), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn mixed_contexts_are_rejected() {
        let f = gf289();
        let g = gf289();
        assert_eq!(
            field_arith(&f, ArithOp::Add, &[&f.one(), &g.one()]),
            Err(FieldError::MixedContexts)
        );
    }

    #[test]
    fn tower_embedding_and_frobenius() {
        let f = gf289();
        let e3 = extend_field(&f, 3).unwrap();
        assert_eq!(e3.order(), 289u64.pow(3));
        assert_eq!(e3.embed(&f.one()), e3.one());
        assert_eq!(e3.embed(&f.zero()), e3.zero());
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let x = f.random(&mut rng);
            let ex = e3.embed(&x);
            assert_eq!(frobenius(&e3, &ex, &f).unwrap(), ex);
            // the relative Frobenius agrees with direct exponentiation by q
            let y = e3.random(&mut rng);
            assert_eq!(e3.frobenius(&y), e3.pow(&y, 289));
            let y3 = e3.frobenius(&e3.frobenius(&e3.frobenius(&y)));
            assert_eq!(y3, y);
        }
        let eta = f.generator();
        let prime = make_field(17, 1, None).unwrap();
        assert_eq!(frobenius(&f, &eta, &prime).unwrap(), f.pow(&eta, 17));
        let other = make_field(5, 1, None).unwrap();
        assert_eq!(frobenius(&f, &eta, &other), Err(FieldError::NotASubfield));
    }

    #[test]
    fn extension_inverse() {
        let f = make_field(2, 10, Some(vec![1, 1, 1, 1, 0, 1, 1, 0, 0, 0, 1])).unwrap();
        let e3 = extend_field(&f, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let x = e3.random(&mut rng);
            if e3.is_zero(&x) {
                continue;
            }
            assert!(e3.is_one(&e3.mul(&x, &e3.inv(&x).unwrap())));
        }
    }

    #[test]
    fn render_round_trip() {
        let f = gf289();
        let e3 = extend_field(&f, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let x = e3.random(&mut rng);
            assert_eq!(e3.parse_rendered(&e3.render(&x)).unwrap(), x);
            assert_eq!(e3.elem_from_json(&e3.elem_to_json(&x)).unwrap(), x);
        }
    }

    #[test]
    fn roots_of_cubic_in_cubic_extension() {
        let f = gf289();
        let e3 = extend_field(&f, 3).unwrap();
        // x^3 + 14 eta + 3 has no root in GF(289) but splits in GF(289^3)
        let c0 = f.from_coeffs(&[3, 14]).unwrap();
        let coeffs = [e3.embed(&c0), e3.zero(), e3.zero(), e3.one()];
        let roots = poly_roots(&e3, &coeffs, 1);
        assert_eq!(roots.len(), 3);
        for r in &roots {
            let v = e3.add(&e3.pow(r, 3), &coeffs[0]);
            assert!(e3.is_zero(&v));
        }
        let base_roots = poly_roots(&f, &[c0, f.zero(), f.zero(), f.one()], 1);
        assert!(base_roots.is_empty());
    }
}
