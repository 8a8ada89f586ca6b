//! Dense univariate polynomials over any of the crate's finite rings.
//!
//! Coefficients are stored constant term first and kept trimmed, so the zero
//! polynomial is the empty vector.

use std::fmt::Debug;

use rand::Rng as _;
use rand_chacha::ChaCha8Rng;

use super::base::prime_factors;

/// The arithmetic a polynomial routine needs from its coefficient field.
pub(crate) trait Ring {
    type E: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Option<Self::E>;
    fn is_zero(&self, a: &Self::E) -> bool;
    /// Number of elements.
    fn order(&self) -> u64;
    fn characteristic(&self) -> u32;
    /// Degree over the prime field.
    fn absolute_degree(&self) -> u32;
    fn random(&self, rng: &mut ChaCha8Rng) -> Self::E;
}

/// Arithmetic modulo a prime, used to bootstrap `GF(p^a)`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct PrimeRing(pub u32);

impl Ring for PrimeRing {
    type E = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1 % self.0
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + *b as u64) % self.0 as u64) as u32
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + self.0 as u64 - *b as u64) % self.0 as u64) as u32
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.0 as u64) as u32
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        if *a % self.0 == 0 {
            return None;
        }
        // Fermat
        let mut result = 1u64;
        let mut base = *a as u64 % self.0 as u64;
        let mut e = self.0 as u64 - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % self.0 as u64;
            }
            base = base * base % self.0 as u64;
            e >>= 1;
        }
        Some(result as u32)
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn order(&self) -> u64 {
        self.0 as u64
    }
    fn characteristic(&self) -> u32 {
        self.0
    }
    fn absolute_degree(&self) -> u32 {
        1
    }
    fn random(&self, rng: &mut ChaCha8Rng) -> u32 {
        rng.gen_range(0..self.0)
    }
}

pub(crate) fn trim<R: Ring>(r: &R, f: &mut Vec<R::E>) {
    while let Some(last) = f.last() {
        if r.is_zero(last) {
            f.pop();
        } else {
            break;
        }
    }
}

/// Degree, with `None` for the zero polynomial.
pub(crate) fn degree<E>(f: &[E]) -> Option<usize> {
    f.len().checked_sub(1)
}

pub(crate) fn add<R: Ring>(r: &R, f: &[R::E], g: &[R::E]) -> Vec<R::E> {
    let n = f.len().max(g.len());
    let zero = r.zero();
    let mut out: Vec<R::E> = (0..n)
        .map(|i| r.add(f.get(i).unwrap_or(&zero), g.get(i).unwrap_or(&zero)))
        .collect();
    trim(r, &mut out);
    out
}

pub(crate) fn sub<R: Ring>(r: &R, f: &[R::E], g: &[R::E]) -> Vec<R::E> {
    let n = f.len().max(g.len());
    let zero = r.zero();
    let mut out: Vec<R::E> = (0..n)
        .map(|i| r.sub(f.get(i).unwrap_or(&zero), g.get(i).unwrap_or(&zero)))
        .collect();
    trim(r, &mut out);
    out
}

pub(crate) fn mul<R: Ring>(r: &R, f: &[R::E], g: &[R::E]) -> Vec<R::E> {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![r.zero(); f.len() + g.len() - 1];
    for (i, a) in f.iter().enumerate() {
        if r.is_zero(a) {
            continue;
        }
        for (j, b) in g.iter().enumerate() {
            let t = r.mul(a, b);
            out[i + j] = r.add(&out[i + j], &t);
        }
    }
    trim(r, &mut out);
    out
}

pub(crate) fn scale<R: Ring>(r: &R, f: &[R::E], c: &R::E) -> Vec<R::E> {
    let mut out: Vec<R::E> = f.iter().map(|a| r.mul(a, c)).collect();
    trim(r, &mut out);
    out
}

/// Quotient and remainder. Panics on division by the zero polynomial.
pub(crate) fn divrem<R: Ring>(r: &R, f: &[R::E], g: &[R::E]) -> (Vec<R::E>, Vec<R::E>) {
    let dg = degree(g).expect("polynomial division by zero");
    let lead_inv = r.inv(&g[dg]).expect("leading coefficient is a unit");
    let mut rem = f.to_vec();
    trim(r, &mut rem);
    if rem.len() < g.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![r.zero(); rem.len() - dg];
    while rem.len() >= g.len() {
        let shift = rem.len() - g.len();
        let c = r.mul(rem.last().unwrap(), &lead_inv);
        for (j, b) in g.iter().enumerate() {
            let t = r.mul(&c, b);
            rem[shift + j] = r.sub(&rem[shift + j], &t);
        }
        quot[shift] = c;
        // the leading term cancels exactly
        rem.pop();
        trim(r, &mut rem);
    }
    trim(r, &mut quot);
    (quot, rem)
}

pub(crate) fn rem<R: Ring>(r: &R, f: &[R::E], g: &[R::E]) -> Vec<R::E> {
    divrem(r, f, g).1
}

pub(crate) fn make_monic<R: Ring>(r: &R, f: &[R::E]) -> Vec<R::E> {
    match f.last() {
        None => Vec::new(),
        Some(lead) => {
            let inv = r.inv(lead).expect("nonzero leading coefficient");
            scale(r, f, &inv)
        }
    }
}

/// Monic greatest common divisor.
pub(crate) fn gcd<R: Ring>(r: &R, f: &[R::E], g: &[R::E]) -> Vec<R::E> {
    let mut a = f.to_vec();
    let mut b = g.to_vec();
    trim(r, &mut a);
    trim(r, &mut b);
    while !b.is_empty() {
        let t = rem(r, &a, &b);
        a = b;
        b = t;
    }
    make_monic(r, &a)
}

/// Inverse of `f` modulo `m`, if it exists.
pub(crate) fn inv_mod<R: Ring>(r: &R, f: &[R::E], m: &[R::E]) -> Option<Vec<R::E>> {
    // extended Euclid tracking only the coefficient of f
    let mut r0 = m.to_vec();
    let mut r1 = rem(r, f, m);
    let mut s0: Vec<R::E> = Vec::new();
    let mut s1: Vec<R::E> = vec![r.one()];
    while !r1.is_empty() {
        let (q, rr) = divrem(r, &r0, &r1);
        let s2 = sub(r, &s0, &mul(r, &q, &s1));
        r0 = r1;
        r1 = rr;
        s0 = s1;
        s1 = s2;
    }
    if r0.len() != 1 {
        return None;
    }
    let c = r.inv(&r0[0])?;
    Some(rem(r, &scale(r, &s0, &c), m))
}

pub(crate) fn mulmod<R: Ring>(r: &R, f: &[R::E], g: &[R::E], m: &[R::E]) -> Vec<R::E> {
    rem(r, &mul(r, f, g), m)
}

pub(crate) fn powmod<R: Ring>(r: &R, f: &[R::E], mut e: u64, m: &[R::E]) -> Vec<R::E> {
    let mut result = rem(r, &[r.one()], m);
    let mut base = rem(r, f, m);
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod(r, &result, &base, m);
        }
        e >>= 1;
        if e > 0 {
            base = mulmod(r, &base, &base, m);
        }
    }
    result
}

/// Rabin's irreducibility test for a monic `f` over a field with `r.order()` elements.
pub(crate) fn is_irreducible<R: Ring>(r: &R, f: &[R::E]) -> bool {
    let n = match degree(f) {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(n) => n,
    };
    let q = r.order();
    let x = vec![r.zero(), r.one()];
    // frob[i] = x^(q^i) mod f
    let mut frob = Vec::with_capacity(n + 1);
    frob.push(rem(r, &x, f));
    for i in 1..=n {
        let next = powmod(r, &frob[i - 1], q, f);
        frob.push(next);
    }
    if sub(r, &frob[n], &x).iter().any(|c| !r.is_zero(c)) {
        return false;
    }
    for prime in prime_factors(n as u64) {
        let k = n / prime as usize;
        let diff = sub(r, &frob[k], &x);
        if gcd(r, &diff, f).len() != 1 {
            return false;
        }
    }
    true
}

/// All roots in the coefficient field of `f`, sorted by the caller if needed.
///
/// Distinct-degree then equal-degree splitting (Cantor-Zassenhaus); the
/// splitting randomness comes from `rng`.
pub(crate) fn roots<R: Ring>(r: &R, f: &[R::E], rng: &mut ChaCha8Rng) -> Vec<R::E> {
    let f = make_monic(r, f);
    let Some(n) = degree(&f) else {
        return Vec::new();
    };
    if n == 0 {
        return Vec::new();
    }
    let x = vec![r.zero(), r.one()];
    let xq = powmod(r, &x, r.order(), &f);
    let split = gcd(r, &sub(r, &xq, &x), &f);
    let mut out = Vec::new();
    split_linear(r, &split, rng, &mut out);
    // repeated roots of f show up once; that is all callers need
    out
}

fn split_linear<R: Ring>(r: &R, g: &[R::E], rng: &mut ChaCha8Rng, out: &mut Vec<R::E>) {
    match degree(g) {
        None | Some(0) => {}
        Some(1) => {
            // g = x + c, monic
            let root = r.sub(&r.zero(), &g[0]);
            out.push(root);
        }
        Some(_) => loop {
            let delta = r.random(rng);
            let probe = vec![delta, r.one()];
            let h = if r.characteristic() == 2 {
                // trace map sum (delta + x)^(2^i)
                let mut acc: Vec<R::E> = Vec::new();
                let mut term = rem(r, &probe, g);
                for _ in 0..r.absolute_degree() {
                    acc = add(r, &acc, &term);
                    term = mulmod(r, &term, &term, g);
                }
                acc
            } else {
                let pw = powmod(r, &probe, (r.order() - 1) / 2, g);
                sub(r, &pw, &[r.one()])
            };
            let d = gcd(r, &h, g);
            let dd = degree(&d).unwrap_or(0);
            if dd > 0 && dd < g.len() - 1 {
                let (other, _) = divrem(r, g, &d);
                split_linear(r, &d, rng, out);
                split_linear(r, &make_monic(r, &other), rng, out);
                return;
            }
        },
    }
}
