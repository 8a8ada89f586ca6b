//! Table-driven arithmetic in `GF(p^a)`.
//!
//! Elements are encoded as integers `sum c_i p^i` over their coefficient
//! vector in the polynomial basis. Multiplication goes through discrete
//! log/antilog tables built from a primitive element.

use rand::Rng as _;
use rand_chacha::ChaCha8Rng;

use super::poly::{self, PrimeRing, Ring};
use super::FieldError;

/// Largest field that gets log tables.
pub const MAX_TABLE_ORDER: u64 = 1 << 16;
/// Largest odd-characteristic extension that also gets a full addition table.
const ADD_TABLE_ORDER: u64 = 2048;

#[derive(Debug)]
pub(crate) struct BaseField {
    pub p: u32,
    pub a: u32,
    pub q: u32,
    /// Monic modulus over GF(p), constant term first, length `a + 1`.
    pub modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    add_table: Option<Vec<u16>>,
    neg: Vec<u32>,
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn digits(mut n: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(n % p);
        n /= p;
    }
    out
}

fn undigits(c: &[u32], p: u32) -> u32 {
    c.iter().rev().fold(0u32, |acc, &d| acc * p + d)
}

/// Smallest monic irreducible of degree `a` over GF(p), ordering candidates
/// by the integer `sum c_i p^i` of their lower coefficients.
pub(crate) fn smallest_irreducible(p: u32, a: u32) -> Vec<u32> {
    let r = PrimeRing(p);
    let count = (p as u64).pow(a);
    for n in 0..count {
        let mut f = digits(n as u32, p, a as usize);
        f.push(1);
        if poly::is_irreducible(&r, &f) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl BaseField {
    pub fn new(p: u32, a: u32, modulus: Option<Vec<u32>>) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NonPrimeCharacteristic(p));
        }
        if a == 0 {
            return Err(FieldError::InvalidDegree(0));
        }
        let q = (p as u64).checked_pow(a).filter(|&q| q <= MAX_TABLE_ORDER);
        let Some(q) = q else {
            return Err(FieldError::FieldTooLarge { p, a });
        };
        let r = PrimeRing(p);
        let modulus = match modulus {
            Some(m) => {
                if m.len() != a as usize + 1 || *m.last().unwrap() != 1 || m.iter().any(|&c| c >= p)
                {
                    return Err(FieldError::MalformedModulus);
                }
                if !poly::is_irreducible(&r, &m) {
                    return Err(FieldError::ReducibleModulus);
                }
                m
            }
            None => smallest_irreducible(p, a),
        };
        let q = q as u32;

        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let to_poly = |n: u32| {
            let mut f = digits(n, p, a as usize);
            poly::trim(&r, &mut f);
            f
        };
        let from_poly = |f: &[u32]| {
            let mut c = f.to_vec();
            c.resize(a as usize, 0);
            undigits(&c, p)
        };
        let generator = (1..q)
            .find(|&g| {
                let gp = to_poly(g);
                factors.iter().all(|&l| {
                    let pw = poly::powmod(&r, &gp, order / l, &modulus);
                    pw != vec![1]
                })
            })
            .expect("multiplicative group is cyclic");

        let mut exp = vec![0u32; 2 * (q as usize - 1).max(1)];
        let mut log = vec![0u32; q as usize];
        let gp = to_poly(generator);
        let mut cur = vec![1u32];
        for i in 0..(q - 1) as usize {
            let idx = from_poly(&cur);
            exp[i] = idx;
            log[idx as usize] = i as u32;
            cur = poly::mulmod(&r, &cur, &gp, &modulus);
        }
        for i in (q - 1) as usize..exp.len() {
            exp[i] = exp[i - (q - 1) as usize];
        }

        let neg = (0..q)
            .map(|n| {
                let d: Vec<u32> = digits(n, p, a as usize)
                    .into_iter()
                    .map(|c| (p - c) % p)
                    .collect();
                undigits(&d, p)
            })
            .collect();

        let mut field = BaseField { p, a, q, modulus, exp, log, add_table: None, neg };
        if p != 2 && a > 1 && (q as u64) <= ADD_TABLE_ORDER {
            let mut table = vec![0u16; q as usize * q as usize];
            for x in 0..q {
                for y in 0..q {
                    table[(x * q + y) as usize] = field.add_digits(x, y) as u16;
                }
            }
            field.add_table = Some(table);
        }
        Ok(field)
    }

    fn add_digits(&self, mut x: u32, mut y: u32) -> u32 {
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.a {
            let d = (x % self.p + y % self.p) % self.p;
            out += d * place;
            place *= self.p;
            x /= self.p;
            y /= self.p;
        }
        out
    }

    #[inline]
    pub fn add(&self, x: u32, y: u32) -> u32 {
        if self.p == 2 {
            x ^ y
        } else if self.a == 1 {
            let s = x + y;
            if s >= self.p {
                s - self.p
            } else {
                s
            }
        } else if let Some(t) = &self.add_table {
            t[(x * self.q + y) as usize] as u32
        } else {
            self.add_digits(x, y)
        }
    }

    #[inline]
    pub fn neg(&self, x: u32) -> u32 {
        self.neg[x as usize]
    }

    #[inline]
    pub fn sub(&self, x: u32, y: u32) -> u32 {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: u32, y: u32) -> u32 {
        if x == 0 || y == 0 {
            0
        } else {
            self.exp[(self.log[x as usize] + self.log[y as usize]) as usize]
        }
    }

    #[inline]
    pub fn inv(&self, x: u32) -> Option<u32> {
        if x == 0 {
            None
        } else {
            let l = self.log[x as usize];
            Some(self.exp[((self.q - 1 - l) % (self.q - 1)) as usize])
        }
    }

    /// Exponentiation; `0^0 = 1`.
    pub fn pow(&self, x: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if x == 0 {
            return 0;
        }
        let l = self.log[x as usize] as u64;
        let m = (self.q - 1) as u64;
        self.exp[((l * (e % m)) % m) as usize]
    }

    /// Square root through the log table; odd characteristic only.
    pub fn sqrt(&self, x: u32) -> Option<u32> {
        if x == 0 {
            return Some(0);
        }
        let l = self.log[x as usize];
        (l % 2 == 0).then(|| self.exp[(l / 2) as usize])
    }

    /// Discrete log with respect to the table generator.
    #[inline]
    pub fn log(&self, x: u32) -> Option<u32> {
        (x != 0).then(|| self.log[x as usize])
    }

    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    pub fn digits(&self, x: u32) -> Vec<u32> {
        digits(x, self.p, self.a as usize)
    }

    pub fn from_digits(&self, c: &[u32]) -> Option<u32> {
        if c.len() != self.a as usize || c.iter().any(|&d| d >= self.p) {
            return None;
        }
        Some(undigits(c, self.p))
    }
}

impl Ring for BaseField {
    type E = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        BaseField::add(self, *a, *b)
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        BaseField::sub(self, *a, *b)
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        BaseField::mul(self, *a, *b)
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        BaseField::inv(self, *a)
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn order(&self) -> u64 {
        self.q as u64
    }
    fn characteristic(&self) -> u32 {
        self.p
    }
    fn absolute_degree(&self) -> u32 {
        self.a
    }
    fn random(&self, rng: &mut ChaCha8Rng) -> u32 {
        rng.gen_range(0..self.q)
    }
}
