//! Which point counts and group structures occur over `GF(p^n)`.

use super::{gcd, GroupError};

pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// `sqrt(q)` when `q` is a square.
fn exact_sqrt(q: u64) -> Option<u64> {
    let r = isqrt(q);
    (r * r == q).then_some(r)
}

/// Supersingular and ordinary cases of a trace, `None` if not admissible.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Case {
    Ordinary,
    TwiceRoot,
    Other,
}

fn classify(p: u32, n: u32, t: i64) -> Option<Case> {
    let q = (p as u64).pow(n);
    if (t * t) as u64 > 4 * q {
        return None;
    }
    let p64 = p as i64;
    if t % p64 != 0 {
        return Some(Case::Ordinary);
    }
    let even = n % 2 == 0;
    let root = exact_sqrt(q).map(|r| r as i64);
    if even && root.is_some_and(|r| t.abs() == 2 * r) {
        return Some(Case::TwiceRoot);
    }
    if even && p % 3 != 1 && root.is_some_and(|r| t.abs() == r) {
        return Some(Case::Other);
    }
    if !even && (p == 2 || p == 3) && t.abs() == p64.pow(n.div_ceil(2)) {
        return Some(Case::Other);
    }
    if t == 0 && (!even || p % 4 != 1) {
        return Some(Case::Other);
    }
    None
}

pub fn is_admissible(p: u32, n: u32, t: i64) -> bool {
    classify(p, n, t).is_some()
}

/// All traces `t` of elliptic curves over `GF(p^n)`, ascending.
pub fn admissible_traces(p: u32, n: u32) -> Vec<i64> {
    let q = (p as u64).pow(n);
    let s = isqrt(4 * q) as i64;
    (-s..=s).filter(|&t| is_admissible(p, n, t)).collect()
}

fn valuation(mut m: u64, l: u64) -> u32 {
    let mut v = 0;
    while m > 0 && m % l == 0 {
        m /= l;
        v += 1;
    }
    v
}

/// Invariant factor pairs `(d, e)` an elliptic curve with `N` points over
/// `GF(p^n)` can have, ascending in `d`.
pub fn possible_structures(p: u32, n: u32, big_n: u64) -> Result<Vec<(u64, u64)>, GroupError> {
    let q = (p as u64).pow(n);
    let t = q as i64 + 1 - big_n as i64;
    let case = classify(p, n, t).ok_or(GroupError::InadmissibleCount { q, n: big_n })?;
    let mut ds = vec![1u64];
    for l in crate::field::prime_factors(big_n) {
        if l == p as u64 {
            continue;
        }
        let h = valuation(big_n, l);
        let range: Vec<u32> = if case == Case::TwiceRoot {
            vec![h / 2]
        } else {
            (0..=valuation(q - 1, l).min(h / 2)).collect()
        };
        ds = ds.iter().flat_map(|&d| range.iter().map(move |&a| d * l.pow(a))).collect();
    }
    ds.sort_unstable();
    Ok(ds.into_iter().map(|d| (d, big_n / d)).collect())
}

/// `gcd(p^r + 1, p^s - 1)` in closed form.
pub fn gcd_plus_minus(p: u64, r: u32, s: u32) -> u64 {
    let g = gcd(r as u64, s as u64) as u32;
    if (s / g) % 2 == 1 {
        if p % 2 == 0 {
            1
        } else {
            2
        }
    } else {
        p.pow(g) + 1
    }
}

/// Whether a curve over `GF(2^(2m))` with `q + 2 sqrt(q)` points is
/// guaranteed cyclic.
pub fn predict_cyclic_binary_maximal(m: u32) -> bool {
    m % 2 == 1 || m % 6 == 0 || m % 6 == 2
}
