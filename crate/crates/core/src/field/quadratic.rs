//! Square roots and quadratic equations.

use super::{Field, FieldElem, FieldError, Kind};

pub(super) fn sqrt(f: &Field, x: &FieldElem) -> Option<FieldElem> {
    if f.is_zero(x) {
        return Some(f.zero());
    }
    let q = f.order();
    if f.characteristic() == 2 {
        return Some(f.pow(x, q / 2));
    }
    if let Kind::Base(b) = &f.0.kind {
        return b.sqrt(x.c[0]).map(|r| f.from_index(r));
    }
    let r = if q % 4 == 3 {
        f.pow(x, (q + 1) / 4)
    } else {
        tonelli_shanks(f, x)?
    };
    (f.square(&r) == *x).then_some(r)
}

fn tonelli_shanks(f: &Field, x: &FieldElem) -> Option<FieldElem> {
    let q = f.order();
    let mut s = 0u32;
    let mut t = q - 1;
    while t % 2 == 0 {
        t /= 2;
        s += 1;
    }
    let z = f.cached_nonresidue()?;
    let mut m = s;
    let mut c = f.pow(&z, t);
    let mut u = f.pow(x, t);
    let mut r = f.pow(x, (t + 1) / 2);
    while !f.is_one(&u) {
        // least i with u^(2^i) = 1
        let mut i = 0u32;
        let mut v = u.clone();
        while !f.is_one(&v) {
            v = f.square(&v);
            i += 1;
            if i == m {
                return None;
            }
        }
        let mut bb = c.clone();
        for _ in 0..(m - i - 1) {
            bb = f.square(&bb);
        }
        m = i;
        c = f.square(&bb);
        u = f.mul(&u, &c);
        r = f.mul(&r, &bb);
    }
    Some(r)
}

pub(super) fn solve(
    f: &Field,
    a: &FieldElem,
    b: &FieldElem,
    c: &FieldElem,
) -> Result<Vec<FieldElem>, FieldError> {
    if f.is_zero(a) {
        if f.is_zero(b) {
            return Err(FieldError::DegenerateEquation);
        }
        let y = f.neg(&f.div(c, b).expect("b is nonzero"));
        return Ok(vec![y]);
    }
    let mut roots = if f.characteristic() == 2 {
        solve_char2(f, a, b, c)
    } else {
        let disc = f.sub(&f.square(b), &f.mul_int(&f.mul(a, c), 4));
        match sqrt(f, &disc) {
            None => Vec::new(),
            Some(s) => {
                let inv2a = f.inv(&f.mul_int(a, 2)).expect("odd characteristic");
                let nb = f.neg(b);
                vec![f.mul(&f.add(&nb, &s), &inv2a), f.mul(&f.sub(&nb, &s), &inv2a)]
            }
        }
    };
    roots.sort();
    roots.dedup();
    Ok(roots)
}

fn solve_char2(f: &Field, a: &FieldElem, b: &FieldElem, c: &FieldElem) -> Vec<FieldElem> {
    let ainv = f.inv(a).expect("a is nonzero");
    if f.is_zero(b) {
        return vec![sqrt(f, &f.mul(c, &ainv)).expect("squaring is onto")];
    }
    // y = (B/A) z turns the equation into z^2 + z = C A / B^2
    let binv = f.inv(b).expect("b is nonzero");
    let k = f.mul(&f.mul(c, a), &f.square(&binv));
    if f.abs_trace(&k) != 0 {
        return Vec::new();
    }
    let z = artin_schreier_root(f, &k);
    debug_assert_eq!(f.add(&f.square(&z), &z), k);
    let scale = f.mul(b, &ainv);
    let z1 = f.add(&z, &f.one());
    vec![f.mul(&scale, &z), f.mul(&scale, &z1)]
}

/// A root of `z^2 + z = k`, assuming `Tr(k) = 0`.
fn artin_schreier_root(f: &Field, k: &FieldElem) -> FieldElem {
    let m = f.degree_over_prime();
    if m % 2 == 1 {
        // half-trace
        let mut acc = f.zero();
        let mut t = k.clone();
        for _ in 0..=(m - 1) / 2 {
            acc = f.add(&acc, &t);
            t = f.square(&f.square(&t));
        }
        return acc;
    }
    solve_linear_char2(f, k)
}

/// Solve `z^2 + z = k` as a GF(2)-linear system in absolute coordinates.
fn solve_linear_char2(f: &Field, k: &FieldElem) -> FieldElem {
    let m = f.degree_over_prime() as usize;
    assert!(m <= 128, "absolute degree {m} too large for the linear solver");
    // column j holds L(e_j) with L(z) = z^2 + z
    let mut rows = vec![0u128; m];
    let mut basis = vec![0u32; m];
    for j in 0..m {
        basis[j] = 1;
        let e = f.from_abs_coords(&basis);
        basis[j] = 0;
        let img = f.add(&f.square(&e), &e);
        for (i, &bit) in f.abs_coords(&img).iter().enumerate() {
            if bit == 1 {
                rows[i] |= 1u128 << j;
            }
        }
    }
    let rhs_bits = f.abs_coords(k);
    let mut rhs: Vec<bool> = rhs_bits.iter().map(|&b| b == 1).collect();
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for col in 0..m {
        let Some(pr) = (r..m).find(|&i| rows[i] >> col & 1 == 1) else {
            continue;
        };
        rows.swap(r, pr);
        rhs.swap(r, pr);
        for i in 0..m {
            if i != r && rows[i] >> col & 1 == 1 {
                rows[i] ^= rows[r];
                rhs[i] ^= rhs[r];
            }
        }
        pivots.push(col);
        r += 1;
    }
    debug_assert!(rhs[r..].iter().all(|&b| !b), "trace-zero right-hand side is in the image");
    let mut z = vec![0u32; m];
    for (i, &col) in pivots.iter().enumerate() {
        z[col] = rhs[i] as u32;
    }
    f.from_abs_coords(&z)
}
