//! MDS verdicts: by the sum criterion on the group, and directly on a
//! generator matrix (all minors, sampled minors, or minimum distance).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::field::FieldElem;
use crate::group::{k_sumset_witness, GroupTable};
use crate::places::divisor_sum;

use super::spec::{CodeSpec, GenMatrix};
use super::CodeError;

/// Default cap on the number of minors for an exhaustive check.
pub const DEFAULT_MINOR_BUDGET: u128 = 1_000_000_000;
/// Largest `q^k` for which all codewords are listed.
pub const DISTANCE_BUDGET: u128 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// Positions (0-based, ascending) of `k` points of `D` whose sum is
    /// `sum(G)`, equivalently `k` dependent columns.
    Subset(Vec<usize>),
    /// A nonzero message whose codeword has weight below `n - k + 1`.
    Codeword { message: Vec<FieldElem>, weight: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Mds,
    NotMds(Witness),
}

impl Verdict {
    pub fn is_mds(&self) -> bool {
        matches!(self, Verdict::Mds)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MatrixMode {
    ExhaustiveMinors,
    SampledMinors { count: u64, seed: u64 },
    ExhaustiveDistance,
}

/// Not MDS exactly when `sum(G)` is a sum of `k` distinct points of `D`.
pub fn mds_combinatorial(spec: &CodeSpec, table: &GroupTable) -> Result<Verdict, CodeError> {
    let s = divisor_sum(&spec.curve, &spec.g)?;
    let target = table.code(&s)?;
    let codes = spec.points.iter().map(|p| table.code(p)).collect::<Result<Vec<_>, _>>()?;
    let k = spec.k();
    Ok(match k_sumset_witness(&codes, k, target, table)? {
        None => Verdict::Mds,
        Some(w) => {
            let mut pos: Vec<usize> = w.iter().map(|c| codes.iter().position(|x| x == c).expect("from D")).collect();
            pos.sort_unstable();
            Verdict::NotMds(Witness::Subset(pos))
        }
    })
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n.saturating_sub(k));
    let mut r: u128 = 1;
    for i in 0..k {
        r = r.saturating_mul(n - i) / (i + 1);
    }
    r
}

/// Columns as base-field table indices.
struct Columns<'a> {
    f: &'a crate::field::BaseField,
    cols: Vec<Vec<u32>>,
    k: usize,
}

impl Columns<'_> {
    /// Reduce `v` against the basis; `Some(normalized)` if independent.
    fn reduce(&self, basis: &[(usize, Vec<u32>)], mut v: Vec<u32>) -> Option<(usize, Vec<u32>)> {
        let f = self.f;
        for (p, b) in basis {
            let c = v[*p];
            if c != 0 {
                for (x, &y) in v.iter_mut().zip(b) {
                    if y != 0 {
                        *x = f.sub(*x, f.mul(c, y));
                    }
                }
            }
        }
        let p = v.iter().position(|&x| x != 0)?;
        let inv = f.inv(v[p]).expect("nonzero");
        for x in v.iter_mut() {
            *x = f.mul(*x, inv);
        }
        Some((p, v))
    }

    /// First dependent subset in colexicographic order among subsets whose
    /// next column is below `upper`, given the columns already chosen.
    fn search(&self, basis: &mut Vec<(usize, Vec<u32>)>, chosen: &mut Vec<usize>, upper: usize) -> Option<Vec<usize>> {
        let need = self.k - chosen.len();
        if need == 0 {
            return None;
        }
        for c in (need - 1)..upper {
            match self.reduce(basis, self.cols[c].clone()) {
                None => {
                    let mut s: Vec<usize> = (0..need - 1).chain(std::iter::once(c)).chain(chosen.iter().copied()).collect();
                    s.sort_unstable();
                    return Some(s);
                }
                Some(b) => {
                    basis.push(b);
                    chosen.push(c);
                    let r = self.search(basis, chosen, c);
                    chosen.pop();
                    basis.pop();
                    if r.is_some() {
                        return r;
                    }
                }
            }
        }
        None
    }

    fn singular(&self, subset: &[usize]) -> bool {
        let mut basis = Vec::with_capacity(self.k);
        for &c in subset {
            match self.reduce(&basis, self.cols[c].clone()) {
                None => return true,
                Some(b) => basis.push(b),
            }
        }
        false
    }
}

/// Matrix-side MDS check. `budget` caps the number of minors for the
/// exhaustive mode.
pub fn mds_matrix(m: &GenMatrix, mode: MatrixMode, budget: Option<u128>) -> Result<Verdict, CodeError> {
    let (k, n) = (m.k(), m.n());
    if k == 0 || k > n {
        return Err(CodeError::InvalidSpec(format!("matrix of shape {k} x {n}")));
    }
    let f = m.field.base_tables().expect("matrix over a base field");
    let cols: Vec<Vec<u32>> = (0..n).map(|c| m.rows.iter().map(|r| m.field.index(&r[c])).collect()).collect();
    let ctx = Columns { f, cols, k };
    match mode {
        MatrixMode::ExhaustiveMinors => {
            let total = binomial(n as u128, k as u128);
            let cap = budget.unwrap_or(DEFAULT_MINOR_BUDGET);
            if total > cap {
                return Err(CodeError::BudgetExceeded(format!("{total} minors exceed the budget of {cap}")));
            }
            // shard by the largest column; the first shard with a hit wins
            let hit = (k - 1..n).into_par_iter().find_map_first(|top| {
                let first = ctx.reduce(&[], ctx.cols[top].clone());
                match first {
                    None => {
                        let mut s: Vec<usize> = (0..k - 1).collect();
                        s.push(top);
                        Some(s)
                    }
                    Some(b) => {
                        let mut basis = vec![b];
                        let mut chosen = vec![top];
                        ctx.search(&mut basis, &mut chosen, top)
                    }
                }
            });
            Ok(hit.map_or(Verdict::Mds, |s| Verdict::NotMds(Witness::Subset(s))))
        }
        MatrixMode::SampledMinors { count, seed } => {
            let hit = (0..count).into_par_iter().find_map_first(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i);
                let mut s = rand::seq::index::sample(&mut rng, n, k).into_vec();
                s.sort_unstable();
                ctx.singular(&s).then_some(s)
            });
            Ok(hit.map_or(Verdict::Mds, |s| Verdict::NotMds(Witness::Subset(s))))
        }
        MatrixMode::ExhaustiveDistance => {
            let (d, msg) = minimum_distance(m)?;
            if d == n - k + 1 {
                Ok(Verdict::Mds)
            } else {
                Ok(Verdict::NotMds(Witness::Codeword { message: msg, weight: d }))
            }
        }
    }
}

/// Minimum weight over all nonzero codewords, with the first message (in
/// counting order) attaining it.
pub fn minimum_distance(m: &GenMatrix) -> Result<(usize, Vec<FieldElem>), CodeError> {
    let (k, n) = (m.k(), m.n());
    let f = m.field.base_tables().expect("matrix over a base field");
    let q = m.field.order() as u128;
    let total = q.checked_pow(k as u32).unwrap_or(u128::MAX);
    if total > DISTANCE_BUDGET {
        return Err(CodeError::BudgetExceeded(format!("q^k = {total} codewords exceed {DISTANCE_BUDGET}")));
    }
    let rows: Vec<Vec<u32>> = m.rows.iter().map(|r| r.iter().map(|e| m.field.index(e)).collect()).collect();
    let digits = |mut idx: u128| -> Vec<u32> {
        (0..k)
            .map(|_| {
                let d = (idx % q) as u32;
                idx /= q;
                d
            })
            .collect()
    };
    let best = (1..total)
        .into_par_iter()
        .map(|idx| {
            let msg = digits(idx);
            let mut w = 0;
            for c in 0..n {
                let mut acc = 0u32;
                for (r, &mi) in rows.iter().zip(&msg) {
                    if mi != 0 {
                        acc = f.add(acc, f.mul(mi, r[c]));
                    }
                }
                if acc != 0 {
                    w += 1;
                }
            }
            (w, idx)
        })
        .min()
        .expect("at least one nonzero message");
    let msg = digits(best.1).into_iter().map(|d| m.field.from_index(d)).collect();
    Ok((best.0, msg))
}
