//! Finding a curve with a prescribed number of points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{count_points_model, make_curve, Curve, CurveError, Model};
use crate::field::{Field, FieldElem};
use crate::group::is_admissible;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum SearchStrategy {
    /// `y^2 = x^3 + theta^3` or `y^2 = x^3 + x`, for the maximal count.
    Family,
    /// Lexicographic scan of the coefficient space.
    Exhaustive,
    /// Seeded random sampling with a sample budget.
    Random { seed: u64, budget: u64 },
}

/// A curve over `field` with exactly `target` rational points.
pub fn find_curve(field: &Field, target: u64, strategy: SearchStrategy) -> Result<Curve, CurveError> {
    let q = field.order();
    let (p, a) = (field.characteristic(), field.degree_over_prime());
    let t = q as i64 + 1 - target as i64;
    if field.is_extension() || !is_admissible(p, a, t) {
        return Err(CurveError::InadmissibleCount { q, n: target });
    }
    match strategy {
        SearchStrategy::Family => family(field, target),
        SearchStrategy::Exhaustive => {
            let els: Vec<FieldElem> = field.elements().collect();
            for shape in shapes(p) {
                let free = shape.iter().filter(|s| matches!(s, Slot::Free)).count() as u32;
                let total = (q as u128).pow(free);
                for n in 0..total {
                    let coeffs = lex_candidate(field, &shape, &els, n, free);
                    if let Some(c) = accept(field, coeffs, target) {
                        return Ok(c);
                    }
                }
            }
            Err(CurveError::SearchExhausted(target))
        }
        SearchStrategy::Random { seed, budget } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let shapes = shapes(p);
            for _ in 0..budget {
                let shape = shapes[rng.gen_range(0..shapes.len())];
                let coeffs = shape.map(|s| match s {
                    Slot::Zero => field.zero(),
                    Slot::One => field.one(),
                    Slot::Free => field.random(&mut rng),
                });
                if let Some(c) = accept(field, coeffs, target) {
                    return Ok(c);
                }
            }
            Err(CurveError::SearchExhausted(target))
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum Slot {
    Zero,
    One,
    Free,
}

/// Coefficient shapes `[a1, a2, a3, a4, a6]` covering every isomorphism
/// class in the given characteristic.
fn shapes(p: u32) -> Vec<[Slot; 5]> {
    use Slot::*;
    match p {
        2 => vec![[One, Free, Zero, Zero, Free], [Zero, Zero, Free, Free, Free]],
        3 => vec![[Zero, Free, Zero, Free, Free]],
        _ => vec![[Zero, Zero, Zero, Free, Free]],
    }
}

/// The `n`-th candidate of a shape, most significant free slot first.
fn lex_candidate(field: &Field, shape: &[Slot; 5], els: &[FieldElem], n: u128, free: u32) -> [FieldElem; 5] {
    let q = els.len() as u128;
    let mut slot = 0;
    std::array::from_fn(|i| match shape[i] {
        Slot::Zero => field.zero(),
        Slot::One => field.one(),
        Slot::Free => {
            let place = q.pow(free - 1 - slot);
            slot += 1;
            els[((n / place) % q) as usize].clone()
        }
    })
}

fn accept(field: &Field, coeffs: [FieldElem; 5], target: u64) -> Option<Curve> {
    let model = Model::new(field.clone(), coeffs.clone());
    if field.is_zero(&model.discriminant()) || count_points_model(&model) != target {
        return None;
    }
    make_curve(field, coeffs).ok()
}

fn family(field: &Field, target: u64) -> Result<Curve, CurveError> {
    let (p, a) = (field.characteristic(), field.degree_over_prime());
    let z = field.zero();
    if p % 3 == 2 && a % 2 == 0 {
        for theta in field.elements().skip(1) {
            let c = field.pow(&theta, 3);
            if let Some(e) = accept(field, [z.clone(), z.clone(), z.clone(), z.clone(), c], target) {
                return Ok(e);
            }
        }
        return Err(CurveError::SearchExhausted(target));
    }
    if p == 3 && a % 2 == 0 {
        return accept(field, [z.clone(), z.clone(), z.clone(), field.one(), z], target)
            .ok_or(CurveError::SearchExhausted(target));
    }
    Err(CurveError::NoFamily { p, a, n: target })
}
