//! Exact `k`-sumsets by dynamic programming over subset sizes.

use super::{Elem, GroupError, GroupTable};

#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Bits {
        Bits(vec![0; n.div_ceil(64)])
    }

    #[inline]
    fn get(&self, i: u32) -> bool {
        self.0[(i / 64) as usize] >> (i % 64) & 1 == 1
    }

    #[inline]
    fn set(&mut self, i: u32) {
        self.0[(i / 64) as usize] |= 1 << (i % 64);
    }

    fn ones(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros();
                rest &= rest - 1;
                Some(w as u32 * 64 + b)
            })
        })
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }
}

/// `Sigma_k(S)`: all sums of `k` distinct elements of `S`.
#[derive(Clone, Debug)]
pub struct Sumset {
    bits: Bits,
    n: u64,
}

impl Sumset {
    pub fn contains(&self, g: Elem) -> bool {
        self.bits.get(g)
    }

    pub fn elements(&self) -> Vec<Elem> {
        self.bits.ones().collect()
    }

    pub fn len(&self) -> usize {
        self.bits.ones().count()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn is_everything(&self) -> bool {
        self.len() as u64 == self.n
    }
}

fn validate(s: &[Elem], k: usize, g: &GroupTable) -> Result<(), GroupError> {
    if k > s.len() {
        return Err(GroupError::BadK { k, n: s.len() });
    }
    let mut seen = Bits::new(g.order() as usize);
    for &x in s {
        if seen.get(x) {
            return Err(GroupError::DuplicateElements);
        }
        seen.set(x);
    }
    Ok(())
}

/// One DP step: fold element `x` into the per-size reachable sets.
fn absorb(layer: &mut [Bits], x: Elem, g: &GroupTable) {
    for j in (1..layer.len()).rev() {
        let shifted: Vec<u32> = layer[j - 1].ones().map(|a| g.add(a, x)).collect();
        for b in shifted {
            layer[j].set(b);
        }
    }
}

pub fn k_sumset(s: &[Elem], k: usize, g: &GroupTable) -> Result<Sumset, GroupError> {
    validate(s, k, g)?;
    let n = g.order() as usize;
    let mut layer: Vec<Bits> = (0..=k).map(|_| Bits::new(n)).collect();
    layer[0].set(g.identity());
    for (t, &x) in s.iter().enumerate() {
        // sizes above t + 1 are still empty, and only k - (len - t - 1) onwards matter at the end
        let lo = (k + t + 1).saturating_sub(s.len());
        let hi = (t + 1).min(k);
        for j in (lo.max(1)..=hi).rev() {
            let shifted: Vec<u32> = layer[j - 1].ones().map(|a| g.add(a, x)).collect();
            for b in shifted {
                layer[j].set(b);
            }
        }
    }
    Ok(Sumset { bits: layer.swap_remove(k), n: g.order() })
}

/// A `k`-subset of `S` summing to `target`, if one exists. Keeps every DP
/// layer so the subset can be recovered by walking back.
pub fn k_sumset_witness(s: &[Elem], k: usize, target: Elem, g: &GroupTable) -> Result<Option<Vec<Elem>>, GroupError> {
    validate(s, k, g)?;
    let n = g.order() as usize;
    let mut history: Vec<Vec<Bits>> = Vec::with_capacity(s.len() + 1);
    let mut layer: Vec<Bits> = (0..=k).map(|_| Bits::new(n)).collect();
    layer[0].set(g.identity());
    history.push(layer.clone());
    for &x in s {
        absorb(&mut layer, x, g);
        history.push(layer.clone());
    }
    if !history[s.len()][k].get(target) {
        return Ok(None);
    }
    let mut out = Vec::with_capacity(k);
    let (mut j, mut want) = (k, target);
    for t in (0..s.len()).rev() {
        if j == 0 {
            break;
        }
        if history[t][j].get(want) {
            continue;
        }
        out.push(s[t]);
        want = g.sub(want, s[t]);
        j -= 1;
    }
    debug_assert!(j == 0 && want == g.identity());
    out.reverse();
    Ok(Some(out))
}
