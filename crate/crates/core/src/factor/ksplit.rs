//! Splitting a map with least recurring run length `l` into two maps whose
//! recurring runs are all longer than `l`.
//!
//! `γ₁` collapses every second non-singleton block of `α` to a point and is
//! otherwise injective, so runs on either side of a collapsed block merge.
//! `γ₂` then re-creates those blocks and forgets the remaining ones.

use crate::error::{internal, precondition, Result};
use crate::invariants::{Analysis, BlockStream, KClass};
use crate::map::FenceMap;

fn k_class_above(m: &FenceMap, l: u64) -> bool {
    match Analysis::of(m).k_class() {
        KClass::K(l2) => l2 > l,
        KClass::KInf => true,
        KClass::NotInP => false,
    }
}

/// `(γ₁, γ₂)` with `γ₁γ₂ = α`, both of class `K(l')` with `l' > l` or `K∞`,
/// for `α` of class `K(l)`.
pub fn k_split(alpha: &FenceMap) -> Result<(FenceMap, FenceMap)> {
    if !alpha.is_fence_preserving() {
        return Err(crate::Error::NotFencePreserving);
    }
    let l = match Analysis::of(alpha).k_class() {
        KClass::K(l) => l,
        KClass::KInf => return precondition("map has no recurring run length to split"),
        KClass::NotInP => return precondition("map is not in P"),
    };
    let stars = BlockStream::of(alpha).star_blocks();
    if stars.count().is_finite() {
        return precondition("map has finitely many non-singleton blocks");
    }
    let head = stars.head_len();
    let cyc = stars.cycle_len();
    // the parity of the star index repeats after two cycles
    let start = stars.span(head + 1).0;
    let period = 2 * stars.period();

    let top = (head + 8 * cyc + 4) as usize;
    let spans: Vec<(u64, u64)> = (0..=top).map(|i| if i == 0 { (0, 0) } else { stars.span(i as u64) }).collect();
    // collapsed[i] = Σ_{even j ≤ i} (|B_j| - 1)
    let mut collapsed = vec![0u64; top + 1];
    for i in 1..=top {
        collapsed[i] = collapsed[i - 1] + if i % 2 == 0 { spans[i].1 - 1 } else { 0 };
    }
    let g1 = FenceMap::sample(start, period, |x| {
        let j = stars.floor_index(x) as usize;
        let (pj, lj) = spans[j];
        if j > 0 && j.is_multiple_of(2) && x < pj + lj {
            pj - collapsed[j - 1]
        } else {
            x - collapsed[j]
        }
    })?;

    // σ(y): least x with γ₁(x) ≥ y
    let sigma_at = |y: u64| {
        let mut hi = y.max(1);
        while g1.eval(hi) < y {
            hi *= 2;
        }
        let mut lo = 1;
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if g1.eval(mid) >= y {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        lo
    };
    // σ advances by `period` whenever y advances by γ₁'s rise over one period
    let rise = g1.eval(start + period) - g1.eval(start);
    let sigma = FenceMap::sample(g1.eval(start), rise, sigma_at)?;
    let g2 = sigma.compose(alpha);

    if !g1.is_fence_preserving() || !g2.is_fence_preserving() {
        return internal("split factor is not fence-preserving");
    }
    if g1.compose(&g2) != *alpha {
        return internal("split factors do not recompose to the target");
    }
    if !k_class_above(&g1, l) || !k_class_above(&g2, l) {
        return internal("split factor does not have longer recurring runs");
    }
    Ok((g1, g2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::*;

    fn k_of(m: &FenceMap) -> KClass {
        Analysis::of(m).k_class()
    }

    #[test]
    fn splits_witness() {
        let w = collapse_witness();
        assert_eq!(k_of(&w), KClass::K(1));
        let (g1, g2) = k_split(&w).unwrap();
        assert_eq!(g1.compose(&g2), w);
        assert!(k_class_above(&g1, 1) && k_class_above(&g2, 1));
    }

    #[test]
    fn splits_pairs_between_triples() {
        // 1,2,3,3,3,4,5,6,6,6,...: runs of two singletons between triples
        let m = FenceMap::new(vec![], 1, 5, 3, vec![1, 2, 3, 3, 3]).unwrap();
        assert_eq!(k_of(&m), KClass::K(2));
        let (g1, g2) = k_split(&m).unwrap();
        assert_eq!(g1.compose(&g2), m);
        assert!(k_class_above(&g1, 2) && k_class_above(&g2, 2));
    }

    #[test]
    fn xi_has_nothing_to_split() {
        assert!(matches!(k_split(&xi()), Err(crate::Error::Precondition(_))));
    }
}
