//! Every fence map is `γ₁γ₂` with `γ₁` convex-fibered and `γ₂ ∈ Λₙ`.

use crate::error::{internal, precondition, Error, Result};
use crate::factor::least_above_with_parity;
use crate::invariants::{Analysis, BlockStream};
use crate::map::FenceMap;

/// Whether `a` and `b` have the same constancy blocks.
pub fn same_blocks(a: &FenceMap, b: &FenceMap) -> bool {
    let (pa, pb) = (a.tail_period(), b.tail_period());
    let mut g = (pa, pb);
    while g.1 != 0 {
        g = (g.1, g.0 % g.1);
    }
    // the boundary pattern of each map repeats with its period past its start
    let end = a.tail_start().max(b.tail_start()) + 2 * (pa / g.0 * pb);
    (1..=end).all(|x| (a.eval(x) == a.eval(x + 1)) == (b.eval(x) == b.eval(x + 1)))
}

/// `(γ₁, γ₂)` with `γ₁ ∈ Θ`, `γ₂ ∈ Λₙ` and `γ₁γ₂ = α`.
///
/// `γ₁` sends the i-th block of `α` to `k + i - 1`, where `k` is the least
/// integer above `n` with the parity of the first block's value.
pub fn theta_lambda_factor(alpha: &FenceMap, n: u64) -> Result<(FenceMap, FenceMap)> {
    if !alpha.is_fence_preserving() {
        return Err(Error::NotFencePreserving);
    }
    if n == 0 {
        return precondition("class parameter n starts at 1");
    }
    let bs = BlockStream::of(alpha);
    let first = bs.nth(1).expect("every map has a first block");
    let k = least_above_with_parity(n, first.value);
    let gamma1 = bs.index_map().add(k - 1);
    let gamma2 = complete_from_theta(&gamma1, alpha, n)?;
    Ok((gamma1, gamma2))
}

/// The `γ₂ ∈ Λₙ` with `γ₁γ₂ = α`, for convex-fibered `γ₁` with the same
/// blocks as `α` and image bounded below by `n`.
///
/// On the image of `γ₁`, `γ₂` is forced; off it, `γ₂` zig-zags away from
/// the image on both sides.
pub fn complete_from_theta(gamma1: &FenceMap, alpha: &FenceMap, n: u64) -> Result<FenceMap> {
    if !alpha.is_fence_preserving() || !gamma1.is_fence_preserving() {
        return Err(Error::NotFencePreserving);
    }
    if !Analysis::of(gamma1).in_theta() {
        return precondition("first factor has a non-convex fiber");
    }
    if !same_blocks(gamma1, alpha) {
        return precondition("first factor and target have different blocks");
    }
    let j = gamma1.min_value();
    if j < n {
        return precondition(format!("first factor's image starts at {j} < n = {n}"));
    }
    let g_blocks = BlockStream::of(gamma1);
    let a_blocks = BlockStream::of(alpha);
    let values = a_blocks.value_sequence();
    let u1 = g_blocks.nth(1).unwrap().value;
    let decreasing = g_blocks.nth(2).is_some_and(|b| b.value < u1);
    let gamma2 = if !decreasing {
        // blocks of γ₁ carry j, j+1, j+2, ...
        if g_blocks.value_sequence() != FenceMap::identity().add(j - 1) {
            return internal("convex-fibered factor is not monotone on blocks");
        }
        let v1 = values.eval(1);
        let head: Vec<u64> = (1..j).map(|x| v1 + j - x).collect();
        values.prepend(&head)
    } else {
        let l = g_blocks.count().finite().expect("a decreasing fence map has finitely many blocks");
        if (1..=l).any(|i| g_blocks.nth(i).unwrap().value + (i - 1) != u1) || u1 + 1 != j + l {
            return internal("convex-fibered factor is not monotone on blocks");
        }
        let top = u1;
        let (vl, v1) = (values.eval(l), values.eval(1));
        FenceMap::sample(top + 1, 1, |x| {
            if x < j {
                vl + j - x
            } else if x <= top {
                values.eval(top - x + 1)
            } else {
                v1 + x - top
            }
        })?
    };
    if !gamma2.is_fence_preserving() || !Analysis::of(&gamma2).in_lambda_n(n) {
        return precondition(format!("no completion in Λ{n} exists for this first factor"));
    }
    if gamma1.compose(&gamma2) != *alpha {
        return internal("completion does not recompose to the target");
    }
    Ok(gamma2)
}
