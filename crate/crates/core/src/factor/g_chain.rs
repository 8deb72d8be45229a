//! Words over `Gₙ`: ξ, `Λₙ`, and the maps satisfying (g3).
//!
//! An `Hₙ` word is computed first; each `αₖ`, `βₖ` and `Δₙ` factor is then
//! replaced by a short product of `Gₙ` members.

use crate::error::{internal, Error, Result};
use crate::factor::{ensure_composes, explicit, h_word, tag_holds, GeneratorWord, TargetClass};
use crate::generators::{beta_gen, ClassTag, GeneratorSymbol as S};
use crate::invariants::{Analysis, BlockStream};
use crate::map::FenceMap;

/// Least even number above `k`.
fn least_even_above(k: u64) -> u64 {
    if k.is_multiple_of(2) {
        k + 2
    } else {
        k + 1
    }
}

fn expand_alpha(k: u64, n: u64) -> Result<Vec<S>> {
    let l = least_even_above(k);
    let g1 = FenceMap::sample(k, 2, |x| if x < k { l + x } else { l + k + (x - k) % 2 })?;
    let g2 = beta_gen(l + k).add(l);
    Ok(vec![
        explicit(g1, ClassTag::LambdaN { n }),
        explicit(g2, ClassTag::G3 { n }),
        S::LambdaGen { k: 2 * l + 1 },
    ])
}

fn expand_beta(k: u64, n: u64) -> Vec<S> {
    let l = least_even_above(k);
    vec![explicit(beta_gen(k).add(l), ClassTag::G3 { n }), S::LambdaGen { k: l + 1 }]
}

/// Four `Gₙ` factors for a member of `Δₙ`. Requires infinitely many
/// non-singleton blocks `A₁, A₂, ...`; `γ₁` turns each `Aᵢ` (i ≥ 2) into a
/// zig-zag ending one step up, `γ₂` and `γ₃` re-collapse it into a triple,
/// and the last factor completes the product.
fn expand_delta(alpha: &FenceMap, n: u64) -> Result<Vec<S>> {
    let bs = BlockStream::of(alpha);
    let stars = bs.star_blocks();
    if stars.count().is_finite() {
        return internal("Δ expansion applied to a map with finitely many non-singleton blocks");
    }
    let l = least_even_above(alpha.eval(1));
    let (p1, l1) = stars.span(1);
    let c = u64::from(l1 % 2 == 0);

    // from this star index on, shifting by one period moves every star by `cyc`
    let first_periodic = (stars.head_len() + 1).max(2);
    let period = stars.period();
    let cyc = stars.cycle_len();

    // tables indexed by star number (entry 0 unused); sampling never looks
    // more than a few periods past `first_periodic`
    let top = (first_periodic + 4 * cyc + 2) as usize;
    let spans: Vec<(u64, u64)> = (0..=top).map(|i| if i == 0 { (0, 0) } else { stars.span(i as u64) }).collect();
    // excess[i] = Σ_{j=2..=i} (|A_j| - 3)
    let mut excess = vec![0i64; top + 1];
    for i in 2..=top {
        excess[i] = excess[i - 1] + spans[i].1 as i64 - 3;
    }
    let ks: Vec<u64> = (0..=top)
        .map(|i| if i < 2 { 0 } else { (l as i64 + spans[i].0 as i64 - excess[i - 1]) as u64 })
        .collect();
    let k_of = |i: u64| ks[i as usize];
    let excess = |i: u64| excess[i as usize];
    let p2 = spans[2].0;

    let g1 = FenceMap::sample(spans[first_periodic as usize].0, period, |x| {
        if x < p2 {
            return l + x;
        }
        let i = stars.floor_index(x);
        let (pi, li) = spans[i as usize];
        if x < pi + li {
            let o = x - pi;
            if o == li - 1 {
                k_of(i) + 2
            } else {
                k_of(i) + o % 2
            }
        } else {
            (l as i64 + x as i64 - excess(i)) as u64
        }
    })?;

    let g2 = FenceMap::sample(l + p1 + l1 - 1, 1, |x| {
        if x + c < l + p1 {
            l + x + l1 + c - 3
        } else if x + 2 <= l + p1 + l1 {
            2 * l + p1 + l1 - 3 + (x + c - l - p1) % 2
        } else {
            l + x
        }
    })?;

    let k2 = k_of(2);
    let g3_period = (k_of(first_periodic + cyc) - k_of(first_periodic)).max(1);
    let g3 = FenceMap::sample(l + k_of(first_periodic), g3_period, |x| {
        if x + 4 <= 2 * l + p1 + l1 {
            return l + x;
        }
        if x < 2 * l + p1 + l1 {
            return 3 * l + p1 + l1 - 3;
        }
        if x < l + k2 {
            return l + x - 2;
        }
        // largest i ≥ 2 with l + k_i ≤ x; k_i grows by at least 3 per block
        let i = 1 + ks[2..].partition_point(|&k| l + k <= x) as u64;
        let ki = k_of(i);
        if x <= l + ki + 2 {
            2 * l + ki - 2 * (i - 1)
        } else {
            l + x - 2 * i
        }
    })?;

    let first = g1.compose(&g2).compose(&g3);
    let g4 = crate::factor::complete_from_theta(&first, alpha, n)?;
    merge_uncertified(vec![
        (g1, ClassTag::LambdaN { n }),
        (g2, ClassTag::LambdaN { n }),
        (g3, ClassTag::G3 { n }),
        (g4, ClassTag::LambdaN { n }),
    ])
}

/// Replaces degenerate factors and folds any other factor that misses its
/// class into the factor after it.
///
/// When the blocks are already triples the zig-zag factors degenerate to
/// even shifts `x ↦ x + 2j`, which lie in no class of `Gₙ` but equal `ξʲ`.
fn merge_uncertified(parts: Vec<(FenceMap, ClassTag)>) -> Result<Vec<S>> {
    let mut out: Vec<S> = Vec::new();
    let mut pending: Option<FenceMap> = None;
    for (map, tag) in parts {
        let m = match pending.take() {
            Some(p) => p.compose(&map),
            None => map,
        };
        let shift = m.eval(1) - 1;
        if shift % 2 == 0 && m == FenceMap::identity().add(shift) {
            out.extend(std::iter::repeat_n(S::Xi, (shift / 2) as usize));
            continue;
        }
        if tag_holds(&Analysis::of(&m), tag).is_ok() {
            out.push(explicit(m, tag));
        } else {
            pending = Some(m);
        }
    }
    if pending.is_some() {
        return internal("last factor of a Δ expansion misses its class");
    }
    Ok(out)
}

/// A word over `Gₙ` composing to `alpha`.
pub fn g_word(alpha: &FenceMap, n: u64) -> Result<GeneratorWord> {
    let h = h_word(alpha, n)?;
    let mut out: Vec<S> = Vec::new();
    for f in h.factors {
        match f {
            S::Xi | S::LambdaGen { .. } => out.push(f),
            S::Explicit { certified_class: ClassTag::LambdaN { .. }, .. } => out.push(f),
            S::AlphaGen { k } => out.extend(expand_alpha(k, n)?),
            S::BetaGen { k } => out.extend(expand_beta(k, n)),
            S::Explicit { map, certified_class: ClassTag::DeltaN { .. } } => out.extend(expand_delta(&map, n)?),
            other => return Err(Error::Internal(format!("unexpected factor {other} in an Hₙ word"))),
        }
    }
    ensure_composes(&out, alpha, "Gₙ word")?;
    Ok(GeneratorWord::new(TargetClass::Gn { n }, out))
}
