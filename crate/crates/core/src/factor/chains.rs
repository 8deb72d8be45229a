//! Words over `Bₙ ∪ Λₙ ∪ {ξ}` for δₘ, over `𝒜ₙ ∪ Bₙ ∪ Λₙ ∪ {ξ}` for maps
//! with finitely many non-singleton blocks, and over `Hₙ` for every map.

use crate::error::{precondition, Error, Result};
use crate::factor::{
    compose_all, complete_from_theta, ensure_composes, explicit, least_above_with_parity, GeneratorWord,
    TargetClass,
};
use crate::generators::{as_alpha_gen, as_beta_gen, as_lambda_gen, xi, ClassTag, GeneratorSymbol as S};
use crate::invariants::{Analysis, BlockStream};
use crate::map::FenceMap;

fn xis(k: u64) -> impl Iterator<Item = S> {
    (0..k).map(|_| S::Xi)
}

fn betas(k: u64, times: u64) -> impl Iterator<Item = S> {
    (0..times).map(move |_| S::BetaGen { k })
}

fn delta_factors(m: u64, n: u64) -> Vec<S> {
    let m1 = m.max(n);
    let m2 = 2 * m1 + 1;
    let mut w: Vec<S> = Vec::new();
    if m == 1 && n == 1 {
        w.extend([S::Xi, S::BetaGen { k: 1 }]);
    } else if m == 1 {
        w.extend(xis(m1));
        w.extend([S::BetaGen { k: m2 - 2 }, S::LambdaGen { k: m2 - 2 }]);
    } else if m % 2 == 1 {
        w.extend(xis(m1));
        w.extend(betas(m2, (m - 1) / 2));
        w.push(S::LambdaGen { k: m2 });
    } else {
        w.extend(xis(m1));
        w.extend(betas(m2 - 1, m / 2));
        w.push(S::LambdaGen { k: m2 - 2 });
    }
    w
}

/// A word for `δₘ` over `Bₙ ∪ Λₙ ∪ {ξ}`.
pub fn delta_word(m: u64, n: u64) -> GeneratorWord {
    assert!(m >= 1 && n >= 1, "indices start at 1");
    GeneratorWord::new(TargetClass::DeltaWord { n }, delta_factors(m, n))
}

/// Least odd number above `n`.
fn least_odd_above(n: u64) -> u64 {
    least_above_with_parity(n, 1)
}

fn non_delta_factors(alpha: &FenceMap, n: u64) -> Result<Vec<S>> {
    let bs = BlockStream::of(alpha);
    let Some(stars) = bs.star_blocks().finite_list() else {
        return precondition("map has infinitely many non-singleton blocks");
    };
    let k1 = least_odd_above(n);
    let kp = (k1 - 1) / 2;
    if stars.is_empty() {
        let a1 = alpha.eval(1);
        let head: Vec<u64> = (1..k1).map(|x| a1 + k1 - x).collect();
        let gamma = alpha.prepend(&head);
        return Ok(xis(kp).chain([explicit(gamma, ClassTag::LambdaN { n })]).collect());
    }
    let p: Vec<u64> = stars.iter().map(|s| s.0).collect();
    let ends: Vec<Option<u64>> = stars.iter().map(|&(s, l)| l.map(|l| s + l - 1)).collect();
    let halves: Vec<u64> = stars.iter().map(|&(_, l)| l.map_or(0, |l| (l - 1) / 2)).collect();
    let mut ks = vec![k1];
    for i in 1..stars.len() {
        ks.push(ks[i - 1] + p[i] - ends[i - 1].expect("only the last block is infinite"));
    }
    let one_in_first = p[0] == 1;
    let mut word: Vec<S> = Vec::new();
    match (one_in_first, ends[0]) {
        (true, None) => {
            // constant map: land on the parity-matched constant
            let c = alpha.eval(1);
            if c % 2 == 1 {
                word.extend(xis(kp));
                word.push(S::AlphaGen { k: k1 });
            } else {
                word.extend(xis(kp + 1));
                word.push(S::AlphaGen { k: k1 + 1 });
            }
        }
        (true, Some(m1)) => {
            word.extend(delta_factors(m1, n));
            word.extend(xis(kp));
        }
        (false, None) => {
            word.extend(xis(kp));
            word.push(S::AlphaGen { k: k1 + p[0] - 1 });
        }
        (false, Some(_)) => {
            word.extend(xis(kp));
            word.extend(betas(k1 + p[0] - 1, halves[0]));
        }
    }
    for i in 1..stars.len() {
        let idx = match (one_in_first, ends[0]) {
            (true, Some(m1)) if m1 % 2 == 1 => ks[i],
            (true, _) => ks[i] + 1,
            (false, _) => ks[i] + p[0] - 1,
        };
        match ends[i] {
            None => word.push(S::AlphaGen { k: idx }),
            Some(_) => word.extend(betas(idx, halves[i])),
        }
    }
    let first = compose_all(&word)?;
    word.push(explicit(complete_from_theta(&first, alpha, n)?, ClassTag::LambdaN { n }));
    Ok(word)
}

/// A word over `𝒜ₙ ∪ Bₙ ∪ Λₙ ∪ {ξ}` for a map with finitely many non-singleton blocks.
pub fn non_delta_word(alpha: &FenceMap, n: u64) -> Result<GeneratorWord> {
    check_input(alpha, n)?;
    let w = non_delta_factors(alpha, n)?;
    ensure_composes(&w, alpha, "non-Δ word")?;
    Ok(GeneratorWord::new(TargetClass::NonDelta { n }, w))
}

fn check_input(alpha: &FenceMap, n: u64) -> Result<()> {
    if n == 0 {
        return precondition("class parameter n starts at 1");
    }
    if !alpha.is_fence_preserving() {
        return Err(Error::NotFencePreserving);
    }
    Ok(())
}

/// A single-factor word when `alpha` is itself a member of `Hₙ` other than
/// through `Δₙ`.
pub(crate) fn trivial_h_factor(a: &Analysis, n: u64) -> Option<S> {
    if a.map == xi() {
        return Some(S::Xi);
    }
    if let Some(k) = as_alpha_gen(&a.map).filter(|&k| k >= n) {
        return Some(S::AlphaGen { k });
    }
    if let Some(k) = as_beta_gen(&a.map).filter(|&k| k >= n) {
        return Some(S::BetaGen { k });
    }
    if a.in_lambda_n(n) {
        return Some(match as_lambda_gen(&a.map) {
            Some(k) => S::LambdaGen { k },
            None => explicit(a.map.clone(), ClassTag::LambdaN { n }),
        });
    }
    None
}

/// A word over `Hₙ = 𝒜ₙ ∪ Bₙ ∪ Λₙ ∪ Δₙ ∪ {ξ}` composing to `alpha`.
pub fn h_word(alpha: &FenceMap, n: u64) -> Result<GeneratorWord> {
    check_input(alpha, n)?;
    let a = Analysis::of(alpha);
    let target = TargetClass::Hn { n };
    if let Some(s) = trivial_h_factor(&a, n) {
        return Ok(GeneratorWord::new(target, vec![s]));
    }
    if a.blocks.m_star_count().is_finite() {
        let w = non_delta_factors(alpha, n)?;
        ensure_composes(&w, alpha, "non-Δ word")?;
        return Ok(GeneratorWord::new(target, w));
    }
    let bs = &a.blocks;
    let k1 = least_odd_above(n);
    let mut word: Vec<S> = Vec::new();
    if distinct_prefix_values(alpha, n) == n {
        // α is injective on 1..n: index the blocks from a parity-matched k
        let k = least_above_with_parity(n, bs.nth(1).unwrap().value);
        word.push(explicit(bs.index_map().add(k - 1), ClassTag::DeltaN { n }));
    } else {
        // first non-singleton block starting beyond n
        let (s_idx, s_block) = bs
            .iter()
            .enumerate()
            .map(|(i, b)| (i as u64 + 1, b))
            .find(|(_, b)| b.len.is_some_and(|l| l >= 2) && b.start > n)
            .expect("a Δ map has non-singleton blocks beyond any bound");
        let ps = s_block.start;
        let index = bs.index_map();
        let start = ps.max(index.tail_start());
        let gamma0 = FenceMap::sample(start, index.tail_period(), |x| {
            if x < ps {
                k1 + x - 1
            } else {
                k1 + ps - 1 + index.eval(x) - s_idx
            }
        })?;
        word.push(explicit(gamma0, ClassTag::DeltaN { n }));
        let stars = bs.star_blocks();
        let before: Vec<(u64, u64)> = (1..=stars.floor_index(ps - 1)).map(|i| stars.span(i)).collect();
        if let Some(&(q1, len1)) = before.first() {
            let mut ks = vec![k1];
            for i in 1..before.len() {
                let (prev_s, prev_l) = before[i - 1];
                ks.push(ks[i - 1] + before[i].0 - (prev_s + prev_l - 1));
            }
            for (i, &(_, len)) in before.iter().enumerate() {
                let idx = match (q1 == 1, len1 % 2 == 1) {
                    (true, true) => ks[i],
                    (true, false) => ks[i] - 1,
                    (false, _) => ks[i] + q1 - 1,
                };
                word.extend(betas(idx, len / 2));
            }
        }
    }
    let first = compose_all(&word)?;
    word.push(explicit(complete_from_theta(&first, alpha, n)?, ClassTag::LambdaN { n }));
    ensure_composes(&word, alpha, "Hₙ word")?;
    Ok(GeneratorWord::new(target, word))
}

fn distinct_prefix_values(alpha: &FenceMap, n: u64) -> u64 {
    let mut v: Vec<u64> = (1..=n).map(|x| alpha.eval(x)).collect();
    v.sort_unstable();
    v.dedup();
    v.len() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::verify_word;
    use crate::generators::*;

    #[test]
    fn delta_word_examples() {
        assert_eq!(delta_word(1, 1).factors, vec![S::Xi, S::BetaGen { k: 1 }]);
        assert_eq!(
            delta_word(2, 1).factors,
            vec![S::Xi, S::Xi, S::BetaGen { k: 4 }, S::LambdaGen { k: 3 }]
        );
        assert_eq!(
            delta_word(3, 2).factors,
            vec![S::Xi, S::Xi, S::Xi, S::BetaGen { k: 7 }, S::LambdaGen { k: 7 }]
        );
    }

    #[test]
    fn delta_words_compose() {
        for m in 1..=6 {
            for n in 1..=6 {
                let r = verify_word(&delta_word(m, n), &delta_gen(m));
                assert!(r.success(), "m={m} n={n}: {r:?}");
            }
        }
    }

    #[test]
    fn non_delta_xi() {
        let w = non_delta_word(&xi(), 1).unwrap();
        assert_eq!(w.factors.len(), 2);
        assert_eq!(w.factors[0], S::Xi);
        assert!(verify_word(&w, &xi()).success());
    }

    #[test]
    fn non_delta_alpha_ends_in_alpha_factor() {
        let w = non_delta_word(&alpha_gen(4), 2).unwrap();
        let n = w.factors.len();
        assert!(matches!(w.factors[n - 2], S::AlphaGen { .. }), "{w}");
        assert!(verify_word(&w, &alpha_gen(4)).success());
    }

    #[test]
    fn non_delta_beta() {
        let w = non_delta_word(&beta_gen(5), 3).unwrap();
        assert!(verify_word(&w, &beta_gen(5)).success());
        assert!(matches!(non_delta_word(&collapse_witness(), 1), Err(Error::Precondition(_))));
    }

    #[test]
    fn h_word_examples() {
        assert_eq!(h_word(&alpha_gen(5), 3).unwrap().factors, vec![S::AlphaGen { k: 5 }]);
        let w = h_word(&collapse_witness(), 1).unwrap();
        assert_eq!(w.factors.len(), 2);
        assert!(matches!(w.factors[0], S::Explicit { certified_class: ClassTag::DeltaN { n: 1 }, .. }));
        assert!(verify_word(&w, &collapse_witness()).success());
    }

    #[test]
    fn h_word_case_two() {
        // 2,2,3,4,4,4,5,6,6,6,...: the first block {1,2} is collapsed
        let a = FenceMap::from_parts(vec![2, 2], 2, vec![3, 4, 4, 4]).unwrap();
        assert!(a.is_fence_preserving());
        let w = h_word(&a, 2).unwrap();
        assert!(matches!(w.factors[0], S::Explicit { certified_class: ClassTag::DeltaN { n: 2 }, .. }));
        assert!(verify_word(&w, &a).success(), "{w}");
    }
}
