//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//!
//! Every check is exact. Random instances come from fixed seeds, so a run is
//! reproducible.

mod common;

use std::time::{Duration, Instant};

use common::*;
use fence_core::factor::{
    delta_word, explicit, g_word, h_word, k_split, theta_lambda_factor, verify_word, GeneratorWord, TargetClass,
};
use fence_core::generators::*;
use fence_core::invariants::{block_stream, c_value, Analysis, KClass};
use fence_core::{oracle, FenceMap};

type Outcome = Result<String, String>;

struct Suite {
    failed: usize,
}

impl Suite {
    fn criterion(&mut self, id: u32, name: &str, budget: Option<Duration>, f: impl FnOnce() -> Outcome) {
        let t = Instant::now();
        let mut r = f();
        let dt = t.elapsed();
        if let (Ok(msg), Some(b)) = (&r, budget) {
            if dt > b {
                r = Err(format!("{msg}; took {dt:.2?}, budget {b:?}"));
            }
        }
        match r {
            Ok(msg) => println!("criterion {id}: PASS  {name} ({msg}; {dt:.2?})"),
            Err(msg) => {
                self.failed += 1;
                println!("criterion {id}: FAIL  {name} ({msg}; {dt:.2?})");
            }
        }
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// The shared random corpus of fence-preserving maps.
fn corpus() -> Vec<FenceMap> {
    let mut r = rng(0xfe_0ce);
    (0..300).map(|_| random_fence(&mut r)).collect()
}

/// Maps that force every branch of the chain constructions.
fn forced_cases() -> Vec<(&'static str, FenceMap, Vec<u64>)> {
    let all: Vec<u64> = (1..=8).collect();
    let mut v = vec![
        ("injective: ξ", xi(), all.clone()),
        ("injective: identity", FenceMap::identity(), all.clone()),
        ("injective: even shift", FenceMap::identity().add(4), all.clone()),
        ("finite M*, infinite last block: constant", FenceMap::constant(3).unwrap(), all.clone()),
        (
            "finite M*, infinite last block: zig-zag then constant",
            FenceMap::from_parts(vec![3, 2, 1, 2], 0, vec![3]).unwrap(),
            all.clone(),
        ),
        (
            "finite M*, no infinite block",
            FenceMap::from_parts(vec![5, 4], 1, vec![3]).unwrap(),
            all.clone(),
        ),
        ("Δ with |{1..n}α| = n", collapse_witness(), vec![1, 2]),
        ("Δ with |{1..n}α| < n", collapse_witness(), vec![3, 4, 5, 6, 7, 8]),
        ("Δ with |{1..n}α| < n, shifted block", FenceMap::from_parts(vec![2, 2], 2, vec![3, 4, 4, 4]).unwrap(), all.clone()),
    ];
    for k in 1..=8u64 {
        v.push(("named: α", alpha_gen(k), all.clone()));
        v.push(("named: β", beta_gen(k), all.clone()));
        v.push(("named: δ", delta_gen(k), all.clone()));
        v.push(("named: λ", lambda_gen(2 * k - 1).unwrap(), all.clone()));
    }
    v
}

fn main() {
    let mut s = Suite { failed: 0 };

    s.criterion(1, "characterization equivalence", Some(Duration::from_secs(5)), || {
        let mut r = rng(1);
        let mut preserving = 0;
        for i in 0..1200 {
            // half arbitrary, half built as fence walks so both answers occur
            let m = if i % 2 == 0 { random_eqp(&mut r) } else { random_fence(&mut r) };
            let structural = m.is_fence_preserving();
            ensure(structural == oracle::brute_preserving(&m, 400), || format!("disagreement on {m}"))?;
            preserving += structural as usize;
        }
        Ok(format!("1200 maps, {preserving} fence-preserving"))
    });

    let maps = corpus();

    s.criterion(2, "Θ·Λₙ decomposition", None, || {
        for m in &maps {
            for n in 1..=8 {
                let (g1, g2) = theta_lambda_factor(m, n).map_err(|e| format!("{m}, n={n}: {e}"))?;
                ensure(g1.compose(&g2) == *m, || format!("{m}, n={n}: no exact recomposition"))?;
                let w = GeneratorWord::new(
                    TargetClass::ThetaLambda { n },
                    vec![explicit(g1, ClassTag::Theta), explicit(g2, ClassTag::LambdaN { n })],
                );
                ensure(verify_word(&w, m).success(), || format!("{m}, n={n}: certification failed"))?;
            }
        }
        Ok(format!("{} maps × n = 1..8", maps.len()))
    });

    s.criterion(3, "δ-word table", Some(Duration::from_secs(2)), || {
        for m in 1..=20 {
            for n in 1..=20 {
                let w = delta_word(m, n);
                let r = verify_word(&w, &delta_gen(m));
                ensure(r.success(), || format!("m={m}, n={n}: {r:?}"))?;
            }
        }
        Ok("400 cases".into())
    });

    s.criterion(4, "generating-chain soundness", None, || {
        let mut words = 0;
        let mut check = |m: &FenceMap, n: u64, what: &str| -> Result<(), String> {
            let h = h_word(m, n).map_err(|e| format!("{what} {m}, n={n}: h_word: {e}"))?;
            ensure(verify_word(&h, m).success(), || format!("{what} {m}, n={n}: h_word {h} fails"))?;
            let g = g_word(m, n).map_err(|e| format!("{what} {m}, n={n}: g_word: {e}"))?;
            ensure(verify_word(&g, m).success(), || format!("{what} {m}, n={n}: g_word {g} fails"))?;
            words += 2;
            Ok(())
        };
        for m in &maps {
            for n in 1..=8 {
                check(m, n, "corpus")?;
            }
        }
        let forced = forced_cases();
        for (what, m, ns) in &forced {
            for &n in ns {
                check(m, n, what)?;
            }
        }
        Ok(format!("{words} words, {} forced branch cases", forced.len()))
    });

    s.criterion(5, "closure laws", None, || {
        let mut r = rng(5);
        for _ in 0..500 {
            let (a, b) = (random_lambda(&mut r), random_lambda(&mut r));
            ensure(Analysis::of(&a.compose(&b)).in_lambda(), || format!("Λ not closed: {a} · {b}"))?;
        }
        for _ in 0..500 {
            let (a, b) = (random_gamma(&mut r), random_gamma(&mut r));
            ensure(Analysis::of(&a.compose(&b)).in_gamma(), || format!("Γ not closed: {a} · {b}"))?;
        }
        for _ in 0..500 {
            let (a, b) = (random_fence(&mut r), random_fence(&mut r));
            ensure(c_value(&a) <= c_value(&a.compose(&b)), || format!("c decreases: {a} · {b}"))?;
        }
        let mut ideal = 0;
        while ideal < 500 {
            let m = random_fence(&mut r);
            if Analysis::of(&m).in_p() {
                continue;
            }
            let b = random_fence(&mut r);
            ensure(!Analysis::of(&m.compose(&b)).in_p() && !Analysis::of(&b.compose(&m)).in_p(), || {
                format!("ideal law fails: {m} with {b}")
            })?;
            ideal += 1;
        }
        Ok("500 pairs for each of Λ, Γ, c-monotonicity and the ideal law".into())
    });

    s.criterion(6, "K-split", None, || {
        let mut r = rng(6);
        for l in 1..=3 {
            for _ in 0..40 {
                let m = random_k(&mut r, l);
                ensure(Analysis::of(&m).k_class() == KClass::K(l), || format!("generator made {m}, not K({l})"))?;
                let (g1, g2) = k_split(&m).map_err(|e| format!("{m}: {e}"))?;
                ensure(g1.compose(&g2) == m, || format!("{m}: no exact recomposition"))?;
                for g in [&g1, &g2] {
                    let above = match Analysis::of(g).k_class() {
                        KClass::K(l2) => l2 > l,
                        KClass::KInf => true,
                        KClass::NotInP => false,
                    };
                    ensure(above, || format!("{m}: factor {g} is not above K({l})"))?;
                }
            }
        }
        Ok("120 maps, l ∈ {1, 2, 3}".into())
    });

    s.criterion(7, "chain strictness and intersection", None, || {
        let mut candidates: Vec<FenceMap> = Vec::new();
        for k in 1..=12u64 {
            candidates.extend([alpha_gen(k), beta_gen(k), delta_gen(k)]);
            candidates.extend((0..=6).map(|j| beta_gen(k).add(2 * j)));
            candidates.push(lambda_gen(2 * k - 1).unwrap());
        }
        let mut shown = Vec::new();
        for n in 1..=8 {
            let a: Vec<Analysis> = candidates.iter().map(Analysis::of).collect();
            let h = a.iter().position(|x| x.in_h(n) && !x.in_h(n + 1));
            let g = a.iter().position(|x| x.in_g(n) && !x.in_g(n + 1));
            match (h, g) {
                (Some(h), Some(g)) => shown.push(format!("n={n}: H {} / G {}", candidates[h], candidates[g])),
                _ => return Err(format!("no strictness witness for n={n}")),
            }
        }
        let mut r = rng(7);
        let mut tested = 0;
        while tested < 200 {
            let m = random_fence(&mut r);
            if m == xi() {
                continue;
            }
            let k = m.eval(1) + 1;
            ensure(!Analysis::of(&m).in_g(k), || format!("{m} lies in G{k}"))?;
            tested += 1;
        }
        let xa = Analysis::of(&xi());
        ensure((1..=64).all(|n| xa.in_g(n)), || "ξ misses some Gₙ".into())?;
        Ok(format!("witnesses for n = 1..8, 200 random maps outside G(α(1)+1), ξ in G1..G64; {}", shown[0]))
    });

    s.criterion(8, "Q-family consequence", None, || {
        let mut r = rng(8);
        for _ in 0..120 {
            let (a, b) = (random_periodic_set(&mut r), random_periodic_set(&mut r));
            let c = alpha_family(&a).compose(&alpha_family(&b));
            let long = block_stream(&c).iter().take(200).any(|bl| bl.len.is_none_or(|l| l >= 9));
            ensure(long, || format!("no block of length ≥ 9 in α_A·α_B for A={a:?}, B={b:?}"))?;
        }
        Ok("120 pairs".into())
    });

    s.criterion(9, "structural invariants", None, || {
        let mut r = rng(9);
        for _ in 0..500 {
            let m = random_fence(&mut r);
            for b in block_stream(&m).iter().take_while(|b| b.start <= 300) {
                let odd = b.len.is_none_or(|l| l < 2 || b.start == 1 || l % 2 == 1);
                ensure(odd, || format!("{m}: even block at {}", b.start))?;
            }
        }
        for _ in 0..500 {
            let m = random_fence(&mut r);
            let mut v = m.table(oracle::horizon_for(&[&m]));
            v.sort_unstable();
            v.dedup();
            ensure(v.windows(2).all(|w| w[1] == w[0] + 1), || format!("{m}: image not convex"))?;
        }
        for i in 0..500u64 {
            let m = random_eqp(&mut r);
            let n = m.normalize();
            let u = m.unfold_period(1 + i % 3).unfold_start(i % 5).normalize();
            ensure(n.is_canonical() && n.normalize() == n && u.prefix() == n.prefix(), || {
                format!("{m}: normal form unstable")
            })?;
            ensure(
                u.tail_start() == n.tail_start() && u.tail_period() == n.tail_period() && u.tail_base() == n.tail_base(),
                || format!("{m}: unfolding changes the normal form"),
            )?;
        }
        for _ in 0..500 {
            let (a, b, c) = (random_eqp(&mut r), random_eqp(&mut r), random_eqp(&mut r));
            ensure(a.compose(&b).compose(&c) == a.compose(&b.compose(&c)), || format!("({a}·{b})·{c}"))?;
        }
        for _ in 0..500 {
            let m = random_fence(&mut r);
            let h = oracle::horizon_for(&[&m]);
            let brute = oracle::brute_blocks(&m, h);
            let ours: Vec<_> = block_stream(&m).iter().take_while(|b| b.start <= h).collect();
            let agree = ours.len() == brute.len()
                && ours.iter().zip(&brute).all(|(o, b)| {
                    o.start == b.start
                        && o.value == b.value
                        && if b.truncated { o.len.is_none_or(|l| l >= b.len) } else { o.len == Some(b.len) }
                });
            ensure(agree, || format!("{m}: blocks disagree with brute force"))?;
        }
        Ok("500 instances each: odd blocks, convex image, normal form, associativity, blocks".into())
    });

    if s.failed > 0 {
        println!("acceptance: {} criteria FAILED", s.failed);
        std::process::exit(1);
    }
    println!("acceptance: all 9 criteria passed");
}
