//! Constructive factorizations into generator words, and their verification.
//!
//! Every construction checks its own output: compositions are compared by
//! normal form and each explicit factor is classified before it is returned.

mod chains;
mod g_chain;
mod ksplit;
mod theta_lambda;

pub use chains::{delta_word, h_word, non_delta_word};
pub use g_chain::g_word;
pub use ksplit::k_split;
pub use theta_lambda::{complete_from_theta, same_blocks, theta_lambda_factor};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{internal, Result};
use crate::generators::{ClassTag, GeneratorSymbol};
use crate::invariants::{Analysis, KClass};
use crate::map::FenceMap;
use crate::oracle;

pub const SCHEMA_VERSION: u32 = 1;

/// The generating set a word is drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "snake_case")]
pub enum TargetClass {
    ThetaLambda { n: u64 },
    Hn { n: u64 },
    Gn { n: u64 },
    DeltaWord { n: u64 },
    /// 𝒜ₙ ∪ Bₙ ∪ Λₙ ∪ {ξ}.
    NonDelta { n: u64 },
    KSplit { l: u64 },
}

/// A finite product of generators, applied left to right.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorWord {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    pub target_class: TargetClass,
    pub factors: Vec<GeneratorSymbol>,
}

fn schema_version() -> u32 {
    SCHEMA_VERSION
}

impl GeneratorWord {
    pub fn new(target_class: TargetClass, factors: Vec<GeneratorSymbol>) -> Self {
        GeneratorWord { schema_version: SCHEMA_VERSION, target_class, factors }
    }

    /// Left-to-right composition of all factors.
    pub fn compose(&self) -> Result<FenceMap> {
        compose_all(&self.factors)
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|s| s.to_string()).collect();
        f.write_str(&parts.join("·"))
    }
}

pub(crate) fn compose_all(factors: &[GeneratorSymbol]) -> Result<FenceMap> {
    let mut it = factors.iter();
    let Some(first) = it.next() else {
        return internal("empty generator word");
    };
    it.try_fold(first.to_map()?, |acc, s| Ok(acc.compose(&s.to_map()?)))
}

/// A factor carried as a full map together with the class it claims.
pub fn explicit(map: FenceMap, tag: ClassTag) -> GeneratorSymbol {
    GeneratorSymbol::Explicit { map, certified_class: tag }
}

/// Checks that `parts` compose to `target`, failing with an internal error otherwise.
pub(crate) fn ensure_composes(parts: &[GeneratorSymbol], target: &FenceMap, what: &str) -> Result<()> {
    let got = compose_all(parts)?;
    if got != *target {
        return internal(format!("{what} does not recompose to its target"));
    }
    Ok(())
}

/// Least `k > n` with `k ≡ parity (mod 2)`.
pub(crate) fn least_above_with_parity(n: u64, parity: u64) -> u64 {
    if (n + 1) % 2 == parity % 2 {
        n + 1
    } else {
        n + 2
    }
}

/// A point where the composed word and the target differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub x: u64,
    pub composed: u64,
    pub target: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorCertification {
    pub index: usize,
    pub factor: String,
    pub ok: bool,
    /// Name of the first failing predicate.
    pub failed: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub composed_equals_target: bool,
    pub oracle_agrees: bool,
    pub mismatch_witness: Option<Mismatch>,
    pub factor_certifications: Vec<FactorCertification>,
}

impl VerificationReport {
    pub fn success(&self) -> bool {
        self.composed_equals_target && self.oracle_agrees && self.factor_certifications.iter().all(|c| c.ok)
    }
}

/// Checks a certified class against an analysis, naming the failed predicate.
pub(crate) fn tag_holds(a: &Analysis, tag: ClassTag) -> std::result::Result<(), String> {
    let (ok, name) = match tag {
        ClassTag::Theta => (a.in_theta(), "theta"),
        ClassTag::LambdaN { n } => (a.in_lambda_n(n), "lambda_n"),
        ClassTag::DeltaN { n } => (a.in_delta_n(n), "delta_n"),
        ClassTag::G3 { n } => (a.g3(n), "g3"),
        ClassTag::KAbove { l } => (
            matches!(a.k_class(), KClass::K(l2) if l2 > l) || a.k_class() == KClass::KInf,
            "k_class_above",
        ),
    };
    if ok {
        Ok(())
    } else {
        Err(name.to_string())
    }
}

fn certify(sym: &GeneratorSymbol, target: TargetClass, position: usize, len: usize) -> std::result::Result<(), String> {
    use GeneratorSymbol as S;
    let map = sym.to_map().map_err(|e| format!("invalid factor: {e}"))?;
    if !map.is_fence_preserving() {
        return Err("fence_preserving".into());
    }
    let a = Analysis::of(&map);
    let need = |ok: bool, name: &str| if ok { Ok(()) } else { Err(name.to_string()) };
    // the explicit tag must hold, whatever the scheme
    if let S::Explicit { certified_class, .. } = sym {
        tag_holds(&a, *certified_class)?;
    }
    let tag_at_least = |t: ClassTag, n: u64| match t {
        ClassTag::LambdaN { n: m } | ClassTag::DeltaN { n: m } | ClassTag::G3 { n: m } => m >= n,
        _ => false,
    };
    let lambda_ok = |n: u64| a.in_lambda_n(n);
    match target {
        TargetClass::Hn { n } | TargetClass::NonDelta { n } => match sym {
            S::Xi => Ok(()),
            S::AlphaGen { k } => need(*k >= n, "alpha_index_at_least_n"),
            S::BetaGen { k } => need(*k >= n, "beta_index_at_least_n"),
            S::LambdaGen { .. } => need(lambda_ok(n), "lambda_n"),
            S::Explicit { certified_class: t @ ClassTag::LambdaN { .. }, .. } => need(tag_at_least(*t, n), "tag_parameter"),
            S::Explicit { certified_class: t @ ClassTag::DeltaN { .. }, .. }
                if matches!(target, TargetClass::Hn { .. }) =>
            {
                need(tag_at_least(*t, n), "tag_parameter")
            }
            _ => Err("not_in_generating_set".into()),
        },
        TargetClass::Gn { n } => match sym {
            S::Xi => Ok(()),
            S::LambdaGen { .. } => need(lambda_ok(n), "lambda_n"),
            S::Explicit { certified_class: t @ (ClassTag::LambdaN { .. } | ClassTag::G3 { .. }), .. } => {
                need(tag_at_least(*t, n), "tag_parameter")
            }
            _ => Err("not_in_generating_set".into()),
        },
        TargetClass::DeltaWord { n } => match sym {
            S::Xi => Ok(()),
            S::BetaGen { k } => need(*k >= n, "beta_index_at_least_n"),
            S::LambdaGen { .. } => need(lambda_ok(n), "lambda_n"),
            _ => Err("not_in_generating_set".into()),
        },
        TargetClass::ThetaLambda { n } => match (position, len, sym) {
            (0, 2, S::Explicit { certified_class: ClassTag::Theta, .. }) => Ok(()),
            (1, 2, S::Explicit { certified_class: t @ ClassTag::LambdaN { .. }, .. }) => {
                need(tag_at_least(*t, n), "tag_parameter")
            }
            _ => Err("not_a_theta_lambda_pair".into()),
        },
        TargetClass::KSplit { l } => match (len, sym) {
            (2, S::Explicit { certified_class: ClassTag::KAbove { l: l2 }, .. }) => need(*l2 >= l, "tag_parameter"),
            _ => Err("not_a_k_split_pair".into()),
        },
    }
}

/// Composes the word, compares it with `target` structurally and on a
/// prefix, and certifies every factor against the word's generating set.
pub fn verify_word(word: &GeneratorWord, target: &FenceMap) -> VerificationReport {
    let len = word.factors.len();
    let factor_certifications: Vec<FactorCertification> = word
        .factors
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let r = certify(s, word.target_class, i, len);
            FactorCertification { index: i, factor: s.to_string(), ok: r.is_ok(), failed: r.err() }
        })
        .collect();
    let composed = word.compose();
    let (equal, agrees, witness) = match &composed {
        Ok(c) => {
            let equal = c == target;
            let h = oracle::horizon_for(&[c, target]);
            let agrees = oracle::agree_on_prefix(c, target, h);
            let witness = if equal {
                None
            } else {
                let far = c.tail_start().max(target.tail_start())
                    + 2 * lcm(c.tail_period(), target.tail_period())
                    + 1;
                oracle::first_disagreement(c, target, far.max(h))
                    .map(|(x, composed, target)| Mismatch { x, composed, target })
            };
            (equal, agrees, witness)
        }
        Err(_) => (false, false, None),
    };
    VerificationReport {
        schema_version: SCHEMA_VERSION,
        composed_equals_target: equal,
        oracle_agrees: agrees,
        mismatch_witness: witness,
        factor_certifications,
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    let mut x = a;
    let mut y = b;
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::*;

    #[test]
    fn verify_delta_word() {
        let r = verify_word(&delta_word(2, 1), &delta_gen(2));
        assert!(r.success(), "{r:?}");
    }

    #[test]
    fn verify_reports_mismatch() {
        let w = GeneratorWord::new(TargetClass::Hn { n: 1 }, vec![GeneratorSymbol::Xi]);
        let r = verify_word(&w, &delta_gen(1));
        assert!(!r.composed_equals_target);
        assert_eq!(r.mismatch_witness, Some(Mismatch { x: 1, composed: 3, target: 1 }));
        assert!(r.factor_certifications[0].ok);
    }

    #[test]
    fn verify_rejects_low_index() {
        let w = GeneratorWord::new(TargetClass::Hn { n: 5 }, vec![GeneratorSymbol::BetaGen { k: 4 }]);
        let r = verify_word(&w, &beta_gen(4));
        assert!(r.composed_equals_target);
        assert_eq!(r.factor_certifications[0].failed.as_deref(), Some("beta_index_at_least_n"));
    }

    #[test]
    fn verify_rejects_false_tag() {
        let sym = explicit(beta_gen(4), ClassTag::LambdaN { n: 1 });
        let w = GeneratorWord::new(TargetClass::Gn { n: 1 }, vec![sym]);
        let r = verify_word(&w, &beta_gen(4));
        assert_eq!(r.factor_certifications[0].failed.as_deref(), Some("lambda_n"));
        assert!(!r.success());
    }

    #[test]
    fn word_text_and_json() {
        let w = delta_word(2, 1);
        assert_eq!(w.to_string(), "ξ·ξ·β₄·λ₃");
        let s = serde_json::to_string(&w).unwrap();
        assert!(s.contains("\"schema_version\":1"));
        let back: GeneratorWord = serde_json::from_str(&s).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn parity_helper() {
        assert_eq!(least_above_with_parity(1, 1), 3);
        assert_eq!(least_above_with_parity(1, 0), 2);
        assert_eq!(least_above_with_parity(4, 1), 5);
    }
}
