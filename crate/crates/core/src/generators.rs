//! The named transformation families: ξ, αₖ, βₖ, λₖ, δₖ, the Q-family
//! maps α_A and the collapse witness.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::FenceMap;

/// `x ↦ x + 2`.
pub fn xi() -> FenceMap {
    FenceMap::new(vec![], 1, 1, 1, vec![3]).expect("valid")
}

/// Identity below `k`, constant `k` from `k` on.
pub fn alpha_gen(k: u64) -> FenceMap {
    assert!(k >= 1, "alpha_gen index starts at 1");
    FenceMap::from_parts((1..k).collect(), 0, vec![k]).expect("valid")
}

/// Identity below `k`, `{k, k+1, k+2} ↦ k`, then `x ↦ x - 2`.
pub fn beta_gen(k: u64) -> FenceMap {
    assert!(k >= 1, "beta_gen index starts at 1");
    let mut prefix: Vec<u64> = (1..k).collect();
    prefix.extend([k, k, k]);
    FenceMap::from_parts(prefix, 1, vec![k + 1]).expect("valid")
}

/// `k - x + 1` on `1..=k`, then `x - k + 1`. Only odd `k` give fence maps.
pub fn lambda_gen(k: u64) -> Result<FenceMap> {
    if k.is_multiple_of(2) {
        return Err(Error::EvenLambda(k));
    }
    Ok(FenceMap::from_parts((1..=k).rev().collect(), 1, vec![2]).expect("valid"))
}

/// `χ` on `1..=k`, then `χ + x - k`, where `χ` is 1 for odd `k` and 2 for even `k`.
pub fn delta_gen(k: u64) -> FenceMap {
    assert!(k >= 1, "delta_gen index starts at 1");
    let chi = if k % 2 == 1 { 1 } else { 2 };
    FenceMap::from_parts(vec![chi; k as usize], 1, vec![chi + 1]).expect("valid")
}

/// `4n-3 ↦ 2n-1` and `{4n-2, 4n-1, 4n} ↦ 2n`.
pub fn collapse_witness() -> FenceMap {
    FenceMap::new(vec![], 1, 4, 2, vec![1, 2, 2, 2]).expect("valid")
}

/// An eventually periodic subset of ℕ: the listed `members` together with
/// every `origin() + i` for which `pattern[i mod period]` is set, where the
/// origin is one past the largest listed member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicSet {
    pub members: Vec<u64>,
    pub period: u64,
    pub pattern: Vec<bool>,
}

impl PeriodicSet {
    pub fn new(mut members: Vec<u64>, pattern: Vec<bool>) -> Result<Self> {
        if pattern.is_empty() {
            return Err(Error::InvalidMap("periodic set needs a nonempty pattern".into()));
        }
        if members.contains(&0) {
            return Err(Error::InvalidMap("set members start at 1".into()));
        }
        members.sort_unstable();
        members.dedup();
        Ok(PeriodicSet { members, period: pattern.len() as u64, pattern })
    }

    pub fn all() -> Self {
        PeriodicSet::new(vec![], vec![true]).expect("valid")
    }

    pub fn empty() -> Self {
        PeriodicSet::new(vec![], vec![false]).expect("valid")
    }

    pub fn origin(&self) -> u64 {
        self.members.last().map_or(1, |m| m + 1)
    }

    pub fn contains(&self, n: u64) -> bool {
        let o = self.origin();
        if n < o {
            self.members.binary_search(&n).is_ok()
        } else {
            self.pattern[((n - o) % self.period) as usize]
        }
    }
}

/// The map whose n-th block carries value `n` and has length 3 when `n ∈ A`
/// and 5 otherwise.
pub fn alpha_family(a: &PeriodicSet) -> FenceMap {
    let len = |n: u64| if a.contains(n) { 3 } else { 5 };
    let origin = a.origin();
    let mut prefix = Vec::new();
    for n in 1..origin {
        prefix.extend(std::iter::repeat_n(n, len(n)));
    }
    let mut base = Vec::new();
    for n in origin..origin + a.period {
        base.extend(std::iter::repeat_n(n, len(n)));
    }
    FenceMap::from_parts(prefix, a.period, base).expect("valid")
}

/// Membership tag carried by an explicit factor of a generator word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum ClassTag {
    Theta,
    LambdaN { n: u64 },
    DeltaN { n: u64 },
    /// Θₙ with |M*| ∈ {1, ℵ₀} and every non-singleton block of length 3.
    G3 { n: u64 },
    /// In K(l') for some l' > l, or in K_ℵ₀.
    KAbove { l: u64 },
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassTag::Theta => f.write_str("Θ"),
            ClassTag::LambdaN { n } => write!(f, "Λ{}", subscript(*n)),
            ClassTag::DeltaN { n } => write!(f, "Δ{}", subscript(*n)),
            ClassTag::G3 { n } => write!(f, "g3{}", subscript(*n)),
            ClassTag::KAbove { l } => write!(f, "K>{l}"),
        }
    }
}

/// One factor of a generator word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSymbol {
    Xi,
    AlphaGen { k: u64 },
    BetaGen { k: u64 },
    LambdaGen { k: u64 },
    DeltaGen { k: u64 },
    Explicit { map: FenceMap, certified_class: ClassTag },
}

impl GeneratorSymbol {
    pub fn to_map(&self) -> Result<FenceMap> {
        Ok(match self {
            GeneratorSymbol::Xi => xi(),
            GeneratorSymbol::AlphaGen { k } => nonzero(*k).map(alpha_gen)?,
            GeneratorSymbol::BetaGen { k } => nonzero(*k).map(beta_gen)?,
            GeneratorSymbol::LambdaGen { k } => lambda_gen(*k)?,
            GeneratorSymbol::DeltaGen { k } => nonzero(*k).map(delta_gen)?,
            GeneratorSymbol::Explicit { map, .. } => map.clone(),
        })
    }
}

fn nonzero(k: u64) -> Result<u64> {
    if k == 0 {
        Err(Error::InvalidMap("generator index starts at 1".into()))
    } else {
        Ok(k)
    }
}

pub(crate) fn subscript(n: u64) -> String {
    const DIGITS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    n.to_string().chars().map(|c| DIGITS[c.to_digit(10).unwrap() as usize]).collect()
}

impl fmt::Display for GeneratorSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorSymbol::Xi => f.write_str("ξ"),
            GeneratorSymbol::AlphaGen { k } => write!(f, "α{}", subscript(*k)),
            GeneratorSymbol::BetaGen { k } => write!(f, "β{}", subscript(*k)),
            GeneratorSymbol::LambdaGen { k } => write!(f, "λ{}", subscript(*k)),
            GeneratorSymbol::DeltaGen { k } => write!(f, "δ{}", subscript(*k)),
            GeneratorSymbol::Explicit { certified_class, .. } => write!(f, "γ[{certified_class}]"),
        }
    }
}

// Recognizers: each guesses the only possible index and compares.

/// `Some(k)` when `m = αₖ`.
pub fn as_alpha_gen(m: &FenceMap) -> Option<u64> {
    if m.tail_drift() != 0 {
        return None;
    }
    let k = m.window_max();
    (alpha_gen(k) == *m).then_some(k)
}

/// `Some(k)` when `m = βₖ`.
pub fn as_beta_gen(m: &FenceMap) -> Option<u64> {
    let end = m.horizon_hint() + m.tail_period();
    let k = (1..=end).find(|&x| m.eval(x) == m.eval(x + 1))?;
    (beta_gen(k) == *m).then_some(k)
}

/// `Some(k)` when `m = λₖ` for odd `k`.
pub fn as_lambda_gen(m: &FenceMap) -> Option<u64> {
    let k = m.eval(1);
    (k % 2 == 1 && lambda_gen(k).ok()? == *m).then_some(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_maps_are_fence_preserving() {
        assert!(xi().is_fence_preserving());
        assert!(collapse_witness().is_fence_preserving());
        for k in 1..12 {
            assert!(alpha_gen(k).is_fence_preserving(), "alpha {k}");
            assert!(beta_gen(k).is_fence_preserving(), "beta {k}");
            assert!(delta_gen(k).is_fence_preserving(), "delta {k}");
            if k % 2 == 1 {
                assert!(lambda_gen(k).unwrap().is_fence_preserving(), "lambda {k}");
            }
        }
    }

    #[test]
    fn pointwise_values() {
        assert_eq!(xi().eval(1), 3);
        assert_eq!(alpha_gen(1), FenceMap::constant(1).unwrap());
        assert_eq!(alpha_gen(5).eval(9), 5);
        assert_eq!(beta_gen(1).eval(3), 1);
        assert_eq!(lambda_gen(1).unwrap(), FenceMap::identity());
        assert_eq!(lambda_gen(3).unwrap().eval(1), 3);
        assert_eq!(lambda_gen(2), Err(Error::EvenLambda(2)));
        assert_eq!(delta_gen(1), FenceMap::identity());
        assert_eq!(delta_gen(2).eval(2), 2);
        assert_eq!(delta_gen(4).eval(10), 8);
        assert_eq!(collapse_witness().eval(9), 5);
    }

    #[test]
    fn family_uniform_cases() {
        let all = alpha_family(&PeriodicSet::all());
        assert_eq!(all, FenceMap::new(vec![], 1, 3, 1, vec![1, 1, 1]).unwrap());
        let none = alpha_family(&PeriodicSet::empty());
        assert_eq!(none.table(11), vec![1, 1, 1, 1, 1, 2, 2, 2, 2, 2, 3]);
    }

    #[test]
    fn family_block_lengths_follow_membership() {
        let a = PeriodicSet::new(vec![2, 3], vec![false, true, true]).unwrap();
        let m = alpha_family(&a);
        assert!(m.is_fence_preserving());
        let t = m.table(300);
        for n in 1..40u64 {
            let count = t.iter().filter(|&&v| v == n).count();
            assert_eq!(count, if a.contains(n) { 3 } else { 5 }, "value {n}");
        }
    }

    #[test]
    fn recognizers() {
        assert_eq!(as_alpha_gen(&alpha_gen(4)), Some(4));
        assert_eq!(as_alpha_gen(&xi()), None);
        assert_eq!(as_beta_gen(&beta_gen(6)), Some(6));
        assert_eq!(as_beta_gen(&collapse_witness()), None);
        assert_eq!(as_lambda_gen(&lambda_gen(5).unwrap()), Some(5));
        assert_eq!(as_lambda_gen(&xi()), None);
    }

    #[test]
    fn symbol_json_shape() {
        let s = serde_json::to_string(&GeneratorSymbol::BetaGen { k: 4 }).unwrap();
        assert_eq!(s, r#"{"kind":"beta_gen","k":4}"#);
        let e = GeneratorSymbol::Explicit { map: xi(), certified_class: ClassTag::LambdaN { n: 2 } };
        let back: GeneratorSymbol = serde_json::from_str(&serde_json::to_string(&e).unwrap()).unwrap();
        assert_eq!(back, e);
        assert_eq!(e.to_string(), "γ[Λ₂]");
    }
}
