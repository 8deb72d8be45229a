//! Combinatorial invariants (nb, c, rank, block families, R, Q) and class
//! membership.

mod blocks;
mod fibers;

pub use blocks::{Block, BlockRef, BlockStream, BlockTail, RunStream, RunTail, Shape, StarBlocks};
pub use fibers::{Fiber, FiberTable, PeriodicWitness, SetReport};

use serde::Serialize;

use crate::error::{internal, precondition, Error, Result};
use crate::ext_nat::ExtNat;
use crate::generators::{as_alpha_gen, as_beta_gen, xi};
use crate::map::FenceMap;

/// `|nb(α)|`, the number of positions `a` with `α(a) = α(a+1)`.
pub fn nb_size(m: &FenceMap) -> ExtNat {
    let m = m.normalize();
    let n = m.tail_start();
    let p = m.tail_period();
    let flat = |x: u64| m.eval(x) == m.eval(x + 1);
    if (n..n + p).any(flat) {
        ExtNat::Aleph0
    } else {
        ExtNat::Finite((1..n).filter(|&x| flat(x)).count() as u64)
    }
}

pub fn c_value(m: &FenceMap) -> ExtNat {
    FiberTable::of(m).c_value()
}

pub fn rank(m: &FenceMap) -> ExtNat {
    FiberTable::of(m).rank()
}

pub fn block_stream(m: &FenceMap) -> BlockStream {
    BlockStream::of(m)
}

pub fn ms_stream(m: &FenceMap) -> RunStream {
    BlockStream::of(m).ms_stream()
}

pub fn r_set(m: &FenceMap) -> SetReport {
    FiberTable::of(m).r_set()
}

pub fn q_set(m: &FenceMap) -> SetReport {
    FiberTable::of(m).q_set()
}

fn monotone_preconditions(m: &FenceMap) -> Result<FiberTable> {
    if m.tail_drift() == 0 {
        return precondition("eventual monotonicity needs infinite rank");
    }
    let t = FiberTable::of(m);
    if t.r_set().cardinality.is_infinite() {
        return precondition("eventual monotonicity needs finitely many non-convex fibers");
    }
    Ok(t)
}

fn check_monotone_from(m: &FenceMap, k: u64) -> Result<u64> {
    let end = k.max(m.tail_start()) + m.tail_period() + 1;
    if (k..end).any(|x| m.eval(x) > m.eval(x + 1)) {
        return internal(format!("map decreases past index {k}"));
    }
    Ok(k)
}

/// The least `k` such that `α` is nondecreasing on `[k, ∞)`.
///
/// Requires infinite rank and finitely many non-convex fibers, under which
/// such a `k` exists.
pub fn eventual_monotone_index(m: &FenceMap) -> Result<u64> {
    let m = m.normalize();
    monotone_preconditions(&m)?;
    let last_descent = (1..m.tail_start() + m.tail_period()).rfind(|&x| m.eval(x) > m.eval(x + 1));
    check_monotone_from(&m, last_descent.map_or(1, |x| x + 1))
}

/// The index produced by the existence argument: with `k'` the least image
/// value above every value with a non-convex fiber, `k = min α⁻¹(k')`.
/// Never smaller than [`eventual_monotone_index`].
pub fn monotone_index_by_construction(m: &FenceMap) -> Result<u64> {
    let m = m.normalize();
    let t = monotone_preconditions(&m)?;
    let r = t.r_set();
    let k_prime = r.max_finite().map_or(0, |v| v + 1).max(m.min_value());
    match t.fiber(k_prime).up_to(u64::MAX).first() {
        Some(&k) => check_monotone_from(&m, k),
        None => internal(format!("value {k_prime} missing from a convex image")),
    }
}

/// Where a map sits among P, K(l) and K_ℵ₀.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "l", rename_all = "snake_case")]
pub enum KClass {
    NotInP,
    K(u64),
    KInf,
}

/// Membership in every class, for one value of the chain parameter `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassReport {
    pub in_theta: bool,
    pub in_lambda: bool,
    pub in_gamma: bool,
    pub in_delta: bool,
    pub in_b: bool,
    pub in_p: bool,
    pub rank: ExtNat,
    pub nb_size: ExtNat,
    pub c_value: ExtNat,
    pub m_star_count: ExtNat,
    pub k_class: KClass,
    pub n: u64,
    pub in_omega_n: bool,
    pub in_lambda_n: bool,
    pub in_theta_n: bool,
    pub in_delta_n: bool,
    pub in_h_n: bool,
    pub in_g_n: bool,
    /// Which of the three Gₙ clauses hold.
    pub g1: bool,
    pub g2: bool,
    pub g3: bool,
}

/// Everything needed to decide class membership, computed once.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub map: FenceMap,
    pub blocks: BlockStream,
    pub fibers: FiberTable,
    pub nb: ExtNat,
    pub c: ExtNat,
    pub rank: ExtNat,
    pub r: SetReport,
    pub q: SetReport,
}

impl Analysis {
    pub fn of(m: &FenceMap) -> Analysis {
        let map = m.normalize();
        let fibers = FiberTable::of(&map);
        Analysis {
            blocks: BlockStream::of(&map),
            nb: nb_size(&map),
            c: fibers.c_value(),
            rank: fibers.rank(),
            r: fibers.r_set(),
            q: fibers.q_set(),
            fibers,
            map,
        }
    }

    pub fn in_theta(&self) -> bool {
        self.r.cardinality.is_zero()
    }

    pub fn in_lambda(&self) -> bool {
        self.nb.is_zero() && !self.c.is_zero()
    }

    pub fn in_delta(&self) -> bool {
        self.blocks.m_star_count().is_infinite()
    }

    pub fn in_gamma(&self) -> bool {
        let big_fiber = {
            let m = &self.map;
            let end = m.tail_start() + 2 * m.tail_period();
            (1..=end).any(|x| self.fibers.fiber(m.eval(x)).size() >= ExtNat::Finite(3))
        };
        self.in_theta() && self.rank.is_infinite() && big_fiber
    }

    pub fn in_b(&self) -> bool {
        self.nb == ExtNat::Finite(2)
            && self.c == ExtNat::Finite(3)
            && self.rank.is_infinite()
            && self.map.min_value() == 1
    }

    pub fn in_p(&self) -> bool {
        self.rank.is_infinite()
            && self.blocks.big_block_count().is_finite()
            && self.r.cardinality.is_finite()
            && self.q.cardinality.is_finite()
    }

    pub fn k_class(&self) -> KClass {
        if !self.in_p() {
            return KClass::NotInP;
        }
        match self.blocks.ms_stream().least_recurring_length() {
            Some(l) => KClass::K(l),
            None => KClass::KInf,
        }
    }

    pub fn in_omega(&self, n: u64) -> bool {
        if self.map.eval(1) < n {
            return false;
        }
        let mut seen: Vec<u64> = (1..=n).map(|x| self.map.eval(x)).collect();
        seen.sort_unstable();
        seen.dedup();
        seen.len() as u64 == n
    }

    pub fn in_lambda_n(&self, n: u64) -> bool {
        self.in_lambda() && self.in_omega(n)
    }

    pub fn in_theta_n(&self, n: u64) -> bool {
        self.in_theta() && self.in_omega(n)
    }

    pub fn in_delta_n(&self, n: u64) -> bool {
        self.in_delta() && self.in_omega(n)
    }

    pub fn is_xi(&self) -> bool {
        self.map == xi()
    }

    /// `𝒜ₙ`: some `αₖ` with `k ≥ n`.
    pub fn in_alpha_n(&self, n: u64) -> bool {
        as_alpha_gen(&self.map).is_some_and(|k| k >= n)
    }

    /// `Bₙ`: some `βₖ` with `k ≥ n`.
    pub fn in_b_n(&self, n: u64) -> bool {
        as_beta_gen(&self.map).is_some_and(|k| k >= n)
    }

    pub fn in_h(&self, n: u64) -> bool {
        self.is_xi() || self.in_alpha_n(n) || self.in_b_n(n) || self.in_lambda_n(n) || self.in_delta_n(n)
    }

    /// Clause (g3): `Θₙ`, `|M*| ∈ {1, ℵ₀}` and every non-singleton block has length 3.
    pub fn g3(&self, n: u64) -> bool {
        let stars = self.blocks.m_star_count();
        self.in_theta_n(n)
            && (stars == ExtNat::Finite(1) || stars.is_infinite())
            && self.blocks.all_star_lengths_equal(3)
    }

    pub fn in_g(&self, n: u64) -> bool {
        self.is_xi() || self.in_lambda_n(n) || self.g3(n)
    }

    pub fn report(&self, n: u64) -> ClassReport {
        ClassReport {
            in_theta: self.in_theta(),
            in_lambda: self.in_lambda(),
            in_gamma: self.in_gamma(),
            in_delta: self.in_delta(),
            in_b: self.in_b(),
            in_p: self.in_p(),
            rank: self.rank,
            nb_size: self.nb,
            c_value: self.c,
            m_star_count: self.blocks.m_star_count(),
            k_class: self.k_class(),
            n,
            in_omega_n: self.in_omega(n),
            in_lambda_n: self.in_lambda_n(n),
            in_theta_n: self.in_theta_n(n),
            in_delta_n: self.in_delta_n(n),
            in_h_n: self.in_h(n),
            in_g_n: self.in_g(n),
            g1: self.is_xi(),
            g2: self.in_lambda_n(n),
            g3: self.g3(n),
        }
    }
}

/// Full classification of a fence-preserving map for chain parameter `n ≥ 1`.
pub fn classify(m: &FenceMap, n: u64) -> Result<ClassReport> {
    if n == 0 {
        return precondition("class parameter n starts at 1");
    }
    if !m.is_fence_preserving() {
        return Err(Error::NotFencePreserving);
    }
    Ok(Analysis::of(m).report(n))
}
