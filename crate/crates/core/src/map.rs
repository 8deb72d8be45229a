//! Eventually quasi-periodic (EQP) self-maps of ℕ = {1, 2, 3, ...}.
//!
//! A map is stored as a finite prefix `α(1..N)` followed by a tail rule
//! `α(x) = base[(x-N) mod p] + d·⌊(x-N)/p⌋` for `x ≥ N`. Maps are applied
//! left to right: `a.compose(&b)` is `x ↦ b(a(x))`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{internal, Error, Result};

/// An eventually quasi-periodic map ℕ → ℕ.
///
/// Construction validates structure but does not canonicalize; equality
/// compares normal forms, so two representations of the same function are
/// equal.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawMap")]
pub struct FenceMap {
    prefix: Vec<u64>,
    tail_start: u64,
    tail_period: u64,
    tail_drift: u64,
    tail_base: Vec<u64>,
}

#[derive(Deserialize)]
struct RawMap {
    prefix: Vec<u64>,
    tail_start: u64,
    tail_period: u64,
    tail_drift: u64,
    tail_base: Vec<u64>,
}

impl TryFrom<RawMap> for FenceMap {
    type Error = Error;

    fn try_from(r: RawMap) -> Result<Self> {
        FenceMap::new(r.prefix, r.tail_start, r.tail_period, r.tail_drift, r.tail_base)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl FenceMap {
    /// Builds a map from its five fields, checking structural validity only.
    pub fn new(
        prefix: Vec<u64>,
        tail_start: u64,
        tail_period: u64,
        tail_drift: u64,
        tail_base: Vec<u64>,
    ) -> Result<Self> {
        if tail_start == 0 {
            return Err(Error::InvalidMap("tail start must be at least 1".into()));
        }
        if prefix.len() as u64 != tail_start - 1 {
            return Err(Error::InvalidMap(format!(
                "prefix has {} values but tail starts at {}",
                prefix.len(),
                tail_start
            )));
        }
        if tail_period == 0 {
            return Err(Error::InvalidMap("tail period must be at least 1".into()));
        }
        if tail_base.len() as u64 != tail_period {
            return Err(Error::InvalidMap(format!(
                "tail base has {} values but period is {}",
                tail_base.len(),
                tail_period
            )));
        }
        if prefix.iter().chain(&tail_base).any(|&v| v == 0) {
            return Err(Error::InvalidMap("values must be at least 1".into()));
        }
        Ok(FenceMap { prefix, tail_start, tail_period, tail_drift, tail_base })
    }

    /// Builds and normalizes a map whose tail starts right after `prefix`.
    pub fn from_parts(prefix: Vec<u64>, drift: u64, base: Vec<u64>) -> Result<Self> {
        let start = prefix.len() as u64 + 1;
        let period = base.len() as u64;
        Ok(FenceMap::new(prefix, start, period, drift, base)?.normalize())
    }

    pub fn identity() -> Self {
        FenceMap::new(vec![], 1, 1, 1, vec![1]).expect("identity is valid")
    }

    pub fn constant(c: u64) -> Result<Self> {
        FenceMap::new(vec![], 1, 1, 0, vec![c])
    }

    pub fn prefix(&self) -> &[u64] {
        &self.prefix
    }

    pub fn tail_start(&self) -> u64 {
        self.tail_start
    }

    pub fn tail_period(&self) -> u64 {
        self.tail_period
    }

    pub fn tail_drift(&self) -> u64 {
        self.tail_drift
    }

    pub fn tail_base(&self) -> &[u64] {
        &self.tail_base
    }

    /// First position after one full tail period; every structural feature
    /// of the map is visible on `[1, horizon_hint())`.
    pub fn horizon_hint(&self) -> u64 {
        self.tail_start + self.tail_period
    }

    /// `α(x)` for `x ≥ 1`.
    pub fn eval(&self, x: u64) -> u64 {
        debug_assert!(x >= 1, "maps are defined on ℕ starting at 1");
        if x < self.tail_start {
            self.prefix[(x - 1) as usize]
        } else {
            let k = x - self.tail_start;
            self.tail_base[(k % self.tail_period) as usize] + self.tail_drift * (k / self.tail_period)
        }
    }

    /// Values `α(1), ..., α(h)`.
    pub fn table(&self, h: u64) -> Vec<u64> {
        (1..=h).map(|x| self.eval(x)).collect()
    }

    /// Smallest image value. The tail attains its minimum in its first period.
    pub fn min_value(&self) -> u64 {
        self.prefix.iter().chain(&self.tail_base).copied().min().expect("base is nonempty")
    }

    /// Largest value over `[1, N+p)`; for drift 0 this is the maximum of the image.
    pub fn window_max(&self) -> u64 {
        self.prefix.iter().chain(&self.tail_base).copied().max().expect("base is nonempty")
    }

    /// Largest `x` with `α(x) ≤ v`; only meaningful when the drift is positive.
    pub fn last_position_at_most(&self, v: u64) -> Option<u64> {
        assert!(self.tail_drift > 0, "unbounded search on a bounded tail");
        let mut best = self
            .prefix
            .iter()
            .enumerate()
            .filter(|(_, &w)| w <= v)
            .map(|(i, _)| i as u64 + 1)
            .max();
        for (r, &b) in self.tail_base.iter().enumerate() {
            if b <= v {
                let k = (v - b) / self.tail_drift;
                let x = self.tail_start + r as u64 + k * self.tail_period;
                best = Some(best.map_or(x, |y| y.max(x)));
            }
        }
        best
    }

    /// Canonical form: minimal period, then minimal tail start.
    pub fn normalize(&self) -> FenceMap {
        let p = self.tail_period;
        let d = self.tail_drift;
        let val = |j: u64| self.tail_base[(j % p) as usize] + d * (j / p);
        let mut base = self.tail_base.clone();
        let mut period = p;
        let mut drift = d;
        for q in (1..p).filter(|q| p.is_multiple_of(*q)) {
            let f = p / q;
            if !d.is_multiple_of(f) {
                continue;
            }
            let dq = d / f;
            if (0..p).all(|i| val(i + q) == val(i) + dq) {
                base.truncate(q as usize);
                period = q;
                drift = dq;
                break;
            }
        }
        let mut prefix = self.prefix.clone();
        while let Some(&last) = prefix.last() {
            let back = base[period as usize - 1];
            if back >= drift && back - drift == last {
                prefix.pop();
                base.rotate_right(1);
                base[0] = last;
            } else {
                break;
            }
        }
        let tail_start = prefix.len() as u64 + 1;
        FenceMap { prefix, tail_start, tail_period: period, tail_drift: drift, tail_base: base }
    }

    pub fn is_canonical(&self) -> bool {
        let n = self.normalize();
        n.prefix == self.prefix && n.tail_period == self.tail_period && n.tail_base == self.tail_base
    }

    /// Structural comparison of normal forms.
    pub fn equals(&self, other: &FenceMap) -> bool {
        let (a, b) = (self.normalize(), other.normalize());
        a.prefix == b.prefix
            && a.tail_period == b.tail_period
            && a.tail_drift == b.tail_drift
            && a.tail_base == b.tail_base
    }

    /// Same function with the tail period multiplied by `k`.
    pub fn unfold_period(&self, k: u64) -> FenceMap {
        assert!(k >= 1);
        let p = self.tail_period * k;
        let base = (0..p).map(|i| self.eval(self.tail_start + i)).collect();
        FenceMap {
            prefix: self.prefix.clone(),
            tail_start: self.tail_start,
            tail_period: p,
            tail_drift: self.tail_drift * k,
            tail_base: base,
        }
    }

    /// Same function with the tail start moved `k` positions to the right.
    pub fn unfold_start(&self, k: u64) -> FenceMap {
        let start = self.tail_start + k;
        FenceMap {
            prefix: (1..start).map(|x| self.eval(x)).collect(),
            tail_start: start,
            tail_period: self.tail_period,
            tail_drift: self.tail_drift,
            tail_base: (0..self.tail_period).map(|i| self.eval(start + i)).collect(),
        }
    }

    /// The map `x ↦ b(a(x))`.
    pub fn compose(&self, b: &FenceMap) -> FenceMap {
        let a = self;
        let (period, start) = if a.tail_drift == 0 {
            (a.tail_period, a.tail_start)
        } else {
            let m = b.tail_period / gcd(a.tail_drift, b.tail_period);
            let start = match b.tail_start {
                1 => a.tail_start,
                nb => match a.last_position_at_most(nb - 1) {
                    Some(x) => a.tail_start.max(x + 1),
                    None => a.tail_start,
                },
            };
            (m * a.tail_period, start)
        };
        let f = |x: u64| b.eval(a.eval(x));
        let prefix: Vec<u64> = (1..start).map(f).collect();
        let base: Vec<u64> = (start..start + period).map(f).collect();
        let drift = f(start + period) - f(start);
        FenceMap { prefix, tail_start: start, tail_period: period, tail_drift: drift, tail_base: base }
            .normalize()
    }

    /// `k`-fold composition with itself, `k ≥ 1`.
    pub fn power(&self, k: u64) -> FenceMap {
        assert!(k >= 1, "powers start at 1");
        let mut acc = self.normalize();
        let mut base = self.normalize();
        let mut e = k - 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }

    /// Local fence test: neighbouring values differ by at most one, and for
    /// `x ≥ 2` either `x ≡ α(x) (mod 2)` or `α` is constant on `{x-1, x, x+1}`.
    ///
    /// Both conditions are invariant under `x ↦ x + 2p` past the tail start,
    /// so checking `x ≤ N + 2p` decides them for all of ℕ.
    pub fn is_fence_preserving(&self) -> bool {
        let end = self.tail_start + 2 * self.tail_period;
        (1..=end).all(|x| {
            let (v, w) = (self.eval(x), self.eval(x + 1));
            if v.abs_diff(w) > 1 {
                return false;
            }
            if x >= 2 && x % 2 != v % 2 {
                let u = self.eval(x - 1);
                return u == v && v == w;
            }
            true
        })
    }

    /// The map `x ↦ α(x) + c`.
    pub fn add(&self, c: u64) -> FenceMap {
        FenceMap {
            prefix: self.prefix.iter().map(|v| v + c).collect(),
            tail_base: self.tail_base.iter().map(|v| v + c).collect(),
            ..self.clone()
        }
    }

    /// The map taking the values `head` on `1..=head.len()` and `α(x - head.len())` after.
    pub fn prepend(&self, head: &[u64]) -> FenceMap {
        let mut prefix = head.to_vec();
        prefix.extend_from_slice(&self.prefix);
        FenceMap {
            tail_start: prefix.len() as u64 + 1,
            prefix,
            tail_period: self.tail_period,
            tail_drift: self.tail_drift,
            tail_base: self.tail_base.clone(),
        }
        .normalize()
    }

    /// Samples `f` as an EQP map with the given tail start and period. The
    /// drift is read off `f` and the quasi-periodicity is spot-checked over
    /// two further periods; a mismatch is an internal error.
    pub fn sample(start: u64, period: u64, f: impl Fn(u64) -> u64) -> Result<FenceMap> {
        let start = start.max(1);
        let period = period.max(1);
        let (lo, hi) = (f(start), f(start + period));
        if hi < lo {
            return internal(format!("sampled map decreases across a period at {start}"));
        }
        let drift = hi - lo;
        for x in start..start + 2 * period {
            if f(x + period) != f(x) + drift {
                return internal(format!("sampled map is not quasi-periodic at {x}"));
            }
        }
        let prefix: Vec<u64> = (1..start).map(&f).collect();
        let base: Vec<u64> = (start..start + period).map(&f).collect();
        let m = FenceMap::new(prefix, start, period, drift, base)?;
        Ok(m.normalize())
    }
}

impl PartialEq for FenceMap {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl Eq for FenceMap {}

impl fmt::Display for FenceMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::dsl::render_map(self))
    }
}
