//! Brute-force reference computations on a finite prefix `[1, horizon]`.
//!
//! Everything here works from value tables built by repeated evaluation and
//! from the raw definition of the fence order, so it can be used to check
//! the structural algorithms elsewhere in the crate.

use serde::Serialize;

use crate::map::FenceMap;

pub const DEFAULT_HORIZON: u64 = 200;
pub const MAX_HORIZON: u64 = 1_000_000;

/// The values `α(1), ..., α(horizon)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixTable {
    pub horizon: u64,
    pub values: Vec<u64>,
}

impl PrefixTable {
    pub fn of(m: &FenceMap, horizon: u64) -> PrefixTable {
        PrefixTable { horizon, values: (1..=horizon).map(|x| m.eval(x)).collect() }
    }

    /// `α(x)` for `1 ≤ x ≤ horizon`.
    pub fn at(&self, x: u64) -> u64 {
        self.values[(x - 1) as usize]
    }
}

/// Default horizon doubled until it covers `tail_start + 2·period` of every operand.
pub fn horizon_for(maps: &[&FenceMap]) -> u64 {
    let need = maps.iter().map(|m| m.tail_start() + 2 * m.tail_period()).max().unwrap_or(0);
    let mut h = DEFAULT_HORIZON;
    while h < need && h < MAX_HORIZON {
        h *= 2;
    }
    h.min(MAX_HORIZON)
}

/// Strict fence order: odd numbers sit below their neighbours.
pub fn fence_lt(x: u64, y: u64) -> bool {
    x % 2 == 1 && x.abs_diff(y) == 1
}

pub fn fence_le(x: u64, y: u64) -> bool {
    x == y || fence_lt(x, y)
}

/// Checks `x ⪯ y ⟹ α(x) ⪯ α(y)` for every comparable pair inside `[1, horizon]`.
pub fn brute_preserving(m: &FenceMap, horizon: u64) -> bool {
    let t = PrefixTable::of(m, horizon);
    (1..=horizon).all(|x| {
        [x.checked_sub(1), Some(x + 1)]
            .into_iter()
            .flatten()
            .filter(|&y| y >= 1 && y <= horizon && fence_lt(x, y))
            .all(|y| fence_le(t.at(x), t.at(y)))
    })
}

/// A maximal constancy run of the table; the last one is `truncated` at the horizon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BruteBlock {
    pub start: u64,
    pub len: u64,
    pub value: u64,
    pub truncated: bool,
}

pub fn brute_blocks(m: &FenceMap, horizon: u64) -> Vec<BruteBlock> {
    let t = PrefixTable::of(m, horizon);
    let mut out: Vec<BruteBlock> = Vec::new();
    for x in 1..=horizon {
        match out.last_mut() {
            Some(b) if b.value == t.at(x) => b.len += 1,
            _ => out.push(BruteBlock { start: x, len: 1, value: t.at(x), truncated: false }),
        }
    }
    if let Some(b) = out.last_mut() {
        b.truncated = true;
    }
    out
}

/// Maximal runs of singleton blocks among the complete (untruncated) blocks,
/// as `(start, len)`; a run reaching the last complete block is clipped there.
pub fn brute_runs(m: &FenceMap, horizon: u64) -> Vec<(u64, u64)> {
    let mut out: Vec<(u64, u64)> = Vec::new();
    let mut open: Option<(u64, u64)> = None;
    for b in brute_blocks(m, horizon).into_iter().filter(|b| !b.truncated) {
        if b.len == 1 {
            let r = open.get_or_insert((b.start, 0));
            r.1 += 1;
        } else if let Some(r) = open.take() {
            out.push(r);
        }
    }
    out.extend(open);
    out
}

/// Positions in `[1, horizon]` mapped to `v`, and whether no later position can be.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BruteFiber {
    pub positions: Vec<u64>,
    pub complete: bool,
}

pub fn fiber(m: &FenceMap, v: u64, horizon: u64) -> BruteFiber {
    let t = PrefixTable::of(m, horizon);
    let positions = (1..=horizon).filter(|&x| t.at(x) == v).collect();
    // past the horizon the map repeats its window shifted by the drift
    let window: Vec<u64> = (horizon + 1..=horizon + m.tail_period()).map(|x| m.eval(x)).collect();
    let complete = horizon + 1 >= m.tail_start()
        && if m.tail_drift() > 0 {
            window.iter().all(|&w| w > v)
        } else {
            !window.contains(&v)
        };
    BruteFiber { positions, complete }
}

pub fn agree_on_prefix(a: &FenceMap, b: &FenceMap, horizon: u64) -> bool {
    first_disagreement(a, b, horizon).is_none()
}

/// Least `x ≤ horizon` with `a(x) ≠ b(x)`, with both values.
pub fn first_disagreement(a: &FenceMap, b: &FenceMap, horizon: u64) -> Option<(u64, u64, u64)> {
    (1..=horizon).map(|x| (x, a.eval(x), b.eval(x))).find(|&(_, u, v)| u != v)
}
