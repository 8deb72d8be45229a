//! Random map generators shared by the integration tests.
#![allow(dead_code)]

use fence_core::generators::PeriodicSet;
use fence_core::invariants::Analysis;
use fence_core::FenceMap;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Any EQP map: prefix ≤ 12, period ≤ 6, drift ≤ 3, small values.
pub fn random_eqp(r: &mut impl Rng) -> FenceMap {
    let n = r.gen_range(0..=12);
    let p = r.gen_range(1..=6);
    let top = r.gen_range(2..=8);
    let prefix: Vec<u64> = (0..n).map(|_| r.gen_range(1..=top)).collect();
    let base: Vec<u64> = (0..p).map(|_| r.gen_range(1..=top)).collect();
    FenceMap::new(prefix, n + 1, p, r.gen_range(0..=3), base).expect("valid by construction")
}

/// Shape of a random fence walk.
#[derive(Clone, Copy)]
pub struct Walk {
    /// Chance of staying where a move is allowed.
    pub stay: f64,
    /// Chance that a move goes down.
    pub down: f64,
    /// Force the first value to be odd, so that moves are always allowed.
    pub odd_start: bool,
}

pub const ANY_WALK: Walk = Walk { stay: 0.4, down: 0.35, odd_start: false };

/// One step of a fence walk from `(x, v)`: stay, or move by one when `v ≡ x (mod 2)`.
fn step(r: &mut impl Rng, x: u64, v: u64, w: Walk) -> u64 {
    if v % 2 != x % 2 || r.gen_bool(w.stay) {
        return v;
    }
    if v > 1 && r.gen_bool(w.down) {
        v - 1
    } else {
        v + 1
    }
}

/// A random fence-preserving map, built as a walk whose tail repeats.
pub fn random_fence(r: &mut impl Rng) -> FenceMap {
    let w = Walk { stay: r.gen_range(0.1..0.7), ..ANY_WALK };
    random_walk(r, w)
}

pub fn random_walk(r: &mut impl Rng, w: Walk) -> FenceMap {
    loop {
        let n = r.gen_range(1..=10u64);
        let p = r.gen_range(1..=6u64);
        let first = r.gen_range(1..=6u64);
        let mut vals = vec![if w.odd_start { first | 1 } else { first }];
        for x in 1..n + p {
            let v = step(r, x, vals[x as usize - 1], w);
            vals.push(v);
        }
        let (a, b) = (vals[n as usize - 1], vals[(n + p) as usize - 1]);
        // the walk rule at x + p matches the one at x iff d ≡ p (mod 2)
        if b < a || (b - a) % 2 != p % 2 || b - a > 3 {
            continue;
        }
        let m = FenceMap::new(
            vals[..n as usize - 1].to_vec(),
            n,
            p,
            b - a,
            vals[n as usize - 1..(n + p) as usize - 1].to_vec(),
        )
        .expect("valid by construction");
        debug_assert!(m.is_fence_preserving());
        return m.normalize();
    }
}

/// A member of Λ: a walk that never stays and turns at least once.
pub fn random_lambda(r: &mut impl Rng) -> FenceMap {
    loop {
        let m = random_walk(r, Walk { stay: 0.0, down: 0.4, odd_start: true });
        if !Analysis::of(&m).c.is_zero() {
            return m;
        }
    }
}

/// A member of Γ: a nondecreasing walk with unbounded image and a fiber of size ≥ 3.
pub fn random_gamma(r: &mut impl Rng) -> FenceMap {
    loop {
        let m = random_walk(r, Walk { stay: 0.5, down: 0.0, odd_start: false });
        if Analysis::of(&m).in_gamma() {
            return m;
        }
    }
}

/// A fence walk of length `len` ending at a point where it may move.
fn walk_prefix(r: &mut impl Rng, len: u64) -> Vec<u64> {
    let mut vals = vec![r.gen_range(1..=5u64)];
    for x in 1..len {
        let v = step(r, x, vals[x as usize - 1], ANY_WALK);
        vals.push(v);
    }
    vals
}

/// A member of `K(l)`: a random head, then runs of at least `l` singletons
/// separated by triples, with a run of exactly `l` in every period.
pub fn random_k(r: &mut impl Rng, l: u64) -> FenceMap {
    let head = r.gen_range(1..=6);
    let mut vals = walk_prefix(r, head);
    while vals.len() as u64 % 2 != *vals.last().unwrap() % 2 {
        // wait for a movable point
        vals.push(*vals.last().unwrap());
    }
    let runs = r.gen_range(1..=3usize);
    let mut lens: Vec<u64> = (0..runs).map(|_| r.gen_range(l..=l + 3)).collect();
    let i = r.gen_range(0..runs);
    lens[i] = l;
    let start = vals.len() as u64;
    let mut v = *vals.last().unwrap();
    let mut base = Vec::new();
    for &len in &lens {
        for _ in 0..len {
            base.push(v);
            v += 1;
        }
        base.extend([v, v, v]);
        v += 1;
    }
    vals.pop();
    let d = v - base[0];
    let p = base.len() as u64;
    let m = FenceMap::new(vals, start, p, d, base).expect("valid by construction");
    debug_assert!(m.is_fence_preserving());
    m.normalize()
}

pub fn random_periodic_set(r: &mut impl Rng) -> PeriodicSet {
    let members: Vec<u64> = (1..=6).filter(|_| r.gen_bool(0.4)).collect();
    let period = r.gen_range(1..=4);
    let pattern: Vec<bool> = (0..period).map(|_| r.gen_bool(0.5)).collect();
    PeriodicSet::new(members, pattern).expect("valid by construction")
}
