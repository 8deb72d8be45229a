//! Fibers `α⁻¹(v)` and the value sets R (non-convex fibers) and Q
//! (consecutive values with fibers of size at least 3).
//!
//! With positive drift every value above `T = max α[1, N+p)` satisfies
//! `α⁻¹(v + d) = α⁻¹(v) + p`, so the values in `(T, T+d]` represent the
//! whole periodic part. With drift 0 the image is finite and every tail
//! value has an infinite fiber.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::ext_nat::ExtNat;
use crate::map::FenceMap;

/// The fiber of one value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Fiber {
    Finite(Vec<u64>),
    /// Finitely many `head` positions below `tail_start`, then every
    /// position `tail_start + r + k·period` for `r` in `residues`.
    Recurring { head: Vec<u64>, tail_start: u64, period: u64, residues: Vec<u64> },
}

impl Fiber {
    pub fn size(&self) -> ExtNat {
        match self {
            Fiber::Finite(v) => ExtNat::Finite(v.len() as u64),
            Fiber::Recurring { .. } => ExtNat::Aleph0,
        }
    }

    pub fn is_convex(&self) -> bool {
        match self {
            Fiber::Finite(v) => v.is_empty() || v[v.len() - 1] - v[0] + 1 == v.len() as u64,
            Fiber::Recurring { head, tail_start, period, residues } => {
                residues.len() as u64 == *period
                    && head.last().is_none_or(|&l| l + 1 == *tail_start)
                    && head.windows(2).all(|w| w[1] == w[0] + 1)
            }
        }
    }

    /// Positions of the fiber that are at most `h`.
    pub fn up_to(&self, h: u64) -> Vec<u64> {
        match self {
            Fiber::Finite(v) => v.iter().copied().filter(|&x| x <= h).collect(),
            Fiber::Recurring { head, tail_start, period, residues } => {
                let mut out: Vec<u64> = head.iter().copied().filter(|&x| x <= h).collect();
                let mut base = *tail_start;
                while base <= h {
                    out.extend(residues.iter().map(|r| base + r).filter(|&x| x <= h));
                    base += period;
                }
                out.sort_unstable();
                out
            }
        }
    }
}

/// An exact description of a set of values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SetReport {
    pub cardinality: ExtNat,
    /// All elements when finite; the elements below the periodic part otherwise.
    pub finite_elements: Vec<u64>,
    pub periodic_witness: Option<PeriodicWitness>,
}

/// `{r + k·period : r ∈ residues, k ≥ 0}`, with `start` the least residue.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodicWitness {
    pub start: u64,
    pub period: u64,
    pub residues: Vec<u64>,
}

impl SetReport {
    pub fn contains(&self, v: u64) -> bool {
        if self.finite_elements.binary_search(&v).is_ok() {
            return true;
        }
        match &self.periodic_witness {
            Some(w) => w.residues.iter().any(|&r| v >= r && (v - r).is_multiple_of(w.period)),
            None => false,
        }
    }

    pub fn max_finite(&self) -> Option<u64> {
        self.finite_elements.last().copied()
    }
}

/// All fibers of a map, in a finite table.
#[derive(Debug, Clone)]
pub struct FiberTable {
    map: FenceMap,
    kind: Kind,
}

#[derive(Debug, Clone)]
enum Kind {
    /// Drift 0: every image value.
    Bounded(BTreeMap<u64, Fiber>),
    /// Positive drift: values `≤ threshold + 2·drift`.
    Drifting { threshold: u64, drift: u64, fibers: BTreeMap<u64, Vec<u64>> },
}

impl FiberTable {
    pub fn of(m: &FenceMap) -> FiberTable {
        let map = m.normalize();
        let n = map.tail_start();
        let p = map.tail_period();
        let d = map.tail_drift();
        let kind = if d == 0 {
            let mut fibers: BTreeMap<u64, (Vec<u64>, Vec<u64>)> = BTreeMap::new();
            for x in 1..n {
                fibers.entry(map.eval(x)).or_default().0.push(x);
            }
            for r in 0..p {
                fibers.entry(map.eval(n + r)).or_default().1.push(r);
            }
            Kind::Bounded(
                fibers
                    .into_iter()
                    .map(|(v, (head, residues))| {
                        let f = if residues.is_empty() {
                            Fiber::Finite(head)
                        } else {
                            Fiber::Recurring { head, tail_start: n, period: p, residues }
                        };
                        (v, f)
                    })
                    .collect(),
            )
        } else {
            let threshold = map.window_max();
            let limit = threshold + 2 * d;
            let mut fibers: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
            let last = map.last_position_at_most(limit).unwrap_or(0);
            for x in 1..=last {
                let v = map.eval(x);
                if v <= limit {
                    fibers.entry(v).or_default().push(x);
                }
            }
            Kind::Drifting { threshold, drift: d, fibers }
        };
        FiberTable { map, kind }
    }

    /// The fiber of `v` (empty when `v` is not in the image).
    pub fn fiber(&self, v: u64) -> Fiber {
        match &self.kind {
            Kind::Bounded(f) => f.get(&v).cloned().unwrap_or(Fiber::Finite(vec![])),
            Kind::Drifting { threshold, drift, fibers } => {
                let (w, k) = if v > *threshold + drift {
                    let k = (v - threshold - 1) / drift;
                    (v - k * drift, k)
                } else {
                    (v, 0)
                };
                let shift = k * self.map.tail_period();
                Fiber::Finite(fibers.get(&w).map_or(vec![], |f| f.iter().map(|x| x + shift).collect()))
            }
        }
    }

    fn fiber_size(&self, v: u64) -> ExtNat {
        self.fiber(v).size()
    }

    /// Values whose fibers satisfy `pred`, as an exact set report.
    fn select(&self, pred: impl Fn(u64) -> bool) -> SetReport {
        match &self.kind {
            Kind::Bounded(f) => {
                let els: Vec<u64> = f.keys().copied().filter(|&v| pred(v)).collect();
                SetReport { cardinality: ExtNat::Finite(els.len() as u64), finite_elements: els, periodic_witness: None }
            }
            Kind::Drifting { threshold, drift, fibers } => {
                let in_image = |v: u64| fibers.contains_key(&v);
                let low: Vec<u64> = (1..=*threshold).filter(|&v| in_image(v) && pred(v)).collect();
                let reps: Vec<u64> =
                    (threshold + 1..=threshold + drift).filter(|&v| in_image(v) && pred(v)).collect();
                if reps.is_empty() {
                    SetReport { cardinality: ExtNat::Finite(low.len() as u64), finite_elements: low, periodic_witness: None }
                } else {
                    SetReport {
                        cardinality: ExtNat::Aleph0,
                        finite_elements: low,
                        periodic_witness: Some(PeriodicWitness { start: reps[0], period: *drift, residues: reps }),
                    }
                }
            }
        }
    }

    /// `R`: image values with non-convex fibers.
    pub fn r_set(&self) -> SetReport {
        self.select(|v| !self.fiber(v).is_convex())
    }

    /// `Q`: image values `v` with `|α⁻¹(v)| ≥ 3` and `|α⁻¹(v+1)| ≥ 3`.
    pub fn q_set(&self) -> SetReport {
        let three = ExtNat::Finite(3);
        self.select(|v| self.fiber_size(v) >= three && self.fiber_size(v + 1) >= three)
    }

    /// `c`: total size of the fibers with at least two points.
    pub fn c_value(&self) -> ExtNat {
        let two = ExtNat::Finite(2);
        let s = self.select(|v| self.fiber_size(v) >= two);
        if s.cardinality.is_infinite() {
            return ExtNat::Aleph0;
        }
        s.finite_elements.iter().fold(ExtNat::ZERO, |acc, &v| acc + self.fiber_size(v))
    }

    /// Size of the image.
    pub fn rank(&self) -> ExtNat {
        match &self.kind {
            Kind::Bounded(f) => ExtNat::Finite(f.len() as u64),
            Kind::Drifting { .. } => ExtNat::Aleph0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::*;

    fn gamma2() -> FenceMap {
        FenceMap::new(vec![5, 4], 3, 1, 1, vec![3]).unwrap()
    }

    #[test]
    fn c_values() {
        assert_eq!(FiberTable::of(&beta_gen(7)).c_value(), ExtNat::Finite(3));
        assert_eq!(FiberTable::of(&xi()).c_value(), ExtNat::ZERO);
        // 5,4,3,4,5,6,...: the fibers of 4 and 5 both have two points
        assert_eq!(FiberTable::of(&gamma2()).c_value(), ExtNat::Finite(4));
        assert_eq!(FiberTable::of(&alpha_gen(3)).c_value(), ExtNat::Aleph0);
        assert_eq!(FiberTable::of(&collapse_witness()).c_value(), ExtNat::Aleph0);
    }

    #[test]
    fn r_sets() {
        assert_eq!(FiberTable::of(&collapse_witness()).r_set().cardinality, ExtNat::ZERO);
        let r = FiberTable::of(&gamma2()).r_set();
        assert_eq!(r.finite_elements, vec![4, 5]);
        assert_eq!(r.cardinality, ExtNat::Finite(2));
        let zig = FenceMap::new(vec![], 1, 2, 0, vec![1, 2]).unwrap();
        let r = FiberTable::of(&zig).r_set();
        assert_eq!(r.cardinality, ExtNat::Finite(2));
        assert_eq!(r.finite_elements, vec![1, 2]);
    }

    #[test]
    fn q_sets() {
        assert_eq!(FiberTable::of(&collapse_witness()).q_set().cardinality, ExtNat::ZERO);
        let triples = FenceMap::new(vec![], 1, 6, 2, vec![1, 1, 1, 2, 2, 2]).unwrap();
        let q = FiberTable::of(&triples).q_set();
        assert_eq!(q.cardinality, ExtNat::Aleph0);
        assert!(q.contains(17));
        assert_eq!(FiberTable::of(&xi()).q_set().cardinality, ExtNat::ZERO);
    }

    #[test]
    fn fibers_shift_with_drift() {
        let t = FiberTable::of(&collapse_witness());
        assert_eq!(t.fiber(40), Fiber::Finite(vec![78, 79, 80]));
        assert_eq!(t.fiber(41), Fiber::Finite(vec![81]));
        let b = FiberTable::of(&beta_gen(4));
        assert_eq!(b.fiber(4), Fiber::Finite(vec![4, 5, 6]));
        assert_eq!(FiberTable::of(&xi()).fiber(2), Fiber::Finite(vec![]));
    }

    #[test]
    fn ranks() {
        assert_eq!(FiberTable::of(&alpha_gen(5)).rank(), ExtNat::Finite(5));
        assert_eq!(FiberTable::of(&xi()).rank(), ExtNat::Aleph0);
        assert_eq!(FiberTable::of(&alpha_gen(1)).rank(), ExtNat::Finite(1));
    }
}
