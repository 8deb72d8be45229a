//! Maximal constancy blocks and maximal runs of singleton blocks.
//!
//! The blocks of an EQP map are eventually periodic: past the tail start,
//! shifting by the tail period moves every block boundary by the period and
//! every block value by the drift.

use serde::Serialize;

use crate::ext_nat::ExtNat;
use crate::map::FenceMap;

/// A finite block: `len` consecutive positions from `start`, all mapped to `value`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Block {
    pub start: u64,
    pub len: u64,
    pub value: u64,
}

/// A block as produced by iteration or lookup; `len` is `None` for an
/// infinite terminal block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BlockRef {
    pub start: u64,
    pub len: Option<u64>,
    pub value: u64,
}

impl BlockRef {
    pub fn end(&self) -> Option<u64> {
        self.len.map(|l| self.start + l - 1)
    }

    pub fn contains(&self, x: u64) -> bool {
        x >= self.start && self.len.is_none_or(|l| x < self.start + l)
    }
}

/// One block of a periodic pattern, at `offset` from the pattern start.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Shape {
    pub offset: u64,
    pub len: u64,
    pub value: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BlockTail {
    InfiniteBlock { start: u64, value: u64 },
    Periodic { start: u64, period: u64, drift: u64, shapes: Vec<Shape> },
}

/// The complete block decomposition of a map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockStream {
    pub head: Vec<Block>,
    pub tail: BlockTail,
}

/// Blocks of the sequence `m` on `[from, to]`, where `to` ends a block.
fn scan(m: &FenceMap, from: u64, to: u64) -> Vec<Block> {
    let mut out = Vec::new();
    let mut start = from;
    for x in from..=to {
        if x == to || m.eval(x) != m.eval(x + 1) {
            out.push(Block { start, len: x - start + 1, value: m.eval(start) });
            start = x + 1;
        }
    }
    out
}

impl BlockStream {
    pub fn of(m: &FenceMap) -> BlockStream {
        let m = m.normalize();
        let n = m.tail_start();
        let p = m.tail_period();
        let d = m.tail_drift();
        match (n..n + p).find(|&x| m.eval(x) != m.eval(x + 1)) {
            None => {
                // constant tail; its block reaches back to the last boundary before N
                let v = m.eval(n);
                let mut q = n;
                while q > 1 && m.eval(q - 1) == v {
                    q -= 1;
                }
                let head = if q > 1 { scan(&m, 1, q - 1) } else { vec![] };
                BlockStream { head, tail: BlockTail::InfiniteBlock { start: q, value: v } }
            }
            Some(e) => {
                let mut s = e + 1;
                let mut head = if s > 1 { scan(&m, 1, s - 1) } else { vec![] };
                let mut shapes: Vec<Shape> = scan(&m, s, s + p - 1)
                    .into_iter()
                    .map(|b| Shape { offset: b.start - s, len: b.len, value: b.value })
                    .collect();
                // pull the periodic part as far left as the pattern allows
                while let Some(last) = head.last().copied() {
                    let sh = *shapes.last().unwrap();
                    if last.len == sh.len && last.value + d == sh.value {
                        head.pop();
                        s -= last.len;
                        shapes.pop();
                        for x in shapes.iter_mut() {
                            x.offset += last.len;
                        }
                        shapes.insert(0, Shape { offset: 0, len: last.len, value: last.value });
                    } else {
                        break;
                    }
                }
                BlockStream { head, tail: BlockTail::Periodic { start: s, period: p, drift: d, shapes } }
            }
        }
    }

    /// Number of blocks, counting an infinite terminal block once.
    pub fn count(&self) -> ExtNat {
        match &self.tail {
            BlockTail::InfiniteBlock { .. } => ExtNat::Finite(self.head.len() as u64 + 1),
            BlockTail::Periodic { .. } => ExtNat::Aleph0,
        }
    }

    /// The `i`-th block, 1-based.
    pub fn nth(&self, i: u64) -> Option<BlockRef> {
        assert!(i >= 1);
        let h = self.head.len() as u64;
        if i <= h {
            let b = self.head[(i - 1) as usize];
            return Some(BlockRef { start: b.start, len: Some(b.len), value: b.value });
        }
        match &self.tail {
            BlockTail::InfiniteBlock { start, value } => {
                (i == h + 1).then_some(BlockRef { start: *start, len: None, value: *value })
            }
            BlockTail::Periodic { start, period, drift, shapes } => {
                let j = i - h - 1;
                let c = shapes.len() as u64;
                let (q, r) = (j / c, (j % c) as usize);
                let sh = shapes[r];
                Some(BlockRef {
                    start: start + q * period + sh.offset,
                    len: Some(sh.len),
                    value: sh.value + q * drift,
                })
            }
        }
    }

    /// Index (1-based) and block of the block containing `x`.
    pub fn locate(&self, x: u64) -> (u64, BlockRef) {
        assert!(x >= 1);
        let h = self.head.len() as u64;
        let tail_start = match &self.tail {
            BlockTail::InfiniteBlock { start, .. } | BlockTail::Periodic { start, .. } => *start,
        };
        if x < tail_start {
            let i = self.head.partition_point(|b| b.start <= x) as u64;
            return (i, self.nth(i).unwrap());
        }
        match &self.tail {
            BlockTail::InfiniteBlock { .. } => (h + 1, self.nth(h + 1).unwrap()),
            BlockTail::Periodic { start, period, shapes, .. } => {
                let k = x - start;
                let (q, off) = (k / period, k % period);
                let r = shapes.partition_point(|s| s.offset <= off) as u64 - 1;
                let i = h + q * shapes.len() as u64 + r + 1;
                (i, self.nth(i).unwrap())
            }
        }
    }

    /// All blocks in order; infinite for a periodic tail.
    pub fn iter(&self) -> impl Iterator<Item = BlockRef> + '_ {
        (1..).map_while(move |i| self.nth(i))
    }

    fn periodic_shapes(&self) -> &[Shape] {
        match &self.tail {
            BlockTail::Periodic { shapes, .. } => shapes,
            BlockTail::InfiniteBlock { .. } => &[],
        }
    }

    /// `|M^n|`: number of finite blocks of length `n`.
    pub fn count_blocks_of_length(&self, n: u64) -> ExtNat {
        if self.periodic_shapes().iter().any(|s| s.len == n) {
            return ExtNat::Aleph0;
        }
        ExtNat::Finite(self.head.iter().filter(|b| b.len == n).count() as u64)
    }

    /// `|M*|`: blocks with at least two points, an infinite block included.
    pub fn m_star_count(&self) -> ExtNat {
        if self.periodic_shapes().iter().any(|s| s.len >= 2) {
            return ExtNat::Aleph0;
        }
        let extra = matches!(self.tail, BlockTail::InfiniteBlock { .. }) as u64;
        ExtNat::Finite(self.head.iter().filter(|b| b.len >= 2).count() as u64 + extra)
    }

    /// Number of finite blocks longer than 3.
    pub fn big_block_count(&self) -> ExtNat {
        if self.periodic_shapes().iter().any(|s| s.len > 3) {
            return ExtNat::Aleph0;
        }
        ExtNat::Finite(self.head.iter().filter(|b| b.len > 3).count() as u64)
    }

    /// Whether every non-singleton block has length exactly `n` (an infinite
    /// block never does).
    pub fn all_star_lengths_equal(&self, n: u64) -> bool {
        if matches!(self.tail, BlockTail::InfiniteBlock { .. }) {
            return false;
        }
        self.head.iter().map(|b| b.len).chain(self.periodic_shapes().iter().map(|s| s.len))
            .all(|l| l == 1 || l == n)
    }

    /// `x ↦` index of the block containing `x`.
    pub fn index_map(&self) -> FenceMap {
        match &self.tail {
            BlockTail::InfiniteBlock { start, .. } => {
                let prefix = (1..*start).map(|x| self.locate(x).0).collect();
                FenceMap::from_parts(prefix, 0, vec![self.head.len() as u64 + 1])
            }
            BlockTail::Periodic { start, period, shapes, .. } => {
                let prefix = (1..*start).map(|x| self.locate(x).0).collect();
                let base = (*start..start + period).map(|x| self.locate(x).0).collect();
                FenceMap::from_parts(prefix, shapes.len() as u64, base)
            }
        }
        .expect("index map is valid")
    }

    /// `i ↦` value of the `i`-th block. With finitely many blocks the
    /// sequence continues `v_l + 1, v_l + 2, ...` after the last block.
    pub fn value_sequence(&self) -> FenceMap {
        let head: Vec<u64> = self.head.iter().map(|b| b.value).collect();
        match &self.tail {
            BlockTail::InfiniteBlock { value, .. } => FenceMap::from_parts(head, 1, vec![*value]),
            BlockTail::Periodic { drift, shapes, .. } => {
                FenceMap::from_parts(head, *drift, shapes.iter().map(|s| s.value).collect())
            }
        }
        .expect("value sequence is valid")
    }

    /// The non-singleton blocks.
    pub fn star_blocks(&self) -> StarBlocks {
        let head = self.head.iter().filter(|b| b.len >= 2).map(|b| (b.start, b.len)).collect();
        match &self.tail {
            BlockTail::InfiniteBlock { start, .. } => {
                StarBlocks { head, cycle: vec![], period: 0, infinite_from: Some(*start) }
            }
            BlockTail::Periodic { start, period, shapes, .. } => StarBlocks {
                head,
                cycle: shapes.iter().filter(|s| s.len >= 2).map(|s| (start + s.offset, s.len)).collect(),
                period: *period,
                infinite_from: None,
            },
        }
    }

    /// Maximal runs of singleton blocks.
    pub fn ms_stream(&self) -> RunStream {
        fn runs_of(blocks: impl Iterator<Item = (u64, u64)>) -> (Vec<(u64, u64)>, Option<u64>) {
            // returns closed runs and the start of a run still open at the end
            let mut runs = Vec::new();
            let mut open: Option<u64> = None;
            for (start, len) in blocks {
                if len == 1 {
                    open.get_or_insert(start);
                } else if let Some(s) = open.take() {
                    runs.push((s, start - s));
                }
            }
            (runs, open)
        }
        let head_blocks = self.head.iter().map(|b| (b.start, b.len));
        match &self.tail {
            BlockTail::InfiniteBlock { start, .. } => {
                let (mut runs, open) = runs_of(head_blocks);
                if let Some(s) = open {
                    runs.push((s, start - s));
                }
                RunStream { head: runs, tail: RunTail::Finite }
            }
            BlockTail::Periodic { start, period, shapes, .. } => {
                let Some(j) = shapes.iter().rposition(|s| s.len >= 2) else {
                    let (runs, open) = runs_of(head_blocks);
                    return RunStream { head: runs, tail: RunTail::Infinite { start: open.unwrap_or(*start) } };
                };
                let anchor = start + shapes[j].offset + shapes[j].len;
                let first = head_blocks.chain(shapes[..=j].iter().map(|s| (start + s.offset, s.len)));
                let (runs, open) = runs_of(first);
                debug_assert!(open.is_none());
                let c = shapes.len();
                let cycle = (1..=c).map(|t| {
                    let idx = (j + t) % c;
                    let wrap = if j + t >= c { *period } else { 0 };
                    (start + shapes[idx].offset + wrap, shapes[idx].len)
                });
                let (window, open) = runs_of(cycle);
                debug_assert!(open.is_none());
                RunStream {
                    head: runs,
                    tail: RunTail::Periodic {
                        start: anchor,
                        period: *period,
                        runs: window.into_iter().map(|(s, l)| (s - anchor, l)).collect(),
                    },
                }
            }
        }
    }
}

/// The non-singleton blocks as a list, eventually periodic in position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarBlocks {
    head: Vec<(u64, u64)>,
    cycle: Vec<(u64, u64)>,
    period: u64,
    infinite_from: Option<u64>,
}

impl StarBlocks {
    pub fn count(&self) -> ExtNat {
        if !self.cycle.is_empty() {
            ExtNat::Aleph0
        } else {
            ExtNat::Finite(self.head.len() as u64 + self.infinite_from.is_some() as u64)
        }
    }

    pub fn head_len(&self) -> u64 {
        self.head.len() as u64
    }

    pub fn cycle_len(&self) -> u64 {
        self.cycle.len() as u64
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    /// `(start, len)` of the `i`-th non-singleton block, 1-based; `len` is
    /// `None` for an infinite block.
    pub fn get(&self, i: u64) -> Option<(u64, Option<u64>)> {
        assert!(i >= 1);
        let h = self.head.len() as u64;
        if i <= h {
            let (s, l) = self.head[(i - 1) as usize];
            return Some((s, Some(l)));
        }
        if self.cycle.is_empty() {
            return (i == h + 1).then_some(()).and(self.infinite_from.map(|s| (s, None)));
        }
        let j = i - h - 1;
        let c = self.cycle.len() as u64;
        let (s, l) = self.cycle[(j % c) as usize];
        Some((s + (j / c) * self.period, Some(l)))
    }

    /// Finite-length view: start and length of block `i`, panicking on an
    /// infinite block.
    pub fn span(&self, i: u64) -> (u64, u64) {
        let (s, l) = self.get(i).expect("star block exists");
        (s, l.expect("finite star block"))
    }

    /// Largest `i` whose block starts at or before `x` (0 if none).
    pub fn floor_index(&self, x: u64) -> u64 {
        let h = self.head.len() as u64;
        let in_head = self.head.partition_point(|&(s, _)| s <= x) as u64;
        if in_head < h {
            return in_head;
        }
        if self.cycle.is_empty() {
            return match self.infinite_from {
                Some(s) if s <= x => h + 1,
                _ => h,
            };
        }
        let first = self.cycle[0].0;
        if x < first {
            return h;
        }
        let c = self.cycle.len() as u64;
        let k = x - first;
        let (q, off) = (k / self.period, k % self.period);
        let r = self.cycle.partition_point(|&(s, _)| s - first <= off) as u64;
        h + q * c + r
    }

    /// All blocks when there are finitely many.
    pub fn finite_list(&self) -> Option<Vec<(u64, Option<u64>)>> {
        if !self.cycle.is_empty() {
            return None;
        }
        let mut out: Vec<_> = self.head.iter().map(|&(s, l)| (s, Some(l))).collect();
        if let Some(s) = self.infinite_from {
            out.push((s, None));
        }
        Some(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RunTail {
    /// No runs beyond the head.
    Finite,
    /// One run that never ends.
    Infinite { start: u64 },
    /// `(offset, len)` runs repeating every `period` positions from `start`.
    Periodic { start: u64, period: u64, runs: Vec<(u64, u64)> },
}

/// Maximal runs of consecutive singleton blocks, as `(start, len)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunStream {
    pub head: Vec<(u64, u64)>,
    pub tail: RunTail,
}

impl RunStream {
    /// `|MS^n|`.
    pub fn count_runs_of_length(&self, n: u64) -> ExtNat {
        if let RunTail::Periodic { runs, .. } = &self.tail {
            if runs.iter().any(|&(_, l)| l == n) {
                return ExtNat::Aleph0;
            }
        }
        ExtNat::Finite(self.head.iter().filter(|&&(_, l)| l == n).count() as u64)
    }

    /// Least run length occurring infinitely often.
    pub fn least_recurring_length(&self) -> Option<u64> {
        match &self.tail {
            RunTail::Periodic { runs, .. } => runs.iter().map(|&(_, l)| l).min(),
            _ => None,
        }
    }

    /// Runs meeting `[1, h]`, with the final one clipped at `h`.
    pub fn runs_up_to(&self, h: u64) -> Vec<(u64, u64)> {
        let mut out: Vec<(u64, u64)> = self.head.iter().copied().filter(|&(s, _)| s <= h).collect();
        match &self.tail {
            RunTail::Finite => {}
            RunTail::Infinite { start } => {
                if *start <= h {
                    out.push((*start, h - start + 1));
                }
            }
            RunTail::Periodic { start, period, runs } => {
                let mut base = *start;
                while base <= h && !runs.is_empty() {
                    for &(o, l) in runs {
                        if base + o <= h {
                            out.push((base + o, l));
                        }
                    }
                    base += period;
                }
            }
        }
        out.into_iter().map(|(s, l)| (s, l.min(h - s + 1))).collect()
    }
}
