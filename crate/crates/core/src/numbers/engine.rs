use std::ops::Range;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::certificate::{Certificate, Claim, Evidence, SearchStats};
use super::hind::{hind_integer_exhaustion, integer_lower_bound_check};
use super::{Cells, Limits, NumberQuery};
use crate::coloring::{Color, SetColoring, TableColoring};
use crate::error::{Error, Result};
use crate::witness::{
    ap_ending_at, brauer_ending_at, find_brauer, find_fs_system, find_mono_ap, find_union_blocks,
    fs_system_with_total,
};

/// Prefix depth of the fixed shard layout used by [`compute_number`].
const SHARD_DEPTH: usize = 4;
/// Number of contiguous prefix ranges in that layout.
const SHARD_COUNT: usize = 16;
/// `P^+([6])` has 63 members; subset ranks must fit the block search.
const MAX_SET_DEPTH: usize = 63;

/// How a query decides whether position `p = cells.len()` completes a witness.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Closer {
    Ap(usize),
    Brauer(usize),
    Fs { n: usize, l: usize, c: u32 },
    Blocks(usize),
}

impl Closer {
    pub(crate) fn of(q: &NumberQuery) -> Closer {
        match *q {
            NumberQuery::W { l, .. } => Closer::Ap(l),
            NumberQuery::Wb { l, .. } => Closer::Brauer(l),
            NumberQuery::F { n, l, c } => Closer::Fs { n, l, c },
            NumberQuery::Hind { n, .. } => Closer::Blocks(n),
        }
    }

    /// A witness exists in `cells` whose largest element is the last cell.
    pub(crate) fn closes(&self, cells: &[Color]) -> bool {
        match *self {
            Closer::Ap(l) => ap_ending_at(cells, l).is_some(),
            Closer::Brauer(l) => brauer_ending_at(cells, l).is_some(),
            Closer::Fs { n, l, c } => fs_system_with_total(cells, c, n, l, false),
            Closer::Blocks(n) => blocks_closing_at(cells, n),
        }
    }

    /// Independent full search on the whole prefix, where one applies.
    fn full_search(&self, cells: &[Color], c: u32) -> Result<Option<bool>> {
        let table = || TableColoring::new(c, cells.to_vec());
        Ok(Some(match *self {
            Closer::Ap(l) => find_mono_ap(&table()?, l)?.is_some(),
            Closer::Brauer(l) => find_brauer(&table()?, l)?.is_some(),
            Closer::Fs { n, l, .. } => find_fs_system(&table()?, n, l, false)?.is_some(),
            Closer::Blocks(n) => {
                let len = cells.len();
                if (len + 1).is_power_of_two() && len > 0 {
                    let m = len.trailing_ones() as usize;
                    let sc = SetColoring::new(m, c, cells.to_vec())?;
                    find_union_blocks(&sc, n)?.is_some()
                } else {
                    return Ok(None);
                }
            }
        }))
    }

    fn depth_cap(&self, limits: &Limits) -> usize {
        match self {
            Closer::Blocks(_) => limits.max_depth.min(MAX_SET_DEPTH),
            _ => limits.max_depth,
        }
    }
}

/// Ordered blocks `B_1 < … < B_n` with union exactly `k = cells.len()` and
/// all unions colored alike. Such blocks cut the bits of `k`, in increasing
/// order, into `n` consecutive nonempty runs.
fn blocks_closing_at(cells: &[Color], n: usize) -> bool {
    let k = cells.len() as u64;
    let bits: Vec<u64> = (0..64)
        .filter(|i| k >> i & 1 == 1)
        .map(|i| 1u64 << i)
        .collect();
    if bits.len() < n {
        return false;
    }
    let gamma = cells[k as usize - 1];
    let mut groups = Vec::with_capacity(n);
    cut(&bits, n, 0, cells, gamma, &mut groups)
}

fn cut(
    bits: &[u64],
    n: usize,
    start: usize,
    cells: &[Color],
    gamma: Color,
    groups: &mut Vec<u64>,
) -> bool {
    if groups.len() == n - 1 {
        groups.push(bits[start..].iter().fold(0, |a, b| a | b));
        let ok = (1u64..1 << n).all(|pick| {
            let u = (0..n)
                .filter(|j| pick >> j & 1 == 1)
                .fold(0, |a, j| a | groups[j]);
            cells[u as usize - 1] == gamma
        });
        groups.pop();
        return ok;
    }
    let remaining = n - groups.len() - 1;
    for end in start + 1..=bits.len() - remaining {
        groups.push(bits[start..end].iter().fold(0, |a, b| a | b));
        let found = cut(bits, n, end, cells, gamma, groups);
        groups.pop();
        if found {
            return true;
        }
    }
    false
}

/// Number of canonical colorings of length `depth` with `c` colors.
pub fn prefix_count(depth: usize, c: u32) -> usize {
    crate::coloring::enumerate_canonical(depth, c).count()
}

/// The outcome of exploring a range of depth-`depth` prefixes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShardResult {
    pub query: NumberQuery,
    pub depth: usize,
    /// Covered prefix index ranges, sorted and coalesced.
    pub ranges: Vec<(usize, usize)>,
    /// Lexicographically smallest among the longest avoiding colorings seen.
    pub deepest: Cells,
    pub budget_exhausted: bool,
    pub depth_capped: bool,
    pub nodes: u64,
    pub pruned: u64,
}

impl ShardResult {
    /// The identity for [`merge`].
    pub fn neutral(query: NumberQuery, depth: usize) -> Self {
        ShardResult {
            query,
            depth,
            ranges: Vec::new(),
            deepest: Vec::new(),
            budget_exhausted: false,
            depth_capped: false,
            nodes: 0,
            pruned: 0,
        }
    }

    pub fn covers(&self, total: usize) -> bool {
        total == 0 || self.ranges == [(0, total)]
    }

    /// Every covered subtree was explored to the end.
    pub fn complete(&self) -> bool {
        !self.budget_exhausted && !self.depth_capped
    }

    fn offer(&mut self, cells: &[Color]) {
        if cells.len() > self.deepest.len()
            || (cells.len() == self.deepest.len() && cells < &self.deepest[..])
        {
            self.deepest = cells.to_vec();
        }
    }
}

/// Combine two shard results of the same query and depth. Associative and
/// commutative; overlapping ranges are rejected.
pub fn merge(a: ShardResult, b: ShardResult) -> Result<ShardResult> {
    if a.query != b.query || a.depth != b.depth {
        return Err(Error::precondition(
            "shards of different searches cannot merge",
        ));
    }
    let mut ranges: Vec<(usize, usize)> = a.ranges.iter().chain(&b.ranges).copied().collect();
    ranges.sort_unstable();
    let mut coalesced: Vec<(usize, usize)> = Vec::with_capacity(ranges.len());
    for (lo, hi) in ranges {
        match coalesced.last_mut() {
            Some(last) if lo < last.1 => {
                return Err(Error::precondition(format!(
                    "overlapping shards: [{}, {}) and [{lo}, {hi})",
                    last.0, last.1
                )))
            }
            Some(last) if lo == last.1 => last.1 = hi,
            _ => coalesced.push((lo, hi)),
        }
    }
    let mut out = ShardResult {
        query: a.query,
        depth: a.depth,
        ranges: coalesced,
        deepest: a.deepest,
        budget_exhausted: a.budget_exhausted || b.budget_exhausted,
        depth_capped: a.depth_capped || b.depth_capped,
        nodes: a.nodes + b.nodes,
        pruned: a.pruned + b.pruned,
    };
    out.offer(&b.deepest);
    Ok(out)
}

struct Dfs<'a> {
    closer: Closer,
    c: u32,
    cap: usize,
    budget: u64,
    cross_check: bool,
    cells: Cells,
    maxes: Vec<Color>,
    out: &'a mut ShardResult,
}

impl Dfs<'_> {
    fn check(&self, closed: bool) -> Result<()> {
        if self.cross_check {
            if let Some(full) = self.closer.full_search(&self.cells, self.c)? {
                // a parent with no witness plus `closed` must equal the full answer
                if full != closed {
                    return Err(Error::Internal(format!(
                        "incremental check says {closed}, full search says {full} on {:?}",
                        self.cells
                    )));
                }
            }
        }
        Ok(())
    }

    fn push(&mut self, color: Color) {
        let m = self.maxes.last().copied().unwrap_or(0).max(color);
        self.cells.push(color);
        self.maxes.push(m);
    }

    fn pop(&mut self) {
        self.cells.pop();
        self.maxes.pop();
    }

    fn visit(&mut self) -> Result<()> {
        self.out.offer(&self.cells);
        if self.cells.len() >= self.cap {
            self.out.depth_capped = true;
            return Ok(());
        }
        let top = self.c.min(self.maxes.last().copied().unwrap_or(0) + 1);
        for color in 1..=top {
            if self.out.nodes >= self.budget {
                self.out.budget_exhausted = true;
                return Ok(());
            }
            self.out.nodes += 1;
            self.push(color);
            let closed = self.closer.closes(&self.cells);
            self.check(closed)?;
            if closed {
                self.out.pruned += 1;
            } else {
                self.visit()?;
            }
            self.pop();
            if self.out.budget_exhausted {
                return Ok(());
            }
        }
        Ok(())
    }
}

fn explore(
    q: &NumberQuery,
    depth: usize,
    range: Range<usize>,
    limits: &Limits,
    budget: u64,
) -> Result<ShardResult> {
    q.validate()?;
    let closer = Closer::of(q);
    let c = q.colors();
    let cap = closer.depth_cap(limits);
    if depth > cap {
        return Err(Error::precondition(format!(
            "prefix depth {depth} exceeds the depth cap {cap}"
        )));
    }
    let mut out = ShardResult::neutral(*q, depth);
    if range.start < range.end {
        out.ranges.push((range.start, range.end));
    }
    let prefixes = crate::coloring::enumerate_canonical(depth, c).skip(range.start);
    let mut seen = range.start;
    for prefix in prefixes.take(range.end.saturating_sub(range.start)) {
        seen += 1;
        let mut dfs = Dfs {
            closer,
            c,
            cap,
            budget,
            cross_check: limits.cross_check,
            cells: Vec::with_capacity(cap.min(4096)),
            maxes: Vec::new(),
            out: &mut out,
        };
        let mut alive = true;
        for &color in prefix.cells() {
            dfs.push(color);
            let closed = closer.closes(&dfs.cells);
            dfs.check(closed)?;
            if closed {
                dfs.pop();
                let avoiding = dfs.cells.clone();
                dfs.out.offer(&avoiding);
                alive = false;
                break;
            }
        }
        if alive {
            dfs.visit()?;
        }
        if out.budget_exhausted {
            break;
        }
    }
    if seen < range.end && !out.budget_exhausted {
        return Err(Error::precondition(format!(
            "prefix range [{}, {}) runs past the {seen} prefixes of depth {depth}",
            range.start, range.end
        )));
    }
    Ok(out)
}

/// Explore only the avoiding colorings extending the canonical prefixes of
/// length `depth` with enumeration index in `range`.
pub fn shard_search(
    q: &NumberQuery,
    depth: usize,
    range: Range<usize>,
    limits: &Limits,
) -> Result<ShardResult> {
    explore(q, depth, range, limits, limits.node_budget)
}

/// Run `ranges` on up to `threads` workers and merge. The result does not
/// depend on `threads`.
fn run_ranges(
    q: &NumberQuery,
    depth: usize,
    ranges: &[Range<usize>],
    limits: &Limits,
    budget: u64,
) -> Result<ShardResult> {
    let threads = limits.threads.clamp(1, ranges.len().max(1));
    let slots: Vec<Mutex<Option<Result<ShardResult>>>> =
        ranges.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let work = || loop {
        let i = next.fetch_add(1, Ordering::Relaxed);
        if i >= ranges.len() {
            break;
        }
        let r = explore(q, depth, ranges[i].clone(), limits, budget);
        *slots[i].lock().expect("slot lock") = Some(r);
    };
    if threads == 1 {
        work();
    } else {
        std::thread::scope(|s| {
            for _ in 0..threads {
                s.spawn(work);
            }
        });
    }
    let mut acc = ShardResult::neutral(*q, depth);
    for slot in slots {
        let r = slot
            .into_inner()
            .expect("slot lock")
            .expect("every range ran")?;
        acc = merge(acc, r)?;
    }
    Ok(acc)
}

/// Split `[0, total)` into `parts` contiguous ranges, dropping empty ones.
fn split(total: usize, parts: usize) -> Vec<Range<usize>> {
    let step = total.div_ceil(parts.max(1)).max(1);
    (0..total)
        .step_by(step)
        .map(|lo| lo..(lo + step).min(total))
        .collect()
}

/// All prefixes of length `depth`, spread over `limits.threads` workers.
pub fn shard_search_parallel(
    q: &NumberQuery,
    depth: usize,
    limits: &Limits,
) -> Result<ShardResult> {
    q.validate()?;
    let total = prefix_count(depth, q.colors());
    let ranges = split(total, limits.threads.max(1));
    let budget = (limits.node_budget / ranges.len().max(1) as u64).max(1);
    run_ranges(q, depth, &ranges, limits, budget)
}

/// Map the deepest avoiding length to the number it certifies.
pub(crate) fn value_for(q: &NumberQuery, deepest: usize) -> u64 {
    if q.colors_sets() {
        // least m with 2^m - 1 > deepest
        (0..64)
            .find(|&m| (1u64 << m) - 1 > deepest as u64)
            .expect("deepest below 2^63")
    } else {
        deepest as u64 + 1
    }
}

/// Build the lower-bound evidence for `value` out of a deepest avoiding prefix.
pub(crate) fn evidence_for(q: &NumberQuery, value: u64, deepest: &[Color]) -> Result<Evidence> {
    let c = q.colors();
    let mut ev = Evidence::default();
    if q.colors_sets() {
        let m = value as usize - 1;
        if m > 0 {
            let cells = deepest[..(1usize << m) - 1].to_vec();
            ev.set_coloring = Some(SetColoring::new(m, c, cells)?);
        }
    } else {
        ev.coloring = Some(TableColoring::new(
            c,
            deepest[..value as usize - 1].to_vec(),
        )?);
    }
    Ok(ev)
}

/// Compute `q` exactly, or the best lower bound the limits allow.
///
/// The search always runs over the same fixed shard layout, so the
/// certificate (apart from its timestamp) does not depend on `threads`.
/// `Hind` values are cross-checked on `FS({1, 2, …, 2^{m-1}})` at the
/// integer level, and `f(1, l, c)` is checked against `W(l, c)`.
pub fn compute_number(q: &NumberQuery, limits: &Limits) -> Result<Certificate> {
    q.validate()?;
    let closer = Closer::of(q);
    let depth = SHARD_DEPTH.min(closer.depth_cap(limits));
    let total = prefix_count(depth, q.colors());
    let ranges = split(total, SHARD_COUNT);
    let budget = (limits.node_budget / ranges.len().max(1) as u64).max(1);
    let merged = run_ranges(q, depth, &ranges, limits, budget)?;
    debug_assert!(merged.covers(total));

    let value = value_for(q, merged.deepest.len());
    let claim = if merged.complete() {
        Claim::Exact
    } else {
        Claim::LowerBound
    };
    let mut evidence = evidence_for(q, value, &merged.deepest)?;
    evidence.statement = Some(match claim {
        Claim::Exact => "exhaustive over canonical colorings".to_string(),
        _ if merged.budget_exhausted => "node budget exhausted; lower bound only".to_string(),
        _ => "depth cap reached; lower bound only".to_string(),
    });
    evidence.stats = Some(SearchStats {
        nodes: merged.nodes,
        pruned: merged.pruned,
        deepest: merged.deepest.len(),
        shards: ranges.len(),
        shard_depth: depth,
    });

    match *q {
        NumberQuery::Hind { n, c } => {
            if value > 1 {
                integer_lower_bound_check(n, evidence.set_coloring.as_ref().expect("m >= 1"))?;
                evidence.checks.push(format!(
                    "integer level: no block witness on FS({{1, ..., 2^{}}})",
                    value - 2
                ));
            }
            if claim == Claim::Exact {
                let budget = limits.node_budget;
                if hind_integer_exhaustion(n, c, value as usize, budget)?.is_some() {
                    return Err(Error::Internal(format!(
                        "integer-level search found an avoiding coloring at m = {value}"
                    )));
                }
                evidence.checks.push(format!(
                    "integer level: every coloring of FS(A), |A| = {value}, has a witness"
                ));
            }
        }
        NumberQuery::F { n: 1, l, c } => {
            let w = compute_number(&NumberQuery::W { l, c }, limits)?;
            if claim == Claim::Exact && w.claim == Claim::Exact && w.value != value {
                return Err(Error::Internal(format!(
                    "f(1,{l},{c}) = {value} but W({l},{c}) = {}",
                    w.value
                )));
            }
            if claim == Claim::Exact && w.claim == Claim::Exact {
                evidence.checks.push(format!("f(1,{l},{c}) = W({l},{c})"));
            }
        }
        _ => {}
    }
    Ok(Certificate::new(*q, claim, value, evidence))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn limits() -> Limits {
        Limits {
            cross_check: true,
            ..Limits::default()
        }
    }

    #[test]
    fn closing_blocks_match_the_set_search() {
        // on complete set colorings, "some rank closes" is the block search
        for m in 1..=3 {
            for sc in crate::coloring::set_coloring_enumerate(m, 2).unwrap() {
                for n in 1..=3 {
                    let cells = sc.cells();
                    let any = (1..=cells.len()).any(|k| blocks_closing_at(&cells[..k], n));
                    assert_eq!(any, find_union_blocks(&sc, n).unwrap().is_some());
                }
            }
        }
    }

    #[test]
    fn small_values() {
        let w = compute_number(&NumberQuery::W { l: 3, c: 2 }, &limits()).unwrap();
        assert_eq!((w.claim, w.value), (Claim::Exact, 9));
        let wb = compute_number(&NumberQuery::Wb { l: 3, c: 1 }, &limits()).unwrap();
        // d = 1 and 1, 2, 3 in one color
        assert_eq!(wb.value, 3);
        let w31 = compute_number(&NumberQuery::W { l: 4, c: 1 }, &limits()).unwrap();
        assert_eq!(w31.value, 4);
        for c in 1..=3 {
            let h = compute_number(&NumberQuery::Hind { n: 1, c }, &limits()).unwrap();
            assert_eq!((h.claim, h.value), (Claim::Exact, 1));
        }
        for n in 1..=4 {
            let h = compute_number(&NumberQuery::Hind { n, c: 1 }, &limits()).unwrap();
            assert_eq!((h.claim, h.value), (Claim::Exact, n as u64));
        }
    }

    #[test]
    fn budget_exhaustion_gives_lower_bound() {
        let tight = Limits {
            node_budget: 20,
            ..limits()
        };
        let cert = compute_number(&NumberQuery::W { l: 3, c: 2 }, &tight).unwrap();
        assert_eq!(cert.claim, Claim::LowerBound);
        assert!(cert.value <= 9);
        let capped = Limits {
            max_depth: 6,
            ..limits()
        };
        let cert = compute_number(&NumberQuery::W { l: 3, c: 2 }, &capped).unwrap();
        assert_eq!((cert.claim, cert.value), (Claim::LowerBound, 7));
    }

    #[test]
    fn shards_merge_to_the_unsharded_answer() {
        let q = NumberQuery::W { l: 3, c: 2 };
        let total = prefix_count(3, 2);
        assert_eq!(total, 4);
        let parts: Vec<_> = (0..4)
            .map(|i| shard_search(&q, 3, i..i + 1, &limits()).unwrap())
            .collect();
        let forward = parts
            .iter()
            .cloned()
            .try_fold(ShardResult::neutral(q, 3), merge)
            .unwrap();
        let backward = parts
            .iter()
            .rev()
            .cloned()
            .try_fold(ShardResult::neutral(q, 3), merge)
            .unwrap();
        let whole = shard_search(&q, 3, 0..4, &limits()).unwrap();
        assert_eq!(forward, backward);
        assert_eq!(forward.deepest, whole.deepest);
        assert!(forward.covers(total) && forward.complete());
        assert_eq!(value_for(&q, forward.deepest.len()), 9);
        assert_eq!(
            TableColoring::new(2, forward.deepest.clone())
                .unwrap()
                .to_text()
                .unwrap(),
            "11221122"
        );

        // depth 1 has one canonical root
        let a = shard_search(&q, 1, 0..1, &limits()).unwrap();
        let b = shard_search(&q, 1, 1..1, &limits()).unwrap();
        assert_eq!(merge(a.clone(), b).unwrap(), a);
        assert_eq!(merge(a.clone(), ShardResult::neutral(q, 1)).unwrap(), a);
        assert!(merge(a.clone(), a).is_err());
        assert!(shard_search(&q, 3, 0..5, &limits()).is_err());
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let q = NumberQuery::W { l: 3, c: 3 };
        let capped = Limits {
            max_depth: 12,
            cross_check: false,
            ..Limits::default()
        };
        let one = compute_number(&q, &capped).unwrap();
        let four = compute_number(
            &q,
            &Limits {
                threads: 4,
                ..capped
            },
        )
        .unwrap();
        assert_eq!(one.evidence, four.evidence);
        assert_eq!(one.value, four.value);
    }
}
