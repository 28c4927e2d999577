use num_bigint::BigUint;

use super::ap::check_length;
use super::{FsSystemWitness, Report, Violation};
use crate::ap::{nonempty_subsets, oplus_family, IndexSet, Progression};
use crate::coloring::{Color, Coloring, TableColoring};
use crate::error::{Error, Result};

/// Backtracking state for FS systems over a table coloring.
///
/// Progressions are `(first, diff)` pairs in `usize`; every value examined
/// is at most `p`, which bounds the arithmetic.
struct FsSearch<'a> {
    cells: &'a [Color],
    n: usize,
    l: usize,
    brauer: bool,
    gamma: Color,
    exact_total: Option<usize>,
    chosen: Vec<(usize, usize)>,
    /// `(first, diff)` of every sum over a nonempty subset of `chosen`;
    /// the last entry is the sum of all of them.
    sums: Vec<(usize, usize)>,
}

impl FsSearch<'_> {
    #[inline]
    fn good(&self, first: usize, diff: usize) -> bool {
        let p = self.cells.len();
        let last = first + (self.l - 1) * diff;
        if last > p {
            return false;
        }
        if self.brauer && self.cells[diff - 1] != self.gamma {
            return false;
        }
        (0..self.l).all(|k| self.cells[first + k * diff - 1] == self.gamma)
    }

    fn total_last(&self) -> usize {
        self.sums.last().map_or(0, |&(f, d)| f + (self.l - 1) * d)
    }

    fn dfs(&mut self) -> bool {
        let k = self.chosen.len();
        if k == self.n {
            return true;
        }
        let p = self
            .exact_total
            .unwrap_or(self.cells.len())
            .min(self.cells.len());
        let step = self.l - 1;
        let (prev_first, prev_last) = self
            .chosen
            .last()
            .map_or((0, 0), |&(f, d)| (f, f + step * d));
        let base = self.total_last();
        let after = self.n - k - 1;
        let is_final = after == 0;
        for first in prev_first + 1..=p {
            let d_min = if first > prev_last {
                1
            } else {
                (prev_last - first) / step + 1
            };
            let fits = |last: usize| base + last + after * (last + 1) <= p;
            if first > prev_last && !fits(first + step) {
                break;
            }
            let mut d = d_min;
            loop {
                let last = first + step * d;
                if !fits(last) {
                    break;
                }
                if is_final {
                    if let Some(t) = self.exact_total {
                        if base + last < t {
                            d += 1;
                            continue;
                        }
                        if base + last > t {
                            break;
                        }
                    }
                }
                if self.try_push(first, d) {
                    if self.dfs() {
                        return true;
                    }
                    self.pop();
                }
                d += 1;
            }
        }
        false
    }

    fn try_push(&mut self, first: usize, diff: usize) -> bool {
        if !self.good(first, diff) {
            return false;
        }
        let old = self.sums.len();
        for i in 0..old {
            let (f, d) = self.sums[i];
            if !self.good(f + first, d + diff) {
                return false;
            }
        }
        self.sums.push((first, diff));
        for i in 0..old {
            let (f, d) = self.sums[i];
            self.sums.push((f + first, d + diff));
        }
        self.chosen.push((first, diff));
        true
    }

    fn pop(&mut self) {
        self.chosen.pop();
        let keep = (1usize << self.chosen.len()) - 1;
        self.sums.truncate(keep);
    }
}

fn search(
    cells: &[Color],
    colors: u32,
    n: usize,
    l: usize,
    brauer: bool,
    exact_total: Option<usize>,
) -> Option<(Color, Vec<(usize, usize)>)> {
    for gamma in 1..=colors {
        let mut s = FsSearch {
            cells,
            n,
            l,
            brauer,
            gamma,
            exact_total,
            chosen: Vec::with_capacity(n),
            sums: Vec::with_capacity((1 << n.min(20)) - 1),
        };
        if s.dfs() {
            return Some((gamma, s.chosen));
        }
    }
    None
}

/// A witness whose total `max(Q_1 ⊕ … ⊕ Q_n)` equals `cells.len()`; the
/// incremental step of the avoiding-coloring search.
pub(crate) fn fs_system_with_total(
    cells: &[Color],
    colors: u32,
    n: usize,
    l: usize,
    brauer: bool,
) -> bool {
    search(cells, colors, n, l, brauer, Some(cells.len())).is_some()
}

fn into_witness(
    gamma: Color,
    chosen: Vec<(usize, usize)>,
    l: usize,
    brauer: bool,
) -> Result<FsSystemWitness> {
    let progressions = chosen
        .into_iter()
        .map(|(f, d)| Progression::new(f as u64, d as u64, l))
        .collect::<Result<Vec<_>>>()?;
    Ok(FsSystemWitness {
        progressions,
        gamma,
        brauer,
    })
}

/// First FS system of `n` progressions of length `l` inside `[p]`, ordered
/// by `(γ, Q_1, …, Q_n)` with each `Q` compared as `(first, diff)`.
pub fn find_fs_system(
    coloring: &TableColoring,
    n: usize,
    l: usize,
    brauer: bool,
) -> Result<Option<FsSystemWitness>> {
    check_length(l)?;
    if n == 0 {
        return Err(Error::precondition("n must be >= 1"));
    }
    if n > 20 {
        return Err(Error::resource("FS system size n", 20));
    }
    search(coloring.cells(), coloring.colors(), n, l, brauer, None)
        .map(|(g, chosen)| into_witness(g, chosen, l, brauer))
        .transpose()
}

/// Re-checks every condition of an FS system from scratch: the `≺` chain,
/// `max(Q_1 ⊕ … ⊕ Q_n) <= p` when the coloring has a finite domain, and the
/// color of every term (and difference, for Brauer systems) of every sum
/// over a nonempty `C ⊆ [n]`.
pub fn verify_fs_system<C: Coloring + ?Sized>(coloring: &C, witness: &FsSystemWitness) -> Report {
    let mut report = Report::default();
    let qs = &witness.progressions;
    if qs.is_empty() {
        report.push(Violation::Shape {
            detail: "no progressions".into(),
        });
        return report;
    }
    if qs.len() > 24 {
        report.push(Violation::Shape {
            detail: format!("{} progressions exceeds the verification cap 24", qs.len()),
        });
        return report;
    }
    let l = qs[0].len();
    if let Some(i) = qs.iter().position(|q| q.len() != l) {
        report.push(Violation::Shape {
            detail: format!("Q_{} has length {}, expected {l}", i + 1, qs[i].len()),
        });
        return report;
    }
    for i in 1..qs.len() {
        if !qs[i - 1].precedes_termwise(&qs[i]).unwrap_or(false) {
            report.push(Violation::NotPreceding { index: i });
        }
    }
    let n = qs.len();
    if let Some(p) = coloring.domain() {
        let all = IndexSet::range(1, n).expect("n >= 1");
        let total = oplus_family(qs, &all).expect("lengths checked").last();
        if total > BigUint::from(p) {
            report.push(Violation::MaxExceeded {
                max: total.to_string(),
                bound: p,
            });
        }
    }
    for c in nonempty_subsets(n) {
        let sum = oplus_family(qs, &c).expect("lengths checked");
        for (k, value) in sum.terms().enumerate() {
            let color = coloring.color_of(&value).ok();
            if color != Some(witness.gamma) {
                report.push(Violation::TermColor {
                    index_set: c.clone(),
                    s: k + 1,
                    value: value.to_string(),
                    color,
                });
            }
        }
        if witness.brauer {
            let color = coloring.color_of(sum.diff()).ok();
            if color != Some(witness.gamma) {
                report.push(Violation::DiffColor {
                    index_set: c.clone(),
                    value: sum.diff().to_string(),
                    color,
                });
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::enumerate_canonical;
    use crate::witness::{find_mono_ap, verify_ap, ApWitness};

    fn ap(a: u64, d: u64, l: usize) -> Progression {
        Progression::new(a, d, l).unwrap()
    }

    #[test]
    fn single_progression_reduces_to_mono_ap() {
        let ones = TableColoring::constant(9, 1, 2).unwrap();
        let w = find_fs_system(&ones, 1, 3, false).unwrap().unwrap();
        assert_eq!(w.progressions, vec![ap(1, 1, 3)]);
        for p in 1..=10 {
            for t in enumerate_canonical(p, 2) {
                let fs = find_fs_system(&t, 1, 3, false).unwrap();
                let mono = find_mono_ap(&t, 3).unwrap();
                // existence agrees; the orders differ (γ first here, (a, d) there)
                assert_eq!(fs.is_some(), mono.is_some(), "{t}");
                if let Some(w) = fs {
                    assert!(verify_fs_system(&t, &w).is_valid());
                    assert!(verify_ap(
                        &t,
                        &ApWitness {
                            progression: w.progressions[0].clone(),
                            gamma: w.gamma
                        }
                    )
                    .is_valid());
                }
            }
        }
    }

    #[test]
    fn two_progressions_on_constant_coloring() {
        let ones = TableColoring::constant(30, 1, 2).unwrap();
        let w = find_fs_system(&ones, 2, 3, false).unwrap().unwrap();
        // lexicographically first pair: {1,2,3} and {2,3,4}, sum {3,5,7}
        assert_eq!(w.progressions, vec![ap(1, 1, 3), ap(2, 1, 3)]);
        assert_eq!(w.gamma, 1);
        assert!(verify_fs_system(&ones, &w).is_valid());
    }

    #[test]
    fn no_system_without_mono_ap() {
        let t = TableColoring::parse("12211221", None).unwrap();
        assert!(find_fs_system(&t, 2, 3, false).unwrap().is_none());
        assert!(find_fs_system(&t, 1, 3, true).unwrap().is_none());
    }

    #[test]
    fn brauer_flag_adds_difference_constraint() {
        // 2 is colored 2, so no Brauer system may use an odd-free difference 2
        let t = TableColoring::parse("121111111111", None).unwrap();
        let plain = find_fs_system(&t, 1, 3, false).unwrap().unwrap();
        assert_eq!(plain.progressions, vec![ap(1, 2, 3)]);
        let brauer = find_fs_system(&t, 1, 3, true).unwrap().unwrap();
        assert!(verify_fs_system(&t, &brauer).is_valid());
        assert_ne!(brauer.progressions[0].diff(), &BigUint::from(2u32));
        assert_eq!(brauer.progressions, vec![ap(1, 3, 3)]);
    }

    #[test]
    fn tampering_is_reported() {
        let ones = TableColoring::constant(30, 1, 2).unwrap();
        let w = find_fs_system(&ones, 2, 3, false).unwrap().unwrap();

        let mut shifted = w.clone();
        shifted.gamma += 1;
        let r = verify_fs_system(&ones, &shifted);
        assert_eq!(r.violations.len(), 3 * 3, "every (C, s) cell fails");

        // color 1 exactly on the terms of {1,3,5}, {3,5,7} and their sum
        // {4,8,12}; moving Q_2 to start at 4 hits 6, which is colored 2
        let cells: Vec<Color> = (1..=30)
            .map(|x| {
                if [1, 3, 4, 5, 7, 8, 12].contains(&x) {
                    1
                } else {
                    2
                }
            })
            .collect();
        let tweaked = TableColoring::new(2, cells).unwrap();
        let w = FsSystemWitness {
            progressions: vec![ap(1, 2, 3), ap(3, 2, 3)],
            gamma: 1,
            brauer: false,
        };
        assert!(verify_fs_system(&tweaked, &w).is_valid());
        let mut bumped = w.clone();
        bumped.progressions[1] = ap(4, 2, 3);
        let r = verify_fs_system(&tweaked, &bumped);
        let singles = r
            .violations
            .iter()
            .filter(|v| matches!(v, Violation::TermColor { index_set, .. } if index_set.as_slice() == [2]))
            .count();
        assert_eq!(singles, 1);
        assert!(r.violations.len() > singles);
    }

    #[test]
    fn verifier_checks_order_and_bound() {
        let ones = TableColoring::constant(10, 1, 1).unwrap();
        let w = FsSystemWitness {
            progressions: vec![ap(2, 1, 3), ap(1, 1, 3)],
            gamma: 1,
            brauer: false,
        };
        let r = verify_fs_system(&ones, &w);
        assert!(r.violations.contains(&Violation::NotPreceding { index: 1 }));
        let w = FsSystemWitness {
            progressions: vec![ap(1, 2, 3), ap(2, 2, 3)],
            gamma: 1,
            brauer: false,
        };
        let r = verify_fs_system(&ones, &w);
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, Violation::MaxExceeded { bound: 10, .. })));
    }

    #[test]
    fn exact_total_hits_only_that_total() {
        let ones = TableColoring::constant(12, 1, 1).unwrap();
        // n = 2, l = 3: smallest total last term is 3 + 4 = 7
        let cells = ones.cells();
        assert!(!fs_system_with_total(&cells[..6], 1, 2, 3, false));
        assert!(fs_system_with_total(&cells[..7], 1, 2, 3, false));
        assert!(fs_system_with_total(&cells[..12], 1, 2, 3, false));
    }
}
