use num_bigint::BigUint;
use num_traits::Zero;

use super::{BlockWitness, HindmanBlocks, Report, Violation};
use crate::ap::{nonempty_subsets, nu, IndexSet};
use crate::coloring::{Color, Coloring, SetColoring};
use crate::error::{Error, Result};

/// Truncation levels for [`find_hindman_blocks`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HindmanCaps {
    /// Largest usable index `M`; longer value sequences are rejected.
    pub max_elements: usize,
    /// Search nodes before giving up with a resource error.
    pub node_budget: u64,
}

impl Default for HindmanCaps {
    fn default() -> Self {
        HindmanCaps {
            max_elements: 16,
            node_budget: 5_000_000,
        }
    }
}

fn top_bit(mask: u64) -> usize {
    64 - mask.leading_zeros() as usize
}

fn masks_to_sets(masks: &[u64]) -> Vec<IndexSet> {
    masks
        .iter()
        .map(|&b| IndexSet::from_mask(b).expect("nonzero block"))
        .collect()
}

struct UnionSearch<'a> {
    sc: &'a SetColoring,
    n: usize,
    gamma: Color,
    chosen: Vec<u64>,
    unions: Vec<u64>,
}

impl UnionSearch<'_> {
    fn color(&self, mask: u64) -> Color {
        self.sc.cells()[mask as usize - 1]
    }

    fn dfs(&mut self) -> bool {
        let k = self.chosen.len();
        if k == self.n {
            return true;
        }
        let m = self.sc.m();
        let lo = self.chosen.last().map_or(0, |&b| top_bit(b));
        let need_after = self.n - k - 1;
        if lo + need_after >= m {
            return false;
        }
        for x in 1u64..(1u64 << (m - lo)) {
            let block = x << lo;
            if top_bit(block) + need_after > m {
                break;
            }
            if k == 0 {
                self.gamma = self.color(block);
            } else if self.color(block) != self.gamma {
                continue;
            }
            if self
                .unions
                .iter()
                .any(|&u| self.color(u | block) != self.gamma)
            {
                continue;
            }
            let old = self.unions.len();
            self.unions.push(block);
            for i in 0..old {
                let u = self.unions[i] | block;
                self.unions.push(u);
            }
            self.chosen.push(block);
            if self.dfs() {
                return true;
            }
            self.chosen.pop();
            self.unions.truncate(old);
        }
        false
    }
}

/// First `B_1 < … < B_n` in `P^+([m])` (lexicographic in the block bitmasks)
/// with every nonempty union colored alike.
pub fn find_union_blocks(sc: &SetColoring, n: usize) -> Result<Option<BlockWitness>> {
    if n == 0 {
        return Err(Error::precondition("n must be >= 1"));
    }
    let mut s = UnionSearch {
        sc,
        n,
        gamma: 0,
        chosen: Vec::with_capacity(n),
        unions: Vec::new(),
    };
    Ok(s.dfs().then(|| BlockWitness {
        blocks: masks_to_sets(&s.chosen),
        gamma: s.gamma,
    }))
}

pub fn verify_union_blocks(sc: &SetColoring, witness: &BlockWitness) -> Report {
    let mut report = Report::default();
    if witness.blocks.is_empty() {
        report.push(Violation::Shape {
            detail: "no blocks".into(),
        });
        return report;
    }
    for i in 1..witness.blocks.len() {
        if !witness.blocks[i - 1].before(&witness.blocks[i]) {
            report.push(Violation::BlockOrder { index: i });
        }
    }
    match nu(&witness.blocks) {
        Ok(unions) => {
            for union in unions {
                let color = sc.color_of_set(&union).ok();
                if color != Some(witness.gamma) {
                    report.push(Violation::UnionColor { union, color });
                }
            }
        }
        Err(e) => report.push(Violation::Shape {
            detail: e.to_string(),
        }),
    }
    report
}

struct HindmanSearch<'a, C: ?Sized> {
    values: &'a [BigUint],
    coloring: &'a C,
    r: usize,
    gamma: Color,
    chosen: Vec<u64>,
    block_sums: Vec<BigUint>,
    /// every sum over a nonempty subset of `block_sums`
    fs: Vec<BigUint>,
    nodes: u64,
    budget: u64,
}

impl<C: Coloring + ?Sized> HindmanSearch<'_, C> {
    fn dfs(&mut self) -> Result<bool> {
        let k = self.chosen.len();
        if k == self.r {
            return Ok(true);
        }
        let m = self.values.len();
        let lo = self.chosen.last().map_or(0, |&b| top_bit(b));
        let need_after = self.r - k - 1;
        if lo + need_after >= m {
            return Ok(false);
        }
        for x in 1u64..(1u64 << (m - lo)) {
            let block = x << lo;
            if top_bit(block) + need_after > m {
                break;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::resource("hindman block search nodes", self.budget));
            }
            let b: BigUint = (0..m)
                .filter(|i| block >> i & 1 == 1)
                .map(|i| &self.values[i])
                .sum();
            let color = self.coloring.color_of(&b)?;
            if k == 0 {
                self.gamma = color;
            } else if color != self.gamma {
                continue;
            }
            let mut fresh = Vec::with_capacity(self.fs.len());
            let mut ok = true;
            for s in &self.fs {
                let t = s + &b;
                if self.coloring.color_of(&t)? != self.gamma {
                    ok = false;
                    break;
                }
                fresh.push(t);
            }
            if !ok {
                continue;
            }
            let old = self.fs.len();
            self.fs.push(b.clone());
            self.fs.extend(fresh);
            self.block_sums.push(b);
            self.chosen.push(block);
            if self.dfs()? {
                return Ok(true);
            }
            self.chosen.pop();
            self.block_sums.pop();
            self.fs.truncate(old);
        }
        Ok(false)
    }
}

/// Finite Hindman extraction on `a_1 < … < a_M`: blocks `B_1 < … < B_r` of
/// indices such that `FS({b_1, …, b_r})` is monochromatic, where
/// `b_j = Σ_{i∈B_j} a_i`. Blocks are tried in bitmask order, which is order
/// of largest element first.
pub fn find_hindman_blocks<C: Coloring + ?Sized>(
    values: &[BigUint],
    coloring: &C,
    r: usize,
    caps: HindmanCaps,
) -> Result<Option<HindmanBlocks>> {
    if r == 0 {
        return Err(Error::precondition("r must be >= 1"));
    }
    if values.len() > caps.max_elements || values.len() >= 64 {
        return Err(Error::resource(
            format!("hindman value sequence of length {}", values.len()),
            caps.max_elements as u64,
        ));
    }
    if values.first().is_some_and(|v| v.is_zero()) || values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::precondition(
            "values must be positive and strictly increasing",
        ));
    }
    let mut s = HindmanSearch {
        values,
        coloring,
        r,
        gamma: 0,
        chosen: Vec::new(),
        block_sums: Vec::new(),
        fs: Vec::new(),
        nodes: 0,
        budget: caps.node_budget,
    };
    Ok(s.dfs()?.then(|| HindmanBlocks {
        blocks: masks_to_sets(&s.chosen),
        sums: s.block_sums,
        gamma: s.gamma,
    }))
}

pub fn verify_hindman_blocks<C: Coloring + ?Sized>(
    values: &[BigUint],
    coloring: &C,
    witness: &HindmanBlocks,
) -> Report {
    let mut report = Report::default();
    let r = witness.blocks.len();
    if r == 0 || r != witness.sums.len() || r > 24 {
        report.push(Violation::Shape {
            detail: format!("{r} blocks with {} sums", witness.sums.len()),
        });
        return report;
    }
    for i in 1..r {
        if !witness.blocks[i - 1].before(&witness.blocks[i]) {
            report.push(Violation::BlockOrder { index: i });
        }
    }
    for (j, block) in witness.blocks.iter().enumerate() {
        let recomputed: Option<BigUint> = block.iter().map(|i| values.get(i - 1).cloned()).sum();
        if recomputed.as_ref() != Some(&witness.sums[j]) {
            report.push(Violation::Shape {
                detail: format!("b_{} does not equal the sum over B_{}", j + 1, j + 1),
            });
        }
    }
    for pick in nonempty_subsets(r) {
        let total: BigUint = pick.iter().map(|j| &witness.sums[j - 1]).sum();
        let color = coloring.color_of(&total).ok();
        if color != Some(witness.gamma) {
            let union = pick
                .iter()
                .skip(1)
                .fold(witness.blocks[pick.min_element() - 1].clone(), |acc, j| {
                    acc.union(&witness.blocks[j - 1])
                });
            report.push(Violation::UnionColor { union, color });
        }
    }
    report
}
