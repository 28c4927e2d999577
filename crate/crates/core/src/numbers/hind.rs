//! The integer-level route for `Hind`: colorings of the actual sums
//! `FS(A)`, `A = {1, 2, …, 2^{m-1}}`, instead of subsets.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::ap::{finite_sums, nonempty_subsets, IndexSet, ValueSet};
use crate::coloring::{Color, SetColoring, TableColoring};
use crate::error::{Error, Result};
use crate::witness::{find_hindman_blocks, HindmanCaps};

const MAX_M: usize = 6;

/// `{2^0, 2^1, …, 2^{m-1}}`, the pairwise power-disjoint set of size `m`.
pub fn power_values(m: usize) -> Vec<BigUint> {
    (0..m as u64).map(crate::ap::pow2).collect()
}

/// The evidence coloring, read as a coloring of the integers of `FS(A)`,
/// must admit no Hindman blocks over `A`.
pub(crate) fn integer_lower_bound_check(n: usize, sc: &SetColoring) -> Result<()> {
    let values = power_values(sc.m());
    let table = sc.as_binary_table();
    if let Some(w) = find_hindman_blocks(&values, &table, n, HindmanCaps::default())? {
        return Err(Error::Internal(format!(
            "set-level evidence on [{}] has integer-level blocks {:?}",
            sc.m(),
            w.blocks
        )));
    }
    Ok(())
}

/// Every ordered `B_1 < … < B_n` of nonempty subsets of `[m]`.
fn block_tuples(m: usize, n: usize) -> Vec<Vec<IndexSet>> {
    fn go(m: usize, n: usize, after: usize, acc: &mut Vec<IndexSet>, out: &mut Vec<Vec<IndexSet>>) {
        if acc.len() == n {
            out.push(acc.clone());
            return;
        }
        for b in nonempty_subsets(m).filter(|b| b.min_element() > after) {
            let top = b.max_element();
            acc.push(b);
            go(m, n, top, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(m, n, 0, &mut Vec::new(), &mut out);
    out
}

/// Search for a `c`-coloring of `FS(A)`, `|A| = m`, with no blocks
/// `B_1 < … < B_n` whose sums `b_j` have monochromatic `FS({b_j})`.
///
/// The sorted values of `FS(A)` are colored one at a time; a tuple is
/// checked once its largest finite sum is colored.
pub fn hind_integer_exhaustion(
    n: usize,
    c: u32,
    m: usize,
    budget: u64,
) -> Result<Option<TableColoring>> {
    if m == 0 || m > MAX_M {
        return Err(Error::resource(
            format!("integer-level search over {m} powers"),
            MAX_M as u64,
        ));
    }
    let a = power_values(m);
    let fs = finite_sums(&ValueSet::new(a.iter().cloned())?)?;
    let order: Vec<u64> = fs.iter().map(|v| v.to_u64().expect("below 2^63")).collect();
    let position: HashMap<u64, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();

    // tuples keyed by the position of their largest finite sum
    let mut closing: Vec<Vec<Vec<usize>>> = vec![Vec::new(); order.len()];
    for tuple in block_tuples(m, n) {
        let b: Vec<u64> = tuple
            .iter()
            .map(|blk| blk.iter().map(|i| a[i - 1].to_u64().expect("small")).sum())
            .collect();
        let sums: Vec<usize> = nonempty_subsets(n)
            .map(|pick| position[&pick.iter().map(|j| b[j - 1]).sum::<u64>()])
            .collect();
        let top = *sums.iter().max().expect("nonempty");
        closing[top].push(sums);
    }

    struct State<'a> {
        c: u32,
        closing: &'a [Vec<Vec<usize>>],
        colors: Vec<Color>,
        nodes: u64,
        budget: u64,
    }
    impl State<'_> {
        fn dfs(&mut self) -> Result<bool> {
            let i = self.colors.len();
            if i == self.closing.len() {
                return Ok(true);
            }
            let top = self
                .c
                .min(self.colors.iter().copied().max().unwrap_or(0) + 1);
            for color in 1..=top {
                self.nodes += 1;
                if self.nodes > self.budget {
                    return Err(Error::resource("integer-level search nodes", self.budget));
                }
                self.colors.push(color);
                let hit = self.closing[i]
                    .iter()
                    .any(|sums| sums.iter().all(|&s| self.colors[s] == color));
                if !hit && self.dfs()? {
                    return Ok(true);
                }
                self.colors.pop();
            }
            Ok(false)
        }
    }

    let mut st = State {
        c,
        closing: &closing,
        colors: Vec::with_capacity(order.len()),
        nodes: 0,
        budget,
    };
    if st.dfs()? {
        Ok(Some(TableColoring::new(c, st.colors)?))
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_tuple_counts() {
        // ordered pairs B_1 < B_2 in [3]: 1 + 2 + ... counted by hand
        assert_eq!(block_tuples(2, 2).len(), 1);
        assert_eq!(block_tuples(3, 2).len(), 5);
        assert_eq!(block_tuples(3, 1).len(), 7);
        assert_eq!(block_tuples(3, 3).len(), 1);
    }

    #[test]
    fn trivial_cases() {
        assert!(hind_integer_exhaustion(1, 3, 1, 1_000).unwrap().is_none());
        assert!(hind_integer_exhaustion(3, 1, 3, 1_000).unwrap().is_none());
        let avoid = hind_integer_exhaustion(3, 1, 2, 1_000).unwrap().unwrap();
        assert_eq!(avoid.len(), 3);
        assert!(hind_integer_exhaustion(1, 1, 7, 1).is_err());
    }
}
