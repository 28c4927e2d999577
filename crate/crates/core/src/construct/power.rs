//! The explicit power-of-two family `P_i = {2^i, 2^i + 2^{h_i}, …}` and its
//! side claims, checked with exact integers.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::ap::{oplus_family, pow2, pow_set, power_disjoint, IndexSet, Progression};
use crate::coloring::{Color, Coloring, TableColoring};
use crate::error::{Error, Result};

/// Induced colorings look at every `B ∈ P^+([m])`.
const MAX_M: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerFamily {
    pub m: usize,
    pub q: usize,
    /// `h_i = (m + i) + (i - 1)q`.
    pub h: Vec<u64>,
    pub members: Vec<Progression>,
    /// `A_i = {i, h_i, h_i + 1, …, h_i + q - 1}`.
    pub a_sets: Vec<BTreeSet<u64>>,
}

impl PowerFamily {
    /// `⊕_{i∈B} P_i [u]` for a bitmask `B`.
    pub fn block_term(&self, mask: u64, u: usize) -> Result<BigUint> {
        let set = IndexSet::from_mask(mask)?;
        oplus_family(&self.members, &set)?.term(u)
    }
}

pub fn build_power_family(m: usize, q: usize) -> Result<PowerFamily> {
    if m == 0 || q < 2 {
        return Err(Error::precondition("the family needs m >= 1 and q >= 2"));
    }
    let (mu, qu) = (m as u64, q as u64);
    let h: Vec<u64> = (1..=mu).map(|i| (mu + i) + (i - 1) * qu).collect();
    let members = (1..=mu)
        .zip(&h)
        .map(|(i, &hi)| Progression::new(pow2(i), pow2(hi), q))
        .collect::<Result<Vec<_>>>()?;
    let a_sets = (1..=mu)
        .zip(&h)
        .map(|(i, &hi)| std::iter::once(i).chain(hi..hi + qu).collect())
        .collect();
    Ok(PowerFamily {
        m,
        q,
        h,
        members,
        a_sets,
    })
}

/// `pow(P_i[s]) ⊄ A_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContainmentFailure {
    pub i: usize,
    pub s: usize,
    pub outside: Vec<u64>,
}

/// The two routes to pairwise power-disjointness disagree on `(i, j, s)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub i: usize,
    pub j: usize,
    pub s: usize,
    pub via_sets: bool,
    pub direct: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerDisjointReport {
    pub containment: Vec<ContainmentFailure>,
    /// Failed links of `{1, …, m} < A_1 - {1} < … < A_m - {m}`, by index
    /// of the right-hand set (0 for the leading `{1, …, m}`).
    pub chain_failures: Vec<usize>,
    /// `(i, j, s)` with `P_i[s]`, `P_j[s]` sharing a power of two.
    pub direct_failures: Vec<(usize, usize, usize)>,
    pub discrepancies: Vec<Discrepancy>,
    pub pairs_checked: usize,
}

impl PowerDisjointReport {
    pub fn is_valid(&self) -> bool {
        self.containment.is_empty()
            && self.chain_failures.is_empty()
            && self.direct_failures.is_empty()
            && self.discrepancies.is_empty()
    }
}

/// Checks, independently: every `pow(P_i[s]) ⊆ A_i`; the ordering chain of
/// the sets `A_i - {i}`; and, for each `s`, pairwise power-disjointness of
/// `P_1[s], …, P_m[s]` computed from the integers themselves. Each pair is
/// also decided by the set route (containment plus disjoint `A_i`, `A_j`)
/// and any disagreement between the two routes is recorded.
pub fn verify_power_disjoint_claim(fam: &PowerFamily) -> PowerDisjointReport {
    let mut report = PowerDisjointReport::default();
    let m = fam.members.len();
    let mut contained = vec![vec![true; fam.q + 1]; m];
    for (i, p) in fam.members.iter().enumerate() {
        for s in 1..=fam.q {
            let powers = pow_set(&p.term(s).expect("s within q"));
            let outside: Vec<u64> = powers.difference(&fam.a_sets[i]).copied().collect();
            if !outside.is_empty() {
                contained[i][s] = false;
                report.containment.push(ContainmentFailure {
                    i: i + 1,
                    s,
                    outside,
                });
            }
        }
    }

    // {1..m} < A_1 - {1} < A_2 - {2} < ...
    let trimmed: Vec<BTreeSet<u64>> = fam
        .a_sets
        .iter()
        .enumerate()
        .map(|(i, a)| a.iter().copied().filter(|&x| x != i as u64 + 1).collect())
        .collect();
    let mut prev_max = Some(m as u64);
    for (i, t) in trimmed.iter().enumerate() {
        match (prev_max, t.first()) {
            (Some(pm), Some(&lo)) if pm < lo => {}
            _ => report.chain_failures.push(i + 1),
        }
        prev_max = t.last().copied();
    }

    for s in 1..=fam.q {
        let terms: Vec<BigUint> = fam
            .members
            .iter()
            .map(|p| p.term(s).expect("s within q"))
            .collect();
        for i in 0..m {
            for j in i + 1..m {
                report.pairs_checked += 1;
                let direct = power_disjoint(&terms[i], &terms[j]);
                if !direct {
                    report.direct_failures.push((i + 1, j + 1, s));
                }
                let via_sets =
                    contained[i][s] && contained[j][s] && fam.a_sets[i].is_disjoint(&fam.a_sets[j]);
                if via_sets != direct {
                    report.discrepancies.push(Discrepancy {
                        i: i + 1,
                        j: j + 1,
                        s,
                        via_sets,
                        direct,
                    });
                }
            }
        }
    }
    report
}

/// One inequality of the chain bounding `max(P_1 ⊕ … ⊕ P_m)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainStep {
    pub label: String,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxBoundReport {
    pub m: usize,
    pub q: usize,
    /// `max(P_1 ⊕ … ⊕ P_m)`.
    pub max: String,
    /// `2^{q^3}`.
    pub bound: String,
    pub steps: Vec<ChainStep>,
    pub final_holds: bool,
}

impl MaxBoundReport {
    pub fn all_hold(&self) -> bool {
        self.final_holds && self.steps.iter().all(|s| s.holds)
    }

    pub fn failed_steps(&self) -> Vec<&str> {
        self.steps
            .iter()
            .filter(|s| !s.holds)
            .map(|s| s.label.as_str())
            .collect()
    }
}

/// Evaluate `max(P_1 ⊕ … ⊕ P_m) <= 2^{q^3}` and every intermediate
/// inequality of the bounding chain, each side as an exact integer.
pub fn verify_max_bound(m: usize, q: usize) -> Result<MaxBoundReport> {
    if m > q {
        return Err(Error::precondition(format!(
            "the bound chain assumes m <= q, got m={m}, q={q}"
        )));
    }
    let fam = build_power_family(m, q)?;
    let (mu, qu) = (m as u64, q as u64);
    let big = |x: u64| BigUint::from(x);

    let all = IndexSet::range(1, m)?;
    let max = oplus_family(&fam.members, &all)?.last();
    let sum_last: BigUint = fam.members.iter().map(Progression::last).sum();
    let h_m = fam.h[m - 1];

    let s1 = big(mu) * pow2(mu) + big(mu) * big(qu - 1) * pow2(h_m);
    let s2 = big(qu) * pow2(qu) + big(qu * qu) * pow2(2 * mu + (mu - 1) * qu);
    let s3 = pow2(2 * qu) + big(qu * qu) * pow2(2 * qu + qu * qu);
    let s4 = pow2(2 * qu) + pow2(qu) * pow2(2 * qu * qu);
    let s5 = pow2(qu + 1) * pow2(2 * qu * qu);
    let bound = pow2(qu * qu * qu);

    let step = |label: &str, lhs: &BigUint, rhs: &BigUint, holds: bool| ChainStep {
        label: label.to_string(),
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
        holds,
    };
    let steps = vec![
        step("max = sum of last terms", &max, &sum_last, max == sum_last),
        step(
            "sum <= m 2^m + m(q-1) 2^{h_m}",
            &sum_last,
            &s1,
            sum_last <= s1,
        ),
        step("<= q 2^q + q^2 2^{2m+(m-1)q}", &s1, &s2, s1 <= s2),
        step("<= 2^{2q} + q^2 2^{2q+q^2}", &s2, &s3, s2 <= s3),
        step("<= 2^{2q} + 2^q 2^{2q^2}", &s3, &s4, s3 <= s4),
        step("<= 2^{q+1} 2^{2q^2}", &s4, &s5, s4 <= s5),
        step("2^{q+1} 2^{2q^2} <= 2^{q^3}", &s5, &bound, s5 <= bound),
    ];
    Ok(MaxBoundReport {
        m,
        q,
        final_holds: max <= bound,
        max: max.to_string(),
        bound: bound.to_string(),
        steps,
    })
}

/// `c*` on `[q]`: positions are identified when every block sum
/// `⊕_{i∈B} P_i [u]` gets the same base color at both.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InducedColoring {
    pub m: usize,
    pub q: usize,
    /// `vectors[u-1][mask-1]` is the base color of `⊕_{i∈B} P_i [u]`.
    pub vectors: Vec<Vec<Color>>,
    /// Class of each position, numbered by first appearance from 1.
    pub class_of: Vec<Color>,
    pub classes: Vec<Vec<usize>>,
}

impl InducedColoring {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// The class labels as a coloring of `[q]`.
    pub fn as_table(&self) -> Result<TableColoring> {
        TableColoring::new(self.class_count().max(1) as u32, self.class_of.clone())
    }
}

pub fn induced_coloring<C: Coloring + ?Sized>(
    fam: &PowerFamily,
    base: &C,
) -> Result<InducedColoring> {
    if fam.m > MAX_M {
        return Err(Error::resource(
            format!("induced coloring over 2^{} - 1 blocks", fam.m),
            (1u64 << MAX_M) - 1,
        ));
    }
    let blocks = (1u64 << fam.m) - 1;
    let mut vectors = Vec::with_capacity(fam.q);
    for u in 1..=fam.q {
        let terms: Vec<BigUint> = fam
            .members
            .iter()
            .map(|p| p.term(u).expect("u within q"))
            .collect();
        let v = (1..=blocks)
            .map(|mask| {
                let x: BigUint = (0..fam.m)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| &terms[i])
                    .sum();
                base.color_of(&x)
            })
            .collect::<Result<Vec<_>>>()?;
        vectors.push(v);
    }
    let mut seen: Vec<&Vec<Color>> = Vec::new();
    let mut class_of = Vec::with_capacity(fam.q);
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (u, v) in vectors.iter().enumerate() {
        let k = match seen.iter().position(|w| *w == v) {
            Some(k) => k,
            None => {
                seen.push(v);
                classes.push(Vec::new());
                seen.len() - 1
            }
        };
        classes[k].push(u + 1);
        class_of.push(k as Color + 1);
    }
    Ok(InducedColoring {
        m: fam.m,
        q: fam.q,
        vectors,
        class_of,
        classes,
    })
}
