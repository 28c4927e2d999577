//! The stage induction on finite truncations: seed families, Hindman
//! merges, and extraction of the final progressions.

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::ap::{nonempty_subsets, oplus_family, IndexSet, Progression};
use crate::coloring::{Color, Coloring, TableColoring};
use crate::error::{Error, Result};
use crate::witness::{
    find_brauer, find_hindman_blocks, find_mono_ap, verify_fs_system, FsSystemWitness, HindmanCaps,
    Report,
};

/// Exhaustive checks enumerate pairs of subsets of `[M]`.
const MAX_FAMILY: usize = 12;

/// Which statement the family serves: plain progressions, or progressions
/// whose difference must be colored too.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeedVariant {
    /// Seeds `{a_i, a_i + 1, …}` with `a_{m+1} > a_1 + … + a_m + m·n`.
    Plain,
    /// Seeds `{a_i, 2a_i, …}` with `a_{m+1} > n·(a_1 + … + a_m)`.
    Brauer,
}

/// Stage `k` of the induction: `P^k_1, …, P^k_M` with recorded colors
/// `α^k_1, …, α^k_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageFamily {
    pub variant: SeedVariant,
    pub stage: usize,
    /// Length `n` of every member; the number of stages to run.
    pub stage_len: usize,
    pub members: Vec<Progression>,
    pub alphas: Vec<Color>,
}

impl StageFamily {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    fn sum_over(&self, set: &IndexSet) -> Progression {
        oplus_family(&self.members, set).expect("index set inside the family")
    }
}

/// One failed condition on a stage family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "condition", rename_all = "kebab-case")]
pub enum StageViolation {
    /// `c(⊕_{i∈C} P_i[s]) ≠ α_s`.
    Color {
        set: IndexSet,
        s: usize,
        expected: Color,
        got: Color,
    },
    /// `⊕_{C_1} P ⊀ ⊕_{C_2} P` for some `C_1 < C_2`.
    Order { lower: IndexSet, upper: IndexSet },
    /// `add(⊕_C P) ≠ ⊕_C P [1]`.
    DiffIdentity { set: IndexSet },
    /// `⊕_{i∈C} P^{k+1}_i ≠ ⊕_{i∈D} P^k_i` with `D = ∪_{i∈C} B_i`.
    Union { set: IndexSet },
    /// The color oracle failed on a value.
    Oracle { detail: String },
}

/// Result of an exhaustive fragment check.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageReport {
    pub sets_checked: usize,
    pub pairs_checked: usize,
    pub violations: Vec<StageViolation>,
}

impl StageReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

fn check_size(m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::precondition("a family needs at least one member"));
    }
    if m > MAX_FAMILY {
        return Err(Error::resource(
            format!("exhaustive checks over a family of {m}"),
            MAX_FAMILY as u64,
        ));
    }
    Ok(())
}

/// The greedy seed family of size `size`: `a_1 = 1` and each next `a` is one
/// more than the growth bound.
pub fn seed_family(variant: SeedVariant, stage_len: usize, size: usize) -> Result<StageFamily> {
    if stage_len < 2 {
        return Err(Error::precondition("seed progressions need length n >= 2"));
    }
    check_size(size)?;
    let mut a: Vec<BigUint> = Vec::with_capacity(size);
    let mut total = BigUint::zero();
    for m in 0..size {
        let next = if m == 0 {
            BigUint::from(1u32)
        } else {
            match variant {
                SeedVariant::Plain => &total + BigUint::from(m * stage_len) + 1u32,
                SeedVariant::Brauer => &total * BigUint::from(stage_len) + 1u32,
            }
        };
        total += &next;
        a.push(next);
    }
    let members = a
        .into_iter()
        .map(|ai| {
            let diff = match variant {
                SeedVariant::Plain => BigUint::from(1u32),
                SeedVariant::Brauer => ai.clone(),
            };
            Progression::new(ai, diff, stage_len)
        })
        .collect::<Result<Vec<_>>>()?;
    let fam = StageFamily {
        variant,
        stage: 0,
        stage_len,
        members,
        alphas: Vec::new(),
    };
    let order = check_order(&fam);
    if !order.is_valid() {
        return Err(Error::Internal(format!(
            "seed family breaks the block order: {:?}",
            order.violations
        )));
    }
    Ok(fam)
}

/// `⊕_{C_1} P ≺ ⊕_{C_2} P` for every `C_1 < C_2` in `[M]`.
pub fn check_order(fam: &StageFamily) -> StageReport {
    let mut report = StageReport::default();
    let sets: Vec<(IndexSet, Progression)> = nonempty_subsets(fam.size())
        .map(|s| {
            let p = fam.sum_over(&s);
            (s, p)
        })
        .collect();
    for (lower, p) in &sets {
        for (upper, q) in &sets {
            if !lower.before(upper) {
                continue;
            }
            report.pairs_checked += 1;
            // compare term by term, not through the endpoint shortcut
            if !p.precedes_termwise(q).unwrap_or(false) {
                report.violations.push(StageViolation::Order {
                    lower: lower.clone(),
                    upper: upper.clone(),
                });
            }
        }
    }
    report
}

/// Conditions (a) and (b), plus the difference identity for Brauer seeds,
/// over every nonempty `C ⊆ [M]`.
pub fn verify_stage<C: Coloring + ?Sized>(fam: &StageFamily, oracle: &C) -> StageReport {
    let mut report = check_order(fam);
    for set in nonempty_subsets(fam.size()) {
        report.sets_checked += 1;
        let p = fam.sum_over(&set);
        for (s, &alpha) in fam.alphas.iter().enumerate() {
            let value = p.term(s + 1).expect("s below the stage length");
            match oracle.color_of(&value) {
                Ok(got) if got == alpha => {}
                Ok(got) => report.violations.push(StageViolation::Color {
                    set: set.clone(),
                    s: s + 1,
                    expected: alpha,
                    got,
                }),
                Err(e) => report.violations.push(StageViolation::Oracle {
                    detail: e.to_string(),
                }),
            }
        }
        if fam.variant == SeedVariant::Brauer && p.diff() != p.first() {
            report.violations.push(StageViolation::DiffIdentity { set });
        }
    }
    report
}

/// Why a merge could not produce the next stage.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    pub stage: usize,
    pub family_size: usize,
    pub target: usize,
    pub max_elements: usize,
    pub node_budget: u64,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum MergeOutcome {
    Merged {
        family: StageFamily,
        blocks: Vec<IndexSet>,
        /// `b_j = Σ_{i∈B_j} P^k_i[k+1]`, as decimal strings.
        sums: Vec<String>,
        alpha: Color,
        report: StageReport,
    },
    Truncated(Truncation),
}

/// One induction step: Hindman blocks over the `(k+1)`-th coordinates,
/// merged members `P^{k+1}_j = ⊕_{i∈B_j} P^k_i`, and an exhaustive re-check
/// of the new fragment.
pub fn merge_step<C: Coloring + ?Sized>(
    fam: &StageFamily,
    oracle: &C,
    r: usize,
    caps: HindmanCaps,
) -> Result<MergeOutcome> {
    if fam.stage >= fam.stage_len {
        return Err(Error::precondition(format!(
            "stage {} is already the last of {}",
            fam.stage, fam.stage_len
        )));
    }
    check_size(r)?;
    let k = fam.stage;
    let values: Vec<BigUint> = fam
        .members
        .iter()
        .map(|p| p.term(k + 1))
        .collect::<Result<_>>()?;
    let truncated = |reason: String| {
        MergeOutcome::Truncated(Truncation {
            stage: k,
            family_size: fam.size(),
            target: r,
            max_elements: caps.max_elements,
            node_budget: caps.node_budget,
            reason,
        })
    };
    let found = match find_hindman_blocks(&values, oracle, r, caps) {
        Ok(found) => found,
        Err(e) if e.is_resource() => return Ok(truncated(e.to_string())),
        Err(e) => return Err(e),
    };
    let Some(hb) = found else {
        return Ok(truncated(format!(
            "no {r} blocks with monochromatic finite sums among {} values",
            values.len()
        )));
    };
    let members = hb
        .blocks
        .iter()
        .map(|b| fam.sum_over(b))
        .collect::<Vec<_>>();
    let mut alphas = fam.alphas.clone();
    alphas.push(hb.gamma);
    let next = StageFamily {
        variant: fam.variant,
        stage: k + 1,
        stage_len: fam.stage_len,
        members,
        alphas,
    };
    let mut report = verify_stage(&next, oracle);
    for set in nonempty_subsets(r) {
        let d = set
            .iter()
            .skip(1)
            .fold(hb.blocks[set.min_element() - 1].clone(), |acc, i| {
                acc.union(&hb.blocks[i - 1])
            });
        if next.sum_over(&set) != fam.sum_over(&d) {
            report.violations.push(StageViolation::Union { set });
        }
    }
    Ok(MergeOutcome::Merged {
        family: next,
        blocks: hb.blocks,
        sums: hb.sums.iter().map(ToString::to_string).collect(),
        alpha: hb.gamma,
        report,
    })
}

/// `Q_i = {P_i[a], P_i[a+d], …, P_i[a+(l-1)d]}` for every member.
///
/// The recorded colors must agree along the progression (and at `d`, for
/// Brauer families); the first disagreement is reported by index.
pub fn extract_q(fam: &StageFamily, a: usize, d: usize, l: usize) -> Result<Vec<Progression>> {
    if a == 0 || d == 0 || a + (l.max(1) - 1) * d > fam.stage_len {
        return Err(Error::precondition(format!(
            "positions a={a}, d={d}, l={l} do not fit a stage length of {}",
            fam.stage_len
        )));
    }
    let alpha = |i: usize| {
        fam.alphas.get(i - 1).copied().ok_or_else(|| {
            Error::precondition(format!(
                "alpha_{i} is not recorded yet (stage {})",
                fam.stage
            ))
        })
    };
    let gamma = alpha(a)?;
    for s in 1..l {
        let i = a + s * d;
        if alpha(i)? != gamma {
            return Err(Error::precondition(format!(
                "alpha_{i} differs from alpha_{a}"
            )));
        }
    }
    if fam.variant == SeedVariant::Brauer && alpha(d)? != gamma {
        return Err(Error::precondition(format!(
            "alpha_{d} (the difference) differs from alpha_{a}"
        )));
    }
    fam.members.iter().map(|p| p.subsample(a, d, l)).collect()
}

/// The numeric laws behind extraction: `add(Q_i) = d·add(P_i)` and, for
/// Brauer families, `add(⊕_C Q) = ⊕_C P [d]` for every `C`.
pub fn check_extraction(fam: &StageFamily, qs: &[Progression], d: usize) -> Vec<String> {
    let mut problems = Vec::new();
    for (i, (p, q)) in fam.members.iter().zip(qs).enumerate() {
        if *q.diff() != p.diff() * BigUint::from(d) {
            problems.push(format!("add(Q_{}) != d * add(P_{})", i + 1, i + 1));
        }
    }
    if fam.variant == SeedVariant::Brauer {
        for set in nonempty_subsets(qs.len()) {
            let lhs = oplus_family(qs, &set).expect("in range").diff().clone();
            let rhs = fam
                .sum_over(&set)
                .term(d)
                .expect("d within the stage length");
            if lhs != rhs {
                problems.push(format!(
                    "add(sum of Q over {set}) != sum of P over {set} at position {d}"
                ));
            }
        }
    }
    problems
}

/// A full run of the stage induction followed by extraction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRun {
    pub stages: Vec<StageFamily>,
    pub blocks: Vec<Vec<IndexSet>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<Truncation>,
    /// `(a, d, γ)` found in the recorded colors.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub progression: Option<(usize, usize, Color)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub progressions: Vec<Progression>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub problems: Vec<String>,
}

impl StageRun {
    /// The run produced progressions and every check passed.
    pub fn succeeded(&self) -> bool {
        !self.progressions.is_empty() && self.problems.is_empty()
    }
}

/// Seeds, `stage_len` merges with family sizes from `sizes`, then an
/// `l`-term progression in the recorded colors and extraction.
pub fn run_stage_pipeline<C: Coloring + ?Sized>(
    variant: SeedVariant,
    oracle: &C,
    l: usize,
    stage_len: usize,
    seed_size: usize,
    sizes: &[usize],
    caps: HindmanCaps,
) -> Result<StageRun> {
    crate::witness::check_length(l)?;
    if sizes.len() != stage_len {
        return Err(Error::precondition(format!(
            "need {stage_len} merge sizes, got {}",
            sizes.len()
        )));
    }
    let mut fam = seed_family(variant, stage_len, seed_size)?;
    let mut run = StageRun {
        stages: vec![fam.clone()],
        blocks: Vec::new(),
        truncation: None,
        progression: None,
        progressions: Vec::new(),
        problems: Vec::new(),
    };
    for &r in sizes {
        match merge_step(&fam, oracle, r, caps)? {
            MergeOutcome::Merged {
                family,
                blocks,
                report,
                ..
            } => {
                for v in &report.violations {
                    run.problems.push(format!("stage {}: {v:?}", family.stage));
                }
                run.blocks.push(blocks);
                run.stages.push(family.clone());
                fam = family;
            }
            MergeOutcome::Truncated(t) => {
                run.truncation = Some(t);
                return Ok(run);
            }
        }
    }
    let alphas = TableColoring::new(oracle.colors(), fam.alphas.clone())?;
    let found = match variant {
        SeedVariant::Plain => find_mono_ap(&alphas, l)?.map(|w| (w.progression, w.gamma)),
        SeedVariant::Brauer => find_brauer(&alphas, l)?.map(|w| (w.progression, w.gamma)),
    };
    let Some((p, gamma)) = found else {
        run.problems
            .push("no suitable progression in the recorded colors".into());
        return Ok(run);
    };
    let small = |x: &BigUint| {
        x.to_string()
            .parse::<usize>()
            .expect("position within the stage length")
    };
    let (a, d) = (small(p.first()), small(p.diff()));
    let qs = extract_q(&fam, a, d, l)?;
    run.problems.extend(check_extraction(&fam, &qs, d));
    let witness = FsSystemWitness {
        progressions: qs.clone(),
        gamma,
        brauer: variant == SeedVariant::Brauer,
    };
    let report: Report = verify_fs_system(oracle, &witness);
    for v in report.violations {
        run.problems.push(format!("final system: {v:?}"));
    }
    run.progression = Some((a, d, gamma));
    run.progressions = qs;
    Ok(run)
}
