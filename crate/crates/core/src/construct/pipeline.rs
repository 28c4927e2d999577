//! The end-to-end construction of an FS system from the power family, with
//! a replayable transcript.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::power::{
    build_power_family, induced_coloring, verify_max_bound, verify_power_disjoint_claim,
    InducedColoring, MaxBoundReport, PowerDisjointReport, PowerFamily,
};
use crate::ap::{nonempty_subsets, oplus_family, IndexSet, Progression};
use crate::coloring::{Color, Coloring, OracleColoring, SetColoring};
use crate::error::{Error, Result};
use crate::numbers::{compute_number, Claim, Limits, NumberQuery};
use crate::witness::{find_mono_ap, find_union_blocks, verify_fs_system, FsSystemWitness};

pub const TRANSCRIPT_SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PipelineStage {
    PowerDisjointness,
    MaxBound,
    InducedColoring,
    /// A monochromatic `l`-AP in `c*`.
    Progression,
    /// Union-monochromatic blocks for `π`.
    Blocks,
    Final,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageFailure {
    pub stage: PipelineStage,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineParameters {
    pub l: usize,
    pub n: usize,
    pub c: u32,
    pub m: usize,
    pub q: usize,
    pub base: OracleColoring,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyRecord {
    pub h: Vec<u64>,
    pub members: Vec<Progression>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgressionRecord {
    pub a: usize,
    pub d: usize,
    /// The `c*` class shared by `a, a + d, …`.
    pub class: Color,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinalRecord {
    pub progressions: Vec<Progression>,
    pub gamma: Color,
    /// `(C, s)` cells re-derived through `π(D)`.
    pub cells_checked: usize,
}

/// Stage-by-stage record of one pipeline run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub schema: u32,
    pub parameters: PipelineParameters,
    pub family: FamilyRecord,
    pub power_disjoint: PowerDisjointReport,
    pub max_bound: MaxBoundReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub induced: Option<InducedColoring>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub progression: Option<ProgressionRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pi: Option<SetColoring>,
    /// Block bitmasks `B_1 < … < B_n`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub blocks: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<FinalRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<StageFailure>,
}

impl Transcript {
    pub fn witness(&self) -> Option<FsSystemWitness> {
        self.result.as_ref().map(|r| FsSystemWitness {
            progressions: r.progressions.clone(),
            gamma: r.gamma,
            brauer: false,
        })
    }

    fn fail(mut self, stage: PipelineStage, reason: impl Into<String>) -> Self {
        self.failure = Some(StageFailure {
            stage,
            reason: reason.into(),
        });
        self
    }
}

/// `π(B)`: the base color of `⊕_{i∈B} P_i [a + kd]`, which must not depend
/// on `k`.
fn block_coloring<C: Coloring + ?Sized>(
    fam: &PowerFamily,
    base: &C,
    c: u32,
    a: usize,
    d: usize,
    l: usize,
) -> Result<SetColoring> {
    let mut cells = Vec::with_capacity((1usize << fam.m) - 1);
    for mask in 1..(1u64 << fam.m) {
        let mut color = None;
        for k in 0..l {
            let x = fam.block_term(mask, a + k * d)?;
            let got = base.color_of(&x)?;
            match color {
                None => color = Some(got),
                Some(g) if g == got => {}
                Some(g) => {
                    return Err(Error::Internal(format!(
                        "pi is not well defined at block mask {mask}: colors {g} and {got}"
                    )))
                }
            }
        }
        cells.push(color.expect("l >= 1"));
    }
    SetColoring::new(fam.m, c, cells)
}

/// Run the construction at the given `(m, q)` in place of the true
/// parameters. Each stage that cannot proceed ends the run with a report
/// naming it; only inconsistencies inside the construction are errors.
pub fn run_power_pipeline(
    l: usize,
    n: usize,
    c: u32,
    base: &OracleColoring,
    m: usize,
    q: usize,
) -> Result<Transcript> {
    crate::witness::check_length(l)?;
    if n == 0 {
        return Err(Error::precondition("n must be >= 1"));
    }
    if base.colors() > c {
        return Err(Error::precondition(format!(
            "base coloring uses {} colors, c = {c}",
            base.colors()
        )));
    }
    let fam = build_power_family(m, q)?;
    let max_bound = verify_max_bound(m, q)?;
    let mut t = Transcript {
        schema: TRANSCRIPT_SCHEMA,
        parameters: PipelineParameters {
            l,
            n,
            c,
            m,
            q,
            base: base.clone(),
        },
        family: FamilyRecord {
            h: fam.h.clone(),
            members: fam.members.clone(),
        },
        power_disjoint: verify_power_disjoint_claim(&fam),
        max_bound,
        induced: None,
        progression: None,
        pi: None,
        blocks: Vec::new(),
        result: None,
        failure: None,
    };
    if !t.power_disjoint.is_valid() {
        return Ok(t.fail(
            PipelineStage::PowerDisjointness,
            "members are not pairwise power-disjoint",
        ));
    }
    if !t.max_bound.final_holds {
        return Ok(t.fail(
            PipelineStage::MaxBound,
            "max(P_1 + ... + P_m) exceeds 2^{q^3}",
        ));
    }

    let induced = match induced_coloring(&fam, base) {
        Ok(ic) => ic,
        Err(e) if e.is_resource() => {
            return Ok(t.fail(PipelineStage::InducedColoring, e.to_string()))
        }
        Err(e) => return Err(e),
    };
    let table = induced.as_table()?;
    t.induced = Some(induced);
    let Some(ap) = find_mono_ap(&table, l)? else {
        return Ok(t.fail(PipelineStage::Progression, "no monochromatic AP in c*"));
    };
    let small = |x: &BigUint| x.to_string().parse::<usize>().expect("position within q");
    let (a, d) = (small(ap.progression.first()), small(ap.progression.diff()));
    t.progression = Some(ProgressionRecord {
        a,
        d,
        class: ap.gamma,
    });

    let pi = block_coloring(&fam, base, c, a, d, l)?;
    t.pi = Some(pi.clone());
    let Some(bw) = find_union_blocks(&pi, n)? else {
        return Ok(t.fail(
            PipelineStage::Blocks,
            format!("no {n} union-monochromatic blocks for pi on [{m}]"),
        ));
    };
    t.blocks = bw
        .blocks
        .iter()
        .map(|b| b.to_mask().expect("m < 64"))
        .collect();
    let gamma = bw.gamma;

    let qs = bw
        .blocks
        .iter()
        .map(|b| oplus_family(&fam.members, b)?.subsample(a, d, l))
        .collect::<Result<Vec<_>>>()?;

    // every (C, s): c(⊕_{i∈C} Q_i [s]) = π(D) = γ, D = ∪_{i∈C} B_i
    let mut problems = Vec::new();
    let mut cells = 0;
    for set in nonempty_subsets(n) {
        let d_set = set
            .iter()
            .skip(1)
            .fold(bw.blocks[set.min_element() - 1].clone(), |acc, i| {
                acc.union(&bw.blocks[i - 1])
            });
        let pi_d = pi.color_of_set(&d_set)?;
        if pi_d != gamma {
            problems.push(format!("pi({d_set}) = {pi_d}, expected {gamma}"));
        }
        let sum_q = oplus_family(&qs, &set)?;
        for s in 1..=l {
            cells += 1;
            let x = sum_q.term(s)?;
            let via_p: BigUint = d_set
                .iter()
                .map(|i| fam.members[i - 1].term(a + (s - 1) * d))
                .sum::<Result<_>>()?;
            if x != via_p {
                problems.push(format!(
                    "sum over {set} at s={s} differs from the sum over D={d_set}"
                ));
            }
            let got = base.color_of(&x)?;
            if got != gamma {
                problems.push(format!(
                    "c(sum over {set} at s={s}) = {got}, expected {gamma}"
                ));
            }
        }
    }
    let witness = FsSystemWitness {
        progressions: qs.clone(),
        gamma,
        brauer: false,
    };
    for v in verify_fs_system(base, &witness).violations {
        problems.push(format!("{v:?}"));
    }
    let total_q = oplus_family(&qs, &IndexSet::range(1, n)?)?.last();
    let total_p = oplus_family(&fam.members, &IndexSet::range(1, m)?)?.last();
    if total_q > total_p {
        problems.push(format!(
            "max(Q_1 + ... + Q_n) = {total_q} exceeds max(P_1 + ... + P_m) = {total_p}"
        ));
    }
    if !problems.is_empty() {
        return Ok(t.fail(PipelineStage::Final, problems.join("; ")));
    }
    t.result = Some(FinalRecord {
        progressions: qs,
        gamma,
        cells_checked: cells,
    });
    Ok(t)
}

/// Re-run a transcript's parameters and compare every recorded stage; a
/// recorded witness is also re-verified on its own. Returns the mismatches.
pub fn replay_transcript(t: &Transcript) -> Result<Vec<String>> {
    if t.schema != TRANSCRIPT_SCHEMA {
        return Err(Error::parse(format!(
            "unsupported transcript schema {}",
            t.schema
        )));
    }
    let p = &t.parameters;
    let fresh = run_power_pipeline(p.l, p.n, p.c, &p.base, p.m, p.q)?;
    let mut out = Vec::new();
    let mut cmp = |name: &str, same: bool| {
        if !same {
            out.push(format!("{name} differs from a fresh run"));
        }
    };
    cmp("family", fresh.family == t.family);
    cmp("power_disjoint", fresh.power_disjoint == t.power_disjoint);
    cmp("max_bound", fresh.max_bound == t.max_bound);
    cmp("induced", fresh.induced == t.induced);
    cmp("progression", fresh.progression == t.progression);
    cmp("pi", fresh.pi == t.pi);
    cmp("blocks", fresh.blocks == t.blocks);
    cmp("result", fresh.result == t.result);
    cmp("failure", fresh.failure == t.failure);
    if let Some(w) = t.witness() {
        for v in verify_fs_system(&p.base, &w).violations {
            out.push(format!("recorded witness: {v:?}"));
        }
    }
    Ok(out)
}

/// `m = Hind(n, c)` and `q = W(l, c^{2^m})`, when both are computable
/// exactly under `limits`.
pub fn true_parameters(n: usize, l: usize, c: u32, limits: &Limits) -> Result<(usize, usize)> {
    let exact = |q: NumberQuery| -> Result<u64> {
        let cert = compute_number(&q, limits)?;
        if cert.claim != Claim::Exact {
            return Err(Error::resource(
                format!("{q} within the node budget"),
                limits.node_budget,
            ));
        }
        Ok(cert.value)
    };
    let m = exact(NumberQuery::Hind { n, c })? as usize;
    let colors = u32::try_from(m)
        .ok()
        .and_then(|m| 1u32.checked_shl(m))
        .and_then(|e| c.checked_pow(e))
        .ok_or_else(|| Error::resource("c^{2^m} colors", u32::MAX as u64))?;
    let q = exact(NumberQuery::W { l, c: colors })? as usize;
    Ok((m, q))
}
