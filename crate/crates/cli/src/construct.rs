use anyhow::Result;
use apsum::construct::{
    check_order, merge_step, run_power_pipeline, seed_family, true_parameters, MergeOutcome,
    SeedVariant, StageFamily, Transcript,
};
use apsum::witness::HindmanCaps;
use serde_json::json;

use crate::args::{ConstructCommand, SeedArgs, Variant};
use crate::input::{self, usage};
use crate::{emit, limits, Exit};

fn seeds(args: &SeedArgs) -> Result<StageFamily> {
    let variant = match args.variant {
        Variant::Plain => SeedVariant::Plain,
        Variant::Brauer => SeedVariant::Brauer,
    };
    Ok(seed_family(variant, args.stage_len, args.size)?)
}

fn members(fam: &StageFamily) -> String {
    let mut out = String::new();
    for (i, p) in fam.members.iter().enumerate() {
        out += &format!("  P_{} = {p}\n", i + 1);
    }
    if !fam.alphas.is_empty() {
        out += &format!("  alphas {:?}\n", fam.alphas);
    }
    out
}

pub fn run(cmd: ConstructCommand) -> Result<Exit> {
    match cmd {
        ConstructCommand::Seeds { seeds: s, out } => {
            let fam = seeds(&s)?;
            let order = check_order(&fam);
            let value = json!({ "family": fam, "order": order });
            emit(out.json, &value, || {
                format!(
                    "{:?} seed family, M = {}, n = {}\n{}  block order: {} pairs checked, {}\n",
                    fam.variant,
                    fam.size(),
                    fam.stage_len,
                    members(&fam),
                    order.pairs_checked,
                    if order.is_valid() { "ok" } else { "VIOLATED" }
                )
            })?;
            Ok(if order.is_valid() {
                Exit::Success
            } else {
                Exit::Failure
            })
        }
        ConstructCommand::Merge {
            family,
            seeds: s,
            coloring,
            r,
            max_elements,
            budget,
            out,
        } => {
            let fam: StageFamily = match family {
                Some(text) => serde_json::from_str(&input::inline_or_file(&text)?)
                    .map_err(|e| usage(format!("stage family: {e}")))?,
                None => seeds(&s)?,
            };
            let oracle = input::any_coloring(&coloring)?;
            let caps = HindmanCaps {
                max_elements,
                node_budget: budget,
            };
            let outcome = merge_step(&fam, oracle.as_ref(), r, caps)?;
            emit(out.json, &outcome, || {
                match &outcome {
                MergeOutcome::Merged {
                    family,
                    blocks,
                    sums,
                    alpha,
                    report,
                } => {
                    let mut text = format!("stage {} -> {}, alpha {alpha}\n", fam.stage, family.stage);
                    for (b, v) in blocks.iter().zip(sums) {
                        text += &format!("  block {b} sum {v}\n");
                    }
                    text += &members(family);
                    text += &format!(
                        "  fragment check: {} sets, {} pairs, {}\n",
                        report.sets_checked,
                        report.pairs_checked,
                        if report.is_valid() { "ok" } else { "VIOLATED" }
                    );
                    for v in &report.violations {
                        text += &format!("  violation  {v:?}\n");
                    }
                    text
                }
                MergeOutcome::Truncated(t) => format!(
                    "truncated at stage {}: {} (M = {}, target r = {}, caps {} elements, {} nodes)\n",
                    t.stage, t.reason, t.family_size, t.target, t.max_elements, t.node_budget
                ),
            }
            })?;
            Ok(match &outcome {
                MergeOutcome::Merged { report, .. } if report.is_valid() => Exit::Success,
                MergeOutcome::Merged { .. } => Exit::Failure,
                MergeOutcome::Truncated(_) => Exit::Resource,
            })
        }
        ConstructCommand::Thm4 {
            l,
            n,
            c,
            m,
            q,
            coloring,
            limits: lim,
            out,
        } => {
            let base = input::oracle_only(&coloring)?;
            let (m, q) = match (m, q) {
                (Some(m), Some(q)) => (m, q),
                _ => true_parameters(n, l, c, &limits(&lim))?,
            };
            let t = run_power_pipeline(l, n, c, &base, m, q)?;
            emit(out.json, &t, || transcript_text(&t))?;
            Ok(if t.failure.is_none() {
                Exit::Success
            } else {
                Exit::Failure
            })
        }
    }
}

fn transcript_text(t: &Transcript) -> String {
    let p = &t.parameters;
    let mut out = format!(
        "construction l={} n={} c={} at m={} q={}\n",
        p.l, p.n, p.c, p.m, p.q
    );
    out += &format!("  h = {:?}\n", t.family.h);
    out += &format!(
        "  power-disjointness: {} ({} pairs)\n",
        if t.power_disjoint.is_valid() {
            "ok"
        } else {
            "VIOLATED"
        },
        t.power_disjoint.pairs_checked
    );
    let failed = t.max_bound.failed_steps();
    out += &format!(
        "  max bound: max = {} vs 2^(q^3); final {}, failed steps {:?}\n",
        t.max_bound.max,
        if t.max_bound.final_holds {
            "holds"
        } else {
            "FAILS"
        },
        failed
    );
    if let Some(ind) = &t.induced {
        out += &format!(
            "  induced coloring: {} classes {:?}\n",
            ind.class_count(),
            ind.class_of
        );
    }
    if let Some(pr) = &t.progression {
        out += &format!(
            "  progression a={} d={} in class {}\n",
            pr.a, pr.d, pr.class
        );
    }
    if !t.blocks.is_empty() {
        out += &format!("  blocks (masks) {:?}\n", t.blocks);
    }
    if let Some(r) = &t.result {
        out += &format!(
            "  FS system, color {} ({} cells re-derived)\n",
            r.gamma, r.cells_checked
        );
        for (i, q) in r.progressions.iter().enumerate() {
            out += &format!("    Q_{} = {q}\n", i + 1);
        }
    }
    if let Some(f) = &t.failure {
        out += &format!("  FAILED at stage {:?}: {}\n", f.stage, f.reason);
    }
    out
}
