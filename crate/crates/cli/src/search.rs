use anyhow::{bail, Result};
use apsum::coloring::TableColoring;
use apsum::witness::{
    find_brauer, find_fs_system, find_hindman_blocks, find_mono_ap, find_union_blocks,
    ColoringSubject, HindmanCaps, WitnessDocument,
};

use crate::args::{ColoringArgs, SearchCommand};
use crate::input::{self, usage};
use crate::{emit, Exit};

fn none(json: bool, what: String) -> Result<Exit> {
    if json {
        println!(
            "{}",
            serde_json::json!({ "schema": 1, "witness": null, "reason": what })
        );
    } else {
        println!("{what}");
    }
    Ok(Exit::Failure)
}

fn found(json: bool, doc: &WitnessDocument, human: String) -> Result<Exit> {
    emit(json, doc, || human)?;
    Ok(Exit::Success)
}

fn domain(t: &TableColoring) -> String {
    format!("[{}]", t.len())
}

pub fn run(cmd: SearchCommand) -> Result<Exit> {
    match cmd {
        SearchCommand::Ap { coloring, l, out } => {
            let (t, subject) = input::subject(&coloring)?;
            match find_mono_ap(&t, l)? {
                Some(w) => {
                    let human = format!("progression {} color {}", w.progression, w.gamma);
                    found(out.json, &WitnessDocument::from_ap(subject, &w), human)
                }
                None => none(
                    out.json,
                    format!("no monochromatic {l}-term progression in {}", domain(&t)),
                ),
            }
        }
        SearchCommand::Brauer { coloring, l, out } => {
            let (t, subject) = input::subject(&coloring)?;
            match find_brauer(&t, l)? {
                Some(w) => {
                    let human = format!(
                        "progression {} color {} (difference included)",
                        w.progression, w.gamma
                    );
                    found(out.json, &WitnessDocument::from_brauer(subject, &w), human)
                }
                None => none(
                    out.json,
                    format!("no {l}-term Brauer configuration in {}", domain(&t)),
                ),
            }
        }
        SearchCommand::Fs {
            coloring,
            n,
            l,
            brauer,
            out,
        } => {
            let (t, subject) = input::subject(&coloring)?;
            match find_fs_system(&t, n, l, brauer)? {
                Some(w) => {
                    let mut human = format!("FS system, color {}\n", w.gamma);
                    for (i, q) in w.progressions.iter().enumerate() {
                        human += &format!("  Q_{} = {q}\n", i + 1);
                    }
                    found(out.json, &WitnessDocument::from_fs(subject, &w), human)
                }
                None => none(
                    out.json,
                    format!(
                        "no FS system of {n} {l}-term progressions in {}",
                        domain(&t)
                    ),
                ),
            }
        }
        SearchCommand::Blocks {
            set_coloring,
            values,
            coloring,
            n,
            max_elements,
            budget,
            out,
        } => match set_coloring {
            Some(text) => {
                let sc = input::set_coloring(&text)?;
                match find_union_blocks(&sc, n)? {
                    Some(w) => {
                        let blocks: Vec<String> =
                            w.blocks.iter().map(ToString::to_string).collect();
                        let human = format!("blocks {} color {}", blocks.join(" < "), w.gamma);
                        found(out.json, &WitnessDocument::from_blocks(sc, &w), human)
                    }
                    None => none(
                        out.json,
                        format!(
                            "no {n} ordered blocks with monochromatic unions in [{}]",
                            sc.m()
                        ),
                    ),
                }
            }
            None => hindman(
                &values,
                &coloring,
                n,
                HindmanCaps {
                    max_elements,
                    node_budget: budget,
                },
                out.json,
            ),
        },
    }
}

fn hindman(
    raw: &[String],
    coloring: &ColoringArgs,
    n: usize,
    caps: HindmanCaps,
    json: bool,
) -> Result<Exit> {
    if raw.is_empty() {
        bail!(usage(
            "blocks needs --set-coloring, or --values with a coloring"
        ));
    }
    let values = input::values(raw)?;
    let subject = match (&coloring.coloring, &coloring.oracle) {
        (Some(text), _) => ColoringSubject::Table(input::table(text, coloring.colors)?),
        (None, Some(_)) => ColoringSubject::Oracle(input::oracle_only(coloring)?),
        (None, None) => bail!(usage("give --coloring or --oracle")),
    };
    let w = match &subject {
        ColoringSubject::Table(t) => find_hindman_blocks(&values, t, n, caps)?,
        ColoringSubject::Oracle(o) => find_hindman_blocks(&values, o, n, caps)?,
        ColoringSubject::Set(_) => unreachable!(),
    };
    match w {
        Some(w) => {
            let mut human = format!("Hindman blocks, color {}\n", w.gamma);
            for (b, s) in w.blocks.iter().zip(&w.sums) {
                human += &format!("  {b} sum {s}\n");
            }
            found(
                json,
                &WitnessDocument::from_hindman(subject, &values, &w),
                human,
            )
        }
        None => none(
            json,
            format!("no {n} blocks with monochromatic finite sums"),
        ),
    }
}
