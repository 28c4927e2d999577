use std::fs;
use std::path::Path;

use anyhow::{bail, Result};
use apsum::construct::{replay_transcript, Transcript};
use apsum::numbers::{verify_certificate, ResultStore};
use apsum::witness::{verify_document, WitnessDocument};
use serde_json::json;

use crate::args::VerifyArgs;
use crate::input::usage;
use crate::number::{load_certificate, print_report};
use crate::{emit, limits, Exit};

/// A document that cannot be read as what it claims to be fails verification.
pub fn unreadable(json: bool, problem: String) -> Result<Exit> {
    let value = json!({ "valid": false, "problems": [problem] });
    emit(json, &value, || format!("INVALID\n  violation  {problem}"))?;
    Ok(Exit::Failure)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| usage(format!("reading {}: {e}", path.display())))
}

fn report_list(json: bool, what: &str, problems: &[String]) -> Result<Exit> {
    let valid = problems.is_empty();
    let value = json!({ "valid": valid, "problems": problems });
    emit(json, &value, || {
        let mut out = format!("{what}: {}\n", if valid { "valid" } else { "INVALID" });
        for p in problems {
            out += &format!("  violation  {p}\n");
        }
        out
    })?;
    Ok(if valid { Exit::Success } else { Exit::Failure })
}

pub fn run(args: VerifyArgs) -> Result<Exit> {
    let json = args.output.json;
    if let Some(path) = &args.witness {
        let doc: WitnessDocument = match serde_json::from_str(&read(path)?) {
            Ok(d) => d,
            Err(e) => return unreadable(json, format!("witness does not parse: {e}")),
        };
        let problems: Vec<String> = match verify_document(&doc) {
            Ok(r) => r.violations.iter().map(|v| format!("{v:?}")).collect(),
            Err(e) => vec![e.to_string()],
        };
        return report_list(json, "witness", &problems);
    }
    if let Some(path) = &args.certificate {
        let cert = match load_certificate(path)? {
            Ok(c) => c,
            Err(problem) => return unreadable(json, problem),
        };
        let rerun = args.rerun.then(|| limits(&args.limits));
        let report = match verify_certificate(&cert, rerun.as_ref()) {
            Ok(r) => r,
            Err(e) if e.is_resource() => return Err(e.into()),
            Err(e) => return unreadable(json, e.to_string()),
        };
        print_report(json, &cert, &report, "")?;
        return Ok(if report.is_valid() {
            Exit::Success
        } else {
            Exit::Failure
        });
    }
    if let Some(path) = &args.transcript {
        let t: Transcript = match serde_json::from_str(&read(path)?) {
            Ok(t) => t,
            Err(e) => return unreadable(json, format!("transcript does not parse: {e}")),
        };
        let problems = match replay_transcript(&t) {
            Ok(p) => p,
            Err(e) if e.is_resource() => return Err(e.into()),
            Err(e) => vec![e.to_string()],
        };
        return report_list(json, "transcript", &problems);
    }
    let Some(dir) = &args.store.store else {
        bail!(usage("--check-store needs --store or APSUM_STORE"));
    };
    let store = ResultStore::open(dir)?;
    let mut problems = Vec::new();
    let queries = match store.queries() {
        Ok(q) => q,
        Err(e) => return report_list(json, "store", &[e.to_string()]),
    };
    let mut lines = Vec::new();
    for q in &queries {
        match store.load(q) {
            Ok(certs) => {
                for cert in &certs {
                    match verify_certificate(cert, None) {
                        Ok(r) => problems.extend(r.problems.iter().map(|p| format!("{q}: {p}"))),
                        Err(e) => problems.push(format!("{q}: {e}")),
                    }
                }
                let b = store.bounds(q)?;
                lines.push(format!(
                    "{q}: {} certificates, bounds {:?}..{:?}",
                    certs.len(),
                    b.lower,
                    b.upper
                ));
            }
            Err(e) => problems.push(e.to_string()),
        }
    }
    if !json {
        for l in &lines {
            println!("{l}");
        }
    }
    report_list(json, "store", &problems)
}
