use std::fs;

use anyhow::{Context, Result};
use apsum::numbers::{
    compute_number, verify_certificate, Certificate, CertificateReport, Claim, NumberQuery,
    ResultStore,
};

use crate::args::{CertifyArgs, Kind, NumberArgs, StoreArgs};
use crate::input::usage;
use crate::{emit, limits, Exit};

fn query(args: &NumberArgs) -> Result<NumberQuery> {
    let need = |v: Option<usize>, flag: &str| {
        v.ok_or_else(|| usage(format!("--kind {:?} needs --{flag}", args.kind)))
    };
    let c = args.c;
    let q = match args.kind {
        Kind::W => NumberQuery::W {
            l: need(args.l, "l")?,
            c,
        },
        Kind::Wb => NumberQuery::Wb {
            l: need(args.l, "l")?,
            c,
        },
        Kind::Hind => NumberQuery::Hind {
            n: need(args.n, "n")?,
            c,
        },
        Kind::F => NumberQuery::F {
            n: need(args.n, "n")?,
            l: need(args.l, "l")?,
            c,
        },
    };
    q.validate().map_err(|e| usage(e.to_string()))?;
    Ok(q)
}

fn open_store(args: &StoreArgs) -> Result<Option<ResultStore>> {
    args.store
        .as_ref()
        .map(ResultStore::open)
        .transpose()
        .map_err(Into::into)
}

pub fn describe(cert: &Certificate) -> String {
    let claim = match cert.claim {
        Claim::Exact => "exact",
        Claim::LowerBound => "lower bound",
        Claim::UpperBound => "upper bound",
    };
    let mut out = format!("{} = {} ({claim})\n", cert.query, cert.value);
    let ev = &cert.evidence;
    if let Some(t) = &ev.coloring {
        out += &format!("  evidence   {t}\n");
    }
    if let Some(sc) = &ev.set_coloring {
        out += &format!(
            "  evidence   set coloring of [{}]: {:?}\n",
            sc.m(),
            sc.cells()
        );
    }
    if let Some(s) = &ev.statement {
        out += &format!("  statement  {s}\n");
    }
    if let Some(st) = &ev.stats {
        out += &format!(
            "  search     {} nodes, {} pruned, {} shards at depth {}\n",
            st.nodes, st.pruned, st.shards, st.shard_depth
        );
    }
    for c in &ev.checks {
        out += &format!("  check      {c}\n");
    }
    out
}

pub fn number(args: NumberArgs) -> Result<Exit> {
    let q = query(&args)?;
    let store = open_store(&args.store)?;
    let cert = compute_number(&q, &limits(&args.limits))?;
    let mut notes = String::new();
    if let Some(path) = &args.out {
        fs::write(path, serde_json::to_string_pretty(&cert)? + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
        notes += &format!("  written    {}\n", path.display());
    }
    if let Some(store) = &store {
        let path = store.append(&cert)?;
        notes += &format!("  stored     {}\n", path.display());
    }
    emit(args.output.json, &cert, || describe(&cert) + &notes)?;
    Ok(match cert.claim {
        Claim::Exact => Exit::Success,
        _ => Exit::Resource,
    })
}

pub fn print_report(
    json: bool,
    cert: &Certificate,
    report: &CertificateReport,
    extra: &str,
) -> Result<()> {
    emit(json, report, || {
        let mut out = format!(
            "{} {} {}: {}\n",
            cert.query,
            match cert.claim {
                Claim::Exact => "=",
                Claim::LowerBound => ">=",
                Claim::UpperBound => "<=",
            },
            cert.value,
            if report.is_valid() {
                "valid"
            } else {
                "INVALID"
            }
        );
        if report.exhaustion_rechecked {
            out += "  upper bound re-established by a fresh exhaustive search\n";
        }
        for p in &report.problems {
            out += &format!("  violation  {p}\n");
        }
        out + extra
    })
}

pub fn load_certificate(
    path: &std::path::Path,
) -> Result<std::result::Result<Certificate, String>> {
    let text =
        fs::read_to_string(path).map_err(|e| usage(format!("reading {}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text).map_err(|e| format!("certificate does not parse: {e}")))
}

pub fn certify(args: CertifyArgs) -> Result<Exit> {
    let cert = match load_certificate(&args.certificate)? {
        Ok(c) => c,
        Err(problem) => return crate::verify::unreadable(args.output.json, problem),
    };
    let store = open_store(&args.store)?;
    let report = verify_certificate(&cert, Some(&limits(&args.limits)))?;
    let mut extra = String::new();
    if report.is_valid() {
        match &store {
            Some(store) => extra += &format!("  stored     {}\n", store.append(&cert)?.display()),
            None => extra += "  not stored (no --store or APSUM_STORE)\n",
        }
    }
    print_report(args.output.json, &cert, &report, &extra)?;
    Ok(if report.is_valid() {
        Exit::Success
    } else {
        Exit::Failure
    })
}
