use std::fs;

use anyhow::{anyhow, bail, Context, Result};
use apsum::coloring::{Color, Coloring, OracleColoring, SetColoring, TableColoring};
use apsum::witness::ColoringSubject;
use num_bigint::BigUint;

use crate::args::ColoringArgs;

/// Inline text, or the contents of the file named after `@`.
pub fn inline_or_file(text: &str) -> Result<String> {
    match text.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).with_context(|| format!("reading {path}")),
        None => Ok(text.to_string()),
    }
}

pub fn table(text: &str, colors: Option<u32>) -> Result<TableColoring> {
    let text = inline_or_file(text)?;
    let trimmed = text.trim();
    if trimmed.starts_with('[') {
        let cells: Vec<Color> =
            serde_json::from_str(trimmed).map_err(|e| usage(format!("coloring: {e}")))?;
        let c = colors.unwrap_or_else(|| cells.iter().copied().max().unwrap_or(1));
        return Ok(TableColoring::new(c, cells)?);
    }
    if trimmed.starts_with('{') {
        let t: TableColoring =
            serde_json::from_str(trimmed).map_err(|e| usage(format!("coloring: {e}")))?;
        return Ok(t);
    }
    Ok(TableColoring::parse(trimmed, colors)?)
}

pub fn set_coloring(text: &str) -> Result<SetColoring> {
    let text = inline_or_file(text)?;
    serde_json::from_str(&text).map_err(|e| usage(format!("set coloring: {e}")))
}

fn num<T: std::str::FromStr>(part: Option<&str>, what: &str) -> Result<T> {
    part.and_then(|s| s.parse().ok())
        .ok_or_else(|| usage(format!("oracle: expected {what}")))
}

/// JSON rule, @file, or a shorthand such as `parity` or `digit:2:4:12`.
pub fn oracle(text: &str, seed: Option<u64>) -> Result<OracleColoring> {
    let text = inline_or_file(text)?;
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        return serde_json::from_str(trimmed).map_err(|e| usage(format!("oracle: {e}")));
    }
    let mut parts = trimmed.split(':');
    let name = parts.next().unwrap_or_default();
    let o = match name {
        "constant" => {
            let k: Color = num(parts.next(), "a color")?;
            let c = match parts.next() {
                Some(c) => num(Some(c), "a color count")?,
                None => k,
            };
            OracleColoring::constant(k, c)?
        }
        "parity" => OracleColoring::parity(),
        "mod" => OracleColoring::residue(num(parts.next(), "a modulus")?)?,
        "digit" => {
            let base = num(parts.next(), "a base")?;
            let position = num(parts.next(), "a digit position")?;
            let map = TableColoring::parse(parts.next().unwrap_or_default(), None)?;
            OracleColoring::digit(base, position, map.cells().to_vec())?
        }
        "seeded" => {
            let c = num(parts.next(), "a color count")?;
            let Some(seed) = seed else {
                bail!(usage("seeded oracles need an explicit --seed"));
            };
            OracleColoring::seeded(seed, c)?
        }
        other => bail!(usage(format!("unknown oracle {other:?}"))),
    };
    if parts.next().is_some() {
        bail!(usage(format!("oracle: trailing fields in {trimmed:?}")));
    }
    Ok(o)
}

/// The coloring named on the command line, as a table on `[p]` for the
/// finders and as the subject recorded in witness documents.
pub fn subject(args: &ColoringArgs) -> Result<(TableColoring, ColoringSubject)> {
    match (&args.coloring, &args.oracle) {
        (Some(text), _) => {
            let t = table(text, args.colors)?;
            Ok((t.clone(), ColoringSubject::Table(t)))
        }
        (None, Some(rule)) => {
            let o = oracle(rule, args.seed)?;
            let p = args
                .p
                .ok_or_else(|| usage("--oracle needs --p to fix the domain [p]"))?;
            Ok((tabulate(&o, p)?, ColoringSubject::Oracle(o)))
        }
        (None, None) => bail!(usage("give --coloring or --oracle")),
    }
}

pub fn oracle_only(args: &ColoringArgs) -> Result<OracleColoring> {
    match &args.oracle {
        Some(rule) => oracle(rule, args.seed),
        None => bail!(usage("this command needs --oracle")),
    }
}

pub fn tabulate(o: &OracleColoring, p: usize) -> Result<TableColoring> {
    let cells = (1..=p as u64)
        .map(|x| o.color_of(&BigUint::from(x)))
        .collect::<apsum::Result<Vec<_>>>()?;
    Ok(TableColoring::new(o.colors(), cells)?)
}

pub fn values(raw: &[String]) -> Result<Vec<BigUint>> {
    raw.iter()
        .map(|v| {
            v.trim()
                .parse::<BigUint>()
                .map_err(|_| usage(format!("not a positive integer: {v:?}")))
        })
        .collect()
}

/// Marks an error as a usage error (exit code 2).
#[derive(Debug)]
pub struct Usage(pub String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow!(Usage(msg.into()))
}

/// A table or an oracle, for consumers that accept any coloring.
pub fn any_coloring(args: &ColoringArgs) -> Result<Box<dyn Coloring>> {
    match (&args.coloring, &args.oracle) {
        (Some(text), _) => Ok(Box::new(table(text, args.colors)?)),
        (None, Some(_)) => Ok(Box::new(oracle_only(args)?)),
        (None, None) => bail!(usage("give --coloring or --oracle")),
    }
}
