use num_bigint::BigUint;

use super::{ApWitness, BrauerWitness, Report, Violation};
use crate::ap::{IndexSet, Progression};
use crate::coloring::{Color, Coloring, TableColoring};
use crate::error::{Error, Result};

pub(crate) fn check_length(l: usize) -> Result<()> {
    if l < 3 {
        return Err(Error::precondition(format!(
            "progression length l must be >= 3, got {l}"
        )));
    }
    Ok(())
}

#[inline]
fn mono(cells: &[Color], a: usize, d: usize, l: usize) -> bool {
    let g = cells[a - 1];
    (1..l).all(|k| cells[a + k * d - 1] == g)
}

/// Monochromatic `l`-term progression with its last term at `p = cells.len()`.
pub(crate) fn ap_ending_at(cells: &[Color], l: usize) -> Option<(usize, usize)> {
    let p = cells.len();
    (1..=(p.saturating_sub(1)) / (l - 1))
        .map(|d| (p - (l - 1) * d, d))
        .find(|&(a, d)| mono(cells, a, d, l))
}

/// Brauer configuration whose largest element is `p = cells.len()`.
///
/// The difference `d` is always smaller than the last term, so the last
/// term is the maximum.
pub(crate) fn brauer_ending_at(cells: &[Color], l: usize) -> Option<(usize, usize)> {
    let p = cells.len();
    (1..=(p.saturating_sub(1)) / (l - 1))
        .map(|d| (p - (l - 1) * d, d))
        .find(|&(a, d)| cells[d - 1] == cells[a - 1] && mono(cells, a, d, l))
}

/// First monochromatic `l`-AP in `[p]`, ordered by `(first, diff)`.
pub fn find_mono_ap(coloring: &TableColoring, l: usize) -> Result<Option<ApWitness>> {
    check_length(l)?;
    let cells = coloring.cells();
    let p = cells.len();
    for a in 1..=p {
        for d in 1..=(p - a) / (l - 1) {
            if mono(cells, a, d, l) {
                return Ok(Some(ApWitness {
                    progression: Progression::new(a as u64, d as u64, l)?,
                    gamma: coloring.at(a),
                }));
            }
        }
    }
    Ok(None)
}

/// First Brauer configuration `d, a, a+d, …, a+(l-1)d` in `[p]`, ordered by `(a, d)`.
pub fn find_brauer(coloring: &TableColoring, l: usize) -> Result<Option<BrauerWitness>> {
    check_length(l)?;
    let cells = coloring.cells();
    let p = cells.len();
    for a in 1..=p {
        for d in 1..=(p - a) / (l - 1) {
            if cells[d - 1] == cells[a - 1] && mono(cells, a, d, l) {
                return Ok(Some(BrauerWitness {
                    progression: Progression::new(a as u64, d as u64, l)?,
                    gamma: coloring.at(a),
                }));
            }
        }
    }
    Ok(None)
}

fn check_terms<C: Coloring + ?Sized>(
    coloring: &C,
    progression: &Progression,
    gamma: Color,
    report: &mut Report,
) {
    let whole = IndexSet::singleton(1).expect("singleton");
    for (k, term) in progression.terms().enumerate() {
        let color = coloring.color_of(&term).ok();
        if color != Some(gamma) {
            report.push(Violation::TermColor {
                index_set: whole.clone(),
                s: k + 1,
                value: term.to_string(),
                color,
            });
        }
    }
}

pub fn verify_ap<C: Coloring + ?Sized>(coloring: &C, witness: &ApWitness) -> Report {
    let mut report = Report::default();
    check_terms(coloring, &witness.progression, witness.gamma, &mut report);
    report
}

pub fn verify_brauer<C: Coloring + ?Sized>(coloring: &C, witness: &BrauerWitness) -> Report {
    let mut report = Report::default();
    check_terms(coloring, &witness.progression, witness.gamma, &mut report);
    let d: &BigUint = witness.progression.diff();
    let color = coloring.color_of(d).ok();
    if color != Some(witness.gamma) {
        report.push(Violation::DiffColor {
            index_set: IndexSet::singleton(1).expect("singleton"),
            value: d.to_string(),
            color,
        });
    }
    report
}
