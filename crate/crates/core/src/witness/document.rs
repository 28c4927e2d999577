use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::{
    verify_ap, verify_brauer, verify_fs_system, verify_hindman_blocks, verify_union_blocks,
    ApWitness, BlockWitness, BrauerWitness, FsSystemWitness, HindmanBlocks, Report,
};
use crate::ap::{IndexSet, Progression};
use crate::coloring::{Color, Coloring, OracleColoring, SetColoring, TableColoring};
use crate::error::{Error, Result};

pub const WITNESS_SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKind {
    Ap,
    Brauer,
    Fs,
    Blocks,
    Hindman,
}

/// The coloring a witness is stated against.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ColoringSubject {
    Set(SetColoring),
    Table(TableColoring),
    Oracle(OracleColoring),
}

impl ColoringSubject {
    fn as_coloring(&self) -> Result<&dyn Coloring> {
        match self {
            ColoringSubject::Table(t) => Ok(t),
            ColoringSubject::Oracle(o) => Ok(o),
            ColoringSubject::Set(_) => Err(Error::precondition(
                "a set coloring does not color integers",
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessParameters {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub brauer: bool,
    pub coloring: ColoringSubject,
    /// The sequence `a_1 < … < a_M` of a Hindman extraction.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<String>,
}

/// Serialized form of any witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessDocument {
    pub schema: u32,
    pub kind: WitnessKind,
    pub parameters: WitnessParameters,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub progressions: Vec<Progression>,
    /// Block bitmasks: bit `i` stands for index `i + 1`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub blocks: Vec<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sums: Vec<String>,
    pub gamma: Color,
}

fn masks(blocks: &[IndexSet]) -> Vec<u64> {
    blocks
        .iter()
        .map(|b| b.to_mask().expect("blocks live below index 64"))
        .collect()
}

fn decimal(values: &[BigUint]) -> Vec<String> {
    values.iter().map(ToString::to_string).collect()
}

fn parse_decimal(values: &[String]) -> Result<Vec<BigUint>> {
    values
        .iter()
        .map(|v| {
            BigUint::from_str(v).map_err(|_| Error::parse(format!("not a decimal integer: {v:?}")))
        })
        .collect()
}

fn params(coloring: ColoringSubject) -> WitnessParameters {
    WitnessParameters {
        n: None,
        l: None,
        brauer: false,
        coloring,
        values: Vec::new(),
    }
}

impl WitnessDocument {
    fn bare(kind: WitnessKind, parameters: WitnessParameters, gamma: Color) -> Self {
        WitnessDocument {
            schema: WITNESS_SCHEMA,
            kind,
            parameters,
            progressions: Vec::new(),
            blocks: Vec::new(),
            sums: Vec::new(),
            gamma,
        }
    }

    pub fn from_ap(coloring: ColoringSubject, w: &ApWitness) -> Self {
        let mut p = params(coloring);
        p.l = Some(w.progression.len());
        let mut doc = Self::bare(WitnessKind::Ap, p, w.gamma);
        doc.progressions = vec![w.progression.clone()];
        doc
    }

    pub fn from_brauer(coloring: ColoringSubject, w: &BrauerWitness) -> Self {
        let mut p = params(coloring);
        p.l = Some(w.progression.len());
        p.brauer = true;
        let mut doc = Self::bare(WitnessKind::Brauer, p, w.gamma);
        doc.progressions = vec![w.progression.clone()];
        doc
    }

    pub fn from_fs(coloring: ColoringSubject, w: &FsSystemWitness) -> Self {
        let mut p = params(coloring);
        p.n = Some(w.progressions.len());
        p.l = w.progressions.first().map(Progression::len);
        p.brauer = w.brauer;
        let mut doc = Self::bare(WitnessKind::Fs, p, w.gamma);
        doc.progressions = w.progressions.clone();
        doc
    }

    pub fn from_blocks(coloring: SetColoring, w: &BlockWitness) -> Self {
        let mut p = params(ColoringSubject::Set(coloring));
        p.n = Some(w.blocks.len());
        let mut doc = Self::bare(WitnessKind::Blocks, p, w.gamma);
        doc.blocks = masks(&w.blocks);
        doc
    }

    pub fn from_hindman(coloring: ColoringSubject, values: &[BigUint], w: &HindmanBlocks) -> Self {
        let mut p = params(coloring);
        p.n = Some(w.blocks.len());
        p.values = decimal(values);
        let mut doc = Self::bare(WitnessKind::Hindman, p, w.gamma);
        doc.blocks = masks(&w.blocks);
        doc.sums = decimal(&w.sums);
        doc
    }

    fn single_progression(&self) -> Result<Progression> {
        match self.progressions.as_slice() {
            [p] => Ok(p.clone()),
            other => Err(Error::parse(format!(
                "expected one progression, found {}",
                other.len()
            ))),
        }
    }

    fn block_sets(&self) -> Result<Vec<IndexSet>> {
        self.blocks
            .iter()
            .map(|&m| IndexSet::from_mask(m))
            .collect()
    }
}

/// Re-check a serialized witness against the coloring it names.
///
/// Malformed documents are errors; a well-formed witness that fails any
/// color or order condition yields a report listing the failures.
pub fn verify_document(doc: &WitnessDocument) -> Result<Report> {
    if doc.schema != WITNESS_SCHEMA {
        return Err(Error::parse(format!(
            "unsupported witness schema {}",
            doc.schema
        )));
    }
    let subject = &doc.parameters.coloring;
    Ok(match doc.kind {
        WitnessKind::Ap => verify_ap(
            subject.as_coloring()?,
            &ApWitness {
                progression: doc.single_progression()?,
                gamma: doc.gamma,
            },
        ),
        WitnessKind::Brauer => verify_brauer(
            subject.as_coloring()?,
            &BrauerWitness {
                progression: doc.single_progression()?,
                gamma: doc.gamma,
            },
        ),
        WitnessKind::Fs => verify_fs_system(
            subject.as_coloring()?,
            &FsSystemWitness {
                progressions: doc.progressions.clone(),
                gamma: doc.gamma,
                brauer: doc.parameters.brauer,
            },
        ),
        WitnessKind::Blocks => {
            let ColoringSubject::Set(sc) = subject else {
                return Err(Error::precondition("block witnesses need a set coloring"));
            };
            verify_union_blocks(
                sc,
                &BlockWitness {
                    blocks: doc.block_sets()?,
                    gamma: doc.gamma,
                },
            )
        }
        WitnessKind::Hindman => {
            let values = parse_decimal(&doc.parameters.values)?;
            verify_hindman_blocks(
                &values,
                subject.as_coloring()?,
                &HindmanBlocks {
                    blocks: doc.block_sets()?,
                    sums: parse_decimal(&doc.sums)?,
                    gamma: doc.gamma,
                },
            )
        }
    })
}
