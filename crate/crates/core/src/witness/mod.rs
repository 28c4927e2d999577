//! Witness predicates and their searchers.
//!
//! Every finder is exhaustive over its documented domain and returns the
//! first witness in a fixed lexicographic order, or `None`. Finders never
//! return unverified witnesses: each has a matching `verify_*` that
//! re-derives every color condition from scratch.

mod ap;
mod blocks;
mod document;
mod fs;

use serde::{Deserialize, Serialize};

use crate::ap::{IndexSet, Progression};
use crate::coloring::Color;

pub use ap::{find_brauer, find_mono_ap, verify_ap, verify_brauer};
pub use blocks::{
    find_hindman_blocks, find_union_blocks, verify_hindman_blocks, verify_union_blocks, HindmanCaps,
};
pub use document::{
    verify_document, ColoringSubject, WitnessDocument, WitnessKind, WitnessParameters,
};
pub use fs::{find_fs_system, verify_fs_system};

pub(crate) use ap::{ap_ending_at, brauer_ending_at, check_length};
pub(crate) use fs::fs_system_with_total;

/// A monochromatic progression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApWitness {
    pub progression: Progression,
    pub gamma: Color,
}

/// A monochromatic progression whose common difference has the same color.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrauerWitness {
    pub progression: Progression,
    pub gamma: Color,
}

/// `Q_1 ≺ … ≺ Q_n` with every finite `⊕`-sum termwise colored `gamma`
/// (and, with `brauer`, its common difference too).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FsSystemWitness {
    pub progressions: Vec<Progression>,
    pub gamma: Color,
    pub brauer: bool,
}

/// Ordered blocks `B_1 < … < B_n` whose nonempty unions all share `gamma`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockWitness {
    pub blocks: Vec<IndexSet>,
    pub gamma: Color,
}

/// Blocks over a value sequence together with the block sums `b_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HindmanBlocks {
    pub blocks: Vec<IndexSet>,
    pub sums: Vec<num_bigint::BigUint>,
    pub gamma: Color,
}

/// One failed condition found by a verifier.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "violation", rename_all = "kebab-case")]
pub enum Violation {
    Shape {
        detail: String,
    },
    NotPreceding {
        index: usize,
    },
    MaxExceeded {
        max: String,
        bound: usize,
    },
    TermColor {
        index_set: IndexSet,
        s: usize,
        value: String,
        color: Option<Color>,
    },
    DiffColor {
        index_set: IndexSet,
        value: String,
        color: Option<Color>,
    },
    UnionColor {
        union: IndexSet,
        color: Option<Color>,
    },
    BlockOrder {
        index: usize,
    },
}

/// Outcome of a verifier: empty means valid.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Report {
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub(crate) fn push(&mut self, v: Violation) {
        self.violations.push(v);
    }
}
