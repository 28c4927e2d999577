//! Exact small values of `W`, `WB`, `Hind` and `f` by avoiding-coloring
//! backtracking, with certificates and a persistent store.
//!
//! A node of the search tree at depth `p` is a canonical coloring of `[p]`
//! (of `P^+([m])` by subset rank, for `Hind`) with no witness. Children
//! append one cell; a child containing a witness is pruned, which is sound
//! because witnesses survive extension. The number is read off the deepest
//! surviving node once the tree is exhausted.

mod certificate;
mod engine;
mod hind;
mod store;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coloring::Color;
use crate::error::{Error, Result};

pub use certificate::{
    verify_certificate, Certificate, CertificateReport, Claim, Evidence, SearchStats,
};
pub use engine::{
    compute_number, merge, prefix_count, shard_search, shard_search_parallel, ShardResult,
};
pub use hind::{hind_integer_exhaustion, power_values};
pub use store::{Bounds, ResultStore, STORE_ENV};

/// Which number, and its parameters. `f` is always written `f(n, l, c)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum NumberQuery {
    W {
        l: usize,
        c: u32,
    },
    #[serde(rename = "WB")]
    Wb {
        l: usize,
        c: u32,
    },
    #[serde(rename = "HIND")]
    Hind {
        n: usize,
        c: u32,
    },
    F {
        n: usize,
        l: usize,
        c: u32,
    },
}

impl NumberQuery {
    pub fn colors(&self) -> u32 {
        match *self {
            NumberQuery::W { c, .. }
            | NumberQuery::Wb { c, .. }
            | NumberQuery::Hind { c, .. }
            | NumberQuery::F { c, .. } => c,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            NumberQuery::W { .. } => "W",
            NumberQuery::Wb { .. } => "WB",
            NumberQuery::Hind { .. } => "HIND",
            NumberQuery::F { .. } => "F",
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.colors() == 0 {
            return Err(Error::precondition("c must be >= 1"));
        }
        match *self {
            NumberQuery::W { l, .. } | NumberQuery::Wb { l, .. } => crate::witness::check_length(l),
            NumberQuery::Hind { n, .. } => {
                if n == 0 || n > 63 {
                    return Err(Error::precondition("HIND needs 1 <= n <= 63"));
                }
                Ok(())
            }
            NumberQuery::F { n, l, .. } => {
                crate::witness::check_length(l)?;
                if n == 0 || n > 20 {
                    return Err(Error::precondition("F needs 1 <= n <= 20"));
                }
                Ok(())
            }
        }
    }

    /// File-name friendly key, e.g. `F-n2-l3-c2`.
    pub fn key(&self) -> String {
        match *self {
            NumberQuery::W { l, c } => format!("W-l{l}-c{c}"),
            NumberQuery::Wb { l, c } => format!("WB-l{l}-c{c}"),
            NumberQuery::Hind { n, c } => format!("HIND-n{n}-c{c}"),
            NumberQuery::F { n, l, c } => format!("F-n{n}-l{l}-c{c}"),
        }
    }

    /// The `Hind` tree colors subsets, the others color integers.
    pub fn colors_sets(&self) -> bool {
        matches!(self, NumberQuery::Hind { .. })
    }
}

impl fmt::Display for NumberQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            NumberQuery::W { l, c } => write!(f, "W({l},{c})"),
            NumberQuery::Wb { l, c } => write!(f, "WB({l},{c})"),
            NumberQuery::Hind { n, c } => write!(f, "Hind({n},{c})"),
            NumberQuery::F { n, l, c } => write!(f, "f({n},{l},{c})"),
        }
    }
}

/// Resource limits for a search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Total node budget, split evenly across the fixed shard layout.
    pub node_budget: u64,
    /// Colorings longer than this are not explored.
    pub max_depth: usize,
    /// Re-run the full witness finder at every node and compare.
    pub cross_check: bool,
    pub threads: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            node_budget: 50_000_000,
            max_depth: 10_000,
            cross_check: cfg!(debug_assertions),
            threads: 1,
        }
    }
}

pub(crate) type Cells = Vec<Color>;
