//! Exact arithmetic on arithmetic progressions, index sets and finite sums.
//!
//! Everything here is arbitrary precision. The search modules keep their own
//! fixed-width fast paths and convert to these types at their boundary.

mod progression;
mod sets;

pub use progression::{oplus_family, pow2, Progression};
pub use sets::{
    finite_sums, finite_sums_capped, nonempty_subsets, nu, pow_set, power_disjoint, IndexSet,
    ValueSet, FS_DEFAULT_CAP,
};
