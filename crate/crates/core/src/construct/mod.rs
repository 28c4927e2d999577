//! The constructive arguments, run on finite truncations.
//!
//! [`stages`] holds the induction that merges seed progressions block by
//! block; [`power`] and [`pipeline`] hold the explicit construction of an
//! FS system inside `[2^{q^3}]` from progressions with power-of-two terms.

pub mod pipeline;
pub mod power;
pub mod stages;

pub use pipeline::{
    replay_transcript, run_power_pipeline, true_parameters, PipelineStage, StageFailure, Transcript,
};
pub use power::{
    build_power_family, induced_coloring, verify_max_bound, verify_power_disjoint_claim,
    InducedColoring, MaxBoundReport, PowerDisjointReport, PowerFamily,
};
pub use stages::{
    check_extraction, check_order, extract_q, merge_step, run_stage_pipeline, seed_family,
    verify_stage, MergeOutcome, SeedVariant, StageFamily, StageReport, StageRun, StageViolation,
    Truncation,
};
