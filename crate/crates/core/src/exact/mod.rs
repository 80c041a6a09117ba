//! Reference machinery for checking interval results: a classical solver for
//! point-valued diagrams, endpoint enumeration over row vertices, and a
//! sampler of admitted members.

mod envelope;
mod point;
mod sample;

pub use envelope::{
    exact_envelope, vertex_realizations, EnvelopeOptions, EnvelopeReport, PolicyUnion, VariedRow, DEFAULT_CAP,
    ENVELOPE_CAVEAT,
};
pub use point::{point_solve, PointPolicy, PointRealization, PointSolution, PolicyEntry};
pub use sample::{
    check_against, outside_admissible, policy_violations, sample_member, sample_member_with, soundness_check,
    SoundnessReport, CONTAINMENT_TOLERANCE,
};
