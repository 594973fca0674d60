//! The Hamming angle on nonzero vectors over finite fields.
//!
//! `angle(u, v) = min_{c != 0} d_H(u, c v)` is a metric on the projective
//! space `P(F_q^n)`. This crate computes it (by brute force and in one pass),
//! builds linear and Reed-Solomon codes, and decodes to the unique nearest
//! codeword direction when the input lies within half the minimum distance.

pub mod angle;
pub mod cli;
pub mod code;
pub mod error;
pub mod experiments;
pub mod gf;
pub mod vec;

pub use angle::{
    angle_fast, angle_naive, argmin_scalar, build_census, is_max_angle, projective_distance,
    projectivize, ProjectivePoint, RatioCensus,
};
pub use code::{Candidate, DecodeKind, DecodeOutcome, LinearCode};
pub use error::{Error, Result};
pub use gf::{FieldElement, FieldSpec};
pub use vec::FqVector;
