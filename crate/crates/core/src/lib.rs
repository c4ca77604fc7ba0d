//! Information dispersal over GF(2^w) and confidentiality analysis of the
//! generator matrices behind it.
//!
//! A file is split into m segments and encoded into n pieces so that any m
//! pieces rebuild it ([`dispersal`]). Whether fewer than m pieces give away
//! whole segments depends only on the generator matrix; [`confidential`]
//! decides that question and mounts the attack when the answer is yes, and
//! [`codegen`] builds matrices for which it is no.

pub mod codegen;
pub mod confidential;
pub mod dispersal;
pub mod error;
pub mod gf;
pub mod matrix;
pub mod piece;
pub mod subsets;

pub use codegen::{check_validity, ensure_valid, strongify, Family, GeneratorSpec, ValidityReport};
pub use confidential::{
    attack, certify_strong, detect_weak, recoverable_oracle, ConfidentialityReport, SearchLimits, Verdict,
    WeakWitness,
};
pub use dispersal::{disperse, encode, reconstruct, split, SegmentBlock};
pub use error::{IdaError, Result};
pub use gf::{Field, FieldElement, FieldWidth};
pub use matrix::GfMatrix;
pub use piece::{Piece, PieceHeader};
