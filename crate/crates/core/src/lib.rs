//! Unit time-phase signal sets on Z_n: finite-field and character
//! arithmetic, exhaustive correlation measures, closed-form bounds, and the
//! Gauss-sum constructions.

pub mod bounds;
pub mod characters;
pub mod constructions;
pub mod field;
pub mod json;
pub mod signal;

pub use bounds::{judge, Alphabet, BoundQuery, BoundReport, Verdict};
pub use characters::ComplexValue;
pub use constructions::{construct, construct_cyclotomic, construct_gauss, verify_construction};
pub use field::{make_field, FieldElement, FieldSpec};
pub use signal::{profile, CorrelationProfile, SetMeta, Signal, SignalSet};
