//! Linear demand-private coded caching over GF(2): bit-packed linear algebra,
//! scheme model and verification, constructions, and exhaustive
//! impossibility searches.

pub mod construct;
pub mod json;
pub mod linalg;
pub mod rational;
pub mod scheme;
pub mod search;
pub mod verify;

pub use construct::{BuildError, RatePoint};
pub use linalg::{BitMatrix, Echelon, LinalgError};
pub use rational::Rational;
pub use scheme::{DemandVector, KeyVector, Scheme, SchemeError, SchemeParams, Violation, ViolationKind};
pub use search::{SearchOptions, SearchReport, Witness};
pub use verify::{PairPrivacy, PrivacyReport};
