//! Quaternionic loci and Shimura curves in the Siegel modular threefold.
//!
//! The crate covers exact arithmetic, binary quadratic forms, quaternion
//! algebras over Q, the enumeration of quaternionic loci, CM points and
//! intersections of Shimura curves, Igusa invariants and the Humbert
//! surface of discriminant 4, and Mestre obstructions.

pub mod cm;
pub mod data;
pub mod error;
pub mod exact;
pub mod loci;
pub mod mestre;
pub mod qforms;
pub mod quatalg;
pub mod siegel;

pub use error::{Error, Result};
pub use exact::{GaussianRational, IntMatrix, Poly, Rational};
pub use qforms::BinaryQF;
pub use quatalg::{MaximalOrder, QuatAlgebra, QuatElement};
pub use siegel::{JTuple, ParamCurve, STuple};
