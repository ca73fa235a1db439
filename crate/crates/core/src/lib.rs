//! Kirkwood-Dirac quasiprobabilities and support uncertainty diagrams.
//!
//! The crate is organized bottom-up:
//!
//! - [`cyclotomic`]: exact arithmetic in Q(ω_d), the entry field of DFT matrices.
//! - [`linalg`]: matrices, submatrices, exact and numeric rank, nullspaces.
//! - [`kd`]: basis pairs, KD distributions, supports, classicality.
//! - [`states`]: constructive state families and random unbiased bases.
//! - [`diagram`]: rank-condition search for achievable support pairs.

pub mod cyclotomic;
pub mod diagram;
pub mod kd;
pub mod linalg;
pub mod states;

pub use cyclotomic::{CycError, CycNum, IntPoly};
pub use diagram::{
    enumerate_diagram, point_exists, DiagramError, DiagramPoint, Engine, PointStatus, SearchMode, UncertaintyDiagram,
};
pub use kd::{BasisKind, Classicality, KDDist, KdError, StateVector, SupportProfile, TransitionMatrix, Verdict};
pub use linalg::{CMatrix, EngineKind, LinalgError, RankCertificate};
pub use states::StateError;
