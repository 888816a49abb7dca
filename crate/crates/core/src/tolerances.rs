//! Default numerical tolerances. Every threshold used by the library's
//! defaults lives here.

/// Coefficientwise equality of jets and matrices.
pub const FP_TOL: f64 = 1e-9;

/// Minimum `|det|` of a linear part for it to count as invertible.
pub const DET_TOL: f64 = 1e-12;

/// Two cascade jets closer than this (max coefficient distance) are merged.
pub const DEDUP_TOL: f64 = 1e-10;

/// Relative singular-value cutoff for rank decisions.
pub const RANK_TOL: f64 = 1e-10;

/// Invariance residual for flags and splittings.
pub const FLAG_TOL: f64 = 1e-8;

/// Default truncation degree of jets.
pub const DEFAULT_DEGREE: usize = 6;

/// Default per-level entry cap of a cascade.
pub const DEFAULT_LEVEL_CAP: usize = 4096;

/// Angular separation (radians) required of an escape direction.
pub const ESCAPE_TOL: f64 = 1e-3;

/// Distance below which a word is treated as evaluating to the identity in
/// freeness certificates.
pub const CERT_TOL: f64 = 1e-10;

/// Eigenvalues closer than this are grouped into one generalized eigenspace.
pub const EIGEN_CLUSTER_TOL: f64 = 1e-5;

/// Recurrence scans: a witness must move a point by less than
/// `ETA_FACTOR · r` ...
pub const ETA_FACTOR: f64 = 1e-4;

/// ... and by more than `FIXPOINT_FACTOR · r`.
pub const FIXPOINT_FACTOR: f64 = 1e-12;

/// Points per axis of the default recurrence-scan grid.
pub const GRID_POINTS: usize = 41;
