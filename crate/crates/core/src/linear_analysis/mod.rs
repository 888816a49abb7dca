//! Structure of finitely generated subgroups of `GL(n, C)`: spectra and
//! Jordan decomposition, simultaneous triangularization of unipotent
//! groups, irreducibility and invariant flags, recurrence of powers, free
//! pairs near the identity, stable splittings and escape directions.
//!
//! Freeness is only ever certified up to a stated word length.

mod burnside;
pub mod format;
mod free_pair;
mod group;
mod kolchin;
mod spectral;
mod words;

pub use burnside::{burnside_irreducibility, invariant_flag, BurnsideOutcome, InvariantFlag, QuotientCertificate};
pub use free_pair::{
    alpha_descent, block_scaling, freeness_certificate, free_pair_near_identity, power_recurrence,
    DescentStep, FreePairOptions, FreePairResult, FreenessCertificate, PowerRecurrence, SEARCH_CERT_TOL,
};
pub use group::MatrixGroupSpec;
pub use kolchin::{kolchin_triangularize, Triangularization};
pub use spectral::{
    generalized_eigenspace, is_hyperbolic, is_power_bounded, jordan_multiplicative, stable_splitting,
    JordanDecomposition, SpectralSplit,
};
pub use words::{
    derived_series, escape_direction, trace_bound_check, DerivedLevel, DerivedSeriesOptions,
    DerivedSeriesReport, EscapeWitness, TraceReport,
};
