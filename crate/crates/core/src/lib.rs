//! Perfect edge state transfer on cubelike graphs `Cay(F_2^m, S)`.
//!
//! The crate decides and certifies perfect edge state transfer with exact
//! integer arithmetic ([`pestcheck`]), builds certified instances from bent
//! and Gold functions ([`constructions`]), and cross-checks every verdict
//! numerically ([`oracle`]).
//!
//! Elements of F_2^m are bit masks with coordinate `x_1` as the most
//! significant bit, so the tuple `(110)` is `0b110`.

pub mod boolfn;
pub mod constructions;
pub mod cubelike;
pub mod gf2m;
pub mod oracle;
pub mod pestcheck;

/// Largest supported dimension `m`.
pub const MAX_M: u32 = 24;

pub use boolfn::{classify, wht, BooleanFunction, Classification, WalshSpectrum};
pub use constructions::{
    bent_lift_certificate, lift, semibent_lift_certificate, LiftCertificate, LiftKind, LiftOptions,
};
pub use cubelike::{spectrum, ConnectionSet, GroupElement, Spectrum};
pub use gf2m::{trace_orthogonal_basis, FieldElement, FieldSpec, TobBasis};
pub use oracle::{sweep_candidate_times, transfer_amplitude, FidelityReport, Sweep};
pub use pestcheck::{
    check_pest, find_pest_partners, normalize_edge, time_bound, v2, EdgeStatePair, NegativeReason,
    PestCertificate, PestStatus, Valuation,
};
