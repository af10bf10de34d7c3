//! Combinatorics and geometry of substitutive and Sturmian sequence
//! spaces: factor languages, balance profiles, occurrence discrepancies,
//! spectral certificates, suspension tilings, and the level-map limits
//! that conjugate one suspension onto another.
//!
//! The organizing question is when a change of tile lengths moves a
//! suspension only by a bounded deformation. The crate answers it from
//! two independent directions that the tests play against each other:
//! combinatorially through balance profiles of the factor language, and
//! spectrally through the eigenvalue support of the length change. Both
//! feed [`plasticity_verdict`], and the constructive side is carried by
//! [`conjugacy`], which realizes the deformation explicitly and reports
//! how fast its level maps converged.
//!
//! Substitution matrices follow the column convention throughout: column
//! `x` counts the letters of the image of `x`, so occurrence-count
//! vectors transform by `M` and length covectors by `M^T`.
//!
//! Numeric routines are generic over [`Scalar`] (`f32` or `f64`); the
//! `*64` aliases name the double-precision instantiations used by the
//! command-line tools.

pub mod adversary;
pub mod alphabet;
pub mod balance;
pub mod collar;
pub mod discrepancy;
pub mod error;
pub mod factors;
pub mod matrix;
pub mod scalar;
pub mod sequence;
pub mod spectral;
pub mod sturmian;
pub mod substitution;
pub mod tiling;
pub mod verdict;
pub mod word;

pub use adversary::tm_adversarial_word;
pub use alphabet::{Alphabet, Letter};
pub use balance::{
    balance_profile, balance_profiles, word_balance_growth, BalanceProfile, BalanceRow,
    EvidenceKind, LanguageSource,
};
pub use collar::CollaredRecoding;
pub use discrepancy::{discrepancy_series, DiscrepancySeries};
pub use error::{Error, Result};
pub use factors::factors;
pub use matrix::SubstitutionMatrix;
pub use scalar::Scalar;
pub use sequence::BiSequence;
pub use spectral::{
    classify_delta, decompose_length_change, perron_data, supertile_length, ContractionStatus,
    LengthChangeDecomposition, LengthVector, SpectralData,
};
pub use sturmian::sturmian_prefix;
pub use substitution::{BiInfiniteSeed, Substitution};
pub use tiling::{
    conjugacy, default_distance_grid, equivariance_residual, fitted_gap_rate, tiling_distance,
    translation_samples, Conjugacy, ConjugacyTrace, SupertileAddress, Tiling, TraceRow,
};
pub use verdict::{
    gather_balance_evidence, plasticity_verdict, BalanceEvidence, BalanceTrend, PlasticityReport,
    PlasticityVerdict, TargetEvidence, TotalVerdict,
};
pub use word::{count_occurrences, Word};

/// Double-precision instantiations.
pub type LengthVector64 = LengthVector<f64>;
pub type SpectralData64 = SpectralData<f64>;
pub type LengthChangeDecomposition64 = LengthChangeDecomposition<f64>;
pub type DiscrepancySeries64 = DiscrepancySeries<f64>;
pub type Tiling64 = Tiling<f64>;
pub type Conjugacy64 = Conjugacy<f64>;
pub type PlasticityReport64 = verdict::PlasticityReport<f64>;
