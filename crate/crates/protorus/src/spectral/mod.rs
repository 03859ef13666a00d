//! Fourier-multiplier Dirac data at desk scale: Clifford modules, a dense
//! Hermitian eigensolver, certified ball oracles for the built-in symbol
//! families, increment and commutator bounds, coset analysis, inductive
//! compatibility, compact-resolvent diagnostics, cut-down counting, the
//! banded commutator inequality, and truncated fluctuation/conformal checks.

mod banded;
mod clifford;
mod fluct;
mod hermitian;
mod label;
mod multiplier;
mod ops;

pub use banded::{banded_commutator_check, BandedCheck};
pub use clifford::{anticommutation_defect, clifford_generators, clifford_vector};
pub use fluct::{
    inner_fluctuation_check, right_conformal_check, ConformalReport, FluctuationReport,
};
pub use hermitian::{CMatrix, HermitianMatrix, EIG_TOL, HERMITIAN_TOL};
pub use label::{trim_omega, Label, OmegaVec, SolenoidLabel};
pub use multiplier::{
    make_multiplier, pi_hi, pi_lo, Ball, FourierMultiplier, Increment, MultiplierSpec,
};
pub use ops::{
    compatibility_check, coset_analysis, cutdown_count, finite_multiplicity_check,
    monomial_commutator_norm, resolvent_diagnostic, spectrum_enumerate, Compatibility,
    CommutatorNorm, CosetAnalysis, CosetBlock, CutdownCount, MultiplicityCheck,
    ResolventDiagnostic,
};

/// Default assertion tolerance for floating-point identity checks.
pub const ASSERT_TOL: f64 = 1e-9;
