//! Exact Elliott-invariant computations for inductive limits of
//! noncommutative tori, together with desk-scale numerical diagnostics for
//! Fourier-multiplier Dirac operators.
//!
//! The exact layer (`exact`, `intlat`, `torus`, `homk`, `prolimit`,
//! `families`) works over the rational-function tower generated by declared
//! formal irrational parameters: trace pairings, Pfaffians, Smith normal
//! forms, scaling constants and classification criteria are all computed
//! symbolically, with interval arithmetic used only to certify signs.
//!
//! The floating-point layer (`spectral`) builds the diagonal Fourier
//! multipliers behind the Dirac operators of the worked inductive systems
//! and checks their spectral claims (ball counts, increments, commutator
//! bounds, compatibility defects, cut-down counting) on finite truncations.

pub mod error;
pub mod exact;
pub mod families;
pub mod homk;
pub mod intlat;
pub mod prolimit;
pub mod spectral;
pub mod torus;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
