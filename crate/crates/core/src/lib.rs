//! Numerical operator theory on weighted Hardy spaces of the unit disk.
//!
//! Analytic functions are carried as [`TruncatedSeries`] (coefficients modulo
//! `z^(N+1)`), spaces are identified by their monomial weight sequence
//! ([`SpaceSpec`]), and operators such as `C_φ`, `D_φ = C_φ D`, `DC_φ` and
//! Toeplitz multipliers `T_ψ` become dense [`OpMatrix`] values in the monomial
//! basis. The [`verify`] module binds each known identity (closed-form norms,
//! spectra, adjoint intertwining relations, kernel identities) to a
//! computation, a tolerance and a [`CheckReport`].
//!
//! ```
//! use holospace::{MonomialMap, OpMatrix, SpaceSpec, Symbol};
//!
//! let m = MonomialMap::new(0.8.into(), 1).unwrap();
//! let d_phi = OpMatrix::d_phi(&Symbol::Monomial(m), 32)
//!     .unwrap()
//!     .with_space(SpaceSpec::S2);
//! let norm = d_phi.operator_norm().unwrap();
//! assert!((norm - m.norm_formula()).abs() < 1e-10);
//! ```

pub mod cli;
pub mod error;
pub mod maps;
pub mod operators;
pub mod series;
pub mod spaces;
pub mod verify;

pub use error::{Error, Result};
pub use maps::{MoebiusMap, MonomialMap, Symbol};
pub use num_complex::Complex64;
pub use operators::{OpMatrix, SpectralSummary};
pub use series::TruncatedSeries;
pub use spaces::{KernelKind, SpaceSpec};
pub use verify::CheckReport;

/// Truncation degree used when a caller does not pick one.
pub const DEFAULT_TRUNC: usize = 256;
