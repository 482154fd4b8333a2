//! Finite Markov chains from orthogonal and multiple orthogonal polynomial
//! recurrences.
//!
//! Truncating the recurrence matrix of an orthogonal polynomial family
//! (tridiagonal `J_m`) or a multiple orthogonal family on the stepline
//! (tetradiagonal `T_m`) and conjugating by the Perron eigenvector at the
//! largest zero yields a stochastic matrix: a birth-and-death chain in the
//! scalar case, a chain moving up to two steps per transition in the
//! multiple case. This crate builds those chains for the Hahn descendants
//! of the Askey scheme (Hahn, Jacobi on `[0,1]`, Meixner, Kravchuk, Laguerre,
//! Charlier, Hermite) and the stochastic multiple families (multiple Hahn,
//! Jacobi-Pineiro, multiple Meixner II, multiple Laguerre I), and derives
//! steady states, expected return times, periodicity, r-step transition
//! probabilities, time reversals and pure-birth/pure-death factorizations.
//!
//! ```
//! use polychain::families::{FamilyKind, FamilySpec};
//! use polychain::chains::{build, ChainKind};
//!
//! let spec = FamilySpec::new(FamilyKind::Hahn { alpha: 0.5, beta: 0.75, n: 5 }).unwrap();
//! let chain = build(&spec, 5, ChainKind::Scalar).unwrap();
//! let pi = chain.steady_state();
//! assert!((pi.iter().sum::<f64>() - 1.0).abs() < 1e-12);
//! ```

pub mod chains;
pub mod error;
pub mod factor;
pub mod families;
pub mod hyper;
pub mod matrix;
pub mod sim;
pub mod spectral;
pub mod verify;

pub use chains::{build, ChainAnalysis, ChainKind, StochasticChain};
pub use error::{Error, Result};
pub use families::{FamilyKind, FamilySpec, RecurrenceBands};
pub use matrix::Matrix;
pub use spectral::SpectralDecomposition;
