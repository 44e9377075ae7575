//! Exact formal classes of connections at infinity, their local Fourier
//! transforms, and duality checks for Kac-Schwarz pairs and companion-matrix
//! connections.
//!
//! ```
//! use pqfourier::connection::ExponentialFactor;
//! use pqfourier::fourier::fourier_factor;
//! use pqfourier::series::parse_series;
//!
//! let e = ExponentialFactor::new(parse_series("ζ^(-5/3)", 'ζ')?)?;
//! let g = fourier_factor(&e)?;
//! assert_eq!(g.to_string(), "E[1/4 - ζ^(-5/2), 2]");
//! # Ok::<(), pqfourier::Error>(())
//! ```

pub mod cli;
pub mod companion;
pub mod connection;
pub mod diffop;
pub mod error;
pub mod fourier;
pub mod kac_schwarz;
pub mod scalar;
pub mod series;

pub use error::{Error, Result};
pub use scalar::{Cyclotomic, Field, Rational};
pub use series::{Exponent, Poly, PuiseuxSeries};

/// Series over cyclotomic coefficients, the type used throughout the engine.
pub type Series = PuiseuxSeries<Cyclotomic>;
pub type RationalSeries = PuiseuxSeries<Rational>;
