//! Exact computations of refined Donaldson–Thomas invariants for quivers
//! without potential.
//!
//! The crate is organised bottom-up:
//! - [`quiver`]: quivers, dimension vectors, Euler pairings, framed quivers
//! - [`ratfunc`]: exact rational functions in `t = q^{1/2}` over the rationals
//! - [`stability`]: central charges, slopes, genericity, Harder–Narasimhan types
//! - [`torus`]: dimension-vector graded series, twisted products, plethystic `EXP`/`LOG`
//! - [`engine`]: stack and semistable series, DT extraction, wall-crossing,
//!   framed and stabilization checks
//! - [`fq_oracle`]: brute-force point counts over small finite fields
//! - [`exec`]: sequential/parallel execution switch used by the heavy loops
//!
//! Everything is exact; no floating point enters any computed value.

pub mod engine;
pub mod error;
pub mod exec;
pub mod fq_oracle;
pub mod json;
pub mod quiver;
pub mod ratfunc;
pub mod stability;
pub mod torus;

pub use error::{Error, Result};
pub use exec::Exec;
pub use quiver::{DimVector, FramingVector, Quiver};
pub use ratfunc::{LaurentPoly, RatFunc};
pub use stability::{HnType, Slope, SlopeMap, Stability};
pub use torus::{GradedSeries, SeriesTag};
