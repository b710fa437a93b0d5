//! Numerical matrix analysis and geometry of matrix groups.
//!
//! Dense real and complex matrices ([`linalg`]), spectral decompositions
//! ([`spectral`]), the matrix exponential and logarithms ([`expmlog`]),
//! the trace metric on GL and its subgroups ([`manifolds`]), lattices,
//! tori and Hopf quotients ([`lattices`]), projective spaces and
//! Grassmannians ([`projective`]), horizontal lifting through concrete
//! submersions ([`submersion`]), and finite metric-space computations
//! ([`metricspace`]).
//!
//! Matrices carry a real/complex field tag; real matrices have exactly
//! zero imaginary parts. Fallible operations return [`Result`].

pub mod error;
pub mod expmlog;
pub mod lattices;
pub mod linalg;
pub mod manifolds;
pub mod metricspace;
pub mod projective;
pub mod sample;
pub mod spectral;
pub mod submersion;

pub use error::{Error, Result};
pub use linalg::{Field, Matrix, Scalar, Vector};
