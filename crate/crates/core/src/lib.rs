//! Germs under restricted contact equivalence, the Liouville plane fields
//! they define, and the strictly contact fields of `(R^3, dz + x dy)`.
//!
//! Layers, bottom up:
//! - [`jet`], [`poly`], [`linalg`]: exact truncated series, sparse
//!   polynomials and row reduction, generic over [`Scalar`].
//! - [`germclass`]: the RK action, classification, codimension,
//!   determinacy and normalizing diffeomorphisms.
//! - [`liouville2d`]: the germ/field dictionary on the plane with `x dy`.
//! - [`contact3d`]: Hamiltonian fields, the homogeneous basis and
//!   normal-form linearization in three dimensions.
//! - [`dynamics`]: numerical flows, portraits and parameter sweeps.

pub mod contact3d;
pub mod dynamics;
pub mod error;
pub mod germclass;
pub mod jet;
pub mod linalg;
pub mod liouville2d;
pub mod poly;
pub mod roots;
pub mod sample;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Exact coefficients used throughout.
pub type Rational = num_rational::BigRational;

pub type Jet = jet::JetOf<Rational>;
pub type DiffeoGerm = jet::DiffeoGermOf<Rational>;
pub type GermClass = germclass::GermClassOf<Rational>;
pub type BivarPoly = poly::Poly<Rational, 2>;
pub type TrivarPoly = poly::Poly<Rational, 3>;

pub type JetF64 = jet::JetOf<f64>;
pub type DiffeoGermF64 = jet::DiffeoGermOf<f64>;

pub use jet::DEFAULT_ORDER;
