//! Exact enumeration of Apollonian and Boyd–Maxwell sphere packings from
//! Coxeter polytope data, curvature counting and critical-exponent
//! estimation, integral lattice identities, and orbit counts on K3 surface
//! lattices.

pub mod coxeter;
pub mod error;
pub mod exact;
pub mod exponent;
pub mod inversive;
pub mod lattice;
pub mod lorentz;
pub mod orbit;
pub mod surface;

pub use error::{Error, Result};
pub use exact::{parse_rational, rat, ratio, ExactVector, Rational, RationalMatrix};
pub use lorentz::{QuadraticSpace, SignatureConvention};
