//! Exact computer algebra for nets of quadrics in projective space and the
//! quadric surface bundles they induce.
//!
//! Everything here computes over exact coefficients: arbitrary-precision
//! rationals or prime fields. There is no floating point and no randomness
//! in any verdict; checks either certify a statement, refute it, or report
//! that they are inconclusive.

pub mod bundle;
pub mod field;
pub mod groebner;
pub mod jacobian;
pub mod linalg;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod vars;

pub use field::{Field, Fp, Rationals};
pub use linalg::{Echelon, FpEchelon, SmithForm};
pub use monomial::Monomial;
pub use parse::{parse_poly, ParseError};
pub use poly::{monomial_basis, reduce_mod_p, Homogeneity, Poly, PolyError};
pub use vars::{Bidegree, Block, Var, VarTable};
