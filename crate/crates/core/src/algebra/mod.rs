//! Scalars, dense matrices, and uni- and bivariate polynomials.

pub mod bipoly;
pub mod conj;
pub mod exact;
pub mod float;
pub mod matrix;
pub mod poly;
pub mod scalar;
pub mod tolerance;

pub use bipoly::BiPoly;
pub use conj::ConjClassInvariant;
pub use matrix::CMatrix;
pub use poly::Poly;
pub use scalar::{encode_f64, gauss, Backend, GaussRat, Scalar, C64};
pub use tolerance::ToleranceConfig;
