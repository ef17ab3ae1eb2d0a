//! Shared numeric building blocks: Gaussian special functions, Hermite
//! polynomials, Gauss-Hermite rules and adaptive Gauss-Kronrod quadrature.

pub mod hermite;
pub mod quad;
pub mod special;
