//! Numerical-range spectral-set machinery.
//!
//! Smooth convex domains are encoded by trigonometric support functions
//! (`geometry`), the numerical range W(A) is computed by a Hermitian-part
//! eigensweep (`numrange`), holomorphic test functions are rational
//! (`holofun`), and the contour functional calculus, double-layer jump
//! formula and balance operator S(phi, A) live in `cauchy`. On top of
//! those, `verify` runs randomized property campaigns for the lemma and
//! theorem bounds, and `search` maximizes the ratio ||f(A)|| / ||f||_W
//! with a derivative-free method.

pub mod cauchy;
pub mod error;
pub mod geometry;
pub mod holofun;
pub mod hull;
pub mod numrange;
pub mod search;
pub mod verify;

pub use error::{Error, Result};

/// Dense complex matrix used for all operators.
pub type CMat = nalgebra::DMatrix<num_complex::Complex64>;

/// The upper bound 1 + sqrt(2) on the spectral-set constant.
pub fn ratio_upper_bound() -> f64 {
    1.0 + std::f64::consts::SQRT_2
}
