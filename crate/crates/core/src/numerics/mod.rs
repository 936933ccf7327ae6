//! Ball arithmetic, certified signs, determinants, quadrature and root
//! bracketing.

pub mod ball;
pub mod complex;
pub mod det;
pub mod quad;
pub mod real;
pub mod roots;
pub mod sign;

pub use ball::Ball;
pub use complex::ComplexBall;
pub use det::{ball_det, exact_det, real_det};
pub use quad::{quadrature_de, Domain, QuadratureConfig};
pub use real::Real;
pub use roots::solve_monotone;
pub use sign::{certified_sign, PrecisionPolicy, Sign, SignTag};
