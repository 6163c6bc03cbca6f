//! Precision control, scalar backends, complex arithmetic, quadrature and
//! bracketing root refinement.

pub mod complex;
pub mod precision;
pub mod quadrature;
pub mod real;
pub mod roots;

pub use complex::{complex_hyp_trig, Complex, HypKind, ScaledComplex};
pub use precision::{PrecisionContext, PrecisionMode};
pub use quadrature::{integrate, integrate_real, Integral, QuadratureSpec};
pub use real::{BigReal, Real};
