//! Chebyshev-type polynomials of the first kind with endpoint point masses.
//!
//! The family `T_n^{(M,N)}` is built exactly over big rationals from the
//! classical `T_n`, converted to the Bernstein basis on `[0, 1]`, and
//! integrated in closed form against the Chebyshev weight. Floating point
//! only enters at evaluation and quadrature.

pub mod approx;
pub mod bernstein;
pub mod chebyshev;
pub mod diagnostics;
pub mod error;
pub mod exact;
pub mod gencheb;
pub mod integrals;
pub mod scalar;

pub use approx::{FitMeasure, FitResult, Fitted};
pub use bernstein::BernsteinPoly;
pub use chebyshev::{ChebSeries, MonomialPoly};
pub use diagnostics::DiagnosticsReport;
pub use error::{Error, Result};
pub use exact::ScaledPi;
pub use gencheb::{GenChebPoly, MassParams};
pub use integrals::{QuadratureRule, WeightedMeasure};
pub use scalar::{BigRational, Flavor, Scalar};
