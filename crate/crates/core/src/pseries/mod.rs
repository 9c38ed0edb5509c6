//! Truncated power series over an exact or a floating coefficient ring, and
//! the base series of the closed-walk problem on the line.
//!
//! ```
//! use num_rational::BigRational;
//! use walkrange::pseries::BaseSeries;
//!
//! let base = BaseSeries::<BigRational>::new(8);
//! let h0: Vec<f64> = base.h0().to_f64_vec();
//! assert_eq!(h0, vec![0.0, 0.0, 2.0, 0.0, 6.0, 0.0, 20.0, 0.0, 70.0]);
//! ```

mod base;
mod coeff;
mod poly;
mod series;

pub use base::{central_binomial_scaled, BaseSeries};
pub use coeff::{ratio_to_f64, Backend, Coefficient};
pub use poly::RatPoly;
pub use series::TruncatedSeries;

/// Exact series.
pub type ExactSeries = TruncatedSeries<num_rational::BigRational>;
/// Floating series in the scaled basis.
pub type FloatSeries = TruncatedSeries<f64>;
