//! Generating functions for the multiple-point range of one-dimensional
//! closed walks.
//!
//! The joint generating function of the `N_{2k}` is assembled from the
//! blocks `G`, `H`, `T0`, `T1`, `T2`, `Psi`, `Phi` and `Q` over a
//! [`LambertBasis`], and specializes to closed forms for `N_2` and `N_4`.
//!
//! ```
//! use walkrange::genfun::distribution;
//! let d = distribution(2, 2, 2).unwrap();
//! assert_eq!(d.counts, vec![0.into(), 4.into(), 2.into()]);
//! ```

mod basis;
mod blocks;
mod closed;
mod dist;
mod joint;
mod marked;

pub use basis::LambertBasis;
pub use blocks::{Blocks, IndexSpace, QOperator};
pub use closed::{
    ballot_tail, doublepoint_series, range_count, range_series, singlepoint_series, vertex_factor,
    vertex_factor_series, vertex_factor_unsummed,
};
pub use dist::{
    distribution, distribution_float, distribution_float_many, joint_counts, mixed_moment,
    mixed_moment_float, range_distribution, Distribution, FloatDistribution, RangeDistribution,
};
pub use joint::{
    binomial_inversion, counts_from_genfun, exhaustive_bounds, joint_genfun, mixed_moment_series,
    u_expansion,
};
pub use marked::MarkedSeries;
