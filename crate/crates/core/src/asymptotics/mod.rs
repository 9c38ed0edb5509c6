//! Large-`n` behaviour of the one-dimensional distributions.
//!
//! Every building block of the generating functions is a Lambert sum whose
//! singular behaviour at `z = 1/2` follows from the Euler-Maclaurin
//! expansion of `g_k = A^{k+1} sum_f f^k b^f/(1 - b^f)`. [`SingularBasis`]
//! realizes the blocks as power series in `A = sqrt(1 - 4z^2)`; the odd
//! powers of `A` determine the coefficient asymptotics. On top of this the
//! module provides the explicit limits (doublepoint tail law, covariances,
//! range moments) and empirical rate fits.

mod second;
mod singular;
mod special;
mod tail;

pub use second::{
    covariance_limit, range_moment_limit, second_moment_limit, second_moment_weights,
};
pub use singular::{
    em_expansion, g_direct, odd_power_weight, odd_power_weight_expansion, singular_distribution,
    singular_parts, EMExpansion, SingularBasis, SingularDistribution,
};
pub use special::{bernoulli, gamma_half, hurwitz_zeta, xi, zeta};
pub use tail::{
    doublepoint_tail, extrapolate_probability, limiting_rates, prony_fit, richardson,
    singlepoint_expansion, tail_rate_fit, Extrapolation, TailFit, TailModel, TailSource,
    SINGLEPOINT_COEFFICIENTS,
};
