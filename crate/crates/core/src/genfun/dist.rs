use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::blocks::Blocks;
use super::closed::{doublepoint_series, range_count, range_series, singlepoint_series};
use super::joint::{
    counts_from_genfun, exhaustive_bounds, joint_genfun, mixed_moment_series, u_expansion,
};
use crate::error::{Error, Result};
use crate::pseries::{central_binomial_scaled, ratio_to_f64, BaseSeries, TruncatedSeries};
use crate::walks::binomial;

/// Exact distribution of `N_{2k}` over closed walks of length `2n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    pub n: usize,
    pub k: usize,
    /// `counts[l]`: walks with `N_{2k} = l`.
    pub counts: Vec<BigInt>,
    /// Walks with `N_{2k} > lmax`.
    pub tail: BigInt,
    /// `binomial(2n, n)`.
    pub total: BigInt,
}

impl Distribution {
    pub fn probabilities(&self) -> Vec<f64> {
        self.counts
            .iter()
            .map(|c| ratio_to_f64(&BigRational::new(c.clone(), self.total.clone())))
            .collect()
    }

    pub fn tail_probability(&self) -> f64 {
        ratio_to_f64(&BigRational::new(self.tail.clone(), self.total.clone()))
    }
}

/// Floating-point distribution of `N_{2k}`, from the scaled float backend.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatDistribution {
    pub n: usize,
    pub k: usize,
    pub probabilities: Vec<f64>,
    pub tail: f64,
}

fn check_nk(n: usize, k: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    if k == 0 {
        return Err(Error::InvalidArgument(
            "multiplicities start at k = 1".into(),
        ));
    }
    Ok(())
}

fn coefficient_at(series: &TruncatedSeries<BigRational>, m: usize) -> Result<BigInt> {
    let c = series.coeff(m);
    if !c.is_integer() {
        return Err(Error::RouteMismatch(format!(
            "non-integral coefficient {c}"
        )));
    }
    Ok(c.to_integer())
}

/// Exact distribution of `N_{2k}` at length `2n` for `l = 0..=lmax`.
///
/// The counts come from the joint generating function by binomial
/// inversion. For `k <= 2` they are recomputed from the specialized closed
/// forms and a disagreement is reported as [`Error::RouteMismatch`].
pub fn distribution(n: usize, k: usize, lmax: usize) -> Result<Distribution> {
    check_nk(n, k)?;
    let order = 2 * n;
    let base = BaseSeries::<BigRational>::new(order);
    let blocks = Blocks::new(&base);
    let ms = joint_genfun(&blocks, &[k], &exhaustive_bounds(&[k], order))?;
    let by_value = counts_from_genfun(&ms, n)?;
    let total = BigInt::from(binomial(2 * n, n));
    let mut counts = vec![BigInt::zero(); lmax + 1];
    for (key, c) in &by_value {
        if let Some(slot) = counts.get_mut(key[0] as usize) {
            *slot = c.clone();
        }
    }
    let tail = &total - counts.iter().sum::<BigInt>();

    let closed: Option<Vec<TruncatedSeries<BigRational>>> = match k {
        1 => Some(singlepoint_series(&base).to_vec()),
        2 => Some(doublepoint_series(&base, lmax).0),
        _ => None,
    };
    if let Some(series) = closed {
        for (l, s) in series.iter().enumerate().take(lmax + 1) {
            let c = coefficient_at(s, order)?;
            if c != counts[l] {
                return Err(Error::RouteMismatch(format!(
                    "N{} = {l} at n = {n}: general {} closed form {c}",
                    2 * k,
                    counts[l]
                )));
            }
        }
    }
    Ok(Distribution {
        n,
        k,
        counts,
        tail,
        total,
    })
}

/// Float distribution of `N_{2k}` at length `2n`, expanding directly in
/// `u = 1 + t` over the scaled float backend.
///
/// Cancellation grows with `k` and `n`; the float route is reliable for
/// `k <= 2` up to a few thousand steps.
pub fn distribution_float(n: usize, k: usize, lmax: usize) -> Result<FloatDistribution> {
    check_nk(n, k)?;
    let order = 2 * n;
    let base = BaseSeries::<f64>::new(order);
    let blocks = Blocks::new(&base);
    let (coeffs, rest) = u_expansion(&blocks, k, lmax)?;
    let central: f64 = central_binomial_scaled(n);
    let scale = order as f64 / central;
    let probabilities = coeffs.iter().map(|s| s.coeff(order) * scale).collect();
    for s in &coeffs {
        s.check_finite()?;
    }
    Ok(FloatDistribution {
        n,
        k,
        probabilities,
        tail: rest.coeff(order) * scale,
    })
}

/// The same float distribution on a common base for several lengths.
pub fn distribution_float_many(
    ns: &[usize],
    k: usize,
    lmax: usize,
) -> Result<Vec<FloatDistribution>> {
    let nmax = *ns
        .iter()
        .max()
        .ok_or_else(|| Error::InvalidArgument("no lengths".into()))?;
    check_nk(nmax, k)?;
    let base = BaseSeries::<f64>::new(2 * nmax);
    let blocks = Blocks::new(&base);
    let (coeffs, rest) = u_expansion(&blocks, k, lmax)?;
    ns.iter()
        .map(|&n| {
            check_nk(n, k)?;
            let central: f64 = central_binomial_scaled(n);
            let scale = (2 * n) as f64 / central;
            Ok(FloatDistribution {
                n,
                k,
                probabilities: coeffs.iter().map(|s| s.coeff(2 * n) * scale).collect(),
                tail: rest.coeff(2 * n) * scale,
            })
        })
        .collect()
}

/// Exact joint counts of the tracked `N_{2k}` at every length `2n`,
/// `n = 1..=nmax`; entry `n - 1` maps value vectors to numbers of walks.
pub fn joint_counts(nmax: usize, tracked: &[usize]) -> Result<Vec<BTreeMap<Vec<u64>, BigInt>>> {
    check_nk(nmax, 1)?;
    let order = 2 * nmax;
    let base = BaseSeries::<BigRational>::new(order);
    let blocks = Blocks::new(&base);
    let ms = joint_genfun(&blocks, tracked, &exhaustive_bounds(tracked, order))?;
    (1..=nmax).map(|n| counts_from_genfun(&ms, n)).collect()
}

/// Exact distribution of the range at length `2n`.
#[derive(Clone, Debug, PartialEq)]
pub struct RangeDistribution {
    pub n: usize,
    /// `(m, walks with range m)` for `m = 2..=mmax`.
    pub counts: Vec<(usize, BigInt)>,
    /// Walks with range above `mmax`.
    pub tail: BigInt,
    pub total: BigInt,
}

/// Exact range distribution from the logarithmic range generating
/// functions, checked against their closed-form coefficients.
pub fn range_distribution(n: usize, mmax: usize) -> Result<RangeDistribution> {
    check_nk(n, 1)?;
    let order = 2 * n;
    let base = BaseSeries::<BigRational>::new(order);
    let total = BigInt::from(binomial(2 * n, n));
    let mut counts = Vec::new();
    for m in 2..=mmax {
        let c = if m <= n + 1 {
            coefficient_at(&range_series(&base, m)?, order)?
        } else {
            BigInt::zero()
        };
        let check = range_count(n, m);
        if c != check {
            return Err(Error::RouteMismatch(format!(
                "range {m} at n = {n}: series {c} closed form {check}"
            )));
        }
        counts.push((m, c));
    }
    let tail = &total - counts.iter().map(|(_, c)| c).sum::<BigInt>();
    Ok(RangeDistribution {
        n,
        counts,
        tail,
        total,
    })
}

/// Exact binomial moment `sum_w prod_i binomial(N_{2k_i}(w), m_i)` over
/// closed walks of length `2n`, for `spec = [(k_i, m_i)]` of depth at most 4.
pub fn mixed_moment(spec: &[(usize, usize)], n: usize) -> Result<BigInt> {
    check_nk(n, 1)?;
    let base = BaseSeries::<BigRational>::new(2 * n);
    let blocks = Blocks::new(&base);
    coefficient_at(&mixed_moment_series(&blocks, spec)?, 2 * n)
}

/// Float binomial moment divided by `binomial(2n, n)`.
pub fn mixed_moment_float(spec: &[(usize, usize)], n: usize) -> Result<f64> {
    check_nk(n, 1)?;
    let base = BaseSeries::<f64>::new(2 * n);
    let blocks = Blocks::new(&base);
    let s = mixed_moment_series(&blocks, spec)?;
    s.check_finite()?;
    let central: f64 = central_binomial_scaled(n);
    Ok(s.coeff(2 * n) / central)
}
