use std::f64::consts::PI;

use nalgebra::{Complex, DMatrix, DVector};
use num_rational::BigRational;

use super::singular::{singular_distribution, SingularBasis};
use super::special::zeta;
use crate::error::{Error, Result};
use crate::genfun::{distribution, distribution_float, Blocks, IndexSpace};

/// Geometric tail law `Pr(N_{2k} = l) ~ sum_i alpha_i^l (theta0_i + l theta1_i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TailModel {
    pub rates: Vec<f64>,
    pub theta0: Vec<f64>,
    pub theta1: Vec<f64>,
}

impl TailModel {
    pub fn predict(&self, l: usize) -> f64 {
        self.rates
            .iter()
            .zip(&self.theta0)
            .zip(&self.theta1)
            .map(|((a, t0), t1)| a.powi(l as i32) * (t0 + l as f64 * t1))
            .sum()
    }
}

/// Tail law of the doublepoints in closed form:
/// `alpha = pi^2 / (24 + pi^2)` and the constants `theta0`, `theta1`.
pub fn doublepoint_tail() -> TailModel {
    let p2 = PI * PI;
    let z3 = zeta(3);
    let c = p2 / 3.0 - z3;
    let d = 1.0 + p2 / 24.0;
    let alpha = p2 / (24.0 + p2);
    let theta0 = 216.0 / PI.powi(6) * c * c / d
        * ((4.0 + p2 / 3.0) / c - (3.0 + p2 / 24.0) / (p2 / 6.0 * d) - 3.0 / (4.0 * d));
    let theta1 = 1296.0 / PI.powi(8) * (c / d).powi(2);
    TailModel {
        rates: vec![alpha],
        theta0: vec![theta0],
        theta1: vec![theta1],
    }
}

/// Coefficients of `n^{-j}`, `j = 0..=4`, of `Pr_n(N_2 = l)`, `l = 0, 1, 2`.
pub const SINGLEPOINT_COEFFICIENTS: [[(i64, i64); 5]; 3] = [
    [(1, 4), (-1, 4), (-1, 48), (13, 144), (421, 2880)],
    [(1, 2), (0, 1), (-5, 24), (-11, 36), (-511, 1440)],
    [(1, 4), (1, 4), (11, 48), (31, 144), (601, 2880)],
];

/// `Pr_n(N_2 = l)`, `l = 0, 1, 2`, from the expansions to order `n^{-4}`.
pub fn singlepoint_expansion(n: f64) -> [f64; 3] {
    SINGLEPOINT_COEFFICIENTS.map(|row| {
        row.iter()
            .enumerate()
            .map(|(j, &(a, b))| a as f64 / b as f64 * n.powi(-(j as i32)))
            .sum()
    })
}

/// The limiting rates `alpha_i(k) = mu_i / (1 + mu_i)` over the eigenvalues
/// `mu_i` of the transfer matrix `Q(k)` at the singular point, sorted by
/// decreasing modulus.
pub fn limiting_rates(k: usize) -> Result<Vec<Complex<f64>>> {
    if k < 2 {
        return Err(Error::InvalidArgument("rates exist for k >= 2".into()));
    }
    let basis = SingularBasis::new(0);
    let blocks = Blocks::new(&basis);
    let space = IndexSpace::new(k);
    let q = blocks.q(k, &space)?;
    let dim = space.dim();
    let m = DMatrix::from_fn(dim, dim, |i, j| q.entries[i][j].coeff(0).to_owned());
    let mut rates: Vec<Complex<f64>> = m
        .complex_eigenvalues()
        .iter()
        .map(|mu| mu / (Complex::new(1.0, 0.0) + mu))
        .filter(|a| a.norm() > 1e-12)
        .collect();
    rates.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
    Ok(rates)
}

/// Result of a Prony-type fit of a geometric tail.
#[derive(Clone, Debug, PartialEq)]
pub struct TailFit {
    /// Distinct rates of the recurrence, by decreasing modulus; each is a
    /// double root of the characteristic polynomial.
    pub rates: Vec<Complex<f64>>,
    /// Relative least-squares residual of the recurrence.
    pub residual: f64,
    pub first: usize,
    pub last: usize,
}

impl TailFit {
    /// The dominant rate, which is real.
    pub fn dominant(&self) -> f64 {
        self.rates[0].re
    }
}

/// Fit `y_l = sum_i alpha_i^l (a_i + l b_i)` with `count` rates to
/// `y[first..=last]` by a least-squares linear recurrence of order
/// `2 count`, returning the rates.
pub fn prony_fit(
    y: &[f64],
    first: usize,
    last: usize,
    count: usize,
    tolerance: f64,
) -> Result<TailFit> {
    let p = 2 * count;
    if count == 0 || last >= y.len() || last < first + 2 * p {
        return Err(Error::InvalidArgument(format!(
            "a fit of {count} rates needs at least {} samples",
            2 * p + 1
        )));
    }
    let rows = last - first + 1 - p;
    // weights flatten the geometric decay of the samples
    let scale: Vec<f64> = (0..rows)
        .map(|r| 1.0 / y[first + r].abs().max(1e-300))
        .collect();
    let lhs = DMatrix::from_fn(rows, p, |r, j| y[first + r + j] * scale[r]);
    let rhs = DVector::from_fn(rows, |r, _| -y[first + r + p] * scale[r]);
    let svd = lhs.clone().svd(true, true);
    let coef = svd
        .solve(&rhs, 1e-14)
        .map_err(|e| Error::IllConditioned(e.to_string()))?;
    let residual = (&lhs * &coef - &rhs).norm() / rhs.norm();
    if !residual.is_finite() || residual > tolerance {
        return Err(Error::IllConditioned(format!(
            "recurrence residual {residual:.3e} exceeds {tolerance:.1e}"
        )));
    }
    // companion matrix of x^p + c_{p-1} x^{p-1} + ... + c_0
    let companion = DMatrix::from_fn(p, p, |i, j| {
        if i == 0 {
            -coef[p - 1 - j]
        } else if j + 1 == i {
            1.0
        } else {
            0.0
        }
    });
    let mut roots: Vec<Complex<f64>> = companion.complex_eigenvalues().iter().copied().collect();
    roots.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
    // merge the near-coincident pairs of each double root
    let mut rates = Vec::new();
    let mut used = vec![false; roots.len()];
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let partner = (0..roots.len()).filter(|&j| !used[j]).min_by(|&a, &b| {
            (roots[a] - roots[i])
                .norm()
                .total_cmp(&(roots[b] - roots[i]).norm())
        });
        match partner {
            Some(j) => {
                used[j] = true;
                rates.push((roots[i] + roots[j]) * 0.5);
            }
            None => rates.push(roots[i]),
        }
    }
    rates.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
    Ok(TailFit {
        rates,
        residual,
        first,
        last,
    })
}

/// Where the tail probabilities of a fit come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TailSource {
    /// The limit `n -> infinity`, from the singular expansion.
    Limit,
    /// Finite `n`, from the float `z`-series.
    Finite(usize),
}

/// Recover the dominant tail rates of `N_{2k}` by a Prony fit over
/// `l = first..=last`, with `k - 1` rates.
pub fn tail_rate_fit(k: usize, source: TailSource, first: usize, last: usize) -> Result<TailFit> {
    if k < 2 {
        return Err(Error::InvalidArgument("rates exist for k >= 2".into()));
    }
    let y: Vec<f64> = match source {
        TailSource::Limit => {
            let d = singular_distribution(k, last, 1)?;
            (0..=last).map(|l| d.limit(l)).collect()
        }
        TailSource::Finite(n) => distribution_float(n, k, last)?.probabilities,
    };
    let tolerance = match source {
        TailSource::Limit => 1e-8,
        TailSource::Finite(_) => 1e-5,
    };
    let count = (k - 1).min((last - first) / 4).max(1);
    prony_fit(&y, first, last, count, tolerance)
}

/// Limit estimate from Richardson extrapolation in `1/n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Extrapolation {
    pub value: f64,
    /// Difference between the last two extrapolation levels.
    pub error: f64,
}

/// Polynomial extrapolation in `h = 1/n` of `(n, value)` samples to `h = 0`.
pub fn richardson(samples: &[(f64, f64)]) -> Result<Extrapolation> {
    if samples.len() < 2 {
        return Err(Error::InvalidArgument(
            "extrapolation needs two samples".into(),
        ));
    }
    let h: Vec<f64> = samples.iter().map(|&(n, _)| 1.0 / n).collect();
    let mut t: Vec<f64> = samples.iter().map(|&(_, v)| v).collect();
    let mut prev = t[t.len() - 1];
    let m = t.len();
    for level in 1..m {
        prev = t[m - 1];
        for i in (level..m).rev() {
            t[i] = (h[i - level] * t[i] - h[i] * t[i - 1]) / (h[i - level] - h[i]);
        }
    }
    Ok(Extrapolation {
        value: t[m - 1],
        error: (t[m - 1] - prev).abs(),
    })
}

/// `lim_n Pr_n(N_{2k} = l)` by 4-point Richardson extrapolation of the exact
/// probabilities at `n, n/2, n/4, n/8`.
pub fn extrapolate_probability(k: usize, l: usize, n: usize) -> Result<Extrapolation> {
    if n < 8 {
        return Err(Error::InvalidArgument(
            "extrapolation grid needs n >= 8".into(),
        ));
    }
    let samples: Vec<(f64, f64)> = [n / 8, n / 4, n / 2, n]
        .iter()
        .map(|&m| {
            let d = distribution(m, k, l)?;
            let p = crate::pseries::ratio_to_f64(&BigRational::new(
                d.counts[l].clone(),
                d.total.clone(),
            ));
            Ok((m as f64, p))
        })
        .collect::<Result<_>>()?;
    richardson(&samples)
}
