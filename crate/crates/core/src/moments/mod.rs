//! First moments of the multiple point range and of the range, in any
//! dimension.
//!
//! With `h = h(0, d, z)` the closed-walk generating function,
//! `sum_w N_{2k}(w) z^|w| = z d/dz [(h / (1 + h))^k / k]` and
//! `sum_w ran(w) z^|w| = z d/dz log(1 + h)`. In one dimension
//! `h / (1 + h) = 1 - A`.

mod green;

pub use green::{
    bessel_i0_scaled, elliptic_k, gauss_legendre, green, return_constant, GreenMethod, GreenValue,
};

use std::f64::consts::PI;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};
use crate::genfun::ballot_tail;
use crate::pseries::{BaseSeries, Coefficient, TruncatedSeries};
use crate::walks::binomial;

/// `sum_w N_{2k}(w) z^|w|` on the line: `z d/dz [(1 - A)^k / k]`.
pub fn first_moment_series<C: Coefficient>(
    base: &BaseSeries<C>,
    k: usize,
) -> Result<TruncatedSeries<C>> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "multiplicities start at k = 1".into(),
        ));
    }
    Ok(base
        .one_minus_a()
        .pow(k as u32)
        .scale(&C::from_ratio(1, k as i64))
        .z_d_dz())
}

/// `sum_w ran(w) z^|w|` on the line: `z d/dz log(1 / A)`.
pub fn range_moment_series<C: Coefficient>(base: &BaseSeries<C>) -> Result<TruncatedSeries<C>> {
    Ok((-base.a().log()?).z_d_dz())
}

/// Numbers of closed walks of length `2n` on `Z^d`, `n = 0..=nmax`.
pub fn closed_walk_counts(nmax: usize, d: usize) -> Vec<BigUint> {
    let line: Vec<BigUint> = (0..=nmax).map(|n| binomial(2 * n, n)).collect();
    let mut counts = line.clone();
    for _ in 1..d {
        let mut next = vec![BigUint::zero(); nmax + 1];
        for (n, slot) in next.iter_mut().enumerate() {
            // choose which 2j of the 2n steps move along the new axis
            let mut row = BigUint::one();
            for j in 0..=n {
                *slot += &row * &line[j] * &counts[n - j];
                if j < n {
                    row = row * BigUint::from((2 * n - 2 * j) * (2 * n - 2 * j - 1))
                        / BigUint::from((2 * j + 1) * (2 * j + 2));
                }
            }
        }
        counts = next;
    }
    counts
}

fn mul_trunc(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Inverse of an integer series with constant term one.
fn inv_unit(a: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len()];
    out[0] = BigInt::one();
    for n in 1..a.len() {
        let mut acc = BigInt::zero();
        for i in 1..=n {
            acc -= &a[i] * &out[n - i];
        }
        out[n] = acc;
    }
    out
}

fn closed_series(nmax: usize, d: usize) -> Vec<BigInt> {
    closed_walk_counts(nmax, d)
        .into_iter()
        .map(BigInt::from)
        .collect()
}

fn check_nd(n: usize, d: usize) -> Result<()> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidArgument("n and d must be positive".into()));
    }
    Ok(())
}

/// `sum_w N_{2k}(w)` over the closed walks of length `2n` on `Z^d`, for
/// `n = 0..=nmax`.
pub fn first_moment_sums(nmax: usize, k: usize, d: usize) -> Result<Vec<BigInt>> {
    check_nd(nmax, d)?;
    if k == 0 {
        return Err(Error::InvalidArgument(
            "multiplicities start at k = 1".into(),
        ));
    }
    let len = nmax + 1;
    // h / (1 + h) = 1 - 1 / (1 + C(y)), C(y) = sum_n c_n y^n with c_0 = 1
    let mut u: Vec<BigInt> = inv_unit(&closed_series(nmax, d))
        .into_iter()
        .map(|c| -c)
        .collect();
    u[0] = BigInt::zero();
    let mut p = u.clone();
    for _ in 1..k {
        p = mul_trunc(&p, &u, len);
    }
    p.iter()
        .enumerate()
        .map(|(n, c)| {
            let (q, r) = (c * BigInt::from(2 * n)).div_rem(&BigInt::from(k));
            if !r.is_zero() {
                return Err(Error::RouteMismatch(format!(
                    "first moment at n = {n} not integral"
                )));
            }
            Ok(q)
        })
        .collect()
}

/// `sum_w ran(w)` over the closed walks of length `2n` on `Z^d`, for
/// `n = 0..=nmax`.
pub fn range_sums(nmax: usize, d: usize) -> Result<Vec<BigInt>> {
    check_nd(nmax, d)?;
    let c = closed_series(nmax, d);
    // 2 y d/dy log C(y)
    let dc: Vec<BigInt> = c
        .iter()
        .enumerate()
        .map(|(n, x)| x * BigInt::from(2 * n))
        .collect();
    Ok(mul_trunc(&dc, &inv_unit(&c), nmax + 1))
}

/// Exact `E_n(N_{2k})` on `Z^d`.
pub fn first_moment_exact(n: usize, k: usize, d: usize) -> Result<BigRational> {
    let sums = first_moment_sums(n, k, d)?;
    let total = BigInt::from(closed_walk_counts(n, d).swap_remove(n));
    Ok(BigRational::new(sums[n].clone(), total))
}

/// Exact `E_n(ran)` on `Z^d`.
pub fn range_mean_exact(n: usize, d: usize) -> Result<BigRational> {
    let sums = range_sums(n, d)?;
    let total = BigInt::from(closed_walk_counts(n, d).swap_remove(n));
    Ok(BigRational::new(sums[n].clone(), total))
}

/// Exact `E_n(ran^r)` on the line, from the range distribution in closed form.
pub fn range_power_moment(n: usize, r: u32) -> Result<BigRational> {
    check_nd(n, 1)?;
    let row: Vec<BigInt> = {
        let mut row = Vec::with_capacity(2 * n + 1);
        let mut c = BigInt::one();
        for j in 0..=2 * n {
            row.push(c.clone());
            c = c * BigInt::from(2 * n - j) / BigInt::from(j + 1);
        }
        row
    };
    // S_j = sum_{i >= 1} binomial(2n, n - ij)
    let tail = |j: usize| -> BigInt { (1..=n / j).map(|i| &row[n - i * j]).sum() };
    let tails: Vec<BigInt> = (0..=n + 2)
        .map(|j| if j == 0 { BigInt::zero() } else { tail(j) })
        .collect();
    let mut acc = BigInt::zero();
    for m in 2..=n + 1 {
        let t = |j: usize| BigInt::from(2 * j) * &tails[j];
        let count = t(m - 1) - t(m) * 2 + t(m + 1);
        acc += BigInt::from(m).pow(r) * count;
    }
    debug_assert_eq!(tails[1], ballot_tail(n, 1));
    Ok(BigRational::new(acc, row[n].clone()))
}

/// Leading large-`n` form of `E_n(N_{2k})` on `Z^d`.
pub fn asymptotic_first_moment(n: usize, k: usize, d: usize) -> Result<f64> {
    check_nd(n, d)?;
    if k == 0 {
        return Err(Error::InvalidArgument(
            "multiplicities start at k = 1".into(),
        ));
    }
    let nf = n as f64;
    Ok(match d {
        1 => 1.0,
        2 => 2.0 * nf * PI * PI / nf.ln().powi(2),
        _ => {
            let g = return_constant(d)?;
            2.0 * nf * g.powi(k as i32 - 1) / (1.0 + g).powi(k as i32 + 1)
        }
    })
}

/// Leading large-`n` form of `E_n(ran)` on `Z^d`.
pub fn asymptotic_range_mean(n: usize, d: usize) -> Result<f64> {
    check_nd(n, d)?;
    let nf = n as f64;
    Ok(match d {
        1 => (PI * nf).sqrt(),
        2 => 2.0 * nf * PI / nf.ln(),
        _ => 2.0 * nf / (1.0 + return_constant(d)?),
    })
}
