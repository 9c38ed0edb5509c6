use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use super::special::{hurwitz_zeta, xi};
use crate::error::{Error, Result};
use crate::pseries::ratio_to_f64;
use crate::walks::binomial;

/// Rational weights `w_p` with
/// `lim_n E_n(N_{2k1} N_{2k2}) = [k1 = k2] + 1/2 + sum_p w_p zeta(p)`.
///
/// From `2 sum_{r1,r2} binomial(k1-1,r1-1) binomial(k2-1,r2-1) (-1)^R binomial(R,r1) 2^{-R}
///  ((k1+k2-R)/R zeta(R) + [R > 2] (binomial(r1,2) + binomial(r2,2)) / binomial(R,2) zeta(R-1))`,
/// `R = r1 + r2`.
pub fn second_moment_weights(k1: usize, k2: usize) -> BTreeMap<usize, BigRational> {
    let big = |n: usize, k: usize| BigInt::from(binomial(n, k));
    let mut w: BTreeMap<usize, BigRational> = BTreeMap::new();
    for r1 in 1..=k1 {
        for r2 in 1..=k2 {
            let r = r1 + r2;
            let sign = if r % 2 == 0 { 1 } else { -1 };
            let c = BigRational::new(
                big(k1 - 1, r1 - 1) * big(k2 - 1, r2 - 1) * big(r, r1) * sign * 2,
                BigInt::from(2).pow(r as u32),
            );
            let a = BigRational::new(BigInt::from(k1 + k2 - r), BigInt::from(r));
            *w.entry(r).or_insert_with(BigRational::zero) += &c * a;
            if r > 2 {
                let b = BigRational::new(big(r1, 2) + big(r2, 2), big(r, 2));
                *w.entry(r - 1).or_insert_with(BigRational::zero) += c * b;
            }
        }
    }
    w.retain(|_, v| !v.is_zero());
    w
}

/// `lim_n E_n(N_{2k1} N_{2k2})`.
///
/// The weights alternate and grow like `4^k`, so the zeta values are not
/// combined in floating point. Instead `sum_p w_p m^{-p}` is summed exactly
/// for `m < 64`, and the remainder `sum_p w_p zeta(p, 64)` carries only
/// terms damped by `64^{-p}`.
pub fn second_moment_limit(k1: usize, k2: usize) -> Result<f64> {
    if k1 == 0 || k2 == 0 {
        return Err(Error::InvalidArgument(
            "multiplicities start at k = 1".into(),
        ));
    }
    const SPLIT: usize = 64;
    let w = second_moment_weights(k1, k2);
    let mut head = BigRational::zero();
    for m in 1..SPLIT {
        let inv = BigRational::new(BigInt::one(), BigInt::from(m));
        let mut acc = BigRational::zero();
        let mut power = BigRational::one();
        let mut last = 0;
        for (&p, c) in &w {
            while last < p {
                power *= &inv;
                last += 1;
            }
            acc += c * &power;
        }
        head += acc;
    }
    let mut tail = 0.0;
    for (&p, c) in &w {
        tail += ratio_to_f64(c) * hurwitz_zeta(p as f64, SPLIT as f64)?;
    }
    let delta = if k1 == k2 { 1.0 } else { 0.0 };
    Ok(delta + 0.5 + ratio_to_f64(&head) + tail)
}

/// `lim_n (E_n(N_{2k1} N_{2k2}) - E_n(N_{2k1}) E_n(N_{2k2}))`; both first
/// moments tend to one.
pub fn covariance_limit(k1: usize, k2: usize) -> Result<f64> {
    Ok(second_moment_limit(k1, k2)? - 1.0)
}

/// `lim_n E_n(ran^r) / E_n(ran)^r = xi(r)`.
pub fn range_moment_limit(r: u32) -> Result<f64> {
    if r < 2 {
        return Err(Error::InvalidArgument("range moments need r >= 2".into()));
    }
    Ok(xi(r))
}
