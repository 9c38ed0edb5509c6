use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::pseries::ratio_to_f64;

fn bernoulli_cache() -> &'static Mutex<Vec<BigRational>> {
    static CACHE: OnceLock<Mutex<Vec<BigRational>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![BigRational::one()]))
}

/// Bernoulli number `B_j` (`B_1 = -1/2`), exact.
pub fn bernoulli(j: usize) -> BigRational {
    let mut cache = bernoulli_cache().lock().unwrap();
    while cache.len() <= j {
        // sum_{i=0}^{m} binomial(m+1, i) B_i = 0
        let m = cache.len();
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one();
        for (i, b) in cache.iter().enumerate() {
            acc += BigRational::from_integer(binom.clone()) * b;
            binom = binom * BigInt::from(m + 1 - i) / BigInt::from(i + 1);
        }
        let next = -acc / BigRational::from_integer(BigInt::from(m + 1));
        cache.push(next);
    }
    cache[j].clone()
}

/// `B_{2j} / (2j)!` for `j = 1..=count`, as floats.
fn bernoulli_over_factorial(count: usize) -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut fact = BigInt::one();
        let mut out = Vec::new();
        for j in 1..=12usize {
            fact = fact * BigInt::from(2 * j - 1) * BigInt::from(2 * j);
            out.push(ratio_to_f64(
                &(bernoulli(2 * j) / BigRational::from_integer(fact.clone())),
            ));
        }
        out
    });
    &table[..count.min(table.len())]
}

/// Hurwitz zeta `sum_{m >= 0} (m + a)^{-s}` for real `s > 1`, `a > 0`.
///
/// Terms below `a + 16` are summed directly, the rest by Euler-Maclaurin.
pub fn hurwitz_zeta(s: f64, a: f64) -> Result<f64> {
    if !(s > 1.0 && a > 0.0) {
        return Err(Error::Domain(format!(
            "hurwitz zeta needs s > 1 and a > 0, got s = {s}, a = {a}"
        )));
    }
    let mut direct = 0.0;
    let mut x = a;
    while x < 16.0 {
        direct += x.powf(-s);
        x += 1.0;
    }
    let mut tail = x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s);
    // + sum_j B_{2j}/(2j)! s (s+1) ... (s+2j-2) x^{-s-2j+1}
    let mut rising = s;
    let mut power = x.powf(-s - 1.0);
    for (j, b) in bernoulli_over_factorial(12).iter().enumerate() {
        let term = b * rising * power;
        tail += term;
        if term.abs() < 1e-18 * tail.abs() {
            break;
        }
        let j = j as f64 + 1.0;
        rising *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
        power /= x * x;
    }
    Ok(direct + tail)
}

/// Riemann zeta at integer `s >= 2`.
pub fn zeta(s: u32) -> f64 {
    assert!(s >= 2, "zeta at s = {s}");
    hurwitz_zeta(s as f64, 1.0).expect("s >= 2")
}

/// `Gamma(r / 2)` for integer `r >= 1`.
pub fn gamma_half(r: u32) -> f64 {
    assert!(r >= 1);
    if r.is_multiple_of(2) {
        (1..r / 2).map(f64::from).product()
    } else {
        // Gamma(m + 1/2) = sqrt(pi) prod_{i<m} (i + 1/2)
        let m = (r - 1) / 2;
        PI.sqrt() * (0..m).map(|i| i as f64 + 0.5).product::<f64>()
    }
}

/// Riemann's `xi(r) = r (r - 1) zeta(r) Gamma(r/2) pi^{-r/2}`.
pub fn xi(r: u32) -> f64 {
    let rf = f64::from(r);
    rf * (rf - 1.0) * zeta(r) * gamma_half(r) * PI.powf(-rf / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Borwein's acceleration of the alternating eta series.
    fn zeta_by_eta(s: u32) -> f64 {
        let n = 40usize;
        let mut d = Vec::with_capacity(n + 1);
        let (mut t, mut acc) = (1.0f64, 0.0f64);
        for i in 0..=n {
            if i > 0 {
                t *= 4.0 * (n + i - 1) as f64 * (n - i + 1) as f64 / ((2 * i - 1) * 2 * i) as f64;
            }
            acc += t;
            d.push(acc);
        }
        let mut eta = 0.0;
        for k in 0..n {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            eta -= sign * (d[k] - d[n]) / ((k + 1) as f64).powi(s as i32);
        }
        eta / d[n] / (1.0 - 2f64.powi(1 - s as i32))
    }

    #[test]
    fn bernoulli_numbers() {
        let q = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        assert_eq!(bernoulli(1), q(-1, 2));
        assert_eq!(bernoulli(2), q(1, 6));
        assert_eq!(bernoulli(3), q(0, 1));
        assert_eq!(bernoulli(12), q(-691, 2730));
    }

    #[test]
    fn zeta_values() {
        assert!((zeta(2) - PI * PI / 6.0).abs() < 1e-15);
        assert!((zeta(4) - PI.powi(4) / 90.0).abs() < 1e-15);
        assert!((zeta(3) - 1.2020569031595943).abs() < 1e-15);
        for s in 2..=12 {
            assert!((zeta(s) - zeta_by_eta(s)).abs() < 1e-14, "s = {s}");
        }
        assert!((zeta(80) - 1.0).abs() < 1e-24 + 1e-15);
    }

    #[test]
    fn hurwitz_shift() {
        let a = hurwitz_zeta(3.0, 1.0).unwrap();
        let b = hurwitz_zeta(3.0, 4.0).unwrap();
        assert!((a - b - (1.0 + 1.0 / 8.0 + 1.0 / 27.0)).abs() < 1e-15);
    }

    #[test]
    fn xi_values() {
        assert!((xi(2) - PI / 3.0).abs() < 1e-15);
        assert!((xi(3) - 1.14788).abs() < 5e-6);
        assert!((gamma_half(5) - 0.75 * PI.sqrt()).abs() < 1e-15);
    }
}
