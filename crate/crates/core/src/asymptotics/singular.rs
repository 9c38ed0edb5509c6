use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::special::{bernoulli, zeta};
use crate::error::{Error, Result};
use crate::genfun::{u_expansion, Blocks, LambertBasis};
use crate::pseries::{ratio_to_f64, Coefficient, RatPoly, TruncatedSeries};

type Exact = TruncatedSeries<BigRational>;

fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// `s / A` with `s = -ln b = 2 artanh(A)`, as a series in `A`.
fn s_over_a(order: usize) -> Exact {
    TruncatedSeries::new(
        (0..=order)
            .map(|i| {
                if i % 2 == 0 {
                    q(2, i as i64 + 1)
                } else {
                    BigRational::zero()
                }
            })
            .collect(),
    )
}

/// `g_m = A^{m+1} sum_{f >= 1} f^m b^f / (1 - b^f)`, `b = (1 - A)/(1 + A)`,
/// expanded in powers of `A`, split as `zeta(m+1) P + R` with rational
/// series `P`, `R`.
///
/// Euler-Maclaurin summation of the trapezoidal sum gives
/// `g_m = m! zeta(m+1) (A/s)^{m+1} - [m = 1] A^2 / (2s)
///  - sum_{2j >= m} B_{2j} B_{2j-m} / (2j (2j-m)!) A^{2j} (s/A)^{2j-m-1}`.
pub fn singular_parts(m: usize, order: usize) -> (Exact, Exact) {
    assert!(m >= 1);
    let sa = s_over_a(order);
    let as_ = sa.inverse().expect("s/A starts with 2");
    let zeta_part = as_
        .pow(m as u32 + 1)
        .scale(&BigRational::from_integer(factorial(m)));
    let mut rest = TruncatedSeries::zero(order);
    if m == 1 {
        rest -= &as_.shift(1).scale(&q(1, 2));
    }
    let mut j = 1;
    while 2 * j <= order {
        if 2 * j >= m {
            let e = 2 * j as i64 - m as i64 - 1;
            let base = if e >= 0 {
                sa.pow(e as u32)
            } else {
                as_.pow((-e) as u32)
            };
            let c = bernoulli(2 * j) * bernoulli(2 * j - m)
                / BigRational::from_integer(BigInt::from(2 * j) * factorial(2 * j - m));
            rest -= &base.shift(2 * j).scale(&c);
        }
        j += 1;
    }
    (zeta_part, rest)
}

/// Expansion of `g_k` at the singular point `A = sqrt(1 - varsigma) = 0`:
/// `g_k = constant - sum_l lambda_l A^{2l} - [k = 1] A (1/4 + sum_l lambda~_l A^{2l}) + ...`.
#[derive(Clone, Debug, PartialEq)]
pub struct EMExpansion {
    pub k: usize,
    pub order: usize,
    /// `k! zeta(k+1) / 2^{k+1}`.
    pub constant: f64,
    /// `lambda_l`, `l = 1..=order`.
    pub lambda: Vec<f64>,
    /// `lambda~_l`, `l = 1..=order`; empty unless `k = 1`.
    pub lambda_tilde: Vec<f64>,
    /// Coefficient `i` of `A^i` is `zeta(k+1) zeta_part[i] + rational_part[i]`.
    pub zeta_part: Vec<BigRational>,
    pub rational_part: Vec<BigRational>,
}

impl EMExpansion {
    /// Value of the truncated expansion at `varsigma`.
    pub fn eval(&self, varsigma: f64) -> f64 {
        let a = (1.0 - varsigma).sqrt();
        let u = 1.0 - varsigma;
        let mut v = self.constant;
        for (l, lam) in self.lambda.iter().enumerate() {
            v -= lam * u.powi(l as i32 + 1);
        }
        if self.k == 1 {
            let mut odd = 0.25;
            for (l, lam) in self.lambda_tilde.iter().enumerate() {
                odd += lam * u.powi(l as i32 + 1);
            }
            v -= a * odd;
        }
        v
    }
}

/// Constants of the singular expansion of `g_k` to order `M`.
pub fn em_expansion(k: usize, order: usize) -> Result<EMExpansion> {
    if k == 0 || order == 0 {
        return Err(Error::InvalidArgument(
            "em_expansion needs k >= 1 and M >= 1".into(),
        ));
    }
    let (p, r) = singular_parts(k, 2 * order + 1);
    let z = zeta(k as u32 + 1);
    let gamma: Vec<f64> = (0..=2 * order + 1)
        .map(|i| z * ratio_to_f64(p.coeff(i)) + ratio_to_f64(r.coeff(i)))
        .collect();
    let lambda = (1..=order).map(|l| -gamma[2 * l]).collect();
    let lambda_tilde = if k == 1 {
        (1..=order).map(|l| -gamma[2 * l + 1]).collect()
    } else {
        Vec::new()
    };
    Ok(EMExpansion {
        k,
        order,
        constant: gamma[0],
        lambda,
        lambda_tilde,
        zeta_part: p.into_coeffs(),
        rational_part: r.into_coeffs(),
    })
}

/// `g_k(varsigma)` by direct summation, for `0 <= varsigma < 1`.
pub fn g_direct(k: usize, varsigma: f64) -> f64 {
    let a = (1.0 - varsigma).sqrt();
    let b = (1.0 - a) / (1.0 + a);
    let mut sum = 0.0;
    let mut bf = 1.0;
    for f in 1.. {
        bf *= b;
        let term = (f as f64).powi(k as i32) * bf / (1.0 - bf);
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
    }
    a.powi(k as i32 + 1) * sum
}

/// Lambert sums realized as power series in `A` around the singular point
/// `A = 0` (`z = 1/2`), where every building block has an expansion in
/// powers of `A`.
///
/// Building the generating functions over this basis instead of over the
/// `z`-series gives their singular expansions, from which the large-`n`
/// asymptotics of all coefficients follow.
pub struct SingularBasis {
    order: usize,
    g: Mutex<HashMap<usize, TruncatedSeries<f64>>>,
}

impl SingularBasis {
    pub fn new(order: usize) -> Self {
        Self {
            order,
            g: Mutex::new(HashMap::new()),
        }
    }

    /// `g_m` as a float series in `A`.
    pub fn g(&self, m: usize) -> TruncatedSeries<f64> {
        if let Some(s) = self.g.lock().unwrap().get(&m) {
            return s.clone();
        }
        let (p, r) = singular_parts(m, self.order);
        let z = zeta(m as u32 + 1);
        let s = TruncatedSeries::new(
            (0..=self.order)
                .map(|i| z * ratio_to_f64(p.coeff(i)) + ratio_to_f64(r.coeff(i)))
                .collect(),
        );
        self.g.lock().unwrap().insert(m, s.clone());
        s
    }
}

impl LambertBasis for SingularBasis {
    type C = f64;

    fn order(&self) -> usize {
        self.order
    }

    fn a(&self) -> TruncatedSeries<f64> {
        TruncatedSeries::monomial(1.0, 1, self.order)
    }

    /// `A^a sum_f p(f) x^f/(1 - x^f) = sum_m p_m A^{a-m-1} g_m`.
    fn lambert(&self, p: &RatPoly, a_power: usize) -> Result<TruncatedSeries<f64>> {
        if !p.coeff(0).is_zero() {
            return Err(Error::Domain(
                "a constant weight has a logarithmic singularity".into(),
            ));
        }
        let mut acc = TruncatedSeries::zero(self.order);
        for (m, c) in p.coeffs().iter().enumerate().skip(1) {
            if c.is_zero() {
                continue;
            }
            if a_power < m + 1 {
                return Err(Error::Domain(format!(
                    "negative power of A for weight degree {m}"
                )));
            }
            acc += &self
                .g(m)
                .shift(a_power - m - 1)
                .scale(&f64::from_bigrational(c));
        }
        Ok(acc)
    }

    fn t0(&self) -> Result<TruncatedSeries<f64>> {
        let one_plus_a = &TruncatedSeries::one(self.order) + &self.a();
        let mut t = -one_plus_a.log()?;
        t += &TruncatedSeries::one(self.order).scale(&std::f64::consts::LN_2);
        Ok(t)
    }
}

/// Singular expansion of the distribution of `N_{2k}`: the series `F_l` in
/// powers of `A` with `sum_w u^{N_{2k}(w)} z^|w| = z d/dz sum_l u^l F_l`.
#[derive(Clone, Debug)]
pub struct SingularDistribution {
    pub k: usize,
    pub coeffs: Vec<TruncatedSeries<f64>>,
    pub rest: TruncatedSeries<f64>,
}

/// `r_m(n) = 2n [z^{2n}] A^{2m+1} / binomial(2n, n)
///  = 2n prod_{i=0}^{m} -(i + 1/2) / (n - i - 1/2)`.
pub fn odd_power_weight(m: usize, n: f64) -> f64 {
    let mut r = 2.0 * n;
    for i in 0..=m {
        let h = i as f64 + 0.5;
        r *= -h / (n - h);
    }
    r
}

/// Coefficients of `n^{-j}`, `j = 0..terms`, in the expansion of `r_m(n)`.
pub fn odd_power_weight_expansion(m: usize, terms: usize) -> Vec<f64> {
    // 2 (-1)^{m+1} prod h_i n^{-m} prod (1 - h_i / n)^{-1}
    let mut poly = vec![0.0; terms];
    if m < terms {
        poly[m] = 2.0
            * if m.is_multiple_of(2) { -1.0 } else { 1.0 }
            * (0..=m).map(|i| i as f64 + 0.5).product::<f64>();
    }
    for i in 0..=m {
        let h = i as f64 + 0.5;
        for j in (0..terms).rev() {
            // multiply by 1 / (1 - h eps)
            let mut acc = 0.0;
            let mut hp = 1.0;
            for t in 0..=j {
                acc += poly[j - t] * hp;
                hp *= h;
            }
            poly[j] = acc;
        }
    }
    poly
}

impl SingularDistribution {
    /// `lim_n Pr_n(N_{2k} = l)`.
    pub fn limit(&self, l: usize) -> f64 {
        -self.coeffs[l].get(1).copied().unwrap_or(0.0)
    }

    /// `lim_n Pr_n(N_{2k} > lmax)`.
    pub fn tail_limit(&self) -> f64 {
        -self.rest.get(1).copied().unwrap_or(0.0)
    }

    /// Asymptotic `Pr_n(N_{2k} = l)` from every odd power of `A` available.
    pub fn probability(&self, l: usize, n: f64) -> f64 {
        let f = &self.coeffs[l];
        (0..)
            .map(|m| 2 * m + 1)
            .take_while(|&p| p <= f.order())
            .map(|p| f.coeff(p) * odd_power_weight((p - 1) / 2, n))
            .sum()
    }

    /// Coefficients of `n^{-j}` in `Pr_n(N_{2k} = l)`, `j = 0..terms`;
    /// exact for `2 terms - 1 <= order`.
    pub fn inverse_n_expansion(&self, l: usize, terms: usize) -> Vec<f64> {
        let f = &self.coeffs[l];
        let mut out = vec![0.0; terms];
        for m in 0..terms {
            if 2 * m + 1 > f.order() {
                break;
            }
            let c = f.coeff(2 * m + 1);
            for (o, w) in out.iter_mut().zip(odd_power_weight_expansion(m, terms)) {
                *o += c * w;
            }
        }
        out
    }
}

/// Singular expansion of the distribution of `N_{2k}`, `l = 0..=lmax`, to
/// order `order` in `A`.
pub fn singular_distribution(k: usize, lmax: usize, order: usize) -> Result<SingularDistribution> {
    if order == 0 {
        return Err(Error::InvalidArgument("order must be at least 1".into()));
    }
    let basis = SingularBasis::new(order);
    let blocks = Blocks::new(&basis);
    let (coeffs, rest) = u_expansion(&blocks, k, lmax)?;
    Ok(SingularDistribution { k, coeffs, rest })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leading_constants() {
        let e1 = em_expansion(1, 3).unwrap();
        assert!((e1.constant - std::f64::consts::PI.powi(2) / 24.0).abs() < 1e-15);
        let e2 = em_expansion(2, 3).unwrap();
        assert!((e2.constant - zeta(3) / 4.0).abs() < 1e-15);
        assert!(e2.lambda_tilde.is_empty());
        assert_eq!(e1.zeta_part[0], q(1, 4));
        assert_eq!(e1.rational_part[1], q(-1, 4));
    }

    #[test]
    fn expansion_matches_direct_sum() {
        let e1 = em_expansion(1, 4).unwrap();
        let v = 1.0 - 1e-4;
        assert!((g_direct(1, v) - e1.eval(v)).abs() < 1e-6);
        for k in 1..=3 {
            let e = em_expansion(k, 2).unwrap();
            // error o((1 - varsigma)^2): slope of the log error at least 2.5
            let err =
                |j: i32| (g_direct(k, 1.0 - 2f64.powi(-j)) - e.eval(1.0 - 2f64.powi(-j))).abs();
            let slope = (err(4) / err(8)).log2() / 4.0;
            assert!(slope > 2.5, "k={k} slope {slope}");
        }
    }

    #[test]
    fn odd_weights() {
        let n: f64 = 37.0;
        for m in 0..4 {
            let series: f64 = odd_power_weight_expansion(m, 24)
                .iter()
                .enumerate()
                .map(|(j, c)| c * n.powi(-(j as i32)))
                .sum();
            assert!(
                (series - odd_power_weight(m, n)).abs()
                    < 1e-14 * odd_power_weight(m, n).abs().max(1e-3)
            );
        }
        assert!((odd_power_weight(0, 1e12) + 1.0).abs() < 1e-11);
    }

    #[test]
    fn singlepoint_asymptotics() {
        let d = singular_distribution(1, 2, 9).unwrap();
        let expected = [
            [0.25, -0.25, -1.0 / 48.0, 13.0 / 144.0, 421.0 / 2880.0],
            [0.5, 0.0, -5.0 / 24.0, -11.0 / 36.0, -511.0 / 1440.0],
            [0.25, 0.25, 11.0 / 48.0, 31.0 / 144.0, 601.0 / 2880.0],
        ];
        for (l, e) in expected.iter().enumerate() {
            let got = d.inverse_n_expansion(l, 5);
            for (g, x) in got.iter().zip(e) {
                assert!((g - x).abs() < 1e-12, "l={l}: {got:?}");
            }
        }
    }
}
