use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::pseries::{BaseSeries, Coefficient, RatPoly, TruncatedSeries};
use crate::walks::binomial;

/// Closed forms for the number of singlepoints:
/// series counting closed walks with `N_2 = 0, 1, 2`.
///
/// With `g = z d/dz (A^2 sum_f f x^f / (1 - x^f))`:
/// `N_2 = 0: A - 1 + g`, `N_2 = 1: 4z^2 / A - 2g`, `N_2 = 2: g`.
pub fn singlepoint_series<C: Coefficient>(base: &BaseSeries<C>) -> [TruncatedSeries<C>; 3] {
    let order = base.order();
    let a = base.a();
    let s1 = base.lambert_poly(&RatPoly::monomial(1));
    let g = (&(a * a) * &s1).z_d_dz();
    let one = TruncatedSeries::one(order);
    let four_z2 =
        TruncatedSeries::monomial(C::from_i64(4) * C::z_weight() * C::z_weight(), 2, order);
    let zero_sp = &(a - &one) + &g;
    let one_sp = &four_z2.div(a).expect("A is a unit") - &g.scale(&C::from_i64(2));
    [zero_sp, one_sp, g]
}

/// Closed form for the doublepoints: series counting closed walks with
/// `N_4 = l` for `l = 0..=lmax`, and the remainder `N_4 > lmax`.
///
/// `sum_w u^{N_4} z^{|w|} = 1/A - 1 + (u - 1) 4z^2 (1 - A)/A
///  + z d/dz [(u - 1)^2 X + (u - 1)^3 Y^2 / (1 - (u - 1) G)]` with
/// `G = A^2 S_1`, `X = A^2 (1-A)^2 S_1 - 2 A^3 (1-A) S_2 + A^4 S_3`,
/// `Y = A^2 S_1 - A^3 S_4`, where `S_1, S_2, S_3, S_4` are the Lambert sums
/// with weights `f`, `binomial(f,2)`, `binomial(f,2)^2 / f` and `f(f+1)/2`.
pub fn doublepoint_series<C: Coefficient>(
    base: &BaseSeries<C>,
    lmax: usize,
) -> (Vec<TruncatedSeries<C>>, TruncatedSeries<C>) {
    let order = base.order();
    let one = TruncatedSeries::one(order);
    let a = base.a().clone();
    let oma = base.one_minus_a();
    let a2 = &a * &a;
    let a3 = &a2 * &a;
    let c2 = RatPoly::binomial(0, 2);
    let s1 = base.lambert_poly(&RatPoly::monomial(1));
    let s2 = base.lambert_poly(&c2);
    let s3 = base.lambert_poly(&(&c2 * &c2).div_by_f().unwrap());
    let s4 = base.lambert_poly(&RatPoly::binomial(1, 2));
    let g = &a2 * &s1;
    let x = &(&(&(&a2 * &(&oma * &oma)) * &s1) - &(&(&a3 * &oma) * &s2).scale(&C::from_i64(2)))
        + &(&(&a2 * &a2) * &s3);
    let y = &(&a2 * &s1) - &(&a3 * &s4);
    let y2 = &y * &y;
    let inv_a = a.inverse().expect("A is a unit");
    let t0 = &inv_a - &one;
    let four_z2 =
        TruncatedSeries::monomial(C::from_i64(4) * C::z_weight() * C::z_weight(), 2, order);
    let t1 = &(&four_z2 * &oma) * &inv_a;
    // 1 / (1 - (u-1) G) = S sum_j u^j (G S)^j, S = 1 / (1 + G)
    let s = (&one + &g).inverse().expect("1 + G is a unit");
    let gs = &g * &s;
    let mut geo = Vec::with_capacity(lmax + 1);
    let mut cur = &y2 * &s;
    for _ in 0..=lmax {
        geo.push(cur.clone());
        cur = &cur * &gs;
    }
    let c = |v: i64| C::from_i64(v);
    let mut inner = vec![TruncatedSeries::zero(order); lmax + 1];
    for (p, w) in [(0usize, 1i64), (1, -2), (2, 1)] {
        if p <= lmax {
            inner[p] += &x.scale(&c(w));
        }
    }
    for (l, slot) in inner.iter_mut().enumerate() {
        for (p, w) in [(0usize, -1i64), (1, 3), (2, -3), (3, 1)] {
            if p <= l {
                *slot += &geo[l - p].scale(&c(w));
            }
        }
    }
    let mut out: Vec<TruncatedSeries<C>> = inner.iter().map(TruncatedSeries::z_d_dz).collect();
    out[0] += &(&t0 - &t1);
    if lmax >= 1 {
        out[1] += &t1;
    }
    let mut rest = t0;
    for s in &out {
        rest -= s;
    }
    (out, rest)
}

/// Series counting closed walks with range `m >= 2`:
/// `-z d/dz [ln(1 - x^{m-1}) - 2 ln(1 - x^m) + ln(1 - x^{m+1})]`.
pub fn range_series<C: Coefficient>(base: &BaseSeries<C>, m: usize) -> Result<TruncatedSeries<C>> {
    if m < 2 {
        return Err(Error::InvalidArgument(
            "the range of a closed walk is at least 2".into(),
        ));
    }
    let order = base.order();
    let one = TruncatedSeries::one(order);
    let ln = |j: usize| -> Result<TruncatedSeries<C>> { (&one - &base.x().pow(j as u32)).log() };
    let bracket = &(&ln(m - 1)? - &ln(m)?.scale(&C::from_i64(2))) + &ln(m + 1)?;
    Ok(-bracket.z_d_dz())
}

/// `sum_{i >= 1} binomial(2n, n - i j)`.
pub fn ballot_tail(n: usize, j: usize) -> BigInt {
    let mut acc = BigInt::zero();
    let mut i = 1;
    while i * j <= n {
        acc += BigInt::from(binomial(2 * n, n - i * j));
        i += 1;
    }
    acc
}

/// Number of closed walks of length `2n` with range `m`, from the
/// coefficients of the range series in closed form:
/// `2(m-1) S_{m-1} - 4m S_m + 2(m+1) S_{m+1}` with `S_j = ballot_tail(n, j)`.
pub fn range_count(n: usize, m: usize) -> BigInt {
    if m < 2 || n == 0 {
        return BigInt::zero();
    }
    let t = |j: usize| BigInt::from(2 * j) * ballot_tail(n, j);
    t(m - 1) - t(m) * 2 + t(m + 1)
}

/// Vertex factor `K(q, k, w)`:
/// `(-1)^k / q (1 + w)^{-k} sum_{nu = max(0,k-q)}^{k-1} binomial(k-1,nu) binomial(q,k-nu) (-w)^nu`
/// for `q > 0`, and `(w / (1 + w))^k / k` for `q = 0`.
pub fn vertex_factor(q: usize, k: usize, w: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    if 1.0 + w == 0.0 {
        return Err(Error::DivByNonUnit);
    }
    if q == 0 {
        return Ok((w / (1.0 + w)).powi(k as i32) / k as f64);
    }
    let mut sum = 0.0;
    for nu in k.saturating_sub(q)..k {
        let b = binomial(k - 1, nu) * binomial(q, k - nu);
        sum += f64_of(&b) * (-w).powi(nu as i32);
    }
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign / q as f64 * (1.0 + w).powi(-(k as i32)) * sum)
}

/// Vertex factor with a series argument; `1 + w` must be a unit.
pub fn vertex_factor_series<C: Coefficient>(
    q: usize,
    k: usize,
    w: &TruncatedSeries<C>,
) -> Result<TruncatedSeries<C>> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let order = w.order();
    let inv = (&TruncatedSeries::one(order) + w).inverse()?;
    if q == 0 {
        return Ok((w * &inv).pow(k as u32).scale(&C::from_ratio(1, k as i64)));
    }
    let mut sum = TruncatedSeries::zero(order);
    let neg_w = -w;
    for nu in k.saturating_sub(q)..k {
        let b = BigInt::from(binomial(k - 1, nu) * binomial(q, k - nu));
        sum += &neg_w.pow(nu as u32).scale(&C::from_bigint(&b));
    }
    let sign = if k.is_multiple_of(2) { 1 } else { -1 };
    Ok((&inv.pow(k as u32) * &sum).scale(&C::from_ratio(sign, q as i64)))
}

/// The unsummed form
/// `(-1)^q / q! (1 + w)^q sum_{m >= max(k,q)} binomial(m,k) (m-1)!/(m-q)! w^{m-q} (-1)^{m+k}`,
/// cut after `terms` summands.
pub fn vertex_factor_unsummed(q: usize, k: usize, w: f64, terms: usize) -> f64 {
    let start = k.max(q).max(1);
    let mut sum = 0.0;
    for m in start..start + terms {
        // binomial(m,k) (m-1)! / (m-q)!  / q!  = binomial(m,k) binomial(m-1, q-1) / q  (q > 0)
        let c = if q == 0 {
            f64_of(&binomial(m, k)) / m as f64
        } else {
            f64_of(&binomial(m, k)) * f64_of(&binomial(m - 1, q - 1)) / q as f64
        };
        let sign = if (m + k).is_multiple_of(2) { 1.0 } else { -1.0 };
        sum += sign * c * w.powi((m - q) as i32);
    }
    let sign_q = if q.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign_q * (1.0 + w).powi(q as i32) * sum
}

fn f64_of(b: &num_bigint::BigUint) -> f64 {
    num_traits::ToPrimitive::to_f64(b).unwrap_or(f64::INFINITY)
}
