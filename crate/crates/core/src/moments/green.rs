use std::f64::consts::PI;

use crate::error::{Error, Result};

/// How a value of `h(0, d, z)` was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GreenMethod {
    /// Closed form of the line series.
    ExactSeries,
    /// Complete elliptic integral by the arithmetic-geometric mean.
    Elliptic,
    /// Bessel integral by Gauss-Legendre quadrature.
    Quadrature,
}

impl GreenMethod {
    pub fn name(self) -> &'static str {
        match self {
            GreenMethod::ExactSeries => "exact-series",
            GreenMethod::Elliptic => "elliptic",
            GreenMethod::Quadrature => "quadrature",
        }
    }
}

/// `h(0, d, z)`: generating function of the nonempty closed walks on `Z^d`
/// counted by `z^length`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GreenValue {
    pub d: usize,
    pub z: f64,
    pub value: f64,
    pub method: GreenMethod,
}

/// Evaluate `h(0, d, z)` for `0 <= z <= 1/(2d)`.
///
/// `d = 1`: `(1 - sqrt(1 - 4z^2)) / sqrt(1 - 4z^2)`; `d = 2`:
/// `(2/pi) K(16 z^2) - 1` with `K` in the parameter convention; `d >= 3`:
/// `int_0^inf e^{-y} I_0(2zy)^d dy - 1`. For `d <= 2` the series diverges at
/// `z = 1/(2d)`, which is reported as a domain error.
pub fn green(d: usize, z: f64) -> Result<GreenValue> {
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let edge = 1.0 / (2.0 * d as f64);
    if !(z >= 0.0 && z <= edge) {
        return Err(Error::Domain(format!(
            "z = {z} outside [0, {edge}] for d = {d}"
        )));
    }
    if d <= 2 && z == edge {
        return Err(Error::Domain(format!(
            "h(0, {d}, z) diverges at z = {edge}"
        )));
    }
    let (value, method) = match d {
        1 => {
            let a = (1.0 - 4.0 * z * z).sqrt();
            ((1.0 - a) / a, GreenMethod::ExactSeries)
        }
        2 => (
            2.0 / PI * elliptic_k(16.0 * z * z) - 1.0,
            GreenMethod::Elliptic,
        ),
        _ => (bessel_integral(d, z) - 1.0, GreenMethod::Quadrature),
    };
    Ok(GreenValue {
        d,
        z,
        value,
        method,
    })
}

/// `G(d) = h(0, d, 1/(2d))`, the expected number of returns of the infinite
/// walk, for `d >= 3`.
pub fn return_constant(d: usize) -> Result<f64> {
    if d < 3 {
        return Err(Error::Domain(format!("G(d) is infinite for d = {d}")));
    }
    Ok(green(d, 1.0 / (2.0 * d as f64))?.value)
}

/// Complete elliptic integral of the first kind, `K(m) = int_0^{pi/2} (1 - m sin^2)^{-1/2}`.
pub fn elliptic_k(m: f64) -> f64 {
    let (mut a, mut b) = (1.0f64, (1.0 - m).sqrt());
    while (a - b).abs() > 1e-16 * a {
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    PI / (2.0 * a)
}

/// `e^{-x} I_0(x)` for `x >= 0`.
pub fn bessel_i0_scaled(x: f64) -> f64 {
    if x <= 20.0 {
        i0_scaled_series(x)
    } else {
        i0_scaled_asymptotic(x)
    }
}

fn i0_scaled_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let (mut term, mut sum, mut k) = (1.0f64, 1.0f64, 1.0f64);
    while term > 1e-17 * sum {
        term *= q / (k * k);
        sum += term;
        k += 1.0;
    }
    sum * (-x).exp()
}

/// `(2 pi x)^{-1/2} sum_k ((2k-1)!!)^2 / (k! (8x)^k)`, cut at the smallest term.
fn i0_scaled_asymptotic(x: f64) -> f64 {
    let (mut term, mut sum, mut k) = (1.0f64, 1.0f64, 1.0f64);
    loop {
        let next = term * (2.0 * k - 1.0).powi(2) / (k * 8.0 * x);
        if next < 1e-17 * sum || next > term {
            break;
        }
        term = next;
        sum += term;
        k += 1.0;
    }
    sum / (2.0 * PI * x).sqrt()
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0f64, x);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

fn panels(rule: &[(f64, f64)], a: f64, b: f64, count: usize, f: impl Fn(f64) -> f64) -> f64 {
    let h = (b - a) / count as f64;
    (0..count)
        .map(|p| {
            let (lo, hi) = (a + p as f64 * h, a + (p + 1) as f64 * h);
            let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
            rule.iter()
                .map(|&(x, w)| w * f(mid + half * x))
                .sum::<f64>()
                * half
        })
        .sum()
}

/// `int_0^inf e^{-y} I_0(2zy)^d dy` for `0 <= z <= 1/(2d)`.
///
/// `[0, 16]` directly, then `y = e^s` up to `y = 1e12`, then the leading
/// asymptotic tail, which decays only like `y^{1-d/2}` at `z = 1/(2d)`.
fn bessel_integral(d: usize, z: f64) -> f64 {
    let rule = gauss_legendre(20);
    let eps = (1.0 - 2.0 * z * d as f64).max(0.0);
    let f = |y: f64| bessel_i0_scaled(2.0 * z * y).powi(d as i32) * (-eps * y).exp();
    let mut total = panels(&rule, 0.0, 16.0, 8, f);
    if z == 0.0 {
        return total + (-16.0f64).exp();
    }
    let critical = eps < 1e-14;
    let y_max = if critical {
        1e12
    } else {
        (60.0 / eps).clamp(32.0, 1e16)
    };
    let (s0, s1) = (16f64.ln(), y_max.ln());
    let count = ((s1 - s0) / 0.25).ceil() as usize;
    total += panels(&rule, s0, s1, count, |s| {
        let y = s.exp();
        f(y) * y
    });
    if critical {
        let dd = d as f64;
        let c = (4.0 * PI * z).powf(-dd / 2.0);
        total += c
            * (y_max.powf(1.0 - dd / 2.0) / (dd / 2.0 - 1.0)
                + dd / (16.0 * z) * y_max.powf(-dd / 2.0) / (dd / 2.0));
    }
    total
}
