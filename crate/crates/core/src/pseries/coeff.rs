use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{NumAssignRef, NumRef, One, ToPrimitive, Zero};

/// Which coefficient ring a computation ran in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Backend {
    Exact,
    Float,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Exact => "exact",
            Backend::Float => "float",
        }
    }
}

/// Coefficient ring of a truncated power series.
///
/// The float backend stores the coefficient of `z^m` multiplied by `2^-m`,
/// so that coefficients of walk series stay of order one instead of growing
/// like `4^n`. Ring operations and `z d/dz` do not see the difference; only
/// the constructors of base series need the substitution weight
/// [`Coefficient::z_weight`].
pub trait Coefficient:
    Clone + Debug + PartialEq + Send + Sync + NumRef + NumAssignRef + Neg<Output = Self> + 'static
{
    const BACKEND: Backend;

    /// Weight `c` such that the stored variable is `z / c`.
    fn z_weight() -> Self;

    fn from_i64(v: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_bigint(v: &BigInt) -> Self;
    fn from_bigrational(v: &BigRational) -> Self;
    fn from_f64(v: f64) -> Option<Self>;
    fn to_f64(&self) -> f64;

    fn is_finite(&self) -> bool {
        true
    }

    /// Scale a stored coefficient of `z^power` back to the plain `z` basis.
    fn unscale_f64(&self, _power: usize) -> f64 {
        self.to_f64()
    }

    /// `sum_i a_i * b_i`.
    fn dot(a: &[Self], b: &[Self]) -> Self {
        let mut acc = Self::zero();
        for (x, y) in a.iter().zip(b) {
            if !x.is_zero() {
                acc += x.clone() * y;
            }
        }
        acc
    }

    /// Truncated Cauchy product of length `len`.
    fn convolve(a: &[Self], b: &[Self], len: usize) -> Vec<Self> {
        let mut out = vec![Self::zero(); len];
        for (i, x) in a.iter().enumerate().take(len) {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(len - i) {
                if !y.is_zero() {
                    out[i + j] += x.clone() * y;
                }
            }
        }
        out
    }
}

impl Coefficient for f64 {
    const BACKEND: Backend = Backend::Float;

    fn z_weight() -> Self {
        0.5
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn from_bigint(v: &BigInt) -> Self {
        v.to_f64().unwrap_or(f64::NAN)
    }
    fn from_bigrational(v: &BigRational) -> Self {
        ratio_to_f64(v)
    }
    fn from_f64(v: f64) -> Option<Self> {
        Some(v)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn unscale_f64(&self, power: usize) -> f64 {
        self * 2f64.powi(power as i32)
    }
    fn dot(a: &[Self], b: &[Self]) -> Self {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }
    fn convolve(a: &[Self], b: &[Self], len: usize) -> Vec<Self> {
        let mut out = vec![0.0; len];
        for (i, x) in a.iter().enumerate().take(len) {
            if *x == 0.0 {
                continue;
            }
            for (o, y) in out[i..].iter_mut().zip(b) {
                *o += x * y;
            }
        }
        out
    }
}

impl Coefficient for BigRational {
    const BACKEND: Backend = Backend::Exact;

    fn z_weight() -> Self {
        BigRational::one()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }
    fn from_bigrational(v: &BigRational) -> Self {
        v.clone()
    }
    fn from_f64(v: f64) -> Option<Self> {
        BigRational::from_float(v)
    }
    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }

    fn dot(a: &[Self], b: &[Self]) -> Self {
        let (pa, da) = common_denominator(a);
        let (pb, db) = common_denominator(b);
        let mut acc = BigInt::zero();
        for (x, y) in pa.iter().zip(&pb) {
            if !x.is_zero() && !y.is_zero() {
                acc += x * y;
            }
        }
        BigRational::new(acc, da * db)
    }

    fn convolve(a: &[Self], b: &[Self], len: usize) -> Vec<Self> {
        let (pa, da) = common_denominator(&a[..a.len().min(len)]);
        let (pb, db) = common_denominator(&b[..b.len().min(len)]);
        let mut out = vec![BigInt::zero(); len];
        for (i, x) in pa.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (o, y) in out[i..].iter_mut().zip(&pb) {
                if !y.is_zero() {
                    *o += x * y;
                }
            }
        }
        let den = da * db;
        out.into_iter()
            .map(|c| BigRational::new(c, den.clone()))
            .collect()
    }
}

/// Numerators over the least common denominator.
pub(crate) fn common_denominator(v: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let mut den = BigInt::one();
    for x in v {
        if !x.denom().is_one() {
            den = den.lcm(x.denom());
        }
    }
    let nums = v
        .iter()
        .map(|x| {
            if x.is_zero() {
                BigInt::zero()
            } else {
                x.numer() * (&den / x.denom())
            }
        })
        .collect();
    (nums, den)
}

/// Correctly scaled conversion that survives huge numerators and denominators.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && n.abs() < 1e300 && d < 1e300 {
            return n / d;
        }
    }
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift = nb - db - 60;
    let scaled = if shift >= 0 {
        r.numer() / (r.denom() << (shift as usize))
    } else {
        (r.numer() << ((-shift) as usize)) / r.denom()
    };
    scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
}
