use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::Zero;

use super::coeff::Coefficient;
use crate::error::Error;

/// Power series in one variable known through `z^order`.
///
/// Every operation truncates at the smaller order of its operands, so a result
/// never claims more coefficients than its inputs determine.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<C> {
    coeffs: Vec<C>,
}

impl<C: Coefficient> TruncatedSeries<C> {
    /// Series with the given coefficients; its order is `coeffs.len() - 1`.
    pub fn new(mut coeffs: Vec<C>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(C::zero());
        }
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(vec![C::zero(); order + 1])
    }

    pub fn one(order: usize) -> Self {
        Self::constant(C::one(), order)
    }

    pub fn constant(c: C, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// `c z^power`, or zero when `power` exceeds the order.
    pub fn monomial(c: C, power: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if power <= order {
            s.coeffs[power] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    /// Coefficient of `z^m`; `None` past the truncation order.
    pub fn get(&self, m: usize) -> Option<&C> {
        self.coeffs.get(m)
    }

    /// Coefficient of `z^m`.
    ///
    /// # Panics
    /// If `m` exceeds the order.
    pub fn coeff(&self, m: usize) -> &C {
        &self.coeffs[m]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Index of the first nonzero coefficient, `None` for the zero series.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Truncate to `order`. Orders above the current one leave the series as is.
    pub fn project(&self, order: usize) -> Self {
        Self::new(self.coeffs[..=order.min(self.order())].to_vec())
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::new(self.coeffs.iter().map(|x| x.clone() * c).collect())
    }

    /// Multiply by `z^shift`, keeping the order.
    pub fn shift(&self, shift: usize) -> Self {
        let mut s = Self::zero(self.order());
        for (i, c) in self.coeffs.iter().enumerate() {
            if i + shift > self.order() {
                break;
            }
            s.coeffs[i + shift] = c.clone();
        }
        s
    }

    /// `z d/dz`.
    pub fn z_d_dz(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c.clone() * C::from_i64(i as i64))
                .collect(),
        )
    }

    /// Multiplicative inverse; needs an invertible constant term.
    pub fn inverse(&self) -> Result<Self, Error> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::DivByNonUnit);
        }
        let order = self.order();
        let inv0 = C::one() / c0;
        let mut out: Vec<C> = Vec::with_capacity(order + 1);
        out.push(inv0.clone());
        for m in 1..=order {
            let rev: Vec<C> = self.coeffs[1..=m].iter().rev().cloned().collect();
            let acc = C::dot(&rev, &out[..m]);
            out.push(-(acc * &inv0));
        }
        let s = Self::new(out);
        s.check_finite()?;
        Ok(s)
    }

    /// `self / other`, defined when `other` has an invertible constant term.
    pub fn div(&self, other: &Self) -> Result<Self, Error> {
        Ok(self * &other.inverse()?)
    }

    /// Logarithm of a series with constant term one.
    pub fn log(&self) -> Result<Self, Error> {
        if !self.coeffs[0].is_one() {
            return Err(Error::LogOfNonUnit);
        }
        let order = self.order();
        let q = self.z_d_dz().div(self)?;
        let mut out = vec![C::zero(); order + 1];
        for m in 1..=order {
            out[m] = q.coeffs[m].clone() / C::from_i64(m as i64);
        }
        Ok(Self::new(out))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one(self.order());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Fails with `NonFinite` when a float coefficient is NaN or infinite.
    pub fn check_finite(&self) -> Result<(), Error> {
        match self.coeffs.iter().position(|c| !c.is_finite()) {
            Some(index) => Err(Error::NonFinite { index }),
            None => Ok(()),
        }
    }

    /// Coefficients converted to `f64` in the plain `z` basis.
    pub fn to_f64_vec(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.unscale_f64(i))
            .collect()
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(&mut C, &C)) -> Self {
        let order = self.order().min(rhs.order());
        let mut out = self.coeffs[..=order].to_vec();
        for (o, r) in out.iter_mut().zip(&rhs.coeffs) {
            f(o, r);
        }
        Self::new(out)
    }
}

impl<C: Coefficient> Add for &TruncatedSeries<C> {
    type Output = TruncatedSeries<C>;
    fn add(self, rhs: Self) -> TruncatedSeries<C> {
        self.zip_with(rhs, |a, b| *a += b)
    }
}

impl<C: Coefficient> Sub for &TruncatedSeries<C> {
    type Output = TruncatedSeries<C>;
    fn sub(self, rhs: Self) -> TruncatedSeries<C> {
        self.zip_with(rhs, |a, b| *a -= b)
    }
}

impl<C: Coefficient> Mul for &TruncatedSeries<C> {
    type Output = TruncatedSeries<C>;
    fn mul(self, rhs: Self) -> TruncatedSeries<C> {
        let len = self.order().min(rhs.order()) + 1;
        TruncatedSeries::new(C::convolve(&self.coeffs, &rhs.coeffs, len))
    }
}

impl<C: Coefficient> Neg for &TruncatedSeries<C> {
    type Output = TruncatedSeries<C>;
    fn neg(self) -> TruncatedSeries<C> {
        TruncatedSeries::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<C: Coefficient> $tr for TruncatedSeries<C> {
            type Output = TruncatedSeries<C>;
            fn $m(self, rhs: Self) -> TruncatedSeries<C> {
                (&self).$m(&rhs)
            }
        }
        impl<C: Coefficient> $tr<&TruncatedSeries<C>> for TruncatedSeries<C> {
            type Output = TruncatedSeries<C>;
            fn $m(self, rhs: &Self) -> TruncatedSeries<C> {
                (&self).$m(rhs)
            }
        }
        impl<C: Coefficient> $tr<TruncatedSeries<C>> for &TruncatedSeries<C> {
            type Output = TruncatedSeries<C>;
            fn $m(self, rhs: TruncatedSeries<C>) -> TruncatedSeries<C> {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<C: Coefficient> Neg for TruncatedSeries<C> {
    type Output = TruncatedSeries<C>;
    fn neg(self) -> TruncatedSeries<C> {
        -&self
    }
}

impl<C: Coefficient> AddAssign<&TruncatedSeries<C>> for TruncatedSeries<C> {
    fn add_assign(&mut self, rhs: &Self) {
        let order = self.order().min(rhs.order());
        self.coeffs.truncate(order + 1);
        for (o, r) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *o += r;
        }
    }
}

impl<C: Coefficient> SubAssign<&TruncatedSeries<C>> for TruncatedSeries<C> {
    fn sub_assign(&mut self, rhs: &Self) {
        let order = self.order().min(rhs.order());
        self.coeffs.truncate(order + 1);
        for (o, r) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *o -= r;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn ints(v: &[i64]) -> TruncatedSeries<BigRational> {
        TruncatedSeries::new(v.iter().map(|&c| q(c, 1)).collect())
    }

    #[test]
    fn project_drops_high_terms() {
        assert_eq!(ints(&[1, 1, 1]).project(1), ints(&[1, 1]));
        assert_eq!(ints(&[1, 1, 1]).project(5), ints(&[1, 1, 1]));
    }

    #[test]
    fn geometric_series_inverts_one_minus_z() {
        let k = 12;
        let mut one_minus_z = vec![0; k + 1];
        one_minus_z[0] = 1;
        one_minus_z[1] = -1;
        let geo = ints(&vec![1; k + 1]);
        assert_eq!(&ints(&one_minus_z) * &geo, TruncatedSeries::one(k));
        assert_eq!(ints(&one_minus_z).inverse().unwrap(), geo);
    }

    #[test]
    fn division_by_non_unit_fails() {
        let z = ints(&[0, 1, 0]);
        assert_eq!(ints(&[1, 0, 0]).div(&z), Err(Error::DivByNonUnit));
        assert_eq!(
            TruncatedSeries::<f64>::new(vec![0.0, 1.0]).inverse(),
            Err(Error::DivByNonUnit)
        );
    }

    #[test]
    fn log_of_inverse_one_minus_z() {
        let s = ints(&[1, -1, 0, 0, 0, 0, 0])
            .inverse()
            .unwrap()
            .log()
            .unwrap();
        let expect: Vec<BigRational> = (0..7)
            .map(|m| if m == 0 { q(0, 1) } else { q(1, m) })
            .collect();
        assert_eq!(s.coeffs(), &expect[..]);
        assert_eq!(ints(&[2, 1]).log(), Err(Error::LogOfNonUnit));
    }

    #[test]
    fn operations_truncate_to_smaller_order() {
        let a = ints(&[1, 2, 3, 4]);
        let b = ints(&[1, 1]);
        assert_eq!((&a + &b).order(), 1);
        assert_eq!((&a * &b).order(), 1);
    }

    #[test]
    fn float_overflow_is_reported() {
        let s = TruncatedSeries::new(vec![1e-300, 1.0, 1.0]);
        assert!(matches!(s.inverse(), Err(Error::NonFinite { .. })));
    }

    fn small_series(len: usize) -> impl Strategy<Value = Vec<i64>> {
        proptest::collection::vec(-5i64..=5, len)
    }

    proptest! {
        #[test]
        fn multiplication_is_associative(a in small_series(8), b in small_series(8), c in small_series(8)) {
            let (a, b, c) = (ints(&a), ints(&b), ints(&c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        }

        #[test]
        fn division_undoes_multiplication(mut a in small_series(8), b in small_series(8)) {
            a[0] = 1;
            let (a, b) = (ints(&a), ints(&b));
            prop_assert_eq!((&b * &a).div(&a).unwrap(), b);
        }

        #[test]
        fn log_turns_products_into_sums(mut a in small_series(7), mut b in small_series(7)) {
            a[0] = 1;
            b[0] = 1;
            let (a, b) = (ints(&a), ints(&b));
            prop_assert_eq!((&a * &b).log().unwrap(), &a.log().unwrap() + &b.log().unwrap());
        }

        #[test]
        fn float_and_exact_products_agree(a in small_series(10), b in small_series(10)) {
            let exact = &ints(&a) * &ints(&b);
            let fa = TruncatedSeries::new(a.iter().map(|&c| c as f64).collect());
            let fb = TruncatedSeries::new(b.iter().map(|&c| c as f64).collect());
            let float = &fa * &fb;
            for (x, y) in exact.coeffs().iter().zip(float.coeffs()) {
                prop_assert!((x.to_f64() - y).abs() < 1e-9);
            }
        }
    }
}
