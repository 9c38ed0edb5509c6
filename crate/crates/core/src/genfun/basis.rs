use crate::error::Result;
use crate::pseries::{BaseSeries, Coefficient, RatPoly, TruncatedSeries};

/// A realization of the Lambert sums `sum_{f >= 1} p(f) x^f / (1 - x^f)`,
/// `x = B^2`, together with the series `A` they are combined with.
///
/// [`BaseSeries`] realizes them as power series in `z`. The singular
/// expansion of the asymptotics module realizes them as power series in `A`
/// itself, which turns the same building blocks into large-`n` asymptotics.
pub trait LambertBasis: Sync {
    type C: Coefficient;

    /// Truncation order of every series produced.
    fn order(&self) -> usize;

    fn a(&self) -> TruncatedSeries<Self::C>;

    fn one_minus_a(&self) -> TruncatedSeries<Self::C> {
        &TruncatedSeries::one(self.order()) - &self.a()
    }

    /// `A^a_power sum_{f >= 1} p(f) x^f / (1 - x^f)`.
    fn lambert(&self, p: &RatPoly, a_power: usize) -> Result<TruncatedSeries<Self::C>>;

    /// `log(2 / (1 + A))`.
    fn t0(&self) -> Result<TruncatedSeries<Self::C>>;
}

impl<C: Coefficient> LambertBasis for BaseSeries<C> {
    type C = C;

    fn order(&self) -> usize {
        BaseSeries::order(self)
    }

    fn a(&self) -> TruncatedSeries<C> {
        BaseSeries::a(self).clone()
    }

    fn lambert(&self, p: &RatPoly, a_power: usize) -> Result<TruncatedSeries<C>> {
        let sum = self.lambert_poly(p);
        Ok(&self.a().pow(a_power as u32) * &sum)
    }

    fn t0(&self) -> Result<TruncatedSeries<C>> {
        let half_one_plus_a =
            (&TruncatedSeries::one(self.order()) + BaseSeries::a(self)).scale(&C::from_ratio(1, 2));
        Ok(-half_one_plus_a.log()?)
    }
}
