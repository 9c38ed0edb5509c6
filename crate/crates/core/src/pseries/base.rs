use std::sync::OnceLock;

use super::coeff::Coefficient;
use super::poly::RatPoly;
use super::series::TruncatedSeries;

/// The series every closed-walk generating function is built from, truncated
/// at a common even order `K`:
///
/// * `A = sqrt(1 - 4z^2)`,
/// * `B = 2z / (1 + A)` (the Catalan series, `B = z + z^3 + 2z^5 + ...`),
/// * `x = B^2`, the argument of all Lambert sums,
/// * `h0 = (1 - A) / A`, the closed-walk series of the line.
pub struct BaseSeries<C: Coefficient> {
    order: usize,
    a: TruncatedSeries<C>,
    b: TruncatedSeries<C>,
    x: TruncatedSeries<C>,
    ballot: OnceLock<Vec<Vec<C>>>,
}

impl<C: Coefficient> BaseSeries<C> {
    pub fn new(order: usize) -> Self {
        let c2 = C::z_weight() * C::z_weight();
        let four_c2 = c2.clone() * C::from_i64(4);
        let mut a = vec![C::zero(); order + 1];
        a[0] = C::one();
        let mut prev = C::one();
        for n in 1..=order / 2 {
            prev = prev * C::from_ratio(2 * n as i64 - 3, 2 * n as i64) * &four_c2;
            a[2 * n] = prev.clone();
        }
        let a = TruncatedSeries::new(a);
        let one_plus_a = &TruncatedSeries::one(order) + &a;
        let two_z = TruncatedSeries::monomial(C::from_i64(2) * C::z_weight(), 1, order);
        let b = two_z.div(&one_plus_a).expect("1 + A has constant term 2");
        let x = &b * &b;
        Self {
            order,
            a,
            b,
            x,
            ballot: OnceLock::new(),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn a(&self) -> &TruncatedSeries<C> {
        &self.a
    }

    pub fn b(&self) -> &TruncatedSeries<C> {
        &self.b
    }

    /// `B^2`.
    pub fn x(&self) -> &TruncatedSeries<C> {
        &self.x
    }

    pub fn one_minus_a(&self) -> TruncatedSeries<C> {
        &TruncatedSeries::one(self.order) - &self.a
    }

    /// `(1 - A) / A`: generating function of closed walks on the line.
    pub fn h0(&self) -> TruncatedSeries<C> {
        self.one_minus_a()
            .div(&self.a)
            .expect("A has constant term 1")
    }

    /// `h(p, 1, z) = B^|p| / A - [p = 0]`.
    pub fn h_p1(&self, p: i64) -> TruncatedSeries<C> {
        let bp = self.b.pow(p.unsigned_abs() as u32);
        let mut s = bp.div(&self.a).expect("A has constant term 1");
        if p == 0 {
            s = &s - &TruncatedSeries::one(self.order);
        }
        s
    }

    /// `x^f / (1 - x^f)` computed by series division.
    pub fn geometric_tail(&self, f: usize) -> TruncatedSeries<C> {
        let xf = self.x.pow(f as u32);
        let den = &TruncatedSeries::one(self.order) - &xf;
        xf.div(&den).expect("1 - x^f has constant term 1")
    }

    /// `sum_{f >= 1} w(f) x^f / (1 - x^f)`.
    ///
    /// Collected as `sum_N d_N x^N` with the divisor sums `d_N`, and expanded
    /// with the ballot numbers `[z^{2m}] B^{2N} = (N/m) binomial(2m, m - N)`,
    /// so the cost is quadratic in the order whatever the weight.
    pub fn lambert(&self, w: impl Fn(u64) -> C) -> TruncatedSeries<C> {
        let half = self.order / 2;
        let mut d = vec![C::zero(); half + 1];
        for f in 1..=half {
            let wf = w(f as u64);
            if wf.is_zero() {
                continue;
            }
            for n in (f..=half).step_by(f) {
                d[n] += &wf;
            }
        }
        self.sum_x_powers(&d)
    }

    pub fn lambert_poly(&self, p: &RatPoly) -> TruncatedSeries<C> {
        self.lambert(|f| C::from_bigrational(&p.eval(f)))
    }

    /// `sum_N d[N] x^N` for `N <= K/2`.
    pub fn sum_x_powers(&self, d: &[C]) -> TruncatedSeries<C> {
        let table = self.ballot_table();
        let mut out = vec![C::zero(); self.order + 1];
        for (m, row) in table.iter().enumerate().skip(1) {
            let len = (row.len() - 1).min(d.len().saturating_sub(1));
            out[2 * m] = C::dot(&row[1..=len], &d[1..=len]);
        }
        if let Some(d0) = d.first() {
            out[0] = d0.clone();
        }
        TruncatedSeries::new(out)
    }

    /// Row `m` holds `[z^{2m}] B^{2N}` for `N = 0..=m`, in the stored basis.
    fn ballot_table(&self) -> &Vec<Vec<C>> {
        self.ballot.get_or_init(|| {
            let c2 = C::z_weight() * C::z_weight();
            let half = self.order / 2;
            let mut rows = Vec::with_capacity(half + 1);
            rows.push(vec![C::one()]);
            let mut central = C::one();
            for m in 1..=half {
                // binomial(2m, m) (c^2)^m
                central =
                    central * C::from_ratio((2 * m * (2 * m - 1)) as i64, (m * m) as i64) * &c2;
                let mut row = vec![C::zero(); m + 1];
                let mut binom = central.clone();
                for (n, slot) in row.iter_mut().enumerate().skip(1) {
                    binom *= C::from_ratio((m - n + 1) as i64, (m + n) as i64);
                    *slot = binom.clone() * C::from_ratio(n as i64, m as i64);
                }
                rows.push(row);
            }
            rows
        })
    }
}

/// `binomial(2n, n)` in the stored basis of `C`, i.e. scaled by `c^{2n}`.
pub fn central_binomial_scaled<C: Coefficient>(n: usize) -> C {
    let c2 = C::z_weight() * C::z_weight();
    let mut central = C::one();
    for m in 1..=n {
        central = central * C::from_ratio((2 * m * (2 * m - 1)) as i64, (m * m) as i64) * &c2;
    }
    central
}
