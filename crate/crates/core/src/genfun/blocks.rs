use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::basis::LambertBasis;
use crate::error::Result;
use crate::pseries::{Coefficient, RatPoly, TruncatedSeries};

type Series<B> = TruncatedSeries<<B as LambertBasis>::C>;

/// Index pairs `(rho, t)` with `rho + t <= kmax - 2`.
///
/// Every component of `Phi` and every row of `Q` vanishes outside this set,
/// so vectors and matrices are stored on it only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexSpace {
    kmax: usize,
    pairs: Vec<(usize, usize)>,
}

impl IndexSpace {
    pub fn new(kmax: usize) -> Self {
        let mut pairs = Vec::new();
        if kmax >= 2 {
            for rho in 0..=kmax - 2 {
                for t in 0..=kmax - 2 - rho {
                    pairs.push((rho, t));
                }
            }
        }
        Self { kmax, pairs }
    }

    pub fn kmax(&self) -> usize {
        self.kmax
    }

    pub fn dim(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }
}

/// The transfer matrix `Q(k)` on an [`IndexSpace`].
#[derive(Clone, Debug)]
pub struct QOperator<C: Coefficient> {
    pub k: usize,
    pub entries: Vec<Vec<TruncatedSeries<C>>>,
}

impl<C: Coefficient> QOperator<C> {
    pub fn apply(&self, v: &[TruncatedSeries<C>]) -> Vec<TruncatedSeries<C>> {
        self.entries
            .iter()
            .map(|row| {
                let order = v[0].order();
                let mut acc = TruncatedSeries::zero(order);
                for (q, x) in row.iter().zip(v) {
                    if !q.is_zero() && !x.is_zero() {
                        acc += &(q * x);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(TruncatedSeries::is_zero)
    }
}

/// Memoized building blocks of the one-dimensional generating function.
pub struct Blocks<'a, B: LambertBasis> {
    basis: &'a B,
    one_minus_a_pow: Mutex<Vec<Series<B>>>,
    g: Mutex<HashMap<(usize, usize), Series<B>>>,
    h: Mutex<HashMap<(usize, usize), Series<B>>>,
    t2: Mutex<HashMap<(usize, usize), Series<B>>>,
}

fn fact(n: usize) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, i| acc * i)
}

fn binom(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i as i64 + 1))
}

fn sign(e: usize) -> i64 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

impl<'a, B: LambertBasis> Blocks<'a, B> {
    pub fn new(basis: &'a B) -> Self {
        Self {
            basis,
            one_minus_a_pow: Mutex::new(vec![TruncatedSeries::one(basis.order())]),
            g: Mutex::new(HashMap::new()),
            h: Mutex::new(HashMap::new()),
            t2: Mutex::new(HashMap::new()),
        }
    }

    pub fn basis(&self) -> &B {
        self.basis
    }

    pub fn order(&self) -> usize {
        self.basis.order()
    }

    /// `(1 - A)^e`.
    pub fn one_minus_a_pow(&self, e: usize) -> Series<B> {
        let mut cache = self.one_minus_a_pow.lock().unwrap();
        if cache.len() <= e {
            let base = self.basis.one_minus_a();
            while cache.len() <= e {
                let next = &cache[cache.len() - 1] * &base;
                cache.push(next);
            }
        }
        cache[e].clone()
    }

    /// `G_{i,j} = (-1)^{i+j} A^{i+j} sum_f binomial(f,i) binomial(f,j) / f x^f/(1-x^f)`.
    pub fn g(&self, i: usize, j: usize) -> Result<Series<B>> {
        let key = (i.min(j), i.max(j));
        if let Some(s) = self.g.lock().unwrap().get(&key) {
            return Ok(s.clone());
        }
        let p = (&RatPoly::binomial(0, i) * &RatPoly::binomial(0, j))
            .div_by_f()
            .expect("binomial(f, i) vanishes at f = 0");
        let mut s = self.basis.lambert(&p, i + j)?;
        if (i + j) % 2 == 1 {
            s = -s;
        }
        self.g.lock().unwrap().insert(key, s.clone());
        Ok(s)
    }

    /// `H_{i,j} = A^j sum_{f >= max(1, j-i)} binomial(f+i-1, j-1) x^f/(1-x^f)`.
    pub fn h(&self, i: usize, j: usize) -> Result<Series<B>> {
        if let Some(s) = self.h.lock().unwrap().get(&(i, j)) {
            return Ok(s.clone());
        }
        let p = RatPoly::binomial(i as i64 - 1, j - 1);
        let s = self.basis.lambert(&p, j)?;
        self.h.lock().unwrap().insert((i, j), s.clone());
        Ok(s)
    }

    pub fn t0(&self) -> Result<Series<B>> {
        self.basis.t0()
    }

    /// `T1(k) = (1 - A)^k / k`.
    pub fn t1(&self, k: usize) -> Series<B> {
        self.one_minus_a_pow(k)
            .scale(&B::C::from_ratio(1, k as i64))
    }

    /// `T2(k1,k2) = sum binomial(k1-1,l1) binomial(k2-1,l2) (1-A)^{l1+l2} G_{k1-l1,k2-l2}`.
    pub fn t2(&self, k1: usize, k2: usize) -> Result<Series<B>> {
        let key = (k1.min(k2), k1.max(k2));
        if let Some(s) = self.t2.lock().unwrap().get(&key) {
            return Ok(s.clone());
        }
        let mut acc = TruncatedSeries::zero(self.order());
        for l1 in 0..k1 {
            for l2 in 0..k2 {
                let c = B::C::from_i64(binom(k1 - 1, l1) * binom(k2 - 1, l2));
                let term = &self.one_minus_a_pow(l1 + l2) * &self.g(k1 - l1, k2 - l2)?;
                acc += &term.scale(&c);
            }
        }
        self.t2.lock().unwrap().insert(key, acc.clone());
        Ok(acc)
    }

    /// `Psi(k)_{(rho,t)} = [t = 0] (-1)^{rho+1} sum_l binomial(k-1,l) (1-A)^l G_{rho+1,k-l}`.
    pub fn psi(&self, k: usize, space: &IndexSpace) -> Result<Vec<Series<B>>> {
        let order = self.order();
        space
            .pairs()
            .iter()
            .map(|&(rho, t)| {
                let mut acc = TruncatedSeries::zero(order);
                if t != 0 {
                    return Ok(acc);
                }
                for l in 0..k {
                    let term = &self.one_minus_a_pow(l) * &self.g(rho + 1, k - l)?;
                    acc += &term.scale(&B::C::from_i64(binom(k - 1, l)));
                }
                Ok(acc.scale(&B::C::from_i64(-sign(rho))))
            })
            .collect()
    }

    /// `Phi(k1,k2)_{(rho,t)} = (-1)^{rho+1} (k1-1)! / (rho! (k1-2-rho-t)!) T2(k1-1-rho-t, k2)`.
    pub fn phi(&self, k1: usize, k2: usize, space: &IndexSpace) -> Result<Vec<Series<B>>> {
        let order = self.order();
        space
            .pairs()
            .iter()
            .map(|&(rho, t)| {
                if k1 < 2 + rho + t {
                    return Ok(TruncatedSeries::zero(order));
                }
                let c = BigRational::new(
                    fact(k1 - 1) * -sign(rho),
                    fact(rho) * fact(k1 - 2 - rho - t),
                );
                Ok(self
                    .t2(k1 - 1 - rho - t, k2)?
                    .scale(&B::C::from_bigrational(&c)))
            })
            .collect()
    }

    /// `Q(k)` on `space`.
    pub fn q(&self, k: usize, space: &IndexSpace) -> Result<QOperator<B::C>> {
        let order = self.order();
        let mut entries = Vec::with_capacity(space.dim());
        for &(rho, t) in space.pairs() {
            let mut row = Vec::with_capacity(space.dim());
            for &(rr, tt) in space.pairs() {
                let mut acc = TruncatedSeries::zero(order);
                if k >= 2 + rho + t + tt {
                    let top = k - 2 - rho - t - tt;
                    for eta in 0..=top {
                        let c = BigRational::new(
                            fact(k - 1) * sign(rho + eta),
                            fact(eta) * fact(top - eta) * fact(tt) * fact(tt + 1) * fact(rho),
                        );
                        let term = &self.one_minus_a_pow(top - eta)
                            * &self.h(tt + 1, rr + eta + 2 * tt + 2)?;
                        acc += &term.scale(&B::C::from_bigrational(&c));
                    }
                }
                row.push(acc);
            }
            entries.push(row);
        }
        Ok(QOperator { k, entries })
    }
}
