use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::basis::LambertBasis;
use super::blocks::{Blocks, IndexSpace, QOperator};
use super::marked::MarkedSeries;
use crate::error::{Error, Result};
use crate::pseries::{Coefficient, TruncatedSeries};

type Series<B> = TruncatedSeries<<B as LambertBasis>::C>;

fn check_tracked(tracked: &[usize]) -> Result<()> {
    if tracked.is_empty() {
        return Err(Error::InvalidArgument("no multiplicity tracked".into()));
    }
    if tracked.contains(&0) {
        return Err(Error::InvalidArgument(
            "multiplicities start at k = 1".into(),
        ));
    }
    let mut sorted = tracked.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != tracked.len() {
        return Err(Error::InvalidArgument(
            "tracked multiplicities repeat".into(),
        ));
    }
    Ok(())
}

/// Marker bounds large enough for exact counts at every length up to the
/// truncation order: a closed walk of length `L` has `N_{2k} <= L / k`.
pub fn exhaustive_bounds(tracked: &[usize], order: usize) -> Vec<usize> {
    tracked.iter().map(|&k| order / k).collect()
}

fn unit(len: usize, a: usize) -> Vec<usize> {
    let mut e = vec![0; len];
    e[a] += 1;
    e
}

/// Joint generating function of `N_{2k}`, `k` in `tracked`:
///
/// `sum_w prod_k (1 + t_k)^{N_{2k}(w)} z^{|w|}`, i.e. the coefficient of
/// `prod t_k^{m_k}` counts `sum_w prod_k binomial(N_{2k}(w), m_k)`.
/// Untracked multiplicities carry no marker.
pub fn joint_genfun<B: LambertBasis>(
    blocks: &Blocks<B>,
    tracked: &[usize],
    bounds: &[usize],
) -> Result<MarkedSeries<B::C>> {
    check_tracked(tracked)?;
    if bounds.len() != tracked.len() {
        return Err(Error::InvalidArgument(
            "one bound per tracked multiplicity".into(),
        ));
    }
    let order = blocks.order();
    let r = tracked.len();
    let mut total = MarkedSeries::new(tracked.to_vec(), bounds.to_vec(), order);
    total.add_term(vec![0; r], &blocks.t0()?);
    for (a, &k) in tracked.iter().enumerate() {
        total.add_term(unit(r, a), &blocks.t1(k));
    }
    for (a, &ka) in tracked.iter().enumerate() {
        for (b, &kb) in tracked.iter().enumerate() {
            let mut e = unit(r, a);
            e[b] += 1;
            total.add_term(e, &blocks.t2(ka, kb)?);
        }
    }

    let kmax = *tracked.iter().max().unwrap();
    let space = IndexSpace::new(kmax);
    if space.dim() > 0 {
        let psi: Vec<Vec<Series<B>>> = tracked
            .iter()
            .map(|&k| blocks.psi(k, &space))
            .collect::<Result<_>>()?;
        let qs: Vec<(usize, QOperator<B::C>)> = tracked
            .iter()
            .enumerate()
            .filter(|(_, &k)| k >= 2)
            .map(|(a, &k)| Ok((a, blocks.q(k, &space)?)))
            .collect::<Result<_>>()?;
        let mut w: Vec<MarkedSeries<B::C>> = (0..space.dim()).map(|_| total.empty_like()).collect();
        for (b, &kb) in tracked.iter().enumerate() {
            if kb < 2 {
                continue;
            }
            for (c, &kc) in tracked.iter().enumerate() {
                let phi = blocks.phi(kb, kc, &space)?;
                let mut e = unit(r, b);
                e[c] += 1;
                for (wi, p) in w.iter_mut().zip(&phi) {
                    wi.add_term(e.clone(), p);
                }
            }
        }
        while w.iter().any(|x| !x.is_zero()) {
            for (a, ps) in psi.iter().enumerate() {
                let mut dot = total.empty_like();
                for (p, wi) in ps.iter().zip(&w) {
                    if !p.is_zero() {
                        dot.add_assign(&wi.mul_series(p));
                    }
                }
                total.add_assign(&dot.times_marker(a));
            }
            let mut next: Vec<MarkedSeries<B::C>> =
                (0..space.dim()).map(|_| total.empty_like()).collect();
            for (a, q) in &qs {
                for (i, row) in q.entries.iter().enumerate() {
                    let mut acc = total.empty_like();
                    for (qij, wj) in row.iter().zip(&w) {
                        if !qij.is_zero() && !wj.is_zero() {
                            acc.add_assign(&wj.mul_series(qij));
                        }
                    }
                    next[i].add_assign(&acc.times_marker(*a));
                }
            }
            w = next;
        }
    }
    Ok(total.z_d_dz())
}

/// `count(l) = sum_{m >= l} (-1)^{m-l} binomial(m, l) c(m)` along every
/// marker axis of a table of binomial moments.
pub fn binomial_inversion(
    moments: &BTreeMap<Vec<usize>, BigRational>,
) -> BTreeMap<Vec<usize>, BigRational> {
    let mut table = moments.clone();
    let dims = match table.keys().next() {
        Some(k) => k.len(),
        None => return table,
    };
    for axis in 0..dims {
        let mut next: BTreeMap<Vec<usize>, BigRational> = BTreeMap::new();
        for (e, c) in &table {
            let m = e[axis];
            let mut binom = BigInt::one();
            for l in (0..=m).rev() {
                // binomial(m, l) built downward from l = m
                let mut key = e.clone();
                key[axis] = l;
                let term = BigRational::from_integer(binom.clone()) * c;
                let slot = next.entry(key).or_insert_with(BigRational::zero);
                if (m - l) % 2 == 0 {
                    *slot += term;
                } else {
                    *slot -= term;
                }
                if l > 0 {
                    binom = binom * l / (m - l + 1);
                }
            }
        }
        next.retain(|_, v| !v.is_zero());
        table = next;
    }
    table
}

/// Exact counts of closed walks of length `2n` by the values of the tracked
/// `N_{2k}`, recovered from binomial moments.
pub fn counts_from_genfun(
    ms: &MarkedSeries<BigRational>,
    n: usize,
) -> Result<BTreeMap<Vec<u64>, BigInt>> {
    if 2 * n > ms.order() {
        return Err(Error::InvalidArgument(format!(
            "length {} exceeds truncation order {}",
            2 * n,
            ms.order()
        )));
    }
    for (&k, &bound) in ms.markers().iter().zip(ms.bounds()) {
        let required = 2 * n / k;
        if bound < required {
            return Err(Error::MarkerOverflow {
                multiplicity: k,
                bound,
                required,
            });
        }
    }
    let moments = ms.z_coefficients(2 * n);
    let counts = binomial_inversion(&moments);
    counts
        .into_iter()
        .map(|(e, c)| {
            if !c.is_integer() || c.is_negative() {
                return Err(Error::RouteMismatch(format!(
                    "non-integral count {c} at {e:?}"
                )));
            }
            Ok((e.into_iter().map(|x| x as u64).collect(), c.to_integer()))
        })
        .collect()
}

/// Inverse of a matrix of series whose constant-term matrix is invertible.
pub fn invert_matrix<C: Coefficient>(
    m: &[Vec<TruncatedSeries<C>>],
) -> Result<Vec<Vec<TruncatedSeries<C>>>> {
    let n = m.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let order = m[0][0].order();
    let mut a: Vec<Vec<TruncatedSeries<C>>> = m.to_vec();
    let mut inv: Vec<Vec<TruncatedSeries<C>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        TruncatedSeries::one(order)
                    } else {
                        TruncatedSeries::zero(order)
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .filter(|&r| !a[r][col].coeff(0).is_zero())
            .max_by(|&x, &y| {
                a[x][col]
                    .coeff(0)
                    .to_f64()
                    .abs()
                    .total_cmp(&a[y][col].coeff(0).to_f64().abs())
            })
            .ok_or(Error::DivByNonUnit)?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].inverse()?;
        for j in 0..n {
            a[col][j] = &a[col][j] * &p;
            inv[col][j] = &inv[col][j] * &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                if !a[col][j].is_zero() {
                    let t = &f * &a[col][j];
                    a[r][j] -= &t;
                }
                if !inv[col][j].is_zero() {
                    let t = &f * &inv[col][j];
                    inv[r][j] -= &t;
                }
            }
        }
    }
    Ok(inv)
}

fn mat_vec<C: Coefficient>(
    m: &[Vec<TruncatedSeries<C>>],
    v: &[TruncatedSeries<C>],
) -> Vec<TruncatedSeries<C>> {
    m.iter()
        .map(|row| {
            let mut acc = TruncatedSeries::zero(v[0].order());
            for (x, y) in row.iter().zip(v) {
                if !x.is_zero() && !y.is_zero() {
                    acc += &(x * y);
                }
            }
            acc
        })
        .collect()
}

fn dot<C: Coefficient>(
    u: &[TruncatedSeries<C>],
    v: &[TruncatedSeries<C>],
    order: usize,
) -> TruncatedSeries<C> {
    let mut acc = TruncatedSeries::zero(order);
    for (x, y) in u.iter().zip(v) {
        if !x.is_zero() && !y.is_zero() {
            acc += &(x * y);
        }
    }
    acc
}

/// Series `F_l` with `sum_w u^{N_{2k}(w)} z^{|w|} = z d/dz sum_l u^l F_l`,
/// for `l = 0..=lmax`, plus the remainder `F_{>lmax}`.
///
/// Obtained by putting `t = u - 1` directly: with `S = (I + Q)^{-1}`,
/// `(I - (u - 1) Q)^{-1} = sum_m u^m (S Q)^m S`.
pub fn u_expansion<B: LambertBasis>(
    blocks: &Blocks<B>,
    k: usize,
    lmax: usize,
) -> Result<(Vec<Series<B>>, Series<B>)> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "multiplicities start at k = 1".into(),
        ));
    }
    let order = blocks.order();
    let t0 = blocks.t0()?;
    let t1 = blocks.t1(k);
    let t2 = blocks.t2(k, k)?;
    // s_m = <Psi | (S Q)^m S Phi>
    let space = IndexSpace::new(k);
    let mut s_terms: Vec<Series<B>> = Vec::with_capacity(lmax + 1);
    if space.dim() > 0 {
        let psi = blocks.psi(k, &space)?;
        let phi = blocks.phi(k, k, &space)?;
        let q = blocks.q(k, &space)?;
        let one = TruncatedSeries::one(order);
        let i_plus_q: Vec<Vec<Series<B>>> = q
            .entries
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, x)| if i == j { &one + x } else { x.clone() })
                    .collect()
            })
            .collect();
        let s = invert_matrix(&i_plus_q)?;
        let mut v = mat_vec(&s, &phi);
        for _ in 0..=lmax {
            s_terms.push(dot(&psi, &v, order));
            v = mat_vec(&s, &q.apply(&v));
        }
    } else {
        s_terms = vec![TruncatedSeries::zero(order); lmax + 1];
    }
    // total(u) = T0 + (u-1) T1 + (u-1)^2 T2 + (u-1)^3 sum_m u^m s_m
    let mut out: Vec<Series<B>> = vec![TruncatedSeries::zero(order); lmax + 1];
    let c = |v: i64| B::C::from_i64(v);
    out[0] += &t0;
    for (p, w) in [(0usize, -1i64), (1, 1)] {
        if p <= lmax {
            out[p] += &t1.scale(&c(w));
        }
    }
    for (p, w) in [(0usize, 1i64), (1, -2), (2, 1)] {
        if p <= lmax {
            out[p] += &t2.scale(&c(w));
        }
    }
    let cube = [(0usize, -1i64), (1, 3), (2, -3), (3, 1)];
    for (l, slot) in out.iter_mut().enumerate() {
        for &(p, w) in &cube {
            if p <= l {
                *slot += &s_terms[l - p].scale(&c(w));
            }
        }
    }
    // the coefficients of u^l sum to total(1) = T0
    let mut rest = t0.clone();
    for x in &out {
        rest -= x;
    }
    Ok((out, rest))
}

/// Binomial moment `sum_w prod_i binomial(N_{2k_i}(w), m_i)` as a series in
/// `z`, from the moment form of the joint generating function.
///
/// Depth `r = sum_i m_i` up to 4 is supported. Depth 1 is `z d/dz T1`,
/// depth 2 is `(2 - [k1 = k2]) z d/dz T2`, and deeper moments sum
/// `<Psi(k_1) | Q(k_2) ... Q(k_{r-2}) Phi(k_{r-1}, k_r)>` over the distinct
/// orderings of the multiset of multiplicities.
pub fn mixed_moment_series<B: LambertBasis>(
    blocks: &Blocks<B>,
    spec: &[(usize, usize)],
) -> Result<Series<B>> {
    let mut ks: Vec<usize> = Vec::new();
    for &(k, m) in spec {
        if k == 0 {
            return Err(Error::InvalidArgument(
                "multiplicities start at k = 1".into(),
            ));
        }
        ks.extend(std::iter::repeat_n(k, m));
    }
    let depth = ks.len();
    if depth > 4 {
        return Err(Error::UnsupportedDepth { depth });
    }
    let order = blocks.order();
    ks.sort_unstable();
    let body = match depth {
        0 => blocks.t0()?,
        1 => blocks.t1(ks[0]),
        2 => {
            let t2 = blocks.t2(ks[0], ks[1])?;
            if ks[0] == ks[1] {
                t2
            } else {
                t2.scale(&B::C::from_i64(2))
            }
        }
        _ => {
            let space = IndexSpace::new(*ks.iter().max().unwrap());
            let mut acc = TruncatedSeries::zero(order);
            for seq in distinct_permutations(&ks) {
                let r = seq.len();
                let mut v = blocks.phi(seq[r - 2], seq[r - 1], &space)?;
                for &k in seq[1..r - 2].iter().rev() {
                    v = blocks.q(k, &space)?.apply(&v);
                }
                acc += &dot(&blocks.psi(seq[0], &space)?, &v, order);
            }
            acc
        }
    };
    Ok(body.z_d_dz())
}

fn distinct_permutations(sorted: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(sorted.len());
    let mut used = vec![false; sorted.len()];
    fn rec(s: &[usize], used: &mut [bool], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == s.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..s.len() {
            if used[i] || (i > 0 && s[i] == s[i - 1] && !used[i - 1]) {
                continue;
            }
            used[i] = true;
            cur.push(s[i]);
            rec(s, used, cur, out);
            cur.pop();
            used[i] = false;
        }
    }
    rec(sorted, &mut used, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutations_of_a_multiset() {
        assert_eq!(distinct_permutations(&[1, 1, 2]).len(), 3);
        assert_eq!(distinct_permutations(&[1, 2, 3, 3]).len(), 12);
        assert_eq!(distinct_permutations(&[2, 2, 2]).len(), 1);
    }

    #[test]
    fn inversion_of_a_single_axis() {
        // counts {1: 4, 2: 2} have binomial moments c0 = 6, c1 = 8, c2 = 2
        let q = |v: i64| BigRational::from_integer(v.into());
        let moments = BTreeMap::from([(vec![0], q(6)), (vec![1], q(8)), (vec![2], q(2))]);
        let counts = binomial_inversion(&moments);
        assert_eq!(counts, BTreeMap::from([(vec![1], q(4)), (vec![2], q(2))]));
    }
}
