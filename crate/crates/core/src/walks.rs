//! Closed simple random walks on `Z^d`: multiplicity profiles, exhaustive
//! enumeration and uniform Monte Carlo sampling.
//!
//! A walk of length `n` at positions `p_0, ..., p_n` gives a site `q` the
//! multiplicity `[q = p_0] + [q = p_n] + 2 #{0 < i < n : p_i = q}`, so a closed
//! walk visiting a site `k` times (the start counted once) gives it
//! multiplicity `2k`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Largest number of closed walks [`oracle_counts`] will visit.
pub const ENUMERATION_BUDGET: u128 = 5_000_000;

/// One step: `axis` in `0..d` and a direction of `+1` or `-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Step {
    pub axis: u8,
    pub sign: i8,
}

/// A nearest-neighbour walk started at the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Walk {
    dim: usize,
    steps: Vec<Step>,
}

impl Walk {
    pub fn new(dim: usize, steps: Vec<Step>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        if let Some(s) = steps
            .iter()
            .find(|s| s.axis as usize >= dim || s.sign.abs() != 1)
        {
            return Err(Error::InvalidArgument(format!("bad step {s:?}")));
        }
        Ok(Self { dim, steps })
    }

    /// A walk on the line from a list of `+1` / `-1` steps.
    pub fn on_line(steps: &[i8]) -> Result<Self> {
        Self::new(
            1,
            steps.iter().map(|&sign| Step { axis: 0, sign }).collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// `p_0, ..., p_n`.
    pub fn positions(&self) -> Vec<Vec<i64>> {
        let mut p = vec![0i64; self.dim];
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        out.push(p.clone());
        for s in &self.steps {
            p[s.axis as usize] += s.sign as i64;
            out.push(p.clone());
        }
        out
    }

    pub fn is_closed(&self) -> bool {
        self.positions()
            .last()
            .is_some_and(|p| p.iter().all(|&c| c == 0))
    }
}

/// Multiplicity of site `q` in `walk`.
pub fn multiplicity(q: &[i64], walk: &Walk) -> u64 {
    let pos = walk.positions();
    let n = pos.len() - 1;
    pos.iter()
        .enumerate()
        .filter(|(_, p)| p.as_slice() == q)
        .map(|(i, _)| if i == 0 || i == n { 1 } else { 2 })
        .sum()
}

/// Number of sites of each multiplicity.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RangeProfile {
    by_multiplicity: BTreeMap<u64, u64>,
}

impl RangeProfile {
    /// Sites of multiplicity exactly `m`.
    pub fn sites_with_multiplicity(&self, m: u64) -> u64 {
        self.by_multiplicity.get(&m).copied().unwrap_or(0)
    }

    /// `N_{2k}`: sites of multiplicity `2k`.
    pub fn n2k(&self, k: u64) -> u64 {
        self.sites_with_multiplicity(2 * k)
    }

    /// Number of distinct sites visited.
    pub fn range(&self) -> u64 {
        self.by_multiplicity.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.by_multiplicity.iter().map(|(&m, &c)| (m, c))
    }
}

pub fn profile(walk: &Walk) -> RangeProfile {
    let pos = walk.positions();
    let n = pos.len() - 1;
    let mut mult: HashMap<&[i64], u64> = HashMap::new();
    for (i, p) in pos.iter().enumerate() {
        *mult.entry(p.as_slice()).or_default() += if i == 0 || i == n { 1 } else { 2 };
    }
    let mut by_multiplicity = BTreeMap::new();
    for m in mult.into_values() {
        *by_multiplicity.entry(m).or_default() += 1;
    }
    RangeProfile { by_multiplicity }
}

/// Number of closed walks of length `2n` on `Z^d`.
pub fn closed_walk_count(n: usize, d: usize) -> BigUint {
    // c_d(n) = sum_j binomial(2n, 2j) binomial(2j, j) c_{d-1}(n - j)
    let mut prev: Vec<BigUint> = (0..=n).map(|m| binomial(2 * m, m)).collect();
    for _ in 1..d {
        let next = (0..=n)
            .map(|m| {
                (0..=m)
                    .map(|j| binomial(2 * m, 2 * j) * binomial(2 * j, j) * &prev[m - j])
                    .sum()
            })
            .collect();
        prev = next;
    }
    if d == 0 {
        return BigUint::from((n == 0) as u8);
    }
    prev[n].clone()
}

/// `binomial(n, k)`, zero for `k > n`.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::from(0u8);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u8);
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Which statistics of a closed walk the oracle records.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleQuery {
    /// Values of `k` whose `N_{2k}` is recorded, in this order.
    pub tracked: Vec<usize>,
    /// Append the range after the tracked counts.
    pub range: bool,
}

impl OracleQuery {
    pub fn tracked(ks: &[usize]) -> Self {
        Self {
            tracked: ks.to_vec(),
            range: false,
        }
    }

    pub fn with_range(mut self) -> Self {
        self.range = true;
        self
    }

    /// Key labels, e.g. `N4=1,ran=3`.
    pub fn label(&self, key: &[u64]) -> String {
        let mut parts: Vec<String> = self
            .tracked
            .iter()
            .zip(key)
            .map(|(k, v)| format!("N{}={}", 2 * k, v))
            .collect();
        if self.range {
            parts.push(format!("ran={}", key[self.tracked.len()]));
        }
        parts.join(",")
    }
}

/// Exhaustive counts of closed walks of length `2n` on `Z^d` by the queried
/// statistics. The empty walk is not part of the problem, so `n >= 1`.
pub fn oracle_counts(n: usize, d: usize, query: &OracleQuery) -> Result<BTreeMap<Vec<u64>, u64>> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidArgument("n and d must be positive".into()));
    }
    if query.tracked.contains(&0) {
        return Err(Error::InvalidArgument(
            "tracked multiplicities start at k = 1".into(),
        ));
    }
    let walks = closed_walk_count(n, d).to_u128().unwrap_or(u128::MAX);
    if walks > ENUMERATION_BUDGET {
        return Err(Error::BudgetExceeded {
            walks,
            budget: ENUMERATION_BUDGET,
        });
    }
    let len = 2 * n;
    let prefixes = closed_prefixes(d, len, 6.min(len));
    let partials: Vec<BTreeMap<Vec<u64>, u64>> = prefixes
        .par_iter()
        .map(|prefix| {
            let mut e = Enumerator::new(n, d, query);
            e.run(prefix);
            e.counts
        })
        .collect();
    let mut total = BTreeMap::new();
    for part in partials {
        for (k, v) in part {
            *total.entry(k).or_insert(0) += v;
        }
    }
    Ok(total)
}

fn step_list(d: usize) -> Vec<Step> {
    (0..d as u8)
        .flat_map(|axis| [Step { axis, sign: 1 }, Step { axis, sign: -1 }])
        .collect()
}

/// Prefixes of length `depth` that can still be closed within `len` steps.
fn closed_prefixes(d: usize, len: usize, depth: usize) -> Vec<Vec<Step>> {
    let steps = step_list(d);
    let mut out = vec![(Vec::new(), vec![0i64; d])];
    for t in 0..depth {
        let mut next = Vec::new();
        for (prefix, pos) in out {
            for s in &steps {
                let mut p: Vec<i64> = pos.clone();
                p[s.axis as usize] += s.sign as i64;
                let dist: i64 = p.iter().map(|c| c.abs()).sum();
                if (dist as usize) < len - t {
                    let mut q = prefix.clone();
                    q.push(*s);
                    next.push((q, p));
                }
            }
        }
        out = next;
    }
    out.into_iter().map(|(p, _)| p).collect()
}

/// Depth-first enumeration keeping the histogram of visit counts current.
struct Enumerator<'q> {
    len: usize,
    side: i64,
    steps: Vec<Step>,
    visits: Vec<u32>,
    hist: Vec<u64>,
    pos: Vec<i64>,
    query: &'q OracleQuery,
    counts: BTreeMap<Vec<u64>, u64>,
}

impl<'q> Enumerator<'q> {
    fn new(n: usize, d: usize, query: &'q OracleQuery) -> Self {
        let side = 2 * n as i64 + 1;
        let cells = (side as usize).pow(d as u32);
        let mut e = Self {
            len: 2 * n,
            side,
            steps: step_list(d),
            visits: vec![0; cells],
            hist: vec![0; 2 * n + 2],
            pos: vec![0; d],
            query,
            counts: BTreeMap::new(),
        };
        let origin = e.cell();
        e.visits[origin] = 1;
        e.hist[1] = 1;
        e
    }

    fn cell(&self) -> usize {
        let n = (self.side - 1) / 2;
        self.pos
            .iter()
            .fold(0i64, |acc, &c| acc * self.side + c + n) as usize
    }

    fn dist(&self) -> usize {
        self.pos.iter().map(|c| c.unsigned_abs() as usize).sum()
    }

    fn enter(&mut self, s: Step, counted: bool) {
        self.pos[s.axis as usize] += s.sign as i64;
        if counted {
            let c = self.cell();
            let v = self.visits[c] as usize;
            if v > 0 {
                self.hist[v] -= 1;
            }
            self.hist[v + 1] += 1;
            self.visits[c] += 1;
        }
    }

    fn leave(&mut self, s: Step, counted: bool) {
        if counted {
            let c = self.cell();
            self.visits[c] -= 1;
            let v = self.visits[c] as usize;
            self.hist[v + 1] -= 1;
            if v > 0 {
                self.hist[v] += 1;
            }
        }
        self.pos[s.axis as usize] -= s.sign as i64;
    }

    fn run(&mut self, prefix: &[Step]) {
        for (t, s) in prefix.iter().enumerate() {
            self.enter(*s, t + 1 < self.len);
        }
        self.descend(prefix.len());
    }

    fn descend(&mut self, t: usize) {
        if t == self.len {
            self.record();
            return;
        }
        for i in 0..self.steps.len() {
            let s = self.steps[i];
            self.pos[s.axis as usize] += s.sign as i64;
            let ok = self.dist() < self.len - t;
            self.pos[s.axis as usize] -= s.sign as i64;
            if !ok {
                continue;
            }
            let counted = t + 1 < self.len;
            self.enter(s, counted);
            self.descend(t + 1);
            self.leave(s, counted);
        }
    }

    fn record(&mut self) {
        let mut key: Vec<u64> = self
            .query
            .tracked
            .iter()
            .map(|&k| self.hist.get(k).copied().unwrap_or(0))
            .collect();
        if self.query.range {
            key.push(self.hist.iter().sum());
        }
        *self.counts.entry(key).or_insert(0) += 1;
    }
}

/// Monte Carlo estimates of `E_n(N_{2k})`, `k = 1..=kmax`, and of the range.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleMoments {
    pub n: usize,
    pub d: usize,
    pub samples: usize,
    pub seed: u64,
    /// `mean[k - 1]` estimates `E_n(N_{2k})`.
    pub mean: Vec<f64>,
    pub stderr: Vec<f64>,
    pub range_mean: f64,
    pub range_stderr: f64,
}

const BATCH: usize = 1024;

/// Sample uniform closed walks of length `2n` on `Z^d`.
///
/// Samples are drawn in fixed batches, each from its own ChaCha stream of
/// `seed`, and reduced in batch order, so the result depends only on the
/// arguments and not on the number of threads.
pub fn sample_moments(
    n: usize,
    d: usize,
    samples: usize,
    seed: u64,
    kmax: usize,
) -> Result<SampleMoments> {
    if n == 0 || d == 0 || samples < 2 {
        return Err(Error::InvalidArgument(
            "need n >= 1, d >= 1 and at least two samples".into(),
        ));
    }
    if d > 5 {
        return Err(Error::InvalidArgument("sampling supports d <= 5".into()));
    }
    let sampler = PairCountSampler::new(n, d);
    let batches = samples.div_ceil(BATCH);
    let sums: Vec<Vec<f64>> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let count = BATCH.min(samples - b * BATCH);
            let mut acc = vec![0.0; 2 * (kmax + 1)];
            let mut steps = Vec::with_capacity(2 * n);
            let mut keys = Vec::with_capacity(2 * n + 1);
            for _ in 0..count {
                sampler.sample_steps(&mut rng, &mut steps);
                let (nk, ran) = sampled_profile(n, d, &steps, kmax, &mut keys);
                for (k, v) in nk.iter().enumerate() {
                    acc[2 * k] += *v as f64;
                    acc[2 * k + 1] += (*v as f64).powi(2);
                }
                acc[2 * kmax] += ran as f64;
                acc[2 * kmax + 1] += (ran as f64).powi(2);
            }
            acc
        })
        .collect();
    let mut total = vec![0.0; 2 * (kmax + 1)];
    for s in sums {
        for (t, v) in total.iter_mut().zip(s) {
            *t += v;
        }
    }
    let m = samples as f64;
    let stat = |i: usize| {
        let mean = total[2 * i] / m;
        let var = (total[2 * i + 1] / m - mean * mean).max(0.0) * m / (m - 1.0);
        (mean, (var / m).sqrt())
    };
    let (mean, stderr): (Vec<f64>, Vec<f64>) = (0..kmax).map(stat).unzip();
    let (range_mean, range_stderr) = stat(kmax);
    Ok(SampleMoments {
        n,
        d,
        samples,
        seed,
        mean,
        stderr,
        range_mean,
        range_stderr,
    })
}

/// Draws the per-axis pair counts `(n_1, ..., n_d)` with the exact law of a
/// uniform closed walk, then shuffles the corresponding step multiset.
struct PairCountSampler {
    n: usize,
    d: usize,
    /// `cdf[(dim, m)]`: cumulative law of the pairs on the first of `dim` axes.
    cdf: HashMap<(usize, usize), Vec<f64>>,
}

impl PairCountSampler {
    fn new(n: usize, d: usize) -> Self {
        let ln_fact: Vec<f64> = std::iter::once(0.0)
            .chain((1..=2 * n).scan(0.0, |acc, i| {
                *acc += (i as f64).ln();
                Some(*acc)
            }))
            .collect();
        let ln_binom = |a: usize, b: usize| ln_fact[a] - ln_fact[b] - ln_fact[a - b];
        // ln c_dim(m) for all dim <= d, m <= n
        let mut ln_c = vec![vec![0.0; n + 1]; d + 1];
        for m in 0..=n {
            ln_c[1][m] = ln_binom(2 * m, m);
        }
        for dim in 2..=d {
            for m in 0..=n {
                let terms: Vec<f64> = (0..=m)
                    .map(|j| ln_binom(2 * m, 2 * j) + ln_binom(2 * j, j) + ln_c[dim - 1][m - j])
                    .collect();
                ln_c[dim][m] = log_sum_exp(&terms);
            }
        }
        let mut cdf = HashMap::new();
        for dim in 2..=d {
            let ms: Vec<usize> = if dim == d { vec![n] } else { (0..=n).collect() };
            for m in ms {
                let mut acc = 0.0;
                let table: Vec<f64> = (0..=m)
                    .map(|j| {
                        let lw = ln_binom(2 * m, 2 * j) + ln_binom(2 * j, j) + ln_c[dim - 1][m - j]
                            - ln_c[dim][m];
                        acc += lw.exp();
                        acc
                    })
                    .collect();
                cdf.insert((dim, m), table);
            }
        }
        Self { n, d, cdf }
    }

    fn sample_steps(&self, rng: &mut ChaCha8Rng, steps: &mut Vec<Step>) {
        steps.clear();
        let mut left = self.n;
        for axis in 0..self.d {
            let dims_left = self.d - axis;
            let pairs = if dims_left == 1 {
                left
            } else {
                let table = &self.cdf[&(dims_left, left)];
                let u: f64 = rng.random::<f64>() * table[table.len() - 1];
                table.partition_point(|&c| c < u).min(left)
            };
            for sign in [1i8, -1] {
                steps.extend(std::iter::repeat_n(
                    Step {
                        axis: axis as u8,
                        sign,
                    },
                    pairs,
                ));
            }
            left -= pairs;
        }
        steps.shuffle(rng);
    }
}

fn log_sum_exp(v: &[f64]) -> f64 {
    let m = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// `(N_2, ..., N_{2 kmax})` and the range of a closed walk given by its steps.
fn sampled_profile(
    n: usize,
    d: usize,
    steps: &[Step],
    kmax: usize,
    keys: &mut Vec<u64>,
) -> (Vec<u64>, u64) {
    let side = 2 * n as u64 + 1;
    let mut pos = vec![n as i64; d];
    keys.clear();
    for s in &steps[..steps.len() - 1] {
        pos[s.axis as usize] += s.sign as i64;
        keys.push(pos.iter().fold(0u64, |acc, &c| acc * side + c as u64));
    }
    keys.push(
        vec![n as i64; d]
            .iter()
            .fold(0u64, |acc, &c| acc * side + c as u64),
    );
    keys.sort_unstable();
    let mut nk = vec![0u64; kmax];
    let mut ran = 0;
    let mut i = 0;
    while i < keys.len() {
        let mut j = i;
        while j < keys.len() && keys[j] == keys[i] {
            j += 1;
        }
        ran += 1;
        let visits = j - i;
        if visits <= kmax {
            nk[visits - 1] += 1;
        }
        i = j;
    }
    (nk, ran)
}

/// Exact counts of one-dimensional closed walks of length `2n` by
/// `N_{2k} = l` for `l = 0..=lmax`, with the last entry collecting `l > lmax`.
///
/// Independent of enumeration: a closed walk from the origin is determined
/// up to the order of its excursions by the number `u_x` of up-crossings of
/// every edge `(x, x+1)`, site `x` is visited `u_{x-1} + u_x` times, and the
/// walks with a given crossing profile are counted by a product of
/// binomials. The profiles are summed by a transfer recursion along the line.
pub fn edge_profile_counts(n: usize, k: usize, lmax: usize) -> Result<Vec<BigUint>> {
    if n == 0 || k == 0 {
        return Err(Error::InvalidArgument("n and k must be positive".into()));
    }
    let width = lmax + 2;
    let mark = |visits: usize| usize::from(visits == k);
    let shift = |poly: &[BigUint], by: usize, w: &BigUint, acc: &mut [BigUint]| {
        for (l, c) in poly.iter().enumerate() {
            if !c.is_zero() {
                acc[(l + by).min(width - 1)] += c * w;
            }
        }
    };
    // side[p][b]: sites beyond an edge crossed upward p times, b crossings left
    let mut side = vec![vec![vec![BigUint::zero(); width]; n + 1]; n + 1];
    for b in 0..=n {
        for p in 1..=n - b {
            let mut acc = vec![BigUint::zero(); width];
            if b == 0 {
                acc[mark(p)] += 1u32;
            }
            for u in 1..=b {
                let w = binomial(p + u - 1, u);
                let next = side[u][b - u].clone();
                shift(&next, mark(p + u), &w, &mut acc);
            }
            side[p][b] = acc;
        }
    }
    let mut empty = vec![BigUint::zero(); width];
    empty[0] = BigUint::from(1u32);
    let part = |p: usize, b: usize| -> Option<&Vec<BigUint>> {
        match (p, b) {
            (0, 0) => Some(&empty),
            (0, _) => None,
            _ => Some(&side[p][b]),
        }
    };
    let mut out = vec![BigUint::zero(); width];
    for up in 0..=n {
        for down in 0..=n - up {
            if up + down == 0 {
                continue;
            }
            let w = binomial(up + down, up);
            let rest = n - up - down;
            for a in 0..=rest {
                let (Some(r), Some(l)) = (part(up, a), part(down, rest - a)) else {
                    continue;
                };
                let mut prod = vec![BigUint::zero(); width];
                for (i, x) in r.iter().enumerate() {
                    if !x.is_zero() {
                        shift(l, i, x, &mut prod);
                    }
                }
                shift(&prod, mark(up + down), &w, &mut out);
            }
        }
    }
    Ok(out)
}
