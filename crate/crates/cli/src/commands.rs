//! Subcommand implementations.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use walkrange::asymptotics::{
    covariance_limit, doublepoint_tail, extrapolate_probability, limiting_rates, tail_rate_fit, xi,
    TailSource,
};
use walkrange::error::{Error, Result};
use walkrange::genfun::{
    distribution, distribution_float, joint_counts, mixed_moment, mixed_moment_float,
    range_distribution,
};
use walkrange::moments::{
    asymptotic_first_moment, asymptotic_range_mean, first_moment_exact, range_mean_exact,
};
use walkrange::pseries::ratio_to_f64;
use walkrange::walks::{binomial, oracle_counts, OracleQuery};

use crate::report::{round_dp, round_sig, Report};
use crate::{BackendArg, Outcome};

/// Largest series order run on the exact backend by default.
pub const EXACT_ORDER_LIMIT: usize = 512;

fn choose_backend(n: usize, backend: Option<BackendArg>) -> BackendArg {
    backend.unwrap_or(if 2 * n <= EXACT_ORDER_LIMIT {
        BackendArg::Exact
    } else {
        BackendArg::Float
    })
}

fn backend_name(b: BackendArg) -> &'static str {
    match b {
        BackendArg::Exact => "exact",
        BackendArg::Float => "float",
    }
}

fn ratio(count: &BigInt, total: &BigInt) -> f64 {
    ratio_to_f64(&BigRational::new(count.clone(), total.clone()))
}

fn ok(report: Report) -> Result<Outcome> {
    Ok(Outcome {
        report,
        failed: false,
    })
}

pub fn dist(
    n: usize,
    k: usize,
    lmax: usize,
    backend: Option<BackendArg>,
    digits: usize,
) -> Result<Outcome> {
    let backend = choose_backend(n, backend);
    let mut report = Report::new("dist")
        .param("n", n)
        .param("k", k)
        .param("lmax", lmax)
        .param("backend", backend_name(backend));
    report.note("statistic", format!("N{}", 2 * k));
    match backend {
        BackendArg::Exact => {
            let d = distribution(n, k, lmax)?;
            let rows = d
                .counts
                .iter()
                .enumerate()
                .map(|(l, c)| {
                    vec![
                        l.into(),
                        c.to_string().into(),
                        round_sig(ratio(c, &d.total), digits).into(),
                    ]
                })
                .collect();
            report.table(&["l", "count", "probability"], rows);
            report.note("tail_count", d.tail.to_string());
            report.note(
                "tail_probability",
                round_sig(ratio(&d.tail, &d.total), digits),
            );
            report.note("total", d.total.to_string());
        }
        BackendArg::Float => {
            let d = distribution_float(n, k, lmax)?;
            let rows = d
                .probabilities
                .iter()
                .enumerate()
                .map(|(l, p)| vec![l.into(), round_sig(*p, digits).into()])
                .collect();
            report.table(&["l", "probability"], rows);
            report.note("tail_probability", round_sig(d.tail, digits));
            if k > 2 {
                report.note(
                    "warning",
                    "float cancellation grows with k; compare with the exact backend",
                );
            }
        }
    }
    ok(report)
}

pub fn range_dist(n: usize, mmax: usize, digits: usize) -> Result<Outcome> {
    let d = range_distribution(n, mmax)?;
    let mut report = Report::new("range-dist").param("n", n).param("mmax", mmax);
    let rows = d
        .counts
        .iter()
        .map(|(m, c)| {
            vec![
                (*m).into(),
                c.to_string().into(),
                round_sig(ratio(c, &d.total), digits).into(),
            ]
        })
        .collect();
    report.table(&["m", "count", "probability"], rows);
    report.note("tail_count", d.tail.to_string());
    report.note("total", d.total.to_string());
    report.note("backend", "exact");
    ok(report)
}

/// Parse `"k:m,k:m"` into `[(k, m)]`.
pub fn parse_spec(spec: &str) -> Result<Vec<(usize, usize)>> {
    spec.split(',')
        .map(|part| {
            let (k, m) = part
                .split_once(':')
                .ok_or_else(|| Error::InvalidArgument(format!("expected k:m, got {part:?}")))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidArgument(format!("not a count: {s:?}")))
            };
            Ok((parse(k)?, parse(m)?))
        })
        .collect()
}

pub fn moments(
    spec: &str,
    n: usize,
    backend: Option<BackendArg>,
    digits: usize,
) -> Result<Outcome> {
    let parsed = parse_spec(spec)?;
    let backend = choose_backend(n, backend);
    let mut report = Report::new("moments")
        .param("spec", spec)
        .param("n", n)
        .param("backend", backend_name(backend));
    let (sum, mean): (Value, f64) = match backend {
        BackendArg::Exact => {
            let s = mixed_moment(&parsed, n)?;
            let total = BigInt::from(binomial(2 * n, n));
            (s.to_string().into(), ratio(&s, &total))
        }
        BackendArg::Float => (Value::Null, mixed_moment_float(&parsed, n)?),
    };
    report.table(
        &["spec", "sum", "mean"],
        vec![vec![spec.into(), sum, round_sig(mean, digits).into()]],
    );
    report.note(
        "definition",
        "sum over closed walks of prod binomial(N_2k, m); mean divides by binomial(2n, n)",
    );
    ok(report)
}

pub fn first_moment(d: usize, k: usize, n: usize, digits: usize) -> Result<Outcome> {
    let mut report = Report::new("first-moment")
        .param("d", d)
        .param("k", k)
        .param("n", n);
    let mean = ratio_to_f64(&first_moment_exact(n, k, d)?);
    let range = ratio_to_f64(&range_mean_exact(n, d)?);
    let row = |name: String, exact: f64, asym: Result<f64>| -> Vec<Value> {
        let (a, r) = match asym {
            Ok(a) => (
                round_sig(a, digits).into(),
                round_sig(exact / a, digits).into(),
            ),
            Err(_) => (Value::Null, Value::Null),
        };
        vec![name.into(), round_sig(exact, digits).into(), a, r]
    };
    let rows = vec![
        row(
            format!("N{}", 2 * k),
            mean,
            asymptotic_first_moment(n, k, d),
        ),
        row("ran".into(), range, asymptotic_range_mean(n, d)),
    ];
    report.table(&["statistic", "mean", "asymptotic", "ratio"], rows);
    report.note("backend", "exact");
    ok(report)
}

/// Rows `l` of the doublepoint table.
pub const TABLE1_ROWS: [usize; 7] = [0, 1, 2, 3, 4, 5, 10];
/// Length `2n` of the doublepoint table.
pub const TABLE1_N: usize = 39;
/// Largest `n` of the extrapolation grid `n, n/2, n/4, n/8`.
pub const EXTRAPOLATION_N: usize = 160;

/// Pairs of the covariance table.
pub fn table3_pairs() -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for k1 in 1..=5 {
        for k2 in k1..=5 {
            pairs.push((k1, k2));
        }
        pairs.push((k1, 100));
    }
    pairs.push((100, 100));
    pairs.push((100, 101));
    pairs
}

pub fn asymp_table(table: u8, kmax: usize, digits: usize) -> Result<Outcome> {
    match table {
        1 => table1(digits),
        2 => table2(kmax, digits),
        3 => table3(digits),
        _ => Err(Error::InvalidArgument(format!("no table {table}"))),
    }
}

fn table1(digits: usize) -> Result<Outcome> {
    let lmax = *TABLE1_ROWS.last().unwrap();
    let d = distribution(TABLE1_N, 2, lmax)?;
    let law = doublepoint_tail();
    let limits: Vec<(f64, &str, Option<f64>)> = TABLE1_ROWS
        .par_iter()
        .map(|&l| {
            if l <= 2 {
                let e = extrapolate_probability(2, l, EXTRAPOLATION_N)?;
                Ok((e.value, "extrapolated", Some(e.error)))
            } else {
                Ok((law.predict(l), "tail-law", None))
            }
        })
        .collect::<Result<_>>()?;
    let rows = TABLE1_ROWS
        .iter()
        .zip(&limits)
        .map(|(&l, (limit, method, err))| {
            vec![
                l.into(),
                d.counts[l].to_string().into(),
                round_sig(ratio(&d.counts[l], &d.total), digits).into(),
                round_sig(*limit, digits).into(),
                (*method).into(),
                err.map(|e| round_sig(e, 2)).into(),
            ]
        })
        .collect();
    let mut report = Report::new("asymp").param("table", 1);
    report.table(
        &[
            "l",
            "count",
            "probability",
            "limit",
            "limit_method",
            "limit_error",
        ],
        rows,
    );
    report.note("n", TABLE1_N);
    report.note(
        "extrapolation",
        format!(
            "Richardson in 1/n on n = {0}/8, {0}/4, {0}/2, {0}",
            EXTRAPOLATION_N
        ),
    );
    report.note("alpha", round_dp(law.rates[0], digits));
    report.note("theta0", round_dp(law.theta0[0], digits));
    report.note("theta1", round_dp(law.theta1[0], digits));
    ok(report)
}

fn table2(kmax: usize, digits: usize) -> Result<Outcome> {
    if !(2..=12).contains(&kmax) {
        return Err(Error::InvalidArgument("kmax must lie in 2..=12".into()));
    }
    type Row = (usize, Vec<(f64, f64)>, Result<f64>);
    let per_k: Vec<Row> = (2..=kmax)
        .into_par_iter()
        .map(|k| {
            let rates = limiting_rates(k)?.iter().map(|a| (a.re, a.im)).collect();
            let fit = tail_rate_fit(k, TailSource::Limit, 6, 30).map(|f| f.residual);
            Ok((k, rates, fit))
        })
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    let mut fits = Map::new();
    for (k, rates, fit) in per_k {
        for (i, (re, im)) in rates.iter().take(6).enumerate() {
            rows.push(vec![
                k.into(),
                (i + 1).into(),
                round_dp(*re, digits).into(),
                round_dp(*im, digits).into(),
            ]);
        }
        fits.insert(
            format!("k{k}"),
            match fit {
                Ok(r) => json!({ "residual": round_sig(r, 2) }),
                Err(e) => json!({ "error": e.to_string() }),
            },
        );
    }
    let mut report = Report::new("asymp").param("table", 2).param("kmax", kmax);
    report.table(&["k", "i", "alpha", "imag"], rows);
    report.note(
        "method",
        "alpha = mu / (1 + mu) over the eigenvalues mu of the transfer matrix at z = 1/2",
    );
    report.note("prony_fit", Value::Object(fits));
    ok(report)
}

fn table3(digits: usize) -> Result<Outcome> {
    let pairs = table3_pairs();
    let values: Vec<f64> = pairs
        .par_iter()
        .map(|&(a, b)| covariance_limit(a, b))
        .collect::<Result<_>>()?;
    let rows = pairs
        .iter()
        .zip(values)
        .map(|(&(a, b), v)| vec![a.into(), b.into(), round_dp(v, digits).into()])
        .collect();
    let mut report = Report::new("asymp").param("table", 3);
    report.table(&["k1", "k2", "covariance"], rows);
    ok(report)
}

pub fn asymp_xi(r: u32, digits: usize) -> Result<Outcome> {
    if r < 2 {
        return Err(Error::InvalidArgument("xi moments need r >= 2".into()));
    }
    let mut report = Report::new("asymp").param("xi", r);
    report.table(
        &["r", "xi"],
        vec![vec![r.into(), round_dp(xi(r), digits).into()]],
    );
    ok(report)
}

pub fn oracle(n: usize, d: usize, track: &[usize], range: bool) -> Result<Outcome> {
    let mut query = OracleQuery::tracked(track);
    if range {
        query = query.with_range();
    }
    let counts = oracle_counts(n, d, &query)?;
    let mut results = Map::new();
    for (key, c) in &counts {
        results.insert(query.label(key), Value::from(*c));
    }
    let track_param: Vec<Value> = track.iter().map(|&k| k.into()).collect();
    let mut report = Report::new("oracle")
        .param("n", n)
        .param("d", d)
        .param("track", track_param)
        .param("range", range);
    report.results = Value::Object(results);
    report.note("walks", counts.values().sum::<u64>());
    ok(report)
}

const VERIFY_TRACKED: [usize; 3] = [1, 2, 3];

/// Mismatches of the joint counts and of the range histogram at length `2n`.
fn verify_length(n: usize, joint: &BTreeMap<Vec<u64>, BigInt>) -> Result<[usize; 2]> {
    let oracle = oracle_counts(n, 1, &OracleQuery::tracked(&VERIFY_TRACKED))?;
    let mut bad = oracle
        .iter()
        .filter(|(key, c)| joint.get(*key) != Some(&BigInt::from(**c)))
        .count();
    bad += joint.keys().filter(|k| !oracle.contains_key(*k)).count();
    let ranges = oracle_counts(n, 1, &OracleQuery::tracked(&[]).with_range())?;
    let dist = range_distribution(n, n + 1)?;
    let bad_range = dist
        .counts
        .iter()
        .filter(|(m, c)| *c != BigInt::from(ranges.get(&vec![*m as u64]).copied().unwrap_or(0)))
        .count();
    Ok([bad, bad_range])
}

pub fn verify(n_max: usize) -> Result<Outcome> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("n-max must be positive".into()));
    }
    let joint = joint_counts(n_max, &VERIFY_TRACKED)?;
    let cases: Vec<(usize, &str, usize)> = (1..=n_max)
        .into_par_iter()
        .flat_map_iter(|n| match verify_length(n, &joint[n - 1]) {
            Ok([a, b]) => vec![(n, "joint N2,N4,N6", a), (n, "range", b)],
            Err(_) => vec![(n, "error", 1)],
        })
        .collect();
    let mismatches: usize = cases.iter().map(|c| c.2).sum();
    let rows = cases
        .iter()
        .map(|&(n, case, bad)| {
            vec![
                n.into(),
                case.into(),
                if bad == 0 { "PASS" } else { "FAIL" }.into(),
                bad.into(),
            ]
        })
        .collect();
    let mut report = Report::new("verify").param("n_max", n_max);
    report.table(&["n", "case", "status", "mismatches"], rows);
    report.note("mismatches", mismatches);
    Ok(Outcome {
        report,
        failed: mismatches > 0,
    })
}
