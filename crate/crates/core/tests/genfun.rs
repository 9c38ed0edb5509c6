use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use walkrange::genfun::*;
use walkrange::pseries::{BaseSeries, ExactSeries, TruncatedSeries};
use walkrange::walks::{oracle_counts, OracleQuery};
use walkrange::Error;

fn q(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

fn series(coeffs: &[i64]) -> ExactSeries {
    TruncatedSeries::new(coeffs.iter().map(|&c| q(c)).collect())
}

#[test]
fn g_and_h_blocks() {
    let base = BaseSeries::<BigRational>::new(4);
    let b = Blocks::new(&base);
    assert_eq!(b.g(1, 1).unwrap(), series(&[0, 0, 1, 0, 1]));
    assert_eq!(b.g(1, 2).unwrap(), b.g(2, 1).unwrap());

    let base2 = BaseSeries::<BigRational>::new(2);
    let b2 = Blocks::new(&base2);
    assert_eq!(b2.g(1, 2).unwrap(), ExactSeries::zero(2));
    assert_eq!(b2.h(1, 1).unwrap(), series(&[0, 0, 1]));

    let base6 = BaseSeries::<BigRational>::new(6);
    let b6 = Blocks::new(&base6);
    assert_eq!(b6.h(2, 4).unwrap(), series(&[0, 0, 0, 0, 1, 0, 0]));
    assert_eq!(b6.h(1, 3).unwrap().valuation(), Some(4));
}

#[test]
fn t_terms() {
    let base = BaseSeries::<BigRational>::new(6);
    let b = Blocks::new(&base);
    assert_eq!(b.t0().unwrap().z_d_dz(), series(&[0, 0, 2, 0, 6, 0, 20]));
    assert_eq!(b.t1(1).z_d_dz(), series(&[0, 0, 4, 0, 8, 0, 24]));
    assert_eq!(b.t2(1, 1).unwrap(), b.g(1, 1).unwrap());
    assert_eq!(b.t2(2, 3).unwrap(), b.t2(3, 2).unwrap());
}

#[test]
fn transfer_matrix_and_vectors() {
    let base = BaseSeries::<BigRational>::new(10);
    let b = Blocks::new(&base);
    let space2 = IndexSpace::new(2);
    let q2 = b.q(2, &space2).unwrap();
    assert_eq!(space2.dim(), 1);
    assert_eq!(q2.entries[0][0], b.h(1, 2).unwrap());
    assert_eq!(q2.entries[0][0], b.g(1, 1).unwrap());

    let space = IndexSpace::new(5);
    for k in 1..=5 {
        let psi = b.psi(k, &space).unwrap();
        for (&(_, t), p) in space.pairs().iter().zip(&psi) {
            if t != 0 {
                assert!(p.is_zero());
            }
        }
        for k2 in 1..=3 {
            if k == 1 {
                assert!(b
                    .phi(1, k2, &space)
                    .unwrap()
                    .iter()
                    .all(TruncatedSeries::is_zero));
            }
        }
        let qk = b.q(k, &space).unwrap();
        for (&(rho, t), row) in space.pairs().iter().zip(&qk.entries) {
            if rho + t + 2 > k {
                assert!(
                    row.iter().all(TruncatedSeries::is_zero),
                    "k={k} row ({rho},{t})"
                );
            }
            for e in row {
                assert_eq!(e.get(0), Some(&BigRational::zero()));
            }
        }
        // powers of Q(k) vanish on rows outside the reduced space
        let mut v: Vec<ExactSeries> = (0..space.dim()).map(|_| ExactSeries::one(10)).collect();
        for _ in 0..3 {
            v = qk.apply(&v);
        }
        for (&(rho, t), x) in space.pairs().iter().zip(&v) {
            if rho + t + 2 > k {
                assert!(x.is_zero());
            }
        }
    }
}

#[test]
fn joint_genfun_marker_structure() {
    let base = BaseSeries::<BigRational>::new(4);
    let b = Blocks::new(&base);
    let ms = joint_genfun(&b, &[2], &exhaustive_bounds(&[2], 4)).unwrap();
    let at4: Vec<BigRational> = (0..3)
        .map(|m| ms.coefficient(&[m]).coeff(4).clone())
        .collect();
    assert_eq!(at4, vec![q(6), q(8), q(2)]);

    let ms = joint_genfun(&b, &[1, 2], &exhaustive_bounds(&[1, 2], 4)).unwrap();
    assert_eq!(ms.coefficient(&[1, 1]).coeff(4), &q(8));
    assert_eq!(ms.coefficient(&[0, 0]), b.t0().unwrap().z_d_dz());
}

#[test]
fn marker_overflow() {
    let base = BaseSeries::<BigRational>::new(8);
    let b = Blocks::new(&base);
    let ms = joint_genfun(&b, &[1], &[3]).unwrap();
    assert!(matches!(
        counts_from_genfun(&ms, 4),
        Err(Error::MarkerOverflow {
            multiplicity: 1,
            bound: 3,
            required: 8
        })
    ));
}

#[test]
fn binomial_inversion_matches_substitution() {
    // the u-expansion is the inversion of the t-coefficients
    let base = BaseSeries::<BigRational>::new(16);
    let b = Blocks::new(&base);
    for k in 1..=3 {
        let ms = joint_genfun(&b, &[k], &exhaustive_bounds(&[k], 16)).unwrap();
        let (f, _) = u_expansion(&b, k, 16 / k).unwrap();
        for m in (2..=16).step_by(2) {
            let moments: BTreeMap<Vec<usize>, BigRational> = ms.z_coefficients(m);
            let inverted = binomial_inversion(&moments);
            for (l, fl) in f.iter().enumerate() {
                let expected = fl.z_d_dz().coeff(m).clone();
                let got = inverted
                    .get(&vec![l])
                    .cloned()
                    .unwrap_or_else(BigRational::zero);
                assert_eq!(got, expected, "k={k} m={m} l={l}");
            }
        }
    }
}

#[test]
fn small_distributions() {
    let d = distribution(2, 2, 2).unwrap();
    assert_eq!(d.counts, vec![0.into(), 4.into(), 2.into()]);
    assert!(d.tail.is_zero());
    let d = distribution(2, 1, 2).unwrap();
    assert_eq!(d.counts, vec![2.into(), 0.into(), 4.into()]);
    assert_eq!(d.total, 6.into());

    let r = range_distribution(2, 4).unwrap();
    assert_eq!(r.counts, vec![(2, 2.into()), (3, 4.into()), (4, 0.into())]);
    let r = range_distribution(1, 2).unwrap();
    assert_eq!(r.counts, vec![(2, 2.into())]);
    assert!(r.tail.is_zero());
}

#[test]
fn doublepoints_at_length_78() {
    let d = distribution(39, 2, 10).unwrap();
    let expected = [
        "9379491068294083374788",
        "11080778475837979927200",
        "4768983709742871959574",
        "1321976178996267209064",
        "446940016375426598388",
        "148016854282116224964",
    ];
    for (l, e) in expected.iter().enumerate() {
        assert_eq!(d.counts[l], e.parse::<BigInt>().unwrap(), "l={l}");
    }
    assert_eq!(
        d.counts[10],
        "478890500239753836".parse::<BigInt>().unwrap()
    );
    let p = d.probabilities();
    for (l, e) in [
        (0, 0.34462),
        (1, 0.40713),
        (2, 0.17522),
        (3, 0.04857),
        (4, 0.01642),
        (5, 0.00544),
    ] {
        assert!((p[l] - e).abs() < 5e-6, "l={l} {}", p[l]);
    }
}

#[test]
fn oracle_equivalence() {
    for n in 1..=8 {
        let total: BigInt = walkrange::walks::closed_walk_count(n, 1).into();
        for k in 1..=3 {
            let d = distribution(n, k, 2 * n).unwrap();
            assert_eq!(d.counts.iter().sum::<BigInt>() + &d.tail, total);
            let oracle = oracle_counts(n, 1, &OracleQuery::tracked(&[k])).unwrap();
            for (l, c) in d.counts.iter().enumerate() {
                let o = oracle.get(&vec![l as u64]).copied().unwrap_or(0);
                assert_eq!(c, &BigInt::from(o), "n={n} k={k} l={l}");
            }
        }
        let r = range_distribution(n, n + 2).unwrap();
        let oracle = oracle_counts(n, 1, &OracleQuery::tracked(&[]).with_range()).unwrap();
        for (m, c) in &r.counts {
            let o = oracle.get(&vec![*m as u64]).copied().unwrap_or(0);
            assert_eq!(c, &BigInt::from(o), "n={n} m={m}");
        }
    }
}

#[test]
fn joint_counts_match_oracle() {
    let joint = joint_counts(8, &[1, 2, 3]).unwrap();
    for (i, table) in joint.iter().enumerate() {
        let oracle = oracle_counts(i + 1, 1, &OracleQuery::tracked(&[1, 2, 3])).unwrap();
        let expected: BTreeMap<Vec<u64>, BigInt> =
            oracle.into_iter().map(|(k, v)| (k, v.into())).collect();
        assert_eq!(table, &expected, "n={}", i + 1);
    }
}

#[test]
fn closed_forms_agree_with_general_machinery() {
    let order = 60;
    let base = BaseSeries::<BigRational>::new(order);
    let b = Blocks::new(&base);
    let (f1, _) = u_expansion(&b, 1, 2).unwrap();
    let single = singlepoint_series(&base);
    for l in 0..3 {
        assert_eq!(f1[l].z_d_dz(), single[l], "N2 = {l}");
    }
    let (f2, rest2) = u_expansion(&b, 2, 6).unwrap();
    let (double, drest) = doublepoint_series(&base, 6);
    for l in 0..=6 {
        assert_eq!(f2[l].z_d_dz(), double[l], "N4 = {l}");
    }
    assert_eq!(rest2.z_d_dz(), drest);
}

#[test]
fn mixed_moments() {
    assert_eq!(mixed_moment(&[(1, 2)], 2).unwrap(), 4.into());
    assert_eq!(mixed_moment(&[(1, 1)], 2).unwrap(), 8.into());
    assert!(matches!(
        mixed_moment(&[(1, 3), (2, 2)], 3),
        Err(Error::UnsupportedDepth { depth: 5 })
    ));
    for n in 1..=7 {
        let oracle = oracle_counts(n, 1, &OracleQuery::tracked(&[1, 2, 3])).unwrap();
        let binom = |a: u64, b: u64| -> u64 {
            if b > a {
                0
            } else {
                (0..b).fold(1, |acc, i| acc * (a - i) / (i + 1))
            }
        };
        let specs: [&[(usize, usize)]; 5] = [
            &[(1, 2), (3, 2)],
            &[(1, 1), (2, 1), (3, 1)],
            &[(2, 3)],
            &[(1, 2), (2, 1)],
            &[(2, 2), (3, 2)],
        ];
        for spec in specs {
            let expected: u64 = oracle
                .iter()
                .map(|(v, c)| {
                    c * spec
                        .iter()
                        .map(|&(k, m)| binom(v[k - 1], m as u64))
                        .product::<u64>()
                })
                .sum();
            assert_eq!(
                mixed_moment(spec, n).unwrap(),
                expected.into(),
                "{spec:?} n={n}"
            );
        }
    }
}

#[test]
fn mixed_moment_display() {
    // sum C(N2,2) C(N6,2) z^|w| as a polynomial in G_{1,1}, -G_{1,2}, G_{1,3}, H_{2,4}
    let order = 28;
    let base = BaseSeries::<BigRational>::new(order);
    let b = Blocks::new(&base);
    let g11 = b.g(1, 1).unwrap();
    let g12 = -b.g(1, 2).unwrap();
    let g13 = b.g(1, 3).unwrap();
    let h24 = b.h(2, 4).unwrap();
    let oma = base.one_minus_a();
    let two = q(2);
    let first = &(&(&(&g11 * &g11) * &oma) - &(&g12 * &g11).scale(&two)).scale(&two)
        * &(&(&g11 * &oma) - &g12);
    let second = &(&g11 * &g11) * &h24;
    let third = &(&(&(&g12 * &g11) * &oma) - &(&g11 * &g13)) - &(&g12 * &g12);
    let inner = &(&first + &second) - &(&g11 * &third).scale(&two);
    let display = inner.z_d_dz().scale(&two);
    let machinery = mixed_moment_series(&b, &[(1, 2), (3, 2)]).unwrap();
    assert_eq!(display, machinery);
}

#[test]
fn vertex_factors() {
    for &w in &[-0.3, -0.1, 0.0, 0.2, 0.3] {
        assert!((vertex_factor(1, 1, w).unwrap() + 1.0 / (1.0 + w)).abs() < 1e-15);
        for k in 1..=6 {
            let expected = w.powi(k as i32) / (k as f64 * (1.0 + w).powi(k as i32));
            assert!((vertex_factor(0, k, w).unwrap() - expected).abs() < 1e-15);
        }
    }
    assert_eq!(vertex_factor(5, 3, 0.0).unwrap(), -10.0 / 5.0);
    assert!(matches!(
        vertex_factor(0, 1, -1.0),
        Err(Error::DivByNonUnit)
    ));
    for q_ in 1..=6 {
        for k in 1..=6 {
            for &w in &[-0.3, -0.17, 0.05, 0.3] {
                let closed = vertex_factor(q_, k, w).unwrap();
                let unsummed = vertex_factor_unsummed(q_, k, w, 400);
                assert!(
                    (closed - unsummed).abs() < 1e-12,
                    "q={q_} k={k} w={w}: {closed} {unsummed}"
                );
            }
        }
    }
    let w = series(&[0, 1, 0, 0, 0, 0, 0]);
    let s = vertex_factor_series(2, 3, &w).unwrap();
    let direct = vertex_factor(2, 3, 0.01).unwrap();
    let eval: f64 = s
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| walkrange::pseries::ratio_to_f64(c) * 0.01f64.powi(i as i32))
        .sum();
    assert!((eval - direct).abs() < 1e-10);
}

#[test]
fn float_route_matches_exact() {
    let exact = distribution(30, 2, 6).unwrap();
    let float = distribution_float(30, 2, 6).unwrap();
    for (p, e) in float.probabilities.iter().zip(exact.probabilities()) {
        assert!((p - e).abs() < 1e-9, "{p} {e}");
    }
    assert!((float.tail - exact.tail_probability()).abs() < 1e-9);
    let many = distribution_float_many(&[10, 30], 2, 6).unwrap();
    assert!((many[1].probabilities[0] - float.probabilities[0]).abs() < 1e-12);
}

#[test]
fn distributions_match_edge_profiles() {
    for (n, k) in [(39, 2), (25, 3), (18, 4), (30, 1)] {
        let d = distribution(n, k, 8).unwrap();
        let e = walkrange::walks::edge_profile_counts(n, k, 8).unwrap();
        for l in 0..=8 {
            assert_eq!(d.counts[l], BigInt::from(e[l].clone()), "n={n} k={k} l={l}");
        }
        assert_eq!(d.tail, BigInt::from(e[9].clone()));
    }
}
