use akhiezer::elliptic::{inverse_sn, jacobi_sn_cn_dn, sn_cn_dn_real, Modulus, QuarterPeriods};
use akhiezer::frame::{build_frame, Branch, EllipticFrame, Sheet, TwoIntervalSet};
use akhiezer::functional::{l1_norm, l1_norm_scaled};
use akhiezer::oracle::{discretized_l1, oracle_minimize, OracleConfig};
use akhiezer::poly::MonicPolynomial;
use akhiezer::synthesis::{moment_residuals, solve, synthesize_branch};
use akhiezer::theta::{theta_h, theta_h1, theta_theta, theta_theta1, theta_theta_logderiv, Nome};
use num_complex::Complex64;
use proptest::prelude::*;

fn modulus_and_periods(k: f64) -> (Modulus, QuarterPeriods) {
    let m = Modulus::new(k).unwrap();
    let p = QuarterPeriods::of(&m).unwrap();
    (m, p)
}

fn nome(k: f64) -> Nome {
    Nome::from_periods(&modulus_and_periods(k).1).unwrap()
}

/// A two-interval set with a gap of at least 0.02 and `beta <= 0.97`.
fn two_interval_set() -> impl Strategy<Value = TwoIntervalSet> {
    (-0.9f64..0.9, 0.02f64..0.95).prop_map(|(alpha, width)| {
        let alpha = alpha.min(0.9);
        let beta = alpha + 0.02 + width * (0.95 - alpha);
        TwoIntervalSet::new(alpha, beta.min(0.97)).unwrap()
    })
}

fn frame_of(set: TwoIntervalSet) -> EllipticFrame {
    build_frame(set).unwrap()
}

mod elliptic {
    use super::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn real_identities(k in 0.001f64..0.9999, t in -4.0f64..4.0) {
            let (m, p) = modulus_and_periods(k);
            let (s, c, d) = sn_cn_dn_real(t * p.real, &m).unwrap();
            prop_assert!((s * s + c * c - 1.0).abs() <= 1e-12);
            prop_assert!((d * d + m.k2 * s * s - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn complex_identities(k in 0.01f64..0.999, a in -1.0f64..1.0, b in -0.45f64..0.45) {
            let (m, p) = modulus_and_periods(k);
            let u = Complex64::new(4.0 * a * p.real, 2.0 * b * p.imaginary);
            let (s, c, d) = jacobi_sn_cn_dn(u, &m).unwrap();
            // Near iK' the values grow like exp(pi Im u / 2K); rounding scales with them.
            let scale = 1.0_f64.max(s.norm_sqr());
            prop_assert!((s * s + c * c - 1.0).norm() <= 1e-12 * scale);
            prop_assert!((d * d + m.k2 * s * s - 1.0).norm() <= 1e-12 * scale);
        }

        #[test]
        fn real_values_agree_with_complex_path(k in 0.01f64..0.999, t in -2.0f64..2.0) {
            let (m, p) = modulus_and_periods(k);
            let u = t * p.real;
            let (s, c, d) = sn_cn_dn_real(u, &m).unwrap();
            let (zs, zc, zd) = jacobi_sn_cn_dn(Complex64::new(u, 0.0), &m).unwrap();
            prop_assert!((zs - s).norm() <= 1e-12 && (zc - c).norm() <= 1e-12 && (zd - d).norm() <= 1e-12);
        }

        #[test]
        fn period_4k(k in 0.01f64..0.999, t in -3.0f64..3.0) {
            let (m, p) = modulus_and_periods(k);
            let u = t * p.real;
            let (a, _, _) = sn_cn_dn_real(u, &m).unwrap();
            let (b, _, _) = sn_cn_dn_real(u + 4.0 * p.real, &m).unwrap();
            prop_assert!((a - b).abs() <= 1e-11);
        }

        #[test]
        fn inverse_sn_round_trip(k in 0.01f64..0.999, t in 0.0f64..0.98) {
            let (m, p) = modulus_and_periods(k);
            let u = t * p.real;
            let (s, _, _) = sn_cn_dn_real(u, &m).unwrap();
            prop_assert!((inverse_sn(s, &m).unwrap() - u).abs() <= 1e-10);
        }

        #[test]
        fn quarter_period_increases(a in 0.001f64..0.998, d in 1e-4f64..0.5) {
            let b = (a + d).min(0.9999);
            let ka = modulus_and_periods(a).1.real;
            let kb = modulus_and_periods(b).1.real;
            prop_assert!(kb > ka);
        }
    }
}

mod theta {
    use super::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn quasi_periodic_in_2k(k in 0.05f64..0.99, u in -5.0f64..5.0) {
            let q = nome(k);
            let z = Complex64::new(u, 0.0);
            let shift = Complex64::new(2.0 * q.quarter, 0.0);
            let h = theta_h(z, &q).unwrap().value;
            let t = theta_theta(z, &q).unwrap().value;
            let scale = 1.0_f64.max(h.norm()).max(t.norm());
            prop_assert!((theta_h(z + shift, &q).unwrap().value + h).norm() <= 1e-12 * scale);
            prop_assert!((theta_theta(z + shift, &q).unwrap().value - t).norm() <= 1e-12 * scale);
        }

        #[test]
        fn parity(k in 0.05f64..0.99, a in -2.0f64..2.0, b in -0.9f64..0.9) {
            let q = nome(k);
            let z = Complex64::new(a, b * q.quarter_prime);
            prop_assert!((theta_h(-z, &q).unwrap().value + theta_h(z, &q).unwrap().value).norm() <= 1e-12);
            prop_assert!((theta_h1(-z, &q).unwrap().value - theta_h1(z, &q).unwrap().value).norm() <= 1e-12);
            prop_assert!((theta_theta(-z, &q).unwrap().value - theta_theta(z, &q).unwrap().value).norm() <= 1e-12);
            prop_assert!((theta_theta1(-z, &q).unwrap().value - theta_theta1(z, &q).unwrap().value).norm() <= 1e-12);
        }

        #[test]
        fn half_period_shifts(k in 0.05f64..0.99, u in -3.0f64..3.0) {
            let q = nome(k);
            let z = Complex64::new(u, 0.0);
            let shift = Complex64::new(q.quarter, 0.0);
            prop_assert!((theta_h(z + shift, &q).unwrap().value - theta_h1(z, &q).unwrap().value).norm() <= 1e-12);
            prop_assert!((theta_theta(z + shift, &q).unwrap().value - theta_theta1(z, &q).unwrap().value).norm() <= 1e-12);
        }

        #[test]
        fn sn_is_a_theta_ratio(k in 0.05f64..0.99, t in 0.05f64..1.95) {
            let (m, p) = modulus_and_periods(k);
            let q = nome(k);
            let ratio = |u: f64| {
                let z = Complex64::new(u, 0.0);
                (theta_h(z, &q).unwrap().value / theta_theta(z, &q).unwrap().value).re
            };
            let anchor = 0.5 * p.real;
            let c = ratio(anchor) / sn_cn_dn_real(anchor, &m).unwrap().0;
            let u = t * p.real;
            prop_assert!((ratio(u) - c * sn_cn_dn_real(u, &m).unwrap().0).abs() <= 1e-10);
        }

        #[test]
        fn log_derivative_matches_finite_difference(k in 0.05f64..0.99, t in -1.0f64..1.0) {
            let q = nome(k);
            let u = t * q.quarter;
            let h = 1e-5;
            let log_theta = |x: f64| theta_theta(Complex64::new(x, 0.0), &q).unwrap().value.re.ln();
            let fd = (log_theta(u + h) - log_theta(u - h)) / (2.0 * h);
            prop_assert!((theta_theta_logderiv(u, &q).unwrap() - fd).abs() <= 1e-8);
        }
    }
}

mod frame {
    use super::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn inverse_map_round_trip(set in two_interval_set(), t in 0.01f64..0.99, segment in 0usize..5) {
            let frame = frame_of(set);
            let (kk, kp) = (frame.quarter(), frame.quarter_prime());
            let u = match segment {
                0 => Complex64::new(0.0, t * kp),
                1 => Complex64::new(kk, t * kp),
                2 => Complex64::new(t * kk, kp),
                3 => Complex64::new(t * frame.rho, 0.0),
                _ => Complex64::new(frame.rho + t * (kk - frame.rho), 0.0),
            };
            let x = frame.map_x(u).unwrap();
            prop_assert!(x.im.abs() <= 1e-11 * x.norm().max(1.0));
            let back = frame.inverse_map(x.re, Sheet::Upper).unwrap();
            prop_assert!((back - u).norm() <= 1e-10 * kk.max(kp), "u = {u}, back = {back}");
        }

        #[test]
        fn factor_identities(set in two_interval_set(), a in 0.05f64..0.95, b in 0.05f64..0.95) {
            let frame = frame_of(set);
            let u = Complex64::new(a * frame.quarter(), b * frame.quarter_prime());
            let x = frame.map_x(u).unwrap();
            let forms = frame.factor_forms(u).unwrap();
            for (direct, form) in [
                (x + 1.0, forms.plus_one),
                (x - set.alpha, forms.minus_alpha),
                (x - set.beta, forms.minus_beta),
                (x - 1.0, forms.minus_one),
            ] {
                prop_assert!((direct - form).norm() <= 1e-11 * direct.norm(), "{direct} vs {form}");
            }
        }

        #[test]
        fn left_segment_is_increasing(set in two_interval_set(), t in 0.0f64..0.99) {
            let frame = frame_of(set);
            let kp = frame.quarter_prime();
            let x0 = frame.map_x(Complex64::new(0.0, t * kp)).unwrap().re;
            let x1 = frame.map_x(Complex64::new(0.0, (t + 0.01) * kp)).unwrap().re;
            prop_assert!(x1 > x0 && x0 >= -1.0 - 1e-12 && x1 <= set.alpha + 1e-12);
        }

        #[test]
        fn right_segment_is_decreasing(set in two_interval_set(), t in 0.0f64..0.99) {
            let frame = frame_of(set);
            let (kk, kp) = (frame.quarter(), frame.quarter_prime());
            let x0 = frame.map_x(Complex64::new(kk, t * kp)).unwrap().re;
            let x1 = frame.map_x(Complex64::new(kk, (t + 0.01) * kp)).unwrap().re;
            prop_assert!(x1 < x0 && x0 <= 1.0 + 1e-12 && x1 >= set.beta - 1e-12);
        }

        #[test]
        fn case_decomposition(set in two_interval_set(), degree in 1usize..40) {
            let frame = frame_of(set);
            let case = frame.classify_case(degree);
            let k = frame.quarter();
            let lhs = (degree + 1) as f64 * frame.rho;
            prop_assert!((lhs - (case.p as f64 * k + case.sigma)).abs() <= 1e-9 * lhs.max(1.0));
            prop_assert!(case.sigma >= 0.0 && case.sigma < k);
        }
    }
}

mod synthesis {
    use super::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn pell_identity(set in two_interval_set(), degree in 1usize..=11) {
            let s = solve(set, degree).unwrap();
            if let Some(excess) = s.pell_excess() {
                prop_assert!(excess <= 1e-9, "excess {excess:e}");
            } else {
                prop_assert_eq!(s.case.branch, Branch::Degenerate);
            }
        }

        #[test]
        fn extreme_sets_and_high_degrees(alpha in -0.999f64..0.99, w in 0.0f64..1.0, degree in 1usize..=64) {
            let beta = alpha + 1e-5 + w * (0.9999 - alpha - 1e-5);
            let s = solve(TwoIntervalSet::new(alpha, beta).unwrap(), degree).unwrap();
            prop_assert!(s.pell_excess().is_none_or(|e| e <= 1e-9));
            prop_assert!(s.max_moment_residual() <= 1e-9);
        }

        #[test]
        fn product_of_factors(set in two_interval_set(), degree in 2usize..=11) {
            let s = solve(set, degree).unwrap();
            if let Some(pair) = &s.factors {
                let product = pair.u.mul(&pair.v);
                let scale = s.f.coeffs().iter().fold(1.0_f64, |m, c| m.max(c.abs()));
                prop_assert!(product.coeff_distance(&s.f) <= 1e-10 * scale);
            }
        }

        #[test]
        fn factor_zeros_interlace(set in two_interval_set(), degree in 3usize..=11) {
            let s = solve(set, degree).unwrap();
            if let Some(pair) = &s.factors {
                let (u, v) = (pair.u.roots().unwrap(), pair.v.roots().unwrap());
                for (lo, hi) in set.pieces() {
                    let mut tagged: Vec<(f64, bool)> = u
                        .iter()
                        .map(|&z| (z, true))
                        .chain(v.iter().map(|&z| (z, false)))
                        .filter(|&(z, _)| z >= lo && z <= hi)
                        .collect();
                    tagged.sort_by(|a, b| a.0.total_cmp(&b.0));
                    for w in tagged.windows(2) {
                        prop_assert!(w[0].1 != w[1].1, "{tagged:?}");
                    }
                }
            }
        }

        #[test]
        fn rejected_branch_fails(set in two_interval_set(), degree in 2usize..=9) {
            let frame = frame_of(set);
            let case = frame.classify_case(degree);
            prop_assume!(case.branch != Branch::Degenerate && case.sigma_over_k.min(1.0 - case.sigma_over_k) > 1e-6);
            let other = match case.branch {
                Branch::OddP => Branch::EvenP,
                _ => Branch::OddP,
            };
            match synthesize_branch(&frame, &case, other) {
                Err(_) => {}
                Ok(pair) => prop_assert!(pair.pell.excess > 1e-6, "excess {:e}", pair.pell.excess),
            }
        }

        #[test]
        fn normalization_is_idempotent(coeffs in prop::collection::vec(-3.0f64..3.0, 1..10)) {
            let f = MonicPolynomial::from_coeffs(&[coeffs.as_slice(), &[1.0]].concat()).unwrap();
            prop_assert_eq!(f.normalized(), f.clone());
            prop_assert_eq!(f.normalized().normalized(), f.normalized());
        }
    }
}

mod functional {
    use super::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn perturbations_do_not_decrease(set in two_interval_set(), degree in 1usize..=9, seed in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 9), 20)) {
            let s = solve(set, degree).unwrap();
            let base = l1_norm(&s.f, &set).unwrap().value;
            for g in &seed {
                let g = &g[..degree];
                let norm = g.iter().map(|c| c * c).sum::<f64>().sqrt();
                prop_assume!(norm > 1e-3);
                let mut coeffs = s.f.coeffs().to_vec();
                for (c, gi) in coeffs.iter_mut().zip(g) {
                    *c += 1e-4 * gi / norm;
                }
                let nudged = MonicPolynomial::from_coeffs(&coeffs).unwrap();
                prop_assert!(l1_norm(&nudged, &set).unwrap().value >= base - 1e-10);
            }
        }

        #[test]
        fn absolutely_homogeneous(set in two_interval_set(), coeffs in prop::collection::vec(-1.0f64..1.0, 1..8), c in -5.0f64..5.0) {
            let f = MonicPolynomial::from_coeffs(&[coeffs.as_slice(), &[1.0]].concat()).unwrap();
            let base = l1_norm(&f, &set).unwrap().value;
            let scaled = l1_norm_scaled(&f, c, &set).unwrap().value;
            prop_assert!((scaled - c.abs() * base).abs() <= 1e-12 * base.max(1e-300) * c.abs().max(1.0));
        }

        /// Vanishing moments and stationarity agree: the solution has both,
        /// and moving one zero breaks both.
        #[test]
        fn moments_track_stationarity(set in two_interval_set(), degree in 1usize..=9, which in 0usize..9) {
            let s = solve(set, degree).unwrap();
            prop_assert!(s.max_moment_residual() <= 1e-9);

            let which = which % degree;
            let mut zeros = s.zeros.clone();
            let shift = if zeros[which] < set.alpha { -1e-2 } else { 1e-2 };
            zeros[which] = (zeros[which] + shift).clamp(-1.0, 1.0);
            prop_assume!(zeros.windows(2).all(|w| w[1] > w[0]) && zeros.iter().all(|&z| set.contains(z, 0.0)));
            let moments = moment_residuals(&zeros, &set, s.case.gap_index()).unwrap();
            let size = moments.iter().map(|m| m * m).sum::<f64>().sqrt();
            prop_assert!(size > 1e-6);

            // Up to the sign of f at -1, the moments are the gradient in the
            // monomial coefficients.
            let moved = MonicPolynomial::from_roots(&zeros);
            let before = l1_norm(&moved, &set).unwrap().value;
            let sign = if degree % 2 == 1 { -1.0 } else { 1.0 };
            let descends = (0..30).any(|j| {
                let step = sign * 1e-4 * 0.5f64.powi(j) / size;
                let mut coeffs = moved.coeffs().to_vec();
                for (c, m) in coeffs.iter_mut().zip(&moments) {
                    *c -= step * m;
                }
                l1_norm(&MonicPolynomial::from_coeffs(&coeffs).unwrap(), &set).unwrap().value < before
            });
            prop_assert!(descends, "no decrease from {before}");
        }
    }
}

mod oracle {
    use super::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn discretized_objective_is_convex(
            set in two_interval_set(),
            a in prop::collection::vec(-2.0f64..2.0, 6),
            b in prop::collection::vec(-2.0f64..2.0, 6),
        ) {
            let monic = |c: &[f64]| MonicPolynomial::from_coeffs(&[c, &[1.0]].concat()).unwrap();
            let mid: Vec<f64> = a.iter().zip(&b).map(|(x, y)| 0.5 * (x + y)).collect();
            let obj = |c: &[f64]| discretized_l1(&monic(c), &set, 401);
            prop_assert!(obj(&mid) <= 0.5 * (obj(&a) + obj(&b)) + 1e-12);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10))]

        #[test]
        fn minimizer_zeros_lie_on_e(set in two_interval_set(), degree in 1usize..=8) {
            let case = frame_of(set).classify_case(degree);
            prop_assume!(case.branch != Branch::Degenerate);
            let r = oracle_minimize(degree, &set, &OracleConfig::default()).unwrap();
            let s = solve(set, degree).unwrap();
            let (zeros, _) = akhiezer::synthesis::sign_changes(&r.coeffs, -1.5, 1.5, 400).unwrap();
            prop_assert_eq!(zeros.len(), degree);
            for z in zeros {
                let off = if set.contains(z, 0.0) { 0.0 } else if z < set.alpha { z - set.alpha } else { set.beta - z };
                prop_assert!(off.abs() <= 1e-3 && z.abs() <= 1.0 + 1e-3, "zero {z} (solution zeros {:?})", s.zeros);
            }
        }

        #[test]
        fn grid_doubling_is_stable(set in two_interval_set(), degree in 1usize..=8) {
            let coarse = oracle_minimize(degree, &set, &OracleConfig::default()).unwrap().value;
            let fine = oracle_minimize(degree, &set, &OracleConfig { grid_size: 8001, ..OracleConfig::default() }).unwrap().value;
            prop_assert!((coarse - fine).abs() <= 5e-5 * fine);
        }
    }
}
