use std::f64::consts::TAU;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use extremal_decomp::extremal::{
    objective, per_alpha_bound_ln, random_feasible_point, theorem_bound_ln, BoundMode,
};
use extremal_decomp::geometry::{eval_j_ln, greedy_disks, make_radial, normalize_angles, DiskConfiguration};
use extremal_decomp::specfun::{eval_f, eval_psi, eval_psi1, eval_psi2, find_x0};
use extremal_decomp::{BoundParams, Delta};

fn params() -> impl Strategy<Value = BoundParams> {
    (5usize..=12, 1e-3f64..=1.75, 0.0f64..=0.7)
        .prop_map(|(n, g, d)| BoundParams::checked(n, g, d).unwrap())
}

/// Sorted distinct angles with gaps of at least 1e-3, the first at 0.
fn angles(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, n).prop_filter_map("gaps too small", move |raw| {
        let a = normalize_angles(&raw.iter().map(|u| u * TAU).collect::<Vec<_>>());
        let mut ok = a.windows(2).all(|w| w[1] - w[0] >= 1e-3);
        ok &= TAU - a[n - 1] >= 1e-3;
        ok.then_some(a)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn psi1_matches_central_difference(d in 0.0f64..=0.7, x in 0.05f64..=1.95) {
        let h = 1e-6;
        let fd = (eval_psi(d, x + h).unwrap() - eval_psi(d, x - h).unwrap()) / (2.0 * h);
        let a = eval_psi1(d, x).unwrap();
        prop_assert!((a - fd).abs() < 1e-6 * (1.0 + a.abs()), "{a} vs {fd}");
    }

    #[test]
    fn psi2_matches_central_difference(d in 0.0f64..=0.7, x in 0.05f64..=1.95) {
        let h = 1e-6;
        let fd = (eval_psi1(d, x + h).unwrap() - eval_psi1(d, x - h).unwrap()) / (2.0 * h);
        let a = eval_psi2(d, x).unwrap();
        prop_assert!((a - fd).abs() < 1e-6 * (1.0 + a.abs()), "{a} vs {fd}");
    }

    #[test]
    fn psi2_sign_follows_x0(d in 0.0f64..=0.7, t in 0.0f64..1.0) {
        let x0 = find_x0(Delta::new(d).unwrap()).unwrap();
        let below = 0.01 + t * (x0 - 1e-6 - 0.01);
        let above = x0 + 1e-6 + t * (1.99 - x0 - 1e-6);
        prop_assert!(eval_psi2(d, below).unwrap() < 0.0);
        prop_assert!(eval_psi2(d, above).unwrap() > 0.0);
    }

    #[test]
    fn weight_positive_psi_finite(d in 0.0f64..=0.7, x in 1e-9f64..=2.0) {
        prop_assert!(eval_f(d, x).unwrap() > 0.0);
        prop_assert!(eval_psi(d, x).unwrap().is_finite());
    }

    #[test]
    fn equal_split_dominates(p in params(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_feasible_point(p.n, p.budget(), &mut rng);
        let eq = vec![p.equal_split(); p.n];
        let lhs = objective(p.delta, &x).unwrap();
        let rhs = objective(p.delta, &eq).unwrap();
        prop_assert!(lhs <= rhs + 1e-12, "{lhs} > {rhs}");
    }

    #[test]
    fn per_alpha_bound_below_theorem_bound(p in params(), a in angles(12)) {
        // the first n of 12 sorted angles, so one gap is usually wide
        let a = &a[..p.n];
        let radial = make_radial(a).unwrap();
        let alphas = radial.alphas();
        let t = theorem_bound_ln(&p, alphas, BoundMode::Strict).unwrap();
        match per_alpha_bound_ln(&p, alphas, BoundMode::Strict) {
            Ok(pa) => prop_assert!(pa <= t + 1e-12, "{pa} > {t}"),
            // some gap exceeds the domain of F after scaling by sqrt(gamma)
            Err(_) => prop_assert!(alphas.iter().any(|x| x * p.gamma.sqrt() > 2.0)),
        }
    }

    #[test]
    fn theorem_bound_at_delta_zero_ignores_gaps(n in 5usize..=12, g in 1e-3f64..=1.75, a in angles(12)) {
        let p = BoundParams::checked(n, g, 0.0).unwrap();
        let radial = make_radial(&a[..n]).unwrap();
        let eq = vec![2.0 / n as f64; n];
        let t1 = theorem_bound_ln(&p, radial.alphas(), BoundMode::Strict).unwrap();
        let t2 = theorem_bound_ln(&p, &eq, BoundMode::Strict).unwrap();
        prop_assert_eq!(t1, t2);
    }

    #[test]
    fn gaps_close_and_disks_disjoint(
        n in 2usize..=12,
        a in angles(12),
        r0 in 0.02f64..0.98,
        shrink in 0.3f64..=1.0,
        jitter in any::<u64>(),
    ) {
        let radial = make_radial(&a[..n]).unwrap();
        prop_assert!((radial.alphas().iter().sum::<f64>() - 2.0).abs() < 1e-12);
        let c = greedy_disks(&radial, r0, shrink, Some(jitter)).unwrap();
        prop_assert!(c.check_disjoint().is_ok());
    }

    #[test]
    fn rotation_leaves_j_and_bounds_unchanged(
        p in params(),
        a in angles(12),
        phi in 0.0f64..TAU,
        r0 in 0.02f64..0.98,
    ) {
        let n = p.n;
        let radial = make_radial(&a[..n]).unwrap();
        let c = greedy_disks(&radial, r0, 0.9, None).unwrap();

        let rotated: Vec<f64> = radial.angles().iter().map(|t| (t + phi).rem_euclid(TAU)).collect();
        let shift = (0..n).min_by(|&i, &j| rotated[i].total_cmp(&rotated[j])).unwrap();
        let radial2 = make_radial(&normalize_angles(&rotated)).unwrap();
        let radii2: Vec<f64> = (0..n).map(|k| c.radii[(k + shift) % n]).collect();
        let c2 = DiskConfiguration::new(radial2.clone(), r0, radii2).unwrap();

        for k in 0..n {
            prop_assert!((radial2.alphas()[k] - radial.alphas()[(k + shift) % n]).abs() < 1e-12);
        }
        let j1 = eval_j_ln(&c, p.gamma).unwrap();
        let j2 = eval_j_ln(&c2, p.gamma).unwrap();
        prop_assert!((j1 - j2).abs() < 1e-12);
        let t1 = theorem_bound_ln(&p, radial.alphas(), BoundMode::Strict).unwrap();
        let t2 = theorem_bound_ln(&p, radial2.alphas(), BoundMode::Strict).unwrap();
        prop_assert!((t1 - t2).abs() < 1e-12);
        if let (Ok(b1), Ok(b2)) = (
            per_alpha_bound_ln(&p, radial.alphas(), BoundMode::Strict),
            per_alpha_bound_ln(&p, radial2.alphas(), BoundMode::Strict),
        ) {
            prop_assert!((b1 - b2).abs() < 1e-12);
        }
    }

    #[test]
    fn enlarging_a_disk_increases_j(
        n in 5usize..=12,
        g in 0.01f64..=1.75,
        a in angles(12),
        r0 in 0.02f64..0.98,
        shrink in 0.3f64..0.95,
        pick in 0usize..13,
        grow in 1.0001f64..1.05,
    ) {
        let radial = make_radial(&a[..n]).unwrap();
        let c = greedy_disks(&radial, r0, shrink, None).unwrap();
        let mut bigger = c.clone();
        if pick == 12 {
            bigger.r0 *= grow;
        } else {
            bigger.radii[pick % n] *= grow;
        }
        prop_assume!(bigger.check_disjoint().is_ok());
        prop_assert!(eval_j_ln(&bigger, g).unwrap() > eval_j_ln(&c, g).unwrap());
    }
}

#[test]
fn psi2_strictly_increasing_on_fine_grid() {
    for d in [0.0, 0.35, 0.7] {
        let mut prev = f64::NEG_INFINITY;
        for i in 0..10_000 {
            let x = 0.01 + 1.98 * (i as f64 + 0.5) / 10_000.0;
            let v = eval_psi2(d, x).unwrap();
            assert!(v > prev, "delta {d}: psi2({x}) = {v} not above {prev}");
            prev = v;
        }
    }
}

#[test]
fn weight_limit_at_two() {
    for d in [0.0, 0.35, 0.7] {
        let exact = 2f64.powf(-2.0 * d);
        assert_eq!(eval_f(d, 2.0).unwrap(), exact);
        let mut last = f64::INFINITY;
        for eps in [1e-4, 1e-6, 1e-8] {
            let err = (eval_f(d, 2.0 - eps).unwrap() - exact).abs();
            assert!(err < last && err < 10.0 * eps, "delta {d} eps {eps}: {err}");
            last = err;
        }
    }
}
