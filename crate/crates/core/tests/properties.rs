//! Randomized structural properties of the core routines.

use std::sync::OnceLock;

use proptest::prelude::*;

use rhls_core::extremal::fixed_point_minimize;
use rhls_core::geometry::{dilate, stereo_drop, stereo_lift};
use rhls_core::inequalities::{
    decreasing_rearrangement, hls_quotient_with, increasing_rearrangement, periodic_convolution_nodes, random_zonal,
};
use rhls_core::norms::{distribution_lt, layer_cake_power, lp_quasi_norm, power_sum, StepDistribution};
use rhls_core::operators::ZonalKernelMatrix;
use rhls_core::{ExponentSet, RadialFn, ZonalFn};

const NODES: usize = 32;

fn setup() -> &'static (ExponentSet, ZonalFn, ZonalKernelMatrix) {
    static CELL: OnceLock<(ExponentSet, ZonalFn, ZonalKernelMatrix)> = OnceLock::new();
    CELL.get_or_init(|| {
        let e = ExponentSet::critical(2, 3.0).unwrap();
        let grid = ZonalFn::constant(2, NODES, 1.0).unwrap();
        let op = ZonalKernelMatrix::new(&grid, &e).unwrap();
        (e, grid, op)
    })
}

fn positive_vec(len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(1e-3f64..1e3, len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rearrangements_are_equimeasurable(v in positive_vec(2..60), tau in 1e-3f64..1e3) {
        let w = vec![1.0 / v.len() as f64; v.len()];
        let down = decreasing_rearrangement(&v, &w).unwrap();
        let up = increasing_rearrangement(&v, &w).unwrap();
        prop_assert!(down.windows(2).all(|p| p[0] >= p[1]));
        prop_assert!(up.windows(2).all(|p| p[0] <= p[1]));
        let m = distribution_lt(&v, &w, tau);
        prop_assert!((distribution_lt(&down, &w, tau) - m).abs() < 1e-12);
        prop_assert!((distribution_lt(&up, &w, tau) - m).abs() < 1e-12);
    }

    #[test]
    fn quasi_norms_are_homogeneous(v in positive_vec(1..40), c in 1e-2f64..1e2, r in prop::sample::select(vec![-3.0, -1.0, -0.5, 0.5, 2.0 / 3.0])) {
        let w: Vec<f64> = (0..v.len()).map(|k| 1.0 + k as f64).collect();
        let a = lp_quasi_norm(&v, &w, r).unwrap();
        let scaled: Vec<f64> = v.iter().map(|x| c * x).collect();
        let b = lp_quasi_norm(&scaled, &w, r).unwrap();
        prop_assert!((b - c * a).abs() <= 1e-12 * b);
    }

    #[test]
    fn layer_cake_matches_direct_sum(v in positive_vec(1..40), r in -4.0f64..-0.1) {
        let w: Vec<f64> = (0..v.len()).map(|k| 0.5 + (k % 3) as f64).collect();
        let direct = power_sum(&v, &w, r).unwrap();
        let cake = layer_cake_power(&StepDistribution::new(&v, &w).unwrap(), r).unwrap();
        prop_assert!((cake - direct).abs() <= 1e-10 * direct);
    }

    #[test]
    fn stereographic_round_trip(x in prop::collection::vec(-50.0f64..50.0, 1..4)) {
        let xi = stereo_lift(&x);
        let norm2: f64 = xi.iter().map(|t| t * t).sum();
        prop_assert!((norm2 - 1.0).abs() < 1e-12);
        let back = stereo_drop(&xi).unwrap();
        for (a, b) in x.iter().zip(&back) {
            prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn circle_convolution_commutes_with_rotation(g in positive_vec(8..24), shift in 0usize..24) {
        let m = g.len();
        let h: Vec<f64> = (0..m).map(|k| 1.0 + (k as f64).sin().abs()).collect();
        let step = 1.0 / m as f64;
        let base = periodic_convolution_nodes(&g, &h, step);
        let s = shift % m;
        let rotated: Vec<f64> = (0..m).map(|k| g[(k + m - s) % m]).collect();
        let moved = periodic_convolution_nodes(&rotated, &h, step);
        for k in 0..m {
            prop_assert!((moved[k] - base[(k + m - s) % m]).abs() <= 1e-12 * base[(k + m - s) % m]);
        }
    }

    #[test]
    fn exact_dilation_preserves_critical_norm(c in 0.2f64..5.0, s in -40i32..40) {
        let e = ExponentSet::critical(1, 2.0).unwrap();
        let g = RadialFn::sample(1, 24.0, 512, |r| (c * c + r * r).powf(-1.5)).unwrap();
        let lam = (s as f64 * g.h).exp();
        let d = dilate(&g, lam, &e).unwrap();
        prop_assert!(d.exact_shift);
        let a = lp_quasi_norm(&g.values, &g.weights(), e.p).unwrap();
        let b = lp_quasi_norm(&d.f.values, &d.f.weights(), e.p).unwrap();
        prop_assert!((a - b).abs() <= 1e-8 * a, "{} vs {}", a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sphere_operator_is_self_adjoint(s1 in 0u64..10_000, s2 in 0u64..10_000) {
        let (_, grid, op) = setup();
        let f = random_zonal(grid, 1.0, s1).unwrap();
        let g = random_zonal(grid, 1.0, s2).unwrap();
        let a = op.bilinear(&f, &g).unwrap();
        let b = op.bilinear(&g, &f).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.abs());
    }

    #[test]
    fn quotient_is_scale_invariant_and_bounded(seed in 0u64..10_000, c in 1e-3f64..1e3) {
        let (e, grid, op) = setup();
        let f = random_zonal(grid, 1.0, seed).unwrap();
        let q = hls_quotient_with(op, &f, e).unwrap();
        let g = f.map(|v| c * v).unwrap();
        let qc = hls_quotient_with(op, &g, e).unwrap();
        prop_assert!((q.quotient - qc.quotient).abs() <= 1e-10 * q.quotient);
        prop_assert!(q.holds(1e-6), "{:?}", q);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn minimizer_trace_never_increases(seed in 0u64..1000, damping in 0.2f64..0.9) {
        let e = ExponentSet::critical(1, 2.0).unwrap();
        let grid = ZonalFn::constant(1, 48, 1.0).unwrap();
        let f0 = random_zonal(&grid, 0.3, seed).unwrap();
        let r = fixed_point_minimize(&f0, &e, damping, 1e-12, 500).unwrap();
        prop_assert!(r.converged);
        prop_assert!(r.trace.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)), "{:?}", r.trace);
        let last = *r.trace.last().unwrap();
        prop_assert!((last - r.sharp_constant).abs() <= 1e-6 * r.sharp_constant);
    }
}
