//! Acceptance suite. Each test prints one `PASS`/`FAIL` line for its
//! criterion before asserting; run with `--nocapture` to see them.

use std::f64::consts::PI;
use std::time::Instant;

use rhls_core::extremal::{
    asymptotic_coeffs, concentration_demo, derive_el_constants, el_residual, extremal_rn, extremal_sphere,
    fixed_point_minimize, ELPair, ExtremalParamsRn, ExtremalParamsSphere, DEFAULT_DAMPING,
};
use rhls_core::geometry::{dilate, kelvin_transform, KelvinParams};
use rhls_core::inequalities::{
    bilinear_form_with, converse_young_check, hls_quotient_with, random_matrix, random_step, random_zonal,
    reversed_holder_check, reversed_minkowski_check, riesz_reversed_check,
};
use rhls_core::norms::{layer_cake_power, lp_quasi_norm, power_sum, FnDistribution, StepDistribution};
use rhls_core::operators::{kernel_row_integral, RadialOperator, ZonalKernelMatrix};
use rhls_core::special::{sharp_constant, sphere_area};
use rhls_core::{ExponentSet, RadialFn, ZonalFn};

fn line(id: u32, title: &str, pass: bool, detail: String, start: Instant) {
    println!(
        "criterion {id:>2} {} {title}: {detail} ({:.2} s)",
        if pass { "PASS" } else { "FAIL" },
        start.elapsed().as_secs_f64()
    );
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn criterion_01_sharp_constant() {
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    for &(n, alpha, exact) in &[(1usize, 2.0, 2.0 / (PI * PI)), (2, 4.0, 1.0 / (2.0 * PI))] {
        let ns = sharp_constant(n, alpha).unwrap().value;
        let e = ExponentSet::critical(n, alpha).unwrap();
        let grid = ZonalFn::constant(n, 256, 1.0).unwrap();
        let op = ZonalKernelMatrix::new(&grid, &e).unwrap();
        let routed = sphere_area(n).powf(-alpha / n as f64) * op.row_sum(0);
        worst = worst.max(rel(ns, exact)).max(rel(routed, exact));
    }
    let pass = worst <= 1e-8 && t.elapsed().as_secs_f64() < 1.0;
    line(1, "sharp constant", pass, format!("max relative error {worst:.2e}"), t);
    assert!(pass);
}

#[test]
fn criterion_02_kernel_integral() {
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    for &(n, alpha, exact) in &[(1usize, 2.0, 8.0), (2, 3.0, 16.0 * PI / 3.0)] {
        worst = worst.max(rel(kernel_row_integral(n, alpha), exact));
        let e = ExponentSet::critical(n, alpha).unwrap();
        let op = ZonalKernelMatrix::new(&ZonalFn::constant(n, 256, 1.0).unwrap(), &e).unwrap();
        for j in 0..op.len() {
            worst = worst.max(rel(op.row_sum(j), exact));
        }
    }
    let pass = worst <= 1e-8 && t.elapsed().as_secs_f64() < 1.0;
    line(2, "kernel integral", pass, format!("max relative error {worst:.2e}"), t);
    assert!(pass);
}

#[test]
fn criterion_03_equality_cases() {
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for &(n, alpha) in &[(1usize, 2.0), (1, 3.0), (2, 3.0), (2, 4.0)] {
        let e = ExponentSet::critical(n, alpha).unwrap();
        let grid = ZonalFn::constant(n, 256, 1.0).unwrap();
        let op = ZonalKernelMatrix::new(&grid, &e).unwrap();
        for &a in &[0.5, 1.0, 2.0] {
            for &eta in &[0.0, 0.3, 0.6] {
                let f = extremal_sphere(&ExtremalParamsSphere::new(a, eta).unwrap(), &grid, &e).unwrap();
                let q = hls_quotient_with(&op, &f, &e).unwrap();
                worst = worst.max(q.relative_margin.abs());
                count += 1;
            }
        }
    }
    let pass = worst <= 1e-4 && t.elapsed().as_secs_f64() < 30.0;
    line(
        3,
        "equality cases",
        pass,
        format!("{count} extremals, max |Q/N* - 1| = {worst:.2e}"),
        t,
    );
    assert!(pass);
}

#[test]
fn criterion_04_inequality_direction() {
    let t = Instant::now();
    let mut worst_q = f64::INFINITY;
    let mut bilinear_fail = 0;
    for &(n, alpha) in &[(1usize, 2.0), (2, 3.0)] {
        let e = ExponentSet::critical(n, alpha).unwrap();
        let grid = ZonalFn::constant(n, 256, 1.0).unwrap();
        let op = ZonalKernelMatrix::new(&grid, &e).unwrap();
        for seed in 0..100u64 {
            let f = random_zonal(&grid, 1.0, seed).unwrap();
            worst_q = worst_q.min(hls_quotient_with(&op, &f, &e).unwrap().relative_margin);
        }
        if n == 1 {
            for seed in 0..100u64 {
                let f = random_zonal(&grid, 1.0, 1000 + 2 * seed).unwrap();
                let g = random_zonal(&grid, 1.0, 1001 + 2 * seed).unwrap();
                if !bilinear_form_with(&op, &f, &g, &e).unwrap().pass {
                    bilinear_fail += 1;
                }
            }
        }
    }
    let pass = worst_q >= -1e-6 && bilinear_fail == 0 && t.elapsed().as_secs_f64() < 60.0;
    line(
        4,
        "inequality direction",
        pass,
        format!("min Q/N* - 1 = {worst_q:.2e} over 200 inputs, {bilinear_fail} bilinear failures of 100"),
        t,
    );
    assert!(pass);
}

#[test]
fn criterion_05_transform_identities() {
    let t = Instant::now();
    let mut transport: f64 = 0.0;
    let mut dilation: f64 = 0.0;
    for &(n, alpha) in &[(1usize, 2.0), (2, 3.0)] {
        let e = ExponentSet::critical(n, alpha).unwrap();
        let grid = RadialFn::sample(n, 24.0, 1024, |_| 0.0).unwrap();
        let op = RadialOperator::for_grid(&grid, &e).unwrap();
        let w = grid.weights();
        let prm = ExtremalParamsRn::new(1.3, 0.7).unwrap();
        let f = extremal_rn(&prm, &grid, &e).unwrap();
        let np = lp_quasi_norm(&f.values, &w, e.p).unwrap();
        let nq = lp_quasi_norm(&op.apply(&f).unwrap().f.values, &w, e.q).unwrap();

        // Norms on the sphere of the lifted extremal, computed on the zonal rule.
        let zgrid = ZonalFn::constant(n, 256, 1.0).unwrap();
        let big = extremal_sphere(&prm.to_sphere(&e), &zgrid, &e).unwrap();
        let zop = ZonalKernelMatrix::new(&zgrid, &e).unwrap();
        let snp = lp_quasi_norm(&big.values, &big.weights, e.p).unwrap();
        let snq = lp_quasi_norm(&zop.apply(&big).unwrap().values, &big.weights, e.q).unwrap();
        transport = transport.max(rel(np, snp)).max(rel(nq, snq));

        for &lam in &[0.25, 0.5, 1.7, 2.0, 4.0] {
            let d = dilate(&f, lam, &e).unwrap();
            let dp = lp_quasi_norm(&d.f.values, &w, e.p).unwrap();
            let dq = lp_quasi_norm(&op.apply(&d.f).unwrap().f.values, &w, e.q).unwrap();
            dilation = dilation.max(rel(dp, np)).max(rel(dq, nq));
        }
    }
    // Kelvin self-inversion of the d = 1 extremal at lambda = 1.
    let e = ExponentSet::critical(1, 2.0).unwrap();
    let s = e.alpha - 1.0;
    let u = RadialFn::sample(1, 12.0, 512, |r| (1.0 + r * r).powf(0.5 * s)).unwrap();
    let k = kelvin_transform(&u, &KelvinParams::centered(1, 1.0).unwrap(), &e).unwrap();
    let kelvin = u
        .values
        .iter()
        .zip(&k.values)
        .map(|(a, b)| rel(*b, *a))
        .fold(0.0, f64::max);
    let pass = transport <= 1e-5 && dilation <= 1e-5 && kelvin <= 1e-12;
    line(
        5,
        "transform identities",
        pass,
        format!("norm transport {transport:.2e}, dilation {dilation:.2e}, Kelvin {kelvin:.2e}"),
        t,
    );
    assert!(pass);
}

#[test]
fn criterion_06_layer_cake() {
    let t = Instant::now();
    let d = FnDistribution {
        measure_below: |x: f64| x.min(1.0),
        breakpoints: vec![1.0],
        zero_set: 0.0,
    };
    let closed = rel(layer_cake_power(&d, -0.5).unwrap(), 2.0);
    let mut worst: f64 = 0.0;
    for seed in 0..100u64 {
        let g = random_step(0.0, 1.0 + seed as f64 * 0.01, 20 + (seed as usize % 30), 1.0, seed).unwrap();
        let w = g.cell_measures();
        let dist = StepDistribution::new(&g.values, &w).unwrap();
        for &r in &[-0.5, -1.0, -2.0] {
            let direct = power_sum(&g.values, &w, r).unwrap();
            worst = worst.max(rel(layer_cake_power(&dist, r).unwrap(), direct));
        }
    }
    let pass = closed <= 1e-6 && worst <= 1e-6;
    line(
        6,
        "layer-cake identity",
        pass,
        format!("closed form {closed:.2e}, random max {worst:.2e}"),
        t,
    );
    assert!(pass);
}

#[test]
fn criterion_07_classical_inequalities() {
    let t = Instant::now();
    let mut fails = [0usize; 4];
    for seed in 0..200u64 {
        let m = 8 + (seed as usize % 40);
        let p = 0.1 + 0.8 * ((seed * 7919) % 1000) as f64 / 1000.0;
        let f = random_step(0.0, 1.0, m, 1.0, seed).unwrap();
        let g = random_step(0.0, 1.0, m, 1.0, seed + 10_000).unwrap();
        if !reversed_holder_check(&f.values, &g.values, &f.cell_measures(), p)
            .unwrap()
            .pass
        {
            fails[0] += 1;
        }

        let rows = 3 + (seed as usize % 7);
        let cols = 2 + (seed as usize % 5);
        let mat = random_matrix(rows, cols, 1.0, seed).unwrap();
        let mu = random_step(0.0, 1.0, rows, 0.5, seed + 20_000).unwrap().values;
        let nu = random_step(0.0, 1.0, cols, 0.5, seed + 30_000).unwrap().values;
        let q = -0.25 - 3.0 * ((seed * 104_729) % 1000) as f64 / 1000.0;
        if !reversed_minkowski_check(&mat, &mu, &nu, q).unwrap().pass {
            fails[1] += 1;
        }

        let n = 16 + (seed as usize % 48);
        let gy = random_step(0.0, 2.0, n, 1.0, seed + 40_000).unwrap();
        let hy = random_step(0.0, 2.0, n, 1.0, seed + 50_000).unwrap();
        if !converse_young_check(&gy, &hy, 2.0 / 3.0, -1.0, -2.0).unwrap().pass {
            fails[2] += 1;
        }
        if !riesz_reversed_check(&gy, &hy, -1.0 - (seed % 3) as f64).unwrap().pass {
            fails[3] += 1;
        }
    }
    let pass = fails.iter().all(|f| *f == 0);
    line(
        7,
        "classical inequalities",
        pass,
        format!(
            "violations over 200 cases: Hoelder {}, Minkowski {}, Young {}, Riesz {}",
            fails[0], fails[1], fails[2], fails[3]
        ),
        t,
    );
    assert!(pass);
}

#[test]
fn criterion_08_euler_lagrange() {
    let t = Instant::now();
    let e = ExponentSet::critical(1, 2.0).unwrap();
    let (c1, c2) = derive_el_constants(1.0, &e).unwrap();
    let grid = RadialFn::sample(1, 24.0, 1024, |_| 0.0).unwrap();
    let pair = ELPair::closed_form(c1, c2, 1.0, &grid, &e).unwrap();
    let res = el_residual(&pair).unwrap();
    let co = asymptotic_coeffs(&pair).unwrap();
    let gap = co.max_relative_gap();
    let pass = res.rel_error <= 1e-3 && gap <= 1e-3;
    line(
        8,
        "Euler-Lagrange system",
        pass,
        format!(
            "c1 = c2 = {c1:.12}, residual {:.2e}, asymptotic gap {gap:.2e}",
            res.rel_error
        ),
        t,
    );
    assert!(pass);
}

#[test]
fn criterion_09_minimizer() {
    let t = Instant::now();
    let e = ExponentSet::critical(1, 2.0).unwrap();
    let grid = ZonalFn::constant(1, 256, 1.0).unwrap();
    let mut worst: f64 = 0.0;
    let mut max_its = 0;
    let mut all_converged = true;
    for seed in 0..10u64 {
        let f0 = random_zonal(&grid, 0.1, seed).unwrap();
        let r = fixed_point_minimize(&f0, &e, DEFAULT_DAMPING, 1e-12, 500).unwrap();
        let q = *r.trace.last().unwrap();
        worst = worst.max((q - r.sharp_constant).abs());
        max_its = max_its.max(r.iterations);
        all_converged &= r.converged;
    }
    let pass = all_converged && worst <= 1e-3 && t.elapsed().as_secs_f64() < 120.0;
    line(
        9,
        "fixed-point minimizer",
        pass,
        format!("10 starts, max |Q - N*| = {worst:.2e}, max iterations {max_its}"),
        t,
    );
    assert!(pass);
}

#[test]
fn criterion_10_concentration() {
    let t = Instant::now();
    let e = ExponentSet::critical(1, 2.0).unwrap();
    let c = concentration_demo(&[1.0, 0.1, 0.01], &e).unwrap();
    let pass = c.reports.iter().all(|r| r.pass);
    let table: Vec<String> = c
        .rows
        .iter()
        .map(|r| format!("eps {} -> I f(e1) = {:.6}", r.eps, r.potential_at_e1))
        .collect();
    line(10, "concentration demo", pass, table.join(", "), t);
    assert!(pass);
}
