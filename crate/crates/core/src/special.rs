//! Log-gamma, sphere and ball measures, the closed-form sharp constant,
//! and the one-dimensional kernels obtained by integrating the Riesz-type
//! kernel over angles in logarithmic radial coordinates.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::exponents::ExponentSet;
use crate::quadrature::adaptive;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// `zeta(k) - 1` for `k = 2, 3, ...`.
const ZETA_MINUS_ONE: [f64; 46] = [
    6.449_340_668_482_264e-1,
    2.020_569_031_595_942_9e-1,
    8.232_323_371_113_819e-2,
    3.692_775_514_336_993e-2,
    1.734_306_198_444_914e-2,
    8.349_277_381_922_827e-3,
    4.077_356_197_944_34e-3,
    2.008_392_826_082_214e-3,
    9.945_751_278_180_853e-4,
    4.941_886_041_194_645e-4,
    2.460_865_533_080_483e-4,
    1.227_133_475_784_891_5e-4,
    6.124_813_505_870_483e-5,
    3.058_823_630_702_049e-5,
    1.528_225_940_865_187e-5,
    7.637_197_637_899_763e-6,
    3.817_293_264_999_84e-6,
    1.908_212_716_553_939e-6,
    9.539_620_338_727_962e-7,
    4.769_329_867_878_064_5e-7,
    2.384_505_027_277_33e-7,
    1.192_199_259_653_110_6e-7,
    5.960_818_905_125_948e-8,
    2.980_350_351_465_228e-8,
    1.490_155_482_836_504_3e-8,
    7.450_711_789_835_43e-9,
    3.725_334_024_788_457e-9,
    1.862_659_723_513_049e-9,
    9.313_274_324_196_682e-10,
    4.656_629_065_033_784e-10,
    2.328_311_833_676_505_3e-10,
    1.164_155_017_270_052e-10,
    5.820_772_087_902_701e-11,
    2.910_385_044_497_1e-11,
    1.455_192_189_104_198_5e-11,
    7.275_959_835_057_482e-12,
    3.637_979_547_378_651e-12,
    1.818_989_650_307_066e-12,
    9.094_947_840_263_888e-13,
    4.547_473_783_042_154e-13,
    2.273_736_845_824_652_4e-13,
    1.136_868_407_680_228e-13,
    5.684_341_987_627_585e-14,
    2.842_170_976_889_302e-14,
    1.421_085_482_803_160_8e-14,
    7.105_427_395_210_853e-15,
];

/// `B_{2k} / (2k (2k - 1))` for the Stirling series.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

/// `ln Gamma(2 + z)` for `|z| <= 1/2` from its Taylor series about 2.
fn ln_gamma_near_two(z: f64) -> f64 {
    let mut sum = 0.0;
    // zk runs through (-z)^k for k >= 2.
    let mut zk = -z;
    for (i, c) in ZETA_MINUS_ONE.iter().enumerate() {
        zk *= -z;
        let k = (i + 2) as f64;
        sum += c * zk / k;
    }
    z * (1.0 - EULER_GAMMA) + sum
}

fn ln_gamma_stirling(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut pow = inv;
    for c in STIRLING {
        series += c * pow;
        pow *= inv2;
    }
    (x - 0.5) * x.ln() - x + LN_SQRT_2PI + series
}

/// `ln Gamma(x)` for `x > 0`, without argument checking.
pub(crate) fn ln_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        // Gamma(x) = Gamma(x + 1) / x
        return ln_gamma_unchecked(x + 1.0) - x.ln();
    }
    if x < 1.5 {
        let z = x - 1.0;
        return ln_gamma_near_two(z) - z.ln_1p();
    }
    if x < 2.5 {
        return ln_gamma_near_two(x - 2.0);
    }
    if x < 10.0 {
        // Recur down into [1.5, 2.5): every added logarithm is positive.
        let mut y = x;
        let mut acc = 0.0;
        while y >= 2.5 {
            y -= 1.0;
            acc += y.ln();
        }
        return ln_gamma_near_two(y - 2.0) + acc;
    }
    ln_gamma_stirling(x)
}

/// Natural logarithm of the gamma function for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain("x", x, "a finite positive real");
    }
    Ok(ln_gamma_unchecked(x))
}

/// `ln |S^n| = ln 2 + ((n+1)/2) ln pi - ln Gamma((n+1)/2)`.
pub fn ln_sphere_area(n: usize) -> f64 {
    let h = (n as f64 + 1.0) / 2.0;
    LN_2 + h * PI.ln() - ln_gamma_unchecked(h)
}

/// Surface measure of the unit sphere `S^n` in `R^{n+1}`; `|S^0| = 2`.
pub fn sphere_area(n: usize) -> f64 {
    ln_sphere_area(n).exp()
}

/// Volume of the unit ball in `R^n`, `pi^{n/2} / Gamma(n/2 + 1)`.
pub fn ball_volume(n: usize) -> f64 {
    let h = n as f64 / 2.0;
    (h * PI.ln() - ln_gamma_unchecked(h + 1.0)).exp()
}

/// The best constant of the sharp reversed inequality at the conformal
/// exponents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SharpConstant {
    pub n: usize,
    pub alpha: f64,
    pub value: f64,
}

fn check_alpha(n: usize, alpha: f64) -> Result<()> {
    if n == 0 {
        return domain("n", 0.0, "an integer dimension >= 1");
    }
    if !alpha.is_finite() || alpha <= n as f64 {
        return domain("alpha", alpha, "a finite real with alpha > n");
    }
    Ok(())
}

/// `pi^{(n-alpha)/2} Gamma(alpha/2) / Gamma((n+alpha)/2) * (Gamma(n/2)/Gamma(n))^{-alpha/n}`,
/// assembled in log space.
pub fn sharp_constant(n: usize, alpha: f64) -> Result<SharpConstant> {
    check_alpha(n, alpha)?;
    let nf = n as f64;
    let ln_value = 0.5 * (nf - alpha) * PI.ln() + ln_gamma_unchecked(alpha / 2.0)
        - ln_gamma_unchecked((nf + alpha) / 2.0)
        - (alpha / nf) * (ln_gamma_unchecked(nf / 2.0) - ln_gamma_unchecked(nf));
    Ok(SharpConstant {
        n,
        alpha,
        value: ln_value.exp(),
    })
}

/// Closed form of `int_{S^n} |xi - eta|^{alpha - n} d eta`, which does not
/// depend on `xi`.
pub fn kernel_integral(n: usize, alpha: f64) -> Result<f64> {
    if n == 0 {
        return domain("n", 0.0, "an integer dimension >= 1");
    }
    if !(alpha > 0.0) || !alpha.is_finite() {
        return domain("alpha", alpha, "a finite real with alpha > 0");
    }
    let nf = n as f64;
    let ln_value =
        (alpha - 1.0) * LN_2 + ln_sphere_area(n - 1) + ln_gamma_unchecked(nf / 2.0) + ln_gamma_unchecked(alpha / 2.0)
            - ln_gamma_unchecked((nf + alpha) / 2.0);
    Ok(ln_value.exp())
}

/// Angular integral of the kernel in logarithmic radial coordinates.
///
/// With `|x| = e^u |y|`, integrating `|x - y|^{alpha-n}` over the angle
/// between `x` and `y` leaves `(2|x||y|)^{(alpha-n)/2} Z_n(u)`.
pub fn zn_kernel(n: usize, alpha: f64, u: f64) -> Result<f64> {
    check_alpha(n, alpha)?;
    Ok(zn_unchecked(n, alpha, u))
}

pub(crate) fn zn_unchecked(n: usize, alpha: f64, u: f64) -> f64 {
    let beta = 0.5 * (alpha - n as f64);
    // cosh u - 1 = 2 sinh^2(u/2) avoids cancellation near u = 0.
    let sh = (0.5 * u).sinh();
    let cm1 = 2.0 * sh * sh;
    if n == 1 {
        return (cm1 + 2.0).powf(beta) + cm1.powf(beta);
    }
    let nm2 = (n - 2) as i32;
    let integrand = |th: f64| {
        let s = (0.5 * th).sin();
        (cm1 + 2.0 * s * s).powf(beta) * th.sin().powi(nm2)
    };
    let r = adaptive(integrand, 0.0, PI, 1e-14, 0.0);
    sphere_area(n - 2) * r.value
}

/// `L_n(u) = 2^{(alpha-n)/2} e^{u (n/q - (n-alpha)/2)} Z_n(u)`, the
/// convolution kernel of the potential in logarithmic coordinates.
pub fn ln_kernel(n: usize, alpha: f64, u: f64, exps: &ExponentSet) -> Result<f64> {
    check_alpha(n, alpha)?;
    if exps.n != n || (exps.alpha - alpha).abs() > 1e-14 * alpha {
        return Err(crate::error::RhlsError::InconsistentExponents(format!(
            "kernel requested for (n, alpha) = ({n}, {alpha}) but exponents carry ({}, {})",
            exps.n, exps.alpha
        )));
    }
    Ok(ln_kernel_unchecked(exps, u))
}

pub(crate) fn ln_kernel_unchecked(exps: &ExponentSet, u: f64) -> f64 {
    let nf = exps.n as f64;
    let beta = 0.5 * (exps.alpha - nf);
    let growth = nf / exps.q + beta;
    (beta * LN_2 + growth * u).exp() * zn_unchecked(exps.n, exps.alpha, u)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn log_gamma_trivial_values() {
        assert_eq!(log_gamma(1.0).unwrap(), 0.0);
        assert!(log_gamma(2.0).unwrap().abs() < 1e-17);
        assert!(rel(log_gamma(0.5).unwrap(), 0.5 * PI.ln()) < 1e-15);
        assert!(rel(log_gamma(6.0).unwrap(), 120f64.ln()) < 1e-15);
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-1.5).is_err());
        assert!(log_gamma(f64::NAN).is_err());
    }

    #[test]
    fn log_gamma_against_references() {
        // Reference values computed at 40 digits.
        let refs = [
            (0.5, 0.572_364_942_924_700_087_07),
            (0.75, 0.203_280_951_431_295_371_48),
            (0.999, 5.780_385_328_913_802_381_7e-4),
            (1.0001, -5.771_334_222_047_126_800_5e-5),
            (1.3, -0.108_174_809_507_860_478_46),
            (1.9999, -4.227_520_877_215_345_801_1e-5),
            (2.0001, 4.228_165_811_291_994_631_7e-5),
            (2.4, 0.216_859_322_448_841_573_88),
            (2.6, 0.357_411_863_548_979_836_77),
            (3.7, 1.428_072_326_665_388_129_2),
            (7.25, 7.052_185_450_738_539_444_9),
            (10.5, 13.940_625_219_403_763_633),
            (23.3, 49.407_251_472_666_434_62),
            (49.9, 144.175_646_053_750_332_98),
        ];
        for (x, want) in refs {
            let got = log_gamma(x).unwrap();
            assert!(
                rel(got, want) <= 1e-13,
                "x={x}: {got} vs {want}, rel {:e}",
                rel(got, want)
            );
        }
    }

    #[test]
    fn log_gamma_recurrence() {
        let mut x = 0.05;
        while x < 48.0 {
            let lhs = log_gamma(x + 1.0).unwrap();
            let rhs = log_gamma(x).unwrap() + x.ln();
            assert!((lhs - rhs).abs() <= 2e-14 * lhs.abs().max(1.0), "x={x}");
            x += 0.37;
        }
    }

    #[test]
    fn sphere_areas() {
        assert!(rel(sphere_area(1), 2.0 * PI) < 1e-15);
        assert!(rel(sphere_area(2), 4.0 * PI) < 1e-15);
        assert!(rel(sphere_area(0), 2.0) < 1e-15);
        assert!(rel(sphere_area(3), 2.0 * PI * PI) < 1e-15);
    }

    #[test]
    fn ball_volume_and_sphere_relation() {
        assert!(rel(ball_volume(2), PI) < 1e-15);
        assert!(rel(ball_volume(3), 4.0 * PI / 3.0) < 1e-15);
        // |S^{n-2}| = (n-1) omega_{n-1}
        for n in 2..9usize {
            let lhs = sphere_area(n - 2);
            let rhs = (n - 1) as f64 * ball_volume(n - 1);
            assert!(rel(lhs, rhs) < 1e-14, "n={n}");
        }
    }

    #[test]
    fn sharp_constant_values() {
        let c = sharp_constant(1, 2.0).unwrap().value;
        assert!(rel(c, 2.0 / (PI * PI)) < 1e-14);
        let c = sharp_constant(2, 4.0).unwrap().value;
        assert!(rel(c, 1.0 / (2.0 * PI)) < 1e-14);
        assert!(sharp_constant(1, 1.0).is_err());
        assert!(sharp_constant(2, 1.0).is_err());
    }

    #[test]
    fn sharp_constant_matches_sphere_identity() {
        for &(n, alpha) in &[(1usize, 2.0), (1, 3.0), (2, 3.0), (2, 4.0), (3, 3.5), (2, 40.0)] {
            let c = sharp_constant(n, alpha).unwrap().value;
            let route = sphere_area(n).powf(-alpha / n as f64) * kernel_integral(n, alpha).unwrap();
            assert!(rel(c, route) < 1e-12, "({n}, {alpha}): {c} vs {route}");
        }
    }

    #[test]
    fn sharp_constant_large_alpha_is_finite() {
        let c = sharp_constant(3, 50.0).unwrap().value;
        assert!(c.is_finite() && c > 0.0);
    }

    #[test]
    fn kernel_integral_values() {
        assert!(rel(kernel_integral(1, 2.0).unwrap(), 8.0) < 1e-14);
        assert!(rel(kernel_integral(2, 3.0).unwrap(), 16.0 * PI / 3.0) < 1e-14);
        assert!(rel(kernel_integral(2, 2.0).unwrap(), 4.0 * PI) < 1e-14);
        assert!(kernel_integral(2, 0.0).is_err());
    }

    #[test]
    fn zn_values() {
        assert!(rel(zn_kernel(1, 2.0, 0.0).unwrap(), 2f64.sqrt()) < 1e-15);
        assert!(rel(zn_kernel(1, 3.0, 0.0).unwrap(), 2.0) < 1e-15);
        for &u in &[0.1, 0.7, 3.0] {
            let a = zn_kernel(2, 4.0, u).unwrap();
            let b = zn_kernel(2, 4.0, -u).unwrap();
            assert!((a - b).abs() <= 1e-14 * a);
        }
    }

    #[test]
    fn zn_two_dimensional_closed_form() {
        // alpha - n = 2: Z_2(u) = 2 int_0^pi (cosh u - cos th) d th = 2 pi cosh u
        for &u in &[0.0, 0.3, 2.0] {
            let z = zn_kernel(2, 4.0, u).unwrap();
            assert!(rel(z, 2.0 * PI * u.cosh()) < 1e-13, "u={u}");
        }
    }

    #[test]
    fn zn_nondecreasing_in_abs_u() {
        for &(n, alpha) in &[(1usize, 2.0), (1, 2.5), (2, 3.0), (3, 4.5)] {
            let mut prev = 0.0;
            for k in 0..60 {
                let u = 0.1 * k as f64;
                let z = zn_kernel(n, alpha, u).unwrap();
                assert!(z >= prev, "({n},{alpha}) u={u}");
                prev = z;
            }
        }
    }

    #[test]
    fn ln_kernel_values() {
        let e = ExponentSet::critical(1, 2.0).unwrap();
        assert!(rel(ln_kernel(1, 2.0, 0.0, &e).unwrap(), 2.0) < 1e-15);
        let e = ExponentSet::critical(1, 3.0).unwrap();
        assert!(rel(ln_kernel(1, 3.0, 0.0, &e).unwrap(), 4.0) < 1e-15);
        assert!(ln_kernel(1, 2.0, 0.0, &e).is_err());
        let e = ExponentSet::general(2, 3.0, 0.8).unwrap();
        for &u in &[-4.0, -0.2, 0.0, 1.5, 6.0] {
            assert!(ln_kernel(2, 3.0, u, &e).unwrap() > 0.0);
        }
    }
}
