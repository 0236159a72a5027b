//! Quasi-norms for exponents below one (including negative ones), sublevel
//! distribution functions, weak quasi-norms and the layer-cake identity.
//!
//! Everything works on a finite list of `(value, measure)` pieces, which
//! covers quadrature samples and interval step functions alike.

use crate::error::{domain, Result, RhlsError};
use crate::functions::SampledFn1D;
use crate::quadrature::adaptive;

fn check_pieces(values: &[f64], weights: &[f64]) -> Result<()> {
    if values.len() != weights.len() {
        return Err(RhlsError::DimensionMismatch(format!(
            "{} values against {} weights",
            values.len(),
            weights.len()
        )));
    }
    if values.iter().any(|v| !(*v >= 0.0)) {
        return Err(RhlsError::InvalidGrid("quasi-norms need nonnegative values".into()));
    }
    if weights.iter().any(|w| !(*w > 0.0)) {
        return Err(RhlsError::InvalidGrid("weights must be positive".into()));
    }
    Ok(())
}

fn check_exponent(r: f64) -> Result<()> {
    if r == 0.0 || !r.is_finite() {
        return domain("r", r, "a finite nonzero exponent");
    }
    Ok(())
}

/// `sum_i w_i v_i^r`. For `r < 0` a zero value makes this `+inf`.
pub fn power_sum(values: &[f64], weights: &[f64], r: f64) -> Result<f64> {
    check_pieces(values, weights)?;
    check_exponent(r)?;
    Ok(values.iter().zip(weights).map(|(v, w)| w * v.powf(r)).sum())
}

/// `(sum_i w_i v_i^r)^{1/r}`.
///
/// For `r < 0` any zero sample gives `0`, the monotone limit.
pub fn lp_quasi_norm(values: &[f64], weights: &[f64], r: f64) -> Result<f64> {
    let s = power_sum(values, weights, r)?;
    if r < 0.0 && s.is_infinite() {
        return Ok(0.0);
    }
    Ok(s.powf(1.0 / r))
}

/// `meas{g < tau}` of a weighted sample set.
pub fn distribution_lt(values: &[f64], weights: &[f64], tau: f64) -> f64 {
    values
        .iter()
        .zip(weights)
        .filter(|(v, _)| **v < tau)
        .map(|(_, w)| *w)
        .sum()
}

/// `meas{g > tau}` of a weighted sample set.
pub fn distribution_gt(values: &[f64], weights: &[f64], tau: f64) -> f64 {
    values
        .iter()
        .zip(weights)
        .filter(|(v, _)| **v > tau)
        .map(|(_, w)| *w)
        .sum()
}

impl SampledFn1D {
    /// `meas{x : g(x) < tau}`, exact for the step model.
    pub fn distribution_lt(&self, tau: f64) -> f64 {
        distribution_lt(&self.values, &self.cell_measures(), tau)
    }

    pub fn quasi_norm(&self, r: f64) -> Result<f64> {
        lp_quasi_norm(&self.values, &self.cell_measures(), r)
    }
}

/// A sublevel distribution `t -> meas{g < t}` that the layer-cake route
/// can integrate.
pub trait SublevelDistribution {
    fn measure_below(&self, t: f64) -> f64;
    /// Points where the distribution may fail to be smooth, ascending.
    fn breakpoints(&self) -> Vec<f64>;
    /// `meas{g = 0}`; a positive value makes negative-exponent integrals diverge.
    fn zero_set_measure(&self) -> f64;
}

/// The distribution of a weighted sample set (a step function of `t`).
#[derive(Debug, Clone)]
pub struct StepDistribution {
    sorted: Vec<f64>,
    cumulative: Vec<f64>,
    zero: f64,
}

impl StepDistribution {
    pub fn new(values: &[f64], weights: &[f64]) -> Result<Self> {
        check_pieces(values, weights)?;
        let mut pairs: Vec<(f64, f64)> = values.iter().copied().zip(weights.iter().copied()).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut sorted = Vec::with_capacity(pairs.len());
        let mut cumulative = Vec::with_capacity(pairs.len());
        let mut acc = 0.0;
        let mut zero = 0.0;
        for (v, w) in pairs {
            if v == 0.0 {
                zero += w;
            }
            acc += w;
            // Merge ties so each breakpoint appears once.
            if sorted.last() == Some(&v) {
                *cumulative.last_mut().unwrap() = acc;
            } else {
                sorted.push(v);
                cumulative.push(acc);
            }
        }
        Ok(StepDistribution {
            sorted,
            cumulative,
            zero,
        })
    }

    pub fn from_step(g: &SampledFn1D) -> Result<Self> {
        StepDistribution::new(&g.values, &g.cell_measures())
    }

    /// Distinct values with `meas{g <= v}`.
    pub fn levels(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.sorted.iter().copied().zip(self.cumulative.iter().copied())
    }
}

impl SublevelDistribution for StepDistribution {
    fn measure_below(&self, t: f64) -> f64 {
        let k = self.sorted.partition_point(|&v| v < t);
        if k == 0 {
            0.0
        } else {
            self.cumulative[k - 1]
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.sorted.clone()
    }

    fn zero_set_measure(&self) -> f64 {
        self.zero
    }
}

/// A distribution given as a closure, for closed-form test functions.
pub struct FnDistribution<F: Fn(f64) -> f64> {
    pub measure_below: F,
    pub breakpoints: Vec<f64>,
    pub zero_set: f64,
}

impl<F: Fn(f64) -> f64> SublevelDistribution for FnDistribution<F> {
    fn measure_below(&self, t: f64) -> f64 {
        (self.measure_below)(t)
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.breakpoints.clone()
    }

    fn zero_set_measure(&self) -> f64 {
        self.zero_set
    }
}

/// `|r| int_0^inf t^{r-1} meas{g < t} dt` for `r < 0`, i.e. `||g||_r^r`.
///
/// Integrated piecewise between the breakpoints of the distribution with
/// adaptive Gauss-Kronrod, plus an `[b_max, inf)` tail over doubling
/// intervals closed by the algebraic remainder. Returns `+inf` when `g`
/// vanishes on a set of positive measure.
pub fn layer_cake_power<D: SublevelDistribution>(dist: &D, r: f64) -> Result<f64> {
    if !(r < 0.0) || !r.is_finite() {
        return domain("r", r, "a finite negative exponent");
    }
    if dist.zero_set_measure() > 0.0 {
        return Ok(f64::INFINITY);
    }
    let mut knots: Vec<f64> = dist.breakpoints().into_iter().filter(|b| *b > 0.0).collect();
    knots.dedup();
    let integrand = |t: f64| -r * t.powf(r - 1.0) * dist.measure_below(t);
    let mut total = 0.0;
    let mut lo = 0.0;
    for &b in &knots {
        total += adaptive(integrand, lo, b, 1e-13, 0.0).value;
        lo = b;
    }
    // Tail: doubling intervals, then the algebraic remainder
    // |r| int_T^inf t^{r-1} m(T) dt = m(T) T^r with m frozen at T.
    let mut a = if lo > 0.0 { lo } else { 1.0 };
    if lo == 0.0 {
        total += adaptive(integrand, 0.0, a, 1e-13, 0.0).value;
    }
    for _ in 0..200 {
        let piece = adaptive(integrand, a, 2.0 * a, 1e-13, 0.0).value;
        total += piece;
        a *= 2.0;
        if piece <= 1e-17 * total {
            break;
        }
    }
    let rest = dist.measure_below(a) * a.powf(r);
    if !rest.is_finite() {
        return Ok(f64::INFINITY);
    }
    Ok(total + rest)
}

/// `||g||_r` for `r < 0` through the layer-cake representation.
pub fn lr_norm_via_layer_cake<D: SublevelDistribution>(dist: &D, r: f64) -> Result<f64> {
    let s = layer_cake_power(dist, r)?;
    if s.is_infinite() {
        return Ok(0.0);
    }
    Ok(s.powf(1.0 / r))
}

/// Weak quasi-norm of a weighted sample set.
///
/// For `r > 0` this is `sup_t t meas{g > t}^{1/r}`; the sup over the step
/// model is approached as `t` rises to a sample value. For `r < 0` it is
/// `B^{1/r}` with `B = sup_t meas{g < t} t^r`, approached as `t` falls to a
/// sample value.
pub fn weak_quasi_norm(values: &[f64], weights: &[f64], r: f64) -> Result<f64> {
    check_pieces(values, weights)?;
    check_exponent(r)?;
    let dist = StepDistribution::new(values, weights)?;
    if r > 0.0 {
        let total: f64 = weights.iter().sum();
        let mut best: f64 = 0.0;
        let mut below = 0.0;
        for (v, cum) in dist.levels() {
            // meas{g >= v} = total - meas{g < v}
            let upper = (total - below).max(0.0);
            best = best.max(v * upper.powf(1.0 / r));
            below = cum;
        }
        Ok(best)
    } else {
        let b = weak_sup_negative(&dist, r);
        if b.is_infinite() {
            return Ok(0.0);
        }
        Ok(b.powf(1.0 / r))
    }
}

/// `sup_t meas{g < t} t^r` for `r < 0`.
pub fn weak_sup_negative(dist: &StepDistribution, r: f64) -> f64 {
    dist.levels()
        .map(|(v, cum)| if v == 0.0 { f64::INFINITY } else { cum * v.powf(r) })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants() {
        assert!((lp_quasi_norm(&[1.0], &[1.0], 0.5).unwrap() - 1.0).abs() < 1e-15);
        assert!((lp_quasi_norm(&[2.0], &[1.0], -2.0).unwrap() - 2.0).abs() < 1e-15);
        assert!(lp_quasi_norm(&[1.0], &[1.0], 0.0).is_err());
    }

    #[test]
    fn zero_value_conventions() {
        assert_eq!(lp_quasi_norm(&[0.0, 1.0], &[0.5, 0.5], -1.0).unwrap(), 0.0);
        let v = lp_quasi_norm(&[0.0, 1.0], &[0.5, 0.5], 0.5).unwrap();
        assert!((v - 0.25).abs() < 1e-15);
    }

    #[test]
    fn linear_function_half_norm() {
        let g = SampledFn1D::from_fn(0.0, 1.0, 200_000, |x| x).unwrap();
        let v = g.quasi_norm(0.5).unwrap();
        assert!((v - 4.0 / 9.0).abs() < 1e-7);
    }

    #[test]
    fn distribution_of_constant_and_linear() {
        let c = SampledFn1D::from_fn(0.0, 1.0, 10, |_| 1.0).unwrap();
        assert_eq!(c.distribution_lt(2.0), 1.0);
        assert_eq!(c.distribution_lt(0.5), 0.0);
        let g = SampledFn1D::from_fn(0.0, 1.0, 1000, |x| x).unwrap();
        assert!((g.distribution_lt(0.5) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn layer_cake_closed_form() {
        // g(x) = x on [0, 1]: meas{g < t} = min(t, 1)
        let d = FnDistribution {
            measure_below: |t: f64| t.min(1.0),
            breakpoints: vec![1.0],
            zero_set: 0.0,
        };
        let s = layer_cake_power(&d, -0.5).unwrap();
        assert!((s - 2.0).abs() < 1e-10, "{s}");
    }

    #[test]
    fn layer_cake_constant() {
        let d = StepDistribution::new(&[3.0], &[2.0]).unwrap();
        let s = layer_cake_power(&d, -1.0).unwrap();
        assert!((s - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn layer_cake_zero_set_diverges() {
        let d = StepDistribution::new(&[0.0, 3.0], &[1.0, 1.0]).unwrap();
        assert!(layer_cake_power(&d, -1.0).unwrap().is_infinite());
        assert_eq!(lr_norm_via_layer_cake(&d, -1.0).unwrap(), 0.0);
    }

    #[test]
    fn weak_norm_examples() {
        // indicator of a measure-one set
        let v = weak_quasi_norm(&[1.0, 0.0], &[1.0, 1.0], 2.0).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
        let c = 3.0;
        let m = 2.0;
        let v = weak_quasi_norm(&[c], &[m], -2.0).unwrap();
        assert!((v - c * m.powf(-0.5)).abs() < 1e-14);
    }

    #[test]
    fn step_distribution_merges_ties() {
        let d = StepDistribution::new(&[2.0, 1.0, 2.0], &[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(d.measure_below(1.0), 0.0);
        assert_eq!(d.measure_below(1.5), 1.0);
        assert_eq!(d.measure_below(2.5), 3.0);
        assert_eq!(d.levels().count(), 2);
    }
}
