//! Monotone piecewise cubic Hermite interpolation on a uniform grid.

/// Fritsch-Carlson slopes for uniformly spaced samples.
fn pchip_slopes(y: &[f64], h: f64) -> Vec<f64> {
    let m = y.len();
    let delta: Vec<f64> = y.windows(2).map(|w| (w[1] - w[0]) / h).collect();
    let mut d = vec![0.0; m];
    if m == 2 {
        d[0] = delta[0];
        d[1] = delta[0];
        return d;
    }
    for k in 1..m - 1 {
        let (a, b) = (delta[k - 1], delta[k]);
        d[k] = if a * b <= 0.0 { 0.0 } else { 2.0 * a * b / (a + b) };
    }
    // Three-point one-sided ends, limited to keep monotonicity.
    let end = |d0: f64, d1: f64| {
        let s = (3.0 * d0 - d1) / 2.0;
        if s * d0 <= 0.0 {
            0.0
        } else if d0 * d1 <= 0.0 && s.abs() > 3.0 * d0.abs() {
            3.0 * d0
        } else {
            s
        }
    };
    d[0] = end(delta[0], delta[1]);
    d[m - 1] = end(delta[m - 2], delta[m - 3]);
    d
}

/// Interpolant of samples `y_k = f(x0 + k h)`.
#[derive(Debug, Clone)]
pub struct UniformPchip {
    x0: f64,
    h: f64,
    y: Vec<f64>,
    d: Vec<f64>,
}

impl UniformPchip {
    /// Needs at least two samples.
    pub fn new(x0: f64, h: f64, y: Vec<f64>) -> Self {
        assert!(y.len() >= 2, "interpolation needs two samples");
        let d = pchip_slopes(&y, h);
        UniformPchip { x0, h, y, d }
    }

    pub fn x_max(&self) -> f64 {
        self.x0 + (self.y.len() - 1) as f64 * self.h
    }

    /// `None` outside the sampled range.
    pub fn eval(&self, x: f64) -> Option<f64> {
        let s = (x - self.x0) / self.h;
        let last = self.y.len() - 1;
        if s < -1e-12 || s > last as f64 + 1e-12 {
            return None;
        }
        let k = (s.floor().max(0.0) as usize).min(last - 1);
        let t = (s - k as f64).clamp(0.0, 1.0);
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        Some(h00 * self.y[k] + h10 * self.h * self.d[k] + h01 * self.y[k + 1] + h11 * self.h * self.d[k + 1])
    }

    /// Catmull-Rom value on the same interval; used only as a second
    /// opinion when estimating interpolation error.
    pub fn eval_catmull_rom(&self, x: f64) -> Option<f64> {
        let s = (x - self.x0) / self.h;
        let last = self.y.len() - 1;
        if s < -1e-12 || s > last as f64 + 1e-12 {
            return None;
        }
        let k = (s.floor().max(0.0) as usize).min(last - 1);
        let t = (s - k as f64).clamp(0.0, 1.0);
        let y = |i: isize| self.y[i.clamp(0, last as isize) as usize];
        let ki = k as isize;
        let (p0, p1, p2, p3) = (y(ki - 1), y(ki), y(ki + 1), y(ki + 2));
        Some(
            0.5 * (2.0 * p1
                + (p2 - p0) * t
                + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * t * t
                + (3.0 * p1 - p0 - 3.0 * p2 + p3) * t * t * t),
        )
    }
}
