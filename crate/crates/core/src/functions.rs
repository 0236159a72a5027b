//! Sampled function containers: zonal functions on the sphere, radial
//! functions on a logarithmic radius grid, and interval step functions.

use std::io::{BufRead, BufReader, Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result, RhlsError};
use crate::quadrature::sphere_rule;
use crate::special::sphere_area;

/// Default node count of the zonal sphere rule.
pub const DEFAULT_SPHERE_NODES: usize = 256;
/// Default half-width `U` of the log-radius grid.
pub const DEFAULT_HALF_WIDTH: f64 = 12.0;
/// Default number of steps on each side of `u = 0`.
pub const DEFAULT_STEPS_PER_SIDE: usize = 512;

fn check_values(values: &[f64], what: &str) -> Result<()> {
    if let Some(v) = values.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
        return Err(RhlsError::InvalidGrid(format!(
            "{what} values must be finite and nonnegative, found {v}"
        )));
    }
    Ok(())
}

/// A function on `S^n` that depends only on the polar angle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZonalFn {
    pub n: usize,
    pub angles: Vec<f64>,
    pub weights: Vec<f64>,
    pub values: Vec<f64>,
}

impl ZonalFn {
    pub fn new(n: usize, angles: Vec<f64>, weights: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return domain("n", 0.0, "sphere dimension >= 1");
        }
        if angles.len() != weights.len() || angles.len() != values.len() {
            return Err(RhlsError::InvalidGrid(format!(
                "zonal arrays differ in length: {} angles, {} weights, {} values",
                angles.len(),
                weights.len(),
                values.len()
            )));
        }
        if angles.is_empty() {
            return Err(RhlsError::InvalidGrid("empty zonal grid".into()));
        }
        if angles.iter().any(|t| !(*t > 0.0 && *t < std::f64::consts::PI)) {
            return Err(RhlsError::InvalidGrid("polar angles must lie in (0, pi)".into()));
        }
        if weights.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
            return Err(RhlsError::InvalidGrid("zonal weights must be positive".into()));
        }
        check_values(&values, "zonal")?;
        Ok(ZonalFn {
            n,
            angles,
            weights,
            values,
        })
    }

    /// Samples `f(theta)` on the `m`-node zonal rule.
    pub fn from_fn<F: Fn(f64) -> f64>(n: usize, m: usize, f: F) -> Result<Self> {
        let rule = sphere_rule(n, m)?;
        let values = rule.nodes.iter().map(|&t| f(t)).collect();
        ZonalFn::new(n, rule.nodes, rule.weights, values)
    }

    pub fn constant(n: usize, m: usize, c: f64) -> Result<Self> {
        ZonalFn::from_fn(n, m, |_| c)
    }

    /// Same grid, new samples.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        if values.len() != self.len() {
            return Err(RhlsError::DimensionMismatch(format!(
                "{} values for a {}-node zonal grid",
                values.len(),
                self.len()
            )));
        }
        check_values(&values, "zonal")?;
        Ok(ZonalFn {
            n: self.n,
            angles: self.angles.clone(),
            weights: self.weights.clone(),
            values,
        })
    }

    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> Result<Self> {
        self.with_values(self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Relative deviation of the total weight from `|S^n|`.
    pub fn measure_defect(&self) -> f64 {
        let area = sphere_area(self.n);
        (self.total_weight() - area).abs() / area
    }

    pub fn same_grid(&self, other: &ZonalFn) -> bool {
        self.n == other.n && self.angles == other.angles && self.weights == other.weights
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_table(
            out,
            &format!("zonal n={}", self.n),
            "angle",
            &self.angles,
            &self.weights,
            &self.values,
        )
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        match SampledTable::read_csv(input)? {
            SampledTable::Zonal(f) => Ok(f),
            SampledTable::Radial(_) => Err(RhlsError::InvalidGrid("expected a zonal table, found radial".into())),
        }
    }
}

/// A radial function on `R^n` sampled at `r = e^{u_k}`, `u_k = u0 + k h`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialFn {
    pub n: usize,
    pub u0: f64,
    pub h: f64,
    pub values: Vec<f64>,
}

impl RadialFn {
    pub fn new(n: usize, u0: f64, h: f64, values: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return domain("n", 0.0, "dimension >= 1");
        }
        if !(h > 0.0) || !h.is_finite() || !u0.is_finite() {
            return Err(RhlsError::InvalidGrid(format!("bad log grid u0 = {u0}, h = {h}")));
        }
        if values.len() < 2 {
            return Err(RhlsError::InvalidGrid("log grid needs at least two nodes".into()));
        }
        check_values(&values, "radial")?;
        Ok(RadialFn { n, u0, h, values })
    }

    /// Samples `f(r)` on `u in [-U, U]` with `steps` nodes on each side of
    /// zero, so `h = U / steps` and `u = 0` is a node.
    pub fn sample<F: Fn(f64) -> f64>(n: usize, half_width: f64, steps: usize, f: F) -> Result<Self> {
        if !(half_width > 0.0) || steps == 0 {
            return Err(RhlsError::InvalidGrid(format!(
                "need U > 0 and steps >= 1, got U = {half_width}, steps = {steps}"
            )));
        }
        let h = half_width / steps as f64;
        let m = 2 * steps + 1;
        let values = (0..m).map(|k| f(((k as f64 - steps as f64) * h).exp())).collect();
        RadialFn::new(n, -half_width, h, values)
    }

    pub fn sample_default<F: Fn(f64) -> f64>(n: usize, f: F) -> Result<Self> {
        RadialFn::sample(n, DEFAULT_HALF_WIDTH, DEFAULT_STEPS_PER_SIDE, f)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn log_radius(&self, k: usize) -> f64 {
        self.u0 + k as f64 * self.h
    }

    pub fn log_radii(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.log_radius(k)).collect()
    }

    pub fn radii(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.log_radius(k).exp()).collect()
    }

    /// Lebesgue weights `h |S^{n-1}| e^{n u_k}`, so that sums against them
    /// approximate integrals over `R^n`.
    pub fn weights(&self) -> Vec<f64> {
        let c = self.h * sphere_area(self.n - 1);
        let nf = self.n as f64;
        (0..self.len()).map(|k| c * (nf * self.log_radius(k)).exp()).collect()
    }

    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        if values.len() != self.len() {
            return Err(RhlsError::DimensionMismatch(format!(
                "{} values for a {}-node log grid",
                values.len(),
                self.len()
            )));
        }
        RadialFn::new(self.n, self.u0, self.h, values)
    }

    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> Result<Self> {
        self.with_values(self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn same_grid(&self, other: &RadialFn) -> bool {
        self.n == other.n && self.u0 == other.u0 && self.h == other.h && self.len() == other.len()
    }

    /// Index of the node `u = target` if it lies on the grid.
    pub fn node_of(&self, target: f64) -> Option<usize> {
        let k = ((target - self.u0) / self.h).round();
        if k < 0.0 || k as usize >= self.len() {
            return None;
        }
        let k = k as usize;
        ((self.log_radius(k) - target).abs() <= 1e-9 * self.h).then_some(k)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let u = self.log_radii();
        write_table(
            out,
            &format!("radial n={}", self.n),
            "log_radius",
            &u,
            &self.weights(),
            &self.values,
        )
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        match SampledTable::read_csv(input)? {
            SampledTable::Radial(f) => Ok(f),
            SampledTable::Zonal(_) => Err(RhlsError::InvalidGrid("expected a radial table, found zonal".into())),
        }
    }

    fn from_table(t: Table) -> Result<Self> {
        if t.coord.len() < 2 {
            return Err(RhlsError::InvalidGrid("log grid needs at least two nodes".into()));
        }
        let u0 = t.coord[0];
        let h = (t.coord[t.coord.len() - 1] - u0) / (t.coord.len() - 1) as f64;
        for (k, &u) in t.coord.iter().enumerate() {
            if (u - (u0 + k as f64 * h)).abs() > 1e-9 * h.max(1.0) {
                return Err(RhlsError::InvalidGrid(format!("log radii not uniform at row {k}")));
            }
        }
        RadialFn::new(t.n, u0, h, t.value)
    }
}

/// A nonnegative step function on an interval partition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledFn1D {
    pub breakpoints: Vec<f64>,
    pub values: Vec<f64>,
}

impl SampledFn1D {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.len() != values.len() + 1 || values.is_empty() {
            return Err(RhlsError::InvalidGrid(format!(
                "{} breakpoints cannot carry {} cells",
                breakpoints.len(),
                values.len()
            )));
        }
        if breakpoints.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(RhlsError::InvalidGrid("breakpoints must increase strictly".into()));
        }
        check_values(&values, "step")?;
        Ok(SampledFn1D { breakpoints, values })
    }

    /// `m` equal cells on `[a, b]`, valued at the cell midpoints.
    pub fn from_fn<F: Fn(f64) -> f64>(a: f64, b: f64, m: usize, f: F) -> Result<Self> {
        if !(b > a) || m == 0 {
            return Err(RhlsError::InvalidGrid(format!(
                "bad partition [{a}, {b}] with {m} cells"
            )));
        }
        let h = (b - a) / m as f64;
        let breakpoints = (0..=m).map(|k| a + k as f64 * h).collect();
        let values = (0..m).map(|k| f(a + (k as f64 + 0.5) * h)).collect();
        SampledFn1D::new(breakpoints, values)
    }

    pub fn uniform(a: f64, b: f64, values: Vec<f64>) -> Result<Self> {
        let m = values.len();
        if m == 0 || !(b > a) {
            return Err(RhlsError::InvalidGrid("empty or inverted partition".into()));
        }
        let h = (b - a) / m as f64;
        SampledFn1D::new((0..=m).map(|k| a + k as f64 * h).collect(), values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn cell_measures(&self) -> Vec<f64> {
        self.breakpoints.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn measure(&self) -> f64 {
        self.breakpoints[self.len()] - self.breakpoints[0]
    }

    /// Common cell width when the partition is uniform.
    pub fn uniform_step(&self) -> Option<f64> {
        let h = self.measure() / self.len() as f64;
        self.cell_measures()
            .iter()
            .all(|c| (c - h).abs() <= 1e-12 * h)
            .then_some(h)
    }

    pub fn integral(&self) -> f64 {
        self.values.iter().zip(self.cell_measures()).map(|(v, c)| v * c).sum()
    }
}

fn write_table<W: Write>(mut out: W, tag: &str, coord: &str, x: &[f64], w: &[f64], v: &[f64]) -> Result<()> {
    writeln!(out, "# rhls {tag}")?;
    let mut wr = csv::Writer::from_writer(out);
    wr.write_record([coord, "weight", "value"])?;
    for ((a, b), c) in x.iter().zip(w).zip(v) {
        wr.write_record([format!("{a:e}"), format!("{b:e}"), format!("{c:e}")])?;
    }
    wr.flush()?;
    Ok(())
}

/// Either kind of sampled table, as read from a CSV file.
#[derive(Debug, Clone, PartialEq)]
pub enum SampledTable {
    Zonal(ZonalFn),
    Radial(RadialFn),
}

impl SampledTable {
    /// Reads a table of either kind; the header line names the kind.
    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let t = read_table(input)?;
        match t.kind.as_str() {
            "zonal" => Ok(SampledTable::Zonal(ZonalFn::new(t.n, t.coord, t.weight, t.value)?)),
            "radial" => Ok(SampledTable::Radial(RadialFn::from_table(t)?)),
            other => Err(RhlsError::InvalidGrid(format!("unknown table kind {other:?}"))),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            SampledTable::Zonal(f) => f.n,
            SampledTable::Radial(f) => f.n,
        }
    }

    pub fn values(&self) -> &[f64] {
        match self {
            SampledTable::Zonal(f) => &f.values,
            SampledTable::Radial(f) => &f.values,
        }
    }

    /// Quadrature weights of the underlying measure.
    pub fn weights(&self) -> Vec<f64> {
        match self {
            SampledTable::Zonal(f) => f.weights.clone(),
            SampledTable::Radial(f) => f.weights(),
        }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        match self {
            SampledTable::Zonal(f) => f.write_csv(out),
            SampledTable::Radial(f) => f.write_csv(out),
        }
    }
}

struct Table {
    kind: String,
    n: usize,
    coord: Vec<f64>,
    weight: Vec<f64>,
    value: Vec<f64>,
}

fn read_table<R: Read>(input: R) -> Result<Table> {
    let mut reader = BufReader::new(input);
    let mut first = String::new();
    reader.read_line(&mut first)?;
    let bad = || {
        RhlsError::InvalidGrid(format!(
            "missing '# rhls <kind> n=<N>' header line, got {:?}",
            first.trim()
        ))
    };
    let mut parts = first.trim().trim_start_matches('#').split_whitespace();
    if parts.next() != Some("rhls") {
        return Err(bad());
    }
    let kind = parts.next().ok_or_else(bad)?.to_string();
    let n: usize = parts
        .next()
        .and_then(|s| s.strip_prefix("n="))
        .and_then(|s| s.parse().ok())
        .ok_or_else(bad)?;
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let (mut coord, mut weight, mut value) = (Vec::new(), Vec::new(), Vec::new());
    for rec in rdr.records() {
        let rec = rec?;
        if rec.len() != 3 {
            return Err(RhlsError::InvalidGrid(format!(
                "expected 3 columns, found {}",
                rec.len()
            )));
        }
        let parse = |i: usize| -> Result<f64> {
            rec[i]
                .parse()
                .map_err(|_| RhlsError::InvalidGrid(format!("not a number: {:?}", &rec[i])))
        };
        coord.push(parse(0)?);
        weight.push(parse(1)?);
        value.push(parse(2)?);
    }
    Ok(Table {
        kind,
        n,
        coord,
        weight,
        value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zonal_constant_measure() {
        for n in 1..4 {
            let f = ZonalFn::constant(n, 64, 1.0).unwrap();
            assert!(f.measure_defect() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn zonal_rejects_negative() {
        let f = ZonalFn::constant(2, 8, 1.0).unwrap();
        assert!(f.with_values(vec![-1.0; 8]).is_err());
        assert!(f.with_values(vec![1.0; 7]).is_err());
    }

    #[test]
    fn radial_grid_contains_unit_radius() {
        let f = RadialFn::sample(1, 4.0, 16, |r| r).unwrap();
        assert_eq!(f.len(), 33);
        let k = f.node_of(0.0).unwrap();
        assert_eq!(k, 16);
        assert!((f.values[k] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn radial_csv_round_trip() {
        let f = RadialFn::sample(2, 3.0, 6, |r| 1.0 / (1.0 + r * r)).unwrap();
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let g = RadialFn::read_csv(buf.as_slice()).unwrap();
        assert_eq!(g.n, 2);
        assert_eq!(g.len(), f.len());
        for (a, b) in f.values.iter().zip(&g.values) {
            assert!((a - b).abs() <= 1e-15 * a);
        }
        assert!(ZonalFn::read_csv(buf.as_slice()).is_err());
    }

    #[test]
    fn zonal_csv_round_trip() {
        let f = ZonalFn::from_fn(1, 10, |t| t.cos() + 2.0).unwrap();
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# rhls zonal n=1\nangle,weight,value\n"));
        let g = ZonalFn::read_csv(buf.as_slice()).unwrap();
        assert_eq!(g.len(), 10);
    }

    #[test]
    fn step_function_basics() {
        let g = SampledFn1D::from_fn(0.0, 1.0, 4, |x| x).unwrap();
        assert_eq!(g.values, vec![0.125, 0.375, 0.625, 0.875]);
        assert!((g.integral() - 0.5).abs() < 1e-15);
        assert!(g.uniform_step().is_some());
        assert!(SampledFn1D::new(vec![0.0, 1.0, 1.0], vec![1.0, 1.0]).is_err());
    }
}
