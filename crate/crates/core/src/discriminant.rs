//! Sampling the discriminant `D_γ`, the union of the codimension-2
//! osculating subspaces `L^{n-2}_t`, and writing it out for plotting.
//!
//! Each `L^{n-2}_t` is cut by an affine chart `{ℓ·x = 1}` into an affine
//! `(n-2)`-flat, which is sampled on a square grid centered at the point of
//! the flat closest to the chart origin. For `n = 3` this gives the tangent
//! developable of the curve, one ruling per `t`.

use crate::curve::ParamCurve;
use crate::error::{Error, Result};
use crate::linalg;
use crate::projective::{osculating_subspace, ProjPoint};
use crate::stratification::{EllipticHull, DEFAULT_TAU_GRID};
use crate::tol::Tolerances;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt::Write as _;
use std::str::FromStr;

/// Curve samples used to size the ruling window.
const EXTENT_SAMPLES: usize = 512;
/// The window is this multiple of the curve's radius in the chart.
const EXTENT_FACTOR: f64 = 3.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExportFormat {
    Obj,
    Csv,
    Json,
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "obj" => Ok(ExportFormat::Obj),
            "csv" => Ok(ExportFormat::Csv),
            "json" => Ok(ExportFormat::Json),
            other => Err(Error::Parse(format!("unknown export format '{other}'"))),
        }
    }
}

/// One point of `D_γ` with the parameters that generated it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RuledPoint {
    pub t: f64,
    pub ruling: Vec<f64>,
    /// Homogeneous coordinates scaled so that `ℓ·x = 1`.
    pub coords: Vec<f64>,
}

/// Grid sample of `D_γ`, ordered by `t` and then lexicographically by the
/// ruling parameters.
#[derive(Clone, Debug, Serialize)]
pub struct RuledSample {
    pub n: usize,
    pub t_steps: usize,
    pub ruling_steps: usize,
    pub chart: Vec<f64>,
    pub points: Vec<RuledPoint>,
}

impl RuledSample {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Ruling grid points per value of `t`.
    pub fn per_t(&self) -> usize {
        if self.n <= 2 {
            1
        } else {
            self.ruling_steps.pow((self.n - 2) as u32)
        }
    }

    pub fn point(&self, i: usize) -> Result<ProjPoint> {
        ProjPoint::from_vector(&DVector::from_column_slice(&self.points[i].coords))
    }
}

/// Samples `t_steps` osculating subspaces `L^{n-2}_t` with `ruling_steps`
/// grid values per ruling direction. For `n = 2` the subspaces are the
/// curve points and the sample is a polyline.
pub fn sample_discriminant(c: &ParamCurve, t_steps: usize, ruling_steps: usize, tol: &Tolerances) -> Result<RuledSample> {
    let n = c.dim();
    if t_steps < 2 || (n > 2 && ruling_steps < 2) {
        return Err(Error::Domain("need at least 2 steps in each grid direction".into()));
    }
    let chart = chart_for(c, tol)?;
    let extent = EXTENT_FACTOR * curve_radius(c, &chart);
    let grid: Vec<f64> = (0..ruling_steps)
        .map(|k| -extent + 2.0 * extent * k as f64 / (ruling_steps - 1).max(1) as f64)
        .collect();
    let rulings: Vec<Vec<f64>> = if n <= 2 { vec![Vec::new()] } else { grid_points(&grid, n - 2) };
    let period = c.period();
    let per_t: Vec<Result<Vec<RuledPoint>>> = (0..t_steps)
        .into_par_iter()
        .map(|j| {
            let t = period * j as f64 / t_steps as f64;
            let (base, dirs) = affine_flat(c, t, &chart, tol)?;
            Ok(rulings
                .iter()
                .map(|s| {
                    let mut x = base.clone();
                    for (k, sk) in s.iter().enumerate() {
                        x += dirs.column(k) * *sk;
                    }
                    RuledPoint {
                        t,
                        ruling: s.clone(),
                        coords: x.iter().copied().collect(),
                    }
                })
                .collect())
        })
        .collect();
    let mut points = Vec::with_capacity(t_steps * rulings.len());
    for r in per_t {
        points.extend(r?);
    }
    Ok(RuledSample {
        n,
        t_steps,
        ruling_steps: if n <= 2 { 1 } else { ruling_steps },
        chart: chart.iter().copied().collect(),
        points,
    })
}

/// Even `n`: the chart of the elliptic hull. Odd `n`: no chart contains the
/// whole curve, so take the principal axis of the normalized curve points.
fn chart_for(c: &ParamCurve, tol: &Tolerances) -> Result<DVector<f64>> {
    if c.dim() % 2 == 0 {
        return Ok(EllipticHull::new(c, DEFAULT_TAU_GRID, tol)?.chart().clone());
    }
    let d = c.dim() + 1;
    let mut m = DMatrix::zeros(d, d);
    for s in 0..EXTENT_SAMPLES {
        let g = c.eval(c.period() * s as f64 / EXTENT_SAMPLES as f64).normalize();
        m += &g * g.transpose();
    }
    let eig = SymmetricEigen::new(m);
    let top = eig.eigenvalues.imax();
    let mut l: DVector<f64> = eig.eigenvectors.column(top).into_owned();
    if let Some(first) = l.iter().find(|x| x.abs() > 1e-12) {
        if *first < 0.0 {
            l = -l;
        }
    }
    Ok(l)
}

/// Largest chart distance from the origin `ℓ` to a curve point that is not
/// close to the hyperplane at infinity.
fn curve_radius(c: &ParamCurve, chart: &DVector<f64>) -> f64 {
    let pts: Vec<DVector<f64>> = (0..EXTENT_SAMPLES)
        .map(|s| c.eval(c.period() * s as f64 / EXTENT_SAMPLES as f64).normalize())
        .collect();
    let lmax = pts.iter().map(|g| chart.dot(g).abs()).fold(0.0, f64::max);
    pts.iter()
        .filter(|g| chart.dot(g).abs() >= 0.1 * lmax)
        .map(|g| (g / chart.dot(g) - chart).norm())
        .fold(0.0, f64::max)
        .max(1.0)
}

/// Closest point of `L^{n-2}_t ∩ {ℓ·x = 1}` to `ℓ` and an orthonormal basis
/// of the flat's directions, as columns.
fn affine_flat(c: &ParamCurve, t: f64, chart: &DVector<f64>, tol: &Tolerances) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let n = c.dim();
    let sub = osculating_subspace(c, t, n.saturating_sub(2), tol)?;
    let b = sub.basis().transpose();
    let a = b.transpose() * chart;
    let an = a.norm();
    if an < 1e-9 {
        return Err(Error::Geometry(format!(
            "osculating subspace at t = {t} lies at infinity of the sampling chart"
        )));
    }
    let base = &b * (&a / (an * an));
    let dirs = if b.ncols() > 1 {
        &b * linalg::complement_basis(&a)
    } else {
        DMatrix::zeros(n + 1, 0)
    };
    Ok((base, dirs))
}

/// Cartesian power of `grid` in lexicographic order.
fn grid_points(grid: &[f64], dim: usize) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = vec![Vec::new()];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|p| {
                grid.iter().map(move |&g| {
                    let mut q = p.clone();
                    q.push(g);
                    q
                })
            })
            .collect();
    }
    out
}

/// Renders the sample. OBJ is only defined for surfaces in `P³`.
pub fn export(s: &RuledSample, format: ExportFormat) -> Result<String> {
    if s.is_empty() {
        return Err(Error::Domain("empty discriminant sample".into()));
    }
    match format {
        ExportFormat::Obj => to_obj(s),
        ExportFormat::Csv => Ok(to_csv(s)),
        ExportFormat::Json => to_json(s),
    }
}

fn columns(s: &RuledSample) -> Vec<String> {
    let mut cols = vec!["t".to_string()];
    cols.extend((0..s.n.saturating_sub(2)).map(|k| format!("s{k}")));
    cols.extend((0..=s.n).map(|k| format!("x{k}")));
    cols
}

fn to_csv(s: &RuledSample) -> String {
    let mut out = columns(s).join(",");
    out.push('\n');
    for p in &s.points {
        let row: Vec<String> = std::iter::once(p.t)
            .chain(p.ruling.iter().copied())
            .chain(p.coords.iter().copied())
            .map(|v| v.to_string())
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn to_json(s: &RuledSample) -> Result<String> {
    let rows: Vec<Vec<f64>> = s
        .points
        .iter()
        .map(|p| {
            std::iter::once(p.t)
                .chain(p.ruling.iter().copied())
                .chain(p.coords.iter().copied())
                .collect()
        })
        .collect();
    let doc = serde_json::json!({
        "n": s.n,
        "t_steps": s.t_steps,
        "ruling_steps": s.ruling_steps,
        "chart": s.chart,
        "columns": columns(s),
        "rows": rows,
    });
    Ok(serde_json::to_string(&doc)?)
}

/// Vertices are the chart coordinates in an orthonormal frame of `ℓ^⊥`;
/// one quad per pair of adjacent `t` and ruling values.
fn to_obj(s: &RuledSample) -> Result<String> {
    if s.n != 3 {
        return Err(Error::Unsupported(format!(
            "OBJ export needs a surface in P^3, got P^{}",
            s.n
        )));
    }
    let chart = DVector::from_column_slice(&s.chart);
    let frame = linalg::complement_basis(&chart);
    let mut out = String::new();
    let _ = writeln!(out, "# discriminant sample, {} x {}", s.t_steps, s.ruling_steps);
    for p in &s.points {
        let x = DVector::from_column_slice(&p.coords);
        let y = frame.transpose() * (x - &chart);
        let _ = writeln!(out, "v {} {} {}", y[0], y[1], y[2]);
    }
    let r = s.ruling_steps;
    for i in 0..s.t_steps - 1 {
        for j in 0..r - 1 {
            let v = |a: usize, b: usize| a * r + b + 1;
            let _ = writeln!(out, "f {} {} {} {}", v(i, j), v(i + 1, j), v(i + 1, j + 1), v(i, j + 1));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{build_model, ModelKind};
    use crate::tangency::order_of_tangency;

    #[test]
    fn circle_is_a_polyline_of_the_curve() {
        let tol = Tolerances::default();
        let c = build_model(ModelKind::TrigConvex, 2).unwrap();
        let s = sample_discriminant(&c, 32, 5, &tol).unwrap();
        assert_eq!(s.len(), 32);
        for (i, p) in s.points.iter().enumerate() {
            let on = ProjPoint::from_vector(&c.eval(p.t)).unwrap();
            assert!(s.point(i).unwrap().distance(&on) < 1e-12);
        }
        assert!(matches!(export(&s, ExportFormat::Obj), Err(Error::Unsupported(_))));
    }

    #[test]
    fn tangent_developable_points_are_on_tangent_lines() {
        let tol = Tolerances::default();
        let c = build_model(ModelKind::RationalNormal, 3).unwrap();
        let s = sample_discriminant(&c, 16, 5, &tol).unwrap();
        assert_eq!(s.len(), 80);
        for (i, p) in s.points.iter().enumerate() {
            assert!(order_of_tangency(&c, &s.point(i).unwrap(), p.t, &tol).unwrap() >= 2);
        }
    }

    #[test]
    fn obj_counts() {
        let tol = Tolerances::default();
        let c = build_model(ModelKind::RationalNormal, 3).unwrap();
        let s = sample_discriminant(&c, 12, 4, &tol).unwrap();
        let obj = export(&s, ExportFormat::Obj).unwrap();
        assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 48);
        assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 33);
    }

    #[test]
    fn csv_header() {
        let tol = Tolerances::default();
        let c = build_model(ModelKind::TrigConvex, 4).unwrap();
        let s = sample_discriminant(&c, 4, 3, &tol).unwrap();
        assert_eq!(s.len(), 4 * 9);
        let csv = export(&s, ExportFormat::Csv).unwrap();
        assert_eq!(csv.lines().next().unwrap(), "t,s0,s1,x0,x1,x2,x3,x4");
    }
}
