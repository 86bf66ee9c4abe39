//! Elliptic hulls of convex curves in even-dimensional projective space.
//!
//! For even `d` every osculating hyperplane `H_τ` leaves the curve on one
//! side, and the hull is the intersection of those closed half-spaces. It
//! lies in the affine chart `{ℓ·x > 0}` with `ℓ` the normalized sum of the
//! oriented supporting covectors, where it is a compact convex body. Points
//! inside get radial coordinates about the Chebyshev center of the sampled
//! polytope.

use crate::curve::ParamCurve;
use crate::error::{Error, Result};
use crate::linalg;
use crate::projective::ProjPoint;
use crate::tangency::RootCounter;
use crate::tol::Tolerances;
use minilp::{ComparisonOp, OptimizationDirection, Problem};
use nalgebra::{DMatrix, DVector};
use serde::Serialize;

/// Default number of sampled supporting half-spaces.
pub const DEFAULT_TAU_GRID: usize = 256;
/// Samples used when maximizing over the circle of supporting hyperplanes.
const SUPPORT_SAMPLES: usize = 1024;
/// Box bound for the LP variables in chart coordinates.
const LP_BOX: f64 = 1e6;

/// Position of a point in a hull: a unit direction in the hull frame and the
/// fraction of the way from the center to the boundary along it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiberPoint {
    pub direction: Vec<f64>,
    pub radius: f64,
}

impl FiberPoint {
    pub fn center(dim: usize) -> Self {
        let mut direction = vec![0.0; dim];
        if dim > 0 {
            direction[0] = 1.0;
        }
        FiberPoint {
            direction,
            radius: 0.0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct EllipticHull {
    counter: RootCounter,
    /// Supporting covectors of the dual curve, oriented toward the curve.
    orient: f64,
    supports: Vec<DVector<f64>>,
    chart: DVector<f64>,
    center: DVector<f64>,
    inradius: f64,
    frame: DMatrix<f64>,
}

impl EllipticHull {
    pub fn new(c: &ParamCurve, tau_grid: usize, tol: &Tolerances) -> Result<Self> {
        let d = c.dim();
        if d % 2 != 0 {
            return Err(Error::Domain(format!(
                "elliptic hulls have a center only in even dimension, got P^{d}"
            )));
        }
        if tau_grid < 8 {
            return Err(Error::Domain("hull needs at least 8 supporting hyperplanes".into()));
        }
        let counter = RootCounter::new(c, tol)?;
        let dual = counter.dual();
        let period = c.period();

        // the dual covector at τ is nonnegative on the curve up to sign; the
        // sign is read off at the opposite point
        let mut signs = Vec::with_capacity(tau_grid);
        let mut supports = Vec::with_capacity(tau_grid);
        for s in 0..tau_grid {
            let tau = period * s as f64 / tau_grid as f64;
            let h = dual.eval(tau);
            let g = c.eval(tau + 0.5 * period);
            let v = h.dot(&g);
            if v == 0.0 {
                return Err(Error::Geometry(format!(
                    "curve meets its osculating hyperplane at t = {tau} away from the tangency"
                )));
            }
            let sign = v.signum();
            signs.push(sign);
            supports.push(h * sign);
        }
        if signs.iter().any(|&s| s != signs[0]) {
            return Err(Error::Geometry(
                "osculating hyperplanes do not keep the curve on a consistent side".into(),
            ));
        }
        let orient = signs[0];
        check_one_sided(c, &supports, tol)?;

        let mut chart = DVector::zeros(d + 1);
        for h in &supports {
            chart += h / h.norm();
        }
        let cn = chart.norm();
        if !(cn > 0.0) {
            return Err(Error::Geometry("supporting half-spaces have no common chart".into()));
        }
        chart /= cn;
        let (center, inradius) = chebyshev_center(&supports, &chart)?;
        let hull_center = ProjPoint::from_vector(&center)?;
        let rc = counter.count(&hull_center)?;
        if rc.total != 0 {
            return Err(Error::Geometry(format!(
                "Chebyshev center has {} tangency roots instead of 0",
                rc.total
            )));
        }
        let frame = chart_frame(c, &chart, tol)?;
        Ok(EllipticHull {
            counter,
            orient,
            supports,
            chart,
            center,
            inradius,
            frame,
        })
    }

    pub fn curve(&self) -> &ParamCurve {
        self.counter.curve()
    }

    pub fn center(&self) -> ProjPoint {
        ProjPoint::from_vector(&self.center).expect("center is nonzero")
    }

    /// Radius of the inscribed ball found by the LP, in chart units.
    pub fn inradius(&self) -> f64 {
        self.inradius
    }

    pub fn chart(&self) -> &DVector<f64> {
        &self.chart
    }

    /// Orthonormal frame of the chart hyperplane used for directions.
    pub fn frame(&self) -> &DMatrix<f64> {
        &self.frame
    }

    pub fn supports(&self) -> &[DVector<f64>] {
        &self.supports
    }

    /// Membership by root count (`♯_p = 0`), cross-checked against the
    /// sampled half-spaces.
    pub fn contains(&self, p: &ProjPoint) -> Result<bool> {
        let inside = self.counter.count(p)?.total == 0;
        let v = p.to_vector();
        let s = if self.chart.dot(&v) >= 0.0 { 1.0 } else { -1.0 };
        let worst = self
            .supports
            .iter()
            .map(|h| s * h.dot(&v) / h.norm())
            .fold(f64::INFINITY, f64::min);
        if inside && worst < -1e-9 {
            return Err(Error::Precision(format!(
                "point has no tangency roots but violates a supporting half-space by {:.3e}",
                -worst
            )));
        }
        Ok(inside)
    }

    /// Chart coordinates `V^T (x/(ℓ·x) - c)` of a point.
    fn chart_coords(&self, p: &ProjPoint) -> Result<DVector<f64>> {
        let v = p.to_vector();
        let l = self.chart.dot(&v);
        if l.abs() < 1e-12 {
            return Err(Error::Domain("point lies at infinity of the hull chart".into()));
        }
        Ok(self.frame.transpose() * (v / l - &self.center))
    }

    /// Distance from the center to the boundary along the unit frame
    /// direction `u`.
    pub fn boundary_distance(&self, u: &DVector<f64>) -> Result<f64> {
        let dir = &self.frame * u;
        let dual = self.counter.dual();
        let period = dual.period();
        let phi = |tau: f64| -> f64 {
            let g = dual.eval(tau) * self.orient;
            -g.dot(&dir) / g.dot(&self.center)
        };
        let mut best = (f64::NEG_INFINITY, 0.0);
        for s in 0..SUPPORT_SAMPLES {
            let tau = period * s as f64 / SUPPORT_SAMPLES as f64;
            let v = phi(tau);
            if v > best.0 {
                best = (v, tau);
            }
        }
        let h = period / SUPPORT_SAMPLES as f64;
        let (_, vmax) = golden_max(&phi, best.1 - h, best.1 + h);
        if !(vmax > 0.0) {
            return Err(Error::Geometry("hull is unbounded in the chart".into()));
        }
        Ok(1.0 / vmax)
    }

    /// Direction and radial fraction of a hull point about the center.
    pub fn fiber_point(&self, p: &ProjPoint) -> Result<FiberPoint> {
        let y = self.chart_coords(p)?;
        let norm = y.norm();
        let d = y.len();
        if norm <= 1e-14 {
            return Ok(FiberPoint::center(d));
        }
        let u = y / norm;
        let r = self.boundary_distance(&u)?;
        Ok(FiberPoint {
            direction: u.iter().copied().collect(),
            radius: norm / r,
        })
    }

    /// Inverse of [`fiber_point`](Self::fiber_point).
    pub fn point_at(&self, f: &FiberPoint) -> Result<ProjPoint> {
        let d = self.frame.ncols();
        if f.direction.len() != d {
            return Err(Error::Domain(format!(
                "fiber direction has {} entries, hull frame has {d}",
                f.direction.len()
            )));
        }
        if !(0.0..1.0).contains(&f.radius) {
            return Err(Error::Domain(format!("radial fraction {} is outside [0, 1)", f.radius)));
        }
        let u = DVector::from_column_slice(&f.direction);
        let un = u.norm();
        if f.radius == 0.0 || un == 0.0 {
            return ProjPoint::from_vector(&self.center);
        }
        let u = u / un;
        let r = self.boundary_distance(&u)?;
        ProjPoint::from_vector(&(&self.center + &self.frame * (u * (f.radius * r))))
    }
}

/// Every sampled hyperplane must leave the whole curve on its positive side.
fn check_one_sided(c: &ParamCurve, supports: &[DVector<f64>], tol: &Tolerances) -> Result<()> {
    let samples = 256;
    let pts: Vec<DVector<f64>> = (0..samples)
        .map(|s| {
            let v = c.eval(c.period() * s as f64 / samples as f64);
            let n = v.norm();
            v / n
        })
        .collect();
    let stride = (supports.len() / 32).max(1);
    for h in supports.iter().step_by(stride) {
        let hn = h.norm();
        let worst = pts.iter().map(|g| h.dot(g) / hn).fold(f64::INFINITY, f64::min);
        if worst < -tol.rank.sqrt() {
            return Err(Error::Geometry(
                "curve crosses one of its osculating hyperplanes (input is not convex)".into(),
            ));
        }
    }
    Ok(())
}

/// Largest ball inside `⋂ {h·x >= 0}` within the chart `ℓ·x = 1`.
fn chebyshev_center(supports: &[DVector<f64>], chart: &DVector<f64>) -> Result<(DVector<f64>, f64)> {
    let d1 = chart.len();
    let u = linalg::complement_basis(chart);
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let ys: Vec<_> = (0..d1 - 1).map(|_| lp.add_var(0.0, (-LP_BOX, LP_BOX))).collect();
    let r = lp.add_var(1.0, (0.0, LP_BOX));
    for h in supports {
        let h = h / h.norm();
        let a = u.transpose() * &h;
        let mut row: Vec<(minilp::Variable, f64)> = ys.iter().copied().zip(a.iter().copied()).collect();
        row.push((r, -a.norm()));
        lp.add_constraint(row.as_slice(), ComparisonOp::Ge, -h.dot(chart));
    }
    let sol = lp
        .solve()
        .map_err(|e| Error::Geometry(format!("Chebyshev center LP failed: {e}")))?;
    let radius = sol[r];
    if !(radius > 0.0) {
        return Err(Error::Geometry("sampled hull polytope has empty interior".into()));
    }
    if radius >= LP_BOX * 0.5 {
        return Err(Error::Geometry("sampled hull polytope is unbounded in the chart".into()));
    }
    let y = DVector::from_iterator(d1 - 1, ys.iter().map(|v| sol[*v]));
    Ok((chart + u * y, radius))
}

/// Orthonormal basis of `ℓ^⊥` from the jets of the curve at `t = 0`,
/// projected to the chart hyperplane and orthonormalized in order.
fn chart_frame(c: &ParamCurve, chart: &DVector<f64>, tol: &Tolerances) -> Result<DMatrix<f64>> {
    let d = c.dim();
    let jets = c.jet_rows(0.0, d);
    let proj = DMatrix::identity(d + 1, d + 1) - chart * chart.transpose();
    let mut cols: Vec<DVector<f64>> = Vec::with_capacity(d);
    for j in 0..=d {
        let mut v = &proj * jets.row(j).transpose();
        let n0 = v.norm();
        if n0 == 0.0 {
            continue;
        }
        for _ in 0..2 {
            for q in &cols {
                let dot = q.dot(&v);
                v -= q * dot;
            }
        }
        let n = v.norm();
        if n > tol.rank.sqrt() * n0 {
            cols.push(v / n);
        }
        if cols.len() == d {
            break;
        }
    }
    if cols.len() < d {
        return Err(Error::degenerate(0.0, "jets do not span the hull chart"));
    }
    Ok(DMatrix::from_columns(&cols))
}

/// Golden-section search for the maximum of `f` on `[a, b]`.
fn golden_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..80 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        }
    }
    if f1 > f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}
