//! Closed curves `γ: S¹ → Pⁿ` with analytic jets.
//!
//! Each homogeneous coordinate is a [`TrigPoly`] in the curve parameter. The
//! projective period is `π/ω`: rational normal curves and the odd-dimensional
//! convex trigonometric curves use `ω = 1` (period `π`, antiperiodic lift),
//! everything else `ω = 1/2` (period `2π`).

use crate::error::{Error, Result};
use crate::linalg;
use crate::projective::Jet;
use crate::tol::Tolerances;
use crate::trig::TrigPoly;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::path::Path;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    RationalNormal,
    TrigConvex,
    Fourier,
}

/// JSON description of a curve: `{"model": ..., "n": ..., "coeffs": [[...]]}`.
///
/// For `fourier`, `coeffs` has one row per homogeneous coordinate laid out as
/// `[a0, a1, b1, a2, b2, ...]`, meaning `a0 + Σ a_h cos(ht) + b_h sin(ht)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveSpec {
    pub model: ModelKind,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<Vec<f64>>>,
}

impl CurveSpec {
    pub fn build(&self) -> Result<ParamCurve> {
        match self.model {
            ModelKind::Fourier => {
                let coeffs = self.coeffs.as_ref().ok_or_else(|| {
                    Error::Domain("fourier curve spec needs a `coeffs` matrix".into())
                })?;
                if coeffs.len() != self.n + 1 {
                    return Err(Error::Domain(format!(
                        "fourier curve in P^{} needs {} coefficient rows, got {}",
                        self.n,
                        self.n + 1,
                        coeffs.len()
                    )));
                }
                fourier_curve(coeffs)
            }
            kind => build_model(kind, self.n),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }
}

#[derive(Clone, Debug)]
pub struct ParamCurve {
    label: String,
    omega: f64,
    coords: Vec<TrigPoly>,
}

impl ParamCurve {
    pub fn from_coords(label: impl Into<String>, coords: Vec<TrigPoly>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::Domain("a curve needs at least two homogeneous coordinates".into()));
        }
        let omega = coords[0].omega();
        if coords.iter().any(|c| c.omega() != omega) {
            return Err(Error::Domain("coordinates use different base frequencies".into()));
        }
        Ok(ParamCurve {
            label: label.into(),
            omega,
            coords,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Ambient projective dimension `n`.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Length of the parameter circle.
    pub fn period(&self) -> f64 {
        PI / self.omega
    }

    pub fn coords(&self) -> &[TrigPoly] {
        &self.coords
    }

    /// Highest harmonic over all coordinates.
    pub fn degree(&self) -> usize {
        self.coords.iter().map(TrigPoly::degree).max().unwrap_or(0)
    }

    pub fn eval(&self, t: f64) -> DVector<f64> {
        DVector::from_iterator(self.coords.len(), self.coords.iter().map(|c| c.eval(t)))
    }

    /// Rows `0..=d` hold `γ(t), γ'(t), ..., γ^(d)(t)`.
    pub fn jet_rows(&self, t: f64, d: usize) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(d + 1, self.coords.len());
        let mut buf = vec![0.0; d + 1];
        for (i, c) in self.coords.iter().enumerate() {
            c.eval_derivs(t, &mut buf);
            for (j, v) in buf.iter().enumerate() {
                m[(j, i)] = *v;
            }
        }
        m
    }

    pub fn eval_jet(&self, t: f64, d: usize) -> Jet {
        Jet::new(self.jet_rows(t, d))
    }

    /// The curve `t ↦ M γ(t)` for a matrix with `dim()+1` columns.
    pub fn linear_image(&self, label: impl Into<String>, m: &DMatrix<f64>) -> ParamCurve {
        assert_eq!(m.ncols(), self.coords.len());
        let coords = (0..m.nrows())
            .map(|r| {
                let mut acc = TrigPoly::zero(self.omega);
                for (j, c) in self.coords.iter().enumerate() {
                    if m[(r, j)] != 0.0 {
                        acc.add_scaled(c, m[(r, j)]);
                    }
                }
                acc
            })
            .collect();
        ParamCurve {
            label: label.into(),
            omega: self.omega,
            coords,
        }
    }

    /// Reduces parameter values to `[0, period)`.
    pub fn wrap(&self, t: f64) -> f64 {
        t.rem_euclid(self.period())
    }

    /// Distance between two parameters on the circle of length `period()`.
    pub fn circular_distance(&self, a: f64, b: f64) -> f64 {
        let d = (a - b).rem_euclid(self.period());
        d.min(self.period() - d)
    }
}

/// Instantiates one of the standard curve families in `Pⁿ`.
///
/// * `rational_normal(n)`: `θ ↦ (cosⁿθ, cosⁿ⁻¹θ sinθ, ..., sinⁿθ)`, `θ ∈ [0, π)`.
/// * `trig_convex(2k)`: `t ↦ (1, cos t, sin t, ..., cos kt, sin kt)`, `t ∈ [0, 2π)`.
/// * `trig_convex(2k+1)`: `t ↦ (cos t, sin t, cos 3t, sin 3t, ..., cos(2k+1)t, sin(2k+1)t)`,
///   `t ∈ [0, π)`.
pub fn build_model(kind: ModelKind, n: usize) -> Result<ParamCurve> {
    if n < 2 {
        return Err(Error::Domain(format!("curve models need n >= 2, got {n}")));
    }
    match kind {
        ModelKind::RationalNormal => Ok(rational_normal(n)),
        ModelKind::TrigConvex => Ok(trig_convex(n)),
        ModelKind::Fourier => Err(Error::Domain(
            "fourier curves are built from a coefficient matrix".into(),
        )),
    }
}

fn rational_normal(n: usize) -> ParamCurve {
    let cos = TrigPoly::new(1.0, vec![0.0, 1.0], vec![0.0, 0.0]);
    let sin = TrigPoly::new(1.0, vec![0.0, 0.0], vec![0.0, 1.0]);
    let coords = (0..=n)
        .map(|j| {
            let mut acc = TrigPoly::constant(1.0, 1.0);
            for _ in 0..n - j {
                acc = acc.mul(&cos);
            }
            for _ in 0..j {
                acc = acc.mul(&sin);
            }
            acc
        })
        .collect();
    ParamCurve {
        label: format!("rational_normal({n})"),
        omega: 1.0,
        coords,
    }
}

fn harmonic(omega: f64, k: usize, sine: bool) -> TrigPoly {
    let mut cos = vec![0.0; k + 1];
    let mut sin = vec![0.0; k + 1];
    if sine {
        sin[k] = 1.0;
    } else {
        cos[k] = 1.0;
    }
    TrigPoly::new(omega, cos, sin)
}

fn trig_convex(n: usize) -> ParamCurve {
    let mut coords = Vec::with_capacity(n + 1);
    if n % 2 == 0 {
        coords.push(TrigPoly::constant(0.5, 1.0));
        for h in 1..=n / 2 {
            coords.push(harmonic(0.5, 2 * h, false));
            coords.push(harmonic(0.5, 2 * h, true));
        }
    } else {
        for h in 0..=(n - 1) / 2 {
            coords.push(harmonic(1.0, 2 * h + 1, false));
            coords.push(harmonic(1.0, 2 * h + 1, true));
        }
    }
    ParamCurve {
        label: format!("trig_convex({n})"),
        omega: coords[0].omega(),
        coords,
    }
}

/// Builds a curve from rows `[a0, a1, b1, a2, b2, ...]` of harmonics in `t`.
///
/// When every harmonic present is odd the lift is antiperiodic and the curve
/// closes after `π`; otherwise the period is `2π`.
pub fn fourier_curve(rows: &[Vec<f64>]) -> Result<ParamCurve> {
    if rows.len() < 3 {
        return Err(Error::Domain("fourier curves need n >= 2".into()));
    }
    let mut all_odd = true;
    let mut any = false;
    for row in rows {
        if row.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain("non-finite fourier coefficient".into()));
        }
        if row.is_empty() || row.len() % 2 == 0 {
            return Err(Error::Domain(
                "fourier rows must have odd length [a0, a1, b1, ...]".into(),
            ));
        }
        for (idx, &x) in row.iter().enumerate() {
            if x != 0.0 {
                any = true;
                let h = idx.div_ceil(2);
                if h % 2 == 0 {
                    all_odd = false;
                }
            }
        }
    }
    if !any {
        return Err(Error::Domain("fourier curve is identically zero".into()));
    }
    let (omega, stride) = if all_odd { (1.0, 1) } else { (0.5, 2) };
    let coords = rows
        .iter()
        .map(|row| {
            let hmax = (row.len() - 1) / 2;
            let mut cos = vec![0.0; stride * hmax + 1];
            let mut sin = vec![0.0; stride * hmax + 1];
            cos[0] = row[0];
            for h in 1..=hmax {
                cos[stride * h] = row[2 * h - 1];
                sin[stride * h] = row[2 * h];
            }
            TrigPoly::new(omega, cos, sin)
        })
        .collect();
    Ok(ParamCurve {
        label: "fourier".into(),
        omega,
        coords,
    })
}

/// Checks that `γ, γ', ..., γ^(order)` are independent at `samples` equispaced
/// parameters.
pub fn check_jet_rank(c: &ParamCurve, order: usize, samples: usize, tol: &Tolerances) -> Result<()> {
    for s in 0..samples {
        let t = c.period() * s as f64 / samples as f64;
        let rows = normalized_rows(&c.jet_rows(t, order));
        if linalg::rank(&rows, tol.rank) < order + 1 {
            return Err(Error::degenerate(
                t,
                format!("jets up to order {order} are dependent"),
            ));
        }
    }
    Ok(())
}

pub(crate) fn normalized_rows(m: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = m.clone();
    for mut r in out.row_iter_mut() {
        let norm = r.norm();
        if norm > 0.0 {
            r /= norm;
        }
    }
    out
}

/// The curve of osculating hyperplanes, `γ*(t) = cross(γ(t), ..., γ^(n-1)(t))`.
///
/// The cofactor vector is itself a trigonometric polynomial of degree at most
/// `n·deg γ`; it is recovered exactly by interpolation, so the dual curve has
/// closed-form jets like any other curve.
pub fn dual_curve(c: &ParamCurve, tol: &Tolerances) -> Result<ParamCurve> {
    let n = c.dim();
    check_jet_rank(c, n - 1, 32, tol)?;
    let degree = n * c.degree();
    let mut coords = TrigPoly::fit_many(c.omega(), degree, n + 1, |t, out| {
        let rows = c.jet_rows(t, n - 1);
        let v = linalg::cross_rows(&rows);
        out.copy_from_slice(v.as_slice());
    });
    let reference = coords.iter().map(TrigPoly::max_coeff).fold(0.0, f64::max);
    for p in coords.iter_mut() {
        p.trim(1e-13, reference);
    }
    ParamCurve::from_coords(format!("dual({})", c.label()), coords)
}
