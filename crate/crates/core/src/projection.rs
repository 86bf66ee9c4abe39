//! Projection of a curve onto an osculating hyperplane along its tangent lines.
//!
//! For `t ≠ τ` the point `γ^τ(t)` is `l_t ∩ H_τ`, where `l_t` is the tangent
//! line at `γ(t)`. With `h` the covector of `H_τ` this is
//! `P(t) = ⟨h, γ'(t)⟩ γ(t) - ⟨h, γ(t)⟩ γ'(t)`, which vanishes to order
//! `n - 1` at `τ` and at `τ + π/ω`. Dividing by `sin^{n-1}(ω(t - τ))`
//! removes both zeros; in the variable `w = e^{iωt}` that division is an
//! exact polynomial division by `(w² - w₀²)^{n-1}`, so the projected curve is
//! again a trigonometric polynomial, now living in `H_τ ≅ P^{n-1}`.

use crate::convexity::{random_point, trial_rng};
use crate::curve::ParamCurve;
use crate::error::{Error, Result};
use crate::linalg;
use crate::projective::{merge_moments, ProjPoint, Subspace};
use crate::tangency::RootCounter;
use crate::tol::Tolerances;
use crate::trig::TrigPoly;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

/// Relative size of the division remainder tolerated as round-off.
const REMAINDER_TOL: f64 = 1e-8;
/// Samples used to check that no tangent line lies inside `H_τ`.
const TRANSVERSAL_SAMPLES: usize = 512;

/// A curve `γ^{t₁,...,t_k}` inside `H_{t₁} ∩ ... ∩ H_{t_k}`.
#[derive(Clone, Debug)]
pub struct ProjectedCurve {
    base: ParamCurve,
    moments: Vec<f64>,
    ambient: Subspace,
    embedding: DMatrix<f64>,
    curve: ParamCurve,
}

impl ProjectedCurve {
    pub fn base(&self) -> &ParamCurve {
        &self.base
    }

    pub fn moments(&self) -> &[f64] {
        &self.moments
    }

    /// The subspace of the base `Pⁿ` containing the projected curve.
    pub fn ambient(&self) -> &Subspace {
        &self.ambient
    }

    /// Orthonormal columns mapping internal coordinates to base coordinates.
    pub fn embedding(&self) -> &DMatrix<f64> {
        &self.embedding
    }

    /// The projected curve in internal coordinates of the ambient subspace.
    pub fn curve(&self) -> &ParamCurve {
        &self.curve
    }

    pub fn to_ambient(&self, q: &ProjPoint) -> Result<ProjPoint> {
        if q.dim() != self.curve.dim() {
            return Err(Error::Domain("internal point has the wrong dimension".into()));
        }
        ProjPoint::from_vector(&(&self.embedding * q.to_vector()))
    }

    /// Internal coordinates of a point of the ambient subspace.
    pub fn to_internal(&self, p: &ProjPoint, tol: &Tolerances) -> Result<ProjPoint> {
        if p.dim() != self.base.dim() {
            return Err(Error::Domain("point has the wrong dimension".into()));
        }
        let v = p.to_vector();
        if self.ambient.residual(&v) > tol.rank.sqrt() {
            return Err(Error::Domain(format!(
                "point is not in the projection ambient (residual {:.3e})",
                self.ambient.residual(&v)
            )));
        }
        ProjPoint::from_vector(&(self.embedding.transpose() * v))
    }
}

/// Projects `c` onto its osculating hyperplane `H_τ` along tangent lines.
pub fn project_onto_osculating_hyperplane(c: &ParamCurve, tau: f64, tol: &Tolerances) -> Result<ProjectedCurve> {
    let (curve, e) = project_step(c, tau, tol)?;
    Ok(ProjectedCurve {
        base: c.clone(),
        moments: vec![tau],
        ambient: Subspace::from_orthonormal(e.transpose()),
        embedding: e,
        curve: relabel(curve, c, &[tau]),
    })
}

/// Applies the projection once per moment. Moments closer than the merge
/// tolerance are made equal, which realizes projection into the osculating
/// subspace of higher codimension.
pub fn project_iterated(c: &ParamCurve, moments: &[f64], tol: &Tolerances) -> Result<ProjectedCurve> {
    let n = c.dim();
    if moments.len() >= n {
        return Err(Error::Domain(format!(
            "{} projections of a curve in P^{n} leave no curve",
            moments.len()
        )));
    }
    let with_mult: Vec<(f64, usize)> = moments.iter().map(|&t| (t, 1)).collect();
    let merged = merge_moments(c, &with_mult, tol);
    let mut order: Vec<f64> = Vec::with_capacity(moments.len());
    for &t in moments {
        let t = c.wrap(t);
        let rep = merged
            .iter()
            .map(|m| m.0)
            .find(|&m| c.circular_distance(m, t) <= tol.merge)
            .unwrap_or(t);
        order.push(rep);
    }
    let mut current = c.clone();
    let mut embedding = DMatrix::identity(n + 1, n + 1);
    for &t in &order {
        let (next, e) = project_step(&current, t, tol)?;
        embedding = embedding * e;
        current = next;
    }
    Ok(ProjectedCurve {
        base: c.clone(),
        moments: moments.to_vec(),
        ambient: Subspace::from_orthonormal(embedding.transpose()),
        embedding,
        curve: relabel(current, c, moments),
    })
}

fn relabel(curve: ParamCurve, base: &ParamCurve, moments: &[f64]) -> ParamCurve {
    let label = format!(
        "{}^[{}]",
        base.label(),
        moments.iter().map(|t| format!("{t:.6}")).collect::<Vec<_>>().join(",")
    );
    ParamCurve::from_coords(label, curve.coords().to_vec()).expect("projected curve has coordinates")
}

/// One projection step; returns the projected curve in internal coordinates
/// and the orthonormal basis (columns) of `H_τ` used for them.
fn project_step(c: &ParamCurve, tau: f64, tol: &Tolerances) -> Result<(ParamCurve, DMatrix<f64>)> {
    let n = c.dim();
    if n < 2 {
        return Err(Error::Domain("projection needs a curve in P^n with n >= 2".into()));
    }
    let jets = c.jet_rows(tau, n - 1);
    let mut h = linalg::cross_rows(&crate::curve::normalized_rows(&jets));
    let hn = h.norm();
    if !(hn > 0.0) || linalg::rank(&crate::curve::normalized_rows(&jets), tol.rank) < n {
        return Err(Error::degenerate(tau, "osculating hyperplane is undefined"));
    }
    h /= hn;

    let omega = c.omega();
    let m = n - 1;
    let a = pair(&h, c.coords(), omega);
    let da = a.derivative();
    let coords: Vec<TrigPoly> = c
        .coords()
        .iter()
        .map(|g| {
            let mut p = da.mul(g);
            p.add_scaled(&a.mul(&g.derivative()), -1.0);
            p
        })
        .collect();
    let reference = coords.iter().map(TrigPoly::max_coeff).fold(0.0, f64::max);
    if reference == 0.0 {
        return Err(Error::Geometry("tangent lines all lie in the osculating hyperplane".into()));
    }
    let w0 = Complex64::from_polar(1.0, omega * tau);
    let mut divided = Vec::with_capacity(coords.len());
    for p in &coords {
        divided.push(divide_by_sine_power(p, w0, m, reference)?);
    }
    let dref = divided.iter().map(TrigPoly::max_coeff).fold(0.0, f64::max);
    for q in divided.iter_mut() {
        q.trim(1e-14, dref);
    }
    let e = linalg::complement_basis(&h);
    let full = ParamCurve::from_coords(c.label(), divided)?;
    check_transversal(&full)?;
    let internal = full.linear_image(c.label(), &e.transpose());
    Ok((internal, e))
}

/// `t ↦ ⟨h, γ(t)⟩`.
fn pair(h: &DVector<f64>, coords: &[TrigPoly], omega: f64) -> TrigPoly {
    let mut acc = TrigPoly::zero(omega);
    for (g, x) in coords.iter().zip(h.iter()) {
        acc.add_scaled(g, *x);
    }
    acc
}

/// `p(t) / sin^m(ω(t - τ))` for a `p` that vanishes to order `m` at `τ` and
/// `τ + π/ω`; `w₀ = e^{iωτ}`.
fn divide_by_sine_power(p: &TrigPoly, w0: Complex64, m: usize, reference: f64) -> Result<TrigPoly> {
    let omega = p.omega();
    let deg = p.degree();
    // ascending coefficients of w^deg · p in w
    let mut poly = p.to_laurent();
    let a = w0 * w0;
    for _ in 0..m {
        poly = divide_quadratic(&poly, a, reference)?;
    }
    // Q = (2i w₀)^m w^{m-deg} · poly(w)
    let factor = (Complex64::new(0.0, 2.0) * w0).powu(m as u32);
    let out_deg = deg as isize - m as isize;
    if out_deg < 0 {
        return Ok(TrigPoly::zero(omega));
    }
    let laurent: Vec<Complex64> = poly.iter().map(|c| c * factor).collect();
    debug_assert_eq!(laurent.len() as isize, 2 * out_deg + 1);
    Ok(TrigPoly::from_laurent(omega, &laurent))
}

/// Exact division of an ascending polynomial by `w² - a`.
fn divide_quadratic(poly: &[Complex64], a: Complex64, reference: f64) -> Result<Vec<Complex64>> {
    let len = poly.len();
    if len < 3 {
        return Err(Error::Geometry("projection numerator has too low degree".into()));
    }
    // poly = (w² - a) q + r, q of length len - 2, processed from the top
    let mut rem = poly.to_vec();
    let mut q = vec![Complex64::new(0.0, 0.0); len - 2];
    for k in (0..len - 2).rev() {
        let c = rem[k + 2];
        q[k] = c;
        rem[k + 2] = Complex64::new(0.0, 0.0);
        rem[k] += c * a;
    }
    let r = rem[0].norm().max(rem[1].norm());
    if r > REMAINDER_TOL * reference.max(1e-300) {
        return Err(Error::Geometry(format!(
            "projection does not vanish to the expected order (remainder {r:.3e})"
        )));
    }
    Ok(q)
}

fn check_transversal(q: &ParamCurve) -> Result<()> {
    let mut min = f64::INFINITY;
    let mut max = 0.0f64;
    for s in 0..TRANSVERSAL_SAMPLES {
        let t = q.period() * s as f64 / TRANSVERSAL_SAMPLES as f64;
        let norm = q.eval(t).norm();
        min = min.min(norm);
        max = max.max(norm);
    }
    if !(min > 1e-8 * max) {
        return Err(Error::Geometry(
            "a tangent line lies in the osculating hyperplane (input is not convex)".into(),
        ));
    }
    Ok(())
}

/// Outcome of comparing `♯_p(γ^{t₁,...,t_k}) + k` with `♯_p(γ)` on random
/// points of the ambient subspace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecursionReport {
    pub k: usize,
    pub cases: usize,
    pub mismatches: usize,
    /// Points dropped because one of the two counts was not decidable.
    pub skipped: usize,
}

impl RecursionReport {
    pub fn holds(&self) -> bool {
        self.mismatches == 0 && self.cases > 0
    }
}

/// Checks the root-count recursion at `cases` random points of the ambient
/// subspace of `proj`.
pub fn recursion_check(proj: &ProjectedCurve, cases: usize, seed: u64, tol: &Tolerances) -> Result<RecursionReport> {
    let base = RootCounter::new(proj.base(), tol)?;
    let inner = RootCounter::new(proj.curve(), tol)?;
    let k = proj.moments().len();
    let outcomes: Vec<Result<Option<bool>>> = (0..cases as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            let q = random_point(&mut rng, proj.curve().dim());
            let p = proj.to_ambient(&q)?;
            match (inner.count(&q), base.count(&p)) {
                (Ok(a), Ok(b)) => Ok(Some(a.total + k == b.total)),
                (Err(e), _) | (_, Err(e)) if e.is_precision() => Ok(None),
                (Err(e), _) | (_, Err(e)) => Err(e),
            }
        })
        .collect();
    let mut report = RecursionReport {
        k,
        cases: 0,
        mismatches: 0,
        skipped: 0,
    };
    for o in outcomes {
        match o? {
            Some(ok) => {
                report.cases += 1;
                if !ok {
                    report.mismatches += 1;
                }
            }
            None => report.skipped += 1,
        }
    }
    Ok(report)
}
