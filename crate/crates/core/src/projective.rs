//! Points, subspaces and osculating flags in homogeneous coordinates.

use crate::curve::{normalized_rows, ParamCurve};
use crate::error::{Error, Result};
use crate::linalg;
use crate::tol::Tolerances;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Entries smaller than this (after scaling to unit norm) are treated as zero
/// when choosing the sign of a representative.
const SIGN_EPS: f64 = 1e-12;

/// A point of `Pⁿ`, stored as its canonical representative: unit norm, first
/// non-negligible entry positive.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProjPoint {
    coords: Vec<f64>,
}

/// Canonical representative of the projective point of `v`.
pub fn normalize(v: &[f64]) -> Result<ProjPoint> {
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain("homogeneous coordinates must be finite".into()));
    }
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::Domain("the zero vector is not a projective point".into()));
    }
    let mut coords: Vec<f64> = v.iter().map(|x| x / norm).collect();
    if let Some(lead) = coords.iter().find(|x| x.abs() > SIGN_EPS) {
        if *lead < 0.0 {
            coords.iter_mut().for_each(|x| *x = -*x);
        }
    }
    Ok(ProjPoint { coords })
}

impl ProjPoint {
    pub fn from_vector(v: &DVector<f64>) -> Result<Self> {
        normalize(v.as_slice())
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn to_vector(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.coords)
    }

    /// Ambient dimension `n` of the `Pⁿ` containing the point.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    /// Sign-agnostic distance: `min(|a - b|, |a + b|)` of the unit representatives.
    pub fn distance(&self, other: &ProjPoint) -> f64 {
        assert_eq!(self.coords.len(), other.coords.len());
        let (mut plus, mut minus) = (0.0, 0.0);
        for (a, b) in self.coords.iter().zip(&other.coords) {
            minus += (a - b) * (a - b);
            plus += (a + b) * (a + b);
        }
        plus.min(minus).sqrt()
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x:.12}")?;
        }
        write!(f, ")")
    }
}

/// Derivatives `γ(t), γ'(t), ..., γ^(d)(t)` stacked as rows.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    derivs: DMatrix<f64>,
}

impl Jet {
    pub fn new(derivs: DMatrix<f64>) -> Self {
        Jet { derivs }
    }

    pub fn order(&self) -> usize {
        self.derivs.nrows() - 1
    }

    pub fn rows(&self) -> &DMatrix<f64> {
        &self.derivs
    }

    pub fn row(&self, j: usize) -> DVector<f64> {
        self.derivs.row(j).transpose()
    }
}

/// A projective subspace, stored as an orthonormal basis of its cone.
///
/// Dimension `-1` is the empty subspace.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    basis: DMatrix<f64>,
    ambient: usize,
}

impl Subspace {
    /// Span of the given rows; they must be independent.
    pub fn span(rows: &DMatrix<f64>, tol: &Tolerances) -> Result<Self> {
        if rows.ncols() == 0 {
            return Err(Error::Domain("vectors need at least one coordinate".into()));
        }
        let basis = linalg::row_space(&normalized_rows(rows), tol.rank);
        if basis.nrows() < rows.nrows() {
            return Err(Error::Domain(format!(
                "{} spanning vectors have rank {}",
                rows.nrows(),
                basis.nrows()
            )));
        }
        Ok(Subspace {
            basis,
            ambient: rows.ncols() - 1,
        })
    }

    pub(crate) fn from_orthonormal(basis: DMatrix<f64>) -> Self {
        let ambient = basis.ncols() - 1;
        Subspace { basis, ambient }
    }

    pub fn empty(ambient: usize) -> Self {
        Subspace {
            basis: DMatrix::zeros(0, ambient + 1),
            ambient,
        }
    }

    pub fn whole(ambient: usize) -> Self {
        Subspace {
            basis: DMatrix::identity(ambient + 1, ambient + 1),
            ambient,
        }
    }

    /// Projective dimension; `-1` when empty.
    pub fn dim(&self) -> isize {
        self.basis.nrows() as isize - 1
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn is_empty(&self) -> bool {
        self.basis.nrows() == 0
    }

    /// Orthonormal basis, one vector per row.
    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    /// Linear forms vanishing on the subspace, as orthonormal rows.
    pub fn annihilator(&self, tol: &Tolerances) -> DMatrix<f64> {
        linalg::null_space(&self.basis, tol.rank)
    }

    /// Relative distance of `v` from the cone over the subspace.
    pub fn residual(&self, v: &DVector<f64>) -> f64 {
        let norm = v.norm();
        if norm == 0.0 {
            return 0.0;
        }
        let proj = self.basis.transpose() * (&self.basis * v);
        (v - proj).norm() / norm
    }

    pub fn contains(&self, p: &ProjPoint, tol: &Tolerances) -> bool {
        self.residual(&p.to_vector()) <= tol.rank
    }

    pub fn contains_subspace(&self, other: &Subspace, tol: &Tolerances) -> bool {
        other
            .basis
            .row_iter()
            .all(|r| self.residual(&r.transpose()) <= tol.rank)
    }

    /// The unique point of a 0-dimensional subspace.
    pub fn point(&self) -> Result<ProjPoint> {
        if self.basis.nrows() != 1 {
            return Err(Error::Geometry(format!(
                "expected a point, got a subspace of dimension {}",
                self.dim()
            )));
        }
        ProjPoint::from_vector(&self.basis.row(0).transpose())
    }
}

/// Osculating subspace `L^k_t = span(γ(t), ..., γ^(k)(t))`.
///
/// The basis is Gram-Schmidt of the jet rows in order, so its first `j+1`
/// rows span `L^j_t` for every `j <= k`.
pub fn osculating_subspace(c: &ParamCurve, t: f64, k: usize, tol: &Tolerances) -> Result<Subspace> {
    if k > c.dim() {
        return Err(Error::Domain(format!(
            "osculating subspace of dimension {k} does not exist in P^{}",
            c.dim()
        )));
    }
    let rows = normalized_rows(&c.jet_rows(t, k));
    let basis = linalg::gram_schmidt_rows(&rows, tol.rank)
        .ok_or_else(|| Error::degenerate(t, format!("jets up to order {k} are dependent")))?;
    Ok(Subspace::from_orthonormal(basis))
}

/// Intersection of subspaces as the joint null space of their annihilators.
pub fn intersect(subs: &[Subspace], tol: &Tolerances) -> Result<Subspace> {
    let Some(first) = subs.first() else {
        return Err(Error::Domain("intersection of an empty family".into()));
    };
    let n = first.ambient;
    if subs.iter().any(|s| s.ambient != n) {
        return Err(Error::Domain("subspaces live in different ambient spaces".into()));
    }
    let forms: Vec<DMatrix<f64>> = subs.iter().map(|s| s.annihilator(tol)).collect();
    let total: usize = forms.iter().map(|f| f.nrows()).sum();
    if total == 0 {
        return Ok(Subspace::whole(n));
    }
    let mut stacked = DMatrix::zeros(total, n + 1);
    let mut r = 0;
    for f in &forms {
        stacked.rows_mut(r, f.nrows()).copy_from(f);
        r += f.nrows();
    }
    let kernel = linalg::null_space(&stacked, tol.rank);
    if kernel.nrows() == 0 {
        return Ok(Subspace::empty(n));
    }
    Ok(Subspace::from_orthonormal(kernel))
}

/// Merges moments closer than `tol.merge` on the parameter circle, adding up
/// their codimensions. Output is sorted by moment.
pub fn merge_moments(c: &ParamCurve, moments: &[(f64, usize)], tol: &Tolerances) -> Vec<(f64, usize)> {
    let mut items: Vec<(f64, usize)> = moments.iter().map(|&(t, k)| (c.wrap(t), k)).collect();
    items.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, usize)> = Vec::with_capacity(items.len());
    for (t, k) in items {
        match out.last_mut() {
            Some(last) if c.circular_distance(last.0, t) <= tol.merge => last.1 += k,
            _ => out.push((t, k)),
        }
    }
    if out.len() > 1 {
        let (first, last) = (out[0], out[out.len() - 1]);
        if c.circular_distance(first.0, last.0) <= tol.merge {
            out[0].1 += last.1;
            out.pop();
        }
    }
    out
}

/// `⋂ L^{n-k_j}_{t_j}` with coincident moments merged first, so that a
/// moment of total codimension `k` contributes `L^{n-k}`.
pub fn intersect_osculating(c: &ParamCurve, moments: &[(f64, usize)], tol: &Tolerances) -> Result<Subspace> {
    let n = c.dim();
    let merged = merge_moments(c, moments, tol);
    if merged.is_empty() {
        return Ok(Subspace::whole(n));
    }
    let mut subs = Vec::with_capacity(merged.len());
    for (t, k) in merged {
        if k == 0 {
            continue;
        }
        if k > n + 1 {
            return Err(Error::Domain(format!("codimension {k} exceeds n + 1 = {}", n + 1)));
        }
        if k == n + 1 {
            return Ok(Subspace::empty(n));
        }
        subs.push(osculating_subspace(c, t, n - k, tol)?);
    }
    if subs.is_empty() {
        return Ok(Subspace::whole(n));
    }
    intersect(&subs, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{build_model, ModelKind};
    use approx::assert_relative_eq;

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize(&[0.0, 2.0, 0.0]).unwrap().coords(), &[0.0, 1.0, 0.0]);
        assert_eq!(normalize(&[-1.0, 0.0, 0.0]).unwrap().coords(), &[1.0, 0.0, 0.0]);
        let p = normalize(&[3.0, 4.0, 0.0]).unwrap();
        assert_relative_eq!(p.coords()[0], 0.6, epsilon = 1e-15);
        assert_relative_eq!(p.coords()[1], 0.8, epsilon = 1e-15);
        assert!(matches!(normalize(&[0.0, 0.0]), Err(Error::Domain(_))));
    }

    #[test]
    fn circle_tangent_line() {
        let tol = Tolerances::default();
        let c = build_model(ModelKind::TrigConvex, 2).unwrap();
        let l = osculating_subspace(&c, 0.0, 1, &tol).unwrap();
        assert_eq!(l.dim(), 1);
        let expect = Subspace::span(
            &DMatrix::from_row_slice(2, 3, &[1.0, 1.0, 0.0, 0.0, 0.0, 1.0]),
            &tol,
        )
        .unwrap();
        assert!(l.contains_subspace(&expect, &tol) && expect.contains_subspace(&l, &tol));
    }

    #[test]
    fn twisted_cubic_osculating_plane() {
        let tol = Tolerances::default();
        let c = build_model(ModelKind::RationalNormal, 3).unwrap();
        let plane = osculating_subspace(&c, 0.0, 2, &tol).unwrap();
        let ann = plane.annihilator(&tol);
        assert_eq!(ann.nrows(), 1);
        assert_relative_eq!(ann[(0, 3)].abs(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn intersections() {
        let tol = Tolerances::default();
        let c = build_model(ModelKind::TrigConvex, 2).unwrap();
        let a = osculating_subspace(&c, 0.0, 1, &tol).unwrap();
        let b = osculating_subspace(&c, 2.0, 1, &tol).unwrap();
        assert_eq!(intersect(&[a.clone(), b], &tol).unwrap().dim(), 0);
        assert_eq!(intersect(&[a.clone(), a.clone()], &tol).unwrap().dim(), 1);
        let p = Subspace::span(&DMatrix::from_row_slice(1, 3, &[1.0, 0.0, 0.0]), &tol).unwrap();
        assert_eq!(intersect(&[a, p], &tol).unwrap().dim(), -1);
    }

    #[test]
    fn coincident_moments_merge() {
        let tol = Tolerances::default();
        let c = build_model(ModelKind::TrigConvex, 3).unwrap();
        let merged = merge_moments(&c, &[(0.5, 1), (0.5 + 1e-9, 1), (c.period() - 1e-9, 1)], &tol);
        assert_eq!(merged.len(), 2);
        let s = intersect_osculating(&c, &[(0.5, 1), (0.5, 1), (2.0, 1)], &tol).unwrap();
        assert_eq!(s.dim(), 0);
        let line = osculating_subspace(&c, 0.5, 1, &tol).unwrap();
        assert!(line.contains(&s.point().unwrap(), &tol));
    }
}
