//! Root filtration of `Pⁿ` by a convex curve.
//!
//! `P_i(γ)` is the set of points with `♯_p(γ) >= n - 2i`. A point of
//! `P_i \ P_{i-1}` lies on exactly `n - 2i` osculating hyperplanes (counted
//! with multiplicity) and inside the elliptic hull of the curve projected
//! onto their intersection. That pair, moments plus a position in a convex
//! fiber, is what [`tangency_data`] computes, and [`transport`] rebuilds the
//! same pair for another curve.

mod factor;
mod hull;

pub use factor::factor_binary_form;
pub use hull::{EllipticHull, FiberPoint, DEFAULT_TAU_GRID};

use crate::convexity::{random_point, trial_rng};
use crate::curve::ParamCurve;
use crate::error::{Error, Result};
use crate::projection::project_iterated;
use crate::projective::{intersect_osculating, ProjPoint};
use crate::tangency::{RootCount, RootCounter, Tangency};
use crate::tol::Tolerances;
use nalgebra::DVector;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

/// Points rechecked for local constancy of `♯` in a census.
const CONSTANCY_POINTS: usize = 100;
const CONSTANCY_STEP: f64 = 1e-5;
const CONSTANCY_RECHECK: f64 = 1e-8;

/// Stratum index from a root count: `i = (n - ♯)/2`.
pub fn label_from_count(n: usize, rc: &RootCount) -> Result<usize> {
    if rc.total > n {
        return Err(Error::Geometry(format!(
            "{} tangency roots exceed n = {n}; the curve is not convex",
            rc.total
        )));
    }
    if (n - rc.total) % 2 != 0 {
        return Err(Error::OnDiscriminant(format!(
            "{} tangency roots for n = {n}: parity mismatch, point is numerically on the discriminant",
            rc.total
        )));
    }
    Ok((n - rc.total) / 2)
}

/// The index `i` with `p ∈ P_i(γ) \ P_{i-1}(γ)`.
pub fn stratum_label(c: &ParamCurve, p: &ProjPoint, tol: &Tolerances) -> Result<usize> {
    let rc = crate::tangency::count_roots(c, p, tol)?;
    label_from_count(c.dim(), &rc)
}

/// `p ∈ Ell_γ`: no tangency roots for even `n`, exactly one for odd `n`.
/// For even `n` the answer is cross-checked against the sampled supporting
/// half-spaces.
pub fn elliptic_hull_membership(c: &ParamCurve, p: &ProjPoint, tol: &Tolerances) -> Result<bool> {
    let n = c.dim();
    if n % 2 == 0 {
        EllipticHull::new(c, DEFAULT_TAU_GRID, tol)?.contains(p)
    } else {
        Ok(crate::tangency::count_roots(c, p, tol)?.total == 1)
    }
}

/// Chebyshev center of the elliptic hull sampled at `tau_grid` hyperplanes.
pub fn hull_center(c: &ParamCurve, tau_grid: usize, tol: &Tolerances) -> Result<ProjPoint> {
    Ok(EllipticHull::new(c, tau_grid, tol)?.center())
}

/// Position of a point in the root filtration.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StratumData {
    pub index: usize,
    /// Tangency moments with their orders, `Σ m = n - 2·index`.
    pub moments: Vec<Tangency>,
    /// Position in the elliptic hull of the projected curve; `None` on the
    /// bottom stratum, where the moments determine the point.
    pub fiber: Option<FiberPoint>,
}

impl StratumData {
    pub fn root_count(&self) -> usize {
        self.moments.iter().map(|t| t.m).sum()
    }

    fn expanded_moments(&self) -> Vec<f64> {
        self.moments
            .iter()
            .flat_map(|t| std::iter::repeat_n(t.t, t.m))
            .collect()
    }
}

/// Stratum, moments and fiber coordinates of `p`.
pub fn tangency_data(c: &ParamCurve, p: &ProjPoint, tol: &Tolerances) -> Result<StratumData> {
    let rc = crate::tangency::count_roots(c, p, tol)?;
    data_from_count(c, p, rc, tol)
}

fn data_from_count(c: &ParamCurve, p: &ProjPoint, rc: RootCount, tol: &Tolerances) -> Result<StratumData> {
    let index = label_from_count(c.dim(), &rc)?;
    let mut data = StratumData {
        index,
        moments: rc.tangencies,
        fiber: None,
    };
    if index == 0 {
        return Ok(data);
    }
    let (hull, proj) = fiber_hull(c, &data.expanded_moments(), tol)?;
    let q = match &proj {
        Some(pr) => pr.to_internal(p, tol)?,
        None => p.clone(),
    };
    let f = hull.fiber_point(&q)?;
    if f.radius >= 1.0 {
        return Err(Error::Precision(format!(
            "point lies outside the hull of its projected curve (radial fraction {:.6})",
            f.radius
        )));
    }
    data.fiber = Some(f);
    Ok(data)
}

/// The hull containing the fiber over `moments`, with the projection used
/// to reach it (none when there are no moments).
fn fiber_hull(
    c: &ParamCurve,
    moments: &[f64],
    tol: &Tolerances,
) -> Result<(EllipticHull, Option<crate::projection::ProjectedCurve>)> {
    if moments.is_empty() {
        return Ok((EllipticHull::new(c, DEFAULT_TAU_GRID, tol)?, None));
    }
    let proj = project_iterated(c, moments, tol)?;
    let hull = EllipticHull::new(proj.curve(), DEFAULT_TAU_GRID, tol)?;
    Ok((hull, Some(proj)))
}

/// The point of `P^n` with the given stratum data relative to `c`.
pub fn reconstruct(c: &ParamCurve, data: &StratumData, tol: &Tolerances) -> Result<ProjPoint> {
    let n = c.dim();
    if data.root_count() + 2 * data.index != n {
        return Err(Error::Domain(format!(
            "stratum data with {} roots at index {} does not fit n = {n}",
            data.root_count(),
            data.index
        )));
    }
    match &data.fiber {
        None => {
            let moments: Vec<(f64, usize)> = data.moments.iter().map(|t| (t.t, t.m)).collect();
            intersect_osculating(c, &moments, tol)?.point()
        }
        Some(f) => {
            let (hull, proj) = fiber_hull(c, &data.expanded_moments(), tol)?;
            let q = hull.point_at(f)?;
            match proj {
                Some(pr) => pr.to_ambient(&q),
                None => Ok(q),
            }
        }
    }
}

/// Moves `p` from the filtration of `c1` to that of `c2`: same stratum, the
/// same moments as fractions of the period, the same fiber coordinates.
pub fn transport(p: &ProjPoint, c1: &ParamCurve, c2: &ParamCurve, tol: &Tolerances) -> Result<ProjPoint> {
    if c1.dim() != c2.dim() {
        return Err(Error::Domain(format!(
            "cannot transport between P^{} and P^{}",
            c1.dim(),
            c2.dim()
        )));
    }
    let mut data = tangency_data(c1, p, tol)?;
    let scale = c2.period() / c1.period();
    for t in &mut data.moments {
        t.t = c2.wrap(t.t * scale);
    }
    reconstruct(c2, &data, tol)
}

/// Histogram of root counts over random points.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CensusReport {
    pub n: usize,
    pub samples: usize,
    pub histogram: BTreeMap<String, usize>,
    pub components: usize,
    pub seed: u64,
    /// Samples dropped as numerically on the discriminant.
    #[serde(skip)]
    pub discarded: usize,
    /// Points whose count was rechecked after a small perturbation.
    #[serde(skip)]
    pub constancy_checked: usize,
}

impl CensusReport {
    /// Root counts that occurred, in increasing order.
    pub fn support(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.histogram.keys().filter_map(|k| k.parse().ok()).collect();
        s.sort_unstable();
        s
    }

    /// `{n, n-2, ..., n - 2⌊n/2⌋}` in increasing order.
    pub fn expected_support(&self) -> Vec<usize> {
        (0..=self.n / 2).rev().map(|i| self.n - 2 * i).collect()
    }
}

/// Counts roots at `samples` random points and histograms the totals.
/// Every observed total must be `n - 2i` for some `i`; anything else is a
/// geometry error. The count is also rechecked to be locally constant.
pub fn component_census(c: &ParamCurve, samples: usize, seed: u64, tol: &Tolerances) -> Result<CensusReport> {
    let n = c.dim();
    let counter = RootCounter::new(c, tol)?;
    let results: Vec<Result<Option<(ProjPoint, usize)>>> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            let p = random_point(&mut rng, n);
            match counter.count(&p) {
                Ok(rc) => match label_from_count(n, &rc) {
                    Ok(_) => Ok(Some((p, rc.total))),
                    Err(e) if e.is_precision() => Ok(None),
                    Err(e) => Err(e),
                },
                Err(e) if e.is_precision() => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect();
    let mut histogram = BTreeMap::new();
    let mut counted = Vec::new();
    let mut discarded = 0;
    for r in results {
        match r? {
            Some((p, total)) => {
                *histogram.entry(total.to_string()).or_insert(0) += 1;
                counted.push((p, total));
            }
            None => discarded += 1,
        }
    }

    let checks: Vec<(u64, &(ProjPoint, usize))> =
        counted.iter().take(CONSTANCY_POINTS).enumerate().map(|(k, x)| (k as u64, x)).collect();
    checks
        .par_iter()
        .map(|(k, (p, total))| {
            let mut rng = trial_rng(seed, samples as u64 + k);
            for step in [CONSTANCY_STEP, CONSTANCY_RECHECK] {
                let q = perturb(p, step, &mut rng)?;
                match counter.count(&q) {
                    Ok(rc) if rc.total == *total => return Ok(()),
                    Ok(_) => {}
                    Err(e) if e.is_precision() => return Ok(()),
                    Err(e) => return Err(e),
                }
            }
            Err(Error::Geometry(format!(
                "root count {total} is not locally constant near {p}"
            )))
        })
        .collect::<Result<Vec<()>>>()?;

    let report = CensusReport {
        n,
        samples,
        components: histogram.len(),
        histogram,
        seed,
        discarded,
        constancy_checked: checks.len(),
    };
    let allowed = report.expected_support();
    if let Some(bad) = report.support().into_iter().find(|k| !allowed.contains(k)) {
        return Err(Error::Geometry(format!(
            "root count {bad} is not of the form n - 2i for n = {n}"
        )));
    }
    Ok(report)
}

fn perturb(p: &ProjPoint, step: f64, rng: &mut impl rand::Rng) -> Result<ProjPoint> {
    let dir = DVector::from_iterator(p.coords().len(), (0..p.coords().len()).map(|_| StandardNormal.sample(rng)));
    let dir: DVector<f64> = dir.normalize();
    ProjPoint::from_vector(&(p.to_vector() + dir * step))
}
