//! Convexity checks: the root-count bound `♯_p(γ) <= n` on random points and
//! the requirement that `⋂ L^{n-k_j}_{t_j}` is a point whenever `Σ k_j = n`.
//!
//! Both are sampling checks. A failure comes with a witness that can be
//! re-checked; a pass only means that no violation was found.

use crate::curve::ParamCurve;
use crate::error::{Error, Result};
use crate::projective::{intersect_osculating, osculating_subspace, ProjPoint};
use crate::tangency::{RootCount, RootCounter};
use crate::tol::Tolerances;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

/// Re-draws allowed per trial when a point cannot be classified reliably.
const RETRIES: usize = 8;
/// Minimum pairwise distance of random moments, as a fraction of the period.
pub const MOMENT_SEPARATION: f64 = 1e-3;
/// Random starts per partition of `n` in the rank-drop search.
const SCAN_STARTS: u64 = 12;
/// Moments in the rank-drop search stay this fraction of the period apart.
const SCAN_SEPARATION: f64 = 0.02;
/// Singular values below this are handed to the exact dimension check.
const SCAN_ACCEPT: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A point with more than `n` tangency roots.
    Point { point: ProjPoint, roots: RootCount },
    /// Moments and codimensions whose osculating subspaces meet in more than
    /// a point (or not at all).
    Moments {
        composition: Vec<usize>,
        moments: Vec<f64>,
        dim: isize,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvexityReport {
    pub method: &'static str,
    pub verdict: Verdict,
    pub trials: usize,
    /// Largest `♯_p` seen (sampling check only).
    pub max_roots_seen: Option<usize>,
    /// Draws that had to be repeated because of precision errors.
    pub retries: usize,
    pub witness: Option<Witness>,
}

impl ConvexityReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        match self.verdict {
            Verdict::Pass => format!("{}: no violation found in {} trials", self.method, self.trials),
            Verdict::Fail => format!("{}: violation found", self.method),
        }
    }
}

/// Deterministic per-trial generator: one ChaCha stream per trial index.
pub(crate) fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// A point drawn from the rotation-invariant distribution on `Pⁿ`.
pub fn random_point(rng: &mut impl Rng, n: usize) -> ProjPoint {
    loop {
        let v: Vec<f64> = (0..=n).map(|_| rng.sample(StandardNormal)).collect();
        if let Ok(p) = crate::projective::normalize(&v) {
            return p;
        }
    }
}

/// Counts roots of a random point, re-drawing on precision errors.
pub(crate) fn count_random(
    counter: &RootCounter,
    rng: &mut ChaCha8Rng,
) -> Result<(ProjPoint, RootCount, usize)> {
    let n = counter.curve().dim();
    let mut last = None;
    for attempt in 0..=RETRIES {
        let p = random_point(rng, n);
        match counter.count(&p) {
            Ok(rc) => return Ok((p, rc, attempt)),
            Err(e) if e.is_precision() => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap_or_else(|| Error::Precision("retry limit reached".into())))
}

/// Samples `trials` random points and checks `♯_p(γ) <= n` for each.
pub fn check_convex_sampling(c: &ParamCurve, trials: usize, seed: u64, tol: &Tolerances) -> Result<ConvexityReport> {
    let counter = RootCounter::new(c, tol)?;
    let n = c.dim();
    let results: Vec<Result<(ProjPoint, RootCount, usize)>> = (0..trials)
        .into_par_iter()
        .map(|i| count_random(&counter, &mut trial_rng(seed, i as u64)))
        .collect();
    let mut max_roots = 0;
    let mut retries = 0;
    let mut witness = None;
    for r in results {
        let (p, rc, tries) = r?;
        retries += tries;
        max_roots = max_roots.max(rc.total);
        if rc.total > n && witness.is_none() {
            witness = Some(Witness::Point { point: p, roots: rc });
        }
    }
    Ok(ConvexityReport {
        method: "sampling",
        verdict: if witness.is_some() { Verdict::Fail } else { Verdict::Pass },
        trials,
        max_roots_seen: Some(max_roots),
        retries,
        witness,
    })
}

/// A uniformly random composition of `n` (ordered positive parts).
pub fn random_composition(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut parts = Vec::new();
    let mut current = 1;
    for _ in 1..n {
        if rng.random_bool(0.5) {
            parts.push(current);
            current = 1;
        } else {
            current += 1;
        }
    }
    parts.push(current);
    parts
}

/// `r` moments on the circle with pairwise distance at least `sep · period`.
pub fn random_moments(rng: &mut impl Rng, c: &ParamCurve, r: usize, sep: f64) -> Vec<f64> {
    let period = c.period();
    'outer: loop {
        let mut out: Vec<f64> = Vec::with_capacity(r);
        for _ in 0..r {
            let t = rng.random_range(0.0..period);
            if out.iter().any(|&s| c.circular_distance(s, t) < sep * period) {
                continue 'outer;
            }
            out.push(t);
        }
        return out;
    }
}

/// Dimension of `⋂ L^{n-k_j}_{t_j}`, required to agree at `tol` and `10·tol`.
pub fn intersection_dim(c: &ParamCurve, moments: &[f64], composition: &[usize], tol: &Tolerances) -> Result<isize> {
    let items: Vec<(f64, usize)> = moments.iter().copied().zip(composition.iter().copied()).collect();
    let d = intersect_osculating(c, &items, tol)?.dim();
    let loose = tol.with_rank(tol.rank * 10.0);
    let d10 = intersect_osculating(c, &items, &loose)?.dim();
    if d != d10 {
        return Err(Error::Precision(format!(
            "intersection dimension {d} at rank tolerance {:e} but {d10} at {:e}",
            tol.rank, loose.rank
        )));
    }
    Ok(d)
}

/// Confirms a positive intersection dimension by root counting. Every point
/// of a genuine positive-dimensional intersection has tangency of total
/// order `n` at the given moments, so the point where it meets one more
/// osculating hyperplane has more than `n` roots. Near-coincident moments
/// can make the stacked constraints numerically singular without such a
/// point existing; those tuples are reported as precision failures.
fn certify(
    counter: &RootCounter,
    moments: &[f64],
    composition: &[usize],
    dim: isize,
    rng: &mut impl Rng,
    tol: &Tolerances,
) -> Result<isize> {
    if dim <= 0 {
        return Ok(dim);
    }
    let c = counter.curve();
    let n = c.dim();
    let items: Vec<(f64, usize)> = moments.iter().copied().zip(composition.iter().copied()).collect();
    let sub = intersect_osculating(c, &items, tol)?;
    let basis = sub.basis();
    let u = basis.row(0).transpose();
    let v = basis.row(1).transpose();
    for _ in 0..3 {
        let s = rng.random_range(0.0..c.period());
        let h = counter.dual().eval(s);
        let (hu, hv) = (h.dot(&u), h.dot(&v));
        let w = if hu.abs().max(hv.abs()) < tol.zero { u.clone() } else { &u * hv - &v * hu };
        let Ok(p) = ProjPoint::from_vector(&w) else { continue };
        if let Ok(rc) = counter.count(&p) {
            if rc.total > n {
                return Ok(dim);
            }
        }
    }
    Err(Error::Precision(format!("intersection dimension {dim} at {moments:?} is not confirmed by root counting")))
}

/// Checks that osculating subspaces with complementary codimensions meet in
/// a point: `samples` random compositions and moment tuples, followed by a
/// local search for rank drops over every partition of `n`. Tuples whose
/// dimension changes between `tol` and `10·tol`, or whose positive dimension
/// is not confirmed by root counting, are re-drawn.
pub fn check_convex_criterion(c: &ParamCurve, samples: usize, seed: u64, tol: &Tolerances) -> Result<ConvexityReport> {
    let n = c.dim();
    crate::curve::check_jet_rank(c, n, 64, tol)?;
    let counter = RootCounter::new(c, tol)?;
    let results: Vec<Result<(Option<Witness>, usize)>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i as u64);
            let mut last = None;
            for attempt in 0..=RETRIES {
                let composition = random_composition(&mut rng, n);
                let moments = random_moments(&mut rng, c, composition.len(), MOMENT_SEPARATION);
                match intersection_dim(c, &moments, &composition, tol)
                    .and_then(|dim| certify(&counter, &moments, &composition, dim, &mut rng, tol))
                {
                    Ok(dim) => {
                        let w = (dim != 0).then_some(Witness::Moments {
                            composition,
                            moments,
                            dim,
                        });
                        return Ok((w, attempt));
                    }
                    Err(e) if e.is_precision() => last = Some(e),
                    Err(e) => return Err(e),
                }
            }
            Err(last.unwrap_or_else(|| Error::Precision("retry limit reached".into())))
        })
        .collect();
    let mut witness = None;
    let mut retries = 0;
    for r in results {
        let (w, tries) = r?;
        retries += tries;
        if let Some(w) = w {
            witness.get_or_insert(w);
        }
    }
    if witness.is_none() {
        witness = rank_drop_scan(&counter, seed, tol)?;
    }
    Ok(ConvexityReport {
        method: "criterion",
        verdict: if witness.is_some() { Verdict::Fail } else { Verdict::Pass },
        trials: samples,
        max_roots_seen: None,
        retries,
        witness,
    })
}

/// All partitions of `n` into at least two parts, parts non-increasing.
fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            if cur.len() >= 2 {
                out.push(cur.clone());
            }
            return;
        }
        for k in (1..=rest.min(max)).rev() {
            cur.push(k);
            rec(rest - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Smallest singular value of the stacked annihilators of the
/// `L^{n-k_j}_{t_j}`; it vanishes exactly when they do not meet in a point.
fn constraint_sigma(c: &ParamCurve, moments: &[f64], composition: &[usize], tol: &Tolerances) -> Result<f64> {
    let n = c.dim();
    let mut m = DMatrix::zeros(n, n + 1);
    let mut row = 0;
    for (&t, &k) in moments.iter().zip(composition) {
        let ann = osculating_subspace(c, t, n - k, tol)?.annihilator(tol);
        if ann.nrows() != k {
            return Ok(0.0);
        }
        m.rows_mut(row, k).copy_from(&ann);
        row += k;
    }
    Ok(m.singular_values().min())
}

fn separated(c: &ParamCurve, moments: &[f64], sep: f64) -> bool {
    let min = sep * c.period();
    moments
        .iter()
        .enumerate()
        .all(|(i, &a)| moments[i + 1..].iter().all(|&b| c.circular_distance(a, b) >= min))
}

/// Multi-start local search for moment tuples whose osculating subspaces
/// fail to meet in a point. Returns a verified witness if one is found.
fn rank_drop_scan(counter: &RootCounter, seed: u64, tol: &Tolerances) -> Result<Option<Witness>> {
    let c = counter.curve();
    let jobs: Vec<(Vec<usize>, u64)> = partitions(c.dim())
        .into_iter()
        .flat_map(|p| (0..SCAN_STARTS).map(move |s| (p.clone(), s)))
        .collect();
    let found: Vec<Result<Option<Witness>>> = jobs
        .par_iter()
        .enumerate()
        .map(|(idx, (composition, _))| {
            let mut rng = trial_rng(seed ^ 0x5ca1_ab1e, idx as u64);
            let start = random_moments(&mut rng, c, composition.len(), SCAN_SEPARATION);
            let (moments, sigma) = descend(c, start, composition, tol)?;
            if sigma > SCAN_ACCEPT {
                return Ok(None);
            }
            let dim = intersection_dim(c, &moments, composition, tol)
                .and_then(|dim| certify(counter, &moments, composition, dim, &mut rng, tol));
            match dim {
                Ok(0) | Err(Error::Precision(_)) => Ok(None),
                Ok(dim) => Ok(Some(Witness::Moments {
                    composition: composition.clone(),
                    moments: moments.iter().map(|&t| c.wrap(t)).collect(),
                    dim,
                })),
                Err(e) => Err(e),
            }
        })
        .collect();
    for r in found {
        if let Some(w) = r? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Pattern search on the moments, keeping them separated; gives up early
/// when the singular value is clearly bounded away from zero.
fn descend(c: &ParamCurve, mut moments: Vec<f64>, composition: &[usize], tol: &Tolerances) -> Result<(Vec<f64>, f64)> {
    let period = c.period();
    let mut best = constraint_sigma(c, &moments, composition, tol)?;
    let mut step = period / 16.0;
    while step > 1e-13 * period && best > 0.0 {
        // near a genuine zero the singular value shrinks linearly with the step
        if step < 1e-4 * period && best > 100.0 * step / period {
            break;
        }
        let mut improved = false;
        for i in 0..moments.len() {
            for dir in [1.0, -1.0] {
                let mut trial = moments.clone();
                trial[i] += dir * step;
                if !separated(c, &trial, SCAN_SEPARATION) {
                    continue;
                }
                let v = constraint_sigma(c, &trial, composition, tol)?;
                if v < best {
                    best = v;
                    moments = trial;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    Ok((moments, best))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{build_model, fourier_curve, ModelKind};

    #[test]
    fn compositions_sum_to_n() {
        let mut rng = trial_rng(3, 0);
        for _ in 0..100 {
            let c = random_composition(&mut rng, 5);
            assert_eq!(c.iter().sum::<usize>(), 5);
            assert!(c.iter().all(|&k| k >= 1));
        }
    }

    #[test]
    fn circle_sampling_passes() {
        let c = build_model(ModelKind::TrigConvex, 2).unwrap();
        let report = check_convex_sampling(&c, 100, 1, &Tolerances::default()).unwrap();
        assert!(report.passed());
        assert_eq!(report.max_roots_seen, Some(2));
    }

    #[test]
    fn twisted_cubic_criterion_passes() {
        let c = build_model(ModelKind::RationalNormal, 3).unwrap();
        let report = check_convex_criterion(&c, 200, 5, &Tolerances::default()).unwrap();
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn doubly_wound_plane_curve_fails_both() {
        // e^{it} + e^{-2it}: locally convex, tangent turns twice
        let c = fourier_curve(&[
            vec![1.0, 0.0, 0.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0, 0.0, -1.0],
        ])
        .unwrap();
        let tol = Tolerances::default();
        let s = check_convex_sampling(&c, 2000, 2, &tol).unwrap();
        assert_eq!(s.verdict, Verdict::Fail);
        assert!(s.max_roots_seen.unwrap() > 2);
        let k = check_convex_criterion(&c, 50, 2, &tol).unwrap();
        assert_eq!(k.verdict, Verdict::Fail, "{k:?}");
    }
}
