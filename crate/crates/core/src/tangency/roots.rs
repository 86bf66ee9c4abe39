//! Zeros of a trigonometric polynomial on its projective period, with
//! multiplicities.
//!
//! The period is cut into `tol.grid` cells. A cell is discarded once a bound
//! on `f''` certifies that `f` has no zero in it, and solved directly once the
//! same bound certifies that `f` is monotone there; every other cell is
//! bisected, down to `tol.max_grid` cells per period. Zeros of `f` and of
//! `f'` with `|f|` below the zero threshold become candidates, nearby
//! candidates are clustered, and each cluster gets a multiplicity from the
//! first derivative that is clearly nonzero.

use crate::error::{Error, Result};
use crate::tol::Tolerances;
use crate::trig::{sample_grid, TrigPoly};
use std::f64::consts::PI;

/// A zero of the tangency function before the geometric cross-check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Zero {
    pub t: f64,
    pub m: usize,
    /// Number of raw candidates folded into this zero.
    pub merged: usize,
}

#[derive(Clone, Copy, Debug)]
struct Raw {
    t: f64,
    /// `|f(t)|`, used to pick a cluster representative.
    resid: f64,
    crit: bool,
}

/// Fraction of the period searched by the Newton refinement around a zero.
const NEWTON_WINDOW: f64 = 1e-3;
/// Candidates up to this fraction of the period apart are joined when `f`
/// stays below the zero threshold between them.
const CLUSTER_SPAN: f64 = 1e-3;

struct Scanner<'a> {
    f: &'a TrigPoly,
    df: TrigPoly,
    thr0: f64,
    m2: f64,
    max_depth: u32,
    raw: Vec<Raw>,
}

impl Scanner<'_> {
    #[allow(clippy::too_many_arguments)]
    fn scan(&mut self, a: f64, b: f64, fa: f64, fb: f64, da: f64, db: f64, depth: u32) {
        let h = b - a;
        let fmin = fa.abs().min(fb.abs());
        let same_f = fa * fb > 0.0;
        // |f'| <= max(|da|, |db|) + M2 h on the cell
        if same_f && fmin > h * (da.abs().max(db.abs()) + self.m2 * h) {
            return;
        }
        let same_d = da * db > 0.0;
        // f' >= (da + db)/2 - M2 h/2 in absolute value on the cell
        let monotone = same_d && 0.5 * (da.abs() + db.abs()) > 0.5 * self.m2 * h;
        if monotone {
            if !same_f {
                self.push_root(a, b, fa, fb);
            }
            return;
        }
        if depth >= self.max_depth {
            if !same_f {
                self.push_root(a, b, fa, fb);
            }
            if da * db <= 0.0 {
                let df = &self.df;
                let c = bracket(|x| df.eval(x), a, b, da, db);
                let resid = self.f.eval(c).abs();
                if resid <= self.thr0 {
                    self.raw.push(Raw { t: c, resid, crit: true });
                }
            } else if fmin <= self.thr0 {
                let (t, resid) = if fa.abs() <= fb.abs() { (a, fa.abs()) } else { (b, fb.abs()) };
                self.raw.push(Raw { t, resid, crit: true });
            }
            return;
        }
        let mid = 0.5 * (a + b);
        let mut buf = [0.0; 2];
        self.f.eval_derivs(mid, &mut buf);
        let (fm, dm) = (buf[0], buf[1]);
        self.scan(a, mid, fa, fm, da, dm, depth + 1);
        self.scan(mid, b, fm, fb, dm, db, depth + 1);
    }

    fn push_root(&mut self, a: f64, b: f64, fa: f64, fb: f64) {
        let f = self.f;
        let t = if fa == 0.0 {
            a
        } else if fb == 0.0 {
            b
        } else {
            bracket(|x| f.eval(x), a, b, fa, fb)
        };
        self.raw.push(Raw {
            t,
            resid: f.eval(t).abs(),
            crit: false,
        });
    }
}

/// Root of `g` in `[a, b]` given `g(a)·g(b) <= 0` (Illinois false position
/// with a bisection safeguard).
pub(crate) fn bracket(g: impl Fn(f64) -> f64, mut a: f64, mut b: f64, mut ga: f64, mut gb: f64) -> f64 {
    if ga == 0.0 {
        return a;
    }
    if gb == 0.0 {
        return b;
    }
    let mut side = 0i8;
    for iter in 0..200 {
        let x = if iter % 4 == 3 {
            0.5 * (a + b)
        } else {
            let x = (a * gb - b * ga) / (gb - ga);
            if x.is_finite() && x > a && x < b {
                x
            } else {
                0.5 * (a + b)
            }
        };
        let gx = g(x);
        if gx == 0.0 || (b - a) <= 4.0 * f64::EPSILON * a.abs().max(b.abs()).max(1.0) {
            return x;
        }
        if gx * ga < 0.0 {
            b = x;
            gb = gx;
            if side == -1 {
                ga *= 0.5;
            }
            side = -1;
        } else {
            a = x;
            ga = gx;
            if side == 1 {
                gb *= 0.5;
            }
            side = 1;
        }
    }
    0.5 * (a + b)
}

/// Multiplicity thresholds: `thr[j] = c_j · max_t |f^(j)(t)|`.
struct Thresholds<'a> {
    f: &'a TrigPoly,
    zero: f64,
    derivative: f64,
    scales: Vec<f64>,
    derivs: Vec<TrigPoly>,
}

impl<'a> Thresholds<'a> {
    fn new(f: &'a TrigPoly, scale0: f64, scale1: f64, tol: &Tolerances) -> Self {
        Thresholds {
            f,
            zero: tol.zero,
            derivative: tol.derivative,
            scales: vec![scale0, scale1],
            derivs: vec![f.clone(), f.derivative()],
        }
    }

    fn deriv(&mut self, j: usize) -> &TrigPoly {
        while self.derivs.len() <= j {
            let next = self.derivs.last().unwrap().derivative();
            self.derivs.push(next);
        }
        &self.derivs[j]
    }

    fn threshold(&mut self, j: usize) -> f64 {
        while self.scales.len() <= j {
            let k = self.scales.len();
            let g = self.deriv(k).clone();
            let samples = (8 * self.f.degree()).max(64);
            let (vals, _) = sample_grid(&g, samples);
            let max = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            self.scales.push(max.max(1e-300));
        }
        if j == 0 {
            self.zero * self.scales[0]
        } else {
            self.derivative * self.scales[j]
        }
    }

    fn value(&mut self, j: usize, t: f64) -> f64 {
        self.deriv(j).eval(t)
    }

    /// Multiplicity of the zero near `t` together with the refined position.
    fn multiplicity(&mut self, t: f64, period: f64, max_mult: usize) -> Result<(usize, f64)> {
        let mut tau = t;
        for j in 1..=max_mult {
            let Some(next) = self.newton(j, tau, period) else {
                return Ok((j, tau));
            };
            let vanishes = (0..=j).all(|i| {
                let thr = self.threshold(i);
                self.value(i, next).abs() <= thr
            });
            if !vanishes {
                return Ok((j, tau));
            }
            tau = next;
        }
        Err(Error::Precision(format!(
            "tangency function vanishes to order > {max_mult} at t = {tau}; perturb the point"
        )))
    }

    /// Newton iteration for a zero of `f^(j)` near `t`, kept inside the window.
    fn newton(&mut self, j: usize, t: f64, period: f64) -> Option<f64> {
        let window = NEWTON_WINDOW * period;
        let mut x = t;
        for _ in 0..40 {
            let g = self.value(j, x);
            let dg = self.value(j + 1, x);
            if g == 0.0 {
                return Some(x);
            }
            if dg == 0.0 || !dg.is_finite() {
                return None;
            }
            let step = g / dg;
            x -= step;
            if (x - t).abs() > window {
                return None;
            }
            if step.abs() <= 1e-15 * period {
                return Some(x);
            }
        }
        Some(x)
    }
}

/// Zeros of `f` on `[0, π/ω)` with multiplicities up to `max_mult`.
pub(crate) fn find_zeros(f: &TrigPoly, max_mult: usize, tol: &Tolerances) -> Result<Vec<Zero>> {
    let period = PI / f.omega();
    let n = tol.grid.max(16);
    let (vals, ders) = sample_grid(f, n);
    let scale0 = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let scale1 = ders.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale0 == 0.0 || !scale0.is_finite() {
        return Err(Error::Precision(
            "tangency function vanishes identically on the sampling grid".into(),
        ));
    }
    let sign = f.half_period_sign();
    let max_depth = (tol.max_grid.max(n) / n).max(1).ilog2();
    let mut scanner = Scanner {
        f,
        df: f.derivative(),
        thr0: tol.zero * scale0,
        m2: f.deriv_bound(2),
        max_depth,
        raw: Vec::new(),
    };
    let h = period / n as f64;
    for j in 0..n {
        let (fb, db) = if j + 1 < n {
            (vals[j + 1], ders[j + 1])
        } else {
            (sign * vals[0], sign * ders[0])
        };
        scanner.scan(j as f64 * h, (j + 1) as f64 * h, vals[j], fb, ders[j], db, 0);
    }
    let thr0 = scanner.thr0;
    let mut raw = scanner.raw;
    for r in raw.iter_mut() {
        r.t = r.t.rem_euclid(period);
    }
    raw.sort_by(|a, b| a.t.total_cmp(&b.t));

    let clusters = cluster(f, &raw, period, thr0, tol);
    let mut th = Thresholds::new(f, scale0, scale1.max(1e-300), tol);
    let mut zeros = Vec::with_capacity(clusters.len());
    for members in clusters {
        let rep = members
            .iter()
            .filter(|r| r.crit)
            .min_by(|a, b| a.resid.total_cmp(&b.resid))
            .or_else(|| members.iter().min_by(|a, b| a.resid.total_cmp(&b.resid)))
            .copied()
            .expect("clusters are nonempty");
        let (m, t) = th.multiplicity(rep.t, period, max_mult)?;
        zeros.push(Zero {
            t: t.rem_euclid(period),
            m,
            merged: members.len(),
        });
    }
    zeros.sort_by(|a, b| a.t.total_cmp(&b.t));
    Ok(zeros)
}

fn circular_gap(a: f64, b: f64, period: f64) -> f64 {
    (b - a).rem_euclid(period)
}

/// Groups candidates that are within the merge tolerance, or close and
/// joined by an arc on which `|f|` stays below the zero threshold.
fn cluster(f: &TrigPoly, raw: &[Raw], period: f64, thr0: f64, tol: &Tolerances) -> Vec<Vec<Raw>> {
    if raw.is_empty() {
        return Vec::new();
    }
    let joined = |a: &Raw, b: &Raw| {
        let gap = circular_gap(a.t, b.t, period);
        if gap <= tol.merge {
            return true;
        }
        if gap > CLUSTER_SPAN * period {
            return false;
        }
        (0..=8).all(|k| f.eval(a.t + gap * k as f64 / 8.0).abs() <= thr0)
    };
    let mut groups: Vec<Vec<Raw>> = vec![vec![raw[0]]];
    for r in &raw[1..] {
        let last = groups.last_mut().unwrap();
        if joined(last.last().unwrap(), r) {
            last.push(*r);
        } else {
            groups.push(vec![*r]);
        }
    }
    if groups.len() > 1 {
        let first = groups[0][0];
        let last = *groups.last().unwrap().last().unwrap();
        if joined(&last, &first) {
            let tail = groups.pop().unwrap();
            groups[0].splice(0..0, tail);
        }
    }
    groups
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(omega: f64, cos: &[f64], sin: &[f64]) -> TrigPoly {
        TrigPoly::new(omega, cos.to_vec(), sin.to_vec())
    }

    #[test]
    fn simple_zeros_of_cosine() {
        // cos t on [0, 2π): zeros at π/2 and 3π/2
        let f = poly(0.5, &[0.0, 0.0, 1.0], &[0.0, 0.0, 0.0]);
        let z = find_zeros(&f, 4, &Tolerances::default()).unwrap();
        assert_eq!(z.len(), 2);
        assert!((z[0].t - PI / 2.0).abs() < 1e-12 && z[0].m == 1);
        assert!((z[1].t - 3.0 * PI / 2.0).abs() < 1e-12 && z[1].m == 1);
    }

    #[test]
    fn double_and_triple_zeros() {
        // 1 - cos t has a double zero at 0
        let f = poly(0.5, &[1.0, 0.0, -1.0], &[0.0, 0.0, 0.0]);
        let z = find_zeros(&f, 4, &Tolerances::default()).unwrap();
        assert_eq!(z.len(), 1);
        assert_eq!(z[0].m, 2);
        // sin³ t has a triple zero at 0 and π (ω = 1, antiperiodic, one zero per period)
        let s = poly(1.0, &[0.0, 0.0], &[0.0, 1.0]);
        let cube = s.mul(&s).mul(&s);
        let z = find_zeros(&cube, 4, &Tolerances::default()).unwrap();
        assert_eq!(z.len(), 1);
        assert_eq!(z[0].m, 3);
        assert!(z[0].t.min(PI - z[0].t) < 1e-5);
    }

    #[test]
    fn close_simple_zeros_are_resolved() {
        // cos t - cos(0.001) has zeros at ±0.001
        let f = poly(0.5, &[-(0.001f64.cos()), 0.0, 1.0], &[0.0, 0.0, 0.0]);
        let z = find_zeros(&f, 4, &Tolerances::default()).unwrap();
        assert_eq!(z.iter().map(|z| z.m).sum::<usize>(), 2);
        assert_eq!(z.len(), 2);
    }

    #[test]
    fn no_zeros() {
        let f = poly(0.5, &[2.0, 0.0, 1.0], &[0.0, 0.3, 0.0]);
        assert!(find_zeros(&f, 4, &Tolerances::default()).unwrap().is_empty());
    }
}
