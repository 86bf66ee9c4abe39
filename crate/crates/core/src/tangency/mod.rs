//! Tangency functions, root counts `♯_p(γ)` and orders of tangency.
//!
//! For a point `p`, `F_p(t) = det[γ(t); γ'(t); ...; γ^(n-1)(t); p]` vanishes
//! exactly when `p` lies on the osculating hyperplane `H_t`, and the order of
//! that zero is the order of tangency. `F_p` is a trigonometric polynomial,
//! so it is recovered exactly from samples and its zeros are found on the
//! projective period of the curve.

mod exact;
pub(crate) mod roots;

pub use exact::{form_to_point, point_to_form, sturm_count, vector_to_form, BinaryForm, RatPoly};

use crate::curve::{check_jet_rank, dual_curve, ParamCurve};
use crate::error::{Error, Result};
use crate::projective::{osculating_subspace, ProjPoint};
use crate::tol::Tolerances;
use crate::trig::TrigPoly;
use nalgebra::DMatrix;
use serde::Serialize;

/// One osculating hyperplane through `p`: its moment and order of tangency.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tangency {
    pub t: f64,
    pub m: usize,
}

/// The tangency moments of a point together with `♯_p(γ) = Σ m`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootCount {
    pub tangencies: Vec<Tangency>,
    pub total: usize,
}

impl RootCount {
    /// True when every tangency is simple.
    pub fn is_simple(&self) -> bool {
        self.tangencies.iter().all(|t| t.m == 1)
    }

    /// Moments repeated according to their orders, in increasing order.
    pub fn expanded_moments(&self) -> Vec<f64> {
        self.tangencies
            .iter()
            .flat_map(|t| std::iter::repeat_n(t.t, t.m))
            .collect()
    }
}

fn check_point(c: &ParamCurve, p: &ProjPoint) -> Result<()> {
    if p.dim() != c.dim() {
        return Err(Error::Domain(format!(
            "point in P^{} used with a curve in P^{}",
            p.dim(),
            c.dim()
        )));
    }
    Ok(())
}

/// `F_p` as a trigonometric polynomial, interpolated from the determinants.
pub fn tangency_function(c: &ParamCurve, p: &ProjPoint, tol: &Tolerances) -> Result<TrigPoly> {
    check_point(c, p)?;
    let n = c.dim();
    check_jet_rank(c, n - 1, 32, tol)?;
    let pv = p.to_vector();
    let mut f = TrigPoly::fit(c.omega(), n * c.degree(), |t| {
        let mut m = DMatrix::zeros(n + 1, n + 1);
        m.rows_mut(0, n).copy_from(&c.jet_rows(t, n - 1));
        m.set_row(n, &pv.transpose());
        m.determinant()
    });
    let reference = f.max_coeff();
    f.trim(1e-14, reference);
    Ok(f)
}

/// `♯_p(γ)` with the tangency moments, computed from [`tangency_function`].
pub fn count_roots(c: &ParamCurve, p: &ProjPoint, tol: &Tolerances) -> Result<RootCount> {
    let f = tangency_function(c, p, tol)?;
    resolve(c, p, &f, tol)
}

/// Order of tangency of the hyperplane `H_τ` with `γ` as seen from `p`: the
/// largest `i` with `p ∈ L^{n-i}_τ`.
pub fn order_of_tangency(c: &ParamCurve, p: &ProjPoint, tau: f64, tol: &Tolerances) -> Result<usize> {
    check_point(c, p)?;
    let n = c.dim();
    let flag = osculating_subspace(c, tau, n, tol)?;
    let pv = p.to_vector();
    let mut order = 0;
    for i in 1..=n {
        let rows = flag.basis().rows(0, n - i + 1).into_owned();
        let sub = crate::projective::Subspace::from_orthonormal(rows);
        if sub.residual(&pv) <= tol.rank {
            order = i;
        } else {
            break;
        }
    }
    if order == 0 {
        return Err(Error::Domain(format!(
            "point does not lie on the osculating hyperplane at t = {tau}"
        )));
    }
    Ok(order)
}

/// Turns the zeros of `F_p` into tangencies, checking every multiple zero
/// against the flag membership of `p`.
fn resolve(c: &ParamCurve, p: &ProjPoint, f: &TrigPoly, tol: &Tolerances) -> Result<RootCount> {
    let zeros = roots::find_zeros(f, c.dim() + 1, tol)?;
    let mut tangencies = Vec::with_capacity(zeros.len());
    for z in zeros {
        let mut m = z.m;
        if m >= 2 || z.merged > 1 {
            let by_rank = match order_of_tangency(c, p, z.t, tol) {
                Ok(k) => k,
                Err(Error::Domain(_)) => 1,
                Err(e) => return Err(e),
            };
            if by_rank != m {
                if z.merged > 1 {
                    m = by_rank.max(1);
                } else {
                    return Err(Error::Precision(format!(
                        "order of tangency at t = {} is {} by derivatives but {} by flag membership",
                        z.t, m, by_rank
                    )));
                }
            }
        }
        tangencies.push(Tangency { t: z.t, m });
    }
    let total = tangencies.iter().map(|t| t.m).sum();
    Ok(RootCount { tangencies, total })
}

/// Counts roots through the dual curve, `F_p(t) = ⟨γ*(t), p⟩`, which only
/// costs a linear combination per point. Use this for repeated counting on
/// one curve.
#[derive(Clone, Debug)]
pub struct RootCounter {
    curve: ParamCurve,
    dual: ParamCurve,
    tol: Tolerances,
}

impl RootCounter {
    pub fn new(c: &ParamCurve, tol: &Tolerances) -> Result<Self> {
        Ok(RootCounter {
            curve: c.clone(),
            dual: dual_curve(c, tol)?,
            tol: *tol,
        })
    }

    pub fn curve(&self) -> &ParamCurve {
        &self.curve
    }

    pub fn dual(&self) -> &ParamCurve {
        &self.dual
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    /// `t ↦ ⟨γ*(t), p⟩`.
    pub fn pairing(&self, p: &ProjPoint) -> Result<TrigPoly> {
        check_point(&self.curve, p)?;
        let mut f = TrigPoly::zero(self.dual.omega());
        for (coord, x) in self.dual.coords().iter().zip(p.coords()) {
            f.add_scaled(coord, *x);
        }
        Ok(f)
    }

    pub fn count(&self, p: &ProjPoint) -> Result<RootCount> {
        let f = self.pairing(p)?;
        resolve(&self.curve, p, &f, &self.tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{build_model, ModelKind};
    use crate::projective::normalize;

    fn circle() -> ParamCurve {
        build_model(ModelKind::TrigConvex, 2).unwrap()
    }

    #[test]
    fn circle_center_and_outside() {
        let tol = Tolerances::default();
        let c = circle();
        let center = normalize(&[1.0, 0.0, 0.0]).unwrap();
        let f = tangency_function(&c, &center, &tol).unwrap();
        assert_eq!(f.degree(), 0);
        assert_eq!(count_roots(&c, &center, &tol).unwrap().total, 0);
        let out = normalize(&[1.0, 2.0, 0.0]).unwrap();
        let rc = count_roots(&c, &out, &tol).unwrap();
        assert_eq!(rc.total, 2);
        assert!(rc.is_simple());
    }

    #[test]
    fn circle_point_on_curve_and_tangent_line() {
        let tol = Tolerances::default();
        let c = circle();
        let on = ProjPoint::from_vector(&c.eval(1.0)).unwrap();
        let rc = count_roots(&c, &on, &tol).unwrap();
        assert_eq!(rc.tangencies.len(), 1);
        assert_eq!(rc.tangencies[0].m, 2);
        assert!((rc.tangencies[0].t - 1.0).abs() < 1e-6);
        assert_eq!(order_of_tangency(&c, &on, 1.0, &tol).unwrap(), 2);

        let tangent = c.eval(1.0) + c.jet_rows(1.0, 1).row(1).transpose() * 0.7;
        let q = ProjPoint::from_vector(&tangent).unwrap();
        assert_eq!(order_of_tangency(&c, &q, 1.0, &tol).unwrap(), 1);
        let rc = count_roots(&c, &q, &tol).unwrap();
        assert_eq!(rc.total, 2);
        assert!(rc.tangencies.iter().any(|t| (t.t - 1.0).abs() < 1e-6 && t.m == 1));
    }

    #[test]
    fn order_off_hyperplane_is_domain_error() {
        let c = circle();
        let center = normalize(&[1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            order_of_tangency(&c, &center, 0.3, &Tolerances::default()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn own_hyperplane_contains_curve_point() {
        let tol = Tolerances::default();
        for kind in [ModelKind::TrigConvex, ModelKind::RationalNormal] {
            let c = build_model(kind, 4).unwrap();
            let p = ProjPoint::from_vector(&c.eval(0.7)).unwrap();
            let f = tangency_function(&c, &p, &tol).unwrap();
            assert!(f.eval(0.7).abs() <= 1e-10 * f.max_coeff());
        }
    }

    #[test]
    fn twisted_cubic_three_real_roots() {
        // x₁³ - x₁x₂² has coefficients (1, 0, -1, 0) = C(3,j) p_j
        let tol = Tolerances::default();
        let c = build_model(ModelKind::RationalNormal, 3).unwrap();
        let p = normalize(&[1.0, 0.0, -1.0 / 3.0, 0.0]).unwrap();
        let rc = count_roots(&c, &p, &tol).unwrap();
        assert_eq!(rc.total, 3);
        assert_eq!(sturm_count(&point_to_form(&p).unwrap(), true), 3);
    }

    #[test]
    fn rational_normal_quartic_osculating_plane() {
        // at θ = 0: L² = span(e0, e1, e2); p there but off the tangent line
        let tol = Tolerances::default();
        let c = build_model(ModelKind::RationalNormal, 4).unwrap();
        let p = normalize(&[0.3, -0.2, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(order_of_tangency(&c, &p, 0.0, &tol).unwrap(), 2);
    }

    #[test]
    fn counter_matches_determinant_path() {
        let tol = Tolerances::default();
        let c = build_model(ModelKind::TrigConvex, 3).unwrap();
        let counter = RootCounter::new(&c, &tol).unwrap();
        let p = normalize(&[0.2, -1.0, 0.4, 0.1]).unwrap();
        assert_eq!(counter.count(&p).unwrap().total, count_roots(&c, &p, &tol).unwrap().total);
    }
}
