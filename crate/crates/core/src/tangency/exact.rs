//! Exact binary forms and Sturm-sequence root counting over `Q`.
//!
//! A point `p ∈ Pⁿ` is read as the binary form `Σ C(n,j) p_j x₁^{n-j} x₂^j`,
//! which puts `(cos θ x₁ + sin θ x₂)ⁿ` exactly on the rational normal curve.

use crate::error::{Error, Result};
use crate::projective::{normalize, ProjPoint};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::f64::consts::PI;
use std::fmt;

/// Univariate polynomial over `Q`, ascending coefficients, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        RatPoly::new(c.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    pub fn one() -> Self {
        RatPoly::new(vec![BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn lead(&self) -> &BigRational {
        self.coeffs.last().expect("nonzero polynomial")
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(k.into()))
                .collect(),
        )
    }

    pub fn monic(&self) -> RatPoly {
        if self.is_zero() {
            return self.clone();
        }
        let lead = self.lead().clone();
        RatPoly::new(self.coeffs.iter().map(|c| c / &lead).collect())
    }

    pub fn scale(&self, s: &BigRational) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        if self.is_zero() || other.is_zero() {
            return RatPoly::new(Vec::new());
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }

    pub fn pow(&self, e: usize) -> RatPoly {
        (0..e).fold(RatPoly::one(), |acc, _| acc.mul(self))
    }

    /// Euclidean division `self = q·d + r`.
    pub fn div_rem(&self, d: &RatPoly) -> (RatPoly, RatPoly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (RatPoly::new(Vec::new()), self.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        let lead = d.lead();
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / lead;
            if !c.is_zero() {
                for (i, dc) in d.coeffs.iter().enumerate() {
                    r[k + i] -= &c * dc;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (RatPoly::new(q), RatPoly::new(r))
    }

    /// Exact quotient, or `None` if the division leaves a remainder.
    pub fn div_exact(&self, d: &RatPoly) -> Option<RatPoly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Yun's square-free decomposition: `self = lead · Π a_i^i` with each
    /// `a_i` monic and square-free. Entry `i-1` holds `a_i`.
    pub fn square_free(&self) -> Vec<RatPoly> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_exact(&a0).expect("gcd divides");
        let mut c = df.div_exact(&a0).expect("gcd divides the derivative");
        loop {
            let d = c.sub(&b.derivative());
            let a = b.gcd(&d);
            b = b.div_exact(&a).expect("gcd divides");
            out.push(a.clone());
            if b.degree() == Some(0) {
                break;
            }
            c = d.div_exact(&a).expect("gcd divides");
        }
        while out.last().is_some_and(|p| p.degree() == Some(0)) {
            out.pop();
        }
        out
    }

    pub fn sub(&self, other: &RatPoly) -> RatPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![BigRational::zero(); len];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] -= c;
        }
        RatPoly::new(out)
    }

    /// Sturm chain `p, p', -rem(p, p'), ...`.
    fn sturm_chain(&self) -> Vec<RatPoly> {
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(r.scale(&-BigRational::one()));
        }
        chain
    }

    /// Number of distinct real roots in `(lo, hi]`; `None` bounds are `∓∞`.
    pub fn count_real_roots_in(&self, lo: Option<&BigRational>, hi: Option<&BigRational>) -> usize {
        if self.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let chain = self.sturm_chain();
        let at = |x: Option<&BigRational>, neg_inf: bool| -> usize {
            let signs: Vec<i8> = chain
                .iter()
                .map(|p| match x {
                    Some(x) => sign(&p.eval(x)),
                    None => {
                        let s = sign(p.lead());
                        if neg_inf && p.coeffs.len() % 2 == 0 {
                            -s
                        } else {
                            s
                        }
                    }
                })
                .filter(|&s| s != 0)
                .collect();
            signs.windows(2).filter(|w| w[0] != w[1]).count()
        };
        at(lo, true).saturating_sub(at(hi, false))
    }

    /// Number of distinct real roots.
    pub fn count_real_roots(&self) -> usize {
        self.count_real_roots_in(None, None)
    }

    /// Cauchy bound: every root has `|x| < 1 + max |c_i / c_lead|`.
    pub fn root_bound(&self) -> BigRational {
        let lead = self.lead().abs();
        let m = self
            .coeffs
            .iter()
            .take(self.coeffs.len() - 1)
            .map(|c| c.abs() / &lead)
            .fold(BigRational::zero(), |a, b| if b > a { b } else { a });
        m + BigRational::one()
    }

    /// Isolating intervals `(lo, hi]` of width at most `width` for the real
    /// roots of a square-free polynomial, in increasing order.
    pub fn isolate_real_roots(&self, width: &BigRational) -> Vec<(BigRational, BigRational)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let b = self.root_bound();
        let chain = self.sturm_chain();
        let var = |x: &BigRational| -> usize {
            let signs: Vec<i8> = chain.iter().map(|p| sign(&p.eval(x))).filter(|&s| s != 0).collect();
            signs.windows(2).filter(|w| w[0] != w[1]).count()
        };
        let two = BigRational::from_integer(2.into());
        let mut stack = vec![(-b.clone(), b.clone(), var(&-b.clone()), var(&b))];
        while let Some((lo, hi, vlo, vhi)) = stack.pop() {
            let count = vlo.saturating_sub(vhi);
            if count == 0 {
                continue;
            }
            if count == 1 && &hi - &lo <= *width {
                out.push((lo, hi));
                continue;
            }
            let mid = (&lo + &hi) / &two;
            let vmid = var(&mid);
            stack.push((mid.clone(), hi, vmid, vhi));
            stack.push((lo, mid, vlo, vmid));
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }
}

fn sign(x: &BigRational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

pub(crate) fn rational(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::Domain(format!("{x} is not a finite number")))
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// A real binary form `Σ c_j x₁^{n-j} x₂^j` with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryForm {
    coeffs: Vec<BigRational>,
}

impl BinaryForm {
    pub fn new(coeffs: Vec<BigRational>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.iter().all(Zero::is_zero) {
            return Err(Error::Domain("binary form is identically zero".into()));
        }
        Ok(BinaryForm { coeffs })
    }

    pub fn from_ints(c: &[i64]) -> Result<Self> {
        BinaryForm::new(c.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    /// Parses coefficients such as `"3"`, `"-1/2"`.
    pub fn from_strs<S: AsRef<str>>(c: &[S]) -> Result<Self> {
        let coeffs = c
            .iter()
            .map(|s| {
                s.as_ref()
                    .trim()
                    .parse::<BigRational>()
                    .map_err(|e| Error::Parse(format!("bad rational {:?}: {e}", s.as_ref())))
            })
            .collect::<Result<Vec<_>>>()?;
        BinaryForm::new(coeffs)
    }

    /// The form of degree `degree` whose dehomogenization `f(x, 1)` is `p`.
    pub fn from_affine(p: &RatPoly, degree: usize) -> Result<Self> {
        let d = p.degree().ok_or_else(|| Error::Domain("zero polynomial".into()))?;
        if d > degree {
            return Err(Error::Domain(format!("polynomial of degree {d} in a form of degree {degree}")));
        }
        let coeffs = (0..=degree)
            .map(|j| p.coeffs.get(degree - j).cloned().unwrap_or_else(BigRational::zero))
            .collect();
        BinaryForm::new(coeffs)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// `f(x, 1) = Σ c_j x^{n-j}` in ascending powers of `x = x₁/x₂`.
    pub fn dehomogenize(&self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().rev().cloned().collect())
    }

    /// Multiplicity of the root `(1 : 0)`, i.e. the degree drop of `f(x, 1)`.
    pub fn infinity_multiplicity(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    pub fn mul(&self, other: &BinaryForm) -> BinaryForm {
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        BinaryForm { coeffs: out }
    }

    /// True if `self = λ·other` for some nonzero rational `λ`.
    pub fn proportional(&self, other: &BinaryForm) -> bool {
        if self.coeffs.len() != other.coeffs.len() {
            return false;
        }
        let Some(k) = self.coeffs.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        if other.coeffs[k].is_zero() {
            return false;
        }
        let lambda = &self.coeffs[k] / &other.coeffs[k];
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .all(|(a, b)| *a == &lambda * b)
    }

    /// Real projective roots as moments `θ ∈ [0, π)` of the rational normal
    /// curve, with multiplicities. A root `x = x₁/x₂` maps to `θ = atan(-x)`
    /// (mod π), the root at infinity to `θ = π/2`.
    pub fn real_root_moments(&self) -> Vec<(f64, usize)> {
        let mut out = Vec::new();
        let inf = self.infinity_multiplicity();
        if inf > 0 {
            out.push((PI / 2.0, inf));
        }
        let width = BigRational::new(BigInt::one(), BigInt::from(2).pow(60));
        for (i, factor) in self.dehomogenize().square_free().iter().enumerate() {
            for (lo, hi) in factor.isolate_real_roots(&width) {
                let x = ((lo + hi) / BigRational::from_integer(2.into()))
                    .to_f64()
                    .unwrap_or(f64::NAN);
                out.push(((-x).atan().rem_euclid(PI), i + 1));
            }
        }
        out.sort_by(|a, b| a.0.total_cmp(&b.0));
        out
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

#[derive(Serialize, Deserialize)]
struct FormJson {
    n: usize,
    coeffs: Vec<String>,
}

impl Serialize for BinaryForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FormJson {
            n: self.degree(),
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BinaryForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = FormJson::deserialize(d)?;
        if raw.coeffs.len() != raw.n + 1 {
            return Err(serde::de::Error::custom(format!(
                "form of degree {} needs {} coefficients",
                raw.n,
                raw.n + 1
            )));
        }
        BinaryForm::from_strs(&raw.coeffs).map_err(serde::de::Error::custom)
    }
}

/// Number of real projective roots of `f`, with or without multiplicity.
pub fn sturm_count(f: &BinaryForm, with_multiplicity: bool) -> usize {
    let inf = f.infinity_multiplicity();
    let mut total = match (inf, with_multiplicity) {
        (0, _) => 0,
        (k, true) => k,
        (_, false) => 1,
    };
    let affine = f.dehomogenize();
    if with_multiplicity {
        for (i, a) in affine.square_free().iter().enumerate() {
            total += (i + 1) * a.count_real_roots();
        }
    } else {
        total += affine.count_real_roots();
    }
    total
}

/// The form of `p` in the rational-normal-curve convention, with every
/// coordinate converted to the exact rational value of its `f64`.
pub fn point_to_form(p: &ProjPoint) -> Result<BinaryForm> {
    let n = p.dim();
    let coeffs = p
        .coords()
        .iter()
        .enumerate()
        .map(|(j, &x)| Ok(rational(x)? * BigRational::from_integer(binomial(n, j))))
        .collect::<Result<Vec<_>>>()?;
    BinaryForm::new(coeffs)
}

/// Like [`point_to_form`] but for raw (not normalized) homogeneous vectors,
/// so that rational inputs stay exact.
pub fn vector_to_form(v: &[BigRational]) -> Result<BinaryForm> {
    let n = v.len().saturating_sub(1);
    BinaryForm::new(
        v.iter()
            .enumerate()
            .map(|(j, x)| x * BigRational::from_integer(binomial(n, j)))
            .collect(),
    )
}

/// Inverse of [`point_to_form`], up to scale.
pub fn form_to_point(f: &BinaryForm) -> Result<ProjPoint> {
    let n = f.degree();
    let v: Vec<f64> = f
        .coeffs
        .iter()
        .enumerate()
        .map(|(j, c)| (c / BigRational::from_integer(binomial(n, j))).to_f64().unwrap_or(f64::NAN))
        .collect();
    normalize(&v)
}
