//! Real trigonometric polynomials `f(t) = Σ a_k cos(kωt) + b_k sin(kωt)`.
//!
//! Every curve, dual curve, projected curve and tangency function in this
//! crate is a vector of these, which keeps derivatives exact to any order.
//! The base frequency `ω` is fixed per curve so that the projective period
//! of the curve is `π/ω`.

use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Clone, Debug, PartialEq)]
pub struct TrigPoly {
    omega: f64,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl TrigPoly {
    /// Builds a polynomial from cosine and sine coefficients; `sin[0]` is ignored.
    pub fn new(omega: f64, mut cos: Vec<f64>, mut sin: Vec<f64>) -> Self {
        let len = cos.len().max(sin.len()).max(1);
        cos.resize(len, 0.0);
        sin.resize(len, 0.0);
        sin[0] = 0.0;
        TrigPoly { omega, cos, sin }
    }

    pub fn zero(omega: f64) -> Self {
        TrigPoly::new(omega, vec![0.0], vec![0.0])
    }

    pub fn constant(omega: f64, c: f64) -> Self {
        TrigPoly::new(omega, vec![c], vec![0.0])
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Highest harmonic index stored (in units of `ω`).
    pub fn degree(&self) -> usize {
        self.cos.len() - 1
    }

    pub fn cos_coeffs(&self) -> &[f64] {
        &self.cos
    }

    pub fn sin_coeffs(&self) -> &[f64] {
        &self.sin
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.eval_deriv(t, 0)
    }

    /// The `j`-th derivative at `t`.
    pub fn eval_deriv(&self, t: f64, j: usize) -> f64 {
        let mut acc = self.cos[0] * if j == 0 { 1.0 } else { 0.0 };
        for k in 1..self.cos.len() {
            let (a, b) = (self.cos[k], self.sin[k]);
            if a == 0.0 && b == 0.0 {
                continue;
            }
            let freq = k as f64 * self.omega;
            let (s, c) = (freq * t).sin_cos();
            let (dc, ds) = rotate(c, s, j);
            acc += freq.powi(j as i32) * (a * dc + b * ds);
        }
        acc
    }

    /// Values of derivatives `0..=d` at `t`, written into `out[0..=d]`.
    pub fn eval_derivs(&self, t: f64, out: &mut [f64]) {
        out.iter_mut().for_each(|x| *x = 0.0);
        out[0] = self.cos[0];
        for k in 1..self.cos.len() {
            let (a, b) = (self.cos[k], self.sin[k]);
            if a == 0.0 && b == 0.0 {
                continue;
            }
            let freq = k as f64 * self.omega;
            let (s, c) = (freq * t).sin_cos();
            let mut scale = 1.0;
            for (j, slot) in out.iter_mut().enumerate() {
                let (dc, ds) = rotate(c, s, j);
                *slot += scale * (a * dc + b * ds);
                scale *= freq;
            }
        }
    }

    pub fn derivative(&self) -> TrigPoly {
        let mut cos = vec![0.0; self.cos.len()];
        let mut sin = vec![0.0; self.cos.len()];
        for k in 1..self.cos.len() {
            let freq = k as f64 * self.omega;
            cos[k] = freq * self.sin[k];
            sin[k] = -freq * self.cos[k];
        }
        TrigPoly::new(self.omega, cos, sin)
    }

    pub fn scaled(&self, s: f64) -> TrigPoly {
        TrigPoly::new(
            self.omega,
            self.cos.iter().map(|x| x * s).collect(),
            self.sin.iter().map(|x| x * s).collect(),
        )
    }

    /// `self += s * other`.
    pub fn add_scaled(&mut self, other: &TrigPoly, s: f64) {
        if other.cos.len() > self.cos.len() {
            self.cos.resize(other.cos.len(), 0.0);
            self.sin.resize(other.cos.len(), 0.0);
        }
        for k in 0..other.cos.len() {
            self.cos[k] += s * other.cos[k];
            self.sin[k] += s * other.sin[k];
        }
    }

    pub fn mul(&self, other: &TrigPoly) -> TrigPoly {
        let a = self.to_laurent();
        let b = other.to_laurent();
        let mut c = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.norm_sqr() == 0.0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                c[i + j] += x * y;
            }
        }
        TrigPoly::from_laurent(self.omega, &c)
    }

    /// Coefficients `c_k` of `Σ c_k w^k`, `w = e^{iωt}`, for `k = -K..=K`
    /// stored at index `k + K`.
    pub fn to_laurent(&self) -> Vec<Complex64> {
        let deg = self.degree();
        let mut out = vec![Complex64::new(0.0, 0.0); 2 * deg + 1];
        out[deg] = Complex64::new(self.cos[0], 0.0);
        for k in 1..=deg {
            let (a, b) = (self.cos[k], self.sin[k]);
            out[deg + k] = Complex64::new(a / 2.0, -b / 2.0);
            out[deg - k] = Complex64::new(a / 2.0, b / 2.0);
        }
        out
    }

    /// Inverse of [`to_laurent`](Self::to_laurent); the input must have odd
    /// length and is symmetrized onto the nearest real polynomial.
    pub fn from_laurent(omega: f64, c: &[Complex64]) -> TrigPoly {
        assert!(c.len() % 2 == 1, "Laurent coefficient vector must have odd length");
        let deg = (c.len() - 1) / 2;
        let mut cos = vec![0.0; deg + 1];
        let mut sin = vec![0.0; deg + 1];
        cos[0] = c[deg].re;
        for k in 1..=deg {
            let (pos, neg) = (c[deg + k], c[deg - k]);
            cos[k] = pos.re + neg.re;
            sin[k] = neg.im - pos.im;
        }
        TrigPoly::new(omega, cos, sin)
    }

    /// Interpolates a function known to be a trigonometric polynomial of
    /// degree at most `degree` from equispaced samples over `[0, 2π/ω)`.
    pub fn fit(omega: f64, degree: usize, f: impl Fn(f64) -> f64) -> TrigPoly {
        let mut polys = TrigPoly::fit_many(omega, degree, 1, |t, out| out[0] = f(t));
        polys.pop().unwrap()
    }

    /// Vector-valued version of [`fit`](Self::fit).
    pub fn fit_many(
        omega: f64,
        degree: usize,
        dim: usize,
        f: impl Fn(f64, &mut [f64]),
    ) -> Vec<TrigPoly> {
        let m = 2 * degree + 1;
        let span = 2.0 * PI / omega;
        let mut cos = vec![vec![0.0; degree + 1]; dim];
        let mut sin = vec![vec![0.0; degree + 1]; dim];
        let mut buf = vec![0.0; dim];
        for j in 0..m {
            let t = span * j as f64 / m as f64;
            f(t, &mut buf);
            for k in 0..=degree {
                let phase = 2.0 * PI * ((k * j) % m) as f64 / m as f64;
                let (s, c) = phase.sin_cos();
                for (i, v) in buf.iter().enumerate() {
                    cos[i][k] += v * c;
                    sin[i][k] += v * s;
                }
            }
        }
        (0..dim)
            .map(|i| {
                let a: Vec<f64> = cos[i]
                    .iter()
                    .enumerate()
                    .map(|(k, x)| if k == 0 { x / m as f64 } else { 2.0 * x / m as f64 })
                    .collect();
                let b: Vec<f64> = sin[i].iter().map(|x| 2.0 * x / m as f64).collect();
                TrigPoly::new(omega, a, b)
            })
            .collect()
    }

    /// Largest coefficient magnitude.
    pub fn max_coeff(&self) -> f64 {
        self.cos
            .iter()
            .chain(self.sin.iter())
            .fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Upper bound for `max_t |f^(j)(t)|`.
    pub fn deriv_bound(&self, j: usize) -> f64 {
        let mut acc = if j == 0 { self.cos[0].abs() } else { 0.0 };
        for k in 1..self.cos.len() {
            let amp = self.cos[k].hypot(self.sin[k]);
            acc += amp * (k as f64 * self.omega).powi(j as i32);
        }
        acc
    }

    /// Drops trailing harmonics whose amplitude is below `rel * reference`.
    pub fn trim(&mut self, rel: f64, reference: f64) {
        let cut = rel * reference;
        while self.cos.len() > 1 {
            let k = self.cos.len() - 1;
            if self.cos[k].hypot(self.sin[k]) > cut {
                break;
            }
            self.cos.pop();
            self.sin.pop();
        }
    }

    /// `+1` when `f(t + π/ω) = f(t)`, `-1` when `f(t + π/ω) = -f(t)`,
    /// decided by the parity of the dominant harmonics.
    pub fn half_period_sign(&self) -> f64 {
        let (mut even, mut odd) = (0.0f64, 0.0f64);
        for k in 0..self.cos.len() {
            let amp = self.cos[k].hypot(self.sin[k]);
            if k % 2 == 0 {
                even = even.max(amp);
            } else {
                odd = odd.max(amp);
            }
        }
        if odd > even {
            -1.0
        } else {
            1.0
        }
    }
}

/// `(cos(θ + jπ/2), sin(θ + jπ/2))` from `(cos θ, sin θ)`.
#[inline]
fn rotate(c: f64, s: f64, j: usize) -> (f64, f64) {
    match j % 4 {
        0 => (c, s),
        1 => (-s, c),
        2 => (-c, -s),
        _ => (s, -c),
    }
}

/// Samples `f` and `f'` on the grid `t_j = j·T/N`, `T = π/ω`, using a shared
/// cosine table (`kωt_j = kπj/N`).
pub(crate) fn sample_grid(f: &TrigPoly, n: usize) -> (Vec<f64>, Vec<f64>) {
    let table_len = 2 * n;
    let (cos_t, sin_t): (Vec<f64>, Vec<f64>) = (0..table_len)
        .map(|m| {
            let (s, c) = (PI * m as f64 / n as f64).sin_cos();
            (c, s)
        })
        .unzip();
    let mut vals = vec![f.cos[0]; n];
    let mut ders = vec![0.0; n];
    for k in 1..f.cos.len() {
        let (a, b) = (f.cos[k], f.sin[k]);
        if a == 0.0 && b == 0.0 {
            continue;
        }
        let freq = k as f64 * f.omega;
        let mut idx = 0usize;
        for j in 0..n {
            let (c, s) = (cos_t[idx], sin_t[idx]);
            vals[j] += a * c + b * s;
            ders[j] += freq * (b * c - a * s);
            idx += k;
            if idx >= table_len {
                idx %= table_len;
            }
        }
    }
    (vals, ders)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn derivatives_match_closed_form() {
        // f = 2 + cos(3t) - 0.5 sin(t)
        let f = TrigPoly::new(1.0, vec![2.0, 0.0, 0.0, 1.0], vec![0.0, -0.5, 0.0, 0.0]);
        let t = 0.37;
        assert_relative_eq!(f.eval(t), 2.0 + (3.0 * t).cos() - 0.5 * t.sin(), epsilon = 1e-14);
        assert_relative_eq!(
            f.eval_deriv(t, 1),
            -3.0 * (3.0 * t).sin() - 0.5 * t.cos(),
            epsilon = 1e-13
        );
        assert_relative_eq!(
            f.eval_deriv(t, 2),
            -9.0 * (3.0 * t).cos() + 0.5 * t.sin(),
            epsilon = 1e-13
        );
        let mut out = [0.0; 4];
        f.eval_derivs(t, &mut out);
        for (j, v) in out.iter().enumerate() {
            assert_relative_eq!(*v, f.eval_deriv(t, j), epsilon = 1e-12);
            assert_relative_eq!(f.derivative().eval_deriv(t, j), f.eval_deriv(t, j + 1), epsilon = 1e-12);
        }
    }

    #[test]
    fn fit_recovers_coefficients() {
        let f = TrigPoly::new(0.5, vec![0.3, 1.0, -2.0, 0.0, 0.25], vec![0.0, 0.5, 0.0, 3.0, -1.0]);
        let g = TrigPoly::fit(0.5, 6, |t| f.eval(t));
        for k in 0..=4 {
            assert_relative_eq!(g.cos_coeffs()[k], f.cos_coeffs()[k], epsilon = 1e-12);
            assert_relative_eq!(g.sin_coeffs()[k], f.sin_coeffs()[k], epsilon = 1e-12);
        }
        assert!(g.cos_coeffs()[5].abs() < 1e-12 && g.sin_coeffs()[6].abs() < 1e-12);
    }

    #[test]
    fn product_and_laurent_roundtrip() {
        let f = TrigPoly::new(1.0, vec![1.0, 0.5], vec![0.0, -0.25]);
        let g = TrigPoly::new(1.0, vec![0.0, 0.0, 2.0], vec![0.0, 1.0, 0.0]);
        let h = f.mul(&g);
        for &t in &[0.0, 0.4, 2.2, 5.9] {
            assert_relative_eq!(h.eval(t), f.eval(t) * g.eval(t), epsilon = 1e-12);
        }
        let back = TrigPoly::from_laurent(1.0, &h.to_laurent());
        assert_eq!(back, h);
    }

    #[test]
    fn grid_sampling_agrees_with_pointwise() {
        let f = TrigPoly::new(0.5, vec![0.1, 1.0, 0.0, 0.7], vec![0.0, 0.0, 2.0, -0.3]);
        let n = 64;
        let (v, d) = sample_grid(&f, n);
        for j in [0, 5, 33, 63] {
            let t = j as f64 * PI / 0.5 / n as f64;
            assert_relative_eq!(v[j], f.eval(t), epsilon = 1e-12);
            assert_relative_eq!(d[j], f.eval_deriv(t, 1), epsilon = 1e-12);
        }
    }
}
