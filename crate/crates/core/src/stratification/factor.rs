//! Splitting a binary form into its real-rooted and root-free parts.

use crate::error::{Error, Result};
use crate::tangency::{BinaryForm, RatPoly};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Isolating intervals are refined down to this many bits before giving up
/// on finding a rational root inside.
const MAX_BITS: u32 = 512;

/// `f = real_rooted × positive`, exactly, where `real_rooted` has only real
/// roots and `positive` has none. The real roots must be rational; an
/// irrational real root would need coefficients outside `ℚ` and is reported
/// as a precision error.
pub fn factor_binary_form(f: &BinaryForm) -> Result<(BinaryForm, BinaryForm)> {
    let inf = f.infinity_multiplicity();
    let g = f.dehomogenize();
    let mut real = RatPoly::one();
    for (i, part) in g.square_free().iter().enumerate() {
        let roots = rational_roots(part).ok_or_else(|| {
            Error::Precision(format!("form {f} has an irrational real root; no rational real-rooted factor"))
        })?;
        for r in roots {
            let lin = RatPoly::new(vec![-r, BigRational::one()]);
            real = real.mul(&lin.pow(i + 1));
        }
    }
    let positive = g
        .div_exact(&real)
        .ok_or_else(|| Error::Precision(format!("real-rooted part does not divide {f}")))?;
    let dr = real.degree().unwrap_or(0);
    let dp = positive.degree().unwrap_or(0);
    let real = BinaryForm::from_affine(&real, dr + inf)?;
    let positive = BinaryForm::from_affine(&positive, dp)?;
    debug_assert_eq!(real.degree() + positive.degree(), f.degree());
    Ok((real, positive))
}

/// All real roots of a square-free polynomial, if every one of them is
/// rational.
fn rational_roots(p: &RatPoly) -> Option<Vec<BigRational>> {
    let start = BigRational::new(BigInt::one(), BigInt::from(1u32 << 16));
    let mut out = Vec::new();
    for (lo, hi) in p.isolate_real_roots(&start) {
        out.push(root_in(p, lo, hi)?);
    }
    Some(out)
}

/// The rational root of `p` in `(lo, hi]`, found as the simplest rational of
/// ever smaller isolating intervals.
fn root_in(p: &RatPoly, mut lo: BigRational, mut hi: BigRational) -> Option<BigRational> {
    if p.eval(&hi).is_zero() {
        return Some(hi);
    }
    let two = BigRational::from_integer(2.into());
    let s_lo = p.eval(&lo).signum();
    let mut bits = 16;
    while bits <= MAX_BITS {
        let q = simplest_between(&lo, &hi);
        if p.eval(&q).is_zero() {
            return Some(q);
        }
        for _ in 0..8 {
            let mid = (&lo + &hi) / &two;
            let v = p.eval(&mid);
            if v.is_zero() {
                return Some(mid);
            }
            if v.signum() == s_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        bits += 8;
    }
    None
}

/// The rational with the smallest denominator in `[a, b]`.
fn simplest_between(a: &BigRational, b: &BigRational) -> BigRational {
    if a.is_negative() && b.is_positive() || a.is_zero() || b.is_zero() {
        return BigRational::zero();
    }
    if b.is_negative() {
        return -simplest_between(&-b, &-a);
    }
    let fl = a.floor();
    if &fl == a {
        return fl;
    }
    let next = &fl + BigRational::one();
    if &next <= b {
        return next;
    }
    let inner = simplest_between(&(b - &fl).recip(), &(a - &fl).recip());
    fl + inner.recip()
}
