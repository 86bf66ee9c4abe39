//! Small dense linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};

/// Singular values of `a` (padded so that the SVD exposes the full right
/// factor) together with `V^T`.
fn full_svd(a: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let cols = a.ncols();
    let padded = if a.nrows() < cols {
        let mut m = DMatrix::zeros(cols, cols);
        m.rows_mut(0, a.nrows()).copy_from(a);
        m
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    (svd.singular_values, svd.v_t.expect("v_t requested"))
}

/// Numerical rank with singular values below `tol * σ_max` treated as zero.
pub(crate) fn rank(a: &DMatrix<f64>, tol: f64) -> usize {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0;
    }
    let sv = a.singular_values();
    let smax = sv.max();
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * smax).count()
}

/// Orthonormal basis of the right null space of `a`, one vector per row.
pub(crate) fn null_space(a: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let cols = a.ncols();
    if a.nrows() == 0 {
        return DMatrix::identity(cols, cols);
    }
    let (sv, vt) = full_svd(a);
    let smax = sv.max();
    let keep: Vec<usize> = (0..sv.len())
        .filter(|&i| smax == 0.0 || sv[i] <= tol * smax)
        .collect();
    let mut out = DMatrix::zeros(keep.len(), cols);
    for (r, &i) in keep.iter().enumerate() {
        out.set_row(r, &vt.row(i));
    }
    out
}

/// Orthonormal basis (rows) of the row space of `a`.
pub(crate) fn row_space(a: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let cols = a.ncols();
    if a.nrows() == 0 {
        return DMatrix::zeros(0, cols);
    }
    let (sv, vt) = full_svd(a);
    let smax = sv.max();
    let keep: Vec<usize> = (0..sv.len())
        .filter(|&i| smax > 0.0 && sv[i] > tol * smax)
        .collect();
    let mut out = DMatrix::zeros(keep.len(), cols);
    for (r, &i) in keep.iter().enumerate() {
        out.set_row(r, &vt.row(i));
    }
    out
}

/// Gram-Schmidt on the rows of `a`, in order. Returns `None` if a row is
/// dependent on its predecessors (relative residual below `tol`).
pub(crate) fn gram_schmidt_rows(a: &DMatrix<f64>, tol: f64) -> Option<DMatrix<f64>> {
    let mut out = DMatrix::zeros(a.nrows(), a.ncols());
    for i in 0..a.nrows() {
        let mut v: DVector<f64> = a.row(i).transpose();
        let norm0 = v.norm();
        if norm0 == 0.0 {
            return None;
        }
        // two passes keep the basis orthogonal to working precision
        for _ in 0..2 {
            for r in 0..i {
                let q = out.row(r).transpose();
                let d = q.dot(&v);
                v -= q * d;
            }
        }
        let norm = v.norm();
        if norm <= tol * norm0 {
            return None;
        }
        out.set_row(i, &(v / norm).transpose());
    }
    Some(out)
}

/// Generalized cross product of `n` rows in `R^{n+1}`: the vector `c` with
/// `⟨c, v⟩ = det[rows; v]` for every `v`.
pub(crate) fn cross_rows(rows: &DMatrix<f64>) -> DVector<f64> {
    let n1 = rows.ncols();
    assert_eq!(rows.nrows() + 1, n1, "cross product needs n rows in R^(n+1)");
    let mut out = DVector::zeros(n1);
    let mut m = DMatrix::zeros(n1, n1);
    m.rows_mut(0, n1 - 1).copy_from(rows);
    for i in 0..n1 {
        for j in 0..n1 {
            m[(n1 - 1, j)] = if i == j { 1.0 } else { 0.0 };
        }
        out[i] = m.determinant();
    }
    out
}

/// Columns `1..` of the Householder reflector sending `v` to a multiple of
/// `e_0`: an orthonormal basis (as columns) of `v^⊥`.
pub(crate) fn complement_basis(v: &DVector<f64>) -> DMatrix<f64> {
    let n1 = v.len();
    let norm = v.norm();
    let mut u = v / norm;
    let sign = if u[0] >= 0.0 { 1.0 } else { -1.0 };
    u[0] += sign;
    let unorm2 = u.norm_squared();
    let mut h = DMatrix::identity(n1, n1);
    if unorm2 > 0.0 {
        h -= (&u * u.transpose()) * (2.0 / unorm2);
    }
    h.columns(1, n1 - 1).into_owned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn cross_rows_is_orthogonal_and_matches_det() {
        let rows = DMatrix::from_row_slice(2, 3, &[1.0, 2.0, 0.5, -1.0, 0.0, 3.0]);
        let c = cross_rows(&rows);
        assert_relative_eq!(c.dot(&rows.row(0).transpose()), 0.0, epsilon = 1e-12);
        assert_relative_eq!(c.dot(&rows.row(1).transpose()), 0.0, epsilon = 1e-12);
        let v = DVector::from_vec(vec![0.3, -0.7, 1.1]);
        let mut m = DMatrix::zeros(3, 3);
        m.rows_mut(0, 2).copy_from(&rows);
        m.set_row(2, &v.transpose());
        assert_relative_eq!(c.dot(&v), m.determinant(), epsilon = 1e-12);
    }

    #[test]
    fn null_space_of_wide_matrix() {
        let a = DMatrix::from_row_slice(1, 3, &[1.0, 1.0, 0.0]);
        let ns = null_space(&a, 1e-9);
        assert_eq!(ns.nrows(), 2);
        for r in 0..2 {
            assert_relative_eq!((&a * ns.row(r).transpose())[0], 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn complement_is_orthonormal() {
        let v = DVector::from_vec(vec![-0.2, 0.5, 1.0, 0.1]);
        let b = complement_basis(&v);
        let g = b.transpose() * &b;
        assert_relative_eq!(g, DMatrix::identity(3, 3), epsilon = 1e-12);
        assert_relative_eq!((b.transpose() * v).norm(), 0.0, epsilon = 1e-12);
    }
}
