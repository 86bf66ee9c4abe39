#![allow(dead_code)]

use osculant::curve::fourier_curve;
use osculant::ParamCurve;

/// `(cos t + 0.3 cos 5t, sin t + 0.3 sin 5t, cos 3t, sin 3t)`: nondegenerate,
/// but some hyperplanes meet it seven times.
pub fn non_convex_space_curve() -> ParamCurve {
    fourier_curve(&non_convex_space_rows()).unwrap()
}

pub fn non_convex_space_rows() -> Vec<Vec<f64>> {
    let mut rows = vec![vec![0.0; 11]; 4];
    rows[0][1] = 1.0;
    rows[0][9] = 0.3;
    rows[1][2] = 1.0;
    rows[1][10] = 0.3;
    rows[2][5] = 1.0;
    rows[3][6] = 1.0;
    rows
}

/// `e^{it} + e^{-2it}` in the chart `(1, Re, Im)`: a plane curve that turns
/// twice, so lines meet it four times.
pub fn non_convex_plane_curve() -> ParamCurve {
    fourier_curve(&[
        vec![1.0, 0.0, 0.0, 0.0, 0.0],
        vec![0.0, 1.0, 0.0, 1.0, 0.0],
        vec![0.0, 0.0, 1.0, 0.0, -1.0],
    ])
    .unwrap()
}

/// Spec JSON for [`non_convex_space_curve`].
pub fn non_convex_space_json() -> String {
    serde_json::json!({"model": "fourier", "n": 3, "coeffs": non_convex_space_rows()}).to_string()
}
