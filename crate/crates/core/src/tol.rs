/// Numerical thresholds shared by all operations.
///
/// All thresholds are relative: homogeneous determinants carry an arbitrary
/// scale, so absolute cut-offs would not survive a rescaling of the curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Singular values below `rank * σ_max` count as zero.
    pub rank: f64,
    /// `|F_p(t)| <= zero * max|F_p|` flags a zero of the tangency function.
    pub zero: f64,
    /// A derivative `F_p^(j)` counts as nonzero above `derivative * scale_j`.
    pub derivative: f64,
    /// Zeros closer than this (in parameter units) are one tangency.
    pub merge: f64,
    /// Initial number of samples per period for root bracketing.
    pub grid: usize,
    /// Upper bound for grid doubling before giving up.
    pub max_grid: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rank: 1e-9,
            zero: 1e-10,
            derivative: 1e-6,
            merge: 1e-7,
            grid: 4096,
            max_grid: 1 << 20,
        }
    }
}

impl Tolerances {
    pub fn with_rank(self, rank: f64) -> Self {
        Tolerances { rank, ..self }
    }

    pub fn with_zero(self, zero: f64) -> Self {
        Tolerances { zero, ..self }
    }
}
