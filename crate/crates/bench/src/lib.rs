//! Benchmark fixtures.

use polylog_core::{ComplexHP, RootOfUnity};

/// Points inside the half-plane, one per quadrant of the sampling box.
pub fn half_plane_points() -> Vec<ComplexHP> {
    [(1.5, 0.5), (2.0, -3.0), (3.5, 4.0), (1.2, -0.7)]
        .into_iter()
        .map(|(re, im)| ComplexHP::new(128, re, im))
        .collect()
}

/// Points that need one to four translation steps.
pub fn continued_points() -> Vec<ComplexHP> {
    [(0.5, 1.0), (-0.5, -2.0), (-1.5, 3.0), (-2.7, 0.3)]
        .into_iter()
        .map(|(re, im)| ComplexHP::new(128, re, im))
        .collect()
}

pub fn roots() -> Vec<RootOfUnity> {
    [(1, 0), (2, 1), (3, 1), (6, 5)]
        .into_iter()
        .map(|(q, j)| RootOfUnity::new(q, j).expect("primitive"))
        .collect()
}
