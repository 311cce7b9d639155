#![allow(dead_code)]

use gek::{Complex64, RootSystem};
use proptest::prelude::*;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn min_distance(points: &[Complex64]) -> f64 {
    let mut d = f64::INFINITY;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            d = d.min((a - b).norm());
        }
    }
    d
}

pub fn complex_in(radius: f64) -> impl Strategy<Value = Complex64> {
    (-radius..radius, -radius..radius).prop_map(|(re, im)| c(re, im))
}

/// Offsets with modulus in `[radius/1000, radius)`.
pub fn offset(radius: f64) -> impl Strategy<Value = Complex64> {
    (radius / 1000.0..radius, 0.0..std::f64::consts::TAU)
        .prop_map(|(r, t)| Complex64::from_polar(r, t))
}

/// Root systems on a shifted integer grid in `[-3, 3.5]^2`: separation is
/// at least 1 and every coefficient of the expanded polynomial is exact in
/// binary64.
pub fn grid_system(max_roots: usize, max_alpha: u32) -> impl Strategy<Value = RootSystem> {
    let mut grid = Vec::new();
    for a in -3..=3 {
        for b in -3..=3 {
            grid.push((f64::from(a), f64::from(b)));
        }
    }
    (
        proptest::sample::subsequence(grid, 1..=max_roots).prop_shuffle(),
        0..2u8,
        0..2u8,
    )
        .prop_flat_map(move |(points, sx, sy)| {
            let shift = (f64::from(sx) / 2.0, f64::from(sy) / 2.0);
            let roots: Vec<Complex64> = points
                .iter()
                .map(|&(a, b)| c(a + shift.0, b + shift.1))
                .collect();
            let m = roots.len();
            (Just(roots), proptest::collection::vec(1..=max_alpha, m))
        })
        .prop_map(|(roots, alphas)| RootSystem::new(roots, alphas).unwrap())
}
