//! The sextic `(x + 2)^2 (x - 1) (x - 3)^3` with the starting point
//! `(-3, 0.1, 4)`, a standard regression problem for the iteration.

use crate::iteration::ApproximationVector;
use crate::rootsystem::RootSystem;

pub const ROOTS: [f64; 3] = [-2.0, 1.0, 3.0];
pub const MULTIPLICITIES: [u32; 3] = [2, 1, 3];
pub const INITIAL: [f64; 3] = [-3.0, 0.1, 4.0];

/// Reference iterates for `k = 0..=3`, as decimal strings.
pub const REFERENCE_TABLE: [[&str; 3]; 4] = [
    [
        "-3.000000000000000000",
        "0.100000000000000000",
        "4.000000000000000000",
    ],
    [
        "-1.98938060918119354",
        "0.995064651338749428",
        "3.02604710332169412",
    ],
    [
        "-1.99999999967737963",
        "0.999999994237752166",
        "3.00000000683325288",
    ],
    [
        "-2.000000000000000000",
        "1.000000000000000000",
        "3.000000000000000000",
    ],
];

/// Step tolerance at which the reference run stops after three steps.
pub const STEP_TOLERANCE: f64 = 1e-15;

pub fn root_system() -> RootSystem {
    RootSystem::from_real(&ROOTS, &MULTIPLICITIES).expect("valid example system")
}

pub fn initial() -> ApproximationVector {
    ApproximationVector::from_real(&INITIAL).expect("finite example start")
}
