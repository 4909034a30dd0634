//! Reference values for the built-in 600-cell catalog, used by the report
//! and the acceptance suite.

/// Per N: (N, N-gons in all 60 rays, conflict N-gons in all 60 rays,
/// N-gons inside each of set A and set B).
pub const NGON_TABLE: [(usize, u64, u64, u64); 11] = [
    (5, 22_320, 18_000, 1_200),
    (6, 94_200, 0, 2_100),
    (7, 302_400, 14_400, 3_030),
    (8, 432_000, 0, 1_110),
    (9, 436_800, 0, 630),
    (10, 862_560, 0, 0),
    (11, 410_400, 0, 0),
    (12, 175_800, 0, 0),
    (13, 302_400, 0, 0),
    (14, 43_200, 0, 0),
    (15, 33_120, 0, 8),
];

pub fn ngon_row(n: usize) -> Option<(usize, u64, u64, u64)> {
    NGON_TABLE.iter().copied().find(|row| row.0 == n)
}

/// A conflict class: quoted largest eigenvalue, count, example cycle.
#[derive(Clone, Copy, Debug)]
pub struct ClassRef {
    pub lambda: f64,
    pub count: u64,
    pub example: &'static [u32],
}

pub const PENTAGONS_A: [ClassRef; 3] = [
    ClassRef { lambda: 2.1778, count: 210, example: &[1, 2, 13, 41, 34] },
    ClassRef { lambda: 2.1142, count: 420, example: &[1, 2, 13, 16, 42] },
    ClassRef { lambda: 2.0850, count: 360, example: &[1, 2, 13, 41, 20] },
];

pub const PENTAGONS_B: [ClassRef; 3] = [
    ClassRef { lambda: 2.1778, count: 180, example: &[7, 8, 17, 56, 22] },
    ClassRef { lambda: 2.1142, count: 420, example: &[7, 8, 17, 35, 52] },
    ClassRef { lambda: 2.0850, count: 360, example: &[7, 8, 17, 10, 27] },
];

pub const HEPTAGONS_A: [ClassRef; 1] = [ClassRef {
    lambda: 3.005,
    count: 120,
    example: &[1, 2, 13, 32, 58, 36, 34],
}];

pub const HEPTAGONS_B: [ClassRef; 2] = [
    ClassRef { lambda: 3.043, count: 120, example: &[7, 8, 17, 10, 37, 21, 22] },
    ClassRef { lambda: 3.005, count: 60, example: &[7, 8, 17, 35, 33, 23, 22] },
];

/// Tolerance on quoted four-figure eigenvalues.
pub const EIGEN_TOL: f64 = 5e-4;

pub const MAX_PENTAGON_EIGENVALUE: f64 = 2.1778;
/// √5, the qutrit pentagon maximum, for comparison only.
pub const QUTRIT_PENTAGON_MAX: f64 = 2.236;

pub const SCAN_MIN_A: f64 = 2.059;
pub const SCAN_MIN_B: f64 = 2.020;
pub const SCAN_TOL: f64 = 5e-3;

pub const PARITY_SPLITS: usize = 120;
/// Orthogonal bases in the 600-cell catalog (exhaustive 4-clique count).
pub const BASES: usize = 75;
/// Common degree of the 600-cell orthogonality graph (exhaustive count).
pub const GRAPH_DEGREE: usize = 15;

pub const PERES_TOL: f64 = 1e-9;
