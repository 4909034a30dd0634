//! Oracles shared by the integration tests. Each one recomputes a library
//! result by a different route.
#![allow(dead_code)]

use ks600::graph::OrthoGraph;
use ks600::spectra::SymMatrix4;

/// Eigenvalues (descending) from the characteristic polynomial:
/// Faddeev–LeVerrier coefficients, Newton from above the Cauchy bound with
/// deflation, then polishing on the full quartic. All roots are real.
pub fn quartic_eigenvalues(m: &SymMatrix4) -> [f64; 4] {
    let a = *m.entries();
    let matmul = |x: &[[f64; 4]; 4], y: &[[f64; 4]; 4]| {
        let mut z = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                z[i][j] = (0..4).map(|k| x[i][k] * y[k][j]).sum();
            }
        }
        z
    };
    let mut c = [1.0, 0.0, 0.0, 0.0, 0.0];
    let mut mk = [[0.0; 4]; 4];
    for k in 1..=4 {
        let mut prod = matmul(&a, &mk);
        for (i, row) in prod.iter_mut().enumerate() {
            row[i] += c[k - 1];
        }
        mk = prod;
        let am = matmul(&a, &mk);
        c[k] = -(0..4).map(|i| am[i][i]).sum::<f64>() / k as f64;
    }
    let eval = |p: &[f64], x: f64| {
        let (mut v, mut d) = (0.0, 0.0);
        for &coef in p {
            d = d * x + v;
            v = v * x + coef;
        }
        (v, d)
    };
    let bound = 1.0 + c[1..].iter().map(|x| x.abs()).fold(0.0, f64::max);
    let mut poly = c.to_vec();
    let mut roots = [0.0; 4];
    for root in roots.iter_mut() {
        let mut x = bound;
        for _ in 0..500 {
            let (v, d) = eval(&poly, x);
            if d == 0.0 {
                break;
            }
            let step = v / d;
            x -= step;
            if step.abs() < 1e-15 * x.abs().max(1.0) {
                break;
            }
        }
        for _ in 0..5 {
            let (v, d) = eval(&c, x);
            if d != 0.0 {
                x -= v / d;
            }
        }
        *root = x;
        let mut q = Vec::with_capacity(poly.len() - 1);
        let mut acc = 0.0;
        for &coef in &poly[..poly.len() - 1] {
            acc = acc * x + coef;
            q.push(acc);
        }
        poly = q;
    }
    roots.sort_by(|a, b| b.total_cmp(a));
    roots
}

/// Counts induced cycles of length `n` by subset inspection: a vertex set
/// spans a chordless cycle iff every member has induced degree 2 and the
/// induced subgraph is connected.
pub fn subset_chordless_count(g: &OrthoGraph, n: usize) -> u64 {
    let vc = g.vertex_count();
    assert!(vc <= 20);
    let mut total = 0;
    for mask in 0u32..(1 << vc) {
        if mask.count_ones() as usize != n {
            continue;
        }
        let members: Vec<usize> = (0..vc).filter(|&v| mask >> v & 1 == 1).collect();
        if !members
            .iter()
            .all(|&u| members.iter().filter(|&&w| g.adjacent(u, w)).count() == 2)
        {
            continue;
        }
        let mut seen = 1u32 << members[0];
        let mut stack = vec![members[0]];
        while let Some(u) = stack.pop() {
            for &w in &members {
                if seen >> w & 1 == 0 && g.adjacent(u, w) {
                    seen |= 1 << w;
                    stack.push(w);
                }
            }
        }
        if seen == mask {
            total += 1;
        }
    }
    total
}

/// a + bτ in floating point, straight from the definition of τ.
pub fn golden_f64(a: f64, b: f64) -> f64 {
    a + b * (1.0 + 5f64.sqrt()) / 2.0
}
