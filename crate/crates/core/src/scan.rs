//! Projective min-max scan: the least value over real unit vectors `r` of
//! `V(r) = max_Σ ⟨r|Σ|r⟩` across an operator family.
//!
//! Directions are parameterized as
//! `r = (cosφ sinθ₁ sinθ₂, sinφ sinθ₁ sinθ₂, cosθ₁ sinθ₂, cosθ₂)`. Since
//! `V(r) = V(−r)`, the box `φ ∈ [0, π)`, `θ₁, θ₂ ∈ [0, π]` covers every line
//! through the origin. A uniform mesh is evaluated first; the lowest nodes
//! are then polished by a deterministic Nelder–Mead descent. This is mesh
//! evidence strengthened by local search, not a certified global bound.

use std::cell::Cell;
use std::f64::consts::PI;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ngons::classical_bound;
use crate::spectra::SymMatrix4;

/// Initial simplex edge for refinement, radians.
pub const SIMPLEX_SCALE: f64 = 0.01;
pub const SIMPLEX_DIAMETER_TOL: f64 = 1e-8;
pub const MAX_REFINE_EVALUATIONS: usize = 10_000;
/// Refinement starts from the worst node and this many runners-up.
pub const EXTRA_STARTS: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeshSpec {
    pub step_phi: f64,
    pub step_theta1: f64,
    pub step_theta2: f64,
}

impl MeshSpec {
    pub fn new(step_phi: f64, step_theta1: f64, step_theta2: f64) -> Result<Self> {
        let mesh = MeshSpec {
            step_phi,
            step_theta1,
            step_theta2,
        };
        mesh.validate()?;
        Ok(mesh)
    }

    /// Same step on every axis, in degrees.
    pub fn uniform_degrees(step: f64) -> Result<Self> {
        let r = step.to_radians();
        Self::new(r, r, r)
    }

    fn validate(&self) -> Result<()> {
        for (name, s) in [
            ("phi", self.step_phi),
            ("theta1", self.step_theta1),
            ("theta2", self.step_theta2),
        ] {
            if !(s.is_finite() && s > 0.0 && s <= PI) {
                return Err(Error::InvalidMesh(format!("{name} step {s} must lie in (0, π]")));
            }
        }
        Ok(())
    }

    /// Nodes `0, h, 2h, …` strictly below π.
    pub fn phi_nodes(&self) -> usize {
        ((PI / self.step_phi) - 1e-9).ceil() as usize
    }

    fn closed_nodes(step: f64) -> usize {
        ((PI / step) + 1e-9).floor() as usize + 1
    }

    /// Nodes `0, h, 2h, …` up to and including π when `h` divides it.
    pub fn theta1_nodes(&self) -> usize {
        Self::closed_nodes(self.step_theta1)
    }

    pub fn theta2_nodes(&self) -> usize {
        Self::closed_nodes(self.step_theta2)
    }

    pub fn node_count(&self) -> usize {
        self.phi_nodes() * self.theta1_nodes() * self.theta2_nodes()
    }

    fn angles(&self, i: usize, j: usize, k: usize) -> [f64; 3] {
        [
            i as f64 * self.step_phi,
            (j as f64 * self.step_theta1).min(PI),
            (k as f64 * self.step_theta2).min(PI),
        ]
    }
}

pub fn spherical_to_vector(phi: f64, theta1: f64, theta2: f64) -> [f64; 4] {
    let (sp, cp) = phi.sin_cos();
    let (s1, c1) = theta1.sin_cos();
    let (s2, c2) = theta2.sin_cos();
    [cp * s1 * s2, sp * s1 * s2, c1 * s2, c2]
}

/// `max_Σ rᵀΣr` over the family.
pub fn violation_value(r: &[f64; 4], family: &[SymMatrix4]) -> Result<f64> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    Ok(family
        .iter()
        .map(|m| m.quadratic_form(r))
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Operators flattened to quadratic-form coefficients against the monomials
/// `r_i r_j` (`i ≤ j`), off-diagonal terms doubled.
struct PackedFamily {
    coeffs: Vec<[f64; 10]>,
}

impl PackedFamily {
    fn new(family: &[SymMatrix4]) -> Self {
        let coeffs = family
            .iter()
            .map(|m| {
                let p = m.packed();
                [
                    p[0],
                    2.0 * p[1],
                    2.0 * p[2],
                    2.0 * p[3],
                    p[4],
                    2.0 * p[5],
                    2.0 * p[6],
                    p[7],
                    2.0 * p[8],
                    p[9],
                ]
            })
            .collect();
        PackedFamily { coeffs }
    }

    fn monomials(r: &[f64; 4]) -> [f64; 10] {
        [
            r[0] * r[0],
            r[0] * r[1],
            r[0] * r[2],
            r[0] * r[3],
            r[1] * r[1],
            r[1] * r[2],
            r[1] * r[3],
            r[2] * r[2],
            r[2] * r[3],
            r[3] * r[3],
        ]
    }

    fn value(&self, r: &[f64; 4]) -> f64 {
        self.value_above(r, f64::INFINITY)
    }

    /// Full maximum, or any partial maximum once it exceeds `cutoff`.
    fn value_above(&self, r: &[f64; 4], cutoff: f64) -> f64 {
        let m = Self::monomials(r);
        let mut best = f64::NEG_INFINITY;
        for c in &self.coeffs {
            let v = c[0] * m[0]
                + c[1] * m[1]
                + c[2] * m[2]
                + c[3] * m[3]
                + c[4] * m[4]
                + c[5] * m[5]
                + c[6] * m[6]
                + c[7] * m[7]
                + c[8] * m[8]
                + c[9] * m[9];
            if v > best {
                best = v;
                if best > cutoff {
                    break;
                }
            }
        }
        best
    }

    fn at(&self, angles: &[f64; 3]) -> f64 {
        self.value(&spherical_to_vector(angles[0], angles[1], angles[2]))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeshNode {
    pub angles: [f64; 3],
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub family: String,
    pub operators: usize,
    pub classical_bound: f64,
    pub mesh: MeshSpec,
    pub nodes: usize,
    pub mesh_minimum: f64,
    pub mesh_argmin: [f64; 3],
    pub refined: bool,
    pub refined_minimum: f64,
    pub refined_argmin: [f64; 3],
    pub refined_vector: [f64; 4],
    pub refine_evaluations: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_clock_secs: Option<f64>,
}

impl ScanReport {
    /// Universal violation: the refined minimum beats the classical bound.
    pub fn violates_everywhere(&self) -> bool {
        self.refined_minimum > self.classical_bound
    }
}

#[derive(Clone, Debug)]
pub struct ScanOptions {
    pub label: String,
    pub refine: bool,
    pub extra_starts: usize,
    pub record_time: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            label: "custom".into(),
            refine: true,
            extra_starts: EXTRA_STARTS,
            record_time: false,
        }
    }
}

// Lowest nodes kept as (value, flat index), ordered by value then index.
#[derive(Clone, Default)]
struct Lowest {
    capacity: usize,
    items: Vec<(f64, usize)>,
}

impl Lowest {
    fn new(capacity: usize) -> Self {
        Lowest {
            capacity,
            items: Vec::with_capacity(capacity + 1),
        }
    }

    /// Values above this cannot enter the list.
    fn cutoff(&self) -> f64 {
        if self.items.len() < self.capacity {
            f64::INFINITY
        } else {
            self.items[self.items.len() - 1].0
        }
    }

    fn offer(&mut self, value: f64, index: usize) {
        let key = (value, index);
        if self.items.len() == self.capacity {
            let last = self.items[self.capacity - 1];
            if (key.0, key.1) >= (last.0, last.1) {
                return;
            }
        }
        let pos = self
            .items
            .partition_point(|&(v, i)| (v, i) < (key.0, key.1));
        self.items.insert(pos, key);
        self.items.truncate(self.capacity);
    }

    fn merge(mut self, other: Lowest) -> Lowest {
        for (v, i) in other.items {
            self.offer(v, i);
        }
        self
    }
}

/// Evaluates every mesh node and returns the `keep` lowest, ascending by
/// value with ties broken by node order.
pub fn mesh_lowest(family: &[SymMatrix4], mesh: &MeshSpec, keep: usize) -> Result<Vec<MeshNode>> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    mesh.validate()?;
    let packed = PackedFamily::new(family);
    let (n1, n2) = (mesh.theta1_nodes(), mesh.theta2_nodes());
    let theta1: Vec<(f64, f64)> = (0..n1).map(|j| mesh.angles(0, j, 0)[1].sin_cos()).collect();
    let theta2: Vec<(f64, f64)> = (0..n2).map(|k| mesh.angles(0, 0, k)[2].sin_cos()).collect();
    let keep = keep.max(1);

    let lowest = (0..mesh.phi_nodes())
        .into_par_iter()
        .fold(
            || Lowest::new(keep),
            |mut acc, i| {
                let (sp, cp) = mesh.angles(i, 0, 0)[0].sin_cos();
                for (j, &(s1, c1)) in theta1.iter().enumerate() {
                    for (k, &(s2, c2)) in theta2.iter().enumerate() {
                        let r = [cp * s1 * s2, sp * s1 * s2, c1 * s2, c2];
                        let v = packed.value_above(&r, acc.cutoff());
                        acc.offer(v, (i * n1 + j) * n2 + k);
                    }
                }
                acc
            },
        )
        .reduce(|| Lowest::new(keep), Lowest::merge);

    Ok(lowest
        .items
        .into_iter()
        .map(|(value, idx)| {
            let k = idx % n2;
            let j = (idx / n2) % n1;
            let i = idx / (n1 * n2);
            MeshNode {
                angles: mesh.angles(i, j, k),
                value,
            }
        })
        .collect())
}

/// Deterministic Nelder–Mead descent on `(φ, θ₁, θ₂)`. Never returns a value
/// above the starting value.
pub fn refine_minimum(family: &[SymMatrix4], start: [f64; 3]) -> Result<(MeshNode, usize)> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let packed = PackedFamily::new(family);
    Ok(nelder_mead(|x| packed.at(x), start))
}

fn nelder_mead<F: Fn(&[f64; 3]) -> f64>(f: F, start: [f64; 3]) -> (MeshNode, usize) {
    const ALPHA: f64 = 1.0;
    const GAMMA: f64 = 2.0;
    const RHO: f64 = 0.5;
    const SIGMA: f64 = 0.5;

    let evals = Cell::new(0usize);
    let eval = |x: &[f64; 3]| {
        evals.set(evals.get() + 1);
        f(x)
    };
    let mut simplex: Vec<([f64; 3], f64)> = Vec::with_capacity(4);
    simplex.push((start, eval(&start)));
    for d in 0..3 {
        let mut x = start;
        x[d] += SIMPLEX_SCALE;
        let v = eval(&x);
        simplex.push((x, v));
    }

    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let diameter = simplex
            .iter()
            .flat_map(|a| simplex.iter().map(move |b| dist(&a.0, &b.0)))
            .fold(0.0, f64::max);
        if diameter < SIMPLEX_DIAMETER_TOL || evals.get() >= MAX_REFINE_EVALUATIONS {
            break;
        }
        let mut centroid = [0.0; 3];
        for (x, _) in &simplex[..3] {
            for d in 0..3 {
                centroid[d] += x[d] / 3.0;
            }
        }
        let worst = simplex[3];
        let along = |t: f64| -> [f64; 3] {
            let mut p = [0.0; 3];
            for d in 0..3 {
                p[d] = centroid[d] + t * (worst.0[d] - centroid[d]);
            }
            p
        };
        let xr = along(-ALPHA);
        let fr = eval(&xr);
        if fr < simplex[0].1 {
            let xe = along(-GAMMA);
            let fe = eval(&xe);
            simplex[3] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[2].1 {
            simplex[3] = (xr, fr);
        } else {
            let (xc, fc) = if fr < worst.1 {
                let xc = along(-RHO);
                (xc, eval(&xc))
            } else {
                let xc = along(RHO);
                (xc, eval(&xc))
            };
            if fc < worst.1.min(fr) {
                simplex[3] = (xc, fc);
            } else {
                let best = simplex[0].0;
                for entry in simplex.iter_mut().skip(1) {
                    let mut p = [0.0; 3];
                    for d in 0..3 {
                        p[d] = best[d] + SIGMA * (entry.0[d] - best[d]);
                    }
                    *entry = (p, eval(&p));
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (angles, value) = simplex[0];
    (MeshNode { angles, value }, evals.get())
}

fn dist(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Mesh scan followed by refinement from the worst node and
/// [`EXTRA_STARTS`] runners-up.
pub fn scan_universality(family: &[SymMatrix4], mesh: &MeshSpec) -> Result<ScanReport> {
    scan_universality_with(family, mesh, &ScanOptions::default())
}

pub fn scan_universality_with(
    family: &[SymMatrix4],
    mesh: &MeshSpec,
    opts: &ScanOptions,
) -> Result<ScanReport> {
    let started = Instant::now();
    let starts = if opts.refine { 1 + opts.extra_starts } else { 1 };
    let lowest = mesh_lowest(family, mesh, starts)?;
    let worst = lowest[0];

    let mut best = worst;
    let mut evaluations = 0;
    if opts.refine {
        for node in &lowest {
            let (found, evals) = refine_minimum(family, node.angles)?;
            evaluations += evals;
            if found.value < best.value {
                best = found;
            }
        }
    }
    let bound = family
        .first()
        .and_then(|m| m.provenance())
        .map_or(classical_bound(5), |g| classical_bound(g.n())) as f64;

    Ok(ScanReport {
        family: opts.label.clone(),
        operators: family.len(),
        classical_bound: bound,
        mesh: *mesh,
        nodes: mesh.node_count(),
        mesh_minimum: worst.value,
        mesh_argmin: worst.angles,
        refined: opts.refine,
        refined_minimum: best.value,
        refined_argmin: best.angles,
        refined_vector: spherical_to_vector(best.angles[0], best.angles[1], best.angles[2]),
        refine_evaluations: evaluations,
        wall_clock_secs: opts.record_time.then(|| started.elapsed().as_secs_f64()),
    })
}
