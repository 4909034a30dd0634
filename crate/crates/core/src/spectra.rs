//! N-gon operators `Σ = Σ_k |v_k⟩⟨v_k| / ⟨v_k|v_k⟩`, their spectra, and the
//! conflict census (operators whose largest eigenvalue beats the classical
//! bound `floor(n/2)`).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::golden::GoldenNum;
use crate::graph::OrthoGraph;
use crate::ngons::{canonical_cycle, classical_bound, fold_ngons, NGon};
use crate::rays::{RayId, RaySet};

/// Margin above the classical bound required to call an operator a conflict.
pub const CONFLICT_EPSILON: f64 = 1e-9;
/// Eigenvalue classes are bucketed after rounding to this resolution.
pub const CLASS_RESOLUTION: f64 = 1e-6;

pub const JACOBI_TOLERANCE: f64 = 1e-13;
pub const JACOBI_MAX_SWEEPS: usize = 50;

// Upper-triangle order used for packed symmetric entries.
const PACKED: [(usize, usize); 10] = [
    (0, 0),
    (0, 1),
    (0, 2),
    (0, 3),
    (1, 1),
    (1, 2),
    (1, 3),
    (2, 2),
    (2, 3),
    (3, 3),
];

/// Real symmetric 4×4 matrix, optionally tagged with the N-gon it came from.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix4 {
    entries: [[f64; 4]; 4],
    provenance: Option<NGon>,
}

impl SymMatrix4 {
    /// Builds from the upper triangle in row order
    /// `(00, 01, 02, 03, 11, 12, 13, 22, 23, 33)`.
    pub fn from_packed(packed: [f64; 10]) -> Self {
        let mut entries = [[0.0; 4]; 4];
        for (k, &(i, j)) in PACKED.iter().enumerate() {
            entries[i][j] = packed[k];
            entries[j][i] = packed[k];
        }
        SymMatrix4 {
            entries,
            provenance: None,
        }
    }

    /// Symmetrizes `rows` by averaging mirror entries.
    pub fn from_rows(rows: [[f64; 4]; 4]) -> Self {
        let mut entries = rows;
        for i in 0..4 {
            for j in i + 1..4 {
                let v = 0.5 * (rows[i][j] + rows[j][i]);
                entries[i][j] = v;
                entries[j][i] = v;
            }
        }
        SymMatrix4 {
            entries,
            provenance: None,
        }
    }

    pub fn identity() -> Self {
        let mut rows = [[0.0; 4]; 4];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        SymMatrix4::from_rows(rows)
    }

    pub fn with_provenance(mut self, gon: NGon) -> Self {
        self.provenance = Some(gon);
        self
    }

    pub fn provenance(&self) -> Option<&NGon> {
        self.provenance.as_ref()
    }

    pub fn entries(&self) -> &[[f64; 4]; 4] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i][j]
    }

    pub fn packed(&self) -> [f64; 10] {
        PACKED.map(|(i, j)| self.entries[i][j])
    }

    pub fn trace(&self) -> f64 {
        (0..4).map(|i| self.entries[i][i]).sum()
    }

    pub fn mul_vec(&self, v: &[f64; 4]) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|j| self.entries[i][j] * v[j]).sum();
        }
        out
    }

    /// `rᵀ M r` without a norm check.
    pub fn quadratic_form(&self, r: &[f64; 4]) -> f64 {
        let mv = self.mul_vec(r);
        (0..4).map(|i| r[i] * mv[i]).sum()
    }
}

/// Eigen-decomposition of a [`SymMatrix4`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    /// Eigenvalues, descending.
    pub values: [f64; 4],
    /// Unit eigenvector of the largest eigenvalue.
    pub max_vector: [f64; 4],
    /// `‖Σv − λv‖` for the largest pair, measured on the input matrix.
    pub residual: f64,
    pub sweeps: usize,
}

impl Spectrum {
    pub fn max_value(&self) -> f64 {
        self.values[0]
    }
}

/// Full spectrum by cyclic Jacobi rotations.
pub fn max_eigen(m: &SymMatrix4) -> Result<Spectrum> {
    let mut a = m.entries;
    let mut v = [[0.0f64; 4]; 4];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }

    let off_norm = |a: &[[f64; 4]; 4]| -> f64 {
        let mut s = 0.0;
        for i in 0..4 {
            for j in i + 1..4 {
                s += 2.0 * a[i][j] * a[i][j];
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off_norm(&a) >= JACOBI_TOLERANCE {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::EigenNoConvergence(JACOBI_MAX_SWEEPS));
        }
        sweeps += 1;
        for p in 0..3 {
            for q in p + 1..4 {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                // Below the diagonals' resolution the element is noise.
                let (app, aqq) = (a[p][p], a[q][q]);
                if apq.abs() * 1e17 < app.abs().min(aqq.abs()) {
                    a[p][q] = 0.0;
                    a[q][p] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..4 {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..4 {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                for row in v.iter_mut() {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }

    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| a[j][j].total_cmp(&a[i][i]));
    let values = order.map(|i| a[i][i]);
    let top = order[0];
    let mut max_vector = [v[0][top], v[1][top], v[2][top], v[3][top]];
    let norm = max_vector.iter().map(|x| x * x).sum::<f64>().sqrt();
    // Fix the sign so the largest-magnitude component is positive.
    let lead = max_vector
        .iter()
        .copied()
        .max_by(|x, y| x.abs().total_cmp(&y.abs()))
        .unwrap_or(1.0);
    let sign = if lead < 0.0 { -1.0 } else { 1.0 };
    for x in &mut max_vector {
        *x *= sign / norm;
    }
    let mv = m.mul_vec(&max_vector);
    let residual = (0..4)
        .map(|i| (mv[i] - values[0] * max_vector[i]).powi(2))
        .sum::<f64>()
        .sqrt();
    Ok(Spectrum {
        values,
        max_vector,
        residual,
        sweeps,
    })
}

/// `rᵀ M r` for a unit vector `r`.
pub fn expectation(m: &SymMatrix4, r: &[f64; 4]) -> Result<f64> {
    let norm = r.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::NonUnitVector(norm));
    }
    Ok(m.quadratic_form(r))
}

/// Exact rank-1 projectors `v vᵀ / ⟨v, v⟩` for every ray of a catalog, with
/// an integer fast path when all entries share a small common denominator.
#[derive(Clone, Debug)]
pub struct ProjectorTable {
    exact: Vec<[GoldenNum; 10]>,
    fast: Option<FastProjectors>,
}

#[derive(Clone, Debug)]
struct FastProjectors {
    denominator: i64,
    // (rational, τ) numerators over `denominator`, packed upper triangle.
    numerators: Vec<[(i64, i64); 10]>,
}

impl ProjectorTable {
    pub fn new(rs: &RaySet) -> Self {
        let exact: Vec<[GoldenNum; 10]> = rs
            .rays()
            .iter()
            .map(|ray| {
                let inv = ray
                    .norm_squared()
                    .inverse()
                    .expect("catalog rays are nonzero");
                let c = &ray.components;
                PACKED.map(|(i, j)| &(&c[i] * &c[j]) * &inv)
            })
            .collect();
        let fast = FastProjectors::build(&exact);
        ProjectorTable { exact, fast }
    }

    pub fn len(&self) -> usize {
        self.exact.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exact.is_empty()
    }

    /// Exact packed sum of the projectors at catalog positions `rays`.
    pub fn exact_sum(&self, rays: &[usize]) -> [GoldenNum; 10] {
        let mut acc: [GoldenNum; 10] = Default::default();
        for &r in rays {
            for (a, e) in acc.iter_mut().zip(&self.exact[r]) {
                *a += e;
            }
        }
        acc
    }

    /// Operator for the rays at catalog positions `rays`, summed exactly and
    /// converted to floating point entry by entry.
    pub fn operator(&self, rays: &[usize]) -> SymMatrix4 {
        if let Some(fast) = &self.fast {
            if let Some(packed) = fast.sum(rays) {
                return SymMatrix4::from_packed(packed);
            }
        }
        SymMatrix4::from_packed(self.exact_sum(rays).map(|x| x.to_f64()))
    }

    /// Projector of a single ray, in floating point.
    pub fn projector(&self, ray: usize) -> SymMatrix4 {
        SymMatrix4::from_packed(self.exact[ray].clone().map(|x| x.to_f64()))
    }
}

impl FastProjectors {
    fn build(exact: &[[GoldenNum; 10]]) -> Option<Self> {
        let mut den = BigInt::one();
        for entry in exact.iter().flatten() {
            den = den.lcm(entry.rational_part().denom());
            den = den.lcm(entry.tau_part().denom());
        }
        let denominator = den.to_i64()?;
        let scale = |q: &num_rational::BigRational| -> Option<i64> {
            (q.numer() * (&den / q.denom())).to_i64()
        };
        let numerators = exact
            .iter()
            .map(|entries| {
                let mut out = [(0i64, 0i64); 10];
                for (o, e) in out.iter_mut().zip(entries) {
                    *o = (scale(e.rational_part())?, scale(e.tau_part())?);
                }
                Some(out)
            })
            .collect::<Option<Vec<_>>>()?;
        Some(FastProjectors {
            denominator,
            numerators,
        })
    }

    fn sum(&self, rays: &[usize]) -> Option<[f64; 10]> {
        let mut acc = [(0i64, 0i64); 10];
        for &r in rays {
            for (a, &(x, y)) in acc.iter_mut().zip(&self.numerators[r]) {
                a.0 = a.0.checked_add(x)?;
                a.1 = a.1.checked_add(y)?;
            }
        }
        Some(acc.map(|(a, b)| golden_ratio_to_f64(a, b) / self.denominator as f64))
    }
}

/// `a + bτ` in floating point, going through the conjugate when the two
/// terms have opposite signs so that cancellation never happens.
fn golden_ratio_to_f64(a: i64, b: i64) -> f64 {
    const TAU: f64 = 1.618_033_988_749_895;
    const KAPPA: f64 = 0.618_033_988_749_895;
    if (a >= 0) == (b >= 0) || a == 0 || b == 0 {
        return a as f64 + b as f64 * TAU;
    }
    // (a + bτ)(a + b − bτ) = a² + ab − b², and a + b − bτ = a − bκ.
    let (a, b) = (a as i128, b as i128);
    let norm = a * a + a * b - b * b;
    norm as f64 / (a as f64 - b as f64 * KAPPA)
}

/// Operator of an N-gon, assembled exactly and converted once per entry.
pub fn ngon_operator(rs: &RaySet, gon: &NGon) -> Result<SymMatrix4> {
    let positions = gon
        .cycle()
        .iter()
        .map(|&id| rs.position(id).ok_or(Error::UnknownId(id)))
        .collect::<Result<Vec<_>>>()?;
    let exact = ProjectorTable::new(rs).exact_sum(&positions);
    Ok(SymMatrix4::from_packed(exact.map(|x| x.to_f64())).with_provenance(gon.clone()))
}

/// One eigenvalue class of a census.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusClass {
    pub lambda_max: f64,
    pub count: u64,
    /// Least canonical cycle in the class.
    pub example_cycle: Vec<RayId>,
}

/// N-gon census of a ray subset, grouped by largest eigenvalue.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConflictCensus {
    pub n: usize,
    pub subset: String,
    /// Conflict classes, largest eigenvalue first.
    pub classes: Vec<CensusClass>,
    pub total_ngons: u64,
    pub total_conflicts: u64,
    /// Classes at or below the classical bound, largest first.
    pub nonconflict_classes: Vec<CensusClass>,
}

impl ConflictCensus {
    /// Largest eigenvalue over every N-gon counted, if any.
    pub fn max_lambda(&self) -> Option<f64> {
        self.classes
            .iter()
            .chain(&self.nonconflict_classes)
            .map(|c| c.lambda_max)
            .reduce(f64::max)
    }

    /// Conflict count of the class within `tol` of `lambda`.
    pub fn class_count_near(&self, lambda: f64, tol: f64) -> Option<u64> {
        let hits: Vec<&CensusClass> = self
            .classes
            .iter()
            .filter(|c| (c.lambda_max - lambda).abs() <= tol)
            .collect();
        match hits.as_slice() {
            [] => None,
            many => Some(many.iter().map(|c| c.count).sum()),
        }
    }
}

type ClassMap = BTreeMap<i64, (u64, Vec<RayId>)>;

fn merge_class_maps(mut a: ClassMap, b: ClassMap) -> ClassMap {
    for (key, (count, example)) in b {
        let slot = a.entry(key).or_insert((0, example.clone()));
        slot.0 += count;
        if example < slot.1 {
            slot.1 = example;
        }
    }
    a
}

fn class_key(lambda: f64) -> i64 {
    (lambda / CLASS_RESOLUTION).round() as i64
}

/// Enumerates the `n`-gons of `g` (optionally restricted to `subset`),
/// computes each operator's largest eigenvalue, and buckets them.
pub fn classify_conflicts(
    rs: &RaySet,
    g: &OrthoGraph,
    n: usize,
    subset: Option<&[RayId]>,
) -> Result<ConflictCensus> {
    let restricted;
    let graph = match subset {
        Some(ids) => {
            restricted = g.induced_subgraph(ids)?;
            &restricted
        }
        None => g,
    };
    let positions: Vec<usize> = graph
        .labels()
        .iter()
        .map(|&id| rs.position(id).ok_or(Error::UnknownId(id)))
        .collect::<Result<_>>()?;
    let table = ProjectorTable::new(rs);
    let bound = classical_bound(n) as f64;

    let merged = fold_ngons(
        graph,
        n,
        || Ok((0u64, ClassMap::new())),
        |acc: &mut Result<(u64, ClassMap)>, cycle| {
            let Ok((total, classes)) = acc else {
                return;
            };
            let rays: Vec<usize> = cycle.iter().map(|&v| positions[v]).collect();
            match max_eigen(&table.operator(&rays)) {
                Ok(spec) => {
                    *total += 1;
                    let labels: Vec<RayId> = cycle.iter().map(|&v| graph.label(v)).collect();
                    let example = canonical_cycle(&labels);
                    let slot = classes
                        .entry(class_key(spec.max_value()))
                        .or_insert_with(|| (0, example.clone()));
                    slot.0 += 1;
                    if example < slot.1 {
                        slot.1 = example;
                    }
                }
                Err(e) => *acc = Err(e),
            }
        },
        |a, b| match (a, b) {
            (Ok((ta, ca)), Ok((tb, cb))) => Ok((ta + tb, merge_class_maps(ca, cb))),
            (Err(e), _) | (_, Err(e)) => Err(e),
        },
    )??;

    let (total_ngons, classes) = merged;
    let mut conflicts = Vec::new();
    let mut others = Vec::new();
    for (key, (count, example_cycle)) in classes.into_iter().rev() {
        let lambda_max = key as f64 * CLASS_RESOLUTION;
        let class = CensusClass {
            lambda_max,
            count,
            example_cycle,
        };
        if lambda_max > bound + CONFLICT_EPSILON {
            conflicts.push(class);
        } else {
            others.push(class);
        }
    }
    let total_conflicts = conflicts.iter().map(|c| c.count).sum();
    Ok(ConflictCensus {
        n,
        subset: subset.map_or("all", |_| "custom").to_string(),
        classes: conflicts,
        total_ngons,
        total_conflicts,
        nonconflict_classes: others,
    })
}

/// Operators of every `n`-gon in `g` whose largest eigenvalue exceeds
/// `threshold` (use the classical bound plus [`CONFLICT_EPSILON`] for
/// conflict families, or `f64::NEG_INFINITY` for all of them). Sorted by
/// canonical cycle.
pub fn ngon_operators(
    rs: &RaySet,
    g: &OrthoGraph,
    n: usize,
    threshold: f64,
) -> Result<Vec<SymMatrix4>> {
    let positions: Vec<usize> = g
        .labels()
        .iter()
        .map(|&id| rs.position(id).ok_or(Error::UnknownId(id)))
        .collect::<Result<_>>()?;
    let table = ProjectorTable::new(rs);
    let mut ops = fold_ngons(
        g,
        n,
        || Ok(Vec::new()),
        |acc: &mut Result<Vec<SymMatrix4>>, cycle| {
            let Ok(list) = acc else {
                return;
            };
            let rays: Vec<usize> = cycle.iter().map(|&v| positions[v]).collect();
            let op = table.operator(&rays);
            match max_eigen(&op) {
                Ok(spec) if spec.max_value() > threshold => {
                    let labels: Vec<RayId> = cycle.iter().map(|&v| g.label(v)).collect();
                    list.push(op.with_provenance(NGon::new(&labels)));
                }
                Ok(_) => {}
                Err(e) => *acc = Err(e),
            }
        },
        |a, b| match (a, b) {
            (Ok(mut x), Ok(mut y)) => {
                x.append(&mut y);
                Ok(x)
            }
            (Err(e), _) | (_, Err(e)) => Err(e),
        },
    )??;
    ops.sort_by(|a, b| a.provenance().cmp(&b.provenance()));
    Ok(ops)
}

/// Conflict pentagon operators of `g`, sorted by cycle.
pub fn conflict_pentagons(rs: &RaySet, g: &OrthoGraph) -> Result<Vec<SymMatrix4>> {
    ngon_operators(rs, g, 5, classical_bound(5) as f64 + CONFLICT_EPSILON)
}

/// Largest `⟨r|Σ|r⟩` over every operator in `ops` and every catalog ray `r`
/// (normalized), with the ray id and operator index attaining it.
pub fn peak_expectation_on_rays(rs: &RaySet, ops: &[SymMatrix4]) -> Result<(f64, RayId, usize)> {
    if ops.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let mut best = (f64::NEG_INFINITY, 0, 0);
    for ray in rs.rays() {
        let v = ray.to_f64();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let r = v.map(|x| x / norm);
        for (k, op) in ops.iter().enumerate() {
            let e = expectation(op, &r)?;
            if e > best.0 {
                best = (e, ray.id, k);
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::graph::orthogonality_graph;
    use crate::rays::build_600cell_rays;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Eigenvalues via the characteristic polynomial: Faddeev–LeVerrier
    /// coefficients, then Newton from above with deflation and polishing on
    /// the undeflated quartic. Valid because all roots are real.
    fn quartic_eigenvalues(m: &SymMatrix4) -> [f64; 4] {
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
        // p(x) = x⁴ + c[1]x³ + c[2]x² + c[3]x + c[4]
        let mut c = [1.0, 0.0, 0.0, 0.0, 0.0];
        let mut mk = [[0.0; 4]; 4];
        for k in 1..=4 {
            let mut prod = matmul(&a, &mk);
            for i in 0..4 {
                prod[i][i] += c[k - 1];
            }
            mk = prod;
            let am = matmul(&a, &mk);
            let tr: f64 = (0..4).map(|i| am[i][i]).sum();
            c[k] = -tr / k as f64;
        }
        let eval = |p: &[f64], x: f64| -> (f64, f64) {
            let mut v = 0.0;
            let mut d = 0.0;
            for &coef in p {
                d = d * x + v;
                v = v * x + coef;
            }
            (v, d)
        };
        let bound = 1.0 + c[1..].iter().map(|x| x.abs()).fold(0.0, f64::max);
        let mut poly: Vec<f64> = c.to_vec();
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
            // synthetic division by (t - x)
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

    fn cell600() -> (RaySet, OrthoGraph) {
        let rs = build_600cell_rays();
        let g = orthogonality_graph(&rs);
        (rs, g)
    }

    #[test]
    fn identity_spectrum() {
        let s = max_eigen(&SymMatrix4::identity()).unwrap();
        assert_eq!(s.values, [1.0; 4]);
        assert_eq!(s.residual, 0.0);
    }

    #[test]
    fn table3_examples() {
        let rs = build_600cell_rays();
        for (cycle, lambda) in [
            ([1, 2, 13, 41, 34], 2.1778),
            ([1, 2, 13, 16, 42], 2.1142),
            ([1, 2, 13, 41, 20], 2.0850),
        ] {
            let op = ngon_operator(&rs, &NGon::new(&cycle)).unwrap();
            assert!((op.trace() - 5.0).abs() < 1e-12);
            for i in 0..4 {
                for j in 0..4 {
                    assert_eq!(op.get(i, j), op.get(j, i));
                }
            }
            let s = max_eigen(&op).unwrap();
            assert!((s.max_value() - lambda).abs() < 5e-4, "{cycle:?}: {}", s.max_value());
            assert!(s.residual <= 1e-9);
            let e = expectation(&op, &s.max_vector).unwrap();
            assert!((e - lambda).abs() < 5e-4);
        }
    }

    #[test]
    fn basis_operator_is_identity() {
        let rs = build_600cell_rays();
        let table = ProjectorTable::new(&rs);
        let exact = table.exact_sum(&[0, 1, 2, 3]);
        for (k, &(i, j)) in PACKED.iter().enumerate() {
            let want = if i == j { GoldenNum::one() } else { GoldenNum::zero() };
            assert_eq!(exact[k], want);
        }
        let op = table.operator(&[0, 1, 2, 3]);
        let r = [0.5, -0.5, 0.5, 0.5];
        assert!((expectation(&op, &r).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn expectation_rejects_non_unit() {
        assert!(matches!(
            expectation(&SymMatrix4::identity(), &[1.0, 1.0, 0.0, 0.0]),
            Err(Error::NonUnitVector(_))
        ));
    }

    #[test]
    fn fast_and_exact_assembly_agree() {
        let (rs, g) = cell600();
        let table = ProjectorTable::new(&rs);
        assert!(table.fast.is_some());
        let mut checked = 0;
        crate::ngons::visit_ngons(&g, 7, |cycle| {
            if checked < 500 {
                let fast = table.operator(cycle);
                let exact = table.exact_sum(cycle).map(|x| x.to_f64());
                for (f, e) in fast.packed().iter().zip(&exact) {
                    assert!((f - e).abs() <= 4.0 * f64::EPSILON * e.abs().max(1.0));
                }
                checked += 1;
            }
        })
        .unwrap();
    }

    #[test]
    fn golden_fast_conversion() {
        let tau = (1.0 + 5f64.sqrt()) / 2.0;
        for (a, b) in [(0, 1), (-1, 1), (1, -1), (987, -610), (-3, 5), (4, 0)] {
            let want = GoldenNum::from_ints(a, b).to_f64();
            let got = golden_ratio_to_f64(a, b);
            assert!((got - want).abs() <= 4.0 * f64::EPSILON * want.abs(), "{a},{b}");
            assert!((got - (a as f64 + b as f64 * tau)).abs() < 1e-9);
        }
    }

    #[test]
    fn jacobi_matches_quartic_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(100);
        for _ in 0..100 {
            let mut rows = [[0.0; 4]; 4];
            for i in 0..4 {
                for j in i..4 {
                    let x = rng.gen_range(-1.0..1.0);
                    rows[i][j] = x;
                    rows[j][i] = x;
                }
            }
            let m = SymMatrix4::from_rows(rows);
            let s = max_eigen(&m).unwrap();
            let oracle = quartic_eigenvalues(&m);
            for (x, y) in s.values.iter().zip(&oracle) {
                assert!((x - y).abs() < 1e-9, "{:?} vs {:?}", s.values, oracle);
            }
            assert!((s.values.iter().sum::<f64>() - m.trace()).abs() < 1e-9);
            assert!(s.residual <= 1e-9);
            assert!(s.sweeps <= JACOBI_MAX_SWEEPS);
        }
    }

    #[test]
    fn pentagon_spectra_invariants() {
        let (rs, g) = cell600();
        let table = ProjectorTable::new(&rs);
        let mut max_lambda: f64 = 0.0;
        crate::ngons::visit_ngons(&g, 5, |cycle| {
            let op = table.operator(cycle);
            assert!((op.trace() - 5.0).abs() < 1e-12);
            let s = max_eigen(&op).unwrap();
            assert!((s.values.iter().sum::<f64>() - 5.0).abs() < 1e-9);
            assert!(s.values.iter().all(|&x| (-1e-12..=5.0).contains(&x)));
            assert!(s.residual <= 1e-9);
            max_lambda = max_lambda.max(s.max_value());
        })
        .unwrap();
        assert!((max_lambda - 2.1778).abs() < 5e-4);
    }

    #[test]
    fn census_full_pentagons() {
        let (rs, g) = cell600();
        let census = classify_conflicts(&rs, &g, 5, None).unwrap();
        assert_eq!(census.total_ngons, 22_320);
        assert_eq!(census.total_conflicts, 18_000);
        let counts: u64 = census.classes.iter().map(|c| c.count).sum();
        assert_eq!(counts, census.total_conflicts);
        // Frozen breakdown; the full catalog has two classes below the bound
        // in addition to the three conflict classes.
        let all: Vec<(f64, u64)> = census
            .classes
            .iter()
            .chain(&census.nonconflict_classes)
            .map(|c| ((c.lambda_max * 1e4).round() / 1e4, c.count))
            .collect();
        assert_eq!(
            all,
            vec![
                (2.1778, 3600),
                (2.1142, 7200),
                (2.085, 7200),
                (1.9135, 3600),
                (1.809, 720)
            ]
        );
    }

    #[test]
    fn census_is_deterministic() {
        let (rs, g) = cell600();
        let ids: Vec<RayId> = (1..=40).collect();
        let a = classify_conflicts(&rs, &g, 7, Some(&ids)).unwrap();
        let b = classify_conflicts(&rs, &g, 7, Some(&ids)).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
