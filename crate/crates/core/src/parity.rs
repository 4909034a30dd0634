//! Kochen-Specker parity proofs: a ray subset whose bases number an odd
//! count while every ray sits in exactly two of them admits no 0/1
//! assignment with one 1 per basis.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{orthogonality_graph, OrthoGraph};
use crate::ngons::{enumerate_bases, Basis};
use crate::rays::{RayId, RaySet};

/// Set A of the reference split: 15 bases, read row by row.
pub const SET_A_BASES: [[RayId; 4]; 15] = [
    [1, 2, 3, 4],
    [14, 60, 34, 1],
    [48, 5, 32, 58],
    [13, 14, 15, 16],
    [13, 32, 50, 41],
    [19, 25, 6, 50],
    [41, 42, 43, 44],
    [25, 44, 2, 53],
    [34, 19, 48, 54],
    [31, 42, 51, 16],
    [58, 36, 15, 4],
    [46, 31, 60, 6],
    [43, 54, 3, 28],
    [36, 53, 20, 46],
    [20, 5, 51, 28],
];

/// Set B of the reference split, the complement of set A.
pub const SET_B_BASES: [[RayId; 4]; 15] = [
    [9, 10, 11, 12],
    [7, 18, 27, 52],
    [9, 35, 39, 52],
    [21, 22, 23, 24],
    [18, 47, 33, 55],
    [12, 29, 56, 22],
    [37, 38, 39, 40],
    [30, 59, 45, 7],
    [59, 26, 37, 21],
    [56, 45, 17, 35],
    [49, 8, 26, 17],
    [11, 38, 49, 33],
    [8, 57, 29, 47],
    [57, 23, 27, 40],
    [10, 55, 24, 30],
];

/// The reference pair of 30-ray halves and their bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuiltinSets {
    pub set_a: Vec<RayId>,
    pub set_b: Vec<RayId>,
    pub bases_a: Vec<Basis>,
    pub bases_b: Vec<Basis>,
}

fn rays_of(bases: &[Basis]) -> Vec<RayId> {
    let ids: BTreeSet<RayId> = bases.iter().flat_map(|b| b.0).collect();
    ids.into_iter().collect()
}

pub fn builtin_sets() -> BuiltinSets {
    let bases_a: Vec<Basis> = SET_A_BASES.iter().map(|&b| Basis::new(b)).collect();
    let bases_b: Vec<Basis> = SET_B_BASES.iter().map(|&b| Basis::new(b)).collect();
    BuiltinSets {
        set_a: rays_of(&bases_a),
        set_b: rays_of(&bases_b),
        bases_a,
        bases_b,
    }
}

/// Resolves `A`, `B` or a comma-separated id list.
pub fn named_subset(spec: &str) -> Option<Vec<RayId>> {
    match spec.trim() {
        "A" | "a" => Some(builtin_sets().set_a),
        "B" | "b" => Some(builtin_sets().set_b),
        list => {
            let ids: Option<BTreeSet<RayId>> = list
                .split(',')
                .map(|s| s.trim().parse().ok())
                .collect();
            ids.filter(|s| !s.is_empty()).map(|s| s.into_iter().collect())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityReport {
    pub ids: Vec<RayId>,
    /// Every basis lying entirely inside `ids`.
    pub bases: Vec<Basis>,
    /// Number of those bases containing each ray.
    pub multiplicity: BTreeMap<RayId, usize>,
    pub parity_proof: bool,
}

impl ParityReport {
    fn from_bases(ids: &[RayId], all_bases: &[Basis]) -> Self {
        let members: BTreeSet<RayId> = ids.iter().copied().collect();
        let bases: Vec<Basis> = all_bases
            .iter()
            .filter(|b| b.0.iter().all(|id| members.contains(id)))
            .copied()
            .collect();
        let mut multiplicity: BTreeMap<RayId, usize> = members.iter().map(|&id| (id, 0)).collect();
        for b in &bases {
            for id in b.0 {
                *multiplicity.get_mut(&id).unwrap() += 1;
            }
        }
        let parity_proof = bases.len() % 2 == 1 && multiplicity.values().all(|&m| m == 2);
        ParityReport {
            ids: members.into_iter().collect(),
            bases,
            multiplicity,
            parity_proof,
        }
    }
}

/// Collects the bases inside `ids` and checks the parity condition.
pub fn verify_parity_proof(rs: &RaySet, ids: &[RayId]) -> Result<ParityReport> {
    verify_parity_proof_in(&orthogonality_graph(rs), ids)
}

pub fn verify_parity_proof_in(g: &OrthoGraph, ids: &[RayId]) -> Result<ParityReport> {
    let sub = g.induced_subgraph(ids)?;
    Ok(ParityReport::from_bases(ids, &enumerate_bases(&sub)))
}

/// Complementary halves that are both parity proofs. `first` holds the
/// lexicographically least half.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ParitySplit {
    pub first: ParityReport,
    pub second: ParityReport,
}

impl PartialOrd for ParityReport {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ParityReport {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.ids.cmp(&other.ids)
    }
}

/// All unordered splits of the catalog into two equal halves that are both
/// parity proofs.
pub fn enumerate_parity_splits(rs: &RaySet) -> Vec<ParitySplit> {
    let g = orthogonality_graph(rs);
    enumerate_parity_splits_with(g.labels(), &enumerate_bases(&g))
}

/// Split search over an explicit basis hypergraph on the rays `ids`. The
/// result does not depend on the order of `bases`.
pub fn enumerate_parity_splits_with(ids: &[RayId], bases: &[Basis]) -> Vec<ParitySplit> {
    let n = ids.len();
    if n == 0 || n % 2 != 0 {
        return Vec::new();
    }
    let mut ordered: Vec<RayId> = ids.to_vec();
    ordered.sort_unstable();
    let pos: BTreeMap<RayId, usize> = ordered.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let mut sorted_bases: Vec<Basis> = bases
        .iter()
        .filter(|b| b.0.iter().all(|id| pos.contains_key(id)))
        .copied()
        .collect();
    sorted_bases.sort_unstable();
    sorted_bases.dedup();
    let columns: Vec<[usize; 4]> = sorted_bases.iter().map(|b| b.0.map(|id| pos[&id])).collect();

    let search = CoverSearch::new(n, n / 2, &columns);
    let halves = search.run();

    let mut splits: Vec<ParitySplit> = halves
        .into_iter()
        .filter_map(|mask| {
            let first: Vec<RayId> = (0..n).filter(|&i| mask[i]).map(|i| ordered[i]).collect();
            let second: Vec<RayId> = (0..n).filter(|&i| !mask[i]).map(|i| ordered[i]).collect();
            let a = ParityReport::from_bases(&first, &sorted_bases);
            let b = ParityReport::from_bases(&second, &sorted_bases);
            (a.parity_proof && b.parity_proof).then(|| {
                if a.ids <= b.ids {
                    ParitySplit { first: a, second: b }
                } else {
                    ParitySplit { first: b, second: a }
                }
            })
        })
        .collect();
    splits.sort();
    splits.dedup();
    splits
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum RayState {
    Unknown,
    In,
    Out,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum ColumnState {
    Open,
    Chosen,
    Rejected,
}

#[derive(Clone)]
struct CoverState {
    rays: Vec<RayState>,
    count: Vec<u8>,
    columns: Vec<ColumnState>,
    inside: usize,
}

/// Backtracking over basis columns: every chosen ray must be covered exactly
/// twice, unchosen rays never, and the half must hold `half` rays.
struct CoverSearch<'a> {
    half: usize,
    columns: &'a [[usize; 4]],
    by_ray: Vec<Vec<usize>>,
    start: CoverState,
}

impl<'a> CoverSearch<'a> {
    fn new(n: usize, half: usize, columns: &'a [[usize; 4]]) -> Self {
        let mut by_ray = vec![Vec::new(); n];
        for (c, col) in columns.iter().enumerate() {
            for &r in col {
                by_ray[r].push(c);
            }
        }
        let mut start = CoverState {
            rays: vec![RayState::Unknown; n],
            count: vec![0; n],
            columns: vec![ColumnState::Open; columns.len()],
            inside: 0,
        };
        // Each unordered split is found once, from the half holding ray 0.
        start.rays[0] = RayState::In;
        start.inside = 1;
        CoverSearch {
            half,
            columns,
            by_ray,
            start,
        }
    }

    fn available(&self, st: &CoverState, c: usize) -> bool {
        st.columns[c] == ColumnState::Open
            && self.columns[c]
                .iter()
                .all(|&r| st.rays[r] != RayState::Out && st.count[r] < 2)
    }

    fn choose(&self, st: &mut CoverState, c: usize) {
        st.columns[c] = ColumnState::Chosen;
        for &r in &self.columns[c] {
            if st.rays[r] != RayState::In {
                st.rays[r] = RayState::In;
                st.inside += 1;
            }
            st.count[r] += 1;
        }
    }

    /// Branches on the most constrained under-covered ray; `None` means no
    /// ray needs cover, `Some(vec![])` a dead end.
    fn branch_columns(&self, st: &CoverState) -> Option<Vec<usize>> {
        let mut best: Option<Vec<usize>> = None;
        for r in 0..st.rays.len() {
            if st.rays[r] != RayState::In || st.count[r] >= 2 {
                continue;
            }
            let open: Vec<usize> = self.by_ray[r]
                .iter()
                .copied()
                .filter(|&c| self.available(st, c))
                .collect();
            if open.len() < 2 - st.count[r] as usize {
                return Some(Vec::new());
            }
            if best.as_ref().is_none_or(|b| open.len() < b.len()) {
                best = Some(open);
            }
        }
        best
    }

    fn run(&self) -> Vec<Vec<bool>> {
        // Shard on the first branching decision.
        let st = self.start.clone();
        let Some(first) = self.branch_columns(&st) else {
            return Vec::new();
        };
        let shards: Vec<CoverState> = (0..first.len())
            .map(|i| {
                let mut s = st.clone();
                for &c in &first[..i] {
                    s.columns[c] = ColumnState::Rejected;
                }
                self.choose(&mut s, first[i]);
                s
            })
            .collect();
        let mut found: Vec<Vec<bool>> = shards
            .into_par_iter()
            .flat_map_iter(|s| {
                let mut out = Vec::new();
                self.descend(s, &mut out);
                out
            })
            .collect();
        found.sort();
        found.dedup();
        found
    }

    fn descend(&self, st: CoverState, out: &mut Vec<Vec<bool>>) {
        if st.inside > self.half {
            return;
        }
        match self.branch_columns(&st) {
            Some(options) => {
                for i in 0..options.len() {
                    let mut next = st.clone();
                    for &c in &options[..i] {
                        next.columns[c] = ColumnState::Rejected;
                    }
                    self.choose(&mut next, options[i]);
                    self.descend(next, out);
                }
            }
            None => {
                if st.inside == self.half {
                    let inside: Vec<bool> = st.rays.iter().map(|&s| s == RayState::In).collect();
                    // No unchosen basis may lie wholly inside the half.
                    let closed = self.columns.iter().enumerate().all(|(c, col)| {
                        st.columns[c] == ColumnState::Chosen || !col.iter().all(|&r| inside[r])
                    });
                    if closed {
                        out.push(inside);
                    }
                    return;
                }
                let Some(r) = st.rays.iter().position(|&s| s == RayState::Unknown) else {
                    return;
                };
                let mut take = st.clone();
                take.rays[r] = RayState::In;
                take.inside += 1;
                self.descend(take, out);

                let mut skip = st;
                skip.rays[r] = RayState::Out;
                for &c in &self.by_ray[r] {
                    if skip.columns[c] == ColumnState::Open {
                        skip.columns[c] = ColumnState::Rejected;
                    }
                }
                self.descend(skip, out);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rays::{build_600cell_rays, build_peres24};
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn builtin_sets_are_complementary() {
        let s = builtin_sets();
        assert_eq!(s.bases_a[0], Basis([1, 2, 3, 4]));
        assert_eq!(s.bases_b[0], Basis([9, 10, 11, 12]));
        assert_eq!(s.set_a.len(), 30);
        assert_eq!(s.set_b.len(), 30);
        let mut all: Vec<RayId> = s.set_a.iter().chain(&s.set_b).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (1..=60).collect::<Vec<_>>());
    }

    #[test]
    fn reference_sets_are_parity_proofs() {
        let rs = build_600cell_rays();
        let s = builtin_sets();
        for (ids, bases) in [(&s.set_a, &s.bases_a), (&s.set_b, &s.bases_b)] {
            let report = verify_parity_proof(&rs, ids).unwrap();
            assert!(report.parity_proof);
            assert_eq!(report.bases.len(), 15);
            assert!(report.multiplicity.values().all(|&m| m == 2));
            let mut expected = bases.clone();
            expected.sort();
            assert_eq!(report.bases, expected);
        }
    }

    #[test]
    fn first_half_is_not_a_parity_proof() {
        let rs = build_600cell_rays();
        let ids: Vec<RayId> = (1..=30).collect();
        assert!(!verify_parity_proof(&rs, &ids).unwrap().parity_proof);
    }

    #[test]
    fn named_subsets() {
        assert_eq!(named_subset("A").unwrap(), builtin_sets().set_a);
        assert_eq!(named_subset("3, 1,2").unwrap(), vec![1, 2, 3]);
        assert!(named_subset("1,x").is_none());
        assert!(named_subset("").is_none());
    }

    #[test]
    fn cell600_has_120_splits() {
        let rs = build_600cell_rays();
        let splits = enumerate_parity_splits(&rs);
        assert_eq!(splits.len(), 120);
        let s = builtin_sets();
        assert!(splits
            .iter()
            .any(|sp| sp.first.ids == s.set_a && sp.second.ids == s.set_b));
        for sp in &splits {
            for half in [&sp.first, &sp.second] {
                assert_eq!(half.ids.len(), 30);
                assert_eq!(half.bases.len(), 15);
                assert!(half.multiplicity.values().all(|&m| m == 2));
            }
        }
    }

    #[test]
    fn split_search_ignores_basis_order() {
        let rs = build_600cell_rays();
        let g = orthogonality_graph(&rs);
        let mut bases = enumerate_bases(&g);
        let reference = enumerate_parity_splits_with(g.labels(), &bases);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        bases.shuffle(&mut rng);
        let mut labels = g.labels().to_vec();
        labels.shuffle(&mut rng);
        assert_eq!(enumerate_parity_splits_with(&labels, &bases), reference);
    }

    #[test]
    fn peres_splits() {
        // Frozen from the exhaustive search. No split can exist: a 12-ray
        // half with every ray in two bases holds 12·2/4 = 6 bases, an even
        // number.
        let rs = build_peres24();
        let g = orthogonality_graph(&rs);
        assert_eq!(enumerate_bases(&g).len(), PERES_BASES);
        assert_eq!(enumerate_parity_splits(&rs).len(), PERES_SPLITS);
    }

    const PERES_BASES: usize = 24;
    const PERES_SPLITS: usize = 0;
}
