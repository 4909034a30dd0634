//! Bases (orthogonal 4-cliques) and N-gons (chordless N-cycles) of an
//! orthogonality graph.
//!
//! N-gons are enumerated by depth-first extension of chordless paths rooted
//! at the least vertex of each cycle. A path only grows through vertices
//! greater than its root that see no earlier path vertex except the current
//! end, so every prefix is itself an induced path. The closing vertex must
//! see the root, and `second < last` drops the mirror copy of each cycle.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::OrthoGraph;
use crate::rays::RayId;

pub const MIN_NGON: usize = 5;

/// Four mutually orthogonal rays, ids ascending.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Basis(pub [RayId; 4]);

impl Basis {
    pub fn new(mut ids: [RayId; 4]) -> Self {
        ids.sort_unstable();
        Basis(ids)
    }

    pub fn ids(&self) -> &[RayId; 4] {
        &self.0
    }

    pub fn contains(&self, id: RayId) -> bool {
        self.0.contains(&id)
    }
}

/// A chordless cycle stored in canonical form: the lexicographically least
/// of its `2n` rotations and reflections.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NGon {
    cycle: Vec<RayId>,
}

impl NGon {
    /// Canonicalizes `cycle`. Does not check orthogonality.
    pub fn new(cycle: &[RayId]) -> Self {
        NGon {
            cycle: canonical_cycle(cycle),
        }
    }

    pub fn n(&self) -> usize {
        self.cycle.len()
    }

    pub fn cycle(&self) -> &[RayId] {
        &self.cycle
    }

    pub fn to_csv_line(&self) -> String {
        self.cycle
            .iter()
            .map(|id| id.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Least rotation/reflection of a cycle of distinct labels.
pub fn canonical_cycle(cycle: &[RayId]) -> Vec<RayId> {
    let n = cycle.len();
    if n == 0 {
        return Vec::new();
    }
    let start = (0..n).min_by_key(|&i| cycle[i]).unwrap();
    let forward: Vec<RayId> = (0..n).map(|k| cycle[(start + k) % n]).collect();
    let backward: Vec<RayId> = (0..n).map(|k| cycle[(start + n - k) % n]).collect();
    forward.min(backward)
}

/// Checks that `cycle` (labels) is an induced cycle of `g`.
pub fn is_chordless_cycle(g: &OrthoGraph, cycle: &[RayId]) -> bool {
    let n = cycle.len();
    if n < 4 {
        return false;
    }
    let idx: Option<Vec<usize>> = cycle.iter().map(|&id| g.index_of(id)).collect();
    let Some(idx) = idx else {
        return false;
    };
    for i in 0..n {
        for j in i + 1..n {
            let consecutive = j == i + 1 || (i == 0 && j == n - 1);
            if idx[i] == idx[j] || g.adjacent(idx[i], idx[j]) != consecutive {
                return false;
            }
        }
    }
    true
}

/// Noncontextual ceiling on the N-gon operator: the independence number
/// `floor(n/2)` of the n-cycle.
pub fn classical_bound(n: usize) -> usize {
    n / 2
}

/// All 4-cliques, each once, sorted.
pub fn enumerate_bases(g: &OrthoGraph) -> Vec<Basis> {
    let mut out = Vec::new();
    for a in 0..g.vertex_count() {
        for &b in g.neighbors(a).iter().filter(|&&b| b > a) {
            for &c in g.neighbors(b).iter().filter(|&&c| c > b) {
                if !g.adjacent(a, c) {
                    continue;
                }
                for &d in g.neighbors(c).iter().filter(|&&d| d > c) {
                    if g.adjacent(a, d) && g.adjacent(b, d) {
                        out.push(Basis::new([a, b, c, d].map(|v| g.label(v))));
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out
}

fn check_length(n: usize) -> Result<()> {
    if n < MIN_NGON {
        return Err(Error::NgonLength { n, max: usize::MAX });
    }
    Ok(())
}

struct PathSearch<'g, F> {
    g: &'g OrthoGraph,
    n: usize,
    root: usize,
    path: Vec<usize>,
    on_path: Vec<bool>,
    // Number of interior path vertices (excluding root and current end)
    // adjacent to each vertex.
    blocked: Vec<u32>,
    emit: F,
}

impl<F: FnMut(&[usize])> PathSearch<'_, F> {
    fn extend(&mut self) {
        let len = self.path.len();
        let last = self.path[len - 1];
        let closing = len == self.n - 1;
        let g = self.g;
        for &w in g.neighbors(last) {
            if w <= self.root || self.on_path[w] || self.blocked[w] > 0 {
                continue;
            }
            let sees_root = g.adjacent(self.root, w);
            if closing {
                if sees_root && self.path[1] < w {
                    self.path.push(w);
                    (self.emit)(&self.path);
                    self.path.pop();
                }
                continue;
            }
            if len > 1 && sees_root {
                continue;
            }
            self.push(w);
            self.extend();
            self.pop();
        }
    }

    fn push(&mut self, w: usize) {
        let last = *self.path.last().unwrap();
        if last != self.root {
            for &x in self.g.neighbors(last) {
                self.blocked[x] += 1;
            }
        }
        self.on_path[w] = true;
        self.path.push(w);
    }

    fn pop(&mut self) {
        let w = self.path.pop().unwrap();
        self.on_path[w] = false;
        let last = *self.path.last().unwrap();
        if last != self.root {
            for &x in self.g.neighbors(last) {
                self.blocked[x] -= 1;
            }
        }
    }
}

/// Streams every chordless `n`-cycle whose least vertex index is `root`, as
/// vertex indices starting at the root.
pub fn visit_root_ngons<F: FnMut(&[usize])>(g: &OrthoGraph, n: usize, root: usize, emit: F) {
    let vc = g.vertex_count();
    if n < MIN_NGON || n > vc {
        return;
    }
    let mut search = PathSearch {
        g,
        n,
        root,
        path: Vec::with_capacity(n),
        on_path: vec![false; vc],
        blocked: vec![0; vc],
        emit,
    };
    search.on_path[root] = true;
    search.path.push(root);
    search.extend();
}

/// Sequentially streams every chordless `n`-cycle once (vertex indices).
pub fn visit_ngons<F: FnMut(&[usize])>(g: &OrthoGraph, n: usize, mut emit: F) -> Result<()> {
    check_length(n)?;
    for root in 0..g.vertex_count() {
        visit_root_ngons(g, n, root, &mut emit);
    }
    Ok(())
}

/// Parallel fold over all chordless `n`-cycles, sharded by root vertex.
/// `merge` must be commutative for the result to be order independent.
pub fn fold_ngons<T, I, F, M>(g: &OrthoGraph, n: usize, init: I, fold: F, merge: M) -> Result<T>
where
    T: Send,
    I: Fn() -> T + Sync + Send,
    F: Fn(&mut T, &[usize]) + Sync + Send,
    M: Fn(T, T) -> T + Sync + Send,
{
    check_length(n)?;
    let result = (0..g.vertex_count())
        .into_par_iter()
        .fold(&init, |mut acc, root| {
            visit_root_ngons(g, n, root, |cycle| fold(&mut acc, cycle));
            acc
        })
        .reduce(&init, &merge);
    Ok(result)
}

/// Number of chordless `n`-cycles.
pub fn count_ngons(g: &OrthoGraph, n: usize) -> Result<u64> {
    fold_ngons(g, n, || 0u64, |c, _| *c += 1, |a, b| a + b)
}

/// All chordless `n`-cycles, canonicalized and sorted.
pub fn enumerate_ngons(g: &OrthoGraph, n: usize) -> Result<Vec<NGon>> {
    let mut all = fold_ngons(
        g,
        n,
        Vec::new,
        |acc: &mut Vec<NGon>, cycle| acc.push(ngon_from_indices(g, cycle)),
        |mut a, mut b| {
            a.append(&mut b);
            a
        },
    )?;
    all.sort_unstable();
    Ok(all)
}

pub fn ngon_from_indices(g: &OrthoGraph, cycle: &[usize]) -> NGon {
    let labels: Vec<RayId> = cycle.iter().map(|&v| g.label(v)).collect();
    NGon::new(&labels)
}

/// Writes one canonical cycle per line (comma-separated ids) in root order
/// and returns the number written.
pub fn write_ngons<W: Write>(g: &OrthoGraph, n: usize, out: &mut W) -> Result<u64> {
    let mut count = 0u64;
    let mut failure = None;
    visit_ngons(g, n, |cycle| {
        if failure.is_some() {
            return;
        }
        let line = ngon_from_indices(g, cycle).to_csv_line();
        if let Err(e) = writeln!(out, "{}", line) {
            failure = Some(e);
        }
        count += 1;
    })?;
    match failure {
        Some(e) => Err(e.into()),
        None => Ok(count),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::orthogonality_graph;
    use crate::rays::build_600cell_rays;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    fn cycle_graph(n: u32) -> OrthoGraph {
        let labels: Vec<RayId> = (1..=n).collect();
        let edges: Vec<(RayId, RayId)> = (1..=n).map(|i| (i, i % n + 1)).collect();
        OrthoGraph::from_edges(labels, &edges).unwrap()
    }

    fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> OrthoGraph {
        let labels: Vec<RayId> = (1..=n as RayId).collect();
        let mut edges = Vec::new();
        for a in 1..=n as RayId {
            for b in a + 1..=n as RayId {
                if rng.gen_bool(p) {
                    edges.push((a, b));
                }
            }
        }
        OrthoGraph::from_edges(labels, &edges).unwrap()
    }

    /// Brute-force count: every `n`-subset whose induced subgraph is a
    /// single cycle, found by trying all cyclic orders through its members.
    fn naive_chordless_count(g: &OrthoGraph, n: usize) -> u64 {
        fn permutations(rest: &mut Vec<usize>, prefix: &mut Vec<usize>, out: &mut dyn FnMut(&[usize])) {
            if rest.is_empty() {
                out(prefix);
                return;
            }
            for i in 0..rest.len() {
                let v = rest.remove(i);
                prefix.push(v);
                permutations(rest, prefix, out);
                prefix.pop();
                rest.insert(i, v);
            }
        }
        let vc = g.vertex_count();
        let mut total = 0u64;
        for mask in 0u32..(1 << vc) {
            if mask.count_ones() as usize != n {
                continue;
            }
            let members: Vec<usize> = (0..vc).filter(|&v| mask >> v & 1 == 1).collect();
            // Cheap filter: an induced cycle has all induced degrees 2.
            let all_deg_two = members.iter().all(|&u| {
                members.iter().filter(|&&w| g.adjacent(u, w)).count() == 2
            });
            if !all_deg_two {
                continue;
            }
            let mut orders = 0u64;
            let mut rest = members[1..].to_vec();
            let mut prefix = vec![members[0]];
            permutations(&mut rest, &mut prefix, &mut |order| {
                let labels: Vec<RayId> = order.iter().map(|&v| g.label(v)).collect();
                if is_chordless_cycle(g, &labels) {
                    orders += 1;
                }
            });
            // Fixing the first vertex leaves 2 orientations per cycle.
            total += orders / 2;
        }
        total
    }

    #[test]
    fn rejects_short_cycles() {
        let g = cycle_graph(6);
        assert!(matches!(enumerate_ngons(&g, 4), Err(Error::NgonLength { n: 4, .. })));
        assert_eq!(enumerate_ngons(&g, 7).unwrap(), vec![]);
    }

    #[test]
    fn single_cycle_graph() {
        for n in 5..=9 {
            let g = cycle_graph(n);
            let found = enumerate_ngons(&g, n as usize).unwrap();
            assert_eq!(found.len(), 1);
            assert_eq!(found[0].cycle(), (1..=n).collect::<Vec<_>>().as_slice());
        }
    }

    #[test]
    fn triangle_free_graph_has_no_bases() {
        assert!(enumerate_bases(&cycle_graph(8)).is_empty());
    }

    #[test]
    fn canonical_form_examples() {
        assert_eq!(canonical_cycle(&[3, 1, 2, 5, 4]), vec![1, 2, 5, 4, 3]);
        assert_eq!(canonical_cycle(&[3, 4, 5, 2, 1]), vec![1, 2, 5, 4, 3]);
    }

    #[test]
    fn cell600_bases() {
        let g = orthogonality_graph(&build_600cell_rays());
        let bases = enumerate_bases(&g);
        assert_eq!(bases.len(), 75);
        assert!(bases.contains(&Basis::new([1, 2, 3, 4])));
        for b in &bases {
            let [a, b2, c, d] = b.0;
            for (x, y) in [(a, b2), (a, c), (a, d), (b2, c), (b2, d), (c, d)] {
                assert!(g.has_edge(x, y));
            }
        }
    }

    #[test]
    fn cell600_pentagons() {
        let g = orthogonality_graph(&build_600cell_rays());
        let pentagons = enumerate_ngons(&g, 5).unwrap();
        assert_eq!(pentagons.len(), 22_320);
        assert!(pentagons.iter().all(|p| is_chordless_cycle(&g, p.cycle())));
        let distinct: BTreeSet<_> = pentagons.iter().collect();
        assert_eq!(distinct.len(), pentagons.len());
        assert!(pentagons.contains(&NGon::new(&[1, 2, 13, 41, 34])));
    }

    #[test]
    fn emitted_file_matches_enumeration() {
        let g = orthogonality_graph(&build_600cell_rays())
            .induced_subgraph(&(1..=30).collect::<Vec<_>>())
            .unwrap();
        let mut buf = Vec::new();
        let count = write_ngons(&g, 5, &mut buf).unwrap();
        let mut lines: Vec<NGon> = String::from_utf8(buf)
            .unwrap()
            .lines()
            .map(|l| NGon::new(&l.split(',').map(|x| x.parse().unwrap()).collect::<Vec<_>>()))
            .collect();
        lines.sort();
        assert_eq!(count as usize, lines.len());
        assert_eq!(lines, enumerate_ngons(&g, 5).unwrap());
    }

    #[test]
    fn matches_brute_force_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for trial in 0..40 {
            let vc = rng.gen_range(5..=10);
            let p = rng.gen_range(0.2..0.6);
            let g = random_graph(&mut rng, vc, p);
            for n in 5..=vc {
                let fast = count_ngons(&g, n).unwrap();
                let slow = naive_chordless_count(&g, n);
                assert_eq!(fast, slow, "trial {trial} n={n}");
            }
        }
    }

    #[test]
    fn matches_subset_oracle_on_twelve_vertices() {
        // Full-permutation search is too slow at 12 vertices; the induced
        // degree-2-and-connected test is an equivalent subset oracle.
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..5 {
            let g = random_graph(&mut rng, 12, 0.3);
            for n in 5..=12 {
                let mut expected = 0;
                for mask in 0u32..(1 << 12) {
                    if mask.count_ones() as usize != n {
                        continue;
                    }
                    let m: Vec<usize> = (0..12).filter(|&v| mask >> v & 1 == 1).collect();
                    if !m.iter().all(|&u| m.iter().filter(|&&w| g.adjacent(u, w)).count() == 2) {
                        continue;
                    }
                    // connected?
                    let mut seen = vec![m[0]];
                    let mut stack = vec![m[0]];
                    while let Some(u) = stack.pop() {
                        for &w in &m {
                            if g.adjacent(u, w) && !seen.contains(&w) {
                                seen.push(w);
                                stack.push(w);
                            }
                        }
                    }
                    if seen.len() == n {
                        expected += 1;
                    }
                }
                assert_eq!(count_ngons(&g, n).unwrap(), expected, "n={n}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn canonical_form_is_symmetry_invariant(
            ids in proptest::sample::subsequence((1u32..40).collect::<Vec<_>>(), 5..12),
            shift in 0usize..12,
            reflect in any::<bool>(),
            perm_seed in any::<u64>(),
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(perm_seed);
            let mut cycle = ids.clone();
            // shuffle so the cycle is not sorted
            for i in (1..cycle.len()).rev() {
                cycle.swap(i, rng.gen_range(0..=i));
            }
            let canon = canonical_cycle(&cycle);
            let mut moved = cycle.clone();
            moved.rotate_left(shift % cycle.len());
            if reflect {
                moved.reverse();
            }
            prop_assert_eq!(canonical_cycle(&moved), canon.clone());
            prop_assert_eq!(canonical_cycle(&canon), canon);
        }

        #[test]
        fn counts_invariant_under_relabeling(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let vc = rng.gen_range(8..=14);
            let g = random_graph(&mut rng, vc, 0.3);
            let mut perm: Vec<usize> = (0..vc).collect();
            for i in (1..vc).rev() {
                perm.swap(i, rng.gen_range(0..=i));
            }
            let h = g.permuted(&perm);
            for n in 5..=vc.min(9) {
                prop_assert_eq!(enumerate_ngons(&g, n).unwrap(), enumerate_ngons(&h, n).unwrap());
            }
        }
    }
}
