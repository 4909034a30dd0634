//! Ray catalogs: the 60 rays of the 600-cell, the 24 Peres rays, and the
//! text format used to load external catalogs.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::golden::GoldenNum;

pub type RayId = u32;

/// A real 4-vector over the golden ring, identified up to nonzero scale.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ray {
    pub id: RayId,
    pub components: [GoldenNum; 4],
}

impl Ray {
    pub fn new(id: RayId, components: [GoldenNum; 4]) -> Self {
        Ray { id, components }
    }

    pub fn norm_squared(&self) -> GoldenNum {
        inner_product(self, self)
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(GoldenNum::is_zero)
    }

    /// True iff `self` and `other` span the same line (all 2×2 minors vanish).
    pub fn is_proportional(&self, other: &Ray) -> bool {
        let u = &self.components;
        let v = &other.components;
        (0..4).all(|i| (i + 1..4).all(|j| (&(&u[i] * &v[j]) - &(&u[j] * &v[i])).is_zero()))
    }

    pub fn to_f64(&self) -> [f64; 4] {
        let c = &self.components;
        [c[0].to_f64(), c[1].to_f64(), c[2].to_f64(), c[3].to_f64()]
    }
}

/// Exact Euclidean inner product.
pub fn inner_product(u: &Ray, v: &Ray) -> GoldenNum {
    let mut acc = GoldenNum::zero();
    for (a, b) in u.components.iter().zip(&v.components) {
        acc += &(a * b);
    }
    acc
}

/// An ordered catalog of pairwise non-proportional rays with unique ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RaySet {
    name: String,
    rays: Vec<Ray>,
    index: HashMap<RayId, usize>,
}

impl RaySet {
    /// Validates ids, rejects zero vectors and proportional pairs.
    pub fn new(name: impl Into<String>, rays: Vec<Ray>) -> Result<Self> {
        let mut index = HashMap::with_capacity(rays.len());
        for (i, ray) in rays.iter().enumerate() {
            if index.insert(ray.id, i).is_some() {
                return Err(Error::DuplicateId(ray.id));
            }
            if ray.is_zero() {
                return Err(Error::ZeroRay(ray.id));
            }
        }
        for (i, u) in rays.iter().enumerate() {
            for v in &rays[i + 1..] {
                if u.is_proportional(v) {
                    return Err(Error::ProportionalRays {
                        first: u.id,
                        second: v.id,
                    });
                }
            }
        }
        Ok(RaySet {
            name: name.into(),
            rays,
            index,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn ids(&self) -> Vec<RayId> {
        self.rays.iter().map(|r| r.id).collect()
    }

    pub fn get(&self, id: RayId) -> Option<&Ray> {
        self.index.get(&id).map(|&i| &self.rays[i])
    }

    pub fn ray(&self, id: RayId) -> Result<&Ray> {
        self.get(id).ok_or(Error::UnknownId(id))
    }

    pub fn position(&self, id: RayId) -> Option<usize> {
        self.index.get(&id).copied()
    }

    /// Catalog restricted to `ids`, preserving catalog order.
    pub fn subset(&self, ids: &[RayId]) -> Result<RaySet> {
        let wanted: HashSet<RayId> = ids.iter().copied().collect();
        for &id in &wanted {
            self.ray(id)?;
        }
        let rays = self
            .rays
            .iter()
            .filter(|r| wanted.contains(&r.id))
            .cloned()
            .collect();
        RaySet::new(self.name.clone(), rays)
    }

    /// Serializes to the ray-file format accepted by [`parse_rayset`].
    pub fn to_ray_file(&self) -> String {
        let mut out = format!("# catalog: {}\n", self.name);
        for ray in &self.rays {
            out.push_str(&format_ray(ray));
            out.push('\n');
        }
        out
    }
}

/// One ray-file line, e.g. `13: k 0 -t -1`.
pub fn format_ray(ray: &Ray) -> String {
    let mut line = format!("{}:", ray.id);
    for c in &ray.components {
        let _ = write!(line, " {}", c);
    }
    line
}

/// The 600-cell rays in ray-file form; `t` = τ, `k` = κ = τ − 1.
pub const CELL600_TABLE: &str = "\
1: 2 0 0 0
2: 0 2 0 0
3: 0 0 2 0
4: 0 0 0 2
5: 1 1 1 1
6: 1 1 -1 -1
7: 1 -1 1 -1
8: 1 -1 -1 1
9: 1 -1 -1 -1
10: 1 -1 1 1
11: 1 1 -1 1
12: 1 1 1 -1
13: k 0 -t -1
14: 0 k 1 -t
15: t -1 k 0
16: 1 t 0 k
17: t k 0 -1
18: 1 0 k t
19: k -t -1 0
20: 0 1 -t k
21: 1 k t 0
22: t 0 -1 k
23: 0 t -k -1
24: k -1 0 -t
25: t 0 1 k
26: 0 t -k 1
27: 1 -k -t 0
28: k 1 0 -t
29: 0 k 1 t
30: t 1 -k 0
31: k 0 t -1
32: 1 -t 0 k
33: t -k 0 -1
34: 0 1 -t -k
35: 1 0 -k t
36: k t 1 0
37: t 0 -1 -k
38: 0 t k -1
39: 1 -k t 0
40: k 1 0 t
41: t 1 k 0
42: 0 k -1 -t
43: 1 -t 0 -k
44: k 0 -t 1
45: 0 1 t k
46: t -k 0 1
47: k t -1 0
48: 1 0 k -t
49: k 0 t 1
50: 0 k -1 t
51: t -1 -k 0
52: 1 t 0 -k
53: 1 0 -k -t
54: t k 0 1
55: 0 1 t -k
56: k -t 1 0
57: t 0 1 -k
58: 1 k -t 0
59: k -1 0 t
60: 0 t k 1
";

pub const CELL600_NAME: &str = "600-cell";
pub const PERES24_NAME: &str = "peres-24";

/// The 60 rays of the 600-cell (one per antipodal vertex pair), ids 1..=60.
pub fn build_600cell_rays() -> RaySet {
    parse_rayset_named(CELL600_TABLE, CELL600_NAME).expect("built-in table is well formed")
}

/// The 24 Peres rays: the 4 coordinate axes, the 12 rays `e_i ± e_j` and the
/// 8 rays `(1, ±1, ±1, ±1)`, each taken once modulo sign.
///
/// Axis rays are scaled to `(2, 0, 0, 0)` so that they and the
/// `(1, ±1, ±1, ±1)` family have squared norm 4; the `e_i ± e_j` rays keep
/// squared norm 2 since `√2` is not in the golden field.
pub fn build_peres24() -> RaySet {
    let mut patterns: Vec<[i64; 4]> = Vec::new();
    for support in [1usize, 2, 4] {
        let mut found = Vec::new();
        for code in 0..81 {
            let mut v = [0i64; 4];
            let mut c = code;
            for x in &mut v {
                *x = c % 3 - 1;
                c /= 3;
            }
            let nonzero = v.iter().filter(|&&x| x != 0).count();
            let first = v.iter().find(|&&x| x != 0).copied().unwrap_or(0);
            if nonzero == support && first > 0 {
                found.push(v);
            }
        }
        found.sort_by(|a, b| b.cmp(a));
        patterns.extend(found);
    }
    let rays = patterns
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            let scale = if v.iter().filter(|&&x| x != 0).count() == 1 { 2 } else { 1 };
            let components = v.map(|x| GoldenNum::integer(x * scale));
            Ray::new(i as RayId + 1, components)
        })
        .collect();
    RaySet::new(PERES24_NAME, rays).expect("Peres rays are pairwise independent")
}

/// Parses the ray-file format: one `ID: c1 c2 c3 c4` per line, `#` starts a
/// comment, blank lines are skipped. A leading `# catalog: NAME` comment
/// names the set.
pub fn parse_rayset(text: &str) -> Result<RaySet> {
    parse_rayset_named(text, "custom")
}

pub fn parse_rayset_named(text: &str, default_name: &str) -> Result<RaySet> {
    let mut name = default_name.to_string();
    let mut rays = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let (content, comment) = match raw.find('#') {
            Some(p) => (&raw[..p], Some(&raw[p + 1..])),
            None => (raw, None),
        };
        if let Some(label) = comment.and_then(|c| c.trim().strip_prefix("catalog:")) {
            if rays.is_empty() && content.trim().is_empty() {
                name = label.trim().to_string();
            }
        }
        if content.trim().is_empty() {
            continue;
        }
        let err = |column: usize, message: String| Error::Parse {
            line: line_no,
            column,
            message,
        };
        let colon = content
            .find(':')
            .ok_or_else(|| err(1, "expected `ID:` prefix".into()))?;
        let id_text = content[..colon].trim();
        let id: RayId = id_text.parse().map_err(|_| {
            let col = content.find(|c: char| !c.is_whitespace()).unwrap_or(0) + 1;
            err(col, format!("invalid ray id {:?}", id_text))
        })?;

        let mut components = Vec::with_capacity(4);
        let rest = &content[colon + 1..];
        let mut offset = colon + 1;
        for token in rest.split_whitespace() {
            let pos = content[offset..].find(token).map_or(offset, |p| p + offset);
            offset = pos + token.len();
            let value: GoldenNum = token
                .parse()
                .map_err(|_| err(pos + 1, format!("invalid component {:?}", token)))?;
            components.push(value);
        }
        let arity = components.len();
        let components: [GoldenNum; 4] = components.try_into().map_err(|_| {
            err(
                colon + 2,
                format!("ray {} has {} components, expected 4", id, arity),
            )
        })?;
        rays.push(Ray::new(id, components));
    }
    RaySet::new(name, rays)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_rays() {
        let rs = build_600cell_rays();
        assert_eq!(rs.len(), 60);
        assert_eq!(rs.ids(), (1..=60).collect::<Vec<_>>());
        let r1 = rs.ray(1).unwrap();
        assert_eq!(r1.components, [2, 0, 0, 0].map(GoldenNum::integer));
        let r13 = rs.ray(13).unwrap();
        let expected = [
            GoldenNum::kappa(),
            GoldenNum::zero(),
            -GoldenNum::tau(),
            GoldenNum::integer(-1),
        ];
        assert_eq!(r13.components, expected);
        for r in rs.rays() {
            assert_eq!(r.norm_squared(), GoldenNum::integer(4), "ray {}", r.id);
        }
    }

    #[test]
    fn inner_product_examples() {
        let rs = build_600cell_rays();
        let ip = |a, b| inner_product(rs.ray(a).unwrap(), rs.ray(b).unwrap());
        assert!(ip(1, 2).is_zero());
        assert_eq!(ip(1, 13), GoldenNum::from_ints(-2, 2));
        assert_eq!(ip(13, 13), GoldenNum::integer(4));
    }

    #[test]
    fn peres_catalog() {
        let p = build_peres24();
        assert_eq!(p.len(), 24);
        assert!(p
            .rays()
            .iter()
            .any(|r| r.components == [2, 0, 0, 0].map(GoldenNum::integer)));
        let norms: Vec<i64> = p
            .rays()
            .iter()
            .map(|r| r.norm_squared().to_f64() as i64)
            .collect();
        assert_eq!(norms.iter().filter(|&&n| n == 4).count(), 12);
        assert_eq!(norms.iter().filter(|&&n| n == 2).count(), 12);
        for r in p.rays() {
            assert!(r.norm_squared().tau_part().is_zero());
        }
    }

    #[test]
    fn roundtrip_builtin_catalogs() {
        for rs in [build_600cell_rays(), build_peres24()] {
            let text = rs.to_ray_file();
            assert_eq!(parse_rayset(&text).unwrap(), rs);
        }
    }

    #[test]
    fn printed_table_matches_source() {
        let rs = build_600cell_rays();
        let lines: Vec<String> = rs.rays().iter().map(format_ray).collect();
        let source: Vec<&str> = CELL600_TABLE.lines().collect();
        assert_eq!(lines, source);
    }

    #[test]
    fn parse_arity_error() {
        let err = parse_rayset("1: 2 0 0 0\n5: 1 1 1\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_rayset("1: 1 1 1 1 1").is_err());
    }

    #[test]
    fn parse_bad_token_reports_column() {
        let err = parse_rayset("# header\n7: 1 q 0 0\n").unwrap_err();
        match err {
            Error::Parse { line, column, .. } => {
                assert_eq!(line, 2);
                assert_eq!(column, 6);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_rejects_antipodes_and_zero() {
        let err = parse_rayset("1: 1 t 0 k\n2: -1 -t 0 -k\n").unwrap_err();
        assert!(matches!(
            err,
            Error::ProportionalRays {
                first: 1,
                second: 2
            }
        ));
        let err = parse_rayset("3: 0 0 0 0\n").unwrap_err();
        assert!(matches!(err, Error::ZeroRay(3)));
        let err = parse_rayset("3: 1 0 0 0\n3: 0 1 0 0\n").unwrap_err();
        assert!(matches!(err, Error::DuplicateId(3)));
    }

    #[test]
    fn parse_comments_and_name() {
        let rs = parse_rayset("# catalog: demo\n\n1: 2 0 0 0 # axis\n2: 0 2-t 0 0\n").unwrap();
        assert_eq!(rs.name(), "demo");
        assert_eq!(rs.len(), 2);
        assert_eq!(rs.ray(2).unwrap().components[1], GoldenNum::from_ints(2, -1));
    }
}
