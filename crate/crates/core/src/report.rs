//! End-to-end reproduction run: rays → graph → bases → parity → N-gon
//! census → conflict classes → universality scans, with every reference
//! value checked along the way.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::golden::GoldenNum;
use crate::graph::{orthogonality_graph, OrthoGraph};
use crate::ngons::{enumerate_bases, NGon};
use crate::parity::{builtin_sets, enumerate_parity_splits_with, verify_parity_proof_in, ParityReport};
use crate::rays::{build_peres24, RaySet};
use crate::reference::{self as refv, ClassRef};
use crate::scan::{scan_universality_with, MeshSpec, ScanOptions, ScanReport};
use crate::spectra::{
    classify_conflicts, conflict_pentagons, ngon_operators, peak_expectation_on_rays, ConflictCensus,
};

/// A sub-report that either ran or was skipped for a stated reason.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", content = "data", rename_all = "lowercase")]
pub enum Section<T> {
    Done(T),
    Skipped(String),
}

impl<T> Section<T> {
    pub fn done(&self) -> Option<&T> {
        match self {
            Section::Done(t) => Some(t),
            Section::Skipped(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SetPair<T> {
    pub set_a: T,
    pub set_b: T,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogSummary {
    pub name: String,
    pub rays: usize,
    pub edges: usize,
    pub regular_degree: Option<usize>,
    pub bases: usize,
    pub all_squared_norms_four: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParitySection {
    pub set_a: ParityReport,
    pub set_b: ParityReport,
    pub splits: usize,
    pub reference_split_found: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NgonRow {
    pub n: usize,
    pub ngons: u64,
    pub conflicts: u64,
    pub set_a: Option<u64>,
    pub set_b: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeresControl {
    pub rays: usize,
    pub pentagons: usize,
    pub conflict_pentagons: usize,
    pub peak_expectation_on_rays: f64,
    pub peak_ray: u32,
    pub peak_pentagon: Vec<u32>,
    pub scan: ScanReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportBundle {
    pub tool: String,
    pub version: String,
    pub catalog: CatalogSummary,
    pub parity: Section<ParitySection>,
    pub ngon_census: Vec<NgonRow>,
    pub conflict_census: Vec<ConflictCensus>,
    pub pentagon_classes: Section<SetPair<ConflictCensus>>,
    pub heptagon_classes: Section<SetPair<ConflictCensus>>,
    pub scans: Section<SetPair<ScanReport>>,
    pub peres_control: Section<PeresControl>,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<BTreeMap<String, f64>>,
}

impl ReportBundle {
    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Clone, Debug)]
pub struct ReportConfig {
    pub n_min: usize,
    pub n_max: usize,
    pub step_deg: f64,
    pub scan: bool,
    pub refine: bool,
    pub timing: bool,
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig {
            n_min: 5,
            n_max: 15,
            step_deg: 1.0,
            scan: true,
            refine: true,
            timing: false,
        }
    }
}

struct Checks(Vec<Check>);

impl Checks {
    fn push(&mut self, name: impl Into<String>, expected: impl ToString, observed: impl ToString, pass: bool) {
        self.0.push(Check {
            name: name.into(),
            expected: expected.to_string(),
            observed: observed.to_string(),
            pass,
        });
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, name: impl Into<String>, expected: T, observed: T) {
        let pass = expected == observed;
        self.push(name, format!("{expected:?}"), format!("{observed:?}"), pass);
    }
}

/// Compares a census against reference classes: same number of classes,
/// each within [`refv::EIGEN_TOL`], exact counts, example cycle present.
pub fn classes_match(census: &ConflictCensus, want: &[ClassRef]) -> bool {
    census.classes.len() == want.len()
        && want.iter().zip(&census.classes).all(|(w, got)| {
            (got.lambda_max - w.lambda).abs() <= refv::EIGEN_TOL && got.count == w.count
        })
}

fn describe_classes(classes: impl Iterator<Item = (f64, u64)>) -> String {
    classes
        .map(|(l, c)| format!("{l:.4}:{c}"))
        .collect::<Vec<_>>()
        .join(" ")
}

struct Progress<'a> {
    sink: &'a mut dyn Write,
    timing: BTreeMap<String, f64>,
}

impl Progress<'_> {
    fn stage<T>(&mut self, name: &str, f: impl FnOnce() -> Result<T>) -> Result<T> {
        let _ = writeln!(self.sink, "[report] {name}");
        let start = Instant::now();
        let out = f()?;
        self.timing.insert(name.to_string(), start.elapsed().as_secs_f64());
        Ok(out)
    }
}

/// Runs the pipeline. Reference checks apply only when `builtin` marks the
/// catalog as the built-in 600-cell; progress lines go to `progress`.
pub fn build_report(
    rs: &RaySet,
    builtin: bool,
    cfg: &ReportConfig,
    progress: &mut dyn Write,
) -> Result<ReportBundle> {
    let mut p = Progress {
        sink: progress,
        timing: BTreeMap::new(),
    };
    let mut checks = Checks(Vec::new());

    let g = p.stage("orthogonality graph", || Ok(orthogonality_graph(rs)))?;
    let bases = enumerate_bases(&g);
    let four = GoldenNum::integer(4);
    let catalog = CatalogSummary {
        name: rs.name().to_string(),
        rays: rs.len(),
        edges: g.edge_count(),
        regular_degree: g.regular_degree(),
        bases: bases.len(),
        all_squared_norms_four: rs.rays().iter().all(|r| r.norm_squared() == four),
    };
    if builtin {
        checks.eq("rays: catalog size", 60, rs.len());
        checks.eq("rays: all squared norms equal 4", true, catalog.all_squared_norms_four);
        checks.eq("graph: regular degree", Some(refv::GRAPH_DEGREE), catalog.regular_degree);
        checks.eq("bases: total", refv::BASES, bases.len());
    }

    let sets = builtin_sets();
    let parity = if builtin {
        p.stage("parity proofs", || {
            let set_a = verify_parity_proof_in(&g, &sets.set_a)?;
            let set_b = verify_parity_proof_in(&g, &sets.set_b)?;
            let splits = enumerate_parity_splits_with(g.labels(), &bases);
            let reference_split_found = splits
                .iter()
                .any(|s| s.first.ids == sets.set_a && s.second.ids == sets.set_b);
            Ok(ParitySection {
                set_a,
                set_b,
                splits: splits.len(),
                reference_split_found,
            })
        })
        .map(Section::Done)?
    } else {
        Section::Skipped("sets A and B are defined on the built-in catalog only".into())
    };
    if let Some(ps) = parity.done() {
        for (label, rep, want) in [("A", &ps.set_a, &sets.bases_a), ("B", &ps.set_b, &sets.bases_b)] {
            checks.eq(format!("parity: set {label} is a parity proof"), true, rep.parity_proof);
            checks.eq(format!("parity: set {label} bases"), 15, rep.bases.len());
            let mut want = want.clone();
            want.sort();
            checks.eq(format!("parity: set {label} bases equal the listed rows"), true, rep.bases == want);
        }
        checks.eq("parity: unordered splits", refv::PARITY_SPLITS, ps.splits);
        checks.eq("parity: reference split among splits", true, ps.reference_split_found);
    }

    let (ga, gb) = if builtin {
        (
            Some(g.induced_subgraph(&sets.set_a)?),
            Some(g.induced_subgraph(&sets.set_b)?),
        )
    } else {
        (None, None)
    };

    let mut ngon_census = Vec::new();
    let mut conflict_census = Vec::new();
    let mut set_census: BTreeMap<usize, SetPair<ConflictCensus>> = BTreeMap::new();
    for n in cfg.n_min.max(5)..=cfg.n_max {
        let full = p.stage(&format!("census n={n}"), || classify_conflicts(rs, &g, n, None))?;
        let per_set = match (&ga, &gb) {
            (Some(ga), Some(gb)) => {
                let mut a = classify_conflicts(rs, ga, n, None)?;
                let mut b = classify_conflicts(rs, gb, n, None)?;
                a.subset = "A".into();
                b.subset = "B".into();
                Some(SetPair { set_a: a, set_b: b })
            }
            _ => None,
        };
        let row = NgonRow {
            n,
            ngons: full.total_ngons,
            conflicts: full.total_conflicts,
            set_a: per_set.as_ref().map(|s| s.set_a.total_ngons),
            set_b: per_set.as_ref().map(|s| s.set_b.total_ngons),
        };
        if builtin {
            if let Some((_, total, conflicts, in_sets)) = refv::ngon_row(n) {
                checks.eq(format!("ngons: n={n} total"), total, row.ngons);
                checks.eq(format!("ngons: n={n} conflicts"), conflicts, row.conflicts);
                checks.eq(format!("ngons: n={n} in set A"), Some(in_sets), row.set_a);
                checks.eq(format!("ngons: n={n} in set B"), Some(in_sets), row.set_b);
            }
            if n == 5 {
                let max = full.max_lambda().unwrap_or(f64::NAN);
                let pass = (max - refv::MAX_PENTAGON_EIGENVALUE).abs() <= refv::EIGEN_TOL
                    && max < refv::QUTRIT_PENTAGON_MAX;
                checks.push(
                    "spectra: largest pentagon eigenvalue",
                    format!("{} ± {}", refv::MAX_PENTAGON_EIGENVALUE, refv::EIGEN_TOL),
                    format!("{max:.6}"),
                    pass,
                );
            }
        }
        ngon_census.push(row);
        conflict_census.push(full);
        if let Some(s) = per_set {
            set_census.insert(n, s);
        }
    }

    let class_section = |n: usize, want: (&[ClassRef], &[ClassRef]), checks: &mut Checks| {
        if !builtin {
            return Section::Skipped("sets A and B are defined on the built-in catalog only".into());
        }
        let Some(pair) = set_census.get(&n) else {
            return Section::Skipped(format!("n={n} outside the requested range"));
        };
        for (label, census, want) in [("A", &pair.set_a, want.0), ("B", &pair.set_b, want.1)] {
            let observed = describe_classes(census.classes.iter().map(|c| (c.lambda_max, c.count)));
            let expected = describe_classes(want.iter().map(|w| (w.lambda, w.count)));
            checks.push(
                format!("classes: n={n} set {label}"),
                expected,
                observed,
                classes_match(census, want),
            );
        }
        Section::Done(pair.clone())
    };
    let pentagon_classes = class_section(5, (&refv::PENTAGONS_A, &refv::PENTAGONS_B), &mut checks);
    let heptagon_classes = class_section(7, (&refv::HEPTAGONS_A, &refv::HEPTAGONS_B), &mut checks);

    if builtin {
        for (n, classes) in [
            (5, refv::PENTAGONS_A.iter().chain(&refv::PENTAGONS_B).collect::<Vec<_>>()),
            (7, refv::HEPTAGONS_A.iter().chain(&refv::HEPTAGONS_B).collect()),
        ] {
            if n < cfg.n_min || n > cfg.n_max {
                continue;
            }
            for c in classes {
                let op = crate::spectra::ngon_operator(rs, &NGon::new(c.example))?;
                let lambda = crate::spectra::max_eigen(&op)?.max_value();
                let chordless = crate::ngons::is_chordless_cycle(&g, c.example);
                checks.push(
                    format!("classes: example {:?}", c.example),
                    format!("{} ± {}", c.lambda, refv::EIGEN_TOL),
                    format!("{lambda:.6}"),
                    chordless && (lambda - c.lambda).abs() <= refv::EIGEN_TOL,
                );
            }
        }
    }

    let scans = if !cfg.scan {
        Section::Skipped("scan disabled".into())
    } else if let (Some(ga), Some(gb)) = (&ga, &gb) {
        let mesh = MeshSpec::uniform_degrees(cfg.step_deg)?;
        let mut run = |label: &str, sub: &OrthoGraph| {
            p.stage(&format!("scan set {label}"), || {
                let family = conflict_pentagons(rs, sub)?;
                let opts = ScanOptions {
                    label: label.to_string(),
                    refine: cfg.refine,
                    record_time: cfg.timing,
                    ..ScanOptions::default()
                };
                scan_universality_with(&family, &mesh, &opts)
            })
        };
        let a = run("A", ga)?;
        let b = run("B", gb)?;
        for (label, rep, want) in [("A", &a, refv::SCAN_MIN_A), ("B", &b, refv::SCAN_MIN_B)] {
            let pass = rep.mesh_minimum > 2.0
                && rep.refined_minimum > 2.0
                && (rep.refined_minimum - want).abs() <= refv::SCAN_TOL;
            checks.push(
                format!("scan: set {label} minimum"),
                format!("{want} ± {} and > 2", refv::SCAN_TOL),
                format!("mesh {:.6}, refined {:.6}", rep.mesh_minimum, rep.refined_minimum),
                pass,
            );
        }
        Section::Done(SetPair { set_a: a, set_b: b })
    } else {
        Section::Skipped("sets A and B are defined on the built-in catalog only".into())
    };

    let peres_control = if builtin {
        let control = p.stage("peres control", || {
            let peres = build_peres24();
            let pg = orthogonality_graph(&peres);
            let pentagons = ngon_operators(&peres, &pg, 5, f64::NEG_INFINITY)?;
            let conflicts = pentagons
                .iter()
                .filter(|m| {
                    crate::spectra::max_eigen(m).is_ok_and(|s| s.max_value() > 2.0 + crate::spectra::CONFLICT_EPSILON)
                })
                .count();
            let (peak, ray, idx) = peak_expectation_on_rays(&peres, &pentagons)?;
            let mesh = MeshSpec::uniform_degrees(cfg.step_deg.max(2.0))?;
            let scan = scan_universality_with(
                &pentagons,
                &mesh,
                &ScanOptions {
                    label: "peres-24".into(),
                    refine: cfg.refine,
                    record_time: cfg.timing,
                    ..ScanOptions::default()
                },
            )?;
            Ok(PeresControl {
                rays: peres.len(),
                pentagons: pentagons.len(),
                conflict_pentagons: conflicts,
                peak_expectation_on_rays: peak,
                peak_ray: ray,
                peak_pentagon: pentagons[idx].provenance().map(|g| g.cycle().to_vec()).unwrap_or_default(),
                scan,
            })
        })?;
        checks.push(
            "peres: expectation at catalog rays",
            format!("<= 2 + {}", refv::PERES_TOL),
            format!("{:.12}", control.peak_expectation_on_rays),
            control.peak_expectation_on_rays <= 2.0 + refv::PERES_TOL,
        );
        checks.push(
            "peres: universality fails",
            "scan minimum <= 2",
            format!("{:.6}", control.scan.refined_minimum),
            control.scan.refined_minimum <= 2.0 + refv::PERES_TOL,
        );
        Section::Done(control)
    } else {
        Section::Skipped("control runs with the built-in catalog only".into())
    };

    Ok(ReportBundle {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        catalog,
        parity,
        ngon_census,
        conflict_census,
        pentagon_classes,
        heptagon_classes,
        scans,
        peres_control,
        checks: checks.0,
        timing: cfg.timing.then_some(p.timing),
    })
}

fn render_classes(out: &mut String, title: &str, pair: &Section<SetPair<ConflictCensus>>) {
    let _ = writeln!(out, "\n{title}");
    match pair {
        Section::Skipped(reason) => {
            let _ = writeln!(out, "  skipped: {reason}");
        }
        Section::Done(pair) => {
            for (label, census) in [("A", &pair.set_a), ("B", &pair.set_b)] {
                let _ = writeln!(out, "  set {label}: {:>12} {:>7}  example", "max eigval", "count");
                for c in &census.classes {
                    let _ = writeln!(
                        out,
                        "         {:>12.4} {:>7}  {}",
                        c.lambda_max,
                        c.count,
                        join_ids(&c.example_cycle)
                    );
                }
            }
        }
    }
}

fn join_ids(ids: &[u32]) -> String {
    ids.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ")
}

/// Human-readable rendering laid out like the classic tables.
pub fn render_text(b: &ReportBundle) -> String {
    let mut out = String::new();
    let c = &b.catalog;
    let _ = writeln!(out, "{} {}, catalog {}", b.tool, b.version, c.name);
    let _ = writeln!(
        out,
        "rays {}  edges {}  degree {}  bases {}",
        c.rays,
        c.edges,
        c.regular_degree.map_or("irregular".to_string(), |d| d.to_string()),
        c.bases
    );

    let _ = writeln!(out, "\nParity proofs");
    match &b.parity {
        Section::Skipped(r) => {
            let _ = writeln!(out, "  skipped: {r}");
        }
        Section::Done(p) => {
            for (label, rep) in [("A", &p.set_a), ("B", &p.set_b)] {
                let _ = writeln!(
                    out,
                    "  set {label}: {} bases, parity proof: {}",
                    rep.bases.len(),
                    rep.parity_proof
                );
            }
            let _ = writeln!(out, "  splits into two parity-proof halves: {}", p.splits);
        }
    }

    let _ = writeln!(out, "\nN-gons");
    let _ = writeln!(out, "  {:>3} {:>10} {:>10} {:>8} {:>8}", "N", "N-gons", "conflict", "set A", "set B");
    for r in &b.ngon_census {
        let opt = |x: Option<u64>| x.map_or("-".to_string(), |v| v.to_string());
        let _ = writeln!(
            out,
            "  {:>3} {:>10} {:>10} {:>8} {:>8}",
            r.n,
            r.ngons,
            r.conflicts,
            opt(r.set_a),
            opt(r.set_b)
        );
    }

    render_classes(&mut out, "Conflict pentagons", &b.pentagon_classes);
    render_classes(&mut out, "Conflict heptagons", &b.heptagon_classes);

    let _ = writeln!(out, "\nUniversality scan");
    match &b.scans {
        Section::Skipped(r) => {
            let _ = writeln!(out, "  skipped: {r}");
        }
        Section::Done(pair) => {
            for s in [&pair.set_a, &pair.set_b] {
                let _ = writeln!(
                    out,
                    "  set {}: mesh min {:.6}, refined min {:.6} ({} operators, {} nodes)",
                    s.family, s.mesh_minimum, s.refined_minimum, s.operators, s.nodes
                );
            }
        }
    }
    if let Section::Done(pc) = &b.peres_control {
        let _ = writeln!(
            out,
            "\nPeres-24 control: {} pentagons ({} conflict), peak ⟨r|Σ|r⟩ at catalog rays {:.6}, scan minimum {:.6}",
            pc.pentagons, pc.conflict_pentagons, pc.peak_expectation_on_rays, pc.scan.refined_minimum
        );
    }

    let _ = writeln!(out, "\nChecks");
    for ch in &b.checks {
        let _ = writeln!(
            out,
            "  [{}] {}: expected {}, observed {}",
            if ch.pass { "PASS" } else { "FAIL" },
            ch.name,
            ch.expected,
            ch.observed
        );
    }
    out
}
