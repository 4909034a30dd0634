//! Command-line front end. `run` is the whole program; the binary only
//! forwards process arguments and the exit status.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{orthogonality_graph, OrthoGraph};
use crate::ngons::{count_ngons, enumerate_bases, write_ngons, MIN_NGON};
use crate::parity::{enumerate_parity_splits_with, named_subset, verify_parity_proof_in, ParityReport};
use crate::rays::{build_600cell_rays, format_ray, parse_rayset_named, RayId, RaySet};
use crate::report::{build_report, render_text, ReportConfig};
use crate::scan::{scan_universality_with, MeshSpec, ScanOptions, ScanReport};
use crate::spectra::{classify_conflicts, conflict_pentagons, ConflictCensus};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "ks600", version, about = "600-cell ray census, spectra, parity proofs and universality scans")]
struct Cli {
    /// Ray file to use instead of the built-in 600-cell catalog.
    #[arg(long, global = true, value_name = "PATH")]
    rays: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,

    /// Worker threads; 0 picks one per core.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Accepted for compatibility; every algorithm here is deterministic.
    #[arg(long, global = true)]
    seedless: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Summarize the catalog, or list every ray.
    Rays {
        #[arg(long)]
        list: bool,
    },
    /// Count chordless N-cycles in the orthogonality graph.
    Ngons(NgonArgs),
    /// Classify N-gons by the largest eigenvalue of their projector sum.
    Census {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        subset: Option<String>,
    },
    /// Verify a parity proof or enumerate splits into two proofs.
    Parity(ParityArgs),
    /// Minimize the worst-case pentagon expectation over the unit sphere.
    Scan {
        /// A, B, or `all` for every conflict pentagon of the catalog.
        #[arg(long)]
        set: String,
        #[arg(long = "step-deg", default_value_t = 2.0)]
        step_deg: f64,
        #[arg(long)]
        refine: bool,
    },
    /// Run the full pipeline and check it against the reference values.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
struct NgonArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    subset: Option<String>,
    /// Write one canonical cycle per line to this file.
    #[arg(long, value_name = "PATH")]
    emit: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct ParityMode {
    #[arg(long, value_name = "A|B|IDS")]
    verify: Option<String>,
    #[arg(long)]
    splits: bool,
}

#[derive(Debug, Args)]
struct ParityArgs {
    #[command(flatten)]
    mode: ParityMode,
    /// With --splits, print every split.
    #[arg(long, requires = "splits")]
    list: bool,
}

#[derive(Debug, Args)]
struct ReportArgs {
    /// N from 5 to 15 with 1-degree scans.
    #[arg(long)]
    full: bool,
    #[arg(long = "n-min", default_value_t = 5)]
    n_min: usize,
    #[arg(long = "n-max", default_value_t = 15)]
    n_max: usize,
    #[arg(long = "step-deg", default_value_t = 1.0)]
    step_deg: f64,
    #[arg(long = "no-scan")]
    no_scan: bool,
    #[arg(long = "no-refine")]
    no_refine: bool,
    /// Include per-stage wall-clock times (output is then not byte-stable).
    #[arg(long)]
    timing: bool,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

struct Ctx {
    rays: RaySet,
    builtin: bool,
    format: Format,
}

impl Ctx {
    fn subset(&self, spec: Option<&str>) -> Result<(Option<Vec<RayId>>, String)> {
        let Some(spec) = spec else {
            return Ok((None, "all".into()));
        };
        let ids = named_subset(spec).ok_or_else(|| Error::Usage(format!("bad subset {spec:?}")))?;
        let label = match spec.trim() {
            "A" | "a" => "A".to_string(),
            "B" | "b" => "B".to_string(),
            _ => "custom".to_string(),
        };
        if label != "custom" && !self.builtin {
            return Err(Error::Usage("sets A and B need the built-in catalog".into()));
        }
        Ok((Some(ids), label))
    }

    fn graph(&self, subset: Option<&[RayId]>) -> Result<OrthoGraph> {
        let g = orthogonality_graph(&self.rays);
        match subset {
            Some(ids) => g.induced_subgraph(ids),
            None => Ok(g),
        }
    }
}

fn load_rays(path: Option<&Path>) -> Result<(RaySet, bool)> {
    match path {
        None => Ok((build_600cell_rays(), true)),
        Some(p) => {
            let text = fs::read_to_string(p)?;
            let stem = p.file_stem().map_or("custom".into(), |s| s.to_string_lossy().into_owned());
            Ok((parse_rayset_named(&text, &stem)?, false))
        }
    }
}

fn json_line<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn csv_rows(out: &mut dyn Write, header: &[&str], rows: Vec<Vec<String>>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

fn join_ids(ids: &[RayId], sep: &str) -> String {
    ids.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(sep)
}

#[derive(Serialize)]
struct RayEntry {
    id: RayId,
    components: Vec<String>,
}

#[derive(Serialize)]
struct CatalogInfo {
    name: String,
    rays: usize,
    edges: usize,
    regular_degree: Option<usize>,
    bases: usize,
}

fn cmd_rays(ctx: &Ctx, list: bool, out: &mut dyn Write) -> Result<i32> {
    let rs = &ctx.rays;
    if list {
        match ctx.format {
            Format::Text => {
                for r in rs.rays() {
                    writeln!(out, "{}", format_ray(r))?;
                }
            }
            Format::Json => {
                let entries: Vec<RayEntry> = rs
                    .rays()
                    .iter()
                    .map(|r| RayEntry {
                        id: r.id,
                        components: r.components.iter().map(|c| c.to_string()).collect(),
                    })
                    .collect();
                json_line(out, &entries)?;
            }
            Format::Csv => {
                let rows = rs
                    .rays()
                    .iter()
                    .map(|r| {
                        std::iter::once(r.id.to_string())
                            .chain(r.components.iter().map(|c| c.to_string()))
                            .collect()
                    })
                    .collect();
                csv_rows(out, &["id", "c1", "c2", "c3", "c4"], rows)?;
            }
        }
        return Ok(EXIT_OK);
    }
    let g = orthogonality_graph(rs);
    let info = CatalogInfo {
        name: rs.name().to_string(),
        rays: rs.len(),
        edges: g.edge_count(),
        regular_degree: g.regular_degree(),
        bases: enumerate_bases(&g).len(),
    };
    match ctx.format {
        Format::Text => writeln!(
            out,
            "catalog {}: {} rays, {} orthogonal pairs, degree {}, {} bases",
            info.name,
            info.rays,
            info.edges,
            info.regular_degree.map_or("irregular".into(), |d| d.to_string()),
            info.bases
        )?,
        Format::Json => json_line(out, &info)?,
        Format::Csv => csv_rows(
            out,
            &["name", "rays", "edges", "regular_degree", "bases"],
            vec![vec![
                info.name.clone(),
                info.rays.to_string(),
                info.edges.to_string(),
                info.regular_degree.map_or(String::new(), |d| d.to_string()),
                info.bases.to_string(),
            ]],
        )?,
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct NgonSummary {
    n: usize,
    subset: String,
    count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    emitted: Option<String>,
}

fn cmd_ngons(ctx: &Ctx, args: &NgonArgs, out: &mut dyn Write) -> Result<i32> {
    if args.n < MIN_NGON {
        return Err(Error::Usage(format!("--n must be at least {MIN_NGON}")));
    }
    let (ids, subset) = ctx.subset(args.subset.as_deref())?;
    let g = ctx.graph(ids.as_deref())?;
    let count = match &args.emit {
        Some(path) => {
            let mut w = std::io::BufWriter::new(fs::File::create(path)?);
            let c = write_ngons(&g, args.n, &mut w)?;
            w.flush()?;
            c
        }
        None => count_ngons(&g, args.n)?,
    };
    let summary = NgonSummary {
        n: args.n,
        subset,
        count,
        emitted: args.emit.as_ref().map(|p| p.display().to_string()),
    };
    match ctx.format {
        Format::Text => writeln!(out, "{}-gons in {}: {}", summary.n, summary.subset, summary.count)?,
        Format::Json => json_line(out, &summary)?,
        Format::Csv => csv_rows(
            out,
            &["n", "subset", "count"],
            vec![vec![summary.n.to_string(), summary.subset.clone(), count.to_string()]],
        )?,
    }
    Ok(EXIT_OK)
}

fn write_census(ctx: &Ctx, census: &ConflictCensus, out: &mut dyn Write) -> Result<()> {
    match ctx.format {
        Format::Text => {
            writeln!(
                out,
                "{}-gons in {}: {} total, {} conflict",
                census.n, census.subset, census.total_ngons, census.total_conflicts
            )?;
            writeln!(out, "{:>12} {:>8}  example", "max eigval", "count")?;
            for c in &census.classes {
                writeln!(out, "{:>12.4} {:>8}  {}", c.lambda_max, c.count, join_ids(&c.example_cycle, " "))?;
            }
            if !census.nonconflict_classes.is_empty() {
                writeln!(out, "within the classical bound:")?;
                for c in &census.nonconflict_classes {
                    writeln!(out, "{:>12.4} {:>8}  {}", c.lambda_max, c.count, join_ids(&c.example_cycle, " "))?;
                }
            }
        }
        Format::Json => json_line(out, census)?,
        Format::Csv => {
            let rows = census
                .classes
                .iter()
                .map(|c| (c, true))
                .chain(census.nonconflict_classes.iter().map(|c| (c, false)))
                .map(|(c, conflict)| {
                    vec![
                        census.n.to_string(),
                        census.subset.clone(),
                        format!("{:.6}", c.lambda_max),
                        c.count.to_string(),
                        conflict.to_string(),
                        join_ids(&c.example_cycle, " "),
                    ]
                })
                .collect();
            csv_rows(out, &["n", "subset", "lambda_max", "count", "conflict", "example_cycle"], rows)?;
        }
    }
    Ok(())
}

fn cmd_census(ctx: &Ctx, n: usize, subset: Option<&str>, out: &mut dyn Write) -> Result<i32> {
    if n < MIN_NGON {
        return Err(Error::Usage(format!("--n must be at least {MIN_NGON}")));
    }
    let (ids, label) = ctx.subset(subset)?;
    let g = ctx.graph(None)?;
    let mut census = classify_conflicts(&ctx.rays, &g, n, ids.as_deref())?;
    census.subset = label;
    write_census(ctx, &census, out)?;
    Ok(EXIT_OK)
}

fn write_parity_report(ctx: &Ctx, rep: &ParityReport, out: &mut dyn Write) -> Result<()> {
    match ctx.format {
        Format::Text => {
            writeln!(out, "rays ({}): {}", rep.ids.len(), join_ids(&rep.ids, " "))?;
            writeln!(out, "bases inside: {}", rep.bases.len())?;
            for b in &rep.bases {
                writeln!(out, "  {}", join_ids(b.ids(), " "))?;
            }
            let bad: Vec<String> = rep
                .multiplicity
                .iter()
                .filter(|(_, &m)| m != 2)
                .map(|(id, m)| format!("{id}x{m}"))
                .collect();
            if !bad.is_empty() {
                writeln!(out, "rays not in exactly two bases: {}", bad.join(" "))?;
            }
            writeln!(out, "parity proof: {}", if rep.parity_proof { "yes" } else { "no" })?;
        }
        Format::Json => json_line(out, rep)?,
        Format::Csv => {
            let rows = rep.bases.iter().map(|b| b.ids().iter().map(|i| i.to_string()).collect()).collect();
            csv_rows(out, &["r1", "r2", "r3", "r4"], rows)?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct SplitList {
    splits: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    halves: Vec<[Vec<RayId>; 2]>,
}

fn cmd_parity(ctx: &Ctx, args: &ParityArgs, out: &mut dyn Write) -> Result<i32> {
    let g = ctx.graph(None)?;
    if let Some(spec) = &args.mode.verify {
        let (ids, _) = ctx.subset(Some(spec))?;
        let rep = verify_parity_proof_in(&g, ids.as_deref().unwrap_or(&[]))?;
        write_parity_report(ctx, &rep, out)?;
        return Ok(if rep.parity_proof { EXIT_OK } else { EXIT_CHECK_FAILED });
    }
    let bases = enumerate_bases(&g);
    let splits = enumerate_parity_splits_with(g.labels(), &bases);
    let halves: Vec<[Vec<RayId>; 2]> = if args.list {
        splits.iter().map(|s| [s.first.ids.clone(), s.second.ids.clone()]).collect()
    } else {
        Vec::new()
    };
    match ctx.format {
        Format::Text => {
            writeln!(out, "splits into two parity proofs: {}", splits.len())?;
            for [a, b] in &halves {
                writeln!(out, "{} | {}", join_ids(a, " "), join_ids(b, " "))?;
            }
        }
        Format::Json => json_line(out, &SplitList { splits: splits.len(), halves })?,
        Format::Csv => {
            let rows = halves
                .iter()
                .enumerate()
                .map(|(i, [a, b])| vec![i.to_string(), join_ids(a, " "), join_ids(b, " ")])
                .collect();
            csv_rows(out, &["split", "first", "second"], rows)?;
        }
    }
    Ok(EXIT_OK)
}

fn write_scan(ctx: &Ctx, rep: &ScanReport, out: &mut dyn Write) -> Result<()> {
    match ctx.format {
        Format::Text => {
            writeln!(
                out,
                "set {}: {} conflict pentagons, {} mesh nodes",
                rep.family, rep.operators, rep.nodes
            )?;
            let deg = rep.mesh_argmin.map(f64::to_degrees);
            writeln!(
                out,
                "mesh minimum    {:.6} at ({:.2}, {:.2}, {:.2}) deg",
                rep.mesh_minimum, deg[0], deg[1], deg[2]
            )?;
            if rep.refined {
                let deg = rep.refined_argmin.map(f64::to_degrees);
                writeln!(
                    out,
                    "refined minimum {:.6} at ({:.4}, {:.4}, {:.4}) deg, {} evaluations",
                    rep.refined_minimum, deg[0], deg[1], deg[2], rep.refine_evaluations
                )?;
            }
            writeln!(
                out,
                "violates the bound {} everywhere: {}",
                rep.classical_bound,
                if rep.violates_everywhere() { "yes" } else { "no" }
            )?;
        }
        Format::Json => json_line(out, rep)?,
        Format::Csv => csv_rows(
            out,
            &["family", "operators", "nodes", "mesh_minimum", "refined_minimum", "classical_bound"],
            vec![vec![
                rep.family.clone(),
                rep.operators.to_string(),
                rep.nodes.to_string(),
                format!("{:.9}", rep.mesh_minimum),
                format!("{:.9}", rep.refined_minimum),
                rep.classical_bound.to_string(),
            ]],
        )?,
    }
    Ok(())
}

fn cmd_scan(ctx: &Ctx, set: &str, step_deg: f64, refine: bool, out: &mut dyn Write) -> Result<i32> {
    let (ids, label) = if set.eq_ignore_ascii_case("all") {
        (None, "all".to_string())
    } else {
        ctx.subset(Some(set))?
    };
    let mesh = MeshSpec::uniform_degrees(step_deg)?;
    let g = ctx.graph(ids.as_deref())?;
    let family = conflict_pentagons(&ctx.rays, &g)?;
    let opts = ScanOptions {
        label,
        refine,
        ..ScanOptions::default()
    };
    let rep = scan_universality_with(&family, &mesh, &opts)?;
    write_scan(ctx, &rep, out)?;
    Ok(if rep.violates_everywhere() { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn cmd_report(ctx: &Ctx, args: &ReportArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let mut cfg = ReportConfig {
        n_min: args.n_min,
        n_max: args.n_max,
        step_deg: args.step_deg,
        scan: !args.no_scan,
        refine: !args.no_refine,
        timing: args.timing,
    };
    if args.full {
        cfg.n_min = 5;
        cfg.n_max = 15;
        cfg.step_deg = 1.0;
    }
    if cfg.n_min < MIN_NGON || cfg.n_max < cfg.n_min {
        return Err(Error::Usage(format!(
            "need {MIN_NGON} <= --n-min <= --n-max, got {}..{}",
            cfg.n_min, cfg.n_max
        )));
    }
    let bundle = build_report(&ctx.rays, ctx.builtin, &cfg, err)?;
    let mut buf: Vec<u8> = Vec::new();
    match ctx.format {
        Format::Text => buf.extend_from_slice(render_text(&bundle).as_bytes()),
        Format::Json => json_line(&mut buf, &bundle)?,
        Format::Csv => {
            let rows = bundle
                .checks
                .iter()
                .map(|c| vec![c.name.clone(), c.expected.clone(), c.observed.clone(), c.pass.to_string()])
                .collect();
            csv_rows(&mut buf, &["check", "expected", "observed", "pass"], rows)?;
        }
    }
    match &args.out {
        Some(path) => fs::write(path, &buf)?,
        None => out.write_all(&buf)?,
    }
    for c in bundle.checks.iter().filter(|c| !c.pass) {
        writeln!(err, "check failed: {} (expected {}, observed {})", c.name, c.expected, c.observed)?;
    }
    Ok(if bundle.all_checks_pass() { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn dispatch(cli: &Cli, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> Result<i32> {
    let (rays, builtin) = load_rays(cli.rays.as_deref())?;
    let ctx = Ctx {
        rays,
        builtin,
        format: cli.format,
    };
    match &cli.command {
        Command::Rays { list } => cmd_rays(&ctx, *list, out),
        Command::Ngons(args) => cmd_ngons(&ctx, args, out),
        Command::Census { n, subset } => cmd_census(&ctx, *n, subset.as_deref(), out),
        Command::Parity(args) => cmd_parity(&ctx, args, out),
        Command::Scan { set, step_deg, refine } => cmd_scan(&ctx, set, *step_deg, *refine, out),
        Command::Report(args) => cmd_report(&ctx, args, out, err),
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit status: 0 success, 1 failed check, 2 usage or input error.
pub fn run<I, T>(args: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build() {
        Ok(pool) => pool,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    match pool.install(|| dispatch(&cli, out, err)) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}
