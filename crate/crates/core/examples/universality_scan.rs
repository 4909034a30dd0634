//! Scans real projective 4-space for the weakest violation of the pentagon
//! inequalities of set A and set B.
//!
//! ```text
//! cargo run --release --example universality_scan -- [STEP_DEGREES]
//! ```

use ks600::graph::orthogonality_graph;
use ks600::parity::builtin_sets;
use ks600::rays::build_600cell_rays;
use ks600::scan::{scan_universality_with, MeshSpec, ScanOptions};
use ks600::spectra::conflict_pentagons;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let step: f64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(2.0);
    let rays = build_600cell_rays();
    let graph = orthogonality_graph(&rays);
    let sets = builtin_sets();
    let mesh = MeshSpec::uniform_degrees(step)?;

    for (label, ids) in [("A", &sets.set_a), ("B", &sets.set_b)] {
        let family = conflict_pentagons(&rays, &graph.induced_subgraph(ids)?)?;
        let opts = ScanOptions {
            label: label.to_string(),
            record_time: true,
            ..ScanOptions::default()
        };
        let report = scan_universality_with(&family, &mesh, &opts)?;
        let [phi, t1, t2] = report.refined_argmin.map(f64::to_degrees);
        println!(
            "set {label}: {} conflict pentagons, {} nodes at {step}°",
            report.operators, report.nodes
        );
        println!("  mesh minimum    {:.6}", report.mesh_minimum);
        println!(
            "  refined minimum {:.6} at (φ, θ₁, θ₂) = ({phi:.3}°, {t1:.3}°, {t2:.3}°)",
            report.refined_minimum
        );
        println!(
            "  violated everywhere: {}  ({:.1}s)",
            report.violates_everywhere(),
            report.wall_clock_secs.unwrap_or_default()
        );
    }
    Ok(())
}
