//! Loads a ray file, or a built-in subset when no path is given, and
//! reports its graph, bases and pentagon census.
//!
//! ```text
//! cargo run --release --example custom_catalog -- [RAY_FILE]
//! ```

use ks600::graph::orthogonality_graph;
use ks600::ngons::{enumerate_bases, enumerate_ngons};
use ks600::rays::{build_600cell_rays, parse_rayset_named};
use ks600::spectra::classify_conflicts;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rays = match std::env::args().nth(1) {
        Some(path) => parse_rayset_named(&std::fs::read_to_string(&path)?, &path)?,
        None => {
            let text = build_600cell_rays().subset(&[1, 2, 13, 41, 34, 16, 42, 20])?.to_ray_file();
            println!("{text}");
            parse_rayset_named(&text, "sample")?
        }
    };
    let graph = orthogonality_graph(&rays);
    println!(
        "{}: {} rays, {} orthogonal pairs, {} bases",
        rays.name(),
        rays.len(),
        graph.edge_count(),
        enumerate_bases(&graph).len()
    );
    for gon in enumerate_ngons(&graph, 5)? {
        println!("  pentagon {:?}", gon.cycle());
    }
    let census = classify_conflicts(&rays, &graph, 5, None)?;
    for class in census.classes.iter().chain(&census.nonconflict_classes) {
        println!("  λ = {:.4} ×{}", class.lambda_max, class.count);
    }
    Ok(())
}
