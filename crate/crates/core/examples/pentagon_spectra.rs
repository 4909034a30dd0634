//! Eigenvalue classes of the pentagon and heptagon operators inside sets
//! A and B, with one example cycle per class.
//!
//! ```text
//! cargo run --release --example pentagon_spectra -- [N]
//! ```

use ks600::graph::orthogonality_graph;
use ks600::ngons::classical_bound;
use ks600::parity::builtin_sets;
use ks600::rays::build_600cell_rays;
use ks600::spectra::classify_conflicts;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sizes: Vec<usize> = match std::env::args().nth(1) {
        Some(n) => vec![n.parse()?],
        None => vec![5, 7],
    };
    let rays = build_600cell_rays();
    let graph = orthogonality_graph(&rays);
    let sets = builtin_sets();
    for n in sizes {
        println!("{n}-gons, classical bound {}", classical_bound(n));
        for (label, ids) in [("A", &sets.set_a), ("B", &sets.set_b)] {
            let census = classify_conflicts(&rays, &graph, n, Some(ids))?;
            println!("  set {label}: {} total, {} conflict", census.total_ngons, census.total_conflicts);
            for class in &census.classes {
                println!("    λ = {:.4}  ×{:<4} e.g. {:?}", class.lambda_max, class.count, class.example_cycle);
            }
        }
    }
    Ok(())
}
