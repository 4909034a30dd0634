//! Counts the chordless N-cycles of the 600-cell orthogonality graph.
//!
//! ```text
//! cargo run --release --example ngon_census -- [N_MAX]
//! ```

use std::time::Instant;

use ks600::graph::orthogonality_graph;
use ks600::ngons::count_ngons;
use ks600::rays::build_600cell_rays;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n_max: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(15);
    let g = orthogonality_graph(&build_600cell_rays());
    println!("{:>3}  {:>10}  {:>8}", "N", "N-gons", "seconds");
    for n in 5..=n_max {
        let start = Instant::now();
        let count = count_ngons(&g, n)?;
        println!("{:>3}  {:>10}  {:>8.2}", n, count, start.elapsed().as_secs_f64());
    }
    Ok(())
}
