//! Builds the 60 rays, prints them in ray-file form and tabulates the
//! exact inner products between distinct rays.

use std::collections::BTreeMap;

use ks600::graph::orthogonality_graph;
use ks600::rays::{build_600cell_rays, inner_product};

fn main() {
    let rays = build_600cell_rays();
    print!("{}", rays.to_ray_file());

    let mut histogram: BTreeMap<String, usize> = BTreeMap::new();
    let all = rays.rays();
    for (i, u) in all.iter().enumerate() {
        for v in &all[i + 1..] {
            *histogram.entry(inner_product(u, v).abs().to_string()).or_default() += 1;
        }
    }
    println!("\n|⟨u,v⟩| over {} pairs:", all.len() * (all.len() - 1) / 2);
    for (value, count) in &histogram {
        println!("  {value:>4}  {count}");
    }

    let graph = orthogonality_graph(&rays);
    println!(
        "orthogonality graph: {} edges, degree {:?}",
        graph.edge_count(),
        graph.regular_degree()
    );
}
