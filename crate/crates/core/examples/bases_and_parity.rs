//! Lists the orthogonal bases, checks the two 30-ray parity proofs and
//! counts every way to split the 60 rays into two such proofs.

use ks600::graph::orthogonality_graph;
use ks600::ngons::enumerate_bases;
use ks600::parity::{builtin_sets, enumerate_parity_splits, verify_parity_proof};
use ks600::rays::build_600cell_rays;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rays = build_600cell_rays();
    let bases = enumerate_bases(&orthogonality_graph(&rays));
    println!("{} orthogonal bases, first {:?}", bases.len(), bases[0].ids());

    let sets = builtin_sets();
    for (label, ids) in [("A", &sets.set_a), ("B", &sets.set_b)] {
        let report = verify_parity_proof(&rays, ids)?;
        println!(
            "set {label}: {} rays, {} bases, each ray in {:?} bases, parity proof {}",
            report.ids.len(),
            report.bases.len(),
            report.multiplicity.values().collect::<std::collections::BTreeSet<_>>(),
            report.parity_proof
        );
    }

    let splits = enumerate_parity_splits(&rays);
    println!("splits into two parity proofs: {}", splits.len());
    for split in splits.iter().take(3) {
        println!("  {:?}", split.first.ids);
    }
    Ok(())
}
