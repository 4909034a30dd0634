//! The Peres 24-ray set has conflict pentagons too, yet none of them is
//! violated at any of its own rays, so no universal violation exists.

use ks600::graph::orthogonality_graph;
use ks600::parity::enumerate_parity_splits;
use ks600::rays::build_peres24;
use ks600::scan::{scan_universality, MeshSpec};
use ks600::spectra::{max_eigen, ngon_operators, peak_expectation_on_rays};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let peres = build_peres24();
    let graph = orthogonality_graph(&peres);
    let pentagons = ngon_operators(&peres, &graph, 5, f64::NEG_INFINITY)?;
    let top = pentagons
        .iter()
        .map(|m| max_eigen(m).map(|s| s.max_value()))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);
    println!("{} rays, {} pentagons, largest eigenvalue {top:.4}", peres.len(), pentagons.len());

    let (peak, ray, index) = peak_expectation_on_rays(&peres, &pentagons)?;
    println!(
        "largest ⟨r|Σ|r⟩ over its own rays: {peak:.12} (ray {ray}, pentagon {:?})",
        pentagons[index].provenance().map(|g| g.cycle())
    );

    let report = scan_universality(&pentagons, &MeshSpec::uniform_degrees(5.0)?)?;
    println!("scan minimum {:.6}: universal violation {}", report.refined_minimum, report.violates_everywhere());
    println!("parity splits: {}", enumerate_parity_splits(&peres).len());
    Ok(())
}
