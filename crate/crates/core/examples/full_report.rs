//! Runs the whole reproduction pipeline and prints the report with its
//! checks. Pass `json` for the machine-readable bundle.
//!
//! ```text
//! cargo run --release --example full_report -- [json]
//! ```

use ks600::rays::build_600cell_rays;
use ks600::report::{build_report, render_text, ReportConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let as_json = std::env::args().nth(1).as_deref() == Some("json");
    let config = ReportConfig {
        timing: true,
        ..ReportConfig::default()
    };
    let bundle = build_report(&build_600cell_rays(), true, &config, &mut std::io::stderr())?;
    if as_json {
        println!("{}", serde_json::to_string_pretty(&bundle)?);
    } else {
        print!("{}", render_text(&bundle));
    }
    if !bundle.all_checks_pass() {
        std::process::exit(1);
    }
    Ok(())
}
