//! Mollifier rates on a rough random field: norm growth above the base
//! regularity and convergence below it, as `ε → 0`.
//!
//! `cargo run --release --example bona_smith`

use kdvh::lab::{exp_bona_smith, Config};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let report = exp_bona_smith(&Config::new().with("seed", 2024))?;
    print!("{}", report.tables[0].to_csv());
    println!("{}", serde_json::to_string_pretty(&report.metrics)?);
    println!("{}", report.verdict);
    Ok(())
}
