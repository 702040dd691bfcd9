//! Modified energy along the `l = 2` model flow: drift, the empirical
//! constant in the energy inequality under grid doubling, the
//! frequency-growth contrast and the coercivity window.
//!
//! `cargo run --release --example energy_drift`

use kdvh::lab::{exp_energy_drift, Config};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let report = exp_energy_drift(&Config::new())?;
    println!("{}", serde_json::to_string_pretty(&report.metrics)?);
    for name in ["contrast", "coercivity"] {
        print!("{}", report.table(name).unwrap().to_csv());
    }
    println!("{}", report.verdict);
    Ok(())
}
