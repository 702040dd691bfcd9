//! Scaling symmetry: solving from `λ² u0(λx)` on a refined grid with
//! rescaled time reproduces `λ² u(λx, λ^5 t)`.
//!
//! `cargo run --release --example scaling`

use kdvh::lab::{exp_scaling, Config};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for lambda in [1, 2, 4] {
        let report = exp_scaling(&Config::new().with("scaling.lambda", lambda))?;
        println!(
            "λ = {lambda}: solution moved by {:.3} (relative), max relative error {} ({})",
            report.metrics["relative_change"].as_f64().unwrap_or(0.0),
            report.metrics["max_rel_error"],
            report.verdict
        );
    }
    Ok(())
}
