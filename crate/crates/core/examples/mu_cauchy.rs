//! Distance between parabolically regularized solutions at `μ` and `μ/2`
//! for the `l = 2` model flow, and its log-log slope in `μ`.
//!
//! `cargo run --release --example mu_cauchy`

use kdvh::lab::{exp_mu_cauchy, Config};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let report = exp_mu_cauchy(&Config::new())?;
    print!("{}", report.tables[0].to_csv());
    println!("slope: {}", report.metrics["fit"]["slope"]);
    println!("{}", report.verdict);
    Ok(())
}
