//! Solves the `l = 2` model flow `u_t + ∂⁵u = u ∂³u` from small random data,
//! printing norms, the first Hamiltonians and the modified energy, and the
//! same run from a config string as `kdvh solve --config` would.
//!
//! `cargo run --release --example solve_model`

use kdvh::lab::{run_solve, Config};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg: Config = "
        flow.kind = model
        flow.l = 2
        grid.N = 128
        time.dt = 0.001
        time.T = 1
        integrator.order = 4
        ic.kind = random
        ic.amplitude = 0.05
        ic.band = 8
        seed = 11
        diagnostics.s = 4
        diagnostics.every = 100
    "
    .parse()?;
    let report = run_solve(&cfg)?;
    print!("{}", report.tables[0].to_csv());
    println!("{}", serde_json::to_string_pretty(&report.metrics)?);
    Ok(())
}
