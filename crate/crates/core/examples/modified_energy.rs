//! Builds the modified energy for l = 2..=5 and prints the cancellation
//! structure: resonant coefficients, solved weights and stage diagonals.
//!
//! `cargo run --example modified_energy [L]`

use std::time::Instant;

use kdvh::energy::build_blueprint;

fn main() {
    let levels: Vec<usize> = match std::env::args().nth(1) {
        Some(l) => vec![l.parse().expect("L must be an integer")],
        None => (2..=5).collect(),
    };
    for l in levels {
        let t0 = Instant::now();
        let bp = match build_blueprint(l) {
            Ok(bp) => bp,
            Err(e) => {
                println!("l = {l}: {e}");
                continue;
            }
        };
        println!("l = {l}  ({:.2?})", t0.elapsed());
        for (j, b) in bp.betas.iter().enumerate() {
            println!("  beta_{}(s)  = {b}", j + 1);
        }
        for (q, g) in bp.gammas.iter().enumerate() {
            println!("  gamma_{q}(s) = {g}");
        }
        for st in &bp.stages {
            let diag: Vec<String> = st.diagonal.iter().map(|d| d.to_string()).collect();
            let terms: usize = st.corrections.iter().map(|c| c.w.len()).sum();
            println!(
                "  order {}: diagonal [{}], triangular {}, {} weight monomials, residue {}",
                st.order,
                diag.join(", "),
                st.triangular,
                terms,
                st.residue.len()
            );
        }
        let rem = &bp.bounded_remainder;
        println!(
            "  bounded remainder: {} squares, {} commutator terms, {} plain",
            rem.squares.num_terms(),
            rem.comm.len(),
            rem.plain.len()
        );
    }
}
