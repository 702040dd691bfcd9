//! Levels of the KdV hierarchy from the Lenard recursion: gradients,
//! Hamiltonians, flows, the rank audit and pairwise involution.
//!
//! `cargo run --example hierarchy [MAX_L]`

use kdvh::hierarchy::{classify, generate, in_involution};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let max: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(4);
    for l in 0..=max {
        let level = generate(l);
        let report = classify(&level)?;
        println!("l = {l}  (rank {}, {} monomials in the flow)", report.rank, level.rhs.monomials().count());
        println!("  G = {}", level.g);
        println!("  H = ∫ {} dx", level.h.canonical);
        for g in &report.groups {
            println!("  degree {} terms carry {} derivatives", g.k, g.weight);
        }
    }
    let pairs: Vec<(usize, usize)> = (0..=2).flat_map(|m| (0..=2).map(move |l| (m, l))).collect();
    let ok = pairs.iter().all(|&(m, l)| in_involution(m, l));
    println!("H_m conserved by flow l for all m, l ≤ 2: {ok}");
    Ok(())
}
