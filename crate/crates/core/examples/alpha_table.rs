//! Coefficients of the trilinear integration-by-parts identity
//! `∫∂^{2l+1}w f g + ∫w ∂^{2l+1}f g + ∫w f ∂^{2l+1}g = Σ_j α_{j,l} ∫∂^{2(l−j)+1}w ∂^j f ∂^j g`,
//! each level certified independently with the Euler operator.
//!
//! `cargo run --example alpha_table [MAX_L]`

use kdvh::ibp::{alpha_coeffs, diagonal_closed_form, verify_identity};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let max: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(8);
    for l in 1..=max {
        let t = alpha_coeffs(l);
        let row: Vec<String> = t.alphas.iter().map(|a| format!("{a:>7}")).collect();
        let cert = if l <= 6 { if verify_identity(l) { "certified" } else { "FAILED" } } else { "" };
        println!("l = {l:>2}: {}   diagonal {} (closed form {}) {cert}", row.join(""), t.diagonal(), diagonal_closed_form(l));
    }
    Ok(())
}
