//! Periodic spectral fields: Fourier multipliers, Sobolev norms, functional
//! evaluation, mollification and the scaling map.
//!
//! `cargo run --example spectral_fields`

use kdvh::diffpoly::DiffPoly;
use kdvh::hierarchy::generate;
use kdvh::spectral::{eval_diffpoly, functional_eval, mollify, multiplier, scale_field, Multiplier, SpectralField};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 64;
    let f = SpectralField::from_fn(n, |x| x.cos() + 0.5 * (3.0 * x).sin());
    let pi = std::f64::consts::PI;

    let d2 = multiplier(&f, Multiplier::D(2.0));
    println!("D² f at x=0: {:.12} (expected 1)", d2.values()[0]);
    println!("‖f‖_L²  = {:.12} (expected {:.12})", f.sobolev_norm(0.0), (1.25 * pi).sqrt());
    println!("‖f‖_H¹  = {:.12}", f.sobolev_norm(1.0));

    let ux = eval_diffpoly(&DiffPoly::parse("u*u_x")?, &f, 2.0 / 3.0);
    println!("∫ u u_x dx = {:.2e} (exact derivative)", ux.integral());

    let c = SpectralField::from_fn(n, |x| 0.1 * x.cos());
    println!("H_1(0.1 cos x) = {:.12} (expected {:.12})", functional_eval(&generate(1).h.canonical, &c), -0.005 * pi);

    for eps in [0.2, 0.1, 0.05] {
        let m = mollify(&f, eps, 3);
        println!("ε = {eps}: ‖f − f_ε‖_L² = {:.3e}", (&f - &m).l2_norm());
    }

    let s = scale_field(&c, 2, 2);
    println!("λ = 2 scaling: N {} → {}, mode 2 = {:.3}", c.n(), s.n(), s.mode(2).re);
    Ok(())
}
