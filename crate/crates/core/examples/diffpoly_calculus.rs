//! Exact differential-polynomial algebra: parsing, total derivatives, the
//! Euler operator as an exactness test, antiderivatives and
//! integration-by-parts normal forms.
//!
//! `cargo run --example diffpoly_calculus`

use kdvh::diffpoly::{
    euler_operator, ibp_normal_form, integrate_exact, is_exact, to_latex, total_derivative, DiffPoly, Symbol,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let u = Symbol::new("u");
    let p = DiffPoly::parse("u*u_x + u_x*u_xx")?;
    println!("p            = {p}");
    println!("D_x p        = {}", total_derivative(&p));
    println!("δp/δu        = {}", euler_operator(&p, &u));
    println!("exact?       = {}", is_exact(&p));
    println!("∫ p dx       = {}", integrate_exact(&p)?);

    // u·u_xx is not exact, but under ∫ it equals −u_x².
    let q = DiffPoly::parse("u*u_xx + 3*u^2*u_{3x}")?;
    println!("\nq            = {q}");
    println!("exact?       = {}", is_exact(&q));
    println!("normal form  = {}", ibp_normal_form(&q));
    println!("LaTeX        = {}", to_latex(&q));

    // Several symbols at once.
    let r = DiffPoly::parse("w_x*f*g + w*f_x*g + w*f*g_x")?;
    println!("\nr            = {r}  (exact: {})", is_exact(&r));
    println!("JSON         = {}", r.to_json());
    Ok(())
}
