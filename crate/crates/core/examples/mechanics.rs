//! A particle in a potential as a field theory over time: Euler–Lagrange
//! form, symplectic current, and the energy as the momentum of `∂_t`.

use varbic::dsl::parse_potential;
use varbic::gr::euler_operator;
use varbic::mech::{time_translation_momentum, MechContext};

fn main() -> varbic::Result<()> {
    let src = std::env::args().nth(1).unwrap_or_else(|| "1/2*q^1^2 + 1/4*q^1^4".into());
    let fibre = (1..=9).rev().find(|i| src.contains(&format!("q^{i}"))).unwrap_or(1);
    let m = MechContext::new(fibre, parse_potential(fibre, &src)?)?;
    let data = m.build()?;
    println!("V      = {}", m.potential());
    println!("P(δL)  = {}", euler_operator(&data.lagrangian().vertical_differential())?);
    println!("ω      = {}", data.omega());
    let tt = time_translation_momentum(&m, &data)?;
    println!("μ_1(∂_t) = {}", tt.momentum);
    println!("energy   = {}", m.energy());
    println!("μ_1 + j = 0: {}", tt.momentum_residual.is_zero());
    println!("𝓛_ρ(∂_t)(L + γ) = 0: {}", tt.lepage_variation.is_zero());
    Ok(())
}
