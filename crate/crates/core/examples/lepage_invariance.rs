//! Invariance of the Lepage form `L + γ` under the diagonal action of a
//! formal spacetime vector field, and the Noether current it produces.

use std::time::Instant;

use varbic::fields::SpacetimeField;
use varbic::gr::build_gr_theory;
use varbic::Ctx;

fn main() -> varbic::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2);
    let theory = build_gr_theory(Ctx::metric(n)?)?;
    let v = SpacetimeField::formal('v')?;
    let t = Instant::now();
    let (l, g) = theory.data().lepage_variation(&v)?;
    println!("𝓛_ρ(v) L = {l}");
    println!("𝓛_ρ(v) γ = {g}   ({:.2?})", t.elapsed());
    let t = Instant::now();
    let r = theory.data().noether_residual(&v)?;
    println!("d j_v − ι_ξ EL = {r}   ({:.2?})", t.elapsed());
    let t = Instant::now();
    let j = theory.data().noether_current(&v)?;
    let diff = j.try_sub(&theory.noether_current_formula(&v)?)?;
    println!("j_v − closed formula = {diff}   ({:.2?})", t.elapsed());
    let t = Instant::now();
    let div = theory.einstein_divergence()?;
    let shown: Vec<String> = div.iter().map(ToString::to_string).collect();
    println!("∇_a G^ab = [{}]   ({:.2?})", shown.join(", "), t.elapsed());
    let t = Instant::now();
    let (a, b) = theory.omega_residuals()?;
    println!("𝐝λ − ω = {a}, 𝐝ω = {b}   ({:.2?})", t.elapsed());
    let t = Instant::now();
    println!("P(δL) − EL = {}   ({:.2?})", theory.euler_operator_residual()?, t.elapsed());
    Ok(())
}
