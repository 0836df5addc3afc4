//! Builds the Hilbert–Einstein theory and checks `EL − δL = dγ`.

use std::time::Instant;

use varbic::gr::build_gr_theory;
use varbic::Ctx;

fn main() -> varbic::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2);
    let start = Instant::now();
    let theory = build_gr_theory(Ctx::metric(n)?)?;
    let data = theory.data();
    println!("n = {n}: split identity holds ({:.2?})", start.elapsed());
    println!("  L  has {} terms", data.lagrangian().len());
    println!("  EL has {} terms", data.euler_lagrange().len());
    println!("  γ  has {} terms", data.boundary().len());
    Ok(())
}
