//! The two covariant divergence formulas on random families. The second
//! needs the sign `(−1)^{p+q}`; `(−1)^p` alone fails once `q = 1`.

use varbic::geometry::{Geometry, Variance};
use varbic::oracle::random;
use varbic::Ctx;

fn main() -> varbic::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2);
    let ctx = Ctx::metric(n)?;
    let geo = Geometry::of(ctx)?;
    let mut rng = random::rng(7);
    for p in 0..=2 {
        let chi = random::family(ctx, &mut rng, vec![Variance::Contravariant], p, 0)?;
        println!("vector family p = {p}: residual zero = {}", geo.divergence_1_residual(&chi)?.is_zero());
    }
    for (p, q) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
        let chi = random::antisymmetric_family(ctx, &mut rng, p, q)?;
        let derived = geo.divergence_2_residual(&chi)?.is_zero();
        let printed = geo.divergence_2_printed_residual(&chi)?.is_zero();
        println!("bivector family (p,q) = ({p},{q}): (−1)^(p+q) holds {derived}, (−1)^p holds {printed}");
    }
    Ok(())
}
