//! Tensorial behaviour under `ρ(v)`: metric, inverse metric and volume
//! transform as tensors, the Christoffel symbols pick up `−∂_b ∂_c v^a`.

use varbic::fields::SpacetimeField;
use varbic::geometry::Geometry;
use varbic::Ctx;

fn main() -> varbic::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2);
    let ctx = Ctx::metric(n)?;
    let geo = Geometry::of(ctx)?;
    let v = SpacetimeField::formal('v')?;
    let families = [
        ("g_ab", geo.metric_family()?),
        ("g^ab", geo.inverse_metric_family()?),
        ("δg_ab", geo.delta_metric_family()?),
    ];
    for (name, fam) in &families {
        let r = geo.covariance_residual(fam, &v)?;
        println!("{name:6} covariance defect vanishes: {}", r.is_zero());
    }
    let gamma = geo.covariance_residual(&geo.christoffel_family()?, &v)?;
    for (idx, f) in gamma.entries().take(3) {
        println!("Γ defect {idx:?} = {f}");
    }
    Ok(())
}
