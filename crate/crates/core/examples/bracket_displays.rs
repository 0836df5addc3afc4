//! Compares printed bracket and momentum displays with expansions derived
//! from the contraction definition, reporting each per bidegree.

use varbic::gr::build_gr_theory;
use varbic::linfty::{bracket_expansion, formal_fields, l_bracket, MomentumMap};
use varbic::Ctx;

fn main() -> varbic::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let theory = build_gr_theory(Ctx::metric(n)?)?;
    let mm = MomentumMap::new(theory.data());
    let f = formal_fields("vwu")?;
    for check in [
        mm.two_bracket_display(&f[0], &f[1])?,
        mm.mu2_display(&f[0], &f[1])?,
        mm.current_bracket_display(&f[0], &f[1])?,
    ] {
        println!(
            "{}: derived {}, printed {} (printed residual bidegrees {:?})",
            check.name,
            if check.derived_holds() { "holds" } else { "FAILS" },
            if check.printed_holds() { "holds" } else { "differs" },
            check.printed.bidegrees()
        );
    }
    for k in 2..=n.min(3) {
        let pairs = f[..k].iter().map(|v| mm.pair(v)).collect::<varbic::Result<Vec<_>>>()?;
        let refs: Vec<_> = pairs.iter().collect();
        let direct = l_bracket(theory.data().omega(), &refs)?;
        let fields: Vec<_> = pairs.iter().map(|p| p.field().clone()).collect();
        let exp = bracket_expansion(theory.data(), &fields)?;
        println!("general {k}-bracket expansion: {}", if exp == direct { "holds" } else { "FAILS" });
        let split = mm.mu_split(&f[..k])?;
        println!("μ_{k} split: {}", if split == mm.mu(&f[..k])? { "holds" } else { "FAILS" });
    }
    if n >= 3 {
        let r = mm.l3_residual(&[f[0].clone(), f[1].clone(), f[2].clone()])?;
        println!("three-field display: {}", if r.is_zero() { "holds" } else { "FAILS" });
    }
    Ok(())
}
