//! User-declared vector fields: parse a small program and check Lepage
//! invariance and Noether conservation for each field.

use varbic::dsl::parse_fields;
use varbic::gr::build_gr_theory;
use varbic::Ctx;

const PROGRAM: &str = "
# a rotation-like field and a quadratic one
vec r [x2, -x1]
vec b [1/2*x1^2, x1*x2]
formal w
";

fn main() -> varbic::Result<()> {
    let ctx = Ctx::metric(2)?;
    let theory = build_gr_theory(ctx)?;
    for decl in parse_fields(ctx, PROGRAM)? {
        let (l, g) = theory.data().lepage_variation(&decl.field)?;
        let invariant = l.is_zero() && g.is_zero();
        let conserved = theory.data().noether_residual(&decl.field)?.is_zero();
        println!("{} = {}: 𝓛_ρ L = 𝓛_ρ γ = 0 {invariant}, d j = ι_ξ EL {conserved}", decl.name, decl.field);
    }
    match parse_fields(ctx, "vec v [x1, 0.5]") {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
