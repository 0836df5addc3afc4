//! Randomized exact evaluation as an independent zero test.

use varbic::formalg::Form;
use varbic::gr::build_gr_theory;
use varbic::oracle::{audit, FormIdentity, JetPoint};
use varbic::text::parse_scalar;
use varbic::Ctx;

fn main() -> varbic::Result<()> {
    let ctx = Ctx::metric(2)?;
    let p = JetPoint::sample(ctx, 42)?;
    println!("point: {p}");
    let f = parse_scalar(ctx, "g_{11,2}*s + g_{12}^2")?;
    let (a, b) = p.evaluate(&f)?;
    println!("{f} ↦ {a} + {b}·s");

    let theory = build_gr_theory(ctx)?;
    let el = theory.data().euler_lagrange().clone();
    let split = theory
        .data()
        .lagrangian()
        .vertical_differential()
        .try_add(&theory.data().boundary().horizontal_differential()?)?;
    let good = FormIdentity::new(el, split);
    // EL itself vanishes identically in two dimensions, L does not.
    let bad = FormIdentity::new(theory.data().lagrangian().clone(), Form::zero(ctx));
    for (name, id) in [("EL = δL + dγ", good), ("L = 0", bad)] {
        let a = audit(&id, 20, 1)?;
        println!("{name:14} canonical zero {}, oracle zero {}, agree {}", a.symbolic_zero, a.oracle_zero, a.agrees());
        if let Some(fp) = &a.failing_point {
            println!("               witness: {fp}");
        }
    }
    Ok(())
}
