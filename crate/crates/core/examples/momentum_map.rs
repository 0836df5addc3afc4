//! The homotopy momentum map of the diffeomorphism action: checks
//! `𝐝μ_k + μ_{k−1}δ = ν` on coordinate and affine label sets.

use std::time::Instant;

use varbic::gr::build_gr_theory;
use varbic::linfty::{formal_fields, increasing_words, LabelSet, MomentumMap};
use varbic::Ctx;

fn main() -> varbic::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2);
    let ctx = Ctx::metric(n)?;
    let theory = build_gr_theory(ctx)?;
    let mm = MomentumMap::new(theory.data());
    let labels = LabelSet::affine(ctx)?;
    for k in 1..=n {
        let t = Instant::now();
        let words = increasing_words(labels.len(), k);
        let mut failures = 0;
        for w in &words {
            if !mm.morphism_residual_word(&labels, w)?.is_zero() {
                failures += 1;
                println!("  fails on {}", labels.word_string(w));
            }
        }
        println!("k = {k}: {} words, {failures} failures ({:.2?})", words.len(), t.elapsed());
    }
    let formal = formal_fields("vwu")?;
    for k in 1..=n.min(3) {
        let t = Instant::now();
        let r = mm.morphism_residual(&formal[..k])?;
        println!("formal k = {k}: residual {} ({:.2?})", if r.is_zero() { "0" } else { "nonzero" }, t.elapsed());
    }
    Ok(())
}
