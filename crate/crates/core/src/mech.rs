//! Classical mechanics as a field theory over time: a particle of mass 1
//! in a polynomial potential `V(q)`, run through the generic machinery.

use crate::error::{Error, Result};
use crate::fields::{diffeo_action, diffeo_xi, JetVectorField, SpacetimeField};
use crate::formalg::Form;
use crate::gr::LagrangianData;
use crate::jetscalar::{Ctx, JetScalar};
use crate::poly::{Component, MultiIndex, Var, VarKind};
use crate::rational::Rational;

/// Configuration space dimension and potential.
#[derive(Clone, Debug)]
pub struct MechContext {
    ctx: Ctx,
    potential: JetScalar,
}

impl MechContext {
    /// `V` must be a polynomial in the positions `q^i` only.
    pub fn new(fibre: usize, potential: JetScalar) -> Result<Self> {
        let ctx = Ctx::mechanics(fibre)?;
        if potential.ctx() != ctx {
            return Err(Error::DimensionMismatch);
        }
        let positions_only = potential
            .vars()
            .iter()
            .all(|v| matches!(v.kind(), VarKind::Field(_, c) if c.order() == 0));
        if !positions_only || !potential.s_part().is_zero() || potential.det_power() > 0 {
            return Err(Error::Schema("potential must be a polynomial in q"));
        }
        Ok(MechContext { ctx, potential })
    }

    pub fn free(fibre: usize) -> Result<Self> {
        MechContext::new(fibre, JetScalar::zero(Ctx::mechanics(fibre)?))
    }

    pub fn ctx(&self) -> Ctx {
        self.ctx
    }

    pub fn fibre(&self) -> usize {
        self.ctx.components().len()
    }

    pub fn potential(&self) -> &JetScalar {
        &self.potential
    }

    /// `q^i_{,C}` with `C` of the given order.
    pub fn q(&self, i: usize, order: usize) -> JetScalar {
        let c = MultiIndex::from_counts(&[order as u8]);
        JetScalar::var(self.ctx, Var::field(Component::Coord(i as u8), c)).expect("valid coordinate")
    }

    fn dq(&self, i: usize, order: usize) -> Form {
        let c = MultiIndex::from_counts(&[order as u8]);
        Form::delta(self.ctx, Var::field(Component::Coord(i as u8), c)).expect("valid coordinate")
    }

    fn dt(&self) -> Form {
        Form::dx(self.ctx, 1).expect("n = 1")
    }

    /// `½ q̇^i q̇^i`.
    pub fn kinetic(&self) -> JetScalar {
        let terms = (1..=self.fibre()).map(|i| self.q(i, 1).pow(2));
        JetScalar::sum(self.ctx, terms.collect::<Vec<_>>()).scale(&Rational::new(1, 2))
    }

    /// `∂V/∂q^i`.
    pub fn force(&self, i: usize) -> JetScalar {
        self.potential
            .partial(Var::field(Component::Coord(i as u8), MultiIndex::ZERO))
    }

    /// Euler–Lagrange form `−(q̈^i + ∂V/∂q^i) δq^i ∧ dt`.
    pub fn printed_euler_lagrange(&self) -> Result<Form> {
        let parts = (1..=self.fibre())
            .map(|i| {
                let coeff = -(&self.q(i, 2) + &self.force(i));
                self.dq(i, 0).try_wedge(&self.dt()).map(|f| f.mul_scalar(&coeff))
            })
            .collect::<Result<Vec<_>>>()?;
        Form::sum(self.ctx, &parts)
    }

    /// `ω = EL + δq̇^i ∧ δq^i`.
    pub fn printed_omega(&self) -> Result<Form> {
        let mut parts = vec![self.printed_euler_lagrange()?];
        for i in 1..=self.fibre() {
            parts.push(self.dq(i, 1).try_wedge(&self.dq(i, 0))?);
        }
        Form::sum(self.ctx, &parts)
    }

    /// `L = (½ q̇^i q̇^i − V) dt`, `EL` and `γ = q̇^i δq^i`.
    pub fn build(&self) -> Result<LagrangianData> {
        let lagrangian = self.dt().mul_scalar(&(&self.kinetic() - &self.potential));
        let parts: Vec<Form> = (1..=self.fibre())
            .map(|i| self.dq(i, 0).mul_scalar(&self.q(i, 1)))
            .collect();
        let boundary = Form::sum(self.ctx, &parts)?;
        LagrangianData::new(lagrangian, self.printed_euler_lagrange()?, boundary)
    }

    /// The generator of time translations `∂_t`.
    pub fn time_translation(&self) -> SpacetimeField {
        SpacetimeField::coordinate(self.ctx, 1).expect("n = 1")
    }

    /// `ρ(∂_t)` evaluated on `t` and on `q^i_{,C}` for `|C| ≤ depth`; it is
    /// `∂/∂t` iff the values are `1` and all `0`.
    pub fn action_on_coordinates(&self, depth: usize) -> Result<Vec<(Var, JetScalar)>> {
        let rho = diffeo_action(self.ctx, &self.time_translation())?;
        let mut out = vec![(Var::x(1), rho.apply(&JetScalar::x(self.ctx, 1)?)?)];
        for i in 1..=self.fibre() {
            for k in 0..=depth {
                let q = self.q(i, k);
                let u = q.vars()[0];
                out.push((u, rho.apply(&q)?));
            }
        }
        Ok(out)
    }

    /// `j = ½ q̇^i q̇^i + V`.
    pub fn energy(&self) -> JetScalar {
        &self.kinetic() + &self.potential
    }
}

/// Checks bundled for the mechanics example.
#[derive(Debug)]
pub struct TimeTranslation {
    /// `𝓛_{ρ(∂_t)}(L + γ)`.
    pub lepage_variation: Form,
    /// `μ_1(∂_t) + j` with `j` the printed energy.
    pub momentum_residual: Form,
    /// `ι_{∂̂_t} γ`.
    pub lift_on_boundary: Form,
    /// `d j − ι_{ξ} EL`.
    pub noether_residual: Form,
    /// `μ_1(∂_t)`.
    pub momentum: Form,
}

/// Runs the time-translation computations on a built theory.
pub fn time_translation_momentum(mech: &MechContext, data: &LagrangianData) -> Result<TimeTranslation> {
    let ctx = mech.ctx();
    let t = mech.time_translation();
    let rho = diffeo_action(ctx, &t)?;
    let lepage_variation = rho.lie_derivative(&data.lepage())?;
    let momentum = data.momentum(std::slice::from_ref(&rho))?;
    let energy = Form::scalar(mech.energy());
    let momentum_residual = momentum.try_add(&energy)?;
    let lift = JetVectorField::cartan_lift(ctx, &t)?;
    let lift_on_boundary = data.boundary().interior(&lift)?;
    let xi = JetVectorField::prolong(diffeo_xi(ctx, &t)?);
    let noether_residual = energy
        .horizontal_differential()?
        .try_sub(&data.euler_lagrange().interior(&xi)?)?;
    Ok(TimeTranslation {
        lepage_variation,
        momentum_residual,
        lift_on_boundary,
        noether_residual,
        momentum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_scalar;

    #[test]
    fn free_particle() {
        let m = MechContext::free(1).unwrap();
        let data = m.build().unwrap();
        let expect = crate::text::parse_form(m.ctx(), "{-q^1_{,11}} δq^1∧dx^1").unwrap();
        assert_eq!(data.euler_lagrange(), &expect);
        let tt = time_translation_momentum(&m, &data).unwrap();
        assert!(tt.momentum_residual.is_zero());
    }

    #[test]
    fn anharmonic_pair() {
        let ctx = Ctx::mechanics(2).unwrap();
        let v = parse_scalar(ctx, "1/2*q^1^2 + q^1*q^2^3 - 2/3*q^2^4").unwrap();
        let m = MechContext::new(2, v).unwrap();
        let data = m.build().unwrap();
        assert_eq!(data.omega(), &m.printed_omega().unwrap());
        let tt = time_translation_momentum(&m, &data).unwrap();
        assert!(tt.lepage_variation.is_zero());
        assert!(tt.momentum_residual.is_zero());
        assert!(tt.lift_on_boundary.is_zero());
        assert!(tt.noether_residual.is_zero());
        for (u, val) in m.action_on_coordinates(3).unwrap() {
            let expect = if u == Var::x(1) { 1 } else { 0 };
            assert_eq!(val, JetScalar::int(ctx, expect));
        }
        let bad = parse_scalar(ctx, "q^1_{,1}").unwrap();
        assert!(MechContext::new(2, bad).is_err());
    }
}
