//! Lagrangian field theories on the jet bundle and the Hilbert–Einstein
//! theory: Euler operator, Euler–Lagrange and boundary forms, Lepage form,
//! premultisymplectic form, Noether currents and invariance checks.

use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::fields::{diffeo_action, diffeo_xi, JetVectorField, SpacetimeField};
use crate::formalg::Form;
use crate::geometry::{FormFamily, Geometry, Variance};
use crate::jetscalar::{Ctx, JetScalar};
use crate::poly::{MultiIndex, Var, VarKind};
use crate::rational::Rational;

/// `P(ω) = Σ (−1)^{|C|} ∂̂_C(ω_{u,C}) δu ∧ dx^1 ∧ … ∧ dx^n` for a form of
/// bidegree `(1,n)`.
pub fn euler_operator(omega: &Form) -> Result<Form> {
    let ctx = omega.ctx();
    let n = ctx.n();
    let top: Vec<usize> = (1..=n).collect();
    let mut parts = Vec::with_capacity(omega.len());
    for (key, f) in omega.terms() {
        if key.bidegree() != (1, n) {
            return Err(Error::Bidegree {
                expected: format!("(1, {n})"),
                found: format!("{:?}", key.bidegree()),
            });
        }
        let u = key.vertical()[0];
        let VarKind::Field(comp, c) = u.kind() else {
            return Err(Error::Schema("vertical generator must be a field coordinate"));
        };
        let mut coeff = f.horizontal_derivative_multi(c)?;
        if c.order() % 2 == 1 {
            coeff = -coeff;
        }
        parts.push(Form::monomial(coeff, &[Var::field(comp, MultiIndex::ZERO)], &top)?);
    }
    Form::sum(ctx, &parts)
}

/// Lagrangian `L`, Euler–Lagrange form `EL` and boundary form `γ` with
/// `EL − δL = dγ`.
#[derive(Debug)]
pub struct LagrangianData {
    ctx: Ctx,
    lagrangian: Form,
    euler_lagrange: Form,
    boundary: Form,
    omega: OnceLock<Form>,
}

/// Outcome of [`LagrangianData::hamiltonian_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianCheck {
    /// `ι_X ω + 𝐝α`.
    pub residual: Form,
    /// `𝓛_X ω`.
    pub lie_omega: Form,
    /// `ι_{X⊥} EL − dj` with `j = −α_{(0,n−1)}`.
    pub current: Form,
}

impl HamiltonianCheck {
    pub fn is_hamiltonian(&self) -> bool {
        self.residual.is_zero()
    }

    pub fn conditions_hold(&self) -> bool {
        self.lie_omega.is_zero() && self.current.is_zero()
    }
}

impl LagrangianData {
    /// `EL − δL − dγ`.
    pub fn split_residual(lagrangian: &Form, euler_lagrange: &Form, boundary: &Form) -> Result<Form> {
        euler_lagrange
            .try_sub(&lagrangian.vertical_differential())?
            .try_sub(&boundary.horizontal_differential()?)
    }

    /// Assembles the data and asserts the split identity.
    pub fn new(lagrangian: Form, euler_lagrange: Form, boundary: Form) -> Result<Self> {
        let ctx = lagrangian.ctx();
        let n = ctx.n();
        for (form, expect) in [
            (&lagrangian, (0, n)),
            (&euler_lagrange, (1, n)),
            (&boundary, (1, n - 1)),
        ] {
            if let Some(b) = form.bidegrees().into_iter().find(|b| *b != expect) {
                return Err(Error::Bidegree {
                    expected: format!("{expect:?}"),
                    found: format!("{b:?}"),
                });
            }
        }
        let residual = Self::split_residual(&lagrangian, &euler_lagrange, &boundary)?;
        if !residual.is_zero() {
            return Err(Error::SelfCheck(format!(
                "EL − δL − dγ = {}",
                crate::text::form_string(&residual, 200)
            )));
        }
        Ok(LagrangianData {
            ctx,
            lagrangian,
            euler_lagrange,
            boundary,
            omega: OnceLock::new(),
        })
    }

    pub fn ctx(&self) -> Ctx {
        self.ctx
    }

    pub fn lagrangian(&self) -> &Form {
        &self.lagrangian
    }

    pub fn euler_lagrange(&self) -> &Form {
        &self.euler_lagrange
    }

    pub fn boundary(&self) -> &Form {
        &self.boundary
    }

    /// `λ = L + γ`.
    pub fn lepage(&self) -> Form {
        &self.lagrangian + &self.boundary
    }

    /// `ω = EL + δγ`.
    pub fn omega(&self) -> &Form {
        self.omega
            .get_or_init(|| &self.euler_lagrange + &self.boundary.vertical_differential())
    }

    /// `j_v = −ι_{v̂} L − ι_{ξ_v} γ`.
    pub fn noether_current(&self, v: &SpacetimeField) -> Result<Form> {
        let lift = JetVectorField::cartan_lift(self.ctx, v)?;
        let xi = JetVectorField::prolong(diffeo_xi(self.ctx, v)?);
        let a = self.lagrangian.interior(&lift)?;
        let b = self.boundary.interior(&xi)?;
        Ok(-(&a + &b))
    }

    /// `d j_v − ι_{ξ_v} EL`.
    pub fn noether_residual(&self, v: &SpacetimeField) -> Result<Form> {
        let xi = JetVectorField::prolong(diffeo_xi(self.ctx, v)?);
        self.noether_current(v)?
            .horizontal_differential()?
            .try_sub(&self.euler_lagrange.interior(&xi)?)
    }

    /// `𝓛_{ρ(v)} L` and `𝓛_{ρ(v)} γ`, which vanish for a manifest symmetry.
    pub fn lepage_variation(&self, v: &SpacetimeField) -> Result<(Form, Form)> {
        let rho = diffeo_action(self.ctx, v)?;
        Ok((
            rho.lie_derivative(&self.lagrangian)?,
            rho.lie_derivative(&self.boundary)?,
        ))
    }

    /// `ι_{X_1} ⋯ ι_{X_k} α`.
    pub fn contract(fields: &[JetVectorField], alpha: &Form) -> Result<Form> {
        let mut out = alpha.clone();
        for x in fields.iter().rev() {
            out = out.interior(x)?;
        }
        Ok(out)
    }

    /// `μ_k = ι_{X_1} ⋯ ι_{X_k} λ`.
    pub fn momentum(&self, fields: &[JetVectorField]) -> Result<Form> {
        if fields.is_empty() || fields.len() > self.ctx.n() {
            return Ok(Form::zero(self.ctx));
        }
        Self::contract(fields, &self.lepage())
    }

    /// `ν = (−1)^k ι_{X_1} ⋯ ι_{X_k} ω`.
    pub fn nu(&self, fields: &[JetVectorField]) -> Result<Form> {
        let out = Self::contract(fields, self.omega())?;
        Ok(if fields.len() % 2 == 1 { -out } else { out })
    }

    /// Hamiltonian condition `ι_X ω = −𝐝α` and the two equivalent
    /// conditions `𝓛_X ω = 0`, `ι_{X⊥} EL = dj`.
    pub fn hamiltonian_check(&self, x: &JetVectorField, alpha: &Form) -> Result<HamiltonianCheck> {
        let n = self.ctx.n();
        let residual = self
            .omega()
            .interior(x)?
            .try_add(&alpha.total_differential()?)?;
        let lie_omega = x.lie_derivative(self.omega())?;
        let mut perp = Form::zero(self.ctx);
        for xi in x.vertical_part() {
            perp = perp.try_add(&self.euler_lagrange.interior(&JetVectorField::Vertical(xi.clone()))?)?;
        }
        let j = -alpha.component(0, n - 1);
        let current = perp.try_sub(&j.horizontal_differential()?)?;
        Ok(HamiltonianCheck {
            residual,
            lie_omega,
            current,
        })
    }
}

/// The Hilbert–Einstein theory at a fixed dimension.
pub struct GrTheory {
    geometry: Arc<Geometry>,
    data: LagrangianData,
}

/// Builds `L = R vol`, `EL = −G^{ab} δg_{ab} ∧ vol` and
/// `γ = g^{ad} g^{bc}(∇_c δg_{ab} − ∇_a δg_{bc}) ∧ ι_{∂̂_d} vol`,
/// asserting `EL − δL = dγ`.
pub fn build_gr_theory(ctx: Ctx) -> Result<GrTheory> {
    let geo = Geometry::of(ctx)?;
    let n = ctx.n();
    let vol = geo.vol();
    let lagrangian = vol.mul_scalar(geo.scalar_curvature());
    let mut el = Vec::new();
    for a in 1..=n {
        for b in 1..=n {
            let dg = Form::delta_g(ctx, a, b, MultiIndex::ZERO)?;
            el.push(dg.mul_scalar(&-geo.einstein_upper(a, b)));
        }
    }
    let euler_lagrange = Form::sum(ctx, &el)?.try_wedge(&vol)?;
    let boundary = boundary_form(&geo)?;
    let data = LagrangianData::new(lagrangian, euler_lagrange, boundary)?;
    Ok(GrTheory { geometry: geo, data })
}

fn boundary_form(geo: &Geometry) -> Result<Form> {
    let ctx = geo.ctx();
    let n = ctx.n();
    let vol = geo.vol();
    let nabla = geo.covariant_derivative(&geo.delta_metric_family()?)?;
    let mut parts = Vec::new();
    for d in 1..=n {
        let mut inner = Vec::new();
        for a in 1..=n {
            for b in 1..=n {
                for c in 1..=n {
                    let coeff = geo.ginv(a, d) * geo.ginv(b, c);
                    if coeff.is_zero() {
                        continue;
                    }
                    let diff = nabla.get(&[c, a, b]).try_sub(nabla.get(&[a, b, c]))?;
                    inner.push(diff.mul_scalar(&coeff));
                }
            }
        }
        parts.push(Form::sum(ctx, &inner)?.try_wedge(&vol.interior_coordinate(d)?)?);
    }
    Form::sum(ctx, &parts)
}

impl GrTheory {
    pub fn ctx(&self) -> Ctx {
        self.data.ctx
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn data(&self) -> &LagrangianData {
        &self.data
    }

    fn vol(&self) -> Form {
        self.geometry.vol()
    }

    /// `v_a = g_{ab} v^b`.
    pub fn lowered(&self, v: &SpacetimeField) -> Result<Vec<JetScalar>> {
        let ctx = self.ctx();
        let n = ctx.n();
        let comps = (1..=n).map(|b| v.component(ctx, b)).collect::<Result<Vec<_>>>()?;
        Ok((1..=n)
            .map(|a| JetScalar::sum(ctx, (1..=n).map(|b| &self.geometry.g(a, b) * &comps[b - 1])))
            .collect())
    }

    /// `∇_a v^b` as a family `(a, b)`.
    pub fn nabla_vector(&self, v: &SpacetimeField) -> Result<FormFamily> {
        let ctx = self.ctx();
        let fam = FormFamily::scalars(ctx, vec![Variance::Contravariant], |t| v.component(ctx, t[0]))?;
        self.geometry.covariant_derivative(&fam)
    }

    /// `F^{ab} = ∇^a v^b − ∇^b v^a`.
    pub fn vorticity(&self, v: &SpacetimeField) -> Result<FormFamily> {
        let ctx = self.ctx();
        let n = ctx.n();
        let nabla = self.nabla_vector(v)?;
        let coeff = |a: usize, b: usize| -> JetScalar {
            let terms = (1..=n).map(|c| {
                let f = nabla.get(&[c, b]).coefficient(&Default::default()).cloned();
                self.geometry.ginv(a, c) * &f.unwrap_or_else(|| JetScalar::zero(ctx))
            });
            JetScalar::sum(ctx, terms.collect::<Vec<_>>())
        };
        FormFamily::scalars(ctx, vec![Variance::Contravariant; 2], |t| {
            Ok(&coeff(t[0], t[1]) - &coeff(t[1], t[0]))
        })
    }

    /// `d(½ F^{ab} ι_{∂̂_a} ι_{∂̂_b} vol)`.
    pub fn exact_current_term(&self, v: &SpacetimeField) -> Result<Form> {
        let ctx = self.ctx();
        let n = ctx.n();
        let f = self.vorticity(v)?;
        let vol = self.vol();
        let mut parts = Vec::new();
        for a in 1..=n {
            for b in 1..=n {
                let iab = vol.interior_coordinate(b)?.interior_coordinate(a)?;
                parts.push(iab.try_wedge(f.get(&[a, b]))?);
            }
        }
        Form::sum(ctx, &parts)?
            .scale(&Rational::new(1, 2))
            .horizontal_differential()
    }

    /// `Σ_{a,b} c^{ab} w_a ι_{∂̂_b} vol` for a symmetric coefficient table.
    fn contracted_current(&self, w: &[JetScalar], coeff: impl Fn(usize, usize) -> JetScalar) -> Result<Form> {
        let ctx = self.ctx();
        let n = ctx.n();
        let vol = self.vol();
        let mut parts = Vec::new();
        for b in 1..=n {
            let f = JetScalar::sum(ctx, (1..=n).map(|a| &coeff(a, b) * &w[a - 1]).collect::<Vec<_>>());
            parts.push(vol.interior_coordinate(b)?.mul_scalar(&f));
        }
        Form::sum(ctx, &parts)
    }

    /// The closed form of the Noether current:
    /// `2 G^{ab} v_a ι_{∂̂_b} vol + d(½ (∇^a v^b − ∇^b v^a) ι_{∂̂_a} ι_{∂̂_b} vol)`.
    pub fn noether_current_formula(&self, v: &SpacetimeField) -> Result<Form> {
        let low = self.lowered(v)?;
        let geo = &self.geometry;
        let first = self.contracted_current(&low, |a, b| geo.einstein_upper(a, b).scale(&Rational::int(2)))?;
        first.try_add(&self.exact_current_term(v)?)
    }

    /// `ι_{ξ_v} EL − d(2 G^{ab} v_b ι_{∂̂_a} vol)`.
    pub fn euler_lagrange_contraction_residual(&self, v: &SpacetimeField) -> Result<Form> {
        let ctx = self.ctx();
        let xi = JetVectorField::prolong(diffeo_xi(ctx, v)?);
        let low = self.lowered(v)?;
        let geo = &self.geometry;
        let inner = self.contracted_current(&low, |a, b| geo.einstein_upper(a, b).scale(&Rational::int(2)))?;
        self.data
            .euler_lagrange
            .interior(&xi)?
            .try_sub(&inner.horizontal_differential()?)
    }

    /// `ι_{ξ_v} γ + 2 Ric^{ab} v_a ι_{∂̂_b} vol + d(½ F^{ab} ι_{∂̂_a}ι_{∂̂_b} vol)`.
    pub fn boundary_contraction_residual(&self, v: &SpacetimeField) -> Result<Form> {
        let ctx = self.ctx();
        let xi = JetVectorField::prolong(diffeo_xi(ctx, v)?);
        let low = self.lowered(v)?;
        let geo = &self.geometry;
        let ric = self.contracted_current(&low, |a, b| geo.ricci_upper(a, b).scale(&Rational::int(2)))?;
        self.data
            .boundary
            .interior(&xi)?
            .try_add(&ric)?
            .try_add(&self.exact_current_term(v)?)
    }

    /// `ι_{ξ_v} δg_{ab} + ∇_a v_b + ∇_b v_a` for all `(a, b)`.
    pub fn killing_residual(&self, v: &SpacetimeField) -> Result<FormFamily> {
        let ctx = self.ctx();
        let xi = JetVectorField::prolong(diffeo_xi(ctx, v)?);
        let low = self.lowered(v)?;
        let fam = FormFamily::scalars(ctx, vec![Variance::Covariant], |t| Ok(low[t[0] - 1].clone()))?;
        let nabla = self.geometry.covariant_derivative(&fam)?;
        FormFamily::new(ctx, vec![Variance::Covariant; 2], |t| {
            let contraction = Form::delta_g(ctx, t[0], t[1], MultiIndex::ZERO)?.interior(&xi)?;
            contraction
                .try_add(nabla.get(&[t[0], t[1]]))?
                .try_add(nabla.get(&[t[1], t[0]]))
        })
    }

    /// `(𝓛_{ξ_v} L + d(R v^a ι_{∂̂_a} vol), 𝓛_{v̂} L − d(R v^a ι_{∂̂_a} vol))`.
    pub fn lagrangian_variation_split(&self, v: &SpacetimeField) -> Result<(Form, Form)> {
        let ctx = self.ctx();
        let n = ctx.n();
        let xi = JetVectorField::prolong(diffeo_xi(ctx, v)?);
        let lift = JetVectorField::cartan_lift(ctx, v)?;
        let vol = self.vol();
        let r = self.geometry.scalar_curvature();
        let mut parts = Vec::new();
        for a in 1..=n {
            parts.push(vol.interior_coordinate(a)?.mul_scalar(&(r * &v.component(ctx, a)?)));
        }
        let exact = Form::sum(ctx, &parts)?.horizontal_differential()?;
        let l = &self.data.lagrangian;
        Ok((
            xi.lie_derivative(l)?.try_add(&exact)?,
            lift.lie_derivative(l)?.try_sub(&exact)?,
        ))
    }

    /// `∇_a G^{ab}` for each `b`.
    pub fn einstein_divergence(&self) -> Result<Vec<JetScalar>> {
        let ctx = self.ctx();
        let n = ctx.n();
        let geo = &self.geometry;
        let fam = FormFamily::scalars(ctx, vec![Variance::Contravariant; 2], |t| {
            Ok(geo.einstein_upper(t[0], t[1]).clone())
        })?;
        let nabla = geo.covariant_derivative(&fam)?;
        Ok((1..=n)
            .map(|b| {
                let terms = (1..=n)
                    .filter_map(|a| nabla.get(&[a, a, b]).coefficient(&Default::default()).cloned());
                JetScalar::sum(ctx, terms.collect::<Vec<_>>())
            })
            .collect())
    }

    /// `(𝐝λ − ω, 𝐝ω)`.
    pub fn omega_residuals(&self) -> Result<(Form, Form)> {
        let omega = self.data.omega();
        let d_lambda = self.data.lepage().total_differential()?;
        Ok((d_lambda.try_sub(omega)?, omega.total_differential()?))
    }

    /// `P(δL) − EL`.
    pub fn euler_operator_residual(&self) -> Result<Form> {
        euler_operator(&self.data.lagrangian.vertical_differential())?.try_sub(&self.data.euler_lagrange)
    }

    /// The index families entering the boundary form, each with the
    /// signature it is expected to satisfy, and `γ` itself as an invariant.
    pub fn boundary_families(&self) -> Result<Vec<(&'static str, FormFamily)>> {
        let ctx = self.ctx();
        let geo = &self.geometry;
        let vol = self.vol();
        let dg = geo.delta_metric_family()?;
        Ok(vec![
            ("g^{ab}", geo.inverse_metric_family()?),
            ("δg_{ab}", dg.clone()),
            ("∇_c δg_{ab}", geo.covariant_derivative(&dg)?),
            (
                "ι_{∂̂_d} vol",
                FormFamily::new(ctx, vec![Variance::Covariant], |t| vol.interior_coordinate(t[0]))?,
            ),
            ("vol", FormFamily::new(ctx, vec![], |_| Ok(vol.clone()))?),
            ("γ", FormFamily::new(ctx, vec![], |_| Ok(self.data.boundary.clone()))?),
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_theory_is_trivial() {
        let t = build_gr_theory(Ctx::metric(1).unwrap()).unwrap();
        assert!(t.data().lagrangian().is_zero());
        assert!(t.data().euler_lagrange().is_zero());
    }

    #[test]
    fn two_dimensional_identities() {
        let c = Ctx::metric(2).unwrap();
        let t = build_gr_theory(c).unwrap();
        assert!(t.data().euler_lagrange().is_zero());
        assert!(t.euler_operator_residual().unwrap().is_zero());
        let v = SpacetimeField::formal('v').unwrap();
        let (l, g) = t.data().lepage_variation(&v).unwrap();
        assert!(l.is_zero());
        assert!(g.is_zero());
        assert!(t.data().noether_residual(&v).unwrap().is_zero());
        let j = t.data().noether_current(&v).unwrap();
        assert_eq!(j, t.noether_current_formula(&v).unwrap());
        assert!(t.killing_residual(&v).unwrap().is_zero());
        assert!(t.boundary_contraction_residual(&v).unwrap().is_zero());
        let (a, b) = t.lagrangian_variation_split(&v).unwrap();
        assert!(a.is_zero() && b.is_zero());
        let (a, b) = t.omega_residuals().unwrap();
        assert!(a.is_zero() && b.is_zero());
    }

    #[test]
    fn source_forms_are_fixed_by_euler_operator() {
        let c = Ctx::metric(2).unwrap();
        let f = JetScalar::g(c, 1, 2, MultiIndex::ZERO).unwrap();
        let w = Form::delta_g(c, 1, 1, MultiIndex::ZERO)
            .unwrap()
            .try_wedge(&Form::coordinate_volume(c))
            .unwrap()
            .mul_scalar(&f);
        assert_eq!(euler_operator(&w).unwrap(), w);
        let beta = Form::delta_g(c, 1, 2, MultiIndex::unit(1))
            .unwrap()
            .try_wedge(&Form::dx(c, 2).unwrap())
            .unwrap()
            .mul_scalar(&JetScalar::g(c, 2, 2, MultiIndex::unit(2)).unwrap());
        let d_beta = beta.horizontal_differential().unwrap();
        assert!(!d_beta.is_zero());
        assert!(euler_operator(&d_beta).unwrap().is_zero());
    }
}
