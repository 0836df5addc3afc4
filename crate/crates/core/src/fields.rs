//! Vector fields on the jet bundle: prolonged evolutionary fields, Cartan
//! lifts and the diagonal action `ρ(v) = ξ_v + v̂` of spacetime fields.

use std::fmt;
use std::sync::{Arc, Mutex};

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::formalg::{Form, Pairing};
use crate::jetscalar::{horizontal_poly, Ctx, JetScalar, Schema};
use crate::poly::{Component, MultiIndex, Poly, Var, VarKind};
use crate::rational::Rational;
use crate::text::RESERVED_LABELS;

/// A vector field on spacetime: either a formal label `v` whose components
/// and derivatives are independent symbols `∂_C v^a`, or explicit
/// polynomial components in the coordinates `x^b`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum SpacetimeField {
    Formal(u8),
    Polynomial(Vec<Poly>),
}

impl SpacetimeField {
    pub fn formal(label: char) -> Result<Self> {
        if !label.is_ascii_lowercase() || RESERVED_LABELS.contains(&label) {
            return Err(Error::UnknownLabel(label.to_string()));
        }
        Ok(SpacetimeField::Formal(label as u8))
    }

    /// Explicit components: polynomials in `x^1..x^n` and, optionally, in
    /// formal symbols `∂_C v^a` (so brackets of formal labels close).
    pub fn polynomial(ctx: Ctx, components: Vec<Poly>) -> Result<Self> {
        if components.len() != ctx.n() {
            return Err(Error::Arity {
                expected: ctx.n(),
                found: components.len(),
            });
        }
        for p in &components {
            for v in p.vars() {
                match v.kind() {
                    VarKind::X(b) => ctx.check_index(b as usize)?,
                    VarKind::VSym(..) => {
                        JetScalar::var(ctx, v)?;
                    }
                    _ => return Err(Error::Schema("spacetime field components depend on x only")),
                }
            }
        }
        Ok(SpacetimeField::Polynomial(components))
    }

    /// Components as polynomials; a formal label `v` yields `v^a`.
    pub fn components(&self, n: usize) -> Vec<Poly> {
        match self {
            SpacetimeField::Formal(l) => (1..=n)
                .map(|a| Poly::var(Var::vsym(*l, a, MultiIndex::ZERO)))
                .collect(),
            SpacetimeField::Polynomial(c) => c.clone(),
        }
    }

    /// The coordinate field `∂_a`.
    pub fn coordinate(ctx: Ctx, a: usize) -> Result<Self> {
        ctx.check_index(a)?;
        let comps = (1..=ctx.n())
            .map(|i| if i == a { Poly::one() } else { Poly::zero() })
            .collect();
        Ok(SpacetimeField::Polynomial(comps))
    }

    /// The linear field `x^b ∂_a`.
    pub fn linear(ctx: Ctx, b: usize, a: usize) -> Result<Self> {
        ctx.check_index(a)?;
        ctx.check_index(b)?;
        let comps = (1..=ctx.n())
            .map(|i| {
                if i == a {
                    Poly::var(Var::x(b))
                } else {
                    Poly::zero()
                }
            })
            .collect();
        Ok(SpacetimeField::Polynomial(comps))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, SpacetimeField::Polynomial(c) if c.iter().all(Poly::is_zero))
    }

    /// `∂_C v^a` as a jet scalar.
    pub fn derivative(&self, ctx: Ctx, a: usize, c: MultiIndex) -> Result<JetScalar> {
        ctx.check_index(a)?;
        match self {
            SpacetimeField::Formal(label) => JetScalar::vsym(ctx, *label, a, c),
            SpacetimeField::Polynomial(comps) => {
                let p = comps.get(a - 1).cloned().ok_or(Error::DimensionMismatch)?;
                JetScalar::from_poly(ctx, p).horizontal_derivative_multi(c)
            }
        }
    }

    pub fn component(&self, ctx: Ctx, a: usize) -> Result<JetScalar> {
        self.derivative(ctx, a, MultiIndex::ZERO)
    }

    /// Lie bracket `[u,v]^a = u^c ∂_c v^a − v^c ∂_c u^a`.
    pub fn bracket(&self, other: &SpacetimeField, n: usize) -> Result<SpacetimeField> {
        let u = self.components(n);
        let v = other.components(n);
        if u.len() != n || v.len() != n {
            return Err(Error::DimensionMismatch);
        }
        let comps = (0..n)
            .map(|a| {
                let mut acc = Poly::zero();
                for c in 0..n {
                    acc = acc
                        .add(&u[c].mul(&horizontal_poly(&v[a], c + 1)))
                        .sub(&v[c].mul(&horizontal_poly(&u[a], c + 1)));
                }
                acc
            })
            .collect();
        Ok(SpacetimeField::Polynomial(comps))
    }

    /// `Σ c_i v_i`.
    pub fn combination(items: &[(Rational, &SpacetimeField)], n: usize) -> Result<SpacetimeField> {
        if items.is_empty() {
            return Err(Error::Schema("empty combination"));
        }
        let mut acc = vec![Poly::zero(); n];
        for (c, f) in items {
            let comps = f.components(n);
            if comps.len() != n {
                return Err(Error::DimensionMismatch);
            }
            for (s, p) in acc.iter_mut().zip(&comps) {
                *s = s.add(&p.scale(c));
            }
        }
        Ok(SpacetimeField::Polynomial(acc))
    }
}

impl fmt::Display for SpacetimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpacetimeField::Formal(l) => write!(f, "{}", *l as char),
            SpacetimeField::Polynomial(comps) => {
                f.write_str("[")?;
                for (i, p) in comps.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str("]")
            }
        }
    }
}

struct EvolutionaryInner {
    ctx: Ctx,
    components: FxHashMap<Component, JetScalar>,
    prolonged: Mutex<FxHashMap<Var, JetScalar>>,
}

/// Evolutionary field with components `ξ_u` per fibre coordinate. Its
/// prolongation `∂̂_C ξ_u` is computed lazily and memoized.
#[derive(Clone)]
pub struct Evolutionary(Arc<EvolutionaryInner>);

impl fmt::Debug for Evolutionary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.0.components.iter()).finish()
    }
}

impl Evolutionary {
    /// Components given per fibre component; missing entries are zero.
    pub fn new(ctx: Ctx, components: impl IntoIterator<Item = (Component, JetScalar)>) -> Result<Self> {
        let mut map = FxHashMap::default();
        let valid = ctx.components();
        for (comp, f) in components {
            if !valid.contains(&comp) {
                return Err(Error::Schema("component outside the fibre schema"));
            }
            if f.ctx() != ctx {
                return Err(Error::DimensionMismatch);
            }
            if !f.is_zero() {
                map.insert(comp, f);
            }
        }
        Ok(Evolutionary(Arc::new(EvolutionaryInner {
            ctx,
            components: map,
            prolonged: Mutex::new(FxHashMap::default()),
        })))
    }

    pub fn ctx(&self) -> Ctx {
        self.0.ctx
    }

    pub fn component(&self, comp: Component) -> JetScalar {
        self.0
            .components
            .get(&comp)
            .cloned()
            .unwrap_or_else(|| JetScalar::zero(self.0.ctx))
    }

    pub fn is_zero(&self) -> bool {
        self.0.components.is_empty()
    }

    /// `∂̂_C ξ_u`, the prolonged component paired with `δu_{,C}`.
    pub fn prolonged(&self, u: Var) -> Result<JetScalar> {
        let VarKind::Field(comp, c) = u.kind() else {
            return Err(Error::Schema("prolongation acts on field coordinates"));
        };
        if c.order() == 0 {
            return Ok(self.component(comp));
        }
        if let Some(hit) = self.0.prolonged.lock().expect("poisoned").get(&u) {
            return Ok(hit.clone());
        }
        let d = c.first_direction().expect("nonzero order");
        let lower = Var::field(comp, c.remove(d).expect("present"));
        let out = self.prolonged(lower)?.horizontal_derivative(d)?;
        self.0
            .prolonged
            .lock()
            .expect("poisoned")
            .insert(u, out.clone());
        Ok(out)
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: &Rational, other: &Evolutionary, b: &Rational) -> Result<Self> {
        let ctx = self.ctx();
        let comps = ctx
            .components()
            .into_iter()
            .map(|comp| {
                let f = &self.component(comp).scale(a) + &other.component(comp).scale(b);
                (comp, f)
            })
            .collect::<Vec<_>>();
        Evolutionary::new(ctx, comps)
    }
}

/// Vector field on the jet bundle.
#[derive(Clone, Debug)]
pub enum JetVectorField {
    /// Prolongation of an evolutionary field.
    Vertical(Evolutionary),
    /// `v^a ∂̂_a` with the given components.
    Horizontal(Vec<JetScalar>),
    Sum(Vec<JetVectorField>),
}

/// Result of [`JetVectorField::check_strict`].
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Strictness {
    Vertical,
    Horizontal,
    /// Both commutators vanish; only the zero field does this.
    Both,
    Neither,
}

impl JetVectorField {
    pub fn prolong(xi: Evolutionary) -> Self {
        JetVectorField::Vertical(xi)
    }

    /// Cartan lift `v̂ = v^a ∂̂_a` of a spacetime field.
    pub fn cartan_lift(ctx: Ctx, v: &SpacetimeField) -> Result<Self> {
        let comps = (1..=ctx.n())
            .map(|a| v.component(ctx, a))
            .collect::<Result<Vec<_>>>()?;
        Ok(JetVectorField::Horizontal(comps))
    }

    /// `∂̂_a`.
    pub fn coordinate(ctx: Ctx, a: usize) -> Result<Self> {
        ctx.check_index(a)?;
        Ok(JetVectorField::Horizontal(
            (1..=ctx.n())
                .map(|i| JetScalar::int(ctx, (i == a) as i64))
                .collect(),
        ))
    }

    /// Interior product `ι_X α`.
    pub fn interior(&self, alpha: &Form) -> Result<Form> {
        alpha.interior(self)
    }

    /// Lie derivative via Cartan's formula on the strict summands.
    pub fn lie_derivative(&self, alpha: &Form) -> Result<Form> {
        match self {
            JetVectorField::Vertical(_) => {
                let a = alpha.vertical_differential().interior(self)?;
                let b = alpha.interior(self)?.vertical_differential();
                a.try_add(&b)
            }
            JetVectorField::Horizontal(_) => {
                let a = alpha.horizontal_differential()?.interior(self)?;
                let b = alpha.interior(self)?.horizontal_differential()?;
                a.try_add(&b)
            }
            JetVectorField::Sum(parts) => {
                let mut acc = Form::zero(alpha.ctx());
                for p in parts {
                    acc = acc.try_add(&p.lie_derivative(alpha)?)?;
                }
                Ok(acc)
            }
        }
    }

    /// Action on functions, `X(f) = ι_X 𝐝f`.
    pub fn apply(&self, f: &JetScalar) -> Result<JetScalar> {
        let df = Form::scalar(f.clone()).total_differential()?;
        let out = df.interior(self)?;
        let value = out.terms().next().map(|(_, c)| c.clone());
        Ok(value.unwrap_or_else(|| JetScalar::zero(f.ctx())))
    }

    /// The strictly vertical summands.
    pub fn vertical_part(&self) -> Vec<&Evolutionary> {
        match self {
            JetVectorField::Vertical(x) => vec![x],
            JetVectorField::Horizontal(_) => vec![],
            JetVectorField::Sum(ps) => ps.iter().flat_map(|p| p.vertical_part()).collect(),
        }
    }

    /// The strictly horizontal summands.
    pub fn horizontal_part(&self) -> Vec<&[JetScalar]> {
        match self {
            JetVectorField::Vertical(_) => vec![],
            JetVectorField::Horizontal(h) => vec![h.as_slice()],
            JetVectorField::Sum(ps) => ps.iter().flat_map(|p| p.horizontal_part()).collect(),
        }
    }

    /// Classifies the field by evaluating `[ι_X, d]` and `[ι_X, δ]` on all
    /// generators of jet order at most `depth`.
    pub fn check_strict(&self, ctx: Ctx, depth: usize) -> Result<Strictness> {
        let mut gens: Vec<Form> = Vec::new();
        for k in 0..=depth {
            for comp in ctx.components() {
                for c in ctx.multi_indices(k) {
                    let u = Var::field(comp, c);
                    gens.push(Form::scalar(JetScalar::var(ctx, u)?));
                    gens.push(Form::delta(ctx, u)?);
                }
            }
        }
        for e in 1..=ctx.n() {
            gens.push(Form::dx(ctx, e)?);
            gens.push(Form::scalar(JetScalar::x(ctx, e)?));
        }
        let mut vertical = true;
        let mut horizontal = true;
        for g in &gens {
            let ig = g.interior(self)?;
            if vertical {
                let c = g.horizontal_differential()?.interior(self)?;
                vertical = c.try_add(&ig.horizontal_differential()?)?.is_zero();
            }
            if horizontal {
                let c = g.vertical_differential().interior(self)?;
                horizontal = c.try_add(&ig.vertical_differential())?.is_zero();
            }
            if !vertical && !horizontal {
                break;
            }
        }
        Ok(match (vertical, horizontal) {
            (true, true) => Strictness::Both,
            (true, false) => Strictness::Vertical,
            (false, true) => Strictness::Horizontal,
            (false, false) => Strictness::Neither,
        })
    }
}

impl Pairing for JetVectorField {
    fn on_vertical(&self, u: Var) -> Result<JetScalar> {
        match self {
            JetVectorField::Vertical(xi) => xi.prolonged(u),
            JetVectorField::Horizontal(h) => Ok(JetScalar::zero(h[0].ctx())),
            JetVectorField::Sum(ps) => {
                let mut parts = Vec::with_capacity(ps.len());
                for p in ps {
                    parts.push(p.on_vertical(u)?);
                }
                let ctx = parts.first().map(JetScalar::ctx).ok_or(Error::Schema("empty sum"))?;
                Ok(JetScalar::sum(ctx, parts))
            }
        }
    }

    fn on_dx(&self, e: usize) -> Result<JetScalar> {
        match self {
            JetVectorField::Vertical(xi) => Ok(JetScalar::zero(xi.ctx())),
            JetVectorField::Horizontal(h) => h
                .get(e - 1)
                .cloned()
                .ok_or(Error::IndexOutOfRange { index: e, n: h.len() }),
            JetVectorField::Sum(ps) => {
                let mut parts = Vec::with_capacity(ps.len());
                for p in ps {
                    parts.push(p.on_dx(e)?);
                }
                let ctx = parts.first().map(JetScalar::ctx).ok_or(Error::Schema("empty sum"))?;
                Ok(JetScalar::sum(ctx, parts))
            }
        }
    }
}

/// The evolutionary field `ξ_v` of the diffeomorphism action:
/// `ξ_{ab} = −(v^c g_{ab,c} + ∂_a v^{a'} g_{a'b} + ∂_b v^{b'} g_{ab'})`
/// for metrics and `ξ_i = −v^c q^i_{,c}` for scalar fibres.
pub fn diffeo_xi(ctx: Ctx, v: &SpacetimeField) -> Result<Evolutionary> {
    let n = ctx.n();
    let vs: Vec<JetScalar> = (1..=n).map(|a| v.component(ctx, a)).collect::<Result<_>>()?;
    let mut comps = Vec::new();
    for comp in ctx.components() {
        let mut terms = Vec::new();
        for (c, vc) in vs.iter().enumerate() {
            let u = Var::field(comp, MultiIndex::unit(c + 1));
            terms.push(vc * &JetScalar::var(ctx, u)?);
        }
        if let (Schema::Metric, Component::Metric(a, b)) = (ctx.schema(), comp) {
            let (a, b) = (a as usize, b as usize);
            for k in 1..=n {
                let da = v.derivative(ctx, k, MultiIndex::unit(a))?;
                terms.push(&da * &JetScalar::g(ctx, k, b, MultiIndex::ZERO)?);
                let db = v.derivative(ctx, k, MultiIndex::unit(b))?;
                terms.push(&db * &JetScalar::g(ctx, a, k, MultiIndex::ZERO)?);
            }
        }
        comps.push((comp, -JetScalar::sum(ctx, terms)));
    }
    Evolutionary::new(ctx, comps)
}

/// `ρ(v) = ξ_v + v̂`.
pub fn diffeo_action(ctx: Ctx, v: &SpacetimeField) -> Result<JetVectorField> {
    Ok(JetVectorField::Sum(vec![
        JetVectorField::Vertical(diffeo_xi(ctx, v)?),
        JetVectorField::cartan_lift(ctx, v)?,
    ]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(n: usize) -> Ctx {
        Ctx::metric(n).unwrap()
    }

    #[test]
    fn prolongation_of_identity_components() {
        let c = ctx(2);
        let comps: Vec<_> = c
            .components()
            .into_iter()
            .map(|comp| (comp, JetScalar::var(c, Var::field(comp, MultiIndex::ZERO)).unwrap()))
            .collect();
        let xi = JetVectorField::prolong(Evolutionary::new(c, comps).unwrap());
        let u = Var::g(1, 2, MultiIndex::unit(1));
        let w = Form::delta(c, u).unwrap();
        assert_eq!(
            w.interior(&xi).unwrap(),
            Form::scalar(JetScalar::var(c, u).unwrap())
        );
        assert_eq!(xi.check_strict(c, 1).unwrap(), Strictness::Vertical);
    }

    #[test]
    fn strictness_of_lifts_and_action() {
        let c = ctx(2);
        let v = SpacetimeField::formal('v').unwrap();
        let lift = JetVectorField::cartan_lift(c, &v).unwrap();
        assert_eq!(lift.check_strict(c, 1).unwrap(), Strictness::Horizontal);
        let rho = diffeo_action(c, &v).unwrap();
        assert_eq!(rho.check_strict(c, 1).unwrap(), Strictness::Neither);
        let zero = JetVectorField::Vertical(Evolutionary::new(c, []).unwrap());
        assert_eq!(zero.check_strict(c, 1).unwrap(), Strictness::Both);
    }

    #[test]
    fn lie_derivative_of_jet_coordinate_along_lift() {
        let c = ctx(2);
        let v = SpacetimeField::formal('v').unwrap();
        let lift = JetVectorField::cartan_lift(c, &v).unwrap();
        let g = Form::scalar(JetScalar::g(c, 1, 2, MultiIndex::unit(2)).unwrap());
        let mut expect = Vec::new();
        for e in 1..=2 {
            let ve = v.component(c, e).unwrap();
            expect.push(&ve * &JetScalar::g(c, 1, 2, MultiIndex::from_indices(&[2, e])).unwrap());
        }
        assert_eq!(
            lift.lie_derivative(&g).unwrap(),
            Form::scalar(JetScalar::sum(c, expect))
        );
    }

    #[test]
    fn polynomial_bracket() {
        let c = ctx(2);
        let d1 = SpacetimeField::coordinate(c, 1).unwrap();
        let x1d2 = SpacetimeField::linear(c, 1, 2).unwrap();
        // [∂_1, x^1 ∂_2] = ∂_2
        assert_eq!(d1.bracket(&x1d2, 2).unwrap(), SpacetimeField::coordinate(c, 2).unwrap());
        assert!(d1.bracket(&d1, 2).unwrap().is_zero());
    }

    #[test]
    fn action_is_a_homomorphism_on_formal_labels() {
        let c = ctx(2);
        let u = SpacetimeField::formal('u').unwrap();
        let v = SpacetimeField::formal('v').unwrap();
        let uv = u.bracket(&v, 2).unwrap();
        let (ru, rv, ruv) = (
            diffeo_action(c, &u).unwrap(),
            diffeo_action(c, &v).unwrap(),
            diffeo_action(c, &uv).unwrap(),
        );
        for f in [
            JetScalar::g(c, 1, 2, MultiIndex::ZERO).unwrap(),
            JetScalar::g(c, 2, 2, MultiIndex::unit(1)).unwrap(),
            JetScalar::sqrt_neg_det(c).unwrap(),
        ] {
            let lhs = &ru.apply(&rv.apply(&f).unwrap()).unwrap() - &rv.apply(&ru.apply(&f).unwrap()).unwrap();
            assert_eq!(lhs, ruv.apply(&f).unwrap());
        }
    }
}
