//! Levi-Civita geometry on the jet bundle: connection coefficients,
//! curvature, the volume form, index families of forms and their
//! covariant derivatives, covariance checks and divergence formulas.

use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::fields::{diffeo_action, SpacetimeField};
use crate::formalg::Form;
use crate::jetscalar::{Ctx, JetScalar};
use crate::poly::MultiIndex;
use crate::rational::Rational;

/// Index placement of one slot of a [`FormFamily`].
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub enum Variance {
    Covariant,
    Contravariant,
}

/// A dense family of forms indexed by tuples in `1..=n`.
#[derive(Clone, Debug, PartialEq)]
pub struct FormFamily {
    ctx: Ctx,
    signature: Vec<Variance>,
    entries: Vec<Form>,
}

/// All index tuples of the given arity in row-major order, 1-based.
pub fn index_tuples(n: usize, arity: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t| {
                (1..=n).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

impl FormFamily {
    pub fn new(
        ctx: Ctx,
        signature: Vec<Variance>,
        mut entry: impl FnMut(&[usize]) -> Result<Form>,
    ) -> Result<Self> {
        let entries = index_tuples(ctx.n(), signature.len())
            .iter()
            .map(|t| entry(t))
            .collect::<Result<Vec<_>>>()?;
        if entries.iter().any(|f| f.ctx() != ctx) {
            return Err(Error::DimensionMismatch);
        }
        Ok(FormFamily {
            ctx,
            signature,
            entries,
        })
    }

    /// Family of scalar functions.
    pub fn scalars(
        ctx: Ctx,
        signature: Vec<Variance>,
        mut entry: impl FnMut(&[usize]) -> Result<JetScalar>,
    ) -> Result<Self> {
        FormFamily::new(ctx, signature, |t| entry(t).map(Form::scalar))
    }

    pub fn ctx(&self) -> Ctx {
        self.ctx
    }

    pub fn signature(&self) -> &[Variance] {
        &self.signature
    }

    pub fn arity(&self) -> usize {
        self.signature.len()
    }

    fn offset(&self, idx: &[usize]) -> usize {
        assert_eq!(idx.len(), self.arity(), "family arity");
        let n = self.ctx.n();
        idx.iter().fold(0, |acc, &i| {
            assert!((1..=n).contains(&i), "index {i} out of range");
            acc * n + (i - 1)
        })
    }

    pub fn get(&self, idx: &[usize]) -> &Form {
        &self.entries[self.offset(idx)]
    }

    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, &Form)> {
        index_tuples(self.ctx.n(), self.arity())
            .into_iter()
            .zip(self.entries.iter())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Form::is_zero)
    }

    /// Common bidegree of the nonzero entries, if any.
    pub fn bidegree(&self) -> Result<Option<(usize, usize)>> {
        let mut found = None;
        for f in &self.entries {
            for b in f.bidegrees() {
                match found {
                    None => found = Some(b),
                    Some(x) if x == b => {}
                    Some(x) => {
                        return Err(Error::Bidegree {
                            expected: format!("{x:?}"),
                            found: format!("{b:?}"),
                        })
                    }
                }
            }
        }
        Ok(found)
    }

    pub fn map(&self, mut op: impl FnMut(&[usize], &Form) -> Result<Form>) -> Result<FormFamily> {
        let entries = self
            .entries()
            .map(|(t, f)| op(&t, f))
            .collect::<Result<Vec<_>>>()?;
        Ok(FormFamily {
            ctx: self.ctx,
            signature: self.signature.clone(),
            entries,
        })
    }

    pub fn try_sub(&self, other: &FormFamily) -> Result<FormFamily> {
        if self.signature != other.signature || self.ctx != other.ctx {
            return Err(Error::DimensionMismatch);
        }
        self.map(|t, f| f.try_sub(other.get(t)))
    }

    /// Checks `χ^{ab} = −χ^{ba}` for an arity-2 family.
    pub fn check_antisymmetric(&self) -> Result<()> {
        if self.arity() != 2 {
            return Err(Error::Arity {
                expected: 2,
                found: self.arity(),
            });
        }
        let n = self.ctx.n();
        for a in 1..=n {
            for b in a..=n {
                if !self.get(&[a, b]).try_add(self.get(&[b, a]))?.is_zero() {
                    return Err(Error::NotAntisymmetric(format!("({a},{b})")));
                }
            }
        }
        Ok(())
    }
}

/// Curvature data of the metric jet bundle at a fixed dimension.
/// Every quantity is computed on first use and then shared.
pub struct Geometry {
    ctx: Ctx,
    ginv: Vec<JetScalar>,
    gamma: OnceLock<Vec<JetScalar>>,
    riemann: OnceLock<Vec<JetScalar>>,
    ricci: OnceLock<Vec<JetScalar>>,
    scalar: OnceLock<JetScalar>,
    einstein: OnceLock<Vec<JetScalar>>,
}

impl Geometry {
    pub fn new(ctx: Ctx) -> Result<Self> {
        if !ctx.is_metric() {
            return Err(Error::Schema("mechanics"));
        }
        // Curvature involves second derivatives of the metric.
        if ctx.jet_cap() < 2 {
            return Err(Error::JetCapExceeded { cap: ctx.jet_cap() });
        }
        let n = ctx.n();
        let mut ginv = Vec::with_capacity(n * n);
        for a in 1..=n {
            for b in 1..=n {
                ginv.push(JetScalar::inverse_metric(ctx, a, b)?);
            }
        }
        Ok(Geometry {
            ctx,
            ginv,
            gamma: OnceLock::new(),
            riemann: OnceLock::new(),
            ricci: OnceLock::new(),
            scalar: OnceLock::new(),
            einstein: OnceLock::new(),
        })
    }

    /// Shared instance per context.
    pub fn of(ctx: Ctx) -> Result<Arc<Geometry>> {
        static CACHE: OnceLock<Mutex<FxHashMap<Ctx, Arc<Geometry>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(g) = cache.lock().expect("poisoned").get(&ctx) {
            return Ok(g.clone());
        }
        let g = Arc::new(Geometry::new(ctx)?);
        Ok(cache
            .lock()
            .expect("poisoned")
            .entry(ctx)
            .or_insert(g)
            .clone())
    }

    pub fn ctx(&self) -> Ctx {
        self.ctx
    }

    /// Forces every cached quantity. Call before sharing across worker
    /// threads so no thread blocks on a lazy initialization.
    pub fn warm(&self) {
        self.christoffel(1, 1, 1);
        self.riemann(1, 1, 1, 1);
        self.ricci(1, 1);
        self.scalar_curvature();
        self.einstein_upper(1, 1);
    }

    fn n(&self) -> usize {
        self.ctx.n()
    }

    fn idx2(&self, a: usize, b: usize) -> usize {
        (a - 1) * self.n() + (b - 1)
    }

    fn idx3(&self, a: usize, b: usize, c: usize) -> usize {
        let n = self.n();
        ((a - 1) * n + (b - 1)) * n + (c - 1)
    }

    pub fn g(&self, a: usize, b: usize) -> JetScalar {
        JetScalar::g(self.ctx, a, b, MultiIndex::ZERO).expect("valid indices")
    }

    fn g1(&self, a: usize, b: usize, c: usize) -> JetScalar {
        JetScalar::g(self.ctx, a, b, MultiIndex::unit(c)).expect("valid indices")
    }

    /// `g^{ab}`.
    pub fn ginv(&self, a: usize, b: usize) -> &JetScalar {
        &self.ginv[self.idx2(a, b)]
    }

    fn gammas(&self) -> &Vec<JetScalar> {
        self.gamma.get_or_init(|| {
            let n = self.n();
            let half = Rational::new(1, 2);
            let mut out = Vec::with_capacity(n * n * n);
            for a in 1..=n {
                for b in 1..=n {
                    for c in 1..=n {
                        let terms = (1..=n).map(|d| {
                            let bracket = &(&self.g1(d, b, c) + &self.g1(d, c, b)) - &self.g1(b, c, d);
                            self.ginv(a, d) * &bracket
                        });
                        out.push(JetScalar::sum(self.ctx, terms).scale(&half));
                    }
                }
            }
            out
        })
    }

    /// `Γ^a_{bc} = ½ g^{ad}(g_{db,c} + g_{dc,b} − g_{bc,d})`.
    pub fn christoffel(&self, a: usize, b: usize, c: usize) -> &JetScalar {
        &self.gammas()[self.idx3(a, b, c)]
    }

    fn riemann_entry(&self, a: usize, b: usize, c: usize, d: usize) -> JetScalar {
        let n = self.n();
        let mut terms = vec![
            self.christoffel(d, a, c)
                .horizontal_derivative(b)
                .expect("jet cap covers curvature"),
            -self
                .christoffel(d, b, c)
                .horizontal_derivative(a)
                .expect("jet cap covers curvature"),
        ];
        for e in 1..=n {
            terms.push(self.christoffel(e, a, c) * self.christoffel(d, e, b));
            terms.push(-(self.christoffel(e, b, c) * self.christoffel(d, e, a)));
        }
        JetScalar::sum(self.ctx, terms)
    }

    fn riemanns(&self) -> &Vec<JetScalar> {
        self.riemann.get_or_init(|| {
            let n = self.n();
            let tuples = crate::geometry::index_tuples(n, 4);
            let upper: Vec<Option<JetScalar>> = tuples
                .par_iter()
                .map(|t| (t[0] < t[1]).then(|| self.riemann_entry(t[0], t[1], t[2], t[3])))
                .collect();
            let pos = |t: &[usize]| ((((t[0] - 1) * n + t[1] - 1) * n + t[2] - 1) * n) + t[3] - 1;
            tuples
                .iter()
                .map(|t| match t[0].cmp(&t[1]) {
                    std::cmp::Ordering::Less => upper[pos(t)].clone().expect("computed"),
                    std::cmp::Ordering::Equal => JetScalar::zero(self.ctx),
                    std::cmp::Ordering::Greater => {
                        -upper[pos(&[t[1], t[0], t[2], t[3]])].clone().expect("computed")
                    }
                })
                .collect()
        })
    }

    /// `Riem_{abc}{}^d = ∂̂_b Γ^d_{ac} − ∂̂_a Γ^d_{bc} + Γ^e_{ac}Γ^d_{eb} − Γ^e_{bc}Γ^d_{ea}`.
    pub fn riemann(&self, a: usize, b: usize, c: usize, d: usize) -> &JetScalar {
        let n = self.n();
        &self.riemanns()[(((a - 1) * n + b - 1) * n + c - 1) * n + d - 1]
    }

    fn riccis(&self) -> &Vec<JetScalar> {
        self.ricci.get_or_init(|| {
            let n = self.n();
            let pairs: Vec<(usize, usize)> = (1..=n)
                .flat_map(|a| (a..=n).map(move |b| (a, b)))
                .collect();
            let upper: Vec<JetScalar> = pairs
                .par_iter()
                .map(|&(a, b)| {
                    let mut terms = Vec::new();
                    for e in 1..=n {
                        terms.push(
                            self.christoffel(e, a, b)
                                .horizontal_derivative(e)
                                .expect("jet cap covers curvature"),
                        );
                        terms.push(
                            -self
                                .christoffel(e, e, b)
                                .horizontal_derivative(a)
                                .expect("jet cap covers curvature"),
                        );
                        for f in 1..=n {
                            terms.push(self.christoffel(f, a, b) * self.christoffel(e, f, e));
                            terms.push(-(self.christoffel(f, e, b) * self.christoffel(e, f, a)));
                        }
                    }
                    JetScalar::sum(self.ctx, terms)
                })
                .collect();
            let mut out = vec![JetScalar::zero(self.ctx); n * n];
            for (&(a, b), r) in pairs.iter().zip(upper) {
                out[self.idx2(a, b)] = r.clone();
                out[self.idx2(b, a)] = r;
            }
            out
        })
    }

    /// `Ric_{ab} = Riem_{aeb}{}^e`, computed directly from `Γ`.
    pub fn ricci(&self, a: usize, b: usize) -> &JetScalar {
        &self.riccis()[self.idx2(a, b)]
    }

    /// `R = g^{ab} Ric_{ab}`.
    pub fn scalar_curvature(&self) -> &JetScalar {
        self.scalar.get_or_init(|| {
            let n = self.n();
            let terms: Vec<JetScalar> = (1..=n)
                .flat_map(|a| (1..=n).map(move |b| (a, b)))
                .collect::<Vec<_>>()
                .par_iter()
                .map(|&(a, b)| self.ginv(a, b) * self.ricci(a, b))
                .collect();
            JetScalar::sum(self.ctx, terms)
        })
    }

    /// `Ric^{ab} = g^{ac} g^{bd} Ric_{cd}`.
    pub fn ricci_upper(&self, a: usize, b: usize) -> JetScalar {
        let n = self.n();
        let mut terms = Vec::new();
        for c in 1..=n {
            let mut inner = Vec::new();
            for d in 1..=n {
                inner.push(self.ginv(b, d) * self.ricci(c, d));
            }
            terms.push(self.ginv(a, c) * &JetScalar::sum(self.ctx, inner));
        }
        JetScalar::sum(self.ctx, terms)
    }

    fn einsteins(&self) -> &Vec<JetScalar> {
        self.einstein.get_or_init(|| {
            let n = self.n();
            let pairs: Vec<(usize, usize)> = (1..=n)
                .flat_map(|a| (a..=n).map(move |b| (a, b)))
                .collect();
            let half_r = self.scalar_curvature().scale(&Rational::new(1, 2));
            let upper: Vec<JetScalar> = pairs
                .par_iter()
                .map(|&(a, b)| &self.ricci_upper(a, b) - &(&half_r * self.ginv(a, b)))
                .collect();
            let mut out = vec![JetScalar::zero(self.ctx); n * n];
            for (&(a, b), g) in pairs.iter().zip(upper) {
                out[self.idx2(a, b)] = g.clone();
                out[self.idx2(b, a)] = g;
            }
            out
        })
    }

    /// `G^{ab} = Ric^{ab} − ½ R g^{ab}`.
    pub fn einstein_upper(&self, a: usize, b: usize) -> &JetScalar {
        &self.einsteins()[self.idx2(a, b)]
    }

    /// `vol_g = s dx^1 ∧ … ∧ dx^n`.
    pub fn vol(&self) -> Form {
        let s = JetScalar::sqrt_neg_det(self.ctx).expect("metric schema");
        Form::coordinate_volume(self.ctx).mul_scalar(&s)
    }

    /// `∇_c χ`, with the new covariant slot in front.
    pub fn covariant_derivative(&self, chi: &FormFamily) -> Result<FormFamily> {
        if chi.ctx() != self.ctx {
            return Err(Error::DimensionMismatch);
        }
        let n = self.n();
        let mut signature = vec![Variance::Covariant];
        signature.extend_from_slice(chi.signature());
        let lie: Vec<Vec<Form>> = (1..=n)
            .map(|c| {
                chi.entries
                    .iter()
                    .map(|f| f.lie_coordinate(c))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        FormFamily::new(self.ctx, signature, |t| {
            let c = t[0];
            let idx = &t[1..];
            let mut parts = vec![lie[c - 1][chi.offset(idx)].clone()];
            for (slot, var) in chi.signature().iter().enumerate() {
                for e in 1..=n {
                    let mut j = idx.to_vec();
                    j[slot] = e;
                    let coeff = match var {
                        Variance::Covariant => -self.christoffel(e, c, idx[slot]),
                        Variance::Contravariant => self.christoffel(idx[slot], c, e).clone(),
                    };
                    if !coeff.is_zero() {
                        parts.push(chi.get(&j).mul_scalar(&coeff));
                    }
                }
            }
            Form::sum(self.ctx, &parts)
        })
    }

    /// `(𝓛_{ρ(v)} χ, T)` where `T` is the transformation prescribed by the
    /// family's variance signature: `−∂_{a_i} v^e χ_{..e..}` per covariant
    /// slot and `+∂_e v^{b_i} χ^{..e..}` per contravariant slot.
    pub fn covariance_sides(&self, chi: &FormFamily, v: &SpacetimeField) -> Result<(FormFamily, FormFamily)> {
        let ctx = self.ctx;
        let n = self.n();
        let rho = diffeo_action(ctx, v)?;
        let dv = |a: usize, b: usize| v.derivative(ctx, a, MultiIndex::unit(b));
        let lie = chi.map(|_, f| rho.lie_derivative(f))?;
        let prescribed = chi.map(|idx, _| {
            let mut parts = Vec::new();
            for (slot, var) in chi.signature().iter().enumerate() {
                for e in 1..=n {
                    let mut j = idx.to_vec();
                    j[slot] = e;
                    let coeff = match var {
                        Variance::Covariant => -dv(e, idx[slot])?,
                        Variance::Contravariant => dv(idx[slot], e)?,
                    };
                    if !coeff.is_zero() {
                        parts.push(chi.get(&j).mul_scalar(&coeff));
                    }
                }
            }
            Form::sum(ctx, &parts)
        })?;
        Ok((lie, prescribed))
    }

    /// `𝓛_{ρ(v)} χ` minus the right-hand side prescribed by the family's
    /// variance signature; all zero iff the family is covariant in `v`.
    pub fn covariance_residual(&self, chi: &FormFamily, v: &SpacetimeField) -> Result<FormFamily> {
        let (lie, prescribed) = self.covariance_sides(chi, v)?;
        lie.try_sub(&prescribed)
    }

    /// Covariance check over several spacetime fields.
    pub fn check_covariance(
        &self,
        chi: &FormFamily,
        fields: &[SpacetimeField],
    ) -> Result<(bool, Vec<FormFamily>)> {
        let residuals = fields
            .iter()
            .map(|v| self.covariance_residual(chi, v))
            .collect::<Result<Vec<_>>>()?;
        Ok((residuals.iter().all(FormFamily::is_zero), residuals))
    }

    /// `g_{ab}` as a covariant family.
    pub fn metric_family(&self) -> Result<FormFamily> {
        use Variance::Covariant;
        FormFamily::scalars(self.ctx, vec![Covariant, Covariant], |t| Ok(self.g(t[0], t[1])))
    }

    /// `g^{ab}` as a contravariant family.
    pub fn inverse_metric_family(&self) -> Result<FormFamily> {
        use Variance::Contravariant;
        FormFamily::scalars(self.ctx, vec![Contravariant, Contravariant], |t| {
            Ok(self.ginv(t[0], t[1]).clone())
        })
    }

    /// `δg_{ab}` as a covariant family.
    pub fn delta_metric_family(&self) -> Result<FormFamily> {
        use Variance::Covariant;
        FormFamily::new(self.ctx, vec![Covariant, Covariant], |t| {
            Form::delta_g(self.ctx, t[0], t[1], MultiIndex::ZERO)
        })
    }

    /// `Γ^a_{bc}` with the tensor-like signature it fails to satisfy.
    pub fn christoffel_family(&self) -> Result<FormFamily> {
        use Variance::*;
        FormFamily::scalars(self.ctx, vec![Contravariant, Covariant, Covariant], |t| {
            Ok(self.christoffel(t[0], t[1], t[2]).clone())
        })
    }

    /// Both sides of `∇_a χ^a ∧ vol = (−1)^p d(χ^a ∧ ι_{∂̂_a} vol)` for a
    /// contravariant family of `(p,0)`-forms, sign included.
    pub fn divergence_1_sides(&self, chi: &FormFamily) -> Result<(Form, Form)> {
        if chi.signature() != [Variance::Contravariant] {
            return Err(Error::Arity {
                expected: 1,
                found: chi.arity(),
            });
        }
        let p = match chi.bidegree()? {
            None => return Ok((Form::zero(self.ctx), Form::zero(self.ctx))),
            Some((p, 0)) => p,
            Some(b) => {
                return Err(Error::Bidegree {
                    expected: "(p,0)".into(),
                    found: format!("{b:?}"),
                })
            }
        };
        let n = self.n();
        let vol = self.vol();
        let nabla = self.covariant_derivative(chi)?;
        let div = Form::sum(self.ctx, (1..=n).map(|a| nabla.get(&[a, a])).collect::<Vec<_>>())?;
        let lhs = div.try_wedge(&vol)?;
        let mut inner = Vec::new();
        for a in 1..=n {
            inner.push(chi.get(&[a]).try_wedge(&vol.interior_coordinate(a)?)?);
        }
        let rhs = Form::sum(self.ctx, &inner)?.horizontal_differential()?;
        Ok((lhs, if p % 2 == 1 { -rhs } else { rhs }))
    }

    pub fn divergence_1_residual(&self, chi: &FormFamily) -> Result<Form> {
        let (lhs, rhs) = self.divergence_1_sides(chi)?;
        lhs.try_sub(&rhs)
    }

    /// Both sides of the second divergence formula before the sign:
    /// `(∇_a χ^{ab} ∧ ι_{∂̂_b} vol, d(½ χ^{ab} ∧ ι_{∂̂_a}ι_{∂̂_b} vol))`.
    pub fn divergence_2_sides(&self, chi: &FormFamily) -> Result<(Form, Form)> {
        use Variance::Contravariant;
        if chi.signature() != [Contravariant, Contravariant] {
            return Err(Error::Arity {
                expected: 2,
                found: chi.arity(),
            });
        }
        chi.check_antisymmetric()?;
        let n = self.n();
        let vol = self.vol();
        let nabla = self.covariant_derivative(chi)?;
        let mut lhs_terms = Vec::new();
        let mut rhs_terms = Vec::new();
        for b in 1..=n {
            let ib = vol.interior_coordinate(b)?;
            let div = Form::sum(self.ctx, (1..=n).map(|a| nabla.get(&[a, a, b])).collect::<Vec<_>>())?;
            lhs_terms.push(div.try_wedge(&ib)?);
            for a in 1..=n {
                let iab = ib.interior_coordinate(a)?;
                rhs_terms.push(chi.get(&[a, b]).try_wedge(&iab)?);
            }
        }
        let lhs = Form::sum(self.ctx, &lhs_terms)?;
        let rhs = Form::sum(self.ctx, &rhs_terms)?
            .scale(&Rational::new(1, 2))
            .horizontal_differential()?;
        Ok((lhs, rhs))
    }

    /// Checks `∇_a χ^{ab} ∧ ι_{∂̂_b} vol = (−1)^{p+q} d(½ χ^{ab} ∧ ι_{∂̂_a}ι_{∂̂_b} vol)`
    /// for an antisymmetric family of `(p,q)`-forms. Only `q ≤ 1` is
    /// nontrivial; for `q = 0` the sign is `(−1)^p`.
    pub fn divergence_2_residual(&self, chi: &FormFamily) -> Result<Form> {
        self.divergence_2_signed(chi, |p, q| p + q)
    }

    /// The same identity with the sign `(−1)^p` for every `q`, which fails
    /// on `(p,1)` families.
    pub fn divergence_2_printed_residual(&self, chi: &FormFamily) -> Result<Form> {
        self.divergence_2_signed(chi, |p, _| p)
    }

    fn divergence_2_signed(&self, chi: &FormFamily, exponent: impl Fn(usize, usize) -> usize) -> Result<Form> {
        let (lhs, rhs) = self.divergence_2_sides(chi)?;
        let (p, q) = match chi.bidegree()? {
            None => return Ok(Form::zero(self.ctx)),
            Some(b) => b,
        };
        if exponent(p, q) % 2 == 1 {
            lhs.try_add(&rhs)
        } else {
            lhs.try_sub(&rhs)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_quantities() {
        let c = Ctx::metric(1).unwrap();
        let geo = Geometry::new(c).unwrap();
        let expect = crate::text::parse_scalar(c, "(1/2*g_{11,1})/det").unwrap();
        assert_eq!(geo.christoffel(1, 1, 1), &expect);
        assert!(geo.scalar_curvature().is_zero());
    }

    #[test]
    fn metric_is_parallel_and_gamma_symmetric() {
        let c = Ctx::metric(2).unwrap();
        let geo = Geometry::new(c).unwrap();
        let nabla = geo.covariant_derivative(&geo.metric_family().unwrap()).unwrap();
        assert!(nabla.is_zero());
        for a in 1..=2 {
            for b in 1..=2 {
                for d in 1..=2 {
                    assert_eq!(geo.christoffel(a, b, d), geo.christoffel(a, d, b));
                }
            }
        }
    }

    #[test]
    fn riemann_antisymmetry_and_bianchi_n2() {
        let c = Ctx::metric(2).unwrap();
        let geo = Geometry::new(c).unwrap();
        for t in index_tuples(2, 4) {
            let (a, b, cc, d) = (t[0], t[1], t[2], t[3]);
            let direct = geo.riemann_entry(a, b, cc, d);
            assert_eq!(&direct, geo.riemann(a, b, cc, d));
            let bianchi = JetScalar::sum(
                c,
                [
                    geo.riemann(a, b, cc, d).clone(),
                    geo.riemann(b, cc, a, d).clone(),
                    geo.riemann(cc, a, b, d).clone(),
                ],
            );
            assert!(bianchi.is_zero());
        }
        for a in 1..=2 {
            for b in 1..=2 {
                let contracted = JetScalar::sum(c, (1..=2).map(|e| geo.riemann(a, e, b, e).clone()));
                assert_eq!(&contracted, geo.ricci(a, b));
                assert!(geo.einstein_upper(a, b).is_zero());
            }
        }
    }

    fn formal_v() -> SpacetimeField {
        SpacetimeField::formal('v').unwrap()
    }

    #[test]
    fn covariance_ledger_n2() {
        let c = Ctx::metric(2).unwrap();
        let geo = Geometry::new(c).unwrap();
        let v = [formal_v()];
        assert!(geo.check_covariance(&geo.metric_family().unwrap(), &v).unwrap().0);
        assert!(geo.check_covariance(&geo.inverse_metric_family().unwrap(), &v).unwrap().0);
        assert!(geo.check_covariance(&geo.delta_metric_family().unwrap(), &v).unwrap().0);
        let vol = FormFamily::new(c, vec![], |_| Ok(geo.vol())).unwrap();
        assert!(geo.check_covariance(&vol, &v).unwrap().0);
        let (ok, res) = geo.check_covariance(&geo.christoffel_family().unwrap(), &v).unwrap();
        assert!(!ok);
        for (t, f) in res[0].entries() {
            let expect = -v[0].derivative(c, t[0], MultiIndex::from_indices(&t[1..])).unwrap();
            assert_eq!(f, &Form::scalar(expect), "{t:?}");
        }
    }

    #[test]
    fn nabla_of_covariant_vertical_family_is_covariant() {
        let c = Ctx::metric(2).unwrap();
        let geo = Geometry::new(c).unwrap();
        let v = formal_v();
        let trace = (1..=2)
            .flat_map(|d| (1..=2).map(move |e| (d, e)))
            .map(|(d, e)| Form::delta_g(c, d, e, MultiIndex::ZERO).unwrap().mul_scalar(geo.ginv(d, e)))
            .collect::<Vec<_>>();
        let trace = Form::sum(c, &trace).unwrap();
        // χ_b = v^a δg_{ab} + v_b g^{de} δg_{de}
        let chi = FormFamily::new(c, vec![Variance::Covariant], |t| {
            let mut parts = Vec::new();
            for a in 1..=2 {
                let va = v.component(c, a)?;
                parts.push(Form::delta_g(c, a, t[0], MultiIndex::ZERO)?.mul_scalar(&va));
                parts.push(trace.mul_scalar(&(&va * &geo.g(a, t[0]))));
            }
            Form::sum(c, &parts)
        })
        .unwrap();
        let v = [v];
        assert!(geo.check_covariance(&chi, &v).unwrap().0);
        let nabla = geo.covariant_derivative(&chi).unwrap();
        assert!(geo.check_covariance(&nabla, &v).unwrap().0);
    }

    #[test]
    fn commutator_of_nabla_is_riemann() {
        let c = Ctx::metric(2).unwrap();
        let geo = Geometry::new(c).unwrap();
        let chi = FormFamily::scalars(c, vec![Variance::Covariant], |t| {
            Ok(&geo.g1(t[0], 1, 2) + &geo.g(t[0], t[0]))
        })
        .unwrap();
        let nn = geo
            .covariant_derivative(&geo.covariant_derivative(&chi).unwrap())
            .unwrap();
        for t in index_tuples(2, 3) {
            let (a, b, cc) = (t[0], t[1], t[2]);
            let lhs = nn.get(&[a, b, cc]).try_sub(nn.get(&[b, a, cc])).unwrap();
            let rhs = (1..=2)
                .map(|d| chi.get(&[d]).mul_scalar(geo.riemann(a, b, cc, d)))
                .collect::<Vec<_>>();
            assert_eq!(lhs, Form::sum(c, &rhs).unwrap(), "{t:?}");
        }
    }

    #[test]
    fn volume_identities_n2() {
        let c = Ctx::metric(2).unwrap();
        let geo = Geometry::new(c).unwrap();
        let vol = geo.vol();
        let half_trace = (1..=2)
            .flat_map(|a| (1..=2).map(move |b| (a, b)))
            .map(|(a, b)| {
                Form::delta_g(c, a, b, MultiIndex::ZERO)
                    .unwrap()
                    .mul_scalar(geo.ginv(a, b))
            })
            .collect::<Vec<_>>();
        let expect = Form::sum(c, &half_trace)
            .unwrap()
            .scale(&Rational::new(1, 2))
            .try_wedge(&vol)
            .unwrap();
        assert_eq!(vol.vertical_differential(), expect);
        let v = formal_v();
        let rho = diffeo_action(c, &v).unwrap();
        assert!(rho.lie_derivative(&vol).unwrap().is_zero());
        let lift = crate::fields::JetVectorField::cartan_lift(c, &v).unwrap();
        let vfam = FormFamily::scalars(c, vec![Variance::Contravariant], |t| v.component(c, t[0])).unwrap();
        let nabla = geo.covariant_derivative(&vfam).unwrap();
        let div = Form::sum(c, &[nabla.get(&[1, 1]).clone(), nabla.get(&[2, 2]).clone()]).unwrap();
        assert_eq!(lift.lie_derivative(&vol).unwrap(), div.try_wedge(&vol).unwrap());
    }

    #[test]
    fn divergence_formulas() {
        for n in [2, 3] {
            let c = Ctx::metric(n).unwrap();
            let geo = Geometry::new(c).unwrap();
            let v = formal_v();
            let funcs = FormFamily::scalars(c, vec![Variance::Contravariant], |t| v.component(c, t[0])).unwrap();
            assert!(geo.divergence_1_residual(&funcs).unwrap().is_zero());
            let one = FormFamily::new(c, vec![Variance::Contravariant], |t| {
                let parts = (1..=n)
                    .map(|b| {
                        Form::delta_g(c, b, 1, MultiIndex::ZERO)
                            .unwrap()
                            .mul_scalar(geo.ginv(t[0], b))
                    })
                    .collect::<Vec<_>>();
                Form::sum(c, &parts)
            })
            .unwrap();
            assert!(geo.divergence_1_residual(&one).unwrap().is_zero());
            let anti = FormFamily::new(c, vec![Variance::Contravariant; 2], |t| {
                let f = &v.component(c, t[0]).unwrap() * &geo.g(t[1], 1)
                    - &v.component(c, t[1]).unwrap() * &geo.g(t[0], 1);
                Ok(Form::delta_g(c, 1, 2, MultiIndex::ZERO)?.mul_scalar(&f))
            })
            .unwrap();
            assert!(geo.divergence_2_residual(&anti).unwrap().is_zero());
            let with_dx = FormFamily::new(c, vec![Variance::Contravariant; 2], |t| {
                let f = &v.component(c, t[0]).unwrap() * &geo.g(t[1], 2)
                    - &v.component(c, t[1]).unwrap() * &geo.g(t[0], 2);
                Ok(Form::dx(c, 1)?.mul_scalar(&f))
            })
            .unwrap();
            let (lhs, rhs) = geo.divergence_2_sides(&with_dx).unwrap();
            assert!(!lhs.is_zero());
            assert_eq!(lhs, -rhs);
            assert!(geo.divergence_2_residual(&with_dx).unwrap().is_zero());
            assert!(!geo.divergence_2_printed_residual(&with_dx).unwrap().is_zero());
            let sym = FormFamily::scalars(c, vec![Variance::Contravariant; 2], |t| {
                Ok(geo.ginv(t[0], t[1]).clone())
            })
            .unwrap();
            assert!(matches!(
                geo.divergence_2_residual(&sym),
                Err(Error::NotAntisymmetric(_))
            ));
        }
    }
}
