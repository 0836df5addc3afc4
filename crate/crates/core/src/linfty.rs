//! The L∞-algebra of hamiltonian forms of `(J^∞F, ω)` and the homotopy
//! momentum map `μ_k = ι_{ρ(v_1)} ⋯ ι_{ρ(v_k)} λ` of a manifest
//! diffeomorphism symmetry.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::fields::{diffeo_action, JetVectorField, SpacetimeField};
use crate::formalg::Form;
use crate::gr::LagrangianData;
use crate::jetscalar::{Ctx, JetScalar};
use crate::poly::{Monomial, Poly, Var};
use crate::rational::Rational;

/// Pair `(X, α)` with `ι_X ω = −𝐝α`.
#[derive(Clone, Debug)]
pub struct HamiltonianPair {
    field: JetVectorField,
    form: Form,
}

impl HamiltonianPair {
    /// Checks the hamiltonian condition against `ω`.
    pub fn new(omega: &Form, field: JetVectorField, form: Form) -> Result<Self> {
        let n = omega.ctx().n();
        if form.bidegrees().iter().any(|(p, q)| p + q + 1 != n) {
            return Err(Error::NonHamiltonian("total degree must be n − 1".into()));
        }
        let residual = omega.interior(&field)?.try_add(&form.total_differential()?)?;
        if !residual.is_zero() {
            return Err(Error::NonHamiltonian(crate::text::form_string(&residual, 20)));
        }
        Ok(HamiltonianPair { field, form })
    }

    pub fn field(&self) -> &JetVectorField {
        &self.field
    }

    pub fn form(&self) -> &Form {
        &self.form
    }
}

/// Element of `L_∞(M, ω)` of degree `i ∈ [1−n, 0]`: a form of total
/// degree `n − 1 + i`.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedElement {
    degree: i32,
    value: Form,
}

impl GradedElement {
    pub fn new(degree: i32, value: Form) -> Result<Self> {
        let n = value.ctx().n() as i32;
        if degree > 0 || degree < 1 - n {
            return Err(Error::Schema("degree outside [1 − n, 0]"));
        }
        let total = (n - 1 + degree) as usize;
        if let Some(&(p, q)) = value.bidegrees().iter().find(|(p, q)| p + q != total) {
            return Err(Error::Bidegree {
                expected: format!("total degree {total}"),
                found: format!("({p}, {q})"),
            });
        }
        Ok(GradedElement { degree, value })
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn value(&self) -> &Form {
        &self.value
    }

    /// `l_1 = 𝐝` on elements of negative degree.
    pub fn l1(&self) -> Result<GradedElement> {
        if self.degree >= 0 {
            return Err(Error::Schema("l1 is defined on negative degrees"));
        }
        GradedElement::new(self.degree + 1, self.value.total_differential()?)
    }
}

/// `l_k(α_1, …, α_k) = −(−1)^k ι_{X_1} ⋯ ι_{X_k} ω` for `k ≥ 2`.
pub fn l_bracket(omega: &Form, pairs: &[&HamiltonianPair]) -> Result<Form> {
    if pairs.len() < 2 {
        return Err(Error::Arity {
            expected: 2,
            found: pairs.len(),
        });
    }
    let fields: Vec<JetVectorField> = pairs.iter().map(|p| p.field.clone()).collect();
    let out = LagrangianData::contract(&fields, omega)?;
    Ok(if pairs.len() % 2 == 0 { -out } else { out })
}

/// Vertical summands of a jet vector field, `X⊥`.
pub fn vertical_component(x: &JetVectorField) -> JetVectorField {
    JetVectorField::Sum(
        x.vertical_part()
            .into_iter()
            .map(|e| JetVectorField::Vertical(e.clone()))
            .collect(),
    )
}

/// Horizontal summands of a jet vector field, `X∥`.
pub fn horizontal_component(ctx: Ctx, x: &JetVectorField) -> JetVectorField {
    let mut comps = vec![JetScalar::zero(ctx); ctx.n()];
    for h in x.horizontal_part() {
        for (c, f) in comps.iter_mut().zip(h) {
            *c = &*c + f;
        }
    }
    JetVectorField::Horizontal(comps)
}

/// The bidegree expansion of `l_k` into `⊥`/`∥` contractions of `EL` and
/// `δγ`, term by term as in the general display.
pub fn bracket_expansion(data: &LagrangianData, fields: &[JetVectorField]) -> Result<Form> {
    let ctx = data.ctx();
    let k = fields.len();
    let el = data.euler_lagrange();
    let dgamma = data.boundary().vertical_differential();
    let perp: Vec<JetVectorField> = fields.iter().map(vertical_component).collect();
    let par: Vec<JetVectorField> = fields.iter().map(|x| horizontal_component(ctx, x)).collect();
    let except = |skip: &[usize]| -> Vec<JetVectorField> {
        (0..k)
            .filter(|i| !skip.contains(i))
            .map(|i| par[i].clone())
            .collect()
    };
    let sign = |e: i64| if e.rem_euclid(2) == 0 { Rational::int(1) } else { Rational::int(-1) };
    let mut parts = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let inner = dgamma.interior(&perp[j])?.interior(&perp[i])?;
            let e = k as i64 - (i + 1) as i64 - (j + 1) as i64;
            parts.push(LagrangianData::contract(&except(&[i, j]), &inner)?.scale(&sign(e)));
        }
    }
    for i in 0..k {
        for base in [el, &dgamma] {
            let inner = base.interior(&perp[i])?;
            parts.push(LagrangianData::contract(&except(&[i]), &inner)?.scale(&sign(i as i64)));
        }
    }
    for base in [el, &dgamma] {
        parts.push(LagrangianData::contract(&par, base)?.scale(&-sign(k as i64)));
    }
    Form::sum(ctx, &parts)
}

/// A finite set of spacetime vector fields closed under the bracket, with
/// its structure constants.
#[derive(Clone, Debug)]
pub struct LabelSet {
    ctx: Ctx,
    names: Vec<String>,
    fields: Vec<SpacetimeField>,
    table: Vec<Vec<Vec<(usize, Rational)>>>,
}

impl LabelSet {
    /// Registers fields whose single nonzero component is a monomial with
    /// coefficient 1; fails if a bracket leaves the span.
    pub fn register(ctx: Ctx, entries: Vec<(String, SpacetimeField)>) -> Result<Self> {
        let n = ctx.n();
        let mut index: FxHashMap<(usize, Monomial), usize> = FxHashMap::default();
        for (i, (name, f)) in entries.iter().enumerate() {
            let comps = f.components(n);
            let support: Vec<(usize, &Poly)> = comps
                .iter()
                .enumerate()
                .filter(|(_, p)| !p.is_zero())
                .collect();
            let [(a, p)] = support.as_slice() else {
                return Err(Error::UnknownLabel(name.clone()));
            };
            let [(m, c)] = p.terms() else {
                return Err(Error::UnknownLabel(name.clone()));
            };
            if *c != Rational::int(1) || index.insert((*a, m.clone()), i).is_some() {
                return Err(Error::UnknownLabel(name.clone()));
            }
        }
        let mut table = vec![vec![Vec::new(); entries.len()]; entries.len()];
        for i in 0..entries.len() {
            for j in 0..entries.len() {
                let br = entries[i].1.bracket(&entries[j].1, n)?;
                let mut coeffs = Vec::new();
                for (a, p) in br.components(n).iter().enumerate() {
                    for (m, c) in p.terms() {
                        let Some(&l) = index.get(&(a, m.clone())) else {
                            return Err(Error::BracketClosure(entries[i].0.clone(), entries[j].0.clone()));
                        };
                        coeffs.push((l, c.clone()));
                    }
                }
                coeffs.sort();
                table[i][j] = coeffs;
            }
        }
        let (names, fields) = entries.into_iter().unzip();
        Ok(LabelSet {
            ctx,
            names,
            fields,
            table,
        })
    }

    /// `{∂_a}`.
    pub fn coordinates(ctx: Ctx) -> Result<Self> {
        let entries = (1..=ctx.n())
            .map(|a| Ok((format!("∂_{a}"), SpacetimeField::coordinate(ctx, a)?)))
            .collect::<Result<Vec<_>>>()?;
        LabelSet::register(ctx, entries)
    }

    /// `{∂_a} ∪ {x^b ∂_a}`.
    pub fn affine(ctx: Ctx) -> Result<Self> {
        let n = ctx.n();
        let mut entries = Vec::new();
        for a in 1..=n {
            entries.push((format!("∂_{a}"), SpacetimeField::coordinate(ctx, a)?));
        }
        for b in 1..=n {
            for a in 1..=n {
                entries.push((format!("x^{b}∂_{a}"), SpacetimeField::linear(ctx, b, a)?));
            }
        }
        LabelSet::register(ctx, entries)
    }

    pub fn ctx(&self) -> Ctx {
        self.ctx
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn field(&self, i: usize) -> &SpacetimeField {
        &self.fields[i]
    }

    /// `[l_i, l_j]` as a combination of labels.
    pub fn bracket(&self, i: usize, j: usize) -> &[(usize, Rational)] {
        &self.table[i][j]
    }

    pub fn word_string(&self, w: &[usize]) -> String {
        w.iter().map(|&i| self.names[i].as_str()).collect::<Vec<_>>().join("∧")
    }
}

/// Element of `∧^k 𝔤` over a label set: canonical (strictly increasing)
/// words with rational coefficients.
pub type Chain = BTreeMap<Vec<usize>, Rational>;

/// Sorts a word, returning the sign of the permutation, or `None` if a
/// label repeats.
pub fn canonical_word(word: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut w = word.to_vec();
    let mut odd = false;
    for i in 1..w.len() {
        let mut j = i;
        while j > 0 && w[j - 1] > w[j] {
            w.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    if w.windows(2).any(|p| p[0] == p[1]) {
        return None;
    }
    Some((w, odd))
}

fn chain_add(chain: &mut Chain, word: &[usize], c: Rational) {
    if let Some((w, odd)) = canonical_word(word) {
        let c = if odd { -c } else { c };
        let entry = chain.entry(w.clone()).or_insert_with(|| Rational::int(0));
        *entry = &*entry + &c;
        if entry.is_zero() {
            chain.remove(&w);
        }
    }
}

/// Chain with a single word.
pub fn word_chain(word: &[usize]) -> Chain {
    let mut out = Chain::new();
    chain_add(&mut out, word, Rational::int(1));
    out
}

/// `δ(a_1 ∧ … ∧ a_k) = Σ_{i<j} (−1)^{i+j} [a_i, a_j] ∧ a_1 ∧ … â_i … â_j … ∧ a_k`.
pub fn chevalley_boundary(labels: &LabelSet, chain: &Chain) -> Chain {
    let mut out = Chain::new();
    for (word, c) in chain {
        let k = word.len();
        for i in 0..k {
            for j in i + 1..k {
                let sign = if (i + j) % 2 == 0 { c.clone() } else { -c.clone() };
                let rest: Vec<usize> = (0..k)
                    .filter(|&m| m != i && m != j)
                    .map(|m| word[m])
                    .collect();
                for (l, b) in labels.bracket(word[i], word[j]) {
                    let mut w = vec![*l];
                    w.extend_from_slice(&rest);
                    chain_add(&mut out, &w, &sign * b);
                }
            }
        }
    }
    out
}

/// The homotopy momentum map of a lagrangian theory with the diagonal
/// action, caching `ρ(v)` per field.
/// Memoized actions `ρ(v)` and contractions `ι_{ρ(v_1)} ⋯ ι_{ρ(v_k)}` of
/// `λ` and `ω`, keyed by the field list. Only valid for one theory.
#[derive(Default)]
pub struct ContractionCache {
    actions: Mutex<FxHashMap<SpacetimeField, JetVectorField>>,
    pairs: Mutex<FxHashMap<SpacetimeField, HamiltonianPair>>,
    lepage: Mutex<FxHashMap<Vec<SpacetimeField>, Form>>,
    omega: Mutex<FxHashMap<Vec<SpacetimeField>, Form>>,
}

#[derive(Copy, Clone)]
enum Base {
    Lepage,
    Omega,
}

pub struct MomentumMap<'a> {
    data: &'a LagrangianData,
    cache: Arc<ContractionCache>,
}

impl<'a> MomentumMap<'a> {
    pub fn new(data: &'a LagrangianData) -> Self {
        Self::with_cache(data, Arc::default())
    }

    /// Shares `cache` with other maps over the same `data`.
    pub fn with_cache(data: &'a LagrangianData, cache: Arc<ContractionCache>) -> Self {
        MomentumMap { data, cache }
    }

    pub fn cache(&self) -> Arc<ContractionCache> {
        self.cache.clone()
    }

    pub fn data(&self) -> &LagrangianData {
        self.data
    }

    pub fn rho(&self, v: &SpacetimeField) -> Result<JetVectorField> {
        if let Some(hit) = self.cache.actions.lock().expect("poisoned").get(v) {
            return Ok(hit.clone());
        }
        let x = diffeo_action(self.data.ctx(), v)?;
        self.cache
            .actions
            .lock()
            .expect("poisoned")
            .insert(v.clone(), x.clone());
        Ok(x)
    }

    fn contracted(&self, base: Base, fields: &[SpacetimeField]) -> Result<Form> {
        let Some((first, rest)) = fields.split_first() else {
            return Ok(match base {
                Base::Lepage => self.data.lepage(),
                Base::Omega => self.data.omega().clone(),
            });
        };
        let table = match base {
            Base::Lepage => &self.cache.lepage,
            Base::Omega => &self.cache.omega,
        };
        if let Some(hit) = table.lock().expect("poisoned").get(fields) {
            return Ok(hit.clone());
        }
        let out = self.contracted(base, rest)?.interior(&self.rho(first)?)?;
        table
            .lock()
            .expect("poisoned")
            .insert(fields.to_vec(), out.clone());
        Ok(out)
    }

    /// `μ_k(v_1, …, v_k)`.
    pub fn mu(&self, fields: &[SpacetimeField]) -> Result<Form> {
        if fields.is_empty() || fields.len() > self.data.ctx().n() {
            return Ok(Form::zero(self.data.ctx()));
        }
        self.contracted(Base::Lepage, fields)
    }

    /// `ν(v_1 ∧ … ∧ v_k)`.
    pub fn nu(&self, fields: &[SpacetimeField]) -> Result<Form> {
        let out = self.contracted(Base::Omega, fields)?;
        Ok(if fields.len() % 2 == 1 { -out } else { out })
    }

    /// `μ_{k−1}(δ(v_1 ∧ … ∧ v_k))` with brackets computed directly.
    pub fn mu_of_boundary(&self, fields: &[SpacetimeField]) -> Result<Form> {
        let ctx = self.data.ctx();
        let k = fields.len();
        let mut parts = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                let br = fields[i].bracket(&fields[j], ctx.n())?;
                if br.is_zero() {
                    continue;
                }
                let mut args = vec![br];
                args.extend((0..k).filter(|&m| m != i && m != j).map(|m| fields[m].clone()));
                let mu = self.mu(&args)?;
                parts.push(if (i + j) % 2 == 0 { mu } else { -mu });
            }
        }
        Form::sum(ctx, &parts)
    }

    /// `μ_{k−1}` applied to a chain of labels.
    pub fn mu_chain(&self, labels: &LabelSet, chain: &Chain) -> Result<Form> {
        let mut parts = Vec::new();
        for (w, c) in chain {
            let args: Vec<SpacetimeField> = w.iter().map(|&i| labels.field(i).clone()).collect();
            parts.push(self.mu(&args)?.scale(c));
        }
        Form::sum(self.data.ctx(), &parts)
    }

    /// `(𝐝μ_k + μ_{k−1}δ, ν)` on `v_1 ∧ … ∧ v_k`.
    pub fn morphism_sides(&self, fields: &[SpacetimeField]) -> Result<(Form, Form)> {
        let lhs = self
            .mu(fields)?
            .total_differential()?
            .try_add(&self.mu_of_boundary(fields)?)?;
        Ok((lhs, self.nu(fields)?))
    }

    /// `𝐝μ_k + μ_{k−1}δ − ν` on `v_1 ∧ … ∧ v_k`.
    pub fn morphism_residual(&self, fields: &[SpacetimeField]) -> Result<Form> {
        let (lhs, rhs) = self.morphism_sides(fields)?;
        lhs.try_sub(&rhs)
    }

    /// Same identity with `δ` evaluated through the label set's structure
    /// constants.
    pub fn morphism_sides_word(&self, labels: &LabelSet, word: &[usize]) -> Result<(Form, Form)> {
        let fields: Vec<SpacetimeField> = word.iter().map(|&i| labels.field(i).clone()).collect();
        let boundary = chevalley_boundary(labels, &word_chain(word));
        let lhs = self
            .mu(&fields)?
            .total_differential()?
            .try_add(&self.mu_chain(labels, &boundary)?)?;
        Ok((lhs, self.nu(&fields)?))
    }

    pub fn morphism_residual_word(&self, labels: &LabelSet, word: &[usize]) -> Result<Form> {
        let (lhs, rhs) = self.morphism_sides_word(labels, word)?;
        lhs.try_sub(&rhs)
    }

    /// The hamiltonian pair `(ρ(v), μ_1(v))`.
    pub fn pair(&self, v: &SpacetimeField) -> Result<HamiltonianPair> {
        if let Some(hit) = self.cache.pairs.lock().expect("poisoned").get(v) {
            return Ok(hit.clone());
        }
        let p = HamiltonianPair::new(self.data.omega(), self.rho(v)?, self.mu(std::slice::from_ref(v))?)?;
        self.cache
            .pairs
            .lock()
            .expect("poisoned")
            .insert(v.clone(), p.clone());
        Ok(p)
    }

    /// `l_k(μ_1(v_1), …, μ_1(v_k))` through the cached contractions of `ω`.
    pub fn bracket(&self, fields: &[SpacetimeField]) -> Result<Form> {
        if fields.len() < 2 {
            return Err(Error::Arity {
                expected: 2,
                found: fields.len(),
            });
        }
        for v in fields {
            self.pair(v)?;
        }
        Ok(-self.nu(fields)?)
    }

    /// `ν + l_k(μ_1(v_1), …, μ_1(v_k))`.
    pub fn nu_bracket_residual(&self, fields: &[SpacetimeField]) -> Result<Form> {
        let pairs = fields.iter().map(|v| self.pair(v)).collect::<Result<Vec<_>>>()?;
        let refs: Vec<&HamiltonianPair> = pairs.iter().collect();
        self.nu(fields)?.try_add(&l_bracket(self.data.omega(), &refs)?)
    }

    /// `{μ_1(v), μ_1(w)} − μ_1([v,w]) + 𝐝μ_2(v,w)`.
    pub fn mu_bracket_residual(&self, v: &SpacetimeField, w: &SpacetimeField) -> Result<Form> {
        let n = self.data.ctx().n();
        let lhs = self.bracket(&[v.clone(), w.clone()])?;
        let br = v.bracket(w, n)?;
        let rhs = self
            .mu(&[br])?
            .try_sub(&self.mu(&[v.clone(), w.clone()])?.total_differential()?)?;
        lhs.try_sub(&rhs)
    }

    /// The three-field display:
    /// `l_3 − μ_2([a_1,a_2]∧a_3 + [a_2,a_3]∧a_1 + [a_3,a_1]∧a_2) + 𝐝μ_3`.
    pub fn l3_residual(&self, a: &[SpacetimeField; 3]) -> Result<Form> {
        let n = self.data.ctx().n();
        let lhs = self.bracket(a)?;
        let mut parts = Vec::new();
        for (i, j, m) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            let br = a[i].bracket(&a[j], n)?;
            if !br.is_zero() {
                parts.push(self.mu(&[br, a[m].clone()])?);
            }
        }
        let mu2 = Form::sum(self.data.ctx(), &parts)?;
        let dmu3 = self.mu(a)?.total_differential()?;
        lhs.try_sub(&mu2)?.try_add(&dmu3)
    }

    /// `j_v` for the action.
    pub fn current(&self, v: &SpacetimeField) -> Result<Form> {
        self.data.noether_current(v)
    }

    /// The general split of `μ_k` in terms of Noether currents:
    /// `−Σ_i (−1)^{k−i} (ι_{v̂_1} ⋯ ι̂_{v̂_i} ⋯ ι_{v̂_k}) j_{v_i}
    ///  + (1−k) ι_{v̂_1} ⋯ ι_{v̂_k} L + ι_{v̂_1} ⋯ ι_{v̂_k} γ`.
    pub fn mu_split(&self, fields: &[SpacetimeField]) -> Result<Form> {
        let ctx = self.data.ctx();
        let k = fields.len();
        let lifts = fields
            .iter()
            .map(|v| JetVectorField::cartan_lift(ctx, v))
            .collect::<Result<Vec<_>>>()?;
        let mut parts = Vec::new();
        for i in 0..k {
            let rest: Vec<JetVectorField> = (0..k).filter(|&m| m != i).map(|m| lifts[m].clone()).collect();
            let term = LagrangianData::contract(&rest, &self.current(&fields[i])?)?;
            parts.push(if (k - i - 1) % 2 == 0 { -term } else { term });
        }
        let coeff = Rational::int(1 - k as i64);
        parts.push(LagrangianData::contract(&lifts, self.data.lagrangian())?.scale(&coeff));
        parts.push(LagrangianData::contract(&lifts, self.data.boundary())?);
        Form::sum(ctx, &parts)
    }
}

/// A printed display compared against the expansion derived from the
/// contraction definition.
#[derive(Clone, Debug)]
pub struct DisplayCheck {
    pub name: &'static str,
    /// Derived expansion minus direct computation; zero when the
    /// derivation is right.
    pub derived: Form,
    /// Printed display minus direct computation.
    pub printed: Form,
}

impl DisplayCheck {
    pub fn derived_holds(&self) -> bool {
        self.derived.is_zero()
    }

    pub fn printed_holds(&self) -> bool {
        self.printed.is_zero()
    }
}

impl<'a> MomentumMap<'a> {
    /// The five-term 2-bracket display for `(ρ(v), μ_1(v))`, `(ρ(w), μ_1(w))`.
    /// The derived expansion uses `ι_{Y∥} ι_{X∥} EL` where the display
    /// prints `ι_{X∥} ι_{X∥} EL`.
    pub fn two_bracket_display(&self, v: &SpacetimeField, w: &SpacetimeField) -> Result<DisplayCheck> {
        let ctx = self.data.ctx();
        let (pv, pw) = (self.pair(v)?, self.pair(w)?);
        let direct = l_bracket(self.data.omega(), &[&pv, &pw])?;
        let (x, y) = (pv.field(), pw.field());
        let (xp, yp) = (vertical_component(x), vertical_component(y));
        let (xh, yh) = (horizontal_component(ctx, x), horizontal_component(ctx, y));
        let el = self.data.euler_lagrange();
        let dg = self.data.boundary().vertical_differential();
        let ii = |a: &JetVectorField, b: &JetVectorField, f: &Form| -> Result<Form> { f.interior(b)?.interior(a) };
        let common = Form::sum(
            ctx,
            &[
                ii(&yp, &xp, &dg)?,
                ii(&yh, &xp, el)?.try_sub(&ii(&xh, &yp, el)?)?,
                ii(&yh, &xp, &dg)?.try_sub(&ii(&xh, &yp, &dg)?)?,
                ii(&yh, &xh, &dg)?,
            ],
        )?;
        let derived = common.try_add(&ii(&yh, &xh, el)?)?.try_sub(&direct)?;
        let printed = common.try_add(&ii(&xh, &xh, el)?)?.try_sub(&direct)?;
        Ok(DisplayCheck {
            name: "2-bracket expansion",
            derived,
            printed,
        })
    }

    /// The example `μ_2(v,w) = (ι_{v̂} j_w − ι_{ŵ} j_v + ι_{v̂}ι_{ŵ} L) + ι_{v̂}ι_{ŵ} γ`
    /// against the general split, which gives the `(0,n−2)` part with the
    /// opposite sign.
    pub fn mu2_display(&self, v: &SpacetimeField, w: &SpacetimeField) -> Result<DisplayCheck> {
        let ctx = self.data.ctx();
        let direct = self.mu(&[v.clone(), w.clone()])?;
        let (lv, lw) = (JetVectorField::cartan_lift(ctx, v)?, JetVectorField::cartan_lift(ctx, w)?);
        let (jv, jw) = (self.current(v)?, self.current(w)?);
        let horizontal = lw.interior(&jv)?;
        let scalar_part = Form::sum(
            ctx,
            &[
                lv.interior(&jw)?,
                -horizontal,
                LagrangianData::contract(&[lv.clone(), lw.clone()], self.data.lagrangian())?,
            ],
        )?;
        let gamma_part = LagrangianData::contract(&[lv, lw], self.data.boundary())?;
        let printed = scalar_part.try_add(&gamma_part)?.try_sub(&direct)?;
        let derived = gamma_part.try_sub(&scalar_part)?.try_sub(&direct)?;
        Ok(DisplayCheck {
            name: "μ_2 split example",
            derived,
            printed,
        })
    }

    /// The display of `μ_1([v,w]) − 𝐝μ_2(v,w)` in terms of Noether
    /// currents, with `P = ι_{v̂} j_w − ι_{ŵ} j_v + ι_{v̂}ι_{ŵ} L`:
    /// printed `−j_{[v,w]} + dP + ι_{[v,w]^}γ − δP − dι_{v̂}ι_{ŵ}γ + ι_{ŵ}ι_{v̂}δγ`;
    /// the derived version has `+δP`.
    pub fn current_bracket_display(&self, v: &SpacetimeField, w: &SpacetimeField) -> Result<DisplayCheck> {
        let ctx = self.data.ctx();
        let n = ctx.n();
        let vw = v.bracket(w, n)?;
        let direct = self
            .mu(std::slice::from_ref(&vw))?
            .try_sub(&self.mu(&[v.clone(), w.clone()])?.total_differential()?)?;
        let (lv, lw) = (JetVectorField::cartan_lift(ctx, v)?, JetVectorField::cartan_lift(ctx, w)?);
        let lvw = JetVectorField::cartan_lift(ctx, &vw)?;
        let p = Form::sum(
            ctx,
            &[
                lv.interior(&self.current(w)?)?,
                -lw.interior(&self.current(v)?)?,
                LagrangianData::contract(&[lv.clone(), lw.clone()], self.data.lagrangian())?,
            ],
        )?;
        let gamma = self.data.boundary();
        let common = Form::sum(
            ctx,
            &[
                -self.current(&vw)?,
                p.horizontal_differential()?,
                lvw.interior(gamma)?,
                -LagrangianData::contract(&[lv.clone(), lw.clone()], gamma)?.horizontal_differential()?,
                LagrangianData::contract(&[lw, lv], &gamma.vertical_differential())?,
            ],
        )?;
        let dp = p.vertical_differential();
        let printed = common.try_sub(&dp)?.try_sub(&direct)?;
        let derived = common.try_add(&dp)?.try_sub(&direct)?;
        Ok(DisplayCheck {
            name: "μ_1([v,w]) − 𝐝μ_2(v,w) via currents",
            derived,
            printed,
        })
    }
}

/// Strictly increasing words of length `k` over `m` letters, in
/// lexicographic order.
pub fn increasing_words(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut words = vec![Vec::new()];
    for _ in 0..k {
        words = words
            .into_iter()
            .flat_map(|w: Vec<usize>| {
                let start = w.last().map_or(0, |l| l + 1);
                (start..m).map(move |l| {
                    let mut w = w.clone();
                    w.push(l);
                    w
                })
            })
            .collect();
    }
    words
}

/// Formal label fields `v, w, u, …` for tests of identities in `v`.
pub fn formal_fields(labels: &str) -> Result<Vec<SpacetimeField>> {
    labels.chars().map(SpacetimeField::formal).collect()
}

/// The polynomial ring element `x^b`, handy for building label fields.
pub fn coordinate_poly(b: usize) -> Poly {
    Poly::var(Var::x(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gr::build_gr_theory;

    #[test]
    fn boundary_squares_to_zero_and_closes() {
        let c = Ctx::metric(3).unwrap();
        let labels = LabelSet::affine(c).unwrap();
        assert_eq!(labels.len(), 12);
        for i in 0..labels.len() {
            for j in 0..labels.len() {
                for m in 0..labels.len() {
                    let b = chevalley_boundary(&labels, &word_chain(&[i, j, m]));
                    assert!(chevalley_boundary(&labels, &b).is_empty());
                }
            }
        }
        let bad = vec![(
            "x^1x^1∂_1".to_string(),
            SpacetimeField::polynomial(
                c,
                vec![coordinate_poly(1).mul(&coordinate_poly(1)), Poly::zero(), Poly::zero()],
            )
            .unwrap(),
        ), ("∂_1".to_string(), SpacetimeField::coordinate(c, 1).unwrap())];
        assert!(matches!(LabelSet::register(c, bad), Err(Error::BracketClosure(..))));
    }

    #[test]
    fn two_label_boundary_sign() {
        let c = Ctx::metric(2).unwrap();
        let labels = LabelSet::affine(c).unwrap();
        // [∂_1, x^1∂_2] = ∂_2, so δ(∂_1 ∧ x^1∂_2) = −∂_2.
        let i = 0;
        let j = (0..labels.len()).find(|&l| labels.name(l) == "x^1∂_2").unwrap();
        let b = chevalley_boundary(&labels, &word_chain(&[i, j]));
        assert_eq!(b, Chain::from([(vec![1], Rational::int(-1))]));
    }

    #[test]
    fn momentum_map_n2() {
        let c = Ctx::metric(2).unwrap();
        let theory = build_gr_theory(c).unwrap();
        let mm = MomentumMap::new(theory.data());
        let vw = formal_fields("vw").unwrap();
        assert!(mm.morphism_residual(&vw[..1]).unwrap().is_zero());
        assert!(mm.morphism_residual(&vw).unwrap().is_zero());
        assert!(mm.mu_bracket_residual(&vw[0], &vw[1]).unwrap().is_zero());
        assert!(mm.nu_bracket_residual(&vw).unwrap().is_zero());
        assert!(mm.mu_split(&vw).unwrap().try_sub(&mm.mu(&vw).unwrap()).unwrap().is_zero());
        let labels = LabelSet::affine(c).unwrap();
        for i in 0..labels.len() {
            for j in i + 1..labels.len() {
                assert!(mm.morphism_residual_word(&labels, &[i, j]).unwrap().is_zero());
            }
        }
        let d = mm.two_bracket_display(&vw[0], &vw[1]).unwrap();
        assert!(d.derived_holds());
        let d = mm.mu2_display(&vw[0], &vw[1]).unwrap();
        assert!(d.derived_holds());
        let pairs = [mm.pair(&vw[0]).unwrap(), mm.pair(&vw[1]).unwrap()];
        let fwd = l_bracket(theory.data().omega(), &[&pairs[0], &pairs[1]]).unwrap();
        let bwd = l_bracket(theory.data().omega(), &[&pairs[1], &pairs[0]]).unwrap();
        assert_eq!(fwd, -bwd);
        let fields: Vec<_> = pairs.iter().map(|p| p.field().clone()).collect();
        let exp = bracket_expansion(theory.data(), &fields).unwrap();
        assert_eq!(exp, fwd);
    }
}
