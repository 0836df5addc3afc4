//! Bigraded differential forms on the jet bundle.
//!
//! A monomial is `f · δu_1 ∧ … ∧ δu_p ∧ dx^{e_1} ∧ … ∧ dx^{e_q}` with the
//! vertical generators first, both lists strictly increasing. Forms of
//! mixed bidegree are sums of homogeneous components kept in one map.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::jetscalar::{Ctx, JetScalar};
use crate::poly::{MultiIndex, Var, VarKind};
use crate::rational::Rational;

/// Generator lists of a form monomial.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct FormKey {
    v: SmallVec<[Var; 4]>,
    h: SmallVec<[u8; 4]>,
}

impl Ord for FormKey {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.v.len(), self.h.len(), &self.v, &self.h).cmp(&(
            other.v.len(),
            other.h.len(),
            &other.v,
            &other.h,
        ))
    }
}

impl PartialOrd for FormKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FormKey {
    pub fn vertical(&self) -> &[Var] {
        &self.v
    }

    pub fn horizontal(&self) -> &[u8] {
        &self.h
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.v.len(), self.h.len())
    }

    /// Sorts arbitrary generator lists; `None` if a generator repeats.
    pub fn normalize(v: &[Var], h: &[u8]) -> Option<(FormKey, bool)> {
        let mut v: SmallVec<[Var; 4]> = v.iter().copied().collect();
        let mut h: SmallVec<[u8; 4]> = h.iter().copied().collect();
        let sv = sort_with_sign(&mut v)?;
        let sh = sort_with_sign(&mut h)?;
        Some((FormKey { v, h }, sv ^ sh))
    }
}

/// Bubble sort tracking the permutation parity; `true` means odd.
fn sort_with_sign<T: Ord + Copy>(xs: &mut [T]) -> Option<bool> {
    let mut odd = false;
    for i in 0..xs.len() {
        for j in (i + 1..xs.len()).rev() {
            match xs[j - 1].cmp(&xs[j]) {
                Ordering::Greater => {
                    xs.swap(j - 1, j);
                    odd = !odd;
                }
                Ordering::Equal => return None,
                Ordering::Less => {}
            }
        }
    }
    for w in xs.windows(2) {
        if w[0] == w[1] {
            return None;
        }
    }
    Some(odd)
}

/// Inserts `x` into a sorted list; returns the insertion position, or
/// `None` if already present.
fn insert_sorted<T: Ord + Copy, const N: usize>(
    xs: &mut SmallVec<[T; N]>,
    x: T,
) -> Option<usize>
where
    [T; N]: smallvec::Array<Item = T>,
{
    match xs.binary_search(&x) {
        Ok(_) => None,
        Err(pos) => {
            xs.insert(pos, x);
            Some(pos)
        }
    }
}

/// Collects monomials and sums each coefficient once at the end.
#[derive(Default)]
struct Acc {
    terms: BTreeMap<FormKey, Vec<JetScalar>>,
}

impl Acc {
    fn push(&mut self, key: FormKey, f: JetScalar) {
        if !f.is_zero() {
            self.terms.entry(key).or_default().push(f);
        }
    }

    fn finish(self, ctx: Ctx) -> Form {
        let terms = self
            .terms
            .into_iter()
            .filter_map(|(k, fs)| {
                let f = JetScalar::sum(ctx, fs);
                (!f.is_zero()).then_some((k, f))
            })
            .collect();
        Form { ctx, terms }
    }
}

/// Values of a vector field on the generating 1-forms.
pub trait Pairing {
    /// `ι_X δu` for a field variable `u`.
    fn on_vertical(&self, u: Var) -> Result<JetScalar>;
    /// `ι_X dx^e`.
    fn on_dx(&self, e: usize) -> Result<JetScalar>;
}

/// A (possibly mixed-bidegree) differential form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Form {
    ctx: Ctx,
    terms: BTreeMap<FormKey, JetScalar>,
}

fn signed(f: JetScalar, odd: bool) -> JetScalar {
    if odd {
        -f
    } else {
        f
    }
}

impl Form {
    pub fn zero(ctx: Ctx) -> Self {
        Form {
            ctx,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(f: JetScalar) -> Self {
        let mut out = Form::zero(f.ctx());
        out.push(FormKey::default(), f);
        out
    }

    pub fn one(ctx: Ctx) -> Self {
        Form::scalar(JetScalar::one(ctx))
    }

    pub fn dx(ctx: Ctx, e: usize) -> Result<Self> {
        Form::monomial(JetScalar::one(ctx), &[], &[e])
    }

    /// `δu` for a field variable `u`.
    pub fn delta(ctx: Ctx, u: Var) -> Result<Self> {
        Form::monomial(JetScalar::one(ctx), &[u], &[])
    }

    /// `δg_{ab,C}`.
    pub fn delta_g(ctx: Ctx, a: usize, b: usize, c: MultiIndex) -> Result<Self> {
        ctx.check_index(a)?;
        ctx.check_index(b)?;
        Form::delta(ctx, Var::g(a, b, c))
    }

    /// `dx^1 ∧ … ∧ dx^n`.
    pub fn coordinate_volume(ctx: Ctx) -> Self {
        let h: Vec<usize> = (1..=ctx.n()).collect();
        Form::monomial(JetScalar::one(ctx), &[], &h).expect("valid indices")
    }

    /// `f · δu_1 ∧ … ∧ dx^{e_1} ∧ …` with generators in any order.
    pub fn monomial(f: JetScalar, vertical: &[Var], horizontal: &[usize]) -> Result<Self> {
        let ctx = f.ctx();
        for &u in vertical {
            if !u.is_field() {
                return Err(Error::Schema("vertical generator must be a field coordinate"));
            }
            JetScalar::var(ctx, u)?;
        }
        for &e in horizontal {
            ctx.check_index(e)?;
        }
        let h: Vec<u8> = horizontal.iter().map(|&e| e as u8).collect();
        let mut out = Form::zero(ctx);
        if let Some((key, odd)) = FormKey::normalize(vertical, &h) {
            out.push(key, signed(f, odd));
        }
        Ok(out)
    }

    pub fn ctx(&self) -> Ctx {
        self.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FormKey, &JetScalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, key: &FormKey) -> Option<&JetScalar> {
        self.terms.get(key)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Bidegrees with a nonzero component, ascending.
    pub fn bidegrees(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = self.terms.keys().map(FormKey::bidegree).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// The bidegree of a nonzero homogeneous form.
    pub fn bidegree(&self) -> Option<(usize, usize)> {
        match self.bidegrees().as_slice() {
            [one] => Some(*one),
            _ => None,
        }
    }

    pub fn component(&self, p: usize, q: usize) -> Form {
        Form {
            ctx: self.ctx,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.bidegree() == (p, q))
                .map(|(k, f)| (k.clone(), f.clone()))
                .collect(),
        }
    }

    /// Monomial count summed with coefficient sizes, a rough cost measure.
    pub fn weight(&self) -> usize {
        self.terms.values().map(JetScalar::len).sum()
    }

    fn push(&mut self, key: FormKey, f: JetScalar) {
        if f.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            Entry::Vacant(e) => {
                e.insert(f);
            }
            Entry::Occupied(mut e) => {
                let s = &*e.get() + &f;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn same_ctx(&self, other: &Form) -> Result<()> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::DimensionMismatch)
        }
    }

    pub fn try_add(&self, other: &Form) -> Result<Form> {
        self.same_ctx(other)?;
        let (mut out, small) = if self.len() >= other.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for (k, f) in &small.terms {
            out.push(k.clone(), f.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Form) -> Result<Form> {
        self.try_add(&-other)
    }

    pub fn scale(&self, c: &Rational) -> Form {
        if c.is_zero() {
            return Form::zero(self.ctx);
        }
        self.map_coefficients(|f| f.scale(c))
    }

    /// Multiplies every coefficient by the scalar `f`.
    pub fn mul_scalar(&self, f: &JetScalar) -> Form {
        let mut out = Acc::default();
        if f.is_zero() {
            return Form::zero(self.ctx);
        }
        for (k, g) in &self.terms {
            out.push(k.clone(), g * f);
        }
        out.finish(self.ctx)
    }

    pub fn map_coefficients(&self, mut op: impl FnMut(&JetScalar) -> JetScalar) -> Form {
        let mut out = Acc::default();
        for (k, g) in &self.terms {
            out.push(k.clone(), op(g));
        }
        out.finish(self.ctx)
    }

    /// Sum of forms sharing one context.
    pub fn sum<'a>(ctx: Ctx, items: impl IntoIterator<Item = &'a Form>) -> Result<Form> {
        let mut out = Acc::default();
        for f in items {
            if f.ctx != ctx {
                return Err(Error::DimensionMismatch);
            }
            for (k, g) in &f.terms {
                out.push(k.clone(), g.clone());
            }
        }
        Ok(out.finish(ctx))
    }

    /// Wedge product. Horizontal degree above `n` vanishes automatically
    /// since `dx` generators cannot repeat.
    pub fn try_wedge(&self, other: &Form) -> Result<Form> {
        self.same_ctx(other)?;
        let mut out = Acc::default();
        for (k1, f1) in &self.terms {
            for (k2, f2) in &other.terms {
                // (V1 H1)(V2 H2) = (−1)^{|H1||V2|} V1 V2 H1 H2
                let mut odd = k1.h.len() * k2.v.len() % 2 == 1;
                let mut v: SmallVec<[Var; 4]> = k1.v.clone();
                v.extend_from_slice(&k2.v);
                let mut h: SmallVec<[u8; 4]> = k1.h.clone();
                h.extend_from_slice(&k2.h);
                let Some(sv) = sort_with_sign(&mut v) else { continue };
                let Some(sh) = sort_with_sign(&mut h) else { continue };
                odd ^= sv ^ sh;
                out.push(FormKey { v, h }, signed(f1 * f2, odd));
            }
        }
        Ok(out.finish(self.ctx))
    }

    /// Vertical differential `δ`: bidegree `(p,q) → (p+1,q)`.
    pub fn vertical_differential(&self) -> Form {
        let mut out = Acc::default();
        for (key, f) in &self.terms {
            for u in f.field_dependencies() {
                let df = f.partial(u);
                if df.is_zero() {
                    continue;
                }
                let mut v = key.v.clone();
                let Some(pos) = insert_sorted(&mut v, u) else { continue };
                out.push(
                    FormKey {
                        v,
                        h: key.h.clone(),
                    },
                    signed(df, pos % 2 == 1),
                );
            }
        }
        out.finish(self.ctx)
    }

    /// Horizontal differential `d`: bidegree `(p,q) → (p,q+1)`, using
    /// `d(f V H) = (−1)^p Σ_e [∂̂_e f · V + f · Σ_i V(i→ie)] ∧ dx^e ∧ H`.
    pub fn horizontal_differential(&self) -> Result<Form> {
        let ctx = self.ctx;
        let mut out = Acc::default();
        for (key, f) in &self.terms {
            let p_odd = key.v.len() % 2 == 1;
            for e in 1..=ctx.n() {
                let mut h = key.h.clone();
                let Some(pos) = insert_sorted(&mut h, e as u8) else { continue };
                let odd = p_odd ^ (pos % 2 == 1);
                let df = f.horizontal_derivative(e)?;
                out.push(
                    FormKey {
                        v: key.v.clone(),
                        h: h.clone(),
                    },
                    signed(df, odd),
                );
                for i in 0..key.v.len() {
                    let mut v = key.v.clone();
                    v[i] = shift_generator(ctx, v[i], e)?;
                    let Some(sv) = sort_with_sign(&mut v) else { continue };
                    out.push(
                        FormKey { v, h: h.clone() },
                        signed(f.clone(), odd ^ sv),
                    );
                }
            }
        }
        Ok(out.finish(ctx))
    }

    /// Total differential `𝐝 = δ + d`.
    pub fn total_differential(&self) -> Result<Form> {
        self.horizontal_differential()?
            .try_add(&self.vertical_differential())
    }

    /// Interior product with the vector field described by `x`; a graded
    /// derivation of degree −1, vertical slots first.
    pub fn interior(&self, x: &(impl Pairing + ?Sized)) -> Result<Form> {
        let mut out = Acc::default();
        let mut vcache: BTreeMap<Var, JetScalar> = BTreeMap::new();
        let mut hcache: BTreeMap<u8, JetScalar> = BTreeMap::new();
        for (key, f) in &self.terms {
            let p = key.v.len();
            for i in 0..p {
                let val = match vcache.get(&key.v[i]) {
                    Some(v) => v.clone(),
                    None => {
                        let v = x.on_vertical(key.v[i])?;
                        vcache.insert(key.v[i], v.clone());
                        v
                    }
                };
                if val.is_zero() {
                    continue;
                }
                let mut v = key.v.clone();
                v.remove(i);
                out.push(
                    FormKey {
                        v,
                        h: key.h.clone(),
                    },
                    signed(f * &val, i % 2 == 1),
                );
            }
            for j in 0..key.h.len() {
                let val = match hcache.get(&key.h[j]) {
                    Some(v) => v.clone(),
                    None => {
                        let v = x.on_dx(key.h[j] as usize)?;
                        hcache.insert(key.h[j], v.clone());
                        v
                    }
                };
                if val.is_zero() {
                    continue;
                }
                let mut h = key.h.clone();
                h.remove(j);
                out.push(
                    FormKey {
                        v: key.v.clone(),
                        h,
                    },
                    signed(f * &val, (p + j) % 2 == 1),
                );
            }
        }
        Ok(out.finish(self.ctx))
    }

    /// `𝓛_{∂̂_e}`: differentiates coefficients and shifts vertical generators.
    pub fn lie_coordinate(&self, e: usize) -> Result<Form> {
        let ctx = self.ctx;
        ctx.check_index(e)?;
        let mut out = Acc::default();
        for (key, f) in &self.terms {
            out.push(key.clone(), f.horizontal_derivative(e)?);
            for i in 0..key.v.len() {
                let mut v = key.v.clone();
                v[i] = shift_generator(ctx, v[i], e)?;
                let Some(sv) = sort_with_sign(&mut v) else { continue };
                out.push(
                    FormKey {
                        v,
                        h: key.h.clone(),
                    },
                    signed(f.clone(), sv),
                );
            }
        }
        Ok(out.finish(ctx))
    }

    /// Keeps the monomials whose key satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&FormKey) -> bool) -> Form {
        Form {
            ctx: self.ctx,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, f)| (k.clone(), f.clone()))
                .collect(),
        }
    }
}

fn shift_generator(ctx: Ctx, u: Var, e: usize) -> Result<Var> {
    if let VarKind::Field(_, c) = u.kind() {
        if c.order() >= ctx.jet_cap() {
            return Err(Error::JetCapExceeded { cap: ctx.jet_cap() });
        }
    }
    Ok(u.shifted(e).expect("field variable"))
}

impl Form {
    /// `ι_{∂̂_e}`, the contraction with a coordinate Cartan field.
    pub fn interior_coordinate(&self, e: usize) -> Result<Form> {
        self.ctx.check_index(e)?;
        struct P(Ctx, usize);
        impl Pairing for P {
            fn on_vertical(&self, _u: Var) -> Result<JetScalar> {
                Ok(JetScalar::zero(self.0))
            }
            fn on_dx(&self, e: usize) -> Result<JetScalar> {
                Ok(JetScalar::int(self.0, (e == self.1) as i64))
            }
        }
        self.interior(&P(self.ctx, e))
    }
}

impl Add for &Form {
    type Output = Form;
    fn add(self, rhs: &Form) -> Form {
        self.try_add(rhs).expect("dimension mismatch in form addition")
    }
}

impl Sub for &Form {
    type Output = Form;
    fn sub(self, rhs: &Form) -> Form {
        self.try_sub(rhs).expect("dimension mismatch in form subtraction")
    }
}

impl Neg for &Form {
    type Output = Form;
    fn neg(self) -> Form {
        Form {
            ctx: self.ctx,
            terms: self.terms.iter().map(|(k, f)| (k.clone(), -f)).collect(),
        }
    }
}

impl Neg for Form {
    type Output = Form;
    fn neg(self) -> Form {
        -&self
    }
}

impl Add for Form {
    type Output = Form;
    fn add(self, rhs: Form) -> Form {
        &self + &rhs
    }
}

impl Sub for Form {
    type Output = Form;
    fn sub(self, rhs: Form) -> Form {
        &self - &rhs
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::text::write_form(f, self, usize::MAX)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(n: usize) -> Ctx {
        Ctx::metric(n).unwrap()
    }

    fn gvar(a: usize, b: usize, c: &[usize]) -> Var {
        Var::g(a, b, MultiIndex::from_indices(c))
    }

    #[test]
    fn odd_generators_anticommute() {
        let c = ctx(2);
        let dg = Form::delta_g(c, 1, 1, MultiIndex::ZERO).unwrap();
        assert!(dg.try_wedge(&dg).unwrap().is_zero());
        let dx1 = Form::dx(c, 1).unwrap();
        let dx2 = Form::dx(c, 2).unwrap();
        assert_eq!(dx1.try_wedge(&dx2).unwrap(), -dx2.try_wedge(&dx1).unwrap());
        let mixed = dx1.try_wedge(&dg).unwrap();
        assert_eq!(mixed, -dg.try_wedge(&dx1).unwrap());
    }

    #[test]
    fn differentials_of_generators() {
        let c = ctx(2);
        let g12 = Form::scalar(JetScalar::g(c, 1, 2, MultiIndex::ZERO).unwrap());
        assert_eq!(
            g12.vertical_differential(),
            Form::delta_g(c, 1, 2, MultiIndex::ZERO).unwrap()
        );
        let mut expect = Form::zero(c);
        for e in 1..=2 {
            let coeff = JetScalar::g(c, 1, 2, MultiIndex::unit(e)).unwrap();
            expect = &expect + &Form::monomial(coeff, &[], &[e]).unwrap();
        }
        assert_eq!(g12.horizontal_differential().unwrap(), expect);
        // d(δg) = −δg_{,e} ∧ dx^e
        let dg = Form::delta_g(c, 1, 2, MultiIndex::ZERO).unwrap();
        let mut expect = Form::zero(c);
        for e in 1..=2 {
            expect = &expect
                - &Form::monomial(JetScalar::one(c), &[gvar(1, 2, &[e])], &[e]).unwrap();
        }
        assert_eq!(dg.horizontal_differential().unwrap(), expect);
    }

    #[test]
    fn squares_and_anticommutator_vanish_on_samples() {
        let c = ctx(2);
        let s = JetScalar::sqrt_neg_det(c).unwrap();
        let f = &(&JetScalar::g(c, 1, 1, MultiIndex::unit(2)).unwrap()
            * &JetScalar::inverse_metric(c, 1, 2).unwrap())
            * &s;
        let forms = [
            Form::scalar(f.clone()),
            Form::monomial(f.clone(), &[gvar(1, 2, &[])], &[1]).unwrap(),
            Form::monomial(f, &[gvar(1, 1, &[1])], &[]).unwrap(),
        ];
        for w in &forms {
            let d = w.horizontal_differential().unwrap();
            let v = w.vertical_differential();
            assert!(d.horizontal_differential().unwrap().is_zero());
            assert!(v.vertical_differential().is_zero());
            let anti = &v.horizontal_differential().unwrap() + &d.vertical_differential();
            assert!(anti.is_zero());
        }
    }

    #[test]
    fn coordinate_contraction() {
        let c = ctx(2);
        let w = Form::monomial(JetScalar::one(c), &[], &[1, 2]).unwrap();
        assert_eq!(w.interior_coordinate(1).unwrap(), Form::dx(c, 2).unwrap());
        assert_eq!(w.interior_coordinate(2).unwrap(), -Form::dx(c, 1).unwrap());
    }

    #[test]
    fn key_normalization_sign() {
        let (k, odd) = FormKey::normalize(&[], &[2, 1]).unwrap();
        assert_eq!(k.horizontal(), &[1, 2]);
        assert!(odd);
        assert!(FormKey::normalize(&[], &[1, 1]).is_none());
    }
}
