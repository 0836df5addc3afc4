//! Randomized exact evaluation: an independent zero test for the
//! canonical forms.
//!
//! A [`JetPoint`] assigns rational values to every coordinate. The metric
//! 0-jet is drawn with Lorentzian signature and `−det g` not a rational
//! square, so `s = √(−det g)` is irrational and a value `a + b·s` vanishes
//! iff `a = b = 0`. All other coordinates are hashed from the seed, so a
//! point is a pure function of `(ctx, seed)`.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::SpacetimeField;
use crate::formalg::Form;
use crate::geometry::{FormFamily, Variance};
use crate::jetscalar::{Ctx, JetScalar};
use crate::modp;
use crate::poly::{Component, Monomial, MultiIndex, Poly, Var, VarKind};
use crate::rational::Rational;

/// Draws before [`Error::ResampleLimit`].
pub const RESAMPLE_LIMIT: usize = 1000;
pub const DEFAULT_POINTS: usize = 20;

/// How the metric 0-jet is chosen.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum SampleMode {
    Random,
    /// `g = diag(−1, 1, …, 1)`. Then `s = 1` is rational, so `s`-parts are
    /// not separated; meant for debugging only.
    Minkowski,
}

/// An exact evaluation point of the jet bundle.
#[derive(Clone, Debug)]
pub struct JetPoint {
    ctx: Ctx,
    seed: u64,
    metric: Vec<Vec<Rational>>,
    det: Rational,
    bound: Vec<(u8, Vec<Poly>)>,
}

/// A running sum `num / den` that is never reduced.
struct Sum {
    small: Option<(i128, i128)>,
    num: BigInt,
    den: BigInt,
}

impl Default for Sum {
    fn default() -> Self {
        Sum {
            small: Some((0, 1)),
            num: BigInt::zero(),
            den: BigInt::one(),
        }
    }
}

impl Sum {
    fn add_small(&mut self, n: i128, d: i128) {
        if let Some((an, ad)) = self.small {
            let next = if ad % d == 0 {
                n.checked_mul(ad / d).and_then(|t| an.checked_add(t)).map(|t| (t, ad))
            } else {
                let l = (ad / ad.gcd(&d)).checked_mul(d);
                l.and_then(|l| {
                    let t = an.checked_mul(l / ad)?.checked_add(n.checked_mul(l / d)?)?;
                    Some((t, l))
                })
            };
            match next {
                Some(v) => self.small = Some(v),
                None => {
                    self.spill();
                    self.add_big(BigInt::from(n), BigInt::from(d));
                }
            }
        } else {
            self.add_big(BigInt::from(n), BigInt::from(d));
        }
    }

    fn spill(&mut self) {
        if let Some((n, d)) = self.small.take() {
            self.num = BigInt::from(n);
            self.den = BigInt::from(d);
        }
    }

    fn add_big(&mut self, n: BigInt, d: BigInt) {
        self.spill();
        let (q, r) = self.den.div_rem(&d);
        if r.is_zero() {
            self.num += n * q;
        } else {
            let l = self.den.lcm(&d);
            self.num = &self.num * (&l / &self.den) + n * (&l / &d);
            self.den = l;
        }
    }

    fn finish(self) -> Rational {
        match self.small {
            Some((n, d)) => match (i64::try_from(n), i64::try_from(d)) {
                (Ok(n), Ok(d)) => Rational::new(n, d),
                _ => Rational::from_big(BigRational::new(n.into(), d.into())),
            },
            None => Rational::from_big(BigRational::new(self.num, self.den)),
        }
    }
}

fn hashed_rational(seed: u64, key: u64) -> Rational {
    let h = modp::hash_residue(seed, key);
    let num = (h % 41) as i64 - 20;
    let den = 1 + ((h >> 16) % 4) as i64;
    Rational::new(num, den)
}

fn draw(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.gen_range(-6..=6), rng.gen_range(1..=3))
}

fn det(m: &[Vec<Rational>]) -> Rational {
    let k = m.len();
    if k == 0 {
        return Rational::ONE;
    }
    let mut acc = Rational::ZERO;
    for j in 0..k {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Rational>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, r)| r.clone()).collect())
            .collect();
        let t = &m[0][j] * &det(&minor);
        acc = if j % 2 == 0 { &acc + &t } else { &acc - &t };
    }
    acc
}

fn is_rational_square(r: &Rational) -> bool {
    if r.is_negative() {
        return false;
    }
    let (n, d) = (r.numer(), r.denom());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    &sn * &sn == n && &sd * &sd == d
}

/// Lower-right `(n−1)`-block positive definite (Sylvester) and `det < 0`.
fn lorentzian(m: &[Vec<Rational>]) -> bool {
    let n = m.len();
    for k in 1..n {
        let block: Vec<Vec<Rational>> = m[n - k..].iter().map(|row| row[n - k..].to_vec()).collect();
        let d = det(&block);
        if d.is_negative() || d.is_zero() {
            return false;
        }
    }
    det(m).is_negative()
}

impl JetPoint {
    pub fn sample(ctx: Ctx, seed: u64) -> Result<Self> {
        JetPoint::sample_with_mode(ctx, seed, SampleMode::Random)
    }

    pub fn sample_with_mode(ctx: Ctx, seed: u64, mode: SampleMode) -> Result<Self> {
        let n = ctx.n();
        let mut point = JetPoint {
            ctx,
            seed,
            metric: Vec::new(),
            det: Rational::ONE,
            bound: Vec::new(),
        };
        if !ctx.is_metric() {
            return Ok(point);
        }
        let metric = match mode {
            SampleMode::Minkowski => (0..n)
                .map(|a| (0..n).map(|b| Rational::int(if a != b { 0 } else if a == 0 { -1 } else { 1 })).collect())
                .collect(),
            SampleMode::Random => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut attempt = 0;
                loop {
                    if attempt == RESAMPLE_LIMIT {
                        return Err(Error::ResampleLimit(RESAMPLE_LIMIT));
                    }
                    attempt += 1;
                    let mut m = vec![vec![Rational::ZERO; n]; n];
                    for a in 0..n {
                        for b in a..n {
                            let r = draw(&mut rng);
                            m[a][b] = r.clone();
                            m[b][a] = r;
                        }
                    }
                    if lorentzian(&m) && !is_rational_square(&-det(&m)) {
                        break m;
                    }
                }
            }
        };
        point.det = det(&metric);
        point.metric = metric;
        Ok(point)
    }

    /// Replaces the symbols `∂_C v^a` of a formal label by the derivatives
    /// of concrete components at the point's base coordinates.
    pub fn bind_field(mut self, label: char, field: &SpacetimeField) -> Result<Self> {
        let SpacetimeField::Formal(l) = SpacetimeField::formal(label)? else {
            unreachable!("formal constructor")
        };
        let comps = field.components(self.ctx.n());
        if comps.iter().flat_map(Poly::vars).any(|v| !matches!(v.kind(), VarKind::X(_))) {
            return Err(Error::Schema("bound fields must be polynomials in x"));
        }
        self.bound.retain(|(m, _)| *m != l);
        self.bound.push((l, comps));
        Ok(self)
    }

    pub fn ctx(&self) -> Ctx {
        self.ctx
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn det(&self) -> &Rational {
        &self.det
    }

    pub fn metric(&self) -> &[Vec<Rational>] {
        &self.metric
    }

    /// Signature and square-class conditions of the sampled metric.
    pub fn is_admissible(&self) -> bool {
        !self.ctx.is_metric() || lorentzian(&self.metric) && !is_rational_square(&self.s_squared())
    }

    /// The value of one coordinate.
    pub fn value(&self, v: Var) -> Result<Rational> {
        match v.kind() {
            VarKind::X(b) => {
                self.ctx.check_index(b as usize)?;
                Ok(hashed_rational(self.seed, v.raw() as u64))
            }
            VarKind::Field(comp, c) => {
                if c.order() > self.ctx.jet_cap() {
                    return Err(Error::JetCapExceeded { cap: self.ctx.jet_cap() });
                }
                match comp {
                    Component::Metric(a, b) if c.order() == 0 && self.ctx.is_metric() => {
                        Ok(self.metric[a as usize - 1][b as usize - 1].clone())
                    }
                    _ => Ok(hashed_rational(self.seed, v.raw() as u64)),
                }
            }
            VarKind::VSym(l, a, c) => {
                if c.order() > self.ctx.vsym_cap() {
                    return Err(Error::VsymCapExceeded { cap: self.ctx.vsym_cap() });
                }
                match self.bound.iter().find(|(m, _)| *m == l) {
                    Some((_, comps)) => {
                        let mut p = comps[a as usize - 1].clone();
                        for d in c.indices() {
                            p = p.derivative(Var::x(d));
                        }
                        self.eval_poly(&p, &mut FxHashMap::default())
                    }
                    None => Ok(hashed_rational(self.seed, v.raw() as u64)),
                }
            }
        }
    }

    /// Sums in unreduced integer arithmetic over a common denominator and
    /// reduces once at the end. Machine integers are used until they
    /// overflow.
    fn eval_poly(&self, p: &Poly, cache: &mut FxHashMap<Var, (i128, i128)>) -> Result<Rational> {
        let mut acc = Sum::default();
        for (m, c) in p.terms() {
            let mut small = match c {
                Rational::Small(n, d) => Some((*n as i128, *d as i128)),
                Rational::Big(_) => None,
            };
            for (v, e) in m.iter() {
                let x = match cache.get(&v) {
                    Some(x) => *x,
                    None => {
                        let x = match self.value(v)? {
                            Rational::Small(n, d) => (n as i128, d as i128),
                            Rational::Big(_) => unreachable!("oracle values are small"),
                        };
                        cache.insert(v, x);
                        x
                    }
                };
                small = small.and_then(|(n, d)| {
                    let mut t = (n, d);
                    for _ in 0..e {
                        t = (t.0.checked_mul(x.0)?, t.1.checked_mul(x.1)?);
                    }
                    Some(t)
                });
            }
            match small {
                Some((n, d)) => acc.add_small(n, d),
                None => {
                    let (mut tn, mut td) = (c.numer(), c.denom());
                    for (v, e) in m.iter() {
                        let x = cache[&v];
                        tn *= BigInt::from(x.0).pow(e as u32);
                        td *= BigInt::from(x.1).pow(e as u32);
                    }
                    acc.add_big(tn, td);
                }
            }
        }
        Ok(acc.finish())
    }

    /// `f(p) = a + b·s` as `(a, b)`.
    pub fn evaluate(&self, f: &JetScalar) -> Result<(Rational, Rational)> {
        if f.ctx() != self.ctx {
            return Err(Error::DimensionMismatch);
        }
        let mut cache = FxHashMap::default();
        let a = self.eval_poly(f.plain_part(), &mut cache)?;
        let b = self.eval_poly(f.s_part(), &mut cache)?;
        let scale = self.det.pow(f.det_power()).recip().expect("det g ≠ 0");
        Ok((&a * &scale, &b * &scale))
    }

    /// `s(p)²`.
    pub fn s_squared(&self) -> Rational {
        -&self.det
    }
}

impl fmt::Display for JetPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "seed {}", self.seed)?;
        if !self.metric.is_empty() {
            let rows: Vec<String> = self
                .metric
                .iter()
                .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))
                .collect();
            write!(f, ", g = [{}]", rows.join("; "))?;
        }
        Ok(())
    }
}

/// Objects that can be tested for vanishing at a point.
pub trait Evaluable: Sync {
    fn ctx(&self) -> Ctx;
    fn vanishes_at(&self, p: &JetPoint) -> Result<bool>;
    fn symbolic_zero(&self) -> bool;
}

impl Evaluable for JetScalar {
    fn ctx(&self) -> Ctx {
        JetScalar::ctx(self)
    }

    fn vanishes_at(&self, p: &JetPoint) -> Result<bool> {
        let (a, b) = p.evaluate(self)?;
        Ok(a.is_zero() && b.is_zero())
    }

    fn symbolic_zero(&self) -> bool {
        self.is_zero()
    }
}

impl Evaluable for Form {
    fn ctx(&self) -> Ctx {
        Form::ctx(self)
    }

    fn vanishes_at(&self, p: &JetPoint) -> Result<bool> {
        for (_, c) in self.terms() {
            if !c.vanishes_at(p)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn symbolic_zero(&self) -> bool {
        self.is_zero()
    }
}

impl Evaluable for FormFamily {
    fn ctx(&self) -> Ctx {
        FormFamily::ctx(self)
    }

    fn vanishes_at(&self, p: &JetPoint) -> Result<bool> {
        for (_, f) in self.entries() {
            if !f.vanishes_at(p)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn symbolic_zero(&self) -> bool {
        self.is_zero()
    }
}

impl<T: Evaluable> Evaluable for [T] {
    fn ctx(&self) -> Ctx {
        self[0].ctx()
    }

    fn vanishes_at(&self, p: &JetPoint) -> Result<bool> {
        for f in self {
            if !f.vanishes_at(p)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn symbolic_zero(&self) -> bool {
        self.iter().all(T::symbolic_zero)
    }
}

/// An identity `lhs = rhs` between two forms. The oracle evaluates both
/// sides coefficientwise, so the check does not rely on the cancellations
/// made when subtracting canonical forms.
#[derive(Clone, Debug)]
pub struct FormIdentity {
    pub lhs: Form,
    pub rhs: Form,
}

impl FormIdentity {
    pub fn new(lhs: Form, rhs: Form) -> Self {
        FormIdentity { lhs, rhs }
    }

    pub fn zero(lhs: Form) -> Self {
        let rhs = Form::zero(lhs.ctx());
        FormIdentity { lhs, rhs }
    }

    /// Entrywise identities between two families of the same shape.
    pub fn families(lhs: &FormFamily, rhs: &FormFamily) -> Vec<FormIdentity> {
        lhs.entries()
            .zip(rhs.entries())
            .map(|((_, a), (_, b))| FormIdentity::new(a.clone(), b.clone()))
            .collect()
    }

    pub fn residual(&self) -> Result<Form> {
        self.lhs.try_sub(&self.rhs)
    }
}

impl Evaluable for FormIdentity {
    fn ctx(&self) -> Ctx {
        self.lhs.ctx()
    }

    fn vanishes_at(&self, p: &JetPoint) -> Result<bool> {
        let zero = JetScalar::zero(self.lhs.ctx());
        for (key, a) in self.lhs.terms() {
            let b = self.rhs.coefficient(key).unwrap_or(&zero);
            if p.evaluate(a)? != p.evaluate(b)? {
                return Ok(false);
            }
        }
        for (key, b) in self.rhs.terms() {
            if self.lhs.coefficient(key).is_none() && !b.vanishes_at(p)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn symbolic_zero(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Outcome of a randomized zero test.
#[derive(Clone, Debug)]
pub struct OracleVerdict {
    pub zero: bool,
    pub points_tested: usize,
    pub first_failing_point: Option<JetPoint>,
}

/// Seed of the `i`-th point of a run.
pub fn point_seed(seed: u64, i: usize) -> u64 {
    modp::hash_residue(seed ^ 0xA5A5_5A5A, i as u64)
}

/// Evaluates at `npoints` independent points (in parallel; the verdict
/// does not depend on scheduling).
pub fn probabilistic_is_zero<T: Evaluable + ?Sized>(f: &T, npoints: usize, seed: u64) -> Result<OracleVerdict> {
    let ctx = f.ctx();
    let results = (0..npoints)
        .into_par_iter()
        .map(|i| {
            let p = JetPoint::sample(ctx, point_seed(seed, i))?;
            let zero = f.vanishes_at(&p)?;
            Ok((zero, p))
        })
        .collect::<Result<Vec<_>>>()?;
    let first_failing_point = results.into_iter().find(|(z, _)| !z).map(|(_, p)| p);
    Ok(OracleVerdict {
        zero: first_failing_point.is_none(),
        points_tested: npoints,
        first_failing_point,
    })
}

/// Symbolic and oracle verdict side by side.
#[derive(Clone, Debug, Serialize)]
pub struct Audit {
    pub symbolic_zero: bool,
    pub oracle_zero: bool,
    pub points: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing_point: Option<String>,
}

impl Audit {
    pub fn agrees(&self) -> bool {
        self.symbolic_zero == self.oracle_zero
    }
}

pub fn audit<T: Evaluable + ?Sized>(f: &T, npoints: usize, seed: u64) -> Result<Audit> {
    let verdict = probabilistic_is_zero(f, npoints, seed)?;
    Ok(Audit {
        symbolic_zero: f.symbolic_zero(),
        oracle_zero: verdict.zero,
        points: verdict.points_tested,
        seed,
        failing_point: verdict.first_failing_point.map(|p| p.to_string()),
    })
}

/// Random exact test data for property checks.
pub mod random {
    use super::*;

    /// Jet coordinates `g_{ab,C}` with `|C| ≤ order`.
    pub fn metric_vars(ctx: Ctx, order: usize) -> Vec<Var> {
        let mut out = Vec::new();
        for k in 0..=order {
            for c in ctx.multi_indices(k) {
                for comp in ctx.components() {
                    out.push(Var::field(comp, c));
                }
            }
        }
        out
    }

    fn random_poly(ctx: Ctx, rng: &mut impl Rng, terms: usize, order: usize) -> Poly {
        let vars = metric_vars(ctx, order);
        let xs: Vec<Var> = (1..=ctx.n()).map(Var::x).collect();
        let mut out = Poly::zero();
        for _ in 0..terms {
            let mut m = Monomial::one();
            for _ in 0..rng.gen_range(0..=3) {
                let v = if rng.gen_bool(0.15) {
                    *xs.choose(rng).expect("n ≥ 1")
                } else {
                    *vars.choose(rng).expect("nonempty")
                };
                m = m.mul(&Monomial::var(v, 1));
            }
            let c = Rational::new(rng.gen_range(-5..=5), rng.gen_range(1..=3));
            out = out.add(&Poly::term(m, c));
        }
        out
    }

    /// A random scalar `(A + B s)/det^m` with jet order `≤ order`.
    pub fn scalar(ctx: Ctx, rng: &mut impl Rng, terms: usize, order: usize) -> JetScalar {
        let a = random_poly(ctx, rng, terms, order);
        if !ctx.is_metric() {
            return JetScalar::from_poly(ctx, a);
        }
        let b = if rng.gen_bool(0.5) {
            random_poly(ctx, rng, terms.div_ceil(2), order)
        } else {
            Poly::zero()
        };
        JetScalar::from_parts(ctx, a, b, rng.gen_range(0..=1)).expect("valid parts")
    }

    /// A random homogeneous form of bidegree `(p, q)`.
    pub fn form(ctx: Ctx, rng: &mut impl Rng, p: usize, q: usize, terms: usize, order: usize) -> Result<Form> {
        let n = ctx.n();
        if q > n {
            return Err(Error::Bidegree {
                expected: format!("q ≤ {n}"),
                found: format!("q = {q}"),
            });
        }
        let vars = metric_vars(ctx, order);
        let mut parts = Vec::new();
        for _ in 0..terms {
            let vertical: Vec<Var> = vars.choose_multiple(rng, p).copied().collect();
            let mut dirs: Vec<usize> = (1..=n).collect();
            dirs.shuffle(rng);
            dirs.truncate(q);
            dirs.sort_unstable();
            let f = scalar(ctx, rng, 3, order);
            parts.push(Form::monomial(f, &vertical, &dirs)?);
        }
        Form::sum(ctx, &parts)
    }

    /// A family of `(p, q)`-forms with the given index signature.
    pub fn family(
        ctx: Ctx,
        rng: &mut impl Rng,
        signature: Vec<Variance>,
        p: usize,
        q: usize,
    ) -> Result<FormFamily> {
        FormFamily::new(ctx, signature, |_| form(ctx, rng, p, q, 2, 1))
    }

    /// An antisymmetric contravariant 2-index family of `(p, q)`-forms.
    pub fn antisymmetric_family(ctx: Ctx, rng: &mut impl Rng, p: usize, q: usize) -> Result<FormFamily> {
        let n = ctx.n();
        let mut upper = FxHashMap::default();
        for a in 1..=n {
            for b in a + 1..=n {
                upper.insert((a, b), form(ctx, rng, p, q, 2, 1)?);
            }
        }
        FormFamily::new(ctx, vec![Variance::Contravariant; 2], |t| {
            let (a, b) = (t[0], t[1]);
            Ok(match a.cmp(&b) {
                std::cmp::Ordering::Less => upper[&(a, b)].clone(),
                std::cmp::Ordering::Greater => -upper[&(b, a)].clone(),
                std::cmp::Ordering::Equal => Form::zero(ctx),
            })
        })
    }

    /// A polynomial vector field of total degree `≤ degree` in `x`.
    pub fn polynomial_field(ctx: Ctx, rng: &mut impl Rng, degree: usize) -> Result<SpacetimeField> {
        let n = ctx.n();
        let comps = (0..n)
            .map(|_| {
                let mut p = Poly::zero();
                for _ in 0..3 {
                    let mut m = Monomial::one();
                    for _ in 0..rng.gen_range(0..=degree) {
                        m = m.mul(&Monomial::var(Var::x(rng.gen_range(1..=n)), 1));
                    }
                    p = p.add(&Poly::term(m, Rational::new(rng.gen_range(-4..=4), rng.gen_range(1..=2))));
                }
                p
            })
            .collect();
        SpacetimeField::polynomial(ctx, comps)
    }

    pub fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    pub fn multi_index(ctx: Ctx, rng: &mut impl Rng, order: usize) -> MultiIndex {
        *ctx.multi_indices(order).choose(rng).expect("nonempty")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::diffeo_action;
    use crate::geometry::Geometry;
    use crate::gr::build_gr_theory;
    use crate::text::parse_scalar;
    use proptest::prelude::*;

    #[test]
    fn sampler_contract() {
        let c3 = Ctx::metric(3).unwrap();
        let a = JetPoint::sample(c3, 7).unwrap();
        let b = JetPoint::sample(c3, 7).unwrap();
        assert_eq!(a.metric(), b.metric());
        let v = Var::g(1, 2, MultiIndex::from_indices(&[1, 3]));
        assert_eq!(a.value(v).unwrap(), b.value(v).unwrap());
        for seed in 0..1000 {
            let p = JetPoint::sample(c3, seed).unwrap();
            assert!(p.det().is_negative());
            assert!(!is_rational_square(&p.s_squared()));
        }
        let m = JetPoint::sample_with_mode(Ctx::metric(2).unwrap(), 1, SampleMode::Minkowski).unwrap();
        assert_eq!(m.det(), &Rational::int(-1));
        let deep = Var::g(1, 1, MultiIndex::from_counts(&[7, 0, 0]));
        assert!(matches!(a.value(deep), Err(Error::JetCapExceeded { .. })));
    }

    #[test]
    fn evaluation_examples() {
        let c = Ctx::metric(3).unwrap();
        let p = JetPoint::sample(c, 11).unwrap();
        let s = JetScalar::sqrt_neg_det(c).unwrap();
        assert_eq!(p.evaluate(&(&s * &s)).unwrap(), (p.s_squared(), Rational::ZERO));
        let geo = Geometry::of(c).unwrap();
        for a in 1..=3 {
            for cc in 1..=3 {
                let sum = JetScalar::sum(c, (1..=3).map(|b| geo.ginv(a, b) * &geo.g(b, cc)));
                let delta = JetScalar::int(c, (a == cc) as i64);
                let (x, y) = p.evaluate(&(&sum - &delta)).unwrap();
                assert!(x.is_zero() && y.is_zero());
            }
        }
        let g11 = parse_scalar(c, "g_{11}").unwrap();
        let v = probabilistic_is_zero(&g11, 20, 3).unwrap();
        assert!(!v.zero);
        assert!(v.first_failing_point.is_some());
        assert!(probabilistic_is_zero(&JetScalar::zero(c), 20, 3).unwrap().zero);
    }

    #[test]
    fn einstein_vanishes_at_points_in_two_dimensions() {
        let c = Ctx::metric(2).unwrap();
        let geo = Geometry::of(c).unwrap();
        let mut raw = Vec::new();
        for a in 1..=2 {
            for b in 1..=2 {
                // unreduced G^{ab} = R^{ab} − ½ R g^{ab}
                let half_r = geo.scalar_curvature().scale(&Rational::new(1, 2));
                raw.push(&geo.ricci_upper(a, b) - &(&half_r * geo.ginv(a, b)));
            }
        }
        assert!(probabilistic_is_zero(raw.as_slice(), 20, 5).unwrap().zero);
        // the oracle sees a nonzero entry of Ric
        assert!(!probabilistic_is_zero(geo.ricci(1, 1), 20, 5).unwrap().zero);
    }

    #[test]
    fn lepage_invariance_with_concrete_field() {
        let c = Ctx::metric(3).unwrap();
        let theory = build_gr_theory(c).unwrap();
        let v = SpacetimeField::formal('v').unwrap();
        let rho = diffeo_action(c, &v).unwrap();
        let lie_gamma = rho.lie_derivative(theory.data().boundary()).unwrap();
        assert!(lie_gamma.is_zero());
        let mut rng = random::rng(42);
        let concrete = random::polynomial_field(c, &mut rng, 2).unwrap();
        for i in 0..20 {
            let p = JetPoint::sample(c, point_seed(9, i)).unwrap().bind_field('v', &concrete).unwrap();
            assert!(lie_gamma.vanishes_at(&p).unwrap());
        }
        let direct = diffeo_action(c, &concrete).unwrap().lie_derivative(theory.data().boundary()).unwrap();
        assert!(probabilistic_is_zero(&direct, 20, 9).unwrap().zero);
        // a non-identity built from the same data is caught
        let lift = crate::fields::JetVectorField::cartan_lift(c, &concrete).unwrap();
        let wrong = lift.lie_derivative(theory.data().boundary()).unwrap();
        let a = audit(&wrong, 20, 9).unwrap();
        assert!(a.agrees() && !a.oracle_zero);
    }

    fn pair() -> impl Strategy<Value = (u64, u64)> {
        (any::<u64>(), any::<u64>())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn evaluation_is_a_ring_homomorphism((s1, s2) in pair()) {
            let c = Ctx::metric(2).unwrap();
            let mut rng = random::rng(s1);
            let f = random::scalar(c, &mut rng, 4, 1);
            let g = random::scalar(c, &mut rng, 4, 1);
            let p = JetPoint::sample(c, s2).unwrap();
            let (a1, b1) = p.evaluate(&f).unwrap();
            let (a2, b2) = p.evaluate(&g).unwrap();
            let (a, b) = p.evaluate(&(&f * &g)).unwrap();
            prop_assert_eq!(a, &(&a1 * &a2) + &(&(&b1 * &b2) * &p.s_squared()));
            prop_assert_eq!(b, &(&a1 * &b2) + &(&a2 * &b1));
            let (a, b) = p.evaluate(&(&f + &g)).unwrap();
            prop_assert_eq!((a, b), (&a1 + &a2, &b1 + &b2));
        }
    }
}
