//! The coefficient ring: exact rational functions on the jet bundle.
//!
//! A [`JetScalar`] is `(A + B·s) / (det g)^m` where `A`, `B` are
//! polynomials in the jet coordinates, `s = √(−det g)` satisfies
//! `s² = −det g`, and the inverse metric only ever appears through its
//! adjugate. Zero testing is therefore syntactic: a scalar vanishes iff
//! both `A` and `B` are the zero polynomial.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::modp;
use crate::poly::{Component, Monomial, MultiIndex, Poly, Var, VarKind, MAX_DIM};
use crate::rational::Rational;

pub const DEFAULT_JET_CAP: usize = 6;
pub const DEFAULT_VSYM_CAP: usize = 5;
/// Packed multi-indices store at most 15 derivatives per direction.
const HARD_CAP: usize = 15;

/// Which fibre coordinates the jet bundle carries.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub enum Schema {
    /// Lorentzian metrics `g_{ab}`, `a <= b`.
    Metric,
    /// `fibre` scalar coordinates `q^i` over a one-dimensional base.
    Mechanics { fibre: u8 },
}

/// Construction context: dimension, fibre schema and derivative caps.
/// Plain value, passed explicitly and carried by every scalar and form.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub struct Ctx {
    schema: Schema,
    n: u8,
    jet_cap: u8,
    vsym_cap: u8,
}

impl Ctx {
    pub fn metric(n: usize) -> Result<Self> {
        Self::metric_with_caps(n, DEFAULT_JET_CAP, DEFAULT_VSYM_CAP)
    }

    pub fn metric_with_caps(n: usize, jet_cap: usize, vsym_cap: usize) -> Result<Self> {
        if !(1..=MAX_DIM).contains(&n) {
            return Err(Error::InvalidDimension(n));
        }
        Self::check_caps(jet_cap, vsym_cap)?;
        Ok(Ctx {
            schema: Schema::Metric,
            n: n as u8,
            jet_cap: jet_cap as u8,
            vsym_cap: vsym_cap as u8,
        })
    }

    /// Mechanics: base dimension 1, `fibre` configuration coordinates.
    pub fn mechanics(fibre: usize) -> Result<Self> {
        if !(1..=200).contains(&fibre) {
            return Err(Error::InvalidCap {
                name: "fibre",
                value: fibre,
            });
        }
        Ok(Ctx {
            schema: Schema::Mechanics { fibre: fibre as u8 },
            n: 1,
            jet_cap: DEFAULT_JET_CAP as u8,
            vsym_cap: DEFAULT_VSYM_CAP as u8,
        })
    }

    fn check_caps(jet_cap: usize, vsym_cap: usize) -> Result<()> {
        if !(1..=HARD_CAP).contains(&jet_cap) {
            return Err(Error::InvalidCap {
                name: "jet-cap",
                value: jet_cap,
            });
        }
        if !(1..=HARD_CAP).contains(&vsym_cap) {
            return Err(Error::InvalidCap {
                name: "vsym-cap",
                value: vsym_cap,
            });
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn schema(&self) -> Schema {
        self.schema
    }

    pub fn jet_cap(&self) -> usize {
        self.jet_cap as usize
    }

    pub fn vsym_cap(&self) -> usize {
        self.vsym_cap as usize
    }

    pub fn is_metric(&self) -> bool {
        self.schema == Schema::Metric
    }

    pub fn check_index(&self, a: usize) -> Result<()> {
        if (1..=self.n()).contains(&a) {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: a,
                n: self.n(),
            })
        }
    }

    /// 0-jet fibre components in generator order.
    pub fn components(&self) -> Vec<Component> {
        match self.schema {
            Schema::Metric => {
                let n = self.n();
                let mut out = Vec::new();
                for a in 1..=n {
                    for b in a..=n {
                        out.push(Component::metric(a, b));
                    }
                }
                out
            }
            Schema::Mechanics { fibre } => (1..=fibre).map(Component::Coord).collect(),
        }
    }

    /// All multi-indices of order `k` in the active dimension.
    pub fn multi_indices(&self, k: usize) -> Vec<MultiIndex> {
        fn rec(n: usize, slot: usize, left: usize, cur: &mut Vec<u8>, out: &mut Vec<MultiIndex>) {
            if slot == n - 1 {
                cur.push(left as u8);
                out.push(MultiIndex::from_counts(cur));
                cur.pop();
                return;
            }
            for c in (0..=left).rev() {
                cur.push(c as u8);
                rec(n, slot + 1, left - c, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(self.n(), 0, k, &mut Vec::new(), &mut out);
        out
    }

    fn det_table(&self) -> Option<&'static DetTable> {
        self.is_metric().then(|| det_table(self.n()))
    }

    pub(crate) fn det_poly(&self) -> Option<&'static Poly> {
        self.det_table().map(|t| &t.det)
    }
}

/// Determinant data for the symmetric `n × n` matrix of 0-jets.
pub(crate) struct DetTable {
    pub det: Poly,
    /// `adj[a][b]`, 0-based.
    pub adj: Vec<Vec<Poly>>,
    /// Exact divisibility pre-check point on the hypersurface `det = 0`.
    zero_point: ZeroPoint,
    powers: RwLock<Vec<Poly>>,
}

struct ZeroPoint {
    salt: u64,
    pinned: Var,
    pinned_value: u64,
}

impl ZeroPoint {
    fn value(&self, v: Var) -> u64 {
        if v == self.pinned {
            self.pinned_value
        } else {
            modp::hash_residue(self.salt, v.raw() as u64)
        }
    }
}

fn det_of(m: &[Vec<Poly>]) -> Poly {
    let k = m.len();
    if k == 0 {
        return Poly::one();
    }
    if k == 1 {
        return m[0][0].clone();
    }
    let mut acc = Poly::zero();
    for j in 0..k {
        let minor: Vec<Vec<Poly>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let term = m[0][j].mul(&det_of(&minor));
        acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

fn build_det_table(n: usize) -> DetTable {
    let g: Vec<Vec<Poly>> = (1..=n)
        .map(|a| {
            (1..=n)
                .map(|b| Poly::var(Var::g(a, b, MultiIndex::ZERO)))
                .collect()
        })
        .collect();
    let det = det_of(&g);
    let mut adj = vec![vec![Poly::zero(); n]; n];
    for a in 0..n {
        for b in 0..n {
            // adj^{ab} = (-1)^{a+b} M_{ba}
            let minor: Vec<Vec<Poly>> = (0..n)
                .filter(|&r| r != b)
                .map(|r| {
                    (0..n)
                        .filter(|&c| c != a)
                        .map(|c| g[r][c].clone())
                        .collect()
                })
                .collect();
            let m = det_of(&minor);
            adj[a][b] = if (a + b) % 2 == 0 { m } else { m.neg() };
        }
    }
    let pinned = Var::g(n, n, MultiIndex::ZERO);
    let parts = det.coefficients_in(pinned);
    debug_assert_eq!(parts.len(), 2, "det is linear in the last diagonal entry");
    let mut salt = 0x5EED_u64;
    let zero_point = loop {
        let probe = ZeroPoint {
            salt,
            pinned,
            pinned_value: 0,
        };
        let lead = parts[1].eval_mod_p(|v| probe.value(v)).expect("integer coefficients");
        if lead != 0 {
            let rest = parts[0].eval_mod_p(|v| probe.value(v)).expect("integer coefficients");
            let value = modp::mul(modp::sub(0, rest, modp::P), modp::inv(lead, modp::P), modp::P);
            break ZeroPoint {
                salt,
                pinned,
                pinned_value: value,
            };
        }
        salt += 1;
    };
    DetTable {
        powers: RwLock::new(vec![Poly::one(), det.clone()]),
        det,
        adj,
        zero_point,
    }
}

fn det_table(n: usize) -> &'static DetTable {
    static TABLES: [OnceLock<DetTable>; MAX_DIM] =
        [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
    TABLES[n - 1].get_or_init(|| build_det_table(n))
}

impl DetTable {
    fn power(&self, k: usize) -> Poly {
        if let Some(p) = self.powers.read().expect("poisoned").get(k) {
            return p.clone();
        }
        let mut w = self.powers.write().expect("poisoned");
        while w.len() <= k {
            let next = w.last().expect("nonempty").mul(&self.det);
            w.push(next);
        }
        w[k].clone()
    }

    fn may_divide(&self, p: &Poly) -> bool {
        if p.is_zero() {
            return true;
        }
        match p.eval_mod_p(|v| self.zero_point.value(v)) {
            Some(0) | None => true,
            Some(_) => false,
        }
    }
}

/// Exact scalar on the jet bundle. See the module docs for the
/// representation; values are always kept in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct JetScalar {
    ctx: Ctx,
    a: Poly,
    b: Poly,
    m: u32,
}

impl JetScalar {
    pub fn zero(ctx: Ctx) -> Self {
        JetScalar {
            ctx,
            a: Poly::zero(),
            b: Poly::zero(),
            m: 0,
        }
    }

    pub fn one(ctx: Ctx) -> Self {
        Self::constant(ctx, Rational::ONE)
    }

    pub fn constant(ctx: Ctx, c: Rational) -> Self {
        Self::from_poly(ctx, Poly::constant(c))
    }

    pub fn int(ctx: Ctx, c: i64) -> Self {
        Self::constant(ctx, Rational::int(c))
    }

    pub fn from_poly(ctx: Ctx, a: Poly) -> Self {
        JetScalar {
            ctx,
            a,
            b: Poly::zero(),
            m: 0,
        }
    }

    /// Builds `(a + b·s) / det^m` and brings it to canonical form.
    pub fn from_parts(ctx: Ctx, a: Poly, b: Poly, m: u32) -> Result<Self> {
        if !ctx.is_metric() && (!b.is_zero() || m > 0) {
            return Err(Error::Schema("mechanics"));
        }
        Ok(JetScalar { ctx, a, b, m }.normalized())
    }

    /// A single polynomial generator, validated against the caps.
    pub fn var(ctx: Ctx, v: Var) -> Result<Self> {
        check_var(ctx, v)?;
        Ok(Self::from_poly(ctx, Poly::var(v)))
    }

    /// Jet coordinate `g_{ab,C}`.
    pub fn g(ctx: Ctx, a: usize, b: usize, c: MultiIndex) -> Result<Self> {
        if !ctx.is_metric() {
            return Err(Error::Schema("mechanics"));
        }
        ctx.check_index(a)?;
        ctx.check_index(b)?;
        Self::var(ctx, Var::g(a, b, c))
    }

    /// Spacetime coordinate function `x^b`.
    pub fn x(ctx: Ctx, b: usize) -> Result<Self> {
        ctx.check_index(b)?;
        Self::var(ctx, Var::x(b))
    }

    /// Formal vector-field symbol `∂_C v^a`.
    pub fn vsym(ctx: Ctx, label: u8, a: usize, c: MultiIndex) -> Result<Self> {
        ctx.check_index(a)?;
        Self::var(ctx, Var::vsym(label, a, c))
    }

    /// `s = √(−det g)`.
    pub fn sqrt_neg_det(ctx: Ctx) -> Result<Self> {
        if !ctx.is_metric() {
            return Err(Error::Schema("mechanics"));
        }
        Ok(JetScalar {
            ctx,
            a: Poly::zero(),
            b: Poly::one(),
            m: 0,
        })
    }

    pub fn det(ctx: Ctx) -> Result<Self> {
        let det = ctx.det_poly().ok_or(Error::Schema("mechanics"))?;
        Ok(Self::from_poly(ctx, det.clone()))
    }

    /// `g^{ab} = adj(g)^{ab} / det g`.
    pub fn inverse_metric(ctx: Ctx, a: usize, b: usize) -> Result<Self> {
        ctx.check_index(a)?;
        ctx.check_index(b)?;
        let table = ctx.det_table().ok_or(Error::Schema("mechanics"))?;
        Self::from_parts(ctx, table.adj[a - 1][b - 1].clone(), Poly::zero(), 1)
    }

    pub fn ctx(&self) -> Ctx {
        self.ctx
    }

    /// Polynomial part `A` of the numerator.
    pub fn plain_part(&self) -> &Poly {
        &self.a
    }

    /// Coefficient `B` of `s` in the numerator.
    pub fn s_part(&self) -> &Poly {
        &self.b
    }

    pub fn det_power(&self) -> u32 {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.m == 0 && self.b.is_zero() {
            self.a.as_constant()
        } else {
            None
        }
    }

    /// Number of numerator monomials.
    pub fn len(&self) -> usize {
        self.a.len() + self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut v = self.a.vars();
        v.extend(self.b.vars());
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Largest jet order among field variables.
    pub fn jet_order(&self) -> usize {
        self.vars()
            .iter()
            .filter(|v| v.is_field())
            .map(|v| v.order())
            .max()
            .unwrap_or(0)
    }

    fn same_ctx(&self, other: &Self) -> Result<()> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::DimensionMismatch)
        }
    }

    fn normalized(mut self) -> Self {
        if self.a.is_zero() && self.b.is_zero() {
            self.m = 0;
            return self;
        }
        let Some(table) = self.ctx.det_table() else {
            return self;
        };
        while self.m > 0 && table.may_divide(&self.a) && table.may_divide(&self.b) {
            let qa = match self.a.div_exact(&table.det) {
                Some(q) => q,
                None => break,
            };
            let qb = match self.b.div_exact(&table.det) {
                Some(q) => q,
                None => break,
            };
            self.a = qa;
            self.b = qb;
            self.m -= 1;
        }
        self
    }

    fn lift(&self, to: u32) -> (Poly, Poly) {
        if to == self.m {
            return (self.a.clone(), self.b.clone());
        }
        let table = self.ctx.det_table().expect("det powers only in metric schema");
        let f = table.power((to - self.m) as usize);
        (self.a.mul(&f), self.b.mul(&f))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_ctx(other)?;
        Ok(self.add_unchecked(other, false))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_ctx(other)?;
        Ok(self.add_unchecked(other, true))
    }

    fn add_unchecked(&self, other: &Self, negate: bool) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { -other } else { other.clone() };
        }
        let m = self.m.max(other.m);
        let (a1, b1) = self.lift(m);
        let (a2, b2) = other.lift(m);
        let (a, b) = if negate {
            (a1.sub(&a2), b1.sub(&b2))
        } else {
            (a1.add(&a2), b1.add(&b2))
        };
        JetScalar {
            ctx: self.ctx,
            a,
            b,
            m,
        }
        .normalized()
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_ctx(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return JetScalar::zero(self.ctx);
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        let mut a = self.a.mul(&other.a);
        let mut b = self.a.mul(&other.b).add(&self.b.mul(&other.a));
        if !self.b.is_zero() && !other.b.is_zero() {
            // s·s = −det
            let det = self.ctx.det_poly().expect("s only in metric schema");
            a = a.sub(&self.b.mul(&other.b).mul(det));
        }
        if b.is_empty() {
            b = Poly::zero();
        }
        let out = JetScalar {
            ctx: self.ctx,
            a,
            b,
            m: self.m + other.m,
        };
        if out.m > 0 {
            out.normalized()
        } else {
            out
        }
    }

    /// Sum over a common denominator with a single normalization.
    pub fn sum(ctx: Ctx, items: impl IntoIterator<Item = JetScalar>) -> Self {
        let items: Vec<JetScalar> = items.into_iter().filter(|f| !f.is_zero()).collect();
        match items.len() {
            0 => return JetScalar::zero(ctx),
            1 => return items.into_iter().next().expect("one item"),
            _ => {}
        }
        assert!(
            items.iter().all(|f| f.ctx == ctx),
            "dimension mismatch in JetScalar sum"
        );
        let m = items.iter().map(|f| f.m).max().unwrap_or(0);
        let mut a_terms = Vec::new();
        let mut b_terms = Vec::new();
        for f in &items {
            let (a, b) = f.lift(m);
            a_terms.extend(a.terms().iter().cloned());
            b_terms.extend(b.terms().iter().cloned());
        }
        JetScalar {
            ctx,
            a: Poly::from_terms(a_terms),
            b: Poly::from_terms(b_terms),
            m,
        }
        .normalized()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return JetScalar::zero(self.ctx);
        }
        JetScalar {
            ctx: self.ctx,
            a: self.a.scale(c),
            b: self.b.scale(c),
            m: self.m,
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = JetScalar::one(self.ctx);
        for _ in 0..e {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    /// Applies a derivation `D` given on polynomials, with `D(det)` supplied
    /// so that `D(s) = ½ D(det)/det · s` and `D(det^{-m})` follow.
    fn apply_derivation(&self, d: impl Fn(&Poly) -> Poly, ddet: Poly) -> Self {
        if self.is_zero() {
            return JetScalar::zero(self.ctx);
        }
        let da = d(&self.a);
        let db = d(&self.b);
        if ddet.is_zero() || (self.m == 0 && self.b.is_zero()) {
            return JetScalar {
                ctx: self.ctx,
                a: da,
                b: db,
                m: self.m,
            }
            .normalized();
        }
        let det = self.ctx.det_poly().expect("metric schema");
        let m = Rational::int(self.m as i64);
        let a = da.mul(det).sub(&self.a.mul(&ddet).scale(&m));
        let b_coeff = &Rational::new(1, 2) - &m;
        let b = db.mul(det).add(&self.b.mul(&ddet).scale(&b_coeff));
        JetScalar {
            ctx: self.ctx,
            a,
            b,
            m: self.m + 1,
        }
        .normalized()
    }

    /// Total derivative `∂̂_c`: shifts every jet and vector-field symbol by
    /// one derivative in direction `c` and differentiates `x^c`.
    pub fn horizontal_derivative(&self, c: usize) -> Result<Self> {
        self.ctx.check_index(c)?;
        for v in self.vars() {
            check_shift(self.ctx, v)?;
        }
        let dpoly = |p: &Poly| horizontal_poly(p, c);
        let ddet = match self.ctx.det_poly() {
            Some(det) if !self.b.is_zero() || self.m > 0 => horizontal_poly(det, c),
            _ => Poly::zero(),
        };
        Ok(self.apply_derivation(dpoly, ddet))
    }

    /// Iterated total derivative `∂̂_C`.
    pub fn horizontal_derivative_multi(&self, c: MultiIndex) -> Result<Self> {
        let mut out = self.clone();
        for d in c.indices() {
            out = out.horizontal_derivative(d)?;
        }
        Ok(out)
    }

    /// Partial derivative with respect to a polynomial generator, treating
    /// `s` as the function `√(−det g)` of the 0-jets.
    pub fn partial(&self, v: Var) -> Self {
        let ddet = match self.ctx.det_poly() {
            Some(det) if !self.b.is_zero() || self.m > 0 => det.derivative(v),
            _ => Poly::zero(),
        };
        self.apply_derivation(|p| p.derivative(v), ddet)
    }

    /// Field variables (jet coordinates) the scalar depends on.
    pub fn field_dependencies(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.vars().into_iter().filter(|v| v.is_field()).collect();
        if (!self.b.is_zero() || self.m > 0) && self.ctx.is_metric() {
            for c in self.ctx.components() {
                vs.push(Var::field(c, MultiIndex::ZERO));
            }
        }
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// Substitutes polynomials (free of `s`) for some generators.
    pub fn substitute(&self, image: impl Fn(Var) -> Option<Poly>) -> Self {
        JetScalar {
            ctx: self.ctx,
            a: self.a.substitute(&image),
            b: self.b.substitute(&image),
            m: self.m,
        }
        .normalized()
    }
}

fn check_var(ctx: Ctx, v: Var) -> Result<()> {
    match v.kind() {
        VarKind::X(b) => ctx.check_index(b as usize),
        VarKind::Field(comp, c) => {
            match (ctx.schema(), comp) {
                (Schema::Metric, Component::Metric(a, b)) => {
                    ctx.check_index(a as usize)?;
                    ctx.check_index(b as usize)?;
                }
                (Schema::Mechanics { fibre }, Component::Coord(i)) if i >= 1 && i <= fibre => {}
                _ => return Err(Error::Schema("foreign fibre coordinate")),
            }
            if c.max_direction() > ctx.n() {
                return Err(Error::IndexOutOfRange {
                    index: c.max_direction(),
                    n: ctx.n(),
                });
            }
            if c.order() > ctx.jet_cap() {
                return Err(Error::JetCapExceeded { cap: ctx.jet_cap() });
            }
            Ok(())
        }
        VarKind::VSym(_, a, c) => {
            ctx.check_index(a as usize)?;
            if c.max_direction() > ctx.n() {
                return Err(Error::IndexOutOfRange {
                    index: c.max_direction(),
                    n: ctx.n(),
                });
            }
            if c.order() > ctx.vsym_cap() {
                return Err(Error::VsymCapExceeded { cap: ctx.vsym_cap() });
            }
            Ok(())
        }
    }
}

fn check_shift(ctx: Ctx, v: Var) -> Result<()> {
    match v.kind() {
        VarKind::X(_) => Ok(()),
        VarKind::Field(_, c) if c.order() >= ctx.jet_cap() => {
            Err(Error::JetCapExceeded { cap: ctx.jet_cap() })
        }
        VarKind::VSym(_, _, c) if c.order() >= ctx.vsym_cap() => {
            Err(Error::VsymCapExceeded { cap: ctx.vsym_cap() })
        }
        _ => Ok(()),
    }
}

/// `∂̂_c` on polynomials in jet variables.
pub(crate) fn horizontal_poly(p: &Poly, c: usize) -> Poly {
    p.derivation(|v| match v.kind() {
        VarKind::X(b) => (b as usize == c).then(Poly::one),
        _ => Some(Poly::var(v.shifted(c).expect("jet variable"))),
    })
}

impl Add for &JetScalar {
    type Output = JetScalar;
    fn add(self, rhs: &JetScalar) -> JetScalar {
        self.try_add(rhs).expect("dimension mismatch in JetScalar addition")
    }
}

impl Sub for &JetScalar {
    type Output = JetScalar;
    fn sub(self, rhs: &JetScalar) -> JetScalar {
        self.try_sub(rhs).expect("dimension mismatch in JetScalar subtraction")
    }
}

impl Mul for &JetScalar {
    type Output = JetScalar;
    fn mul(self, rhs: &JetScalar) -> JetScalar {
        self.try_mul(rhs).expect("dimension mismatch in JetScalar multiplication")
    }
}

impl Neg for &JetScalar {
    type Output = JetScalar;
    fn neg(self) -> JetScalar {
        JetScalar {
            ctx: self.ctx,
            a: self.a.neg(),
            b: self.b.neg(),
            m: self.m,
        }
    }
}

impl Neg for JetScalar {
    type Output = JetScalar;
    fn neg(self) -> JetScalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<JetScalar> for JetScalar {
            type Output = JetScalar;
            fn $m(self, rhs: JetScalar) -> JetScalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&JetScalar> for JetScalar {
            type Output = JetScalar;
            fn $m(self, rhs: &JetScalar) -> JetScalar {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for JetScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::text::write_scalar(f, self)
    }
}

/// Builds a monomial-times-constant scalar; convenience for tests and tables.
pub fn monomial_scalar(ctx: Ctx, pairs: &[(Var, u32)], c: Rational) -> JetScalar {
    JetScalar::from_poly(ctx, Poly::term(Monomial::from_pairs(pairs), c))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(n: usize) -> Ctx {
        Ctx::metric(n).unwrap()
    }

    fn g(c: Ctx, a: usize, b: usize) -> JetScalar {
        JetScalar::g(c, a, b, MultiIndex::ZERO).unwrap()
    }

    fn ginv(c: Ctx, a: usize, b: usize) -> JetScalar {
        JetScalar::inverse_metric(c, a, b).unwrap()
    }

    #[test]
    fn additive_identity_and_fraction_sum() {
        let c = ctx(2);
        assert_eq!(&g(c, 1, 1) + &JetScalar::zero(c), g(c, 1, 1));
        let det = JetScalar::det(c).unwrap();
        let inv_det = JetScalar::from_parts(c, Poly::one(), Poly::zero(), 1).unwrap();
        let rest = &(&det - &JetScalar::one(c)) * &inv_det;
        assert_eq!(&inv_det + &rest, JetScalar::one(c));
    }

    #[test]
    fn inverse_metric_contracts_to_kronecker_delta() {
        for n in 1..=3 {
            let c = ctx(n);
            for a in 1..=n {
                for e in 1..=n {
                    let mut sum = JetScalar::zero(c);
                    for b in 1..=n {
                        sum = &sum + &(&ginv(c, a, b) * &g(c, b, e));
                    }
                    let expect = JetScalar::int(c, (a == e) as i64);
                    assert_eq!(sum, expect, "n={n} a={a} c={e}");
                    assert!((&sum - &expect).is_zero());
                }
            }
        }
    }

    #[test]
    fn inverse_metric_small_dimensions() {
        let c1 = ctx(1);
        assert_eq!(
            ginv(c1, 1, 1),
            JetScalar::from_parts(c1, Poly::one(), Poly::zero(), 1).unwrap()
        );
        assert_eq!(JetScalar::det(c1).unwrap(), g(c1, 1, 1));
        let c2 = ctx(2);
        let det = &(&g(c2, 1, 1) * &g(c2, 2, 2)) - &(&g(c2, 1, 2) * &g(c2, 1, 2));
        assert_eq!(JetScalar::det(c2).unwrap(), det);
        let expect = JetScalar::from_parts(c2, g(c2, 2, 2).plain_part().clone(), Poly::zero(), 1)
            .unwrap();
        assert_eq!(ginv(c2, 1, 1), expect);
        assert_eq!(ginv(c2, 1, 2), ginv(c2, 2, 1));
        assert!(JetScalar::inverse_metric(c2, 3, 1).is_err());
    }

    #[test]
    fn s_squared_is_minus_det() {
        let c = ctx(3);
        let s = JetScalar::sqrt_neg_det(c).unwrap();
        assert_eq!(&s * &s, -JetScalar::det(c).unwrap());
        assert!((&JetScalar::zero(c) * &s).is_zero());
        // s / det · s = −1
        let s_over_det = JetScalar::from_parts(c, Poly::zero(), Poly::one(), 1).unwrap();
        assert_eq!(&s_over_det * &s, JetScalar::int(c, -1));
    }

    #[test]
    fn aliasing_and_multi_index_normalization() {
        let c = ctx(2);
        assert!((&g(c, 1, 2) - &g(c, 2, 1)).is_zero());
        let a = JetScalar::g(c, 1, 1, MultiIndex::unit(2)).unwrap();
        let b = JetScalar::g(c, 1, 1, MultiIndex::from_counts(&[0, 1])).unwrap();
        assert!((&a - &b).is_zero());
    }

    #[test]
    fn horizontal_derivative_rules() {
        let c = ctx(2);
        let d = g(c, 1, 2).horizontal_derivative(2).unwrap();
        assert_eq!(d, JetScalar::g(c, 1, 2, MultiIndex::unit(2)).unwrap());
        assert!(JetScalar::int(c, 7).horizontal_derivative(1).unwrap().is_zero());
        // ∂̂_c s = ½ g^{ab} g_{ab,c} s
        let s = JetScalar::sqrt_neg_det(c).unwrap();
        for dir in 1..=2 {
            let mut trace = JetScalar::zero(c);
            for a in 1..=2 {
                for b in 1..=2 {
                    let gd = JetScalar::g(c, a, b, MultiIndex::unit(dir)).unwrap();
                    trace = &trace + &(&ginv(c, a, b) * &gd);
                }
            }
            let expect = &(&trace * &s).scale(&Rational::new(1, 2)) * &JetScalar::one(c);
            assert_eq!(s.horizontal_derivative(dir).unwrap(), expect);
        }
        // x^1 differentiates to δ
        let x1 = JetScalar::x(c, 1).unwrap();
        assert_eq!(x1.horizontal_derivative(1).unwrap(), JetScalar::one(c));
        assert!(x1.horizontal_derivative(2).unwrap().is_zero());
    }

    #[test]
    fn jet_cap_is_an_error() {
        let c = Ctx::metric_with_caps(2, 2, 5).unwrap();
        let top = JetScalar::g(c, 1, 1, MultiIndex::from_indices(&[1, 2])).unwrap();
        assert_eq!(
            top.horizontal_derivative(1),
            Err(Error::JetCapExceeded { cap: 2 })
        );
        assert!(JetScalar::g(c, 1, 1, MultiIndex::from_indices(&[1, 1, 1])).is_err());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = JetScalar::one(ctx(2));
        let b = JetScalar::one(ctx(3));
        assert_eq!(a.try_add(&b), Err(Error::DimensionMismatch));
        assert_eq!(a.try_mul(&b), Err(Error::DimensionMismatch));
    }
}
