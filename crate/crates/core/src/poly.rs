//! Sparse multivariate polynomials over the rationals in jet variables.

use std::cmp::Ordering;
use std::fmt;

use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::modp;
use crate::rational::Rational;

/// Largest spacetime dimension the packed encodings support.
pub const MAX_DIM: usize = 4;

/// A multi-index `C = (C_1, …, C_n)` counting partial derivatives per
/// coordinate direction. Slots beyond the active dimension stay zero.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct MultiIndex([u8; MAX_DIM]);

impl MultiIndex {
    pub const ZERO: MultiIndex = MultiIndex([0; MAX_DIM]);

    pub fn from_counts(counts: &[u8]) -> Self {
        assert!(counts.len() <= MAX_DIM, "multi-index too long");
        let mut c = [0u8; MAX_DIM];
        c[..counts.len()].copy_from_slice(counts);
        MultiIndex(c)
    }

    /// Builds the multi-index of an (unordered) list of 1-based directions,
    /// so `from_indices(&[2, 1])` equals `from_indices(&[1, 2])`.
    pub fn from_indices(indices: &[usize]) -> Self {
        let mut c = MultiIndex::ZERO;
        for &d in indices {
            c = c.concat(d);
        }
        c
    }

    pub fn unit(d: usize) -> Self {
        MultiIndex::ZERO.concat(d)
    }

    pub fn counts(&self) -> [u8; MAX_DIM] {
        self.0
    }

    pub fn count(&self, d: usize) -> u8 {
        self.0[d - 1]
    }

    /// `|C|`.
    pub fn order(&self) -> usize {
        self.0.iter().map(|&c| c as usize).sum()
    }

    /// `Cd`: increments slot `d` (1-based).
    pub fn concat(&self, d: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&d), "direction {d} out of range");
        let mut c = self.0;
        c[d - 1] += 1;
        MultiIndex(c)
    }

    /// Removes one derivative in direction `d`, if present.
    pub fn remove(&self, d: usize) -> Option<Self> {
        let mut c = self.0;
        if c[d - 1] == 0 {
            return None;
        }
        c[d - 1] -= 1;
        Some(MultiIndex(c))
    }

    /// Sorted list of 1-based directions, e.g. `(1,0,2,0) -> [1,3,3]`.
    pub fn indices(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.order());
        for (i, &c) in self.0.iter().enumerate() {
            for _ in 0..c {
                out.push(i + 1);
            }
        }
        out
    }

    /// Smallest direction with a nonzero count.
    pub fn first_direction(&self) -> Option<usize> {
        self.0.iter().position(|&c| c > 0).map(|i| i + 1)
    }

    /// Largest direction used, 0 for the empty index.
    pub fn max_direction(&self) -> usize {
        self.0.iter().rposition(|&c| c > 0).map(|i| i + 1).unwrap_or(0)
    }

    fn pack(&self) -> u32 {
        self.0.iter().fold(0u32, |acc, &c| {
            debug_assert!(c < 16);
            (acc << 4) | c as u32
        })
    }

    fn unpack(bits: u32) -> Self {
        let mut c = [0u8; MAX_DIM];
        for (i, slot) in c.iter_mut().enumerate() {
            *slot = ((bits >> (4 * (MAX_DIM - 1 - i))) & 0xF) as u8;
        }
        MultiIndex(c)
    }
}

/// Fibre component of a jet coordinate.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Component {
    /// Metric component `g_{ab}` with `a <= b`.
    Metric(u8, u8),
    /// Generic fibre coordinate `q^i` (the mechanics configuration space).
    Coord(u8),
}

impl Component {
    /// Metric component with the symmetric pair canonicalized.
    pub fn metric(a: usize, b: usize) -> Self {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        Component::Metric(a as u8, b as u8)
    }
}

/// Decoded view of a [`Var`].
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum VarKind {
    /// Spacetime coordinate `x^b`.
    X(u8),
    /// Jet coordinate `∂_C` of a fibre component.
    Field(Component, MultiIndex),
    /// Formal vector-field symbol `∂_C v^a` for the label `v`.
    VSym(u8, u8, MultiIndex),
}

/// A polynomial generator packed into 32 bits. The derived order is the
/// fixed total order used for all canonical forms.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Var(u32);

const KIND_X: u32 = 0;
const KIND_METRIC: u32 = 1;
const KIND_COORD: u32 = 2;
const KIND_VSYM: u32 = 3;

impl Var {
    pub fn x(b: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&b));
        Var((KIND_X << 28) | ((b as u32) << 16))
    }

    pub fn field(comp: Component, c: MultiIndex) -> Self {
        match comp {
            Component::Metric(a, b) => {
                debug_assert!(a <= b);
                Var((KIND_METRIC << 28) | (((a as u32) << 4 | b as u32) << 20) | c.pack())
            }
            Component::Coord(i) => Var((KIND_COORD << 28) | ((i as u32) << 20) | c.pack()),
        }
    }

    /// `g_{ab,C}` with the pair canonicalized.
    pub fn g(a: usize, b: usize, c: MultiIndex) -> Self {
        Var::field(Component::metric(a, b), c)
    }

    pub fn vsym(label: u8, a: usize, c: MultiIndex) -> Self {
        Var((KIND_VSYM << 28) | ((label as u32) << 20) | ((a as u32) << 16) | c.pack())
    }

    pub fn kind(&self) -> VarKind {
        let k = self.0 >> 28;
        let mid = ((self.0 >> 20) & 0xFF) as u8;
        let small = ((self.0 >> 16) & 0xF) as u8;
        let c = MultiIndex::unpack(self.0 & 0xFFFF);
        match k {
            KIND_X => VarKind::X(small),
            KIND_METRIC => VarKind::Field(Component::Metric(mid >> 4, mid & 0xF), c),
            KIND_COORD => VarKind::Field(Component::Coord(mid), c),
            KIND_VSYM => VarKind::VSym(mid, small, c),
            _ => unreachable!("corrupt variable encoding"),
        }
    }

    pub fn raw(&self) -> u32 {
        self.0
    }

    pub fn is_field(&self) -> bool {
        matches!(self.0 >> 28, KIND_METRIC | KIND_COORD)
    }

    /// The jet order `|C|` of field and vsym variables, 0 for coordinates.
    pub fn order(&self) -> usize {
        match self.kind() {
            VarKind::X(_) => 0,
            VarKind::Field(_, c) | VarKind::VSym(_, _, c) => c.order(),
        }
    }

    /// Same variable with one more derivative in direction `d`
    /// (`None` for the coordinate functions).
    pub fn shifted(&self, d: usize) -> Option<Var> {
        match self.kind() {
            VarKind::X(_) => None,
            VarKind::Field(comp, c) => Some(Var::field(comp, c.concat(d))),
            VarKind::VSym(l, a, c) => Some(Var::vsym(l, a as usize, c.concat(d))),
        }
    }
}

type Packed = u64;

#[inline]
fn pack(v: Var, e: u32) -> Packed {
    ((v.0 as u64) << 32) | e as u64
}

#[inline]
fn unpack(p: Packed) -> (Var, u32) {
    (Var((p >> 32) as u32), (p & 0xFFFF_FFFF) as u32)
}

/// A monomial: variables in increasing order with positive exponents.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Monomial(SmallVec<[Packed; 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(v: Var, e: u32) -> Self {
        if e == 0 {
            return Monomial::one();
        }
        let mut s = SmallVec::new();
        s.push(pack(v, e));
        Monomial(s)
    }

    pub fn from_pairs(pairs: &[(Var, u32)]) -> Self {
        let mut m = Monomial::one();
        for &(v, e) in pairs {
            m = m.mul(&Monomial::var(v, e));
        }
        m
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, u32)> + '_ {
        self.0.iter().map(|&p| unpack(p))
    }

    pub fn degree(&self, v: Var) -> u32 {
        self.iter().find(|&(w, _)| w == v).map(|(_, e)| e).unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.iter().map(|(_, e)| e).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let mut out = SmallVec::with_capacity(self.0.len() + other.0.len());
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            let (va, ea) = unpack(a[i]);
            let (vb, eb) = unpack(b[j]);
            match va.cmp(&vb) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push(pack(va, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / v^e`, or `None` if not divisible.
    pub fn div_var(&self, v: Var, e: u32) -> Option<Monomial> {
        if e == 0 {
            return Some(self.clone());
        }
        let mut out = SmallVec::with_capacity(self.0.len());
        let mut found = false;
        for &p in &self.0 {
            let (w, f) = unpack(p);
            if w == v {
                if f < e {
                    return None;
                }
                found = true;
                if f > e {
                    out.push(pack(w, f - e));
                }
            } else {
                out.push(p);
            }
        }
        found.then_some(Monomial(out))
    }

    /// Exact monomial quotient, if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut m = self.clone();
        for (v, e) in other.iter() {
            m = m.div_var(v, e)?;
        }
        Some(m)
    }

    fn eval_mod_p(&self, val: &mut impl FnMut(Var) -> u64) -> u64 {
        let mut acc = 1u64;
        for (v, e) in self.iter() {
            acc = modp::mul(acc, modp::pow(val(v), e as u64, modp::P), modp::P);
        }
        acc
    }
}

/// A polynomial with rational coefficients, stored as terms sorted by
/// monomial with no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    terms: Vec<(Monomial, Rational)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::ONE)
    }

    pub fn constant(c: Rational) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly {
                terms: vec![(Monomial::one(), c)],
            }
        }
    }

    pub fn var(v: Var) -> Self {
        Poly {
            terms: vec![(Monomial::var(v, 1), Rational::ONE)],
        }
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    /// Collects arbitrary terms, combining duplicates.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut acc: FxHashMap<Monomial, Rational> = FxHashMap::default();
        for (m, c) in terms {
            accumulate(&mut acc, m, c);
        }
        Poly::from_map(acc)
    }

    fn from_map(acc: FxHashMap<Monomial, Rational>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        Poly { terms }
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
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

    /// The constant value, if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::ZERO),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self
            .terms
            .iter()
            .flat_map(|(m, _)| m.iter().map(|(v, _)| v))
            .collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    pub fn max_var(&self) -> Option<Var> {
        self.terms
            .iter()
            .filter_map(|(m, _)| m.iter().map(|(v, _)| v).max())
            .max()
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree(v)).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        Poly {
            terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect(),
        }
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, d)| (m.clone(), -d)).collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.merge(other, true)
    }

    fn merge(&self, other: &Poly, negate: bool) -> Poly {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { other.neg() } else { other.clone() };
        }
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        &a[i].1 - &b[j].1
                    } else {
                        &a[i].1 + &b[j].1
                    };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in &b[j..] {
            let c = if negate { -&t.1 } else { t.1.clone() };
            out.push((t.0.clone(), c));
        }
        Poly { terms: out }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        if let Some(c) = small.as_constant() {
            return large.scale(&c);
        }
        if small.len() == 1 {
            let (m, c) = &small.terms[0];
            let mut terms: Vec<_> = large
                .terms
                .iter()
                .map(|(n, d)| (n.mul(m), d * c))
                .collect();
            terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
            return Poly { terms };
        }
        let mut acc: FxHashMap<Monomial, Rational> =
            FxHashMap::with_capacity_and_hasher(small.len() * large.len(), Default::default());
        for (m, c) in &small.terms {
            for (n, d) in &large.terms {
                accumulate(&mut acc, m.mul(n), c * d);
            }
        }
        Poly::from_map(acc)
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Poly {
        self.mul(&Poly::term(m.clone(), c.clone()))
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Partial derivative with respect to `v`.
    pub fn derivative(&self, v: Var) -> Poly {
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.degree(v);
            (e > 0).then(|| {
                (
                    m.div_var(v, 1).expect("degree checked"),
                    c * &Rational::int(e as i64),
                )
            })
        });
        Poly::from_terms(terms)
    }

    /// Applies the derivation determined by its values on generators.
    /// `image(v)` returning `None` means the generator is a constant.
    pub fn derivation(&self, mut image: impl FnMut(Var) -> Option<Poly>) -> Poly {
        let mut cache: FxHashMap<Var, Option<Poly>> = FxHashMap::default();
        let mut acc: FxHashMap<Monomial, Rational> = FxHashMap::default();
        for (m, c) in &self.terms {
            for (v, e) in m.iter() {
                let img = cache.entry(v).or_insert_with(|| image(v));
                let Some(img) = img else { continue };
                let rest = m.div_var(v, 1).expect("variable present");
                let factor = c * &Rational::int(e as i64);
                for (n, d) in &img.terms {
                    accumulate(&mut acc, rest.mul(n), &factor * d);
                }
            }
        }
        Poly::from_map(acc)
    }

    /// Substitutes polynomials for some variables.
    pub fn substitute(&self, mut image: impl FnMut(Var) -> Option<Poly>) -> Poly {
        let mut cache: FxHashMap<Var, Option<Poly>> = FxHashMap::default();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut kept = Monomial::one();
            let mut factor = Poly::constant(c.clone());
            for (v, e) in m.iter() {
                match cache.entry(v).or_insert_with(|| image(v)) {
                    Some(p) => factor = factor.mul(&p.pow(e)),
                    None => kept = kept.mul(&Monomial::var(v, e)),
                }
            }
            out = out.add(&factor.mul(&Poly::term(kept, Rational::ONE)));
        }
        out
    }

    /// Evaluation modulo [`modp::P`]; `None` if a coefficient denominator
    /// vanishes modulo the prime.
    pub fn eval_mod_p(&self, mut val: impl FnMut(Var) -> u64) -> Option<u64> {
        let p = modp::P;
        let mut acc = 0u64;
        for (m, c) in &self.terms {
            let cm = c.mod_p(p)?;
            acc = modp::add(acc, modp::mul(cm, m.eval_mod_p(&mut val), p), p);
        }
        Some(acc)
    }

    /// Splits into coefficients of powers of `v`: `self = Σ_k out[k] v^k`.
    pub fn coefficients_in(&self, v: Var) -> Vec<Poly> {
        let deg = self.degree_in(v) as usize;
        let mut parts: Vec<Vec<(Monomial, Rational)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let e = m.degree(v);
            let rest = m.div_var(v, e).expect("degree present");
            parts[e as usize].push((rest, c.clone()));
        }
        parts
            .into_iter()
            .map(|mut t| {
                t.sort_unstable_by(|a, b| a.0.cmp(&b.0));
                Poly { terms: t }
            })
            .collect()
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a
    /// remainder. Recursive in the largest variable of the divisor.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if let Some(c) = divisor.as_constant() {
            return Some(self.scale(&c.recip().expect("nonzero constant")));
        }
        if divisor.len() == 1 {
            let (dm, dc) = &divisor.terms[0];
            let inv = dc.recip().expect("nonzero coefficient");
            let mut terms = Vec::with_capacity(self.len());
            for (m, c) in &self.terms {
                terms.push((m.div(dm)?, c * &inv));
            }
            terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
            return Some(Poly { terms });
        }
        let y = divisor.max_var().expect("non-constant divisor");
        let dparts = divisor.coefficients_in(y);
        let dh = dparts.len() - 1;
        let lead = &dparts[dh];
        let mut rem = self.clone();
        let mut quotient = Poly::zero();
        while !rem.is_zero() {
            let k = rem.degree_in(y) as usize;
            if k < dh {
                return None;
            }
            let top = rem.coefficients_in(y).swap_remove(k);
            let q = top.div_exact(lead)?;
            let q = q.mul(&Poly::term(Monomial::var(y, (k - dh) as u32), Rational::ONE));
            rem = rem.sub(&q.mul(divisor));
            quotient = quotient.add(&q);
        }
        Some(quotient)
    }
}

fn accumulate(acc: &mut FxHashMap<Monomial, Rational>, m: Monomial, c: Rational) {
    match acc.entry(m) {
        std::collections::hash_map::Entry::Occupied(mut o) => {
            let s = o.get() + &c;
            *o.get_mut() = s;
        }
        std::collections::hash_map::Entry::Vacant(v) => {
            v.insert(c);
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::text::write_poly(f, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(a: usize, b: usize) -> Poly {
        Poly::var(Var::g(a, b, MultiIndex::ZERO))
    }

    #[test]
    fn multi_index_is_order_insensitive() {
        assert_eq!(
            MultiIndex::from_indices(&[2, 1, 2]),
            MultiIndex::from_indices(&[1, 2, 2])
        );
        let c = MultiIndex::from_indices(&[1, 3, 3]);
        assert_eq!(c.order(), 3);
        assert_eq!(c.indices(), vec![1, 3, 3]);
        assert_eq!(c.remove(3).unwrap().indices(), vec![1, 3]);
        assert!(c.remove(2).is_none());
    }

    #[test]
    fn var_roundtrip_and_aliasing() {
        let c = MultiIndex::from_indices(&[1, 2]);
        assert_eq!(Var::g(2, 1, c), Var::g(1, 2, c));
        assert_eq!(
            Var::g(1, 2, c).kind(),
            VarKind::Field(Component::Metric(1, 2), c)
        );
        assert_eq!(Var::vsym(b'v', 3, c).kind(), VarKind::VSym(b'v', 3, c));
        assert_eq!(Var::x(2).kind(), VarKind::X(2));
        assert_eq!(
            Var::field(Component::Coord(2), c).kind(),
            VarKind::Field(Component::Coord(2), c)
        );
    }

    #[test]
    fn arithmetic_basics() {
        let p = g(1, 1).add(&g(2, 2));
        let sq = p.mul(&p);
        let expect = g(1, 1)
            .mul(&g(1, 1))
            .add(&g(1, 1).mul(&g(2, 2)).scale(&Rational::int(2)))
            .add(&g(2, 2).mul(&g(2, 2)));
        assert_eq!(sq, expect);
        assert!(sq.sub(&expect).is_zero());
        assert_eq!(sq.derivative(Var::g(1, 1, MultiIndex::ZERO)), p.scale(&Rational::int(2)));
    }

    #[test]
    fn exact_division_by_determinant() {
        let det = g(1, 1).mul(&g(2, 2)).sub(&g(1, 2).mul(&g(1, 2)));
        let q = g(1, 1).add(&Poly::var(Var::vsym(b'v', 1, MultiIndex::unit(2))));
        let prod = det.mul(&q);
        assert_eq!(prod.div_exact(&det), Some(q.clone()));
        assert_eq!(prod.add(&Poly::one()).div_exact(&det), None);
        assert_eq!(g(1, 1).div_exact(&det), None);
    }
}
