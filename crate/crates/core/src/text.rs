//! Stable, re-parseable text format for scalars and forms.
//!
//! Generators: `g_{ab}`, `g_{ab,cd}`, `q^i`, `q^i_{,1}`, `x^b`, `v^a_{,C}`,
//! `s` (for `√(−det g)`) and the keyword `det`. A scalar prints as
//! `(A) + (B)*s` over `det^m`; a form prints as `{coeff} gens + …` where
//! `gens` is `1` or a `∧`-word of `δ`-generators followed by `dx^e`.

use std::fmt::{self, Write};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::formalg::Form;
use crate::jetscalar::{Ctx, JetScalar};
use crate::poly::{Component, Monomial, MultiIndex, Poly, Var, VarKind};
use crate::rational::Rational;

/// Letters that cannot serve as vector-field labels.
pub const RESERVED_LABELS: &[char] = &['d', 'g', 'q', 's', 'x'];

fn write_multi_index(f: &mut impl Write, c: MultiIndex) -> fmt::Result {
    for d in c.indices() {
        write!(f, "{d}")?;
    }
    Ok(())
}

fn write_upper(f: &mut impl Write, i: u8) -> fmt::Result {
    if i < 10 {
        write!(f, "^{i}")
    } else {
        write!(f, "^{{{i}}}")
    }
}

pub fn write_var(f: &mut impl Write, v: Var) -> fmt::Result {
    match v.kind() {
        VarKind::X(b) => write!(f, "x^{b}"),
        VarKind::Field(Component::Metric(a, b), c) => {
            write!(f, "g_{{{a}{b}")?;
            if c.order() > 0 {
                f.write_char(',')?;
                write_multi_index(f, c)?;
            }
            f.write_char('}')
        }
        VarKind::Field(Component::Coord(i), c) => {
            f.write_char('q')?;
            write_upper(f, i)?;
            if c.order() > 0 {
                f.write_str("_{,")?;
                write_multi_index(f, c)?;
                f.write_char('}')?;
            }
            Ok(())
        }
        VarKind::VSym(label, a, c) => {
            write!(f, "{}^{a}", label as char)?;
            if c.order() > 0 {
                f.write_str("_{,")?;
                write_multi_index(f, c)?;
                f.write_char('}')?;
            }
            Ok(())
        }
    }
}

pub fn var_string(v: Var) -> String {
    let mut s = String::new();
    write_var(&mut s, v).expect("string write");
    s
}

fn write_monomial(f: &mut impl Write, m: &Monomial) -> fmt::Result {
    for (i, (v, e)) in m.iter().enumerate() {
        if i > 0 {
            f.write_char('*')?;
        }
        write_var(f, v)?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

pub fn write_poly(f: &mut impl Write, p: &Poly) -> fmt::Result {
    if p.is_zero() {
        return f.write_char('0');
    }
    for (i, (m, c)) in p.terms().iter().enumerate() {
        let neg = c.is_negative();
        match (i, neg) {
            (0, true) => f.write_char('-')?,
            (0, false) => {}
            (_, true) => f.write_str(" - ")?,
            (_, false) => f.write_str(" + ")?,
        }
        let abs = c.abs();
        if m.is_one() {
            write!(f, "{abs}")?;
        } else {
            if !abs.is_one() {
                write!(f, "{abs}*")?;
            }
            write_monomial(f, m)?;
        }
    }
    Ok(())
}

fn poly_string(p: &Poly) -> String {
    let mut s = String::new();
    write_poly(&mut s, p).expect("string write");
    s
}

pub fn write_scalar(f: &mut impl Write, x: &JetScalar) -> fmt::Result {
    let (a, b, m) = (x.plain_part(), x.s_part(), x.det_power());
    if a.is_zero() && b.is_zero() {
        return f.write_char('0');
    }
    let s_term = match b.as_constant() {
        _ if b.is_zero() => None,
        Some(c) if c.is_one() => Some("s".to_string()),
        _ => Some(format!("({})*s", poly_string(b))),
    };
    let numerator = match (a.is_zero(), s_term) {
        (false, None) => {
            if m == 0 {
                return write_poly(f, a);
            }
            poly_string(a)
        }
        (true, Some(st)) => st,
        (false, Some(st)) => format!("({}) + {st}", poly_string(a)),
        (true, None) => unreachable!("zero handled above"),
    };
    match m {
        0 => f.write_str(&numerator),
        1 => write!(f, "({numerator})/det"),
        _ => write!(f, "({numerator})/det^{m}"),
    }
}

pub fn scalar_string(x: &JetScalar) -> String {
    let mut s = String::new();
    write_scalar(&mut s, x).expect("string write");
    s
}

/// Writes at most `max_terms` monomials, then a `…` marker with the count.
pub fn write_form(f: &mut impl Write, w: &Form, max_terms: usize) -> fmt::Result {
    if w.is_zero() {
        return f.write_char('0');
    }
    for (i, (key, c)) in w.terms().enumerate() {
        if i == max_terms {
            return write!(f, " + … ({} more terms)", w.len() - max_terms);
        }
        if i > 0 {
            f.write_str(" + ")?;
        }
        f.write_char('{')?;
        write_scalar(f, c)?;
        f.write_str("} ")?;
        let mut first = true;
        for &u in key.vertical() {
            if !first {
                f.write_char('∧')?;
            }
            first = false;
            f.write_char('δ')?;
            write_var(f, u)?;
        }
        for &e in key.horizontal() {
            if !first {
                f.write_char('∧')?;
            }
            first = false;
            write!(f, "dx^{e}")?;
        }
        if first {
            f.write_char('1')?;
        }
    }
    Ok(())
}

pub fn form_string(w: &Form, max_terms: usize) -> String {
    let mut s = String::new();
    write_form(&mut s, w, max_terms).expect("string write");
    s
}

/// Character-level recursive-descent parser with line/column tracking.
pub(crate) struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    ctx: Ctx,
    /// Accept the DSL spelling `x1` for `x^1`.
    pub bare_coordinates: bool,
    _src: &'a str,
}

impl<'a> Parser<'a> {
    pub fn new(ctx: Ctx, src: &'a str) -> Self {
        Parser {
            chars: src.chars().collect(),
            pos: 0,
            ctx,
            bare_coordinates: false,
            _src: src,
        }
    }

    pub fn error(&self, message: impl Into<String>) -> Error {
        let (mut line, mut column) = (1, 1);
        for &c in &self.chars[..self.pos.min(self.chars.len())] {
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        }
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    pub fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    pub fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, k: usize) -> Option<char> {
        self.chars.get(self.pos + k).copied()
    }

    pub fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.chars.len()
    }

    pub fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        let n = s.chars().count();
        if self.chars.len() >= self.pos + n
            && self.chars[self.pos..self.pos + n].iter().copied().eq(s.chars())
        {
            self.pos += n;
            true
        } else {
            false
        }
    }

    fn expect_raw(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    pub fn word(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
        {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn digit(&mut self) -> Result<usize> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                self.pos += 1;
                Ok(c as usize - '0' as usize)
            }
            _ => Err(self.error("expected a digit")),
        }
    }

    fn uint(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.error("invalid integer"))
    }

    fn small_uint(&mut self) -> Result<u32> {
        let n = self.uint()?;
        u32::try_from(n).map_err(|_| self.error("exponent too large"))
    }

    fn upper_index(&mut self) -> Result<usize> {
        self.expect_raw('^')?;
        if self.peek() == Some('{') {
            self.pos += 1;
            let n = self.small_uint()? as usize;
            self.expect_raw('}')?;
            Ok(n)
        } else {
            self.digit()
        }
    }

    fn index_digits(&mut self) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            out.push(self.digit()?);
        }
        Ok(out)
    }

    fn check_dirs(&self, dirs: &[usize]) -> Result<MultiIndex> {
        for &d in dirs {
            if !(1..=self.ctx.n()).contains(&d) {
                return Err(self.error(format!("index {d} out of range")));
            }
        }
        Ok(MultiIndex::from_indices(dirs))
    }

    fn optional_jet_suffix(&mut self) -> Result<MultiIndex> {
        if self.eat_str("_{,") {
            let dirs = self.index_digits()?;
            self.expect_raw('}')?;
            self.check_dirs(&dirs)
        } else {
            Ok(MultiIndex::ZERO)
        }
    }

    /// Parses a single generator name (without leading `δ`).
    pub fn var(&mut self) -> Result<Var> {
        self.skip_ws();
        let start = self.pos;
        let c = self.peek().ok_or_else(|| self.error("unexpected end of input"))?;
        let v = match c {
            'g' => {
                self.pos += 1;
                if !self.eat_str("_{") {
                    return Err(self.error("expected `g_{`"));
                }
                let a = self.digit()?;
                let b = self.digit()?;
                let dirs = if self.peek() == Some(',') {
                    self.pos += 1;
                    self.index_digits()?
                } else {
                    Vec::new()
                };
                self.expect_raw('}')?;
                let c = self.check_dirs(&dirs)?;
                Var::g(a, b, c)
            }
            'q' => {
                self.pos += 1;
                let i = self.upper_index()?;
                let c = self.optional_jet_suffix()?;
                Var::field(Component::Coord(i as u8), c)
            }
            'x' => {
                self.pos += 1;
                let b = if self.peek() == Some('^') {
                    self.upper_index()?
                } else if self.bare_coordinates {
                    self.digit()?
                } else {
                    return Err(self.error("expected `x^`"));
                };
                if !(1..=self.ctx.n()).contains(&b) {
                    return Err(self.error(format!("coordinate x{b} out of range")));
                }
                Var::x(b)
            }
            c if c.is_ascii_lowercase() && !RESERVED_LABELS.contains(&c) => {
                self.pos += 1;
                let a = self.upper_index()?;
                let c2 = self.optional_jet_suffix()?;
                Var::vsym(c as u8, a, c2)
            }
            _ => return Err(self.error(format!("unexpected `{c}`"))),
        };
        if JetScalar::var(self.ctx, v).is_err() {
            self.pos = start;
            return Err(self.error(format!("generator `{}` invalid here", var_string(v))));
        }
        Ok(v)
    }

    pub fn expr(&mut self) -> Result<JetScalar> {
        self.skip_ws();
        let mut acc = if self.eat('-') {
            -self.term()?
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<JetScalar> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.factor()?;
            } else if self.eat('/') {
                let before = self.pos;
                let d = self.factor()?;
                acc = self.divide(acc, d).map_err(|e| {
                    self.pos = before;
                    e
                })?;
            } else {
                return Ok(acc);
            }
        }
    }

    /// Division by `c · det^k` with `c` a nonzero rational.
    fn divide(&self, num: JetScalar, d: JetScalar) -> Result<JetScalar> {
        if let Some(c) = d.as_constant() {
            return c
                .recip()
                .map(|r| num.scale(&r))
                .ok_or_else(|| self.error("division by zero"));
        }
        let bad = || self.error("only rational constants and powers of det may divide");
        if !d.s_part().is_zero() || d.det_power() > 0 {
            return Err(bad());
        }
        let det = self.ctx.det_poly().ok_or_else(bad)?;
        let mut p = d.plain_part().clone();
        let mut k = 0u32;
        while p.as_constant().is_none() {
            p = p.div_exact(det).ok_or_else(bad)?;
            k += 1;
        }
        let c = p.as_constant().expect("constant").recip().ok_or_else(bad)?;
        let (a, b) = (num.plain_part().clone(), num.s_part().clone());
        let m = num.det_power() + k;
        JetScalar::from_parts(self.ctx, a, b, m).map(|x| x.scale(&c))
    }

    fn factor(&mut self) -> Result<JetScalar> {
        let base = self.atom()?;
        let mut out = base;
        while self.peek() == Some('^') {
            self.pos += 1;
            let e = self.small_uint()?;
            out = out.pow(e);
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<JetScalar> {
        self.skip_ws();
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                let n = self.uint()?;
                if self.peek() == Some('.') || self.peek() == Some('e') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
                    self.pos = start;
                    return Err(self.error("non-rational literal: write fractions as p/q"));
                }
                Ok(JetScalar::constant(
                    self.ctx,
                    Rational::from_big(BigRational::from_integer(n)),
                ))
            }
            Some('s') if !self.peek_at(1).is_some_and(|c| c == '^') => {
                self.pos += 1;
                JetScalar::sqrt_neg_det(self.ctx).map_err(|_| self.error("`s` needs a metric"))
            }
            Some('d') if self.peek_at(1) == Some('e') && self.peek_at(2) == Some('t') => {
                self.pos += 3;
                JetScalar::det(self.ctx).map_err(|_| self.error("`det` needs a metric"))
            }
            Some(_) => {
                let v = self.var()?;
                Ok(JetScalar::var(self.ctx, v).expect("validated"))
            }
        }
    }

    fn form_term(&mut self) -> Result<Form> {
        self.expect('{')?;
        let coeff = self.expr()?;
        self.expect('}')?;
        self.skip_ws();
        let mut vertical = Vec::new();
        let mut horizontal = Vec::new();
        if self.peek() == Some('1') {
            self.pos += 1;
        } else {
            loop {
                self.skip_ws();
                if self.eat_str("δ") {
                    let v = self.var()?;
                    if !v.is_field() {
                        return Err(self.error("δ applies to field coordinates only"));
                    }
                    vertical.push(v);
                } else if self.eat_str("dx") {
                    let e = self.upper_index()?;
                    self.ctx.check_index(e).map_err(|e| self.error(e.to_string()))?;
                    horizontal.push(e);
                } else {
                    return Err(self.error("expected a generator"));
                }
                if !self.eat('∧') {
                    break;
                }
            }
        }
        Form::monomial(coeff, &vertical, &horizontal).map_err(|e| self.error(e.to_string()))
    }

    pub fn form(&mut self) -> Result<Form> {
        self.skip_ws();
        if self.peek() == Some('0') {
            self.pos += 1;
            return Ok(Form::zero(self.ctx));
        }
        let mut acc = self.form_term()?;
        while self.eat('+') {
            acc = &acc + &self.form_term()?;
        }
        Ok(acc)
    }
}

/// Parses the scalar text format back into a canonical scalar.
pub fn parse_scalar(ctx: Ctx, src: &str) -> Result<JetScalar> {
    let mut p = Parser::new(ctx, src);
    let out = p.expr()?;
    if !p.at_end() {
        return Err(p.error("trailing input"));
    }
    Ok(out)
}

/// Parses the form text format back into a canonical form.
pub fn parse_form(ctx: Ctx, src: &str) -> Result<Form> {
    let mut p = Parser::new(ctx, src);
    let out = p.form()?;
    if !p.at_end() {
        return Err(p.error("trailing input"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_roundtrip() {
        let c = Ctx::metric(3).unwrap();
        let s = JetScalar::sqrt_neg_det(c).unwrap();
        let ginv = JetScalar::inverse_metric(c, 1, 2).unwrap();
        let g = JetScalar::g(c, 1, 3, MultiIndex::from_indices(&[2, 2])).unwrap();
        let v = JetScalar::vsym(c, b'v', 2, MultiIndex::unit(1)).unwrap();
        let x = &(&(&ginv * &s) + &g.scale(&Rational::new(-3, 2))) * &v;
        let text = scalar_string(&x);
        assert_eq!(parse_scalar(c, &text).unwrap(), x, "{text}");
        assert_eq!(scalar_string(&JetScalar::zero(c)), "0");
        assert_eq!(scalar_string(&s), "s");
    }

    #[test]
    fn printed_spellings() {
        let c = Ctx::metric(2).unwrap();
        let g = JetScalar::g(c, 2, 1, MultiIndex::from_indices(&[2, 1])).unwrap();
        assert_eq!(scalar_string(&g), "g_{12,12}");
        let inv = JetScalar::inverse_metric(c, 1, 1).unwrap();
        assert_eq!(scalar_string(&inv), "(g_{22})/det");
        let m = Ctx::mechanics(2).unwrap();
        let q = JetScalar::var(m, Var::field(Component::Coord(2), MultiIndex::unit(1))).unwrap();
        assert_eq!(scalar_string(&q), "q^2_{,1}");
    }

    #[test]
    fn form_roundtrip() {
        let c = Ctx::metric(2).unwrap();
        let s = JetScalar::sqrt_neg_det(c).unwrap();
        let w = &Form::monomial(s.clone(), &[Var::g(1, 2, MultiIndex::unit(1))], &[2]).unwrap()
            + &Form::monomial(JetScalar::int(c, -2), &[], &[1, 2]).unwrap();
        let text = form_string(&w, usize::MAX);
        assert_eq!(parse_form(c, &text).unwrap(), w, "{text}");
        assert_eq!(parse_form(c, "0").unwrap(), Form::zero(c));
    }

    #[test]
    fn parse_errors_carry_position() {
        let c = Ctx::metric(2).unwrap();
        match parse_scalar(c, "g_{11} +\n  g_{13}") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_scalar(c, "g_{11}/g_{22}").is_err());
        assert_eq!(
            parse_scalar(c, "(g_{11}*g_{22} - g_{12}^2)/det").unwrap(),
            JetScalar::one(c)
        );
    }
}
