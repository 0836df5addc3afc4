//! A small language for user-supplied vector fields and potentials.
//!
//! ```text
//! # comments run to the end of the line
//! vec r [x2, -x1]          # polynomial field, one component per direction
//! vec b [1/2*x1^2, (x1 - x2)*x3, 0]
//! formal w                 # independent symbols ∂_C w^a
//! ```
//!
//! Potentials for the mechanics schema are plain polynomials in `q^i`,
//! e.g. `1/2*q^1^2 + q^1*q^2^3`.

use crate::error::{Error, Result};
use crate::fields::SpacetimeField;
use crate::jetscalar::{Ctx, JetScalar};
use crate::poly::VarKind;
use crate::text::{Parser, RESERVED_LABELS};

/// A named field declaration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldDecl {
    pub name: String,
    pub field: SpacetimeField,
}

impl FieldDecl {
    pub fn is_formal(&self) -> bool {
        matches!(self.field, SpacetimeField::Formal(_))
    }
}

fn strip_comments(src: &str) -> String {
    src.lines()
        .map(|l| match l.find('#') {
            Some(i) => format!("{}{}", &l[..i], " ".repeat(l[i..].chars().count())),
            None => l.to_string(),
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn declaration(p: &mut Parser<'_>, ctx: Ctx) -> Result<FieldDecl> {
    p.skip_ws();
    let keyword = p.word();
    match keyword.as_str() {
        "vec" => {
            let name = p.word();
            if name.is_empty() {
                return Err(p.error("expected a field name"));
            }
            p.expect('[')?;
            let mut comps = Vec::new();
            loop {
                p.skip_ws();
                let c = p.expr()?;
                let only_x = c.vars().iter().all(|v| matches!(v.kind(), VarKind::X(_)));
                if !only_x || !c.s_part().is_zero() || c.det_power() > 0 {
                    return Err(p.error(format!("components must be polynomials in x1..x{}", ctx.n())));
                }
                comps.push(c.plain_part().clone());
                if !p.eat(',') {
                    break;
                }
            }
            p.expect(']')?;
            if comps.len() != ctx.n() {
                return Err(Error::Arity {
                    expected: ctx.n(),
                    found: comps.len(),
                });
            }
            let field = SpacetimeField::polynomial(ctx, comps)?;
            Ok(FieldDecl { name, field })
        }
        "formal" => {
            let name = p.word();
            let mut chars = name.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) if c.is_ascii_lowercase() && !RESERVED_LABELS.contains(&c) => Ok(FieldDecl {
                    field: SpacetimeField::formal(c)?,
                    name,
                }),
                _ => Err(p.error(format!(
                    "formal labels are single letters other than {}",
                    RESERVED_LABELS.iter().collect::<String>()
                ))),
            }
        }
        "" => Err(p.error("expected `vec` or `formal`")),
        other => Err(p.error(format!("unknown keyword `{other}`"))),
    }
}

/// Parses a single declaration.
pub fn parse_vector_field(ctx: Ctx, src: &str) -> Result<FieldDecl> {
    let mut all = parse_fields(ctx, src)?;
    match all.len() {
        1 => Ok(all.remove(0)),
        found => Err(Error::Arity { expected: 1, found }),
    }
}

/// Parses declarations separated by newlines or `;`. Names must be unique.
pub fn parse_fields(ctx: Ctx, src: &str) -> Result<Vec<FieldDecl>> {
    let clean = strip_comments(src);
    let mut p = Parser::new(ctx, &clean);
    p.bare_coordinates = true;
    let mut out: Vec<FieldDecl> = Vec::new();
    while !p.at_end() {
        let d = declaration(&mut p, ctx)?;
        if out.iter().any(|e| e.name == d.name) {
            return Err(p.error(format!("duplicate field `{}`", d.name)));
        }
        out.push(d);
        p.eat(';');
    }
    Ok(out)
}

/// Parses a potential `V(q)` for the mechanics schema with `fibre`
/// configuration coordinates.
pub fn parse_potential(fibre: usize, src: &str) -> Result<JetScalar> {
    let ctx = Ctx::mechanics(fibre)?;
    let clean = strip_comments(src);
    let mut p = Parser::new(ctx, &clean);
    let v = p.expr()?;
    if !p.at_end() {
        return Err(p.error("trailing input"));
    }
    if v.vars().iter().any(|u| !matches!(u.kind(), VarKind::Field(_, c) if c.order() == 0)) {
        return Err(Error::Schema("potential must be a polynomial in q"));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{Poly, Var};
    use crate::rational::Rational;

    #[test]
    fn examples() {
        let c = Ctx::metric(2).unwrap();
        let r = parse_vector_field(c, "vec v [x2, -x1]").unwrap();
        assert_eq!(r.name, "v");
        let expect = vec![Poly::var(Var::x(2)), Poly::var(Var::x(1)).neg()];
        assert_eq!(r.field, SpacetimeField::Polynomial(expect));
        let w = parse_vector_field(c, "formal w").unwrap();
        assert!(w.is_formal());
        assert_eq!(w.field, SpacetimeField::formal('w').unwrap());
        assert_eq!(
            parse_vector_field(c, "vec v [x1]"),
            Err(Error::Arity { expected: 2, found: 1 })
        );
    }

    #[test]
    fn programs_and_errors() {
        let c = Ctx::metric(3).unwrap();
        let src = "# affine\nvec b [1/2*x1^2, (x1 - x2)*x3, 0]; formal u\nvec t [1,0,0]";
        let all = parse_fields(c, src).unwrap();
        assert_eq!(all.len(), 3);
        let SpacetimeField::Polynomial(ps) = &all[0].field else { panic!() };
        assert_eq!(ps[0], Poly::var(Var::x(1)).pow(2).scale(&Rational::new(1, 2)));
        let err = |s: &str| parse_fields(c, s).unwrap_err();
        assert!(matches!(err("vec v [1.5, 0, 0]"), Error::Parse { line: 1, column: 8, .. }));
        assert!(matches!(err("formal\n  x"), Error::Parse { line: 2, .. }));
        assert!(matches!(err("vec v [x4, 0, 0]"), Error::Parse { .. }));
        assert!(matches!(err("vec v [g_{11}, 0, 0]"), Error::Parse { .. }));
        assert!(matches!(err("field v"), Error::Parse { .. }));
        assert!(matches!(err("formal v; formal v"), Error::Parse { .. }));
        assert!(matches!(err("vec v [x1, x2, x3"), Error::Parse { .. }));
    }

    #[test]
    fn potentials() {
        let v = parse_potential(2, "1/2*q^1^2 + q^1*q^2^3 # anharmonic").unwrap();
        assert_eq!(v.vars().len(), 2);
        assert!(parse_potential(1, "q^1_{,1}").is_err());
        assert!(parse_potential(1, "q^2").is_err());
    }
}
