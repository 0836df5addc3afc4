//! The verification suites behind the `varbic` subcommands.
//!
//! Every entry states an identity `lhs = rhs`, checks it on canonical
//! forms and independently evaluates both sides at seeded oracle points.
//! An entry passes only if the canonical sides agree and the oracle agrees
//! with that verdict.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;

use crate::dsl::{parse_fields, parse_potential, FieldDecl};
use crate::error::{Error, Result};
use crate::fields::{diffeo_xi, JetVectorField, SpacetimeField};
use crate::formalg::Form;
use crate::geometry::{index_tuples, FormFamily, Geometry, Variance};
use crate::gr::{build_gr_theory, euler_operator, GrTheory, LagrangianData};
use crate::jetscalar::{Ctx, JetScalar, DEFAULT_JET_CAP, DEFAULT_VSYM_CAP};
use crate::linfty::{bracket_expansion, ContractionCache, formal_fields, increasing_words, l_bracket, DisplayCheck, LabelSet, MomentumMap};
use crate::mech::MechContext;
use crate::modp;
use crate::oracle::{self, audit, point_seed, random, Evaluable, FormIdentity, JetPoint, SampleMode};
use crate::poly::{MultiIndex, Var};
use crate::rational::Rational;
use crate::report::{ConfigEcho, Entry, Printed, Report, Status, RESIDUAL_TERMS};
use crate::text::form_string;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Command {
    VerifyGr,
    /// Arities `1..=k`; `None` means `k = n`.
    VerifyLinfty { k: Option<usize> },
    /// The configuration space dimension is taken from `dim`.
    VerifyMech,
    VerifyCovariance,
    VerifyDivergence,
    OracleAudit,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::VerifyGr => "verify-gr",
            Command::VerifyLinfty { .. } => "verify-linfty",
            Command::VerifyMech => "verify-mech",
            Command::VerifyCovariance => "verify-covariance",
            Command::VerifyDivergence => "verify-divergence",
            Command::OracleAudit => "oracle-audit",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub dim: usize,
    pub jet_cap: usize,
    pub vsym_cap: usize,
    pub points: usize,
    pub seed: u64,
    /// Worker threads; `None` uses all cores.
    pub jobs: Option<usize>,
    pub allow_large: bool,
    /// DSL source: field declarations, or a potential for `verify-mech`.
    pub field: Option<String>,
    pub timings: bool,
    /// Keep only entries whose id starts with one of these prefixes; empty
    /// keeps everything.
    pub only: Vec<String>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            dim: 2,
            jet_cap: DEFAULT_JET_CAP,
            vsym_cap: DEFAULT_VSYM_CAP,
            points: oracle::DEFAULT_POINTS,
            seed: 0,
            jobs: None,
            allow_large: false,
            field: None,
            timings: true,
            only: Vec::new(),
        }
    }

    pub fn with_dim(mut self, n: usize) -> Self {
        self.dim = n;
        self
    }

    fn k(&self) -> Option<usize> {
        match self.command {
            Command::VerifyLinfty { k } => Some(k.unwrap_or(self.dim)),
            _ => None,
        }
    }

    fn ctx(&self) -> Result<Ctx> {
        Ctx::metric_with_caps(self.dim, self.jet_cap, self.vsym_cap)
    }

    /// Checks everything that can be checked before any computation.
    pub fn validate(&self) -> Result<Prepared> {
        if !(1..=4).contains(&self.dim) {
            return Err(Error::InvalidDimension(self.dim));
        }
        if self.dim == 4 && !self.allow_large && self.command != Command::VerifyMech {
            return Err(Error::Config("dimension 4 suites are long-running; pass --allow-large".into()));
        }
        if self.points == 0 {
            return Err(Error::Config("--points must be positive".into()));
        }
        if self.jobs == Some(0) {
            return Err(Error::Config("--jobs must be positive".into()));
        }
        if let Some(k) = self.k() {
            if !(1..=self.dim).contains(&k) {
                return Err(Error::Config(format!("--k must lie in 1..={}", self.dim)));
            }
        }
        let ctx = self.ctx()?;
        let mut prepared = Prepared {
            ctx,
            fields: Vec::new(),
            potential: None,
        };
        if self.command == Command::VerifyMech {
            let v = match &self.field {
                Some(src) => parse_potential(self.dim, src)?,
                None => default_potential(self.dim)?,
            };
            prepared.potential = Some(v);
        } else if let Some(src) = &self.field {
            prepared.fields = parse_fields(ctx, src)?;
            if prepared.fields.is_empty() {
                return Err(Error::Config("--field declares no fields".into()));
            }
        }
        Ok(prepared)
    }

    fn echo(&self, prepared: &Prepared) -> ConfigEcho {
        let mut fields: Vec<String> = prepared
            .fields
            .iter()
            .map(|d| format!("{} = {}", d.name, d.field))
            .collect();
        if let Some(v) = &prepared.potential {
            fields.push(format!("V = {v}"));
        }
        ConfigEcho {
            command: self.command.name().to_string(),
            dim: self.dim,
            jet_cap: self.jet_cap,
            vsym_cap: self.vsym_cap,
            points: self.points,
            seed: self.seed,
            k: self.k(),
            fields,
        }
    }
}

/// Parsed inputs of a validated configuration.
pub struct Prepared {
    ctx: Ctx,
    fields: Vec<FieldDecl>,
    potential: Option<JetScalar>,
}

/// `½ Σ_i (q^i)² + Σ_i (q^i)³/3 + q^1 q^2` (the coupling only for two or
/// more coordinates).
fn default_potential(fibre: usize) -> Result<JetScalar> {
    let mut src: Vec<String> = (1..=fibre).map(|i| format!("1/2*q^{i}^2 + 1/3*q^{i}^3")).collect();
    if fibre >= 2 {
        src.push("q^1*q^2".into());
    }
    parse_potential(fibre, &src.join(" + "))
}

#[derive(Copy, Clone)]
struct Env {
    points: usize,
    seed: u64,
}

#[derive(Default)]
struct Finding {
    pass: bool,
    residual: Option<String>,
    oracle: Option<oracle::Audit>,
    printed: Option<Printed>,
    note: Option<String>,
}

type Labelled = Vec<(String, FormIdentity)>;

fn labelled(label: &str, r: &Form) -> String {
    if label.is_empty() {
        form_string(r, RESIDUAL_TERMS)
    } else {
        format!("[{label}] {}", form_string(r, RESIDUAL_TERMS))
    }
}

impl Finding {
    fn identities(items: Labelled, env: &Env) -> Result<Finding> {
        let mut residual = None;
        let mut symbolic = true;
        for (label, id) in &items {
            if !id.symbolic_zero() {
                symbolic = false;
                if residual.is_none() {
                    residual = Some(labelled(label, &id.residual()?));
                }
            }
        }
        let ids: Vec<FormIdentity> = items.into_iter().map(|(_, i)| i).collect();
        let oracle = if ids.is_empty() {
            None
        } else {
            Some(audit(ids.as_slice(), env.points, env.seed)?)
        };
        Ok(Finding {
            pass: symbolic && oracle.as_ref().is_none_or(|a| a.agrees()),
            residual,
            oracle,
            ..Finding::default()
        })
    }

    fn predicate(pass: bool, note: impl Into<String>) -> Finding {
        Finding {
            pass,
            note: Some(note.into()),
            ..Finding::default()
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    fn require(mut self, ok: bool, why: &str) -> Self {
        if !ok {
            self.pass = false;
            self.note = Some(why.to_string());
        }
        self
    }

    /// A derived expansion (must vanish) with the printed display reported
    /// alongside.
    fn display(d: DisplayCheck, env: &Env) -> Result<Finding> {
        let printed_residual = (!d.printed.is_zero()).then(|| {
            let degrees: Vec<String> = d.printed.bidegrees().iter().map(|(p, q)| format!("({p},{q})")).collect();
            format!("bidegree {}: {}", degrees.join(" "), form_string(&d.printed, RESIDUAL_TERMS))
        });
        let mut f = Finding::identities(vec![(String::new(), FormIdentity::zero(d.derived))], env)?;
        f.printed = Some(Printed {
            agrees: printed_residual.is_none(),
            residual: printed_residual,
        });
        Ok(f)
    }
}

type CheckFn = Box<dyn Fn(&Env) -> Result<Finding> + Send + Sync>;

struct Check {
    id: String,
    identity: String,
    run: CheckFn,
}

fn check(
    id: impl Into<String>,
    identity: impl Into<String>,
    run: impl Fn(&Env) -> Result<Finding> + Send + Sync + 'static,
) -> Check {
    Check {
        id: id.into(),
        identity: identity.into(),
        run: Box::new(run),
    }
}

fn entry_seed(seed: u64, id: &str) -> u64 {
    id.bytes().fold(seed, |h, b| modp::hash_residue(h, b as u64))
}

fn execute(c: &Check, base: Env, timings: bool) -> Entry {
    let env = Env {
        points: base.points,
        seed: entry_seed(base.seed, &c.id),
    };
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(|| (c.run)(&env)));
    let wall_ms = timings.then(|| start.elapsed().as_millis() as u64);
    let finding = match outcome {
        Ok(Ok(f)) => f,
        Ok(Err(e)) => Finding::predicate(false, format!("error: {e}")),
        Err(_) => Finding::predicate(false, "internal error: check panicked"),
    };
    Entry {
        id: c.id.clone(),
        identity: c.identity.clone(),
        status: if finding.pass { Status::Pass } else { Status::Fail },
        wall_ms,
        residual: finding.residual,
        oracle: finding.oracle,
        printed: finding.printed,
        note: finding.note,
    }
}

/// Runs the configured suite. Errors are configuration errors, reported
/// before any computation; engine failures become failed entries.
pub fn run(cfg: &RunConfig) -> Result<Report> {
    let prepared = cfg.validate()?;
    let echo = cfg.echo(&prepared);
    let start = Instant::now();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cfg.jobs {
        builder = builder.num_threads(j);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    let base = Env {
        points: cfg.points,
        seed: cfg.seed,
    };
    let built = catch_unwind(AssertUnwindSafe(|| build_checks(cfg, &prepared)))
        .unwrap_or_else(|_| Err(Error::SelfCheck("theory construction panicked".into())));
    let entries = pool.install(|| match built {
        Ok(mut checks) => {
            if !cfg.only.is_empty() {
                checks.retain(|c| cfg.only.iter().any(|p| c.id.starts_with(p.as_str())));
            }
            checks.par_iter().map(|c| execute(c, base, cfg.timings)).collect()
        }
        Err(e) => vec![Entry {
            id: "setup".into(),
            identity: "theory construction".into(),
            status: Status::Fail,
            wall_ms: None,
            residual: None,
            oracle: None,
            printed: None,
            note: Some(format!("error: {e}")),
        }],
    });
    let wall = cfg.timings.then(|| start.elapsed().as_millis() as u64);
    Ok(Report::new(echo, entries, wall))
}

fn build_checks(cfg: &RunConfig, prepared: &Prepared) -> Result<Vec<Check>> {
    let ctx = prepared.ctx;
    let fields = if prepared.fields.is_empty() {
        vec![FieldDecl {
            name: "v".into(),
            field: SpacetimeField::formal('v')?,
        }]
    } else {
        prepared.fields.clone()
    };
    match cfg.command {
        Command::VerifyGr => gr_checks(ctx, cfg.seed, &fields),
        Command::VerifyLinfty { .. } => linfty_checks(ctx, cfg.k().expect("linfty"), &prepared.fields),
        Command::VerifyMech => mech_checks(cfg.dim, prepared.potential.clone().expect("validated")),
        Command::VerifyCovariance => covariance_checks(ctx, &fields),
        Command::VerifyDivergence => Ok(divergence_checks(ctx, cfg.seed)),
        Command::OracleAudit => Ok(oracle_checks(ctx, cfg.seed)),
    }
}

fn warm_theory(ctx: Ctx) -> Result<Arc<GrTheory>> {
    let theory = build_gr_theory(ctx)?;
    theory.geometry().warm();
    theory.data().omega();
    Ok(Arc::new(theory))
}

fn one(label: &str, lhs: Form, rhs: Form) -> Labelled {
    vec![(label.to_string(), FormIdentity::new(lhs, rhs))]
}

fn scalar_identity(label: String, lhs: JetScalar, rhs: JetScalar) -> (String, FormIdentity) {
    (label, FormIdentity::new(Form::scalar(lhs), Form::scalar(rhs)))
}

fn family_identities(label: &str, lhs: &FormFamily, rhs: &FormFamily) -> Labelled {
    lhs.entries()
        .map(|(t, _)| t)
        .zip(FormIdentity::families(lhs, rhs))
        .map(|(t, id)| (format!("{label}{t:?}"), id))
        .collect()
}

// ---------------------------------------------------------------- gr

const BICOMPLEX_FORMS: usize = 200;
const EXACT_FORMS: usize = 20;

fn random_forms(ctx: Ctx, seed: u64, count: usize) -> Result<Vec<Form>> {
    let mut rng = random::rng(seed);
    let n = ctx.n();
    (0..count)
        .map(|i| {
            let p = i % 3;
            let q = (i / 3) % (n + 1);
            random::form(ctx, &mut rng, p, q, 2, 1)
        })
        .collect()
}

fn bicomplex_checks(ctx: Ctx, seed: u64) -> Vec<Check> {
    let s = entry_seed(seed, "bicomplex");
    vec![
        check("bicomplex.delta_squared", "δδα = 0 on 200 random forms", move |env| {
            let items = random_forms(ctx, s, BICOMPLEX_FORMS)?
                .iter()
                .enumerate()
                .map(|(i, a)| (format!("α{i}"), FormIdentity::zero(a.vertical_differential().vertical_differential())))
                .collect();
            Ok(Finding::identities(items, env)?.with_note(format!("{BICOMPLEX_FORMS} random forms")))
        }),
        check("bicomplex.d_squared", "ddα = 0 on 200 random forms", move |env| {
            let items = random_forms(ctx, s, BICOMPLEX_FORMS)?
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    let dd = a.horizontal_differential()?.horizontal_differential()?;
                    Ok((format!("α{i}"), FormIdentity::zero(dd)))
                })
                .collect::<Result<_>>()?;
            Ok(Finding::identities(items, env)?.with_note(format!("{BICOMPLEX_FORMS} random forms")))
        }),
        check("bicomplex.anticommute", "δdα = −dδα on 200 random forms", move |env| {
            let items = random_forms(ctx, s, BICOMPLEX_FORMS)?
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    let lhs = a.horizontal_differential()?.vertical_differential();
                    let rhs = -a.vertical_differential().horizontal_differential()?;
                    Ok((format!("α{i}"), FormIdentity::new(lhs, rhs)))
                })
                .collect::<Result<_>>()?;
            Ok(Finding::identities(items, env)?.with_note(format!("{BICOMPLEX_FORMS} random forms")))
        }),
    ]
}

fn gr_checks(ctx: Ctx, seed: u64, fields: &[FieldDecl]) -> Result<Vec<Check>> {
    let theory = warm_theory(ctx)?;
    let n = ctx.n();
    let mut out = bicomplex_checks(ctx, seed);
    let t = theory.clone();
    out.push(check("gr.split", "EL − δL = dγ", move |env| {
        let d = t.data();
        let rhs = d.lagrangian().vertical_differential().try_add(&d.boundary().horizontal_differential()?)?;
        Finding::identities(one("", d.euler_lagrange().clone(), rhs), env)
    }));
    let t = theory.clone();
    out.push(check("gr.omega", "𝐝λ = ω and 𝐝ω = 0", move |env| {
        let d = t.data();
        let mut items = one("𝐝λ", d.lepage().total_differential()?, d.omega().clone());
        items.extend(one("𝐝ω", d.omega().total_differential()?, Form::zero(ctx)));
        Finding::identities(items, env)
    }));
    let t = theory.clone();
    out.push(check("gr.euler_operator", "P(δL) = EL", move |env| {
        let d = t.data();
        let p = euler_operator(&d.lagrangian().vertical_differential())?;
        Finding::identities(one("", p, d.euler_lagrange().clone()), env)
    }));
    let s = entry_seed(seed, "exact");
    out.push(check("gr.euler_operator.exact", "P(dβ) = 0 for 20 random (1,n−1)-forms β", move |env| {
        let mut rng = random::rng(s);
        let mut items = Vec::new();
        let mut tries = 0;
        while items.len() < EXACT_FORMS && tries < 10 * EXACT_FORMS {
            tries += 1;
            let beta = random::form(ctx, &mut rng, 1, n - 1, 2, 1)?;
            let d_beta = beta.horizontal_differential()?;
            if d_beta.is_zero() {
                continue;
            }
            items.push((format!("β{}", items.len()), FormIdentity::zero(euler_operator(&d_beta)?)));
        }
        let count = items.len();
        Ok(Finding::identities(items, env)?
            .with_note(format!("{count} nonzero exact forms"))
            .require(count == EXACT_FORMS, "too few nonzero exact forms"))
    }));
    let t = theory.clone();
    out.push(check("gr.einstein_divergence", "∇_a G^{ab} = 0", move |env| {
        let items = t
            .einstein_divergence()?
            .into_iter()
            .enumerate()
            .map(|(b, s)| scalar_identity(format!("b={}", b + 1), s, JetScalar::zero(ctx)))
            .collect();
        Finding::identities(items, env)
    }));
    if n == 2 {
        let t = theory.clone();
        out.push(check("gr.einstein_vanishes", "G^{ab} = 0 at n = 2, i.e. R^{ab} = ½ R g^{ab}", move |env| {
            let geo = t.geometry();
            let half_r = geo.scalar_curvature().scale(&Rational::new(1, 2));
            let items = index_tuples(2, 2)
                .into_iter()
                .map(|ab| {
                    let (a, b) = (ab[0], ab[1]);
                    scalar_identity(format!("{a}{b}"), geo.ricci_upper(a, b), &half_r * geo.ginv(a, b))
                })
                .collect();
            Ok(Finding::identities(items, env)?
                .require(!geo.scalar_curvature().is_zero(), "scalar curvature vanished identically"))
        }));
    }
    for decl in fields {
        let name = &decl.name;
        let v = Arc::new(decl.field.clone());
        let (t, f) = (theory.clone(), v.clone());
        out.push(check(format!("gr.lepage.L[{name}]"), "𝓛_{ρ(v)} L = 0, i.e. 𝓛_{ξ_v} L = −𝓛_{v̂} L", move |env| {
            let (xi, lift) = split_action(ctx, &f)?;
            let l = t.data().lagrangian();
            Finding::identities(one("", xi.lie_derivative(l)?, -lift.lie_derivative(l)?), env)
        }));
        let (t, f) = (theory.clone(), v.clone());
        out.push(check(format!("gr.lepage.gamma[{name}]"), "𝓛_{ρ(v)} γ = 0, i.e. 𝓛_{ξ_v} γ = −𝓛_{v̂} γ", move |env| {
            let (xi, lift) = split_action(ctx, &f)?;
            let g = t.data().boundary();
            Finding::identities(one("", xi.lie_derivative(g)?, -lift.lie_derivative(g)?), env)
        }));
        let (t, f) = (theory.clone(), v.clone());
        out.push(check(format!("gr.noether.conservation[{name}]"), "d j_v = ι_{ξ_v} EL", move |env| {
            let (xi, _) = split_action(ctx, &f)?;
            let j = t.data().noether_current(&f)?;
            Finding::identities(one("", j.horizontal_differential()?, t.data().euler_lagrange().interior(&xi)?), env)
        }));
        let (t, f) = (theory.clone(), v.clone());
        out.push(check(
            format!("gr.noether.formula[{name}]"),
            "j_v = 2 G^{ab} v_a ι_{∂̂_b} vol + d(½ (∇^a v^b − ∇^b v^a) ι_{∂̂_a} ι_{∂̂_b} vol)",
            move |env| {
                let j = t.data().noether_current(&f)?;
                Finding::identities(one("", j, t.noether_current_formula(&f)?), env)
            },
        ));
        let (t, f) = (theory.clone(), v.clone());
        out.push(check(format!("gr.killing[{name}]"), "ι_{ξ_v} δg_{ab} = −∇_a v_b − ∇_b v_a", move |env| {
            let r = t.killing_residual(&f)?;
            let zero = r.map(|_, _| Ok(Form::zero(ctx)))?;
            Finding::identities(family_identities("", &r, &zero), env)
        }));
        let (t, f) = (theory.clone(), v.clone());
        out.push(check(
            format!("gr.boundary_contraction[{name}]"),
            "ι_{ξ_v} γ = −2 Ric^{ab} v_a ι_{∂̂_b} vol − d(½ F^{ab} ι_{∂̂_a} ι_{∂̂_b} vol)",
            move |env| Finding::identities(one("", t.boundary_contraction_residual(&f)?, Form::zero(ctx)), env),
        ));
    }
    Ok(out)
}

fn split_action(ctx: Ctx, v: &SpacetimeField) -> Result<(JetVectorField, JetVectorField)> {
    Ok((
        JetVectorField::prolong(diffeo_xi(ctx, v)?),
        JetVectorField::cartan_lift(ctx, v)?,
    ))
}

// ------------------------------------------------------------ linfty

/// The theory with one contraction cache shared by every check.
struct Momenta {
    theory: Arc<GrTheory>,
    cache: Arc<ContractionCache>,
}

impl Momenta {
    fn data(&self) -> &LagrangianData {
        self.theory.data()
    }

    fn map(&self) -> MomentumMap<'_> {
        MomentumMap::with_cache(self.theory.data(), self.cache.clone())
    }
}

fn morphism_check(id: String, what: &'static str, theory: Arc<Momenta>, labels: Arc<LabelSet>, k: usize) -> Check {
    let identity = format!("𝐝μ_{k} + μ_{}δ = ν on {what}", k - 1);
    check(id, identity, move |env| {
        let mm = theory.map();
        let words = increasing_words(labels.len(), k);
        let items = words
            .par_iter()
            .map(|w| {
                let (lhs, rhs) = mm.morphism_sides_word(&labels, w)?;
                Ok((labels.word_string(w), FormIdentity::new(lhs, rhs)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Finding::identities(items, env)?.with_note(format!("{} words", words.len())))
    })
}

fn linfty_checks(ctx: Ctx, kmax: usize, user: &[FieldDecl]) -> Result<Vec<Check>> {
    let theory = Arc::new(Momenta {
        theory: warm_theory(ctx)?,
        cache: Arc::default(),
    });
    let coords = Arc::new(LabelSet::coordinates(ctx)?);
    let affine = Arc::new(LabelSet::affine(ctx)?);
    let user_labels = if user.is_empty() {
        None
    } else {
        let entries = user.iter().map(|d| (d.name.clone(), d.field.clone())).collect();
        Some(Arc::new(LabelSet::register(ctx, entries)?))
    };
    let formal = Arc::new(formal_fields("vwu")?);
    let mut out = Vec::new();
    for k in 1..=kmax {
        out.push(morphism_check(format!("linfty.k{k}.coordinates"), "coordinate fields", theory.clone(), coords.clone(), k));
        out.push(morphism_check(format!("linfty.k{k}.affine"), "the affine label set", theory.clone(), affine.clone(), k));
        if let Some(labels) = &user_labels {
            if labels.len() >= k {
                out.push(morphism_check(format!("linfty.k{k}.user"), "the --field label set", theory.clone(), labels.clone(), k));
            }
        }
        if k > 3 {
            continue;
        }
        let args = Arc::new(formal[..k].to_vec());
        let (t, a) = (theory.clone(), args.clone());
        out.push(check(format!("linfty.k{k}.formal"), format!("𝐝μ_{k} + μ_{}δ = ν on formal fields", k - 1), move |env| {
            let (lhs, rhs) = t.map().morphism_sides(&a)?;
            Finding::identities(one("", lhs, rhs), env)
        }));
        let (t, a) = (theory.clone(), args.clone());
        out.push(check(
            format!("linfty.k{k}.mu_split"),
            format!("μ_{k} via Noether currents, with coefficient {} on ι…ι L", 1 - k as i64),
            move |env| {
                let mm = t.map();
                Finding::identities(one("", mm.mu_split(&a)?, mm.mu(&a)?), env)
            },
        ));
        if k < 2 {
            continue;
        }
        let (t, a) = (theory.clone(), args.clone());
        out.push(check(
            format!("linfty.k{k}.nu_bracket"),
            format!("ν(v_1 ∧ … ∧ v_{k}) = −l_{k}(μ_1(v_1), …, μ_1(v_{k}))"),
            move |env| {
                let mm = t.map();
                let pairs = a.iter().map(|v| mm.pair(v)).collect::<Result<Vec<_>>>()?;
                let refs: Vec<_> = pairs.iter().collect();
                let l = l_bracket(t.data().omega(), &refs)?;
                Finding::identities(one("", mm.nu(&a)?, -l), env)
            },
        ));
        let (t, a) = (theory.clone(), args.clone());
        out.push(check(
            format!("linfty.k{k}.bracket_expansion"),
            format!("expansion of l_{k} in EL, δγ and the components X∥, X⊥"),
            move |env| {
                let mm = t.map();
                let pairs = a.iter().map(|v| mm.pair(v)).collect::<Result<Vec<_>>>()?;
                let refs: Vec<_> = pairs.iter().collect();
                let fields: Vec<JetVectorField> = pairs.iter().map(|p| p.field().clone()).collect();
                let direct = l_bracket(t.data().omega(), &refs)?;
                Finding::identities(one("", bracket_expansion(t.data(), &fields)?, direct), env)
            },
        ));
    }
    if kmax >= 2 {
        let (t, labels) = (theory.clone(), affine.clone());
        out.push(check(
            "linfty.mu_bracket.affine",
            "l_2(μ_1(v), μ_1(w)) = μ_1([v,w]) − 𝐝μ_2(v,w) on the affine label set",
            move |env| {
                let words = increasing_words(labels.len(), 2);
                let items = words
                    .par_iter()
                    .map(|w| {
                        let (v, u) = (labels.field(w[0]), labels.field(w[1]));
                        Ok((labels.word_string(w), mu_bracket_identity(&t, v, u)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Finding::identities(items, env)
            },
        ));
        let (t, a) = (theory.clone(), formal.clone());
        out.push(check(
            "linfty.mu_bracket.formal",
            "l_2(μ_1(v), μ_1(w)) = μ_1([v,w]) − 𝐝μ_2(v,w) on formal fields",
            move |env| Finding::identities(vec![("v∧w".into(), mu_bracket_identity(&t, &a[0], &a[1])?)], env),
        ));
        type Display = fn(&MomentumMap<'_>, &SpacetimeField, &SpacetimeField) -> Result<DisplayCheck>;
        let displays: [(&str, &str, Display); 3] = [
            (
                "linfty.display.two_bracket",
                "five-term expansion of l_2 on hamiltonian pairs",
                |m, v, w| m.two_bracket_display(v, w),
            ),
            (
                "linfty.display.mu2",
                "μ_2(v,w) = −(ι_{v̂} j_w − ι_{ŵ} j_v + ι_{v̂}ι_{ŵ} L) + ι_{v̂}ι_{ŵ} γ",
                |m, v, w| m.mu2_display(v, w),
            ),
            (
                "linfty.display.current_bracket",
                "μ_1([v,w]) − 𝐝μ_2(v,w) in terms of Noether currents",
                |m, v, w| m.current_bracket_display(v, w),
            ),
        ];
        for (id, identity, f) in displays {
            let (t, a) = (theory.clone(), formal.clone());
            out.push(check(id, identity, move |env| {
                let mm = t.map();
                Finding::display(f(&mm, &a[0], &a[1])?, env)
            }));
        }
    }
    if kmax >= 3 {
        let (t, labels) = (theory.clone(), affine.clone());
        out.push(check(
            "linfty.l3.affine",
            "l_3(μ_1(a_1), μ_1(a_2), μ_1(a_3)) = μ_2(Σ_cyc [a_1,a_2] ∧ a_3) − 𝐝μ_3 on the affine label set",
            move |env| {
                let words = increasing_words(labels.len(), 3);
                let items = words
                    .par_iter()
                    .map(|w| {
                        let a = [labels.field(w[0]).clone(), labels.field(w[1]).clone(), labels.field(w[2]).clone()];
                        let r = t.map().l3_residual(&a)?;
                        Ok((labels.word_string(w), FormIdentity::zero(r)))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Finding::identities(items, env)
            },
        ));
        let (t, a) = (theory.clone(), formal.clone());
        out.push(check(
            "linfty.l3.formal",
            "l_3(μ_1(v), μ_1(w), μ_1(u)) = μ_2(Σ_cyc [v,w] ∧ u) − 𝐝μ_3 on formal fields",
            move |env| {
                let r = t.map().l3_residual(&[a[0].clone(), a[1].clone(), a[2].clone()])?;
                Finding::identities(one("", r, Form::zero(ctx)), env)
            },
        ));
    }
    Ok(out)
}

fn mu_bracket_identity(t: &Momenta, v: &SpacetimeField, w: &SpacetimeField) -> Result<FormIdentity> {
    let mm = t.map();
    let n = t.data().ctx().n();
    let lhs = mm.bracket(&[v.clone(), w.clone()])?;
    let rhs = mm
        .mu(&[v.bracket(w, n)?])?
        .try_sub(&mm.mu(&[v.clone(), w.clone()])?.total_differential()?)?;
    Ok(FormIdentity::new(lhs, rhs))
}

// -------------------------------------------------------------- mech

fn mech_checks(fibre: usize, potential: JetScalar) -> Result<Vec<Check>> {
    let m = Arc::new(MechContext::new(fibre, potential)?);
    let data = Arc::new(m.build()?);
    let ctx = m.ctx();
    let mut out = Vec::new();
    let (mm, d) = (m.clone(), data.clone());
    out.push(check("mech.euler_lagrange", "P(δL) = −(q̈^i + ∂V/∂q^i) δq^i ∧ dt", move |env| {
        let p = euler_operator(&d.lagrangian().vertical_differential())?;
        Finding::identities(one("", p, mm.printed_euler_lagrange()?), env)
    }));
    let d = data.clone();
    out.push(check("mech.split", "EL − δL = dγ with γ = q̇^i δq^i", move |env| {
        let rhs = d.lagrangian().vertical_differential().try_add(&d.boundary().horizontal_differential()?)?;
        Finding::identities(one("", d.euler_lagrange().clone(), rhs), env)
    }));
    let (mm, d) = (m.clone(), data.clone());
    out.push(check("mech.omega", "ω = EL + δq̇^i ∧ δq^i", move |env| {
        Finding::identities(one("", d.omega().clone(), mm.printed_omega()?), env)
    }));
    let mm = m.clone();
    out.push(check("mech.time_translation", "ρ(∂_t) = ∂/∂t on t and q^i_{,C}, |C| ≤ 3", move |env| {
        let items = mm
            .action_on_coordinates(3)?
            .into_iter()
            .map(|(u, val)| {
                let expect = JetScalar::int(ctx, (u == Var::x(1)) as i64);
                scalar_identity(crate::text::var_string(u), val, expect)
            })
            .collect();
        Finding::identities(items, env)
    }));
    let (mm, d) = (m.clone(), data.clone());
    out.push(check("mech.lepage", "𝓛_{ρ(∂_t)} (L + γ) = 0", move |env| {
        let (xi, lift) = split_action(ctx, &mm.time_translation())?;
        let lambda = d.lepage();
        Finding::identities(one("", xi.lie_derivative(&lambda)?, -lift.lie_derivative(&lambda)?), env)
    }));
    let (mm, d) = (m.clone(), data.clone());
    out.push(check("mech.lift_on_boundary", "ι_{∂̂_t} γ = 0", move |env| {
        let lift = JetVectorField::cartan_lift(ctx, &mm.time_translation())?;
        Finding::identities(one("", d.boundary().interior(&lift)?, Form::zero(ctx)), env)
    }));
    let (mm, d) = (m.clone(), data.clone());
    out.push(check("mech.energy", "j_{∂_t} = ½ q̇^i q̇^i + V(q)", move |env| {
        let j = d.noether_current(&mm.time_translation())?;
        Finding::identities(one("", j, Form::scalar(mm.energy())), env)
    }));
    let (mm, d) = (m.clone(), data.clone());
    out.push(check("mech.momentum", "μ_1(∂_t) = −j_{∂_t}", move |env| {
        let rho = crate::fields::diffeo_action(ctx, &mm.time_translation())?;
        let mu = d.momentum(std::slice::from_ref(&rho))?;
        Finding::identities(one("", mu, -Form::scalar(mm.energy())), env)
    }));
    let (mm, d) = (m.clone(), data.clone());
    out.push(check("mech.noether", "d j_{∂_t} = ι_{ξ} EL", move |env| {
        let (xi, _) = split_action(ctx, &mm.time_translation())?;
        let dj = Form::scalar(mm.energy()).horizontal_differential()?;
        Finding::identities(one("", dj, d.euler_lagrange().interior(&xi)?), env)
    }));
    Ok(out)
}

// -------------------------------------------------------- covariance

fn covariance_identities(geo: &Geometry, chi: &FormFamily, v: &SpacetimeField, label: &str) -> Result<Labelled> {
    let (lie, prescribed) = geo.covariance_sides(chi, v)?;
    Ok(family_identities(label, &lie, &prescribed))
}

/// `χ_b = v^a δg_{ab} + v_b g^{de} δg_{de}`, a covariant family built
/// from `v`.
fn vertical_covector_family(geo: &Geometry, v: &SpacetimeField) -> Result<FormFamily> {
    let ctx = geo.ctx();
    let n = ctx.n();
    let mut trace = Vec::new();
    for d in 1..=n {
        for e in 1..=n {
            trace.push(Form::delta_g(ctx, d, e, MultiIndex::ZERO)?.mul_scalar(geo.ginv(d, e)));
        }
    }
    let trace = Form::sum(ctx, &trace)?;
    FormFamily::new(ctx, vec![Variance::Covariant], |t| {
        let mut parts = Vec::new();
        for a in 1..=n {
            let va = v.component(ctx, a)?;
            parts.push(Form::delta_g(ctx, a, t[0], MultiIndex::ZERO)?.mul_scalar(&va));
            parts.push(trace.mul_scalar(&(&va * &geo.g(a, t[0]))));
        }
        Form::sum(ctx, &parts)
    })
}

fn covariance_checks(ctx: Ctx, fields: &[FieldDecl]) -> Result<Vec<Check>> {
    let theory = warm_theory(ctx)?;
    let n = ctx.n();
    let mut out = Vec::new();
    for decl in fields {
        let name = &decl.name;
        let v = Arc::new(decl.field.clone());
        type Family = fn(&Geometry) -> Result<FormFamily>;
        let simple: [(&str, &str, Family); 4] = [
            ("metric", "g_{ab} is covariant", |g| g.metric_family()),
            ("delta_metric", "δg_{ab} is covariant", |g| g.delta_metric_family()),
            ("inverse_metric", "g^{ab} is contravariant", |g| g.inverse_metric_family()),
            ("volume", "vol is invariant: 𝓛_{ρ(v)} vol = 0", |g| {
                FormFamily::new(g.ctx(), vec![], |_| Ok(g.vol()))
            }),
        ];
        for (key, identity, fam) in simple {
            let (t, f) = (theory.clone(), v.clone());
            out.push(check(format!("cov.{key}[{name}]"), identity, move |env| {
                let geo = t.geometry();
                Finding::identities(covariance_identities(geo, &fam(geo)?, &f, "")?, env)
            }));
        }
        let (t, f) = (theory.clone(), v.clone());
        out.push(check(
            format!("cov.christoffel[{name}]"),
            "Γ^a_{bc} is not covariant: the defect is exactly −∂_b ∂_c v^a",
            move |env| {
                let geo = t.geometry();
                let residual = geo.covariance_residual(&geo.christoffel_family()?, &f)?;
                let expected = FormFamily::scalars(ctx, residual.signature().to_vec(), |t| {
                    Ok(-f.derivative(ctx, t[0], MultiIndex::from_indices(&t[1..]))?)
                })?;
                Ok(Finding::identities(family_identities("", &residual, &expected), env)?
                    .require(!expected.is_zero() || !matches!(*f, SpacetimeField::Formal(_)), "defect vanished"))
            },
        ));
        let (t, f) = (theory.clone(), v.clone());
        out.push(check(
            format!("cov.nabla[{name}]"),
            "χ_b = v^a δg_{ab} + v_b g^{de} δg_{de} and ∇_c χ_b are covariant",
            move |env| {
                let geo = t.geometry();
                let chi = vertical_covector_family(geo, &f)?;
                let mut items = covariance_identities(geo, &chi, &f, "χ")?;
                items.extend(covariance_identities(geo, &geo.covariant_derivative(&chi)?, &f, "∇χ")?);
                Finding::identities(items, env)
            },
        ));
        let (t, f) = (theory.clone(), v.clone());
        out.push(check(
            format!("cov.boundary_families[{name}]"),
            "g^{ab}, δg_{ab}, ∇_c δg_{ab}, ι_{∂̂_d} vol, vol and γ transform as tensors",
            move |env| {
                let geo = t.geometry();
                let mut items = Vec::new();
                for (label, fam) in t.boundary_families()? {
                    items.extend(covariance_identities(geo, &fam, &f, label)?);
                }
                Finding::identities(items, env)
            },
        ));
    }
    let t = theory.clone();
    out.push(check(
        "cov.nabla_commutator",
        "∇_a ∇_b χ_c − ∇_b ∇_a χ_c = Riem_{abc}{}^d χ_d for χ_c = g_{c1,2} + g_{cc}",
        move |env| {
            let geo = t.geometry();
            let chi = FormFamily::scalars(ctx, vec![Variance::Covariant], |t| {
                Ok(&JetScalar::g(ctx, t[0], 1, MultiIndex::unit(2.min(n)))? + &geo.g(t[0], t[0]))
            })?;
            let nn = geo.covariant_derivative(&geo.covariant_derivative(&chi)?)?;
            let mut items = Vec::new();
            for abc in index_tuples(n, 3) {
                let (a, b, c) = (abc[0], abc[1], abc[2]);
                let lhs = nn.get(&[a, b, c]).try_sub(nn.get(&[b, a, c]))?;
                let rhs = (1..=n).map(|d| chi.get(&[d]).mul_scalar(geo.riemann(a, b, c, d))).collect::<Vec<_>>();
                items.push((format!("{a}{b}{c}"), FormIdentity::new(lhs, Form::sum(ctx, &rhs)?)));
            }
            Finding::identities(items, env)
        },
    ));
    Ok(out)
}

// -------------------------------------------------------- divergence

const DIVERGENCE_FAMILIES: usize = 20;

fn divergence_checks(ctx: Ctx, seed: u64) -> Vec<Check> {
    let s1 = entry_seed(seed, "div1");
    let s2 = entry_seed(seed, "div2");
    vec![
        check(
            "div.first",
            "∇_a χ^a ∧ vol = (−1)^p d(χ^a ∧ ι_{∂̂_a} vol) for 20 random (p,0) families",
            move |env| {
                let geo = Geometry::of(ctx)?;
                geo.warm();
                let mut rng = random::rng(s1);
                let families = (0..DIVERGENCE_FAMILIES)
                    .map(|i| random::family(ctx, &mut rng, vec![Variance::Contravariant], i % 3, 0))
                    .collect::<Result<Vec<_>>>()?;
                let items = families
                    .par_iter()
                    .enumerate()
                    .map(|(i, chi)| {
                        let (lhs, rhs) = geo.divergence_1_sides(chi)?;
                        Ok((format!("χ{i} p={}", i % 3), FormIdentity::new(lhs, rhs)))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let nontrivial = items.iter().filter(|(_, id)| !id.lhs.is_zero()).count();
                Ok(Finding::identities(items, env)?.with_note(format!("{nontrivial} families with nonzero divergence")))
            },
        ),
        check(
            "div.second",
            "∇_a χ^{ab} ∧ ι_{∂̂_b} vol = (−1)^{p+q} d(½ χ^{ab} ∧ ι_{∂̂_a} ι_{∂̂_b} vol) for 20 random antisymmetric (p,q) families",
            move |env| {
                let geo = Geometry::of(ctx)?;
                geo.warm();
                let mut rng = random::rng(s2);
                let shapes: Vec<(usize, usize)> = (0..DIVERGENCE_FAMILIES).map(|i| ((i / 2) % 3, i % 2)).collect();
                let families = shapes
                    .iter()
                    .map(|&(p, q)| random::antisymmetric_family(ctx, &mut rng, p, q))
                    .collect::<Result<Vec<_>>>()?;
                let results = families
                    .par_iter()
                    .zip(shapes.par_iter())
                    .enumerate()
                    .map(|(i, (chi, &(p, q)))| {
                        let (lhs, rhs) = geo.divergence_2_sides(chi)?;
                        let sign = if (p + q) % 2 == 1 { -rhs } else { rhs };
                        let printed = geo.divergence_2_printed_residual(chi)?;
                        Ok(((format!("χ{i} (p,q)=({p},{q})"), FormIdentity::new(lhs, sign)), printed))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let mut printed_fail = Vec::new();
                let mut items = Vec::new();
                for (i, (item, printed)) in results.into_iter().enumerate() {
                    if !printed.is_zero() {
                        printed_fail.push(format!("χ{i} (p,q)=({},{})", shapes[i].0, shapes[i].1));
                    }
                    items.push(item);
                }
                let mut f = Finding::identities(items, env)?.with_note(format!("{} families", shapes.len()));
                f.printed = Some(Printed {
                    agrees: printed_fail.is_empty(),
                    residual: (!printed_fail.is_empty()).then(|| {
                        format!("sign (−1)^p fails on {} of {} families: {}", printed_fail.len(), shapes.len(), printed_fail.join(", "))
                    }),
                });
                Ok(f)
            },
        ),
    ]
}

// ------------------------------------------------------------ oracle

const SAMPLER_AUDIT: usize = 1000;
const CORPUS_PAIRS: usize = 60;

fn oracle_checks(ctx: Ctx, seed: u64) -> Vec<Check> {
    let n = ctx.n();
    vec![
        check("oracle.determinism", "same seed gives the same point", move |_| {
            let a = JetPoint::sample(ctx, seed)?;
            let b = JetPoint::sample(ctx, seed)?;
            let probe = Var::g(1, n, MultiIndex::unit(1));
            Ok(Finding::predicate(
                a.metric() == b.metric() && a.value(probe)? == b.value(probe)?,
                "metric 0-jet and higher jets reproduced",
            ))
        }),
        check("oracle.sampler", "1000 samples: det g < 0, Lorentzian signature, −det g not a square", move |_| {
            let bad = (0..SAMPLER_AUDIT)
                .into_par_iter()
                .map(|i| JetPoint::sample(ctx, point_seed(seed, i)).map(|p| !(p.det().is_negative() && p.is_admissible())))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .filter(|b| *b)
                .count();
            Ok(Finding::predicate(bad == 0, format!("{bad} of {SAMPLER_AUDIT} samples inadmissible")))
        }),
        check("oracle.minkowski_mode", "forced diag(−1,1,…) point has det g = −1", move |_| {
            let p = JetPoint::sample_with_mode(ctx, seed, SampleMode::Minkowski)?;
            Ok(Finding::predicate(*p.det() == Rational::int(-1), format!("det g = {}", p.det())))
        }),
        check("oracle.defining_relation", "s·s evaluates to (−det g, 0)", move |env| {
            let s = JetScalar::sqrt_neg_det(ctx)?;
            let ss = &s * &s;
            let mut ok = true;
            for i in 0..env.points {
                let p = JetPoint::sample(ctx, point_seed(env.seed, i))?;
                ok &= p.evaluate(&ss)? == (p.s_squared(), Rational::ZERO);
            }
            Ok(Finding::predicate(ok, format!("checked at {} points", env.points)))
        }),
        check("oracle.inverse", "g^{ab} g_{bc} = δ^a_c", move |env| {
            let geo = Geometry::of(ctx)?;
            let items = index_tuples(n, 2)
                .into_iter()
                .map(|ac| {
                    let (a, c) = (ac[0], ac[1]);
                    let sum = JetScalar::sum(ctx, (1..=n).map(|b| geo.ginv(a, b) * &geo.g(b, c)));
                    scalar_identity(format!("{a}{c}"), sum, JetScalar::int(ctx, (a == c) as i64))
                })
                .collect();
            Finding::identities(items, env)
        }),
        check("oracle.einstein_2d", "R^{ab} = ½ R g^{ab} at n = 2 evaluated at points", move |env| {
            let c2 = Ctx::metric(2)?;
            let geo = Geometry::of(c2)?;
            let half_r = geo.scalar_curvature().scale(&Rational::new(1, 2));
            let items = index_tuples(2, 2)
                .into_iter()
                .map(|ab| scalar_identity(format!("{}{}", ab[0], ab[1]), geo.ricci_upper(ab[0], ab[1]), &half_r * geo.ginv(ab[0], ab[1])))
                .collect();
            Finding::identities(items, env)
        }),
        check("oracle.ring_homomorphism", "evaluation respects + and · modulo s² = −det g (100 pairs)", move |_| {
            let mut rng = random::rng(entry_seed(seed, "ring"));
            let mut bad = 0;
            for i in 0..100 {
                let f = random::scalar(ctx, &mut rng, 4, 1);
                let g = random::scalar(ctx, &mut rng, 4, 1);
                let p = JetPoint::sample(ctx, point_seed(seed, i))?;
                let ((a1, b1), (a2, b2)) = (p.evaluate(&f)?, p.evaluate(&g)?);
                let prod = (&(&a1 * &a2) + &(&(&b1 * &b2) * &p.s_squared()), &(&a1 * &b2) + &(&a2 * &b1));
                let sum = (&a1 + &a2, &b1 + &b2);
                if p.evaluate(&(&f * &g))? != prod || p.evaluate(&(&f + &g))? != sum {
                    bad += 1;
                }
            }
            Ok(Finding::predicate(bad == 0, format!("{bad} of 100 pairs violate the homomorphism property")))
        }),
        check(
            "oracle.corpus",
            "canonical is_zero and the oracle agree on 120 identities and non-identities",
            move |env| {
                let mut rng = random::rng(entry_seed(seed, "corpus"));
                let mut corpus = Vec::new();
                for _ in 0..CORPUS_PAIRS {
                    let f = random::scalar(ctx, &mut rng, 3, 2);
                    let g = random::scalar(ctx, &mut rng, 3, 2);
                    let lhs = &(&f + &g) * &(&f - &g);
                    corpus.push(FormIdentity::new(Form::scalar(lhs), Form::scalar(&(&f * &f) - &(&g * &g))));
                    let sq = &(&f + &g) * &(&f + &g);
                    corpus.push(FormIdentity::new(Form::scalar(sq), Form::scalar(&(&f * &f) + &(&g * &g))));
                }
                let audits = corpus
                    .par_iter()
                    .enumerate()
                    .map(|(i, id)| audit(id, env.points, point_seed(env.seed, i)))
                    .collect::<Result<Vec<_>>>()?;
                let disagreements = audits.iter().filter(|a| !a.agrees()).count();
                let zeros = audits.iter().filter(|a| a.symbolic_zero).count();
                Ok(Finding::predicate(
                    disagreements == 0,
                    format!("{} expressions, {zeros} canonical zeros, {disagreements} disagreements", audits.len()),
                ))
            },
        ),
        check(
            "oracle.lepage_concrete",
            "𝓛_{ρ(v)} γ vanishes at 20 points for a random degree-2 polynomial v",
            move |env| {
                let theory = build_gr_theory(ctx)?;
                let mut rng = random::rng(entry_seed(seed, "field"));
                let concrete = random::polynomial_field(ctx, &mut rng, 2)?;
                let formal = SpacetimeField::formal('v')?;
                let gamma = theory.data().boundary();
                let lie_formal = crate::fields::diffeo_action(ctx, &formal)?.lie_derivative(gamma)?;
                let mut bound_ok = true;
                for i in 0..env.points {
                    let p = JetPoint::sample(ctx, point_seed(env.seed, i))?.bind_field('v', &concrete)?;
                    bound_ok &= lie_formal.vanishes_at(&p)?;
                }
                let lie = crate::fields::diffeo_action(ctx, &concrete)?.lie_derivative(gamma)?;
                let f = Finding::identities(one("", lie, Form::zero(ctx)), env)?;
                Ok(f.with_note(format!("v = {concrete}"))
                    .require(bound_ok, "formal result fails with v bound to the concrete field"))
            },
        ),
    ]
}
