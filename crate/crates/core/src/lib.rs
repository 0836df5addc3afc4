//! Exact symbolic variational bicomplex of lorentzian metrics.
//!
//! Scalars on the infinite jet bundle are exact rational functions in the
//! jet coordinates `g_{ab,C}`, formal vector-field symbols and
//! `s = √(−det g)`. Forms, vector fields, curvature, the Hilbert–Einstein
//! field theory and its homotopy momentum map are built on top, and every
//! identity can be cross-checked by randomized exact evaluation.

pub mod dsl;
pub mod error;
pub mod fields;
pub mod formalg;
pub mod geometry;
pub mod gr;
pub mod jetscalar;
pub mod linfty;
pub mod mech;
pub mod modp;
pub mod oracle;
pub mod poly;
pub mod rational;
pub mod report;
pub mod suite;
pub mod text;

pub use error::{Error, Result};
pub use formalg::{Form, FormKey, Pairing};
pub use jetscalar::{Ctx, JetScalar, Schema};
pub use poly::{Component, MultiIndex, Poly, Var, VarKind};
pub use rational::Rational;
