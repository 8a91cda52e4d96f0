//! Numerical laboratory for lower bounds on the pressure Laplacian in
//! porous-medium and tissue-growth models.
//!
//! The model is the continuity equation `dn/dt - div(n grad p) = n G(p)`
//! closed by a constitutive pressure law p = p(n). In the pressure variable
//! it reads `p_t = |grad p|^2 + q w` with `q(p) = n p'(n)` and
//! `w = Delta p + G(p)`, and the classical Aronson-Bénilan mechanism bounds
//! the negative part of w from below by `-C/t`-type rates. This crate
//! provides:
//!
//! - the constitutive laws and their induced q ([`pressure_laws`]),
//! - growth laws with a homeostatic pressure ([`growth_laws`]),
//! - the weight functions h(p) and every scanned estimate constant
//!   ([`weights`]),
//! - a conservative explicit finite-volume solver plus a direct pressure
//!   stepper for the regularity counterexample ([`solver`]),
//! - estimate functionals, decay fits and bound checks ([`analysis`]),
//! - analytic references: Barenblatt profiles and the cos^2 blow-up run
//!   ([`oracles`]),
//! - scenario configs, CSV/SVG reporting and the CLI ([`config`], [`report`],
//!   [`cli`]).

// Validation guards are written as `!(x > 0.0)` throughout so that NaN fails
// them; the negated-comparison lint would obscure that on every site.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod config;
pub mod growth_laws;
pub mod numerics;
pub mod oracles;
pub mod pressure_laws;
pub mod report;
pub mod solver;
pub mod weights;

pub use analysis::{BoundReport, DiagnosticsSeries, TheoremId};
pub use growth_laws::GrowthLaw;
pub use oracles::BarenblattParams;
pub use pressure_laws::PressureLaw;
pub use solver::{Field, Grid, SimState};
pub use weights::{Weight, WeightFamily, WeightProvenance};
