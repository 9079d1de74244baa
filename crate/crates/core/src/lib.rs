//! Exact-arithmetic workbench for smooth mod-p representations of `GL_2(Q_p)`
//! and their restriction to the Borel subgroup.
//!
//! The crate is layered bottom-up:
//!
//! * [`exactfield`]: finite fields `F_{p^k}` and exact linear algebra.
//! * [`padicmat`]: exact 2×2 matrices over `Q ⊂ Q_p`, coset decompositions and tree vertices.
//! * [`fqweights`]: Serre weights, tame characters and finite `GL_2(F_p)`-modules.
//! * [`compactind`]: compact induction, its Hecke operator and quotient models.
//! * [`principalseries`]: principal series at finite level.
//! * [`borellab`]: experiment drivers running the constructive arguments on these models.
//! * [`clireport`]: configuration, checks and report emission for the command line tool.

pub mod borellab;
pub mod clireport;
pub mod compactind;
pub mod error;
pub mod exactfield;
pub mod fqweights;
pub mod padicmat;
pub mod principalseries;

pub use error::{Error, Result};
