//! Exact finite stochastic kernels, their profinite completion over
//! sequential inverse systems, and the dual presentation by Boolean
//! algebras and step functions.
//!
//! * [`finker`]: finite sets and row-stochastic rational matrices.
//! * [`stone`]: inverse systems of finite sets, points, clopen cylinders.
//! * [`proker`]: compatible level families of kernels between systems.
//! * [`bker`]: finite Boolean algebras, the interval effect monoid, measures
//!   and Boolean kernels.
//! * [`dsl`]: program files and the kernel term language.
//!
//! All probabilities are exact rationals; equality is always decided exactly.

pub mod bker;
pub mod dsl;
pub mod error;
pub mod finker;
pub mod gen;
pub mod laws;
pub mod proker;
pub mod rational;
pub mod sample;
pub mod stone;

pub use bker::{BKerMap, Distribution, FinBoolAlg, StepFunction};
pub use error::{Error, Result};
pub use finker::{CausalityOutcome, FinKernel};
pub use proker::{ProKernel, ProState};
pub use rational::Rational;
pub use stone::{Clopen, InverseSystem, Point};
