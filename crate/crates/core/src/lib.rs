//! Exact algebraic differential geometry over polynomial rings, rational
//! function fields and simple algebraic function fields.
//!
//! The layers build on each other: [`scalar`] (exact arithmetic),
//! [`algebraifold`] (derivations and one-forms), [`tensor`], [`connection`]
//! (Levi–Civita, curvature, field equations), [`maps`] (homomorphisms,
//! formal lines, geodesics), and [`manifest`], [`run`] and [`report`] for
//! batch runs.

pub mod algebraifold;
pub mod connection;
pub mod error;
pub mod manifest;
pub mod maps;
pub mod report;
pub mod run;
pub mod scalar;
pub mod tensor;

pub use error::{Error, Result};
