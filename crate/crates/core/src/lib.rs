//! Gate-count optimal synthesis of controlled single-qubit unitaries over
//! the gate set {CNOT, arbitrary single-qubit gates}.
//!
//! [`classify()`] gives the minimal count, [`synth()`] builds a circuit that
//! attains it, [`verify()`] checks circuits against targets, and [`falsify()`]
//! searches numerically for anything shorter.

pub mod circuit;
pub mod classify;
pub mod error;
pub mod falsify;
pub mod haar;
pub mod io;
pub mod matrix;
pub mod synth;
pub mod verify;

pub use circuit::{Circuit, Gate};
pub use classify::{classify, sample, ClassificationReport, GateClass};
pub use error::{Error, Result};
pub use falsify::{falsify, falsify_with, FalsifyConfig, FalsifyReport, Metric, Verdict};
pub use matrix::{Mat2, Mat4, Vec2, Vec4};
pub use synth::{synth, SynthesisResult};
pub use verify::{controlled, verify, Mode, VerifyReport};
