//! Gate-count classes of controlled-U operations.
//!
//! Every unitary `U` falls into exactly one of eleven classes. The class
//! fixes `m(U)`, the minimal number of CNOT and single-qubit gates needed to
//! implement controlled-U.

use std::f64::consts::PI;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::haar::haar_unitary;
use crate::io::complex_pair;
use crate::matrix::{cis, Complex, Mat2, ONE};

/// Default predicate tolerance.
pub const DEFAULT_EPS: f64 = 1e-9;
/// Inputs must be unitary to this max-norm residual.
pub const INPUT_UNITARY_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateClass {
    /// `U = I`
    A,
    /// `U = e^{iφ} I`, `U ≠ I`
    B,
    /// `U = X`
    C,
    /// `U = e^{iφ} X`, `U ≠ X`
    D,
    /// `U = e^{iφ} Z`
    E,
    /// `tr U = 0`, `det U = −1`, `U ≠ ±X`
    F,
    /// `tr U = 0`, `det U ≠ −1`, not of the forms above
    G,
    /// `tr(UX) = 0`, `tr U ≠ 0`, `det U = 1`, `U ≠ ±I`
    H,
    /// `tr(UX) = 0`, `tr U ≠ 0`, `det U ≠ 1`, `U` not scalar
    I,
    /// `det U = 1`, `tr U ≠ 0`, `tr(UX) ≠ 0`
    J,
    /// `det U ≠ 1`, `tr U ≠ 0`, `tr(UX) ≠ 0`
    Generic,
}

impl GateClass {
    pub const ALL: [GateClass; 11] = [
        GateClass::A,
        GateClass::B,
        GateClass::C,
        GateClass::D,
        GateClass::E,
        GateClass::F,
        GateClass::G,
        GateClass::H,
        GateClass::I,
        GateClass::J,
        GateClass::Generic,
    ];

    /// `m(U)` for members of this class.
    pub fn gate_count(self) -> usize {
        match self {
            GateClass::A => 0,
            GateClass::B | GateClass::C => 1,
            GateClass::D => 2,
            GateClass::E | GateClass::F => 3,
            GateClass::G | GateClass::H => 4,
            GateClass::I | GateClass::J => 5,
            GateClass::Generic => 6,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            GateClass::A => "a",
            GateClass::B => "b",
            GateClass::C => "c",
            GateClass::D => "d",
            GateClass::E => "e",
            GateClass::F => "f",
            GateClass::G => "g",
            GateClass::H => "h",
            GateClass::I => "i",
            GateClass::J => "j",
            GateClass::Generic => "generic",
        }
    }

    pub fn from_tag(tag: &str) -> Option<GateClass> {
        GateClass::ALL.into_iter().find(|c| c.tag() == tag)
    }
}

impl fmt::Display for GateClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Distances of the deciding quantities from zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Margins {
    pub trace: f64,
    pub trace_ux: f64,
    pub det_minus_one: f64,
    pub det_plus_one: f64,
}

impl Margins {
    fn iter(&self) -> impl Iterator<Item = f64> {
        [
            self.trace,
            self.trace_ux,
            self.det_minus_one,
            self.det_plus_one,
        ]
        .into_iter()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassificationReport {
    pub class: GateClass,
    pub trace: Complex,
    pub trace_ux: Complex,
    pub det: Complex,
    pub margins: Margins,
    pub eps: f64,
}

impl ClassificationReport {
    pub fn m(&self) -> usize {
        self.class.gate_count()
    }

    /// True when some margin lies within a factor 100 of `eps` on either
    /// side, i.e. the decision could flip under a modest change of `eps`.
    pub fn near_boundary(&self) -> bool {
        self.margins
            .iter()
            .any(|m| m > self.eps / 100.0 && m < 100.0 * self.eps)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "tag": self.class.tag(),
            "m": self.m(),
            "trace": complex_pair(self.trace),
            "trace_ux": complex_pair(self.trace_ux),
            "det": complex_pair(self.det),
            "margins": self.margins,
            "eps": self.eps,
            "near_boundary": self.near_boundary(),
        })
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps <= 1e-3 {
        Ok(())
    } else {
        Err(Error::Precondition(format!("eps {eps} outside (0, 1e-3]")))
    }
}

/// Classifies `u`, resolving ties by the order: `tr U = 0`, then
/// `tr(UX) = 0`, then `det U = 1`.
pub fn classify(u: &Mat2, eps: f64) -> Result<ClassificationReport> {
    check_eps(eps)?;
    u.check_unitary(INPUT_UNITARY_TOL)?;
    let m = &u.0;
    let trace = u.trace();
    let trace_ux = (*u * Mat2::X).trace();
    let det = u.det();
    let margins = Margins {
        trace: trace.norm(),
        trace_ux: trace_ux.norm(),
        det_minus_one: (det - ONE).norm(),
        det_plus_one: (det + ONE).norm(),
    };

    let class = if margins.trace <= eps {
        if u.is_antidiagonal(eps) && (m[0][1] - m[1][0]).norm() <= eps {
            if (m[0][1] - ONE).norm() <= eps {
                GateClass::C
            } else {
                GateClass::D
            }
        } else if u.is_diagonal(eps) {
            GateClass::E
        } else if margins.det_plus_one <= eps {
            GateClass::F
        } else {
            GateClass::G
        }
    } else if margins.trace_ux <= eps {
        if u.is_diagonal(eps) && (m[0][0] - m[1][1]).norm() <= eps {
            if (m[0][0] - ONE).norm() <= eps {
                GateClass::A
            } else {
                GateClass::B
            }
        } else if margins.det_minus_one <= eps {
            GateClass::H
        } else {
            GateClass::I
        }
    } else if margins.det_minus_one <= eps {
        GateClass::J
    } else {
        GateClass::Generic
    };

    Ok(ClassificationReport {
        class,
        trace,
        trace_ux,
        det,
        margins,
        eps,
    })
}

/// `det U ≠ 1`, `tr U ≠ 0` and `tr(UX) ≠ 0`, each beyond `eps`.
pub fn is_generic(u: &Mat2, eps: f64) -> bool {
    let tr_ux = (*u * Mat2::X).trace();
    (u.det() - ONE).norm() > eps && u.trace().norm() > eps && tr_ux.norm() > eps
}

/// Angular distance kept between sampled phases and the class boundaries.
pub const SAMPLE_PHASE_MARGIN: f64 = PI / 4.0;
/// Lower bound kept on `|tr U|` and `|tr(UX)|` where a class requires them nonzero.
pub const SAMPLE_TRACE_MARGIN: f64 = 0.5;
/// Distance kept from the sparse forms `e^{iφ}X` and `e^{iφ}Z`.
pub const SAMPLE_FORM_MARGIN: f64 = 0.5;
const SAMPLE_ATTEMPTS: usize = 10_000;

/// `|arg z|`, the angle between `z` and the positive real axis.
fn angle_from_one(z: Complex) -> f64 {
    z.arg().abs()
}

/// Phase uniform in `[margin, 2π − margin]`.
fn bounded_phase(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(SAMPLE_PHASE_MARGIN..=2.0 * PI - SAMPLE_PHASE_MARGIN)
}

/// For traceless `u = e^{iφ} n·σ`, the distance of `n` from the x axis.
fn off_x_axis(u: &Mat2) -> f64 {
    let m = &u.0;
    (m[0][0].norm_sqr() + ((m[0][1] - m[1][0]) / 2.0).norm_sqr()).sqrt()
}

fn trace_ux(u: &Mat2) -> Complex {
    (*u * Mat2::X).trace()
}

/// `P X P† X` for Haar `P`, kept a fixed distance from `±I` and from
/// zero trace.
fn xtraceless_det_one(rng: &mut ChaCha8Rng) -> Mat2 {
    loop {
        let p = haar_unitary(rng);
        let u = p * Mat2::X * p.dagger() * Mat2::X;
        let tr = u.trace().norm();
        if (SAMPLE_TRACE_MARGIN..=2.0 - SAMPLE_TRACE_MARGIN).contains(&tr) {
            return u;
        }
    }
}

/// Draws a member of `class`, reproducibly from `seed`.
///
/// Draws are kept away from neighbouring classes by the `SAMPLE_*`
/// margins, so that they stay in class under perturbation and approximate
/// realizations with fewer gates remain measurably worse.
pub fn sample(class: GateClass, seed: u64) -> Result<Mat2> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rng = &mut rng;
    for _ in 0..SAMPLE_ATTEMPTS {
        let candidate = match class {
            GateClass::A => Some(Mat2::IDENTITY),
            GateClass::B => Some(Mat2::IDENTITY.scale(cis(bounded_phase(rng)))),
            GateClass::C => Some(Mat2::X),
            GateClass::D => Some(Mat2::X.scale(cis(bounded_phase(rng)))),
            GateClass::E => Some(Mat2::Z.scale(cis(rng.gen_range(0.0..2.0 * PI)))),
            GateClass::F => {
                let p = haar_unitary(rng);
                let u = p * Mat2::X * p.dagger();
                (off_x_axis(&u) >= SAMPLE_FORM_MARGIN).then_some(u)
            }
            GateClass::G => {
                let p = haar_unitary(rng);
                let u = (p * Mat2::X * p.dagger()).scale(cis(rng.gen_range(0.0..2.0 * PI)));
                let keeps_form =
                    off_x_axis(&u) >= SAMPLE_FORM_MARGIN && u.0[0][1].norm() >= SAMPLE_FORM_MARGIN;
                let det_far = angle_from_one(-u.det()) >= SAMPLE_PHASE_MARGIN;
                (keeps_form && det_far).then_some(u)
            }
            GateClass::H => Some(xtraceless_det_one(rng)),
            GateClass::I => {
                let u = xtraceless_det_one(rng).scale(cis(rng.gen_range(0.0..2.0 * PI)));
                (angle_from_one(u.det()) >= SAMPLE_PHASE_MARGIN).then_some(u)
            }
            GateClass::J => {
                let h = haar_unitary(rng);
                let u = h.scale(h.det().sqrt().inv());
                (u.trace().norm() >= SAMPLE_TRACE_MARGIN
                    && trace_ux(&u).norm() >= SAMPLE_TRACE_MARGIN)
                    .then_some(u)
            }
            GateClass::Generic => {
                let u = haar_unitary(rng);
                (u.trace().norm() >= SAMPLE_TRACE_MARGIN
                    && trace_ux(&u).norm() >= SAMPLE_TRACE_MARGIN
                    && angle_from_one(u.det()) >= SAMPLE_PHASE_MARGIN)
                    .then_some(u)
            }
        };
        if let Some(u) = candidate {
            return Ok(u);
        }
    }
    Err(Error::SamplerExhausted {
        tag: class.tag(),
        attempts: SAMPLE_ATTEMPTS,
    })
}
