//! Controlled-U targets, circuit checks, and executable entanglement
//! and circuit-identity checks.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::haar::{haar_unitary, random_state};
use crate::matrix::{cis, phase_distance, Mat2, Mat4, Vec2, Vec4, ZERO};

/// Exact-mode tolerance on the max-norm distance.
pub const EXACT_TOL: f64 = 1e-10;
/// Phase-mode tolerance on the phase distance.
pub const PHASE_TOL: f64 = 1e-12;
/// Tolerance for the "is an eigenvector" and "amplitude is zero" predicates.
pub const CRITERION_TOL: f64 = 1e-9;
/// Schmidt-determinant threshold used when observing entanglement.
pub const SCHMIDT_EPS: f64 = 1e-12;
/// Random draws closer than this to a predicate boundary are redrawn.
pub const BOUNDARY_EXCLUSION: f64 = 1e-6;
/// Residual bound for the circuit identities.
pub const IDENTITY_TOL: f64 = 1e-12;

/// `|0⟩⟨0| ⊗ I + |1⟩⟨1| ⊗ u`.
pub fn controlled(u: &Mat2) -> Mat4 {
    let mut m = Mat4::identity();
    for i in 0..2 {
        for j in 0..2 {
            m.0[2 + i][2 + j] = u.0[i][j];
        }
    }
    m
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Phase,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub mode: Mode,
    pub distance: f64,
    pub pass: bool,
    /// `θ` with `evaluate(c) ≈ e^{iθ} controlled(u)`; phase mode only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phase_recovered: Option<f64>,
}

pub fn verify(c: &Circuit, u: &Mat2, mode: Mode) -> VerifyReport {
    let m = c.evaluate();
    let target = controlled(u);
    match mode {
        Mode::Exact => {
            let distance = m.distance(&target);
            VerifyReport {
                mode,
                distance,
                pass: distance <= EXACT_TOL,
                phase_recovered: None,
            }
        }
        Mode::Phase => {
            let distance = phase_distance(&m, &target);
            VerifyReport {
                mode,
                distance,
                pass: distance <= PHASE_TOL,
                phase_recovered: Some(target.inner(&m).arg()),
            }
        }
    }
}

/// Amplitudes reshaped to a 2×2 matrix (rows `q1`, columns `q0`).
fn coefficient_matrix(state: &Vec4) -> Mat2 {
    let s = &state.0;
    Mat2::new(s[0], s[1], s[2], s[3])
}

/// `|det M|` of the reshaped amplitude matrix; zero iff Schmidt rank 1.
pub fn schmidt_determinant(state: &Vec4) -> f64 {
    coefficient_matrix(state).det().norm()
}

pub fn schmidt_entangled(state: &Vec4, eps: f64) -> bool {
    schmidt_determinant(state) > eps
}

/// Norm of the component of `u|φ⟩` orthogonal to `|φ⟩`, for normalized `φ`.
pub fn eigenvector_defect(u: &Mat2, phi: &Vec2) -> f64 {
    let image = u.apply(phi);
    let overlap = phi.dot(&image);
    let rest = Vec2([
        image.0[0] - overlap * phi.0[0],
        image.0[1] - overlap * phi.0[1],
    ]);
    rest.norm()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntanglementOutcome {
    pub predicted: bool,
    pub actual: bool,
    pub schmidt_determinant: f64,
}

impl EntanglementOutcome {
    pub fn agrees(&self) -> bool {
        self.predicted == self.actual
    }
}

/// Predicted entanglement of `controlled(u)(ψ⊗φ)` (φ not an eigenvector and
/// both amplitudes of ψ nonzero) against the observed Schmidt rank.
pub fn entanglement_outcome(u: &Mat2, psi: &Vec2, phi: &Vec2) -> EntanglementOutcome {
    let predicted = eigenvector_defect(u, phi) > CRITERION_TOL
        && psi.0[0].norm() > CRITERION_TOL
        && psi.0[1].norm() > CRITERION_TOL;
    let out = controlled(u).apply(&psi.kron(phi));
    let det = schmidt_determinant(&out);
    EntanglementOutcome {
        predicted,
        actual: det > SCHMIDT_EPS,
        schmidt_determinant: det,
    }
}

pub fn check_entanglement_criterion(u: &Mat2, psi: &Vec2, phi: &Vec2) -> bool {
    entanglement_outcome(u, psi, phi).agrees()
}

/// Outcome of one randomized check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub trials: usize,
    pub failures: usize,
    pub max_residual: f64,
}

impl CheckReport {
    fn new(name: &str) -> Self {
        CheckReport {
            name: name.to_string(),
            trials: 0,
            failures: 0,
            max_residual: 0.0,
        }
    }

    fn record(&mut self, residual: f64, tol: f64) {
        self.trials += 1;
        self.max_residual = self.max_residual.max(residual);
        if residual.is_nan() || residual > tol {
            self.failures += 1;
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Randomized agreement test of the entanglement criterion.
///
/// Most trials use a Haar `u` with uniform `ψ, φ`, redrawn when within
/// [`BOUNDARY_EXCLUSION`] of a basis state or an eigenvector. One trial in
/// ten uses an exact basis state for `ψ`, and one in ten an exact
/// eigenvector for `φ`. The reported residual is the largest Schmidt
/// determinant among trials predicted to stay unentangled.
pub fn entanglement_suite(trials: usize, seed: u64) -> CheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CheckReport::new("entanglement_criterion");
    for _ in 0..trials {
        let u = haar_unitary(&mut rng);
        let (psi, phi) = match rng.gen_range(0..10) {
            0 => {
                let basis = if rng.gen_bool(0.5) {
                    Vec2::ZERO_STATE
                } else {
                    Vec2::ONE_STATE
                };
                (
                    basis.scale(cis(rng.gen_range(0.0..2.0 * PI))),
                    random_state(&mut rng),
                )
            }
            1 => {
                let eig = crate::matrix::eig_unitary2(&u).expect("Haar draws are unitary");
                let k = rng.gen_range(0..2);
                (random_state(&mut rng), eig.vectors[k])
            }
            _ => loop {
                let psi = random_state(&mut rng);
                let phi = random_state(&mut rng);
                let near_boundary = psi.0.iter().any(|a| a.norm() <= BOUNDARY_EXCLUSION)
                    || eigenvector_defect(&u, &phi) <= BOUNDARY_EXCLUSION;
                if !near_boundary {
                    break (psi, phi);
                }
            },
        };
        let outcome = entanglement_outcome(&u, &psi, &phi);
        report.trials += 1;
        if !outcome.agrees() {
            report.failures += 1;
        }
        if !outcome.predicted {
            report.max_residual = report.max_residual.max(outcome.schmidt_determinant);
        }
    }
    report
}

fn random_context(rng: &mut ChaCha8Rng) -> (Circuit, Circuit) {
    let before = Circuit::new()
        .single(1, "custom", haar_unitary(rng))
        .single(0, "custom", haar_unitary(rng));
    let after = Circuit::new()
        .single(1, "custom", haar_unitary(rng))
        .single(0, "custom", haar_unitary(rng));
    (before, after)
}

fn sandwiched_distance(lhs: &Circuit, rhs: &Circuit, ctx: &(Circuit, Circuit)) -> f64 {
    let l = ctx.0.then(lhs).then(&ctx.1).evaluate();
    let r = ctx.0.then(rhs).then(&ctx.1).evaluate();
    l.distance(&r)
}

/// Runs the fixed circuit identities, each on `trials` random instances.
///
/// * `cnot_flip`: Hadamards on both wires reverse a CNOT.
/// * `x_absorption`: an antidiagonal gate before a CNOT on the control
///   becomes a diagonal one followed by X corrections on both wires.
/// * `diagonal_commutation`: a diagonal gate between two CNOTs may move to
///   the other wire when the CNOTs are reversed.
/// * `eigenvector_input`: for an eigenvector `φ` of `u` with eigenvalue `λ`,
///   controlled-`u` maps `ψ⊗φ` to `diag(1, λ)ψ ⊗ φ`.
///
/// The first three compare operators with random local gates placed before
/// and after both sides.
pub fn check_identities(trials: usize, seed: u64) -> Vec<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = Mat2::H;

    let mut flip = CheckReport::new("cnot_flip");
    let lhs = Circuit::new()
        .single(1, "H", h)
        .single(0, "H", h)
        .cnot(1, 0)
        .single(1, "H", h)
        .single(0, "H", h);
    let rhs = Circuit::new().cnot(0, 1);
    flip.record(lhs.evaluate().distance(&rhs.evaluate()), IDENTITY_TOL);
    for _ in 1..trials {
        let ctx = random_context(&mut rng);
        flip.record(sandwiched_distance(&lhs, &rhs, &ctx), IDENTITY_TOL);
    }

    let mut absorb = CheckReport::new("x_absorption");
    for _ in 0..trials {
        let a1 = Mat2::new(
            ZERO,
            cis(rng.gen_range(0.0..2.0 * PI)),
            cis(rng.gen_range(0.0..2.0 * PI)),
            ZERO,
        );
        let lhs = Circuit::new().single(1, "A1", a1).cnot(1, 0);
        let rhs = Circuit::new()
            .single(1, "XA1", Mat2::X * a1)
            .cnot(1, 0)
            .single(1, "X", Mat2::X)
            .single(0, "X", Mat2::X);
        let ctx = random_context(&mut rng);
        absorb.record(sandwiched_distance(&lhs, &rhs, &ctx), IDENTITY_TOL);
    }

    let mut commute = CheckReport::new("diagonal_commutation");
    for _ in 0..trials {
        let d = Mat2::diag(
            cis(rng.gen_range(0.0..2.0 * PI)),
            cis(rng.gen_range(0.0..2.0 * PI)),
        );
        let lhs = Circuit::new().cnot(0, 1).single(1, "C", d).cnot(0, 1);
        let rhs = Circuit::new().cnot(1, 0).single(0, "C", d).cnot(1, 0);
        let ctx = random_context(&mut rng);
        commute.record(sandwiched_distance(&lhs, &rhs, &ctx), IDENTITY_TOL);
    }

    let mut eigen = CheckReport::new("eigenvector_input");
    for _ in 0..trials {
        let u = haar_unitary(&mut rng);
        let eig = crate::matrix::eig_unitary2(&u).expect("Haar draws are unitary");
        let k = rng.gen_range(0..2);
        let (lambda, phi) = (eig.values[k], eig.vectors[k]);
        let psi = random_state(&mut rng);
        let out = controlled(&u).apply(&psi.kron(&phi));
        let expected = Mat2::diag(crate::matrix::ONE, lambda)
            .apply(&psi)
            .kron(&phi);
        eigen.record(out.distance(&expected), IDENTITY_TOL);
    }

    vec![flip, absorb, commute, eigen]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{c, ONE};
    use crate::synth::synth;

    #[test]
    fn controlled_examples() {
        assert_eq!(controlled(&Mat2::IDENTITY), Mat4::identity());
        assert_eq!(controlled(&Mat2::X), Circuit::new().cnot(1, 0).evaluate());
        let cz = controlled(&Mat2::Z);
        for i in 0..4 {
            for j in 0..4 {
                let want = if i != j {
                    ZERO
                } else if i == 3 {
                    -ONE
                } else {
                    ONE
                };
                assert_eq!(cz[(i, j)], want);
            }
        }
    }

    #[test]
    fn verify_examples() {
        let cnot = Circuit::new().cnot(1, 0);
        let r = verify(&cnot, &Mat2::X, Mode::Exact);
        assert!(r.pass && r.distance == 0.0);
        let r = verify(&cnot, &Mat2::Z, Mode::Exact);
        assert!(!r.pass);
        // entrywise max of CNOT − CZ
        assert_eq!(r.distance, 1.0);

        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..1000 {
            let u = haar_unitary(&mut rng);
            assert!(verify(&synth(&u).unwrap().circuit, &u, Mode::Exact).pass);
        }
    }

    #[test]
    fn phase_mode_recovers_phase() {
        let c = Circuit::new().single(1, "E", Mat2::phase(0.3)).cnot(1, 0);
        let u = Mat2::X.scale(cis(0.3));
        let r = verify(&c, &u, Mode::Phase);
        assert!(r.pass);
        assert!(r.phase_recovered.unwrap().abs() < 1e-15);

        // A global phase on the whole circuit passes in phase mode only.
        let shifted = Circuit::new()
            .single(1, "custom", Mat2::IDENTITY.scale(cis(0.9)))
            .cnot(1, 0);
        assert!(!verify(&shifted, &Mat2::X, Mode::Exact).pass);
        let r = verify(&shifted, &Mat2::X, Mode::Phase);
        assert!(r.pass);
        assert!((r.phase_recovered.unwrap() - 0.9).abs() < 1e-12);
    }

    #[test]
    fn schmidt_examples() {
        let s = 1.0 / 2f64.sqrt();
        let bell = Vec4([c(s, 0.0), ZERO, ZERO, c(s, 0.0)]);
        assert!(schmidt_entangled(&bell, 1e-12));
        assert!((schmidt_determinant(&bell) - 0.5).abs() < 1e-15);
        let ket01 = Vec4([ZERO, ONE, ZERO, ZERO]);
        assert!(!schmidt_entangled(&ket01, 1e-12));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let product = Vec2::omega0().kron(&random_state(&mut rng));
            assert!(!schmidt_entangled(&product, 1e-12));
        }
    }

    #[test]
    fn entanglement_examples() {
        let o = entanglement_outcome(&Mat2::H, &Vec2::omega0(), &Vec2::ZERO_STATE);
        assert!(o.predicted && o.actual);

        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let u = haar_unitary(&mut rng);
            let o = entanglement_outcome(&u, &Vec2::ZERO_STATE, &random_state(&mut rng));
            assert!(!o.predicted && !o.actual);
            let o = entanglement_outcome(&Mat2::Z, &random_state(&mut rng), &Vec2::ZERO_STATE);
            assert!(!o.predicted && !o.actual);
        }
    }

    #[test]
    fn entanglement_random_agreement() {
        let r = entanglement_suite(10_000, 3);
        assert_eq!(r.trials, 10_000);
        assert_eq!(r.failures, 0);
        assert!(r.max_residual <= 1e-12);
    }

    #[test]
    fn identities_hold() {
        for r in check_identities(100, 4) {
            assert_eq!(r.trials, 100, "{}", r.name);
            assert!(r.passed(), "{r:?}");
            assert!(r.max_residual <= IDENTITY_TOL);
        }
    }

    #[test]
    fn controlled_is_injective() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..200 {
            let u = haar_unitary(&mut rng);
            let v = if rng.gen_bool(0.5) {
                u
            } else {
                haar_unitary(&mut rng)
            };
            if controlled(&u).distance(&controlled(&v)) <= 1e-12 {
                assert!(u.distance(&v) <= 1e-10);
            }
        }
    }
}
