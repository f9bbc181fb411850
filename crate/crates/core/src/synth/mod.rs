//! Optimal circuits for controlled-U, one construction per gate-count class.
//!
//! | class | circuit (time order) | gates |
//! |-------|----------------------|-------|
//! | a | empty | 0 |
//! | b | `E` on wire 1 | 1 |
//! | c | CNOT | 1 |
//! | d | `E` on wire 1, CNOT | 2 |
//! | e | `HA` on wire 1, flipped CNOT, `H` on wire 1 | 3 |
//! | f, g | (`E`), `P†`, CNOT, `P` | 3, 4 |
//! | h, i | CNOT, (`E`), `P†`, CNOT, `P` | 4, 5 |
//! | j | `A`, CNOT, `B`, CNOT, `C` | 5 |
//! | generic | `E`, `A`, CNOT, `B`, CNOT, `C` | 6 |
//!
//! `E = diag(1, e^{iφ})` always sits on the control wire and is dropped when
//! `φ = 0`. CNOTs have control on wire 1 and target on wire 0, except in
//! class e.

mod decompose;
mod zyz;

pub use decompose::{
    decompose_abc, decompose_traceless, decompose_xtraceless, AbcFactors, TracelessForm,
};
pub use zyz::{zyz, ZyzAngles};

use serde_json::{json, Map, Value};

use crate::circuit::{to_json, Circuit};
use crate::classify::{classify, GateClass, DEFAULT_EPS};
use crate::error::{Error, Result};
use crate::io::matrix_json;
use crate::matrix::Mat2;
use crate::verify::controlled;

/// Reconstruction residual above which synthesis reports failure.
pub const SYNTH_FAILURE_TOL: f64 = 1e-8;

/// Named data of the decomposition used for a circuit.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Factors {
    pub phi: Option<f64>,
    pub p: Option<Mat2>,
    pub a: Option<Mat2>,
    pub b: Option<Mat2>,
    pub c: Option<Mat2>,
    pub e: Option<Mat2>,
}

impl Factors {
    fn to_json(&self) -> Value {
        let mut map = Map::new();
        if let Some(phi) = self.phi {
            map.insert("phi".into(), json!(phi));
        }
        for (name, m) in [
            ("P", self.p),
            ("A", self.a),
            ("B", self.b),
            ("C", self.c),
            ("E", self.e),
        ] {
            if let Some(m) = m {
                map.insert(name.into(), matrix_json(&m));
            }
        }
        Value::Object(map)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SynthesisResult {
    pub circuit: Circuit,
    pub class: GateClass,
    pub factors: Factors,
    /// Max-norm distance between the circuit operator and controlled-U.
    pub exact_error: f64,
}

impl SynthesisResult {
    pub fn m(&self) -> usize {
        self.class.gate_count()
    }

    pub fn to_json(&self) -> Value {
        let circuit: Value =
            serde_json::from_str(&to_json(&self.circuit)).expect("circuit JSON is valid");
        json!({
            "class": self.class.tag(),
            "m": self.m(),
            "exact_error": self.exact_error,
            "circuit": circuit,
            "factors": self.factors.to_json(),
        })
    }
}

/// Appends `P†`, CNOT, `P` on the target wire.
fn conjugated_cnot(c: Circuit, p: &Mat2) -> Circuit {
    c.single(0, "P†", p.dagger()).cnot(1, 0).single(0, "P", *p)
}

fn abc_tail(c: Circuit, f: &AbcFactors) -> Circuit {
    c.single(0, "A", f.a)
        .cnot(1, 0)
        .single(0, "B", f.b)
        .cnot(1, 0)
        .single(0, "C", f.c)
}

/// Synthesizes a gate-count optimal circuit for controlled-`u`.
pub fn synth(u: &Mat2) -> Result<SynthesisResult> {
    let report = classify(u, DEFAULT_EPS)?;
    let class = report.class;
    let m = &u.0;
    let mut factors = Factors::default();

    let circuit = match class {
        GateClass::A => Circuit::new(),
        GateClass::B => {
            let phi = u.trace().arg();
            let e = Mat2::phase(phi);
            factors.phi = Some(phi);
            factors.e = Some(e);
            Circuit::new().single(1, "E", e)
        }
        GateClass::C => Circuit::new().cnot(1, 0),
        GateClass::D => {
            let phi = (m[0][1] + m[1][0]).arg();
            let e = Mat2::phase(phi);
            factors.phi = Some(phi);
            factors.e = Some(e);
            factors.p = Some(Mat2::IDENTITY);
            Circuit::new().single(1, "E", e).cnot(1, 0)
        }
        GateClass::E => {
            // u = e^{iφ0} Z
            let phi0 = (m[0][0] - m[1][1]).arg();
            let a = Mat2::phase(phi0);
            factors.phi = Some(phi0);
            factors.a = Some(a);
            Circuit::new()
                .single(1, "HA", Mat2::H * a)
                .cnot(0, 1)
                .single(1, "H", Mat2::H)
        }
        GateClass::F | GateClass::G => {
            let form = decompose_traceless(u)?;
            factors.phi = Some(form.phi);
            factors.p = Some(form.p);
            let mut c = Circuit::new();
            if class == GateClass::G {
                let e = Mat2::phase(form.phi);
                factors.e = Some(e);
                c = c.single(1, "E", e);
            }
            conjugated_cnot(c, &form.p)
        }
        GateClass::H | GateClass::I => {
            let form = decompose_xtraceless(u)?;
            factors.phi = Some(form.phi);
            factors.p = Some(form.p);
            let mut c = Circuit::new().cnot(1, 0);
            if class == GateClass::I {
                let e = Mat2::phase(form.phi);
                factors.e = Some(e);
                c = c.single(1, "E", e);
            }
            conjugated_cnot(c, &form.p)
        }
        GateClass::J => {
            let abc = decompose_abc(u)?;
            factors.a = Some(abc.a);
            factors.b = Some(abc.b);
            factors.c = Some(abc.c);
            abc_tail(Circuit::new(), &abc)
        }
        GateClass::Generic => {
            // principal square root: arg in (−π/2, π/2]
            let root = report.det.sqrt();
            let phi = root.arg();
            let v = u.scale(root.inv());
            let abc = decompose_abc(&v)?;
            let e = Mat2::phase(phi);
            factors.phi = Some(phi);
            factors.e = Some(e);
            factors.a = Some(abc.a);
            factors.b = Some(abc.b);
            factors.c = Some(abc.c);
            abc_tail(Circuit::new().single(1, "E", e), &abc)
        }
    };

    debug_assert_eq!(circuit.gate_count(), class.gate_count());
    let exact_error = circuit.evaluate().distance(&controlled(u));
    if exact_error > SYNTH_FAILURE_TOL || exact_error.is_nan() {
        return Err(Error::SynthesisFailure {
            residual: exact_error,
        });
    }
    Ok(SynthesisResult {
        circuit,
        class,
        factors,
        exact_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::sample;
    use crate::haar::haar_unitary;
    use crate::matrix::{c, cis, Mat4, ONE};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn x_is_one_cnot() {
        let r = synth(&Mat2::X).unwrap();
        assert_eq!(r.circuit, Circuit::new().cnot(1, 0));
        assert_eq!(r.exact_error, 0.0);
    }

    #[test]
    fn scalar_phase_is_one_gate() {
        let u = Mat2::IDENTITY.scale(cis(PI / 3.0));
        let r = synth(&u).unwrap();
        assert_eq!(r.class, GateClass::B);
        assert_eq!(r.circuit.gate_count(), 1);
        let mut expected = Mat4::identity();
        expected[(2, 2)] = cis(PI / 3.0);
        expected[(3, 3)] = cis(PI / 3.0);
        assert!(r.circuit.evaluate().distance(&expected) <= 1e-15);
    }

    #[test]
    fn t_gate_uses_c2() {
        let r = synth(&Mat2::phase(PI / 4.0)).unwrap();
        assert_eq!(r.class, GateClass::I);
        assert_eq!(r.circuit.gate_count(), 5);
        assert_eq!(r.circuit.cnot_count(), 2);
        assert!(r.exact_error <= 1e-10);
    }

    #[test]
    fn named_gate_counts() {
        let cases = [
            (Mat2::IDENTITY, 0),
            (Mat2::X, 1),
            (Mat2::Z, 3),
            (Mat2::H, 3),
            (Mat2::phase(PI / 2.0), 5),
            (Mat2::phase(PI / 4.0), 5),
            (Mat2::rz(0.7), 4),
            (Mat2::X.scale(c(0.0, 1.0)), 2),
        ];
        for (u, m) in cases {
            let r = synth(&u).unwrap();
            assert_eq!(r.circuit.gate_count(), m, "{u:?}");
            assert!(r.exact_error <= 1e-10, "{u:?}: {}", r.exact_error);
        }
    }

    #[test]
    fn haar_inputs_take_six_gates() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..1000 {
            let u = haar_unitary(&mut rng);
            let r = synth(&u).unwrap();
            assert_eq!(r.circuit.gate_count(), 6);
            assert!(r.exact_error <= 1e-10);
        }
    }

    #[test]
    fn every_class_hits_its_count() {
        for class in GateClass::ALL {
            for seed in 0..200 {
                let u = sample(class, seed).unwrap();
                let r = synth(&u).unwrap();
                assert_eq!(r.class, class);
                assert_eq!(r.circuit.gate_count(), class.gate_count());
                assert!(r.exact_error <= 1e-10, "{class} {seed}: {}", r.exact_error);
            }
        }
    }

    #[test]
    fn deterministic() {
        let u = sample(GateClass::Generic, 3).unwrap();
        assert_eq!(synth(&u).unwrap(), synth(&u).unwrap());
    }

    #[test]
    fn rejects_non_unitary() {
        assert!(synth(&Mat2::diag(c(1.5, 0.0), ONE)).is_err());
    }

    #[test]
    fn json_shape() {
        let v = synth(&Mat2::H).unwrap().to_json();
        assert_eq!(v["class"], "f");
        assert_eq!(v["m"], 3);
        assert_eq!(v["circuit"]["gates"].as_array().unwrap().len(), 3);
        assert!(v["factors"]["P"]["u"].is_array());
        assert_eq!(v["factors"]["phi"], 0.0);
    }
}
