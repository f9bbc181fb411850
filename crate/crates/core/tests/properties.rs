use proptest::prelude::*;

use cugate::circuit::{from_json, simulate_qasm3, to_json, to_qasm3};
use cugate::classify::{classify, DEFAULT_EPS};
use cugate::io::{matrix_json, parse_matrix_json};
use cugate::matrix::{cis, Mat2};
use cugate::synth::{synth, zyz, ZyzAngles};
use cugate::verify::controlled;
use cugate::Circuit;

fn angle() -> impl Strategy<Value = f64> {
    -10.0f64..10.0
}

prop_compose! {
    fn unitary()(a in angle(), b in angle(), g in angle(), d in angle()) -> Mat2 {
        ZyzAngles { alpha: a, beta: b, gamma: g, delta: d }.to_matrix()
    }
}

#[derive(Clone, Debug)]
enum Step {
    Single(usize, Mat2),
    Cnot(usize),
}

fn step() -> impl Strategy<Value = Step> {
    prop_oneof![
        (0usize..2, unitary()).prop_map(|(w, m)| Step::Single(w, m)),
        (0usize..2).prop_map(Step::Cnot),
    ]
}

fn build(steps: &[Step]) -> Circuit {
    steps.iter().fold(Circuit::new(), |c, s| match s {
        Step::Single(w, m) => c.single(*w, "g", *m),
        Step::Cnot(ctl) => c.cnot(*ctl, 1 - ctl),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn synthesized_circuits_are_exact(u in unitary()) {
        let r = synth(&u).unwrap();
        prop_assert!(r.exact_error <= 1e-10);
        prop_assert_eq!(r.circuit.gate_count(), r.m());
        prop_assert!(r.circuit.evaluate().distance(&controlled(&u)) <= 1e-10);
    }

    #[test]
    fn class_is_invariant_under_dagger(u in unitary()) {
        let a = classify(&u, DEFAULT_EPS).unwrap();
        let b = classify(&u.dagger(), DEFAULT_EPS).unwrap();
        prop_assert_eq!(a.class, b.class);
    }

    #[test]
    fn zyz_reconstructs(u in unitary()) {
        let z = zyz(&u).unwrap();
        prop_assert!(z.to_matrix().distance(&u) <= 1e-10);
        prop_assert!((0.0..=std::f64::consts::PI).contains(&z.gamma));
    }

    #[test]
    fn matrix_json_round_trip(u in unitary()) {
        let text = matrix_json(&u).to_string();
        prop_assert_eq!(parse_matrix_json(&text).unwrap(), u);
    }

    #[test]
    fn circuit_json_round_trip_is_bit_exact(steps in prop::collection::vec(step(), 0..12)) {
        let c = build(&steps);
        let text = to_json(&c);
        let back = from_json(&text).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(to_json(&back), text);
    }

    #[test]
    fn qasm_resimulates(steps in prop::collection::vec(step(), 0..12)) {
        let c = build(&steps);
        let sim = simulate_qasm3(&to_qasm3(&c)).unwrap();
        prop_assert!(sim.distance(&c.evaluate()) <= 1e-8);
    }

    #[test]
    fn evaluate_is_multiplicative(
        a in prop::collection::vec(step(), 0..6),
        b in prop::collection::vec(step(), 0..6),
    ) {
        let (ca, cb) = (build(&a), build(&b));
        let joined = ca.then(&cb).evaluate();
        prop_assert!(joined.distance(&(cb.evaluate() * ca.evaluate())) <= 1e-12);
    }

    #[test]
    fn global_phase_preserves_trace_conditions(u in unitary(), t in angle()) {
        // e^{it}u has the same trace conditions as u
        let a = classify(&u, DEFAULT_EPS).unwrap();
        let b = classify(&u.scale(cis(t)), DEFAULT_EPS).unwrap();
        let traceless = |r: &cugate::ClassificationReport| {
            (r.margins.trace <= DEFAULT_EPS, r.margins.trace_ux <= DEFAULT_EPS)
        };
        prop_assert_eq!(traceless(&a), traceless(&b));
    }
}
