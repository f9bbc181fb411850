use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{Circuit, Gate, GATE_UNITARY_TOL};
use crate::error::{Error, Result};
use crate::io::{mat2_from_array, mat2_to_array, MatrixArray};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GateJson {
    Single {
        wire: i64,
        label: String,
        matrix: MatrixArray,
    },
    Cnot {
        control: i64,
        target: i64,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CircuitJson {
    pub qubits: usize,
    pub gates: Vec<GateJson>,
}

impl From<&Circuit> for CircuitJson {
    fn from(c: &Circuit) -> Self {
        let gates = c
            .gates
            .iter()
            .map(|g| match g {
                Gate::Single {
                    wire,
                    matrix,
                    label,
                } => GateJson::Single {
                    wire: *wire as i64,
                    label: label.clone(),
                    matrix: mat2_to_array(matrix),
                },
                Gate::Cnot { control, target } => GateJson::Cnot {
                    control: *control as i64,
                    target: *target as i64,
                },
            })
            .collect();
        CircuitJson { qubits: 2, gates }
    }
}

fn gate_err(index: usize, message: impl Into<String>) -> Error {
    Error::InvalidGate {
        index,
        message: message.into(),
    }
}

fn wire(index: usize, w: i64) -> Result<usize> {
    match w {
        0 | 1 => Ok(w as usize),
        _ => Err(gate_err(index, format!("bad wire index {w}"))),
    }
}

impl CircuitJson {
    pub fn into_circuit(self) -> Result<Circuit> {
        if self.qubits != 2 {
            return Err(Error::Parse(format!(
                "expected 2 qubits, got {}",
                self.qubits
            )));
        }
        let mut gates = Vec::with_capacity(self.gates.len());
        for (index, g) in self.gates.into_iter().enumerate() {
            let gate = match g {
                GateJson::Single {
                    wire: w,
                    label,
                    matrix,
                } => {
                    let wire = wire(index, w)?;
                    let matrix =
                        mat2_from_array(&matrix).map_err(|e| gate_err(index, e.to_string()))?;
                    if !matrix.is_unitary(GATE_UNITARY_TOL) {
                        return Err(gate_err(index, "non-unitary gate"));
                    }
                    Gate::Single {
                        wire,
                        matrix,
                        label,
                    }
                }
                GateJson::Cnot { control, target } => {
                    let control = wire(index, control)?;
                    let target = wire(index, target)?;
                    if control == target {
                        return Err(gate_err(index, "invalid cnot: control equals target"));
                    }
                    Gate::Cnot { control, target }
                }
            };
            gates.push(gate);
        }
        Ok(Circuit { gates })
    }
}

/// Serializes a circuit. Floats are written in shortest round-trip form.
pub fn to_json(c: &Circuit) -> String {
    serde_json::to_string(&CircuitJson::from(c)).expect("circuit serialization is infallible")
}

/// Parses and validates a circuit; errors name the offending gate index.
pub fn from_json(text: &str) -> Result<Circuit> {
    let doc: Value = serde_json::from_str(text)?;
    let obj = doc
        .as_object()
        .ok_or_else(|| Error::Parse("circuit must be a JSON object".into()))?;
    let qubits = obj
        .get("qubits")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse("missing integer field \"qubits\"".into()))?;
    let raw = obj
        .get("gates")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("missing array field \"gates\"".into()))?;
    let gates = raw
        .iter()
        .enumerate()
        .map(|(i, v)| {
            GateJson::deserialize(v).map_err(|e| gate_err(i, format!("malformed gate: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    CircuitJson {
        qubits: qubits as usize,
        gates,
    }
    .into_circuit()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Mat2;

    #[test]
    fn cnot_with_equal_wires_is_rejected() {
        let text = r#"{"qubits":2,"gates":[{"kind":"cnot","control":1,"target":1}]}"#;
        let err = from_json(text).unwrap_err().to_string();
        assert!(
            err.contains("gate 0") && err.contains("invalid cnot"),
            "{err}"
        );
    }

    #[test]
    fn perturbed_hadamard_is_rejected() {
        let mut h = Mat2::H;
        h.0[0][0].re += 1e-6;
        let c = Circuit::new().cnot(1, 0).single(0, "H", h);
        let err = from_json(&to_json(&c)).unwrap_err().to_string();
        assert!(
            err.contains("gate 1") && err.contains("non-unitary gate"),
            "{err}"
        );
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(from_json("{not json"), Err(Error::Parse(_))));
        assert!(from_json(r#"{"qubits":3,"gates":[]}"#).is_err());
        let bad_wire = r#"{"qubits":2,"gates":[{"kind":"cnot","control":0,"target":1},
            {"kind":"single","wire":4,"label":"X","matrix":[[[0,0],[1,0]],[[1,0],[0,0]]]}]}"#;
        let err = from_json(bad_wire).unwrap_err().to_string();
        assert!(err.contains("gate 1") && err.contains("wire"), "{err}");
        let bad_kind = r#"{"qubits":2,"gates":[{"kind":"swap"}]}"#;
        assert!(from_json(bad_kind)
            .unwrap_err()
            .to_string()
            .contains("gate 0"));
    }

    #[test]
    fn empty_circuit() {
        let c = from_json(r#"{"qubits":2,"gates":[]}"#).unwrap();
        assert!(c.is_empty());
        assert_eq!(to_json(&c), r#"{"qubits":2,"gates":[]}"#);
    }
}
