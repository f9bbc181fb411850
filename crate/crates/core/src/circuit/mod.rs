//! Two-qubit circuits over the elementary gate set {single-qubit, CNOT}.
//!
//! Gates are listed in time order. The operator of a circuit is the product
//! of the gate embeddings taken right to left, so the first gate in the list
//! is the rightmost matrix factor.

mod json;
mod qasm;
mod render;

pub use json::{from_json, to_json, CircuitJson, GateJson};
pub use qasm::{simulate_qasm3, to_qasm3};
pub use render::render_ascii;

use crate::error::{Error, Result};
use crate::matrix::{Mat2, Mat4};

/// Unitarity tolerance applied to single-qubit gates entering a circuit.
pub const GATE_UNITARY_TOL: f64 = 1e-8;

/// One elementary gate. Wire 1 is the most significant qubit.
#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    Single {
        wire: usize,
        matrix: Mat2,
        label: String,
    },
    Cnot {
        control: usize,
        target: usize,
    },
}

impl Gate {
    pub fn single(wire: usize, label: impl Into<String>, matrix: Mat2) -> Result<Gate> {
        if wire > 1 {
            return Err(Error::InvalidGate {
                index: 0,
                message: format!("bad wire index {wire}"),
            });
        }
        if !matrix.is_unitary(GATE_UNITARY_TOL) {
            return Err(Error::InvalidGate {
                index: 0,
                message: "non-unitary gate".into(),
            });
        }
        Ok(Gate::Single {
            wire,
            matrix,
            label: label.into(),
        })
    }

    pub fn cnot(control: usize, target: usize) -> Result<Gate> {
        if control > 1 || target > 1 || control == target {
            return Err(Error::InvalidGate {
                index: 0,
                message: format!("invalid cnot (control {control}, target {target})"),
            });
        }
        Ok(Gate::Cnot { control, target })
    }

    pub fn is_cnot(&self) -> bool {
        matches!(self, Gate::Cnot { .. })
    }

    /// The 4×4 operator this gate applies.
    pub fn embed(&self) -> Mat4 {
        let mut m = Mat4::identity();
        self.apply_left(&mut m);
        m
    }

    /// `m ← embed(self) · m`.
    pub fn apply_left(&self, m: &mut Mat4) {
        match self {
            Gate::Single { wire, matrix, .. } => apply_single(m, *wire, matrix),
            Gate::Cnot { control, .. } => apply_cnot(m, *control),
        }
    }
}

/// Row pairs `(r, r')` that differ only in the bit of `wire`.
#[inline]
fn row_pairs(wire: usize) -> [(usize, usize); 2] {
    if wire == 1 {
        [(0, 2), (1, 3)]
    } else {
        [(0, 1), (2, 3)]
    }
}

/// Left-multiplies `m` by the embedding of `g` on `wire`.
#[inline]
pub(crate) fn apply_single(m: &mut Mat4, wire: usize, g: &Mat2) {
    let g = &g.0;
    for (r0, r1) in row_pairs(wire) {
        for col in 0..4 {
            let a = m.0[r0][col];
            let b = m.0[r1][col];
            m.0[r0][col] = g[0][0] * a + g[0][1] * b;
            m.0[r1][col] = g[1][0] * a + g[1][1] * b;
        }
    }
}

/// Left-multiplies `m` by a CNOT; the permutation is a row swap.
#[inline]
pub(crate) fn apply_cnot(m: &mut Mat4, control: usize) {
    if control == 1 {
        // |10⟩ ↔ |11⟩
        m.0.swap(2, 3);
    } else {
        // |01⟩ ↔ |11⟩
        m.0.swap(1, 3);
    }
}

/// An ordered gate list on two wires.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Circuit {
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_gates(gates: Vec<Gate>) -> Self {
        Circuit { gates }
    }

    pub fn push(&mut self, gate: Gate) -> &mut Self {
        self.gates.push(gate);
        self
    }

    /// Appends a single-qubit gate. The matrix is assumed unitary.
    pub fn single(mut self, wire: usize, label: &str, matrix: Mat2) -> Self {
        assert!(wire < 2, "wire index out of range");
        self.gates.push(Gate::Single {
            wire,
            matrix,
            label: label.to_string(),
        });
        self
    }

    pub fn cnot(mut self, control: usize, target: usize) -> Self {
        assert!(
            control < 2 && target < 2 && control != target,
            "invalid cnot"
        );
        self.gates.push(Gate::Cnot { control, target });
        self
    }

    /// Concatenation in time order: `self` runs first.
    pub fn then(&self, other: &Circuit) -> Circuit {
        let mut gates = self.gates.clone();
        gates.extend(other.gates.iter().cloned());
        Circuit { gates }
    }

    pub fn evaluate(&self) -> Mat4 {
        let mut m = Mat4::identity();
        for g in &self.gates {
            g.apply_left(&mut m);
        }
        m
    }

    /// Number of elementary gates. The IR never fuses gates on its own.
    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    pub fn cnot_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_cnot()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }
}
