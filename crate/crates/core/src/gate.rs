//! Gate vocabulary and the single-qubit constants shared by both simulators.
//!
//! Rotations follow `RotY(θ) = exp(-iθY/2)`, so `RotY(θ)|0⟩ = cos(θ/2)|0⟩ + sin(θ/2)|1⟩`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{tensor_chain, ComplexMatrix};

/// A gate together with the qubits it acts on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateSpec {
    X(usize),
    Y(usize),
    Z(usize),
    H(usize),
    RotY { qubit: usize, theta: f64 },
    Cnot { control: usize, target: usize },
}

impl GateSpec {
    /// Acted-on qubits; for CNOT the control comes first.
    pub fn targets(&self) -> Vec<usize> {
        match *self {
            GateSpec::X(q) | GateSpec::Y(q) | GateSpec::Z(q) | GateSpec::H(q) => vec![q],
            GateSpec::RotY { qubit, .. } => vec![qubit],
            GateSpec::Cnot { control, target } => vec![control, target],
        }
    }

    pub fn touches(&self, qubit: usize) -> bool {
        self.targets().contains(&qubit)
    }

    /// Checks the gate against an `n`-qubit register.
    pub fn validate(&self, n: usize) -> Result<()> {
        let targets = self.targets();
        for &q in &targets {
            if q >= n {
                return Err(Error::QubitOutOfRange { qubit: q, n });
            }
        }
        if let [a, b] = targets[..] {
            if a == b {
                return Err(Error::RepeatedTarget(a));
            }
        }
        if let GateSpec::RotY { theta, .. } = self {
            if !theta.is_finite() {
                return Err(Error::NonFiniteAngle);
            }
        }
        Ok(())
    }

    /// The 2×2 matrix of a single-qubit gate, `None` for CNOT.
    pub fn single_qubit_matrix(&self) -> Option<ComplexMatrix> {
        match *self {
            GateSpec::X(_) => Some(pauli_x()),
            GateSpec::Y(_) => Some(pauli_y()),
            GateSpec::Z(_) => Some(pauli_z()),
            GateSpec::H(_) => Some(hadamard()),
            GateSpec::RotY { theta, .. } => Some(rot_y(theta)),
            GateSpec::Cnot { .. } => None,
        }
    }

    /// Full `2^n`-dimensional matrix of the gate, assembled by Kronecker chains.
    pub fn embed(&self, n: usize) -> Result<ComplexMatrix> {
        self.validate(n)?;
        match *self {
            GateSpec::Cnot { control, target } => {
                let keep = embed_at(n, &[(control, projector(0))]);
                let flip = embed_at(n, &[(control, projector(1)), (target, pauli_x())]);
                keep.add(&flip)
            }
            GateSpec::X(q) | GateSpec::Y(q) | GateSpec::Z(q) | GateSpec::H(q) | GateSpec::RotY { qubit: q, .. } => {
                let m = self.single_qubit_matrix().expect("single-qubit gate");
                Ok(embed_at(n, &[(q, m)]))
            }
        }
    }
}

/// Places the given 2×2 factors at their slots, identity elsewhere.
pub fn embed_at(n: usize, placed: &[(usize, ComplexMatrix)]) -> ComplexMatrix {
    let id = identity2();
    let factors: Vec<&ComplexMatrix> =
        (0..n).map(|slot| placed.iter().find(|(q, _)| *q == slot).map_or(&id, |(_, m)| m)).collect();
    tensor_chain(factors)
}

fn m2(rows: [[(f64, f64); 2]; 2]) -> ComplexMatrix {
    ComplexMatrix::from_rows(rows).expect("finite 2x2 constant")
}

pub fn identity2() -> ComplexMatrix {
    m2([[(1.0, 0.0), (0.0, 0.0)], [(0.0, 0.0), (1.0, 0.0)]])
}

pub fn pauli_x() -> ComplexMatrix {
    m2([[(0.0, 0.0), (1.0, 0.0)], [(1.0, 0.0), (0.0, 0.0)]])
}

pub fn pauli_y() -> ComplexMatrix {
    m2([[(0.0, 0.0), (0.0, -1.0)], [(0.0, 1.0), (0.0, 0.0)]])
}

pub fn pauli_z() -> ComplexMatrix {
    m2([[(1.0, 0.0), (0.0, 0.0)], [(0.0, 0.0), (-1.0, 0.0)]])
}

pub fn hadamard() -> ComplexMatrix {
    let s = core::f64::consts::FRAC_1_SQRT_2;
    m2([[(s, 0.0), (s, 0.0)], [(s, 0.0), (-s, 0.0)]])
}

/// `exp(-iθY/2)`.
pub fn rot_y(theta: f64) -> ComplexMatrix {
    let (s, c) = (libm::sin(theta / 2.0), libm::cos(theta / 2.0));
    m2([[(c, 0.0), (-s, 0.0)], [(s, 0.0), (c, 0.0)]])
}

/// `|b⟩⟨b|` for a single qubit.
pub fn projector(bit: u8) -> ComplexMatrix {
    if bit == 0 {
        m2([[(1.0, 0.0), (0.0, 0.0)], [(0.0, 0.0), (0.0, 0.0)]])
    } else {
        m2([[(0.0, 0.0), (0.0, 0.0)], [(0.0, 0.0), (1.0, 0.0)]])
    }
}
