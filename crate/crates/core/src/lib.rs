//! CHSH game engine.
//!
//! * [`linalg`]: dense complex matrices, Kronecker products and predicates.
//! * [`network`]: Heisenberg-picture descriptor networks, where each qubit
//!   carries its own evolved Pauli pair and gates touch only their targets.
//! * [`oracle`]: an independent state-vector simulator used to check the
//!   descriptor engine.
//! * [`game`]: the win rule and exact analysis of classical Strategy Cards.
//! * [`protocol`]: the entangled-pair protocol, branch trees and the
//!   redundancy (record copying) demo.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod error;
pub mod game;
pub mod gate;
pub mod linalg;
pub mod network;
pub mod oracle;
pub mod protocol;

pub use error::{Error, Result};
pub use game::{
    classical_ceiling, classical_optimum, mixed_strategy_rate, win_predicate, DeterministicStrategy, QuestionPair, Rate,
};
pub use gate::GateSpec;
pub use linalg::{ComplexMatrix, DEFAULT_TOL};
pub use network::{Descriptor, DescriptorNetwork, LocalityReport, OutcomeSpec};
pub use oracle::StateVector;
pub use protocol::{default_protocol, quantum_value, redundancy_demo, BranchTree, Perspective, QuantumProtocol};

pub use num_complex::Complex64;

/// Largest register either simulator accepts.
pub const MAX_QUBITS: usize = 12;

pub(crate) fn check_qubit_count(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::QubitCount(n));
    }
    Ok(())
}
