//! Schrödinger-picture state-vector simulator.
//!
//! This is the reference against which the descriptor engine is checked, so it
//! deliberately shares no gate-application code with it: gates act directly on
//! amplitude pairs instead of through embedded operator matrices. Only the 2×2
//! gate constants are common. Qubit `k` of an `n`-qubit register corresponds to
//! bit `n - 1 - k` of the basis index, matching the Kronecker convention.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::Result;
use crate::gate::GateSpec;
use crate::linalg::{ONE, ZERO};
use crate::network::OutcomeSpec;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩` on `n` qubits.
    pub fn new(n: usize) -> Result<Self> {
        crate::check_qubit_count(n)?;
        let mut amplitudes = vec![ZERO; 1 << n];
        amplitudes[0] = ONE;
        Ok(Self { n, amplitudes })
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.amplitudes.iter().map(|a| a.norm_sqr()).sum())
    }

    fn bit_mask(&self, qubit: usize) -> usize {
        1 << (self.n - 1 - qubit)
    }

    pub fn apply_gate(&mut self, gate: &GateSpec) -> Result<()> {
        gate.validate(self.n)?;
        match *gate {
            GateSpec::Cnot { control, target } => {
                let (cm, tm) = (self.bit_mask(control), self.bit_mask(target));
                for idx in 0..self.amplitudes.len() {
                    if idx & cm != 0 && idx & tm == 0 {
                        self.amplitudes.swap(idx, idx | tm);
                    }
                }
            }
            _ => {
                let q = gate.targets()[0];
                let m = gate.single_qubit_matrix().expect("single-qubit gate");
                let (g00, g01, g10, g11) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
                let mask = self.bit_mask(q);
                for idx in 0..self.amplitudes.len() {
                    if idx & mask == 0 {
                        let (a0, a1) = (self.amplitudes[idx], self.amplitudes[idx | mask]);
                        self.amplitudes[idx] = g00 * a0 + g01 * a1;
                        self.amplitudes[idx | mask] = g10 * a0 + g11 * a1;
                    }
                }
            }
        }
        Ok(())
    }

    /// Value-semantics variant of [`apply_gate`](Self::apply_gate).
    pub fn with_gate(&self, gate: &GateSpec) -> Result<Self> {
        let mut next = self.clone();
        next.apply_gate(gate)?;
        Ok(next)
    }

    pub fn run(n: usize, circuit: &[GateSpec]) -> Result<Self> {
        let mut s = Self::new(n)?;
        for g in circuit {
            s.apply_gate(g)?;
        }
        Ok(s)
    }

    /// Born-rule probability that every listed qubit shows its listed outcome.
    pub fn outcome_probability(&self, outcomes: &[OutcomeSpec]) -> Result<f64> {
        crate::network::check_outcomes(self.n, outcomes)?;
        let wanted: Vec<(usize, usize)> = outcomes
            .iter()
            .map(|o| (self.bit_mask(o.qubit), if o.outcome == 1 { self.bit_mask(o.qubit) } else { 0 }))
            .collect();
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(idx, _)| wanted.iter().all(|&(mask, bit)| idx & mask == bit))
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }
}
