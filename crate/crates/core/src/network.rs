//! Heisenberg-picture descriptor networks.
//!
//! Every qubit owns a [`Descriptor`]: the pair `(qx, qz)` of its evolved
//! Pauli observables, `qx = U†·X_k·U` and `qz = U†·Z_k·U`, where `U` is the
//! network's cumulative unitary and `X_k`, `Z_k` are the Paulis embedded at
//! slot `k`. The reference state stays `|0…0⟩` forever, so every measure is a
//! `(0, 0)` matrix entry.
//!
//! Applying a gate recomputes only the descriptors of the qubits it acts on.
//! The stored matrices of every other qubit are left untouched (and shared
//! between network values), which is exact: the embedded gate commutes with
//! the initial Paulis of the qubits it does not act on.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gate::{embed_at, pauli_x, pauli_z, GateSpec};
use crate::linalg::{ComplexMatrix, DEFAULT_TOL, I, ONE, ZERO};

/// Measures at or below this are treated as impossible branches when conditioning.
pub const ZERO_MEASURE: f64 = 1e-12;

/// A single qubit's readout: outcome 0 is the `+1` eigenvalue of `qz`, 1 is `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OutcomeSpec {
    pub qubit: usize,
    pub outcome: u8,
}

impl OutcomeSpec {
    pub const fn new(qubit: usize, outcome: u8) -> Self {
        Self { qubit, outcome }
    }

    fn sign(&self) -> f64 {
        if self.outcome == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

pub(crate) fn check_outcomes(n: usize, outcomes: &[OutcomeSpec]) -> Result<()> {
    for (i, o) in outcomes.iter().enumerate() {
        if o.qubit >= n {
            return Err(Error::QubitOutOfRange { qubit: o.qubit, n });
        }
        if o.outcome > 1 {
            return Err(Error::InvalidOutcome(o.outcome));
        }
        if outcomes[..i].iter().any(|p| p.qubit == o.qubit) {
            return Err(Error::DuplicateQubit(o.qubit));
        }
    }
    Ok(())
}

/// Local descriptor of one qubit. `qy` is derived as `i·qx·qz`.
#[derive(Debug, Clone)]
pub struct Descriptor {
    qubit: usize,
    qx: Arc<ComplexMatrix>,
    qz: Arc<ComplexMatrix>,
}

impl Descriptor {
    pub fn qubit(&self) -> usize {
        self.qubit
    }

    pub fn qx(&self) -> &ComplexMatrix {
        &self.qx
    }

    pub fn qz(&self) -> &ComplexMatrix {
        &self.qz
    }

    pub fn qy(&self) -> ComplexMatrix {
        self.qx.matmul(&self.qz).expect("descriptor components share a dimension").scale(I)
    }

    /// Bit-for-bit equality of the stored components.
    pub fn bitwise_eq(&self, other: &Self) -> bool {
        self.qubit == other.qubit && self.qx.bitwise_eq(&other.qx) && self.qz.bitwise_eq(&other.qz)
    }
}

/// The separable description of an `n`-qubit register.
#[derive(Debug, Clone)]
pub struct DescriptorNetwork {
    n: usize,
    descriptors: Vec<Descriptor>,
    unitary: ComplexMatrix,
    gate_log: Vec<GateSpec>,
}

impl DescriptorNetwork {
    pub fn new(n: usize) -> Result<Self> {
        crate::check_qubit_count(n)?;
        let descriptors = (0..n)
            .map(|k| Descriptor { qubit: k, qx: Arc::new(initial_x(n, k)), qz: Arc::new(initial_z(n, k)) })
            .collect();
        Ok(Self { n, descriptors, unitary: ComplexMatrix::identity(1 << n)?, gate_log: Vec::new() })
    }

    /// Runs a circuit from `|0…0⟩`.
    pub fn from_circuit(n: usize, circuit: &[GateSpec]) -> Result<Self> {
        let mut net = Self::new(n)?;
        for g in circuit {
            net.apply_gate(g)?;
        }
        Ok(net)
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn descriptor(&self, qubit: usize) -> Result<&Descriptor> {
        self.descriptors.get(qubit).ok_or(Error::QubitOutOfRange { qubit, n: self.n })
    }

    pub fn descriptors(&self) -> &[Descriptor] {
        &self.descriptors
    }

    /// Cumulative unitary, kept for audits only.
    pub fn cumulative_unitary(&self) -> &ComplexMatrix {
        &self.unitary
    }

    pub fn gate_log(&self) -> &[GateSpec] {
        &self.gate_log
    }

    pub fn apply_gate(&mut self, gate: &GateSpec) -> Result<()> {
        let embedded = gate.embed(self.n)?;
        self.unitary = embedded.matmul(&self.unitary)?;
        for q in gate.targets() {
            let (qx, qz) = self.recompute(q)?;
            let d = &mut self.descriptors[q];
            d.qx = Arc::new(qx);
            d.qz = Arc::new(qz);
        }
        self.gate_log.push(*gate);
        Ok(())
    }

    /// Value-semantics variant of [`apply_gate`](Self::apply_gate).
    pub fn with_gate(&self, gate: &GateSpec) -> Result<Self> {
        let mut next = self.clone();
        next.apply_gate(gate)?;
        Ok(next)
    }

    /// `(U†·X_k·U, U†·Z_k·U)` from the cumulative unitary.
    pub fn recompute(&self, qubit: usize) -> Result<(ComplexMatrix, ComplexMatrix)> {
        if qubit >= self.n {
            return Err(Error::QubitOutOfRange { qubit, n: self.n });
        }
        let u = &self.unitary;
        let ud = u.dagger();
        let qx = ud.matmul(&initial_x(self.n, qubit).matmul(u)?)?;
        let qz = ud.matmul(&initial_z(self.n, qubit).matmul(u)?)?;
        Ok((qx, qz))
    }

    /// Largest Frobenius distance between stored and recomputed descriptor components.
    pub fn audit_distance(&self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for d in &self.descriptors {
            let (qx, qz) = self.recompute(d.qubit)?;
            worst = worst.max(qx.frobenius_distance(&d.qx)?).max(qz.frobenius_distance(&d.qz)?);
        }
        Ok(worst)
    }

    /// Largest violation of the Pauli algebra across all descriptors: hermiticity,
    /// squares to identity, own-pair anticommutation and cross-qubit commutation.
    pub fn algebra_violation(&self) -> Result<f64> {
        let id = ComplexMatrix::identity(1 << self.n)?;
        let zero = ComplexMatrix::zeros(1 << self.n)?;
        let mut worst: f64 = 0.0;
        let mut bump = |m: &ComplexMatrix, target: &ComplexMatrix| -> Result<()> {
            worst = worst.max(m.frobenius_distance(target)?);
            Ok(())
        };
        for d in &self.descriptors {
            for p in [&*d.qx, &*d.qz] {
                bump(p, &p.dagger())?;
                bump(&p.matmul(p)?, &id)?;
            }
            bump(&anticommutator(&d.qx, &d.qz)?, &zero)?;
        }
        for (i, a) in self.descriptors.iter().enumerate() {
            for b in &self.descriptors[i + 1..] {
                for pa in [&*a.qx, &*a.qz] {
                    for pb in [&*b.qx, &*b.qz] {
                        bump(&commutator(pa, pb)?, &zero)?;
                    }
                }
            }
        }
        Ok(worst)
    }

    /// Measure of the branch in which `o.qubit` reads `o.outcome`:
    /// `⟨0…0| (I ± qz) / 2 |0…0⟩`.
    pub fn branch_measure(&self, o: OutcomeSpec) -> Result<f64> {
        check_outcomes(self.n, &[o])?;
        let z00 = self.descriptors[o.qubit].qz[(0, 0)].re;
        Ok(clamp_unit((1.0 + o.sign() * z00) / 2.0))
    }

    /// Measure of the joint record `⟨0…0| Π_k P_k |0…0⟩` over distinct qubits.
    pub fn joint_measure(&self, outcomes: &[OutcomeSpec]) -> Result<f64> {
        check_outcomes(self.n, outcomes)?;
        let forward = self.projected_amplitude(outcomes.iter())?;
        let backward = self.projected_amplitude(outcomes.iter().rev())?;
        debug_assert!(
            (forward - backward).norm() < DEFAULT_TOL,
            "projector order changed the joint measure: {forward} vs {backward}"
        );
        Ok(clamp_unit(forward.re))
    }

    /// Measure of `then` within the branch selected by `given`.
    pub fn conditional_measure(&self, given: OutcomeSpec, then: OutcomeSpec) -> Result<f64> {
        check_outcomes(self.n, &[given, then])?;
        let base = self.branch_measure(given)?;
        if base <= ZERO_MEASURE {
            return Err(Error::ZeroMeasureBranch { qubit: given.qubit, outcome: given.outcome });
        }
        Ok(self.joint_measure(&[given, then])? / base)
    }

    /// Applies `remote_ops` to a copy of the network and reports what happened to
    /// the watched qubit's descriptor.
    pub fn locality_report(&self, watched: usize, remote_ops: &[GateSpec]) -> Result<LocalityReport> {
        if watched >= self.n {
            return Err(Error::QubitOutOfRange { qubit: watched, n: self.n });
        }
        for op in remote_ops {
            op.validate(self.n)?;
            if op.touches(watched) {
                return Err(Error::WatchedQubitTouched(watched));
            }
        }
        let snapshot = self.descriptors[watched].clone();
        let mut evolved = self.clone();
        for op in remote_ops {
            evolved.apply_gate(op)?;
        }
        let stored = &evolved.descriptors[watched];
        let (qx, qz) = evolved.recompute(watched)?;
        Ok(LocalityReport {
            stored_unchanged: stored.bitwise_eq(&snapshot),
            recompute_distance: qx.frobenius_distance(&stored.qx)?.max(qz.frobenius_distance(&stored.qz)?),
        })
    }

    /// `true` iff the watched descriptor is bit-for-bit unchanged by `remote_ops`
    /// and agrees with the cumulative-unitary recomputation within [`DEFAULT_TOL`].
    pub fn locality_audit(&self, watched: usize, remote_ops: &[GateSpec]) -> Result<bool> {
        let report = self.locality_report(watched, remote_ops)?;
        Ok(report.stored_unchanged && report.recompute_distance <= DEFAULT_TOL)
    }

    // ⟨0| P_1 ⋯ P_m |0⟩ evaluated right to left on the reference vector.
    fn projected_amplitude<'a>(&self, outcomes: impl DoubleEndedIterator<Item = &'a OutcomeSpec>) -> Result<Complex64> {
        let mut v = vec![ZERO; 1 << self.n];
        v[0] = ONE;
        for o in outcomes.rev() {
            let zv = self.descriptors[o.qubit].qz.apply(&v)?;
            let s = o.sign();
            for (x, z) in v.iter_mut().zip(zv) {
                *x = (*x + z * s) * 0.5;
            }
        }
        Ok(v[0])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalityReport {
    /// Stored components are bit-for-bit identical to the snapshot.
    pub stored_unchanged: bool,
    /// Frobenius distance between stored and recomputed components.
    pub recompute_distance: f64,
}

fn initial_x(n: usize, k: usize) -> ComplexMatrix {
    embed_at(n, &[(k, pauli_x())])
}

fn initial_z(n: usize, k: usize) -> ComplexMatrix {
    embed_at(n, &[(k, pauli_z())])
}

fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.matmul(b)?.sub(&b.matmul(a)?)
}

fn anticommutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.matmul(b)?.add(&b.matmul(a)?)
}

fn clamp_unit(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::identity2;
    use crate::linalg::tensor_chain;
    use crate::oracle::StateVector;

    const BELL: [GateSpec; 2] = [GateSpec::H(0), GateSpec::Cnot { control: 0, target: 1 }];

    fn o(qubit: usize, outcome: u8) -> OutcomeSpec {
        OutcomeSpec::new(qubit, outcome)
    }

    #[test]
    fn init_ranges() {
        assert!(matches!(DescriptorNetwork::new(0), Err(Error::QubitCount(0))));
        assert!(matches!(DescriptorNetwork::new(13), Err(Error::QubitCount(13))));
    }

    #[test]
    fn fresh_network() {
        let one = DescriptorNetwork::new(1).unwrap();
        assert_eq!(one.branch_measure(o(0, 0)).unwrap(), 1.0);
        assert_eq!(one.branch_measure(o(0, 1)).unwrap(), 0.0);

        let two = DescriptorNetwork::new(2).unwrap();
        let expected = tensor_chain([&identity2(), &pauli_z()]);
        assert_eq!(two.descriptor(1).unwrap().qz(), &expected);

        let three = DescriptorNetwork::new(3).unwrap();
        assert!(three.algebra_violation().unwrap() < 1e-15);
        for k in 0..3 {
            assert_eq!(three.branch_measure(o(k, 0)).unwrap(), 1.0);
        }
    }

    #[test]
    fn single_qubit_gates() {
        let flipped = DescriptorNetwork::from_circuit(1, &[GateSpec::X(0)]).unwrap();
        assert_eq!(flipped.branch_measure(o(0, 1)).unwrap(), 1.0);
        let plus = DescriptorNetwork::from_circuit(1, &[GateSpec::H(0)]).unwrap();
        assert!((plus.branch_measure(o(0, 0)).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rotation_measure_matches_oracle() {
        let circuit = [GateSpec::RotY { qubit: 0, theta: 2.0 * core::f64::consts::PI / 3.0 }];
        let net = DescriptorNetwork::from_circuit(1, &circuit).unwrap();
        let oracle = StateVector::run(1, &circuit).unwrap().outcome_probability(&[o(0, 0)]).unwrap();
        // cos²(π/3)
        assert!((oracle - 0.25).abs() < 1e-12);
        assert!((net.branch_measure(o(0, 0)).unwrap() - oracle).abs() < 1e-10);
    }

    #[test]
    fn bell_pair_measures() {
        let net = DescriptorNetwork::from_circuit(2, &BELL).unwrap();
        let sv = StateVector::run(2, &BELL).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                let outs = [o(0, a), o(1, b)];
                let want = sv.outcome_probability(&outs).unwrap();
                assert!((net.joint_measure(&outs).unwrap() - want).abs() < 1e-12);
            }
        }
        assert!((net.joint_measure(&[o(0, 0), o(1, 0)]).unwrap() - 0.5).abs() < 1e-12);
        assert!(net.joint_measure(&[o(0, 0), o(1, 1)]).unwrap() < 1e-12);
        assert!((net.branch_measure(o(0, 0)).unwrap() - 0.5).abs() < 1e-12);
        assert!((net.conditional_measure(o(0, 0), o(1, 0)).unwrap() - 1.0).abs() < 1e-12);
        let total: f64 = (0..4).map(|i| net.joint_measure(&[o(0, i >> 1), o(1, i & 1)]).unwrap()).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn joint_measure_errors() {
        let net = DescriptorNetwork::from_circuit(2, &BELL).unwrap();
        assert!(matches!(net.joint_measure(&[o(1, 0), o(1, 1)]), Err(Error::DuplicateQubit(1))));
        assert_eq!(net.joint_measure(&[]).unwrap(), 1.0);
    }

    #[test]
    fn conditioning_on_impossible_branch() {
        let net = DescriptorNetwork::new(2).unwrap();
        assert!(matches!(
            net.conditional_measure(o(0, 1), o(1, 0)),
            Err(Error::ZeroMeasureBranch { qubit: 0, outcome: 1 })
        ));
        assert!(matches!(net.conditional_measure(o(0, 0), o(0, 0)), Err(Error::DuplicateQubit(0))));
    }

    #[test]
    fn qy_is_derived() {
        let net = DescriptorNetwork::new(2).unwrap();
        let y0 = embed_at(2, &[(0, crate::gate::pauli_y())]);
        assert!(net.descriptor(0).unwrap().qy().frobenius_distance(&y0).unwrap() < 1e-15);
    }

    #[test]
    fn locality_examples() {
        let net = DescriptorNetwork::from_circuit(2, &BELL).unwrap();
        let remote = [GateSpec::RotY { qubit: 1, theta: 1.234 }, GateSpec::X(1)];
        assert!(net.locality_audit(0, &remote).unwrap());
        assert!(net.locality_audit(0, &[]).unwrap());
        assert!(matches!(net.locality_audit(0, &[GateSpec::H(0)]), Err(Error::WatchedQubitTouched(0))));
        assert!(matches!(
            net.locality_audit(1, &[GateSpec::Cnot { control: 0, target: 1 }]),
            Err(Error::WatchedQubitTouched(1))
        ));
    }

    #[test]
    fn untouched_descriptors_are_shared() {
        let net = DescriptorNetwork::from_circuit(3, &BELL).unwrap();
        let next = net.with_gate(&GateSpec::H(2)).unwrap();
        assert!(Arc::ptr_eq(&net.descriptors[0].qx, &next.descriptors[0].qx));
        assert!(!Arc::ptr_eq(&net.descriptors[2].qz, &next.descriptors[2].qz));
        assert_eq!(next.gate_log().len(), 3);
        assert_eq!(net.gate_log().len(), 2);
    }

    #[test]
    fn audit_identity_holds() {
        let circuit = [
            GateSpec::H(0),
            GateSpec::Cnot { control: 0, target: 2 },
            GateSpec::RotY { qubit: 1, theta: 0.4 },
            GateSpec::Cnot { control: 1, target: 0 },
            GateSpec::Y(2),
        ];
        let net = DescriptorNetwork::from_circuit(3, &circuit).unwrap();
        assert!(net.audit_distance().unwrap() < 1e-10);
        assert!(net.algebra_violation().unwrap() < 1e-10);
        assert!(net.cumulative_unitary().is_unitary(1e-10).unwrap());
    }
}
