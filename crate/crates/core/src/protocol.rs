//! The entangled-pair protocol, its branch trees and the redundancy demo.
//!
//! Alice holds qubit 0 and Bob qubit 1. A round prepares `|Φ+⟩` (H on Alice,
//! CNOT Alice→Bob), each player applies `RotY` at the angle selected by their
//! question, and the z-basis outcome bit is the answer.

use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};

use crate::error::{Error, Result};
use crate::game::{win_predicate, QuestionPair};
use crate::gate::GateSpec;
use crate::network::{DescriptorNetwork, OutcomeSpec};
use crate::oracle::StateVector;

pub const ALICE: usize = 0;
pub const BOB: usize = 1;

/// Tolerance for the protocol's construction-time check.
pub const PROTOCOL_TOL: f64 = 1e-9;

/// Optimal quantum win probability, `cos²(π/8) = (2 + √2) / 4`.
pub fn quantum_value() -> f64 {
    (2.0 + SQRT_2) / 4.0
}

pub const BELL_PREP: [GateSpec; 2] = [GateSpec::H(ALICE), GateSpec::Cnot { control: ALICE, target: BOB }];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumProtocol {
    theta_a: [f64; 2],
    theta_b: [f64; 2],
}

impl QuantumProtocol {
    /// Builds a protocol and checks with the state-vector oracle that every
    /// question pair is won with the optimal probability.
    pub fn new(theta_a: [f64; 2], theta_b: [f64; 2]) -> Result<Self> {
        if theta_a.iter().chain(&theta_b).any(|t| !t.is_finite()) {
            return Err(Error::NonFiniteAngle);
        }
        let p = Self { theta_a, theta_b };
        for q in QuestionPair::ALL {
            let got = p.oracle_win_probability(q)?;
            if (got - quantum_value()).abs() > PROTOCOL_TOL {
                return Err(Error::ProtocolVerification { qa: u8::from(q.qa), qb: u8::from(q.qb), got });
            }
        }
        Ok(p)
    }

    /// Alice at `0, π/2`; Bob at `π/4, -π/4`.
    pub fn canonical() -> Result<Self> {
        Self::new([0.0, FRAC_PI_2], [FRAC_PI_4, -FRAC_PI_4])
    }

    /// Angles without the optimality check, for exploring other settings.
    pub fn unchecked(theta_a: [f64; 2], theta_b: [f64; 2]) -> Self {
        Self { theta_a, theta_b }
    }

    pub fn theta_a(&self) -> [f64; 2] {
        self.theta_a
    }

    pub fn theta_b(&self) -> [f64; 2] {
        self.theta_b
    }

    fn rotations(&self, q: QuestionPair) -> [GateSpec; 2] {
        [
            GateSpec::RotY { qubit: ALICE, theta: self.theta_a[usize::from(q.qa)] },
            GateSpec::RotY { qubit: BOB, theta: self.theta_b[usize::from(q.qb)] },
        ]
    }

    /// Full round circuit: Bell preparation, then Alice's and Bob's rotations.
    pub fn circuit(&self, q: QuestionPair) -> [GateSpec; 4] {
        let [ra, rb] = self.rotations(q);
        [BELL_PREP[0], BELL_PREP[1], ra, rb]
    }

    /// Win probability for `q` computed by the state-vector oracle.
    pub fn oracle_win_probability(&self, q: QuestionPair) -> Result<f64> {
        let state = StateVector::run(2, &self.circuit(q))?;
        let mut total = 0.0;
        for (a, b) in ANSWERS {
            if win_predicate(q, a, b) {
                total += state.outcome_probability(&answer_outcomes(a, b))?;
            }
        }
        Ok(total)
    }

    /// Oracle win probability averaged over the four question pairs.
    pub fn oracle_average_win_probability(&self) -> Result<f64> {
        let mut sum = 0.0;
        for q in QuestionPair::ALL {
            sum += self.oracle_win_probability(q)?;
        }
        Ok(sum / 4.0)
    }

    /// The round's descriptor network. The two local rotations are applied
    /// Alice first; the opposite order is checked to give the same unitary.
    pub fn build_round_network(&self, q: QuestionPair) -> Result<DescriptorNetwork> {
        let [ra, rb] = self.rotations(q);
        let mut net = DescriptorNetwork::from_circuit(2, &BELL_PREP)?;
        let mut swapped = net.clone();
        net.apply_gate(&ra)?;
        net.apply_gate(&rb)?;
        swapped.apply_gate(&rb)?;
        swapped.apply_gate(&ra)?;
        let gap = net.cumulative_unitary().frobenius_distance(swapped.cumulative_unitary())?;
        assert!(gap <= crate::linalg::DEFAULT_TOL, "local rotations failed to commute: {gap}");
        Ok(net)
    }

    /// Win probability for `q` read off the descriptor network.
    pub fn win_probability(&self, q: QuestionPair) -> Result<f64> {
        let net = self.build_round_network(q)?;
        let mut total = 0.0;
        for (a, b) in ANSWERS {
            if win_predicate(q, a, b) {
                total += net.joint_measure(&answer_outcomes(a, b))?;
            }
        }
        Ok(total)
    }

    pub fn branch_tree(&self, q: QuestionPair) -> Result<BranchTree> {
        self.branch_tree_from(q, Perspective::Alice)
    }

    /// Two-level branching as experienced by one player: first their own
    /// outcome, then the partner's outcome read at the comparison event.
    pub fn branch_tree_from(&self, q: QuestionPair, perspective: Perspective) -> Result<BranchTree> {
        let net = self.build_round_network(q)?;
        let (own, other) = match perspective {
            Perspective::Alice => (ALICE, BOB),
            Perspective::Bob => (BOB, ALICE),
        };
        let mut first = [FirstBranch::default(); 2];
        for (own_bit, slot) in first.iter_mut().enumerate() {
            let given = OutcomeSpec::new(own, own_bit as u8);
            let measure = net.branch_measure(given)?;
            let mut second = [Leaf::default(); 2];
            for (other_bit, leaf) in second.iter_mut().enumerate() {
                let then = OutcomeSpec::new(other, other_bit as u8);
                let conditional = net.conditional_measure(given, then)?;
                let (alice, bob) = match perspective {
                    Perspective::Alice => (own_bit == 1, other_bit == 1),
                    Perspective::Bob => (other_bit == 1, own_bit == 1),
                };
                *leaf =
                    Leaf { alice, bob, conditional, measure: measure * conditional, win: win_predicate(q, alice, bob) };
            }
            *slot = FirstBranch { outcome: own_bit as u8, measure, second };
        }
        Ok(BranchTree { question: q, perspective, first })
    }
}

const ANSWERS: [(bool, bool); 4] = [(false, false), (false, true), (true, false), (true, true)];

fn answer_outcomes(alice: bool, bob: bool) -> [OutcomeSpec; 2] {
    [OutcomeSpec::new(ALICE, u8::from(alice)), OutcomeSpec::new(BOB, u8::from(bob))]
}

/// The protocol with the canonical CHSH angles, verified at construction.
pub fn default_protocol() -> Result<QuantumProtocol> {
    QuantumProtocol::canonical()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Perspective {
    Alice,
    Bob,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Leaf {
    pub alice: bool,
    pub bob: bool,
    /// Share of the parent branch.
    pub conditional: f64,
    /// Absolute measure.
    pub measure: f64,
    pub win: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FirstBranch {
    /// The perspective player's own outcome.
    pub outcome: u8,
    pub measure: f64,
    pub second: [Leaf; 2],
}

/// Root of measure 1 splitting on the perspective player's outcome, each
/// branch splitting again on the partner's outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchTree {
    pub question: QuestionPair,
    pub perspective: Perspective,
    pub first: [FirstBranch; 2],
}

impl BranchTree {
    pub fn leaves(&self) -> impl Iterator<Item = &Leaf> + '_ {
        self.first.iter().flat_map(|b| b.second.iter())
    }

    /// Measure of the `(alice, bob)` leaf.
    pub fn leaf(&self, alice: bool, bob: bool) -> &Leaf {
        self.leaves().find(|l| l.alice == alice && l.bob == bob).expect("all four leaves exist")
    }

    pub fn win_measure(&self) -> f64 {
        self.leaves().filter(|l| l.win).map(|l| l.measure).sum()
    }

    /// Largest gap between a node's measure and the sum of its children.
    pub fn conservation_defect(&self) -> f64 {
        let root: f64 = self.first.iter().map(|b| b.measure).sum();
        self.first
            .iter()
            .map(|b| (b.measure - b.second.iter().map(|l| l.measure).sum::<f64>()).abs())
            .fold((root - 1.0).abs(), f64::max)
    }
}

pub const MAX_WITNESSES: usize = 10;

/// Interference visibility of qubit 0 after its value is copied into `witnesses`
/// record qubits: H, CNOT to each witness, H again, then `|m(0) - m(1)|`.
pub fn redundancy_demo(witnesses: usize) -> Result<f64> {
    if witnesses > MAX_WITNESSES {
        return Err(Error::WitnessCount(witnesses));
    }
    let mut net = DescriptorNetwork::new(1 + witnesses)?;
    net.apply_gate(&GateSpec::H(0))?;
    for w in 1..=witnesses {
        net.apply_gate(&GateSpec::Cnot { control: 0, target: w })?;
    }
    net.apply_gate(&GateSpec::H(0))?;
    let m0 = net.branch_measure(OutcomeSpec::new(0, 0))?;
    let m1 = net.branch_measure(OutcomeSpec::new(0, 1))?;
    Ok((m0 - m1).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn q(a: u8, b: u8) -> QuestionPair {
        QuestionPair::new(a == 1, b == 1)
    }

    #[test]
    fn canonical_protocol_is_optimal() {
        let p = default_protocol().unwrap();
        for pair in QuestionPair::ALL {
            let oracle = p.oracle_win_probability(pair).unwrap();
            let descriptors = p.win_probability(pair).unwrap();
            assert!((oracle - 0.853_553_390_6).abs() < 1e-9, "{pair}: {oracle}");
            assert!((descriptors - oracle).abs() < 1e-9);
        }
        assert!((p.oracle_average_win_probability().unwrap() - quantum_value()).abs() < 1e-12);
    }

    #[test]
    fn sign_drift_is_rejected() {
        // Bob's angles swapped: (1,1) is then won with sin²(π/8) only.
        let err = QuantumProtocol::new([0.0, FRAC_PI_2], [-FRAC_PI_4, FRAC_PI_4]).unwrap_err();
        assert!(matches!(err, Error::ProtocolVerification { .. }));
        // Halved angles.
        assert!(QuantumProtocol::new([0.0, FRAC_PI_4], [FRAC_PI_4 / 2.0, -FRAC_PI_4 / 2.0]).is_err());
        assert_eq!(QuantumProtocol::new([f64::NAN, 0.0], [0.0, 0.0]), Err(Error::NonFiniteAngle));
    }

    #[test]
    fn round_network_marginals() {
        let p = default_protocol().unwrap();
        for pair in QuestionPair::ALL {
            let net = p.build_round_network(pair).unwrap();
            assert!((net.branch_measure(OutcomeSpec::new(ALICE, 0)).unwrap() - 0.5).abs() < 1e-10);
            assert!((net.branch_measure(OutcomeSpec::new(BOB, 0)).unwrap() - 0.5).abs() < 1e-10);
            let after_prep: Vec<_> = net.gate_log()[2..].iter().collect();
            assert!(after_prep.iter().all(|g| g.targets().len() == 1));
        }
    }

    #[test]
    fn comparison_skews_the_measure() {
        let p = default_protocol().unwrap();
        let win = quantum_value();
        let net = p.build_round_network(q(0, 0)).unwrap();
        let a0 = OutcomeSpec::new(ALICE, 0);
        assert!((net.conditional_measure(a0, OutcomeSpec::new(BOB, 0)).unwrap() - win).abs() < 1e-9);
        assert!((net.conditional_measure(a0, OutcomeSpec::new(BOB, 1)).unwrap() - (1.0 - win)).abs() < 1e-9);
        let net = p.build_round_network(q(1, 1)).unwrap();
        assert!((net.conditional_measure(a0, OutcomeSpec::new(BOB, 1)).unwrap() - win).abs() < 1e-9);
    }

    #[test]
    fn branch_trees() {
        let p = default_protocol().unwrap();
        let t = p.branch_tree(q(0, 1)).unwrap();
        assert!((t.first[0].second[0].conditional - quantum_value()).abs() < 1e-9);

        let t = p.branch_tree(q(1, 1)).unwrap();
        let winners: Vec<_> = t.leaves().filter(|l| l.win).map(|l| (l.alice, l.bob)).collect();
        assert_eq!(winners, [(false, true), (true, false)]);
        assert!((t.win_measure() - quantum_value()).abs() < 1e-9);
        // 0.5 × cos²(π/8) and 0.5 × sin²(π/8)
        assert!((t.leaf(false, true).measure - 0.426_776_695_3).abs() < 1e-9);
        assert!((t.leaf(true, true).measure - 0.073_223_304_7).abs() < 1e-9);

        for pair in QuestionPair::ALL {
            let tree = p.branch_tree(pair).unwrap();
            let total: f64 = tree.leaves().map(|l| l.measure).sum();
            assert!((total - 1.0).abs() < 1e-9);
            assert!(tree.conservation_defect() < 1e-9);
        }
    }

    #[test]
    fn perspectives_agree() {
        let p = default_protocol().unwrap();
        for pair in QuestionPair::ALL {
            let alice = p.branch_tree_from(pair, Perspective::Alice).unwrap();
            let bob = p.branch_tree_from(pair, Perspective::Bob).unwrap();
            for l in alice.leaves() {
                assert!((l.measure - bob.leaf(l.alice, l.bob).measure).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn redundancy() {
        assert!((redundancy_demo(0).unwrap() - 1.0).abs() < 1e-9);
        assert!(redundancy_demo(1).unwrap() < 1e-9);
        assert!(redundancy_demo(5).unwrap() < 1e-9);
        assert_eq!(redundancy_demo(11), Err(Error::WitnessCount(11)));
    }

    #[test]
    fn redundancy_matches_oracle() {
        for m in 0..=4 {
            let mut circuit = alloc::vec![GateSpec::H(0)];
            circuit.extend((1..=m).map(|w| GateSpec::Cnot { control: 0, target: w }));
            circuit.push(GateSpec::H(0));
            let s = StateVector::run(1 + m, &circuit).unwrap();
            let vis = (s.outcome_probability(&[OutcomeSpec::new(0, 0)]).unwrap()
                - s.outcome_probability(&[OutcomeSpec::new(0, 1)]).unwrap())
            .abs();
            assert!((redundancy_demo(m).unwrap() - vis).abs() < 1e-9);
        }
    }
}
