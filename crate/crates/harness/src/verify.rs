//! Randomized checks of the descriptor engine: agreement with the state-vector
//! oracle, and locality of stored descriptors under remote gates.

use chsh_core::{DescriptorNetwork, GateSpec, OutcomeSpec, StateVector};
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;

pub const EQUIVALENCE_TOL: f64 = 1e-9;
pub const LOCALITY_TOL: f64 = 1e-10;
pub const MAX_DEPTH: usize = 20;
pub const MAX_SUITE_QUBITS: usize = 4;

/// A random gate acting only on `qubits` (at least one entry).
pub fn random_gate(rng: &mut impl Rng, qubits: &[usize]) -> GateSpec {
    let pick = |rng: &mut _| *qubits.choose(rng).expect("nonempty qubit set");
    let kinds = if qubits.len() >= 2 { 6 } else { 5 };
    match rng.gen_range(0..kinds) {
        0 => GateSpec::X(pick(rng)),
        1 => GateSpec::Y(pick(rng)),
        2 => GateSpec::Z(pick(rng)),
        3 => GateSpec::H(pick(rng)),
        4 => GateSpec::RotY {
            qubit: pick(rng),
            theta: rng.gen_range(-2.0 * std::f64::consts::PI..2.0 * std::f64::consts::PI),
        },
        _ => {
            let mut pair = qubits.choose_multiple(rng, 2);
            let control = *pair.next().expect("two qubits");
            let target = *pair.next().expect("two qubits");
            GateSpec::Cnot { control, target }
        }
    }
}

pub fn random_circuit(rng: &mut impl Rng, qubits: &[usize], depth: usize) -> Vec<GateSpec> {
    (0..depth).map(|_| random_gate(rng, qubits)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivalenceSummary {
    pub circuits: usize,
    pub comparisons: usize,
    pub max_deviation: f64,
    /// Largest deviation of a completeness sum from 1.
    pub max_normalization_error: f64,
}

impl EquivalenceSummary {
    pub fn passed(&self) -> bool {
        self.max_deviation < EQUIVALENCE_TOL && self.max_normalization_error < EQUIVALENCE_TOL
    }
}

/// Runs `circuits` random circuits (1 to 4 qubits, depth up to 20) through both
/// engines and compares every joint outcome measure on every nonempty qubit subset.
pub fn picture_equivalence(circuits: usize, seed: u64) -> Result<EquivalenceSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut summary = EquivalenceSummary { circuits, comparisons: 0, max_deviation: 0.0, max_normalization_error: 0.0 };
    for _ in 0..circuits {
        let n = rng.gen_range(1..=MAX_SUITE_QUBITS);
        let depth = rng.gen_range(0..=MAX_DEPTH);
        let qubits: Vec<usize> = (0..n).collect();
        let circuit = random_circuit(&mut rng, &qubits, depth);
        let net = DescriptorNetwork::from_circuit(n, &circuit)?;
        let state = StateVector::run(n, &circuit)?;
        for mask in 1u32..(1 << n) {
            let subset: Vec<usize> = (0..n).filter(|q| mask >> q & 1 == 1).collect();
            let mut total = 0.0;
            for bits in 0u32..(1 << subset.len()) {
                let outcomes: Vec<OutcomeSpec> =
                    subset.iter().enumerate().map(|(i, &q)| OutcomeSpec::new(q, (bits >> i & 1) as u8)).collect();
                let heis = net.joint_measure(&outcomes)?;
                let schr = state.outcome_probability(&outcomes)?;
                summary.max_deviation = summary.max_deviation.max((heis - schr).abs());
                summary.comparisons += 1;
                total += heis;
            }
            summary.max_normalization_error = summary.max_normalization_error.max((total - 1.0).abs());
        }
    }
    Ok(summary)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalitySummary {
    pub circuits: usize,
    /// Circuits where the watched descriptor's stored matrices changed at all.
    pub changed: usize,
    pub max_recompute_distance: f64,
}

impl LocalitySummary {
    pub fn passed(&self) -> bool {
        self.changed == 0 && self.max_recompute_distance < LOCALITY_TOL
    }
}

/// For each trial: a random 2–4 qubit network is prepared by an arbitrary
/// circuit, then a depth-20 circuit acting only on qubits other than a random
/// watched qubit is applied.
pub fn locality_suite(circuits: usize, seed: u64) -> Result<LocalitySummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut summary = LocalitySummary { circuits, changed: 0, max_recompute_distance: 0.0 };
    for _ in 0..circuits {
        let n = rng.gen_range(2..=MAX_SUITE_QUBITS);
        let all: Vec<usize> = (0..n).collect();
        let prefix_depth = rng.gen_range(0..=MAX_DEPTH);
        let prefix = random_circuit(&mut rng, &all, prefix_depth);
        let watched = rng.gen_range(0..n);
        let remote_qubits: Vec<usize> = all.iter().copied().filter(|&q| q != watched).collect();
        let remote = random_circuit(&mut rng, &remote_qubits, MAX_DEPTH);
        let net = DescriptorNetwork::from_circuit(n, &prefix)?;
        let report = net.locality_report(watched, &remote)?;
        summary.changed += usize::from(!report.stored_unchanged);
        summary.max_recompute_distance = summary.max_recompute_distance.max(report.recompute_distance);
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_gates_stay_on_their_qubits() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let g = random_gate(&mut rng, &[1, 3]);
            assert!(g.targets().iter().all(|q| *q == 1 || *q == 3));
            g.validate(4).unwrap();
        }
        let single = random_circuit(&mut rng, &[2], 50);
        assert!(single.iter().all(|g| g.targets() == [2]));
    }

    #[test]
    fn small_suites_pass() {
        let eq = picture_equivalence(30, 7).unwrap();
        assert!(eq.passed(), "{eq:?}");
        assert!(eq.comparisons > 30);
        let loc = locality_suite(30, 7).unwrap();
        assert!(loc.passed(), "{loc:?}");
    }
}
