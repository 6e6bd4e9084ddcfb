//! Seeded tournament runner.
//!
//! Every round draws from its own ChaCha stream keyed by `(seed, round_id)`, so
//! results do not depend on the order in which rounds are played.

use chsh_core::protocol::{BranchTree, Leaf};
use chsh_core::{classical_ceiling, quantum_value, win_predicate, DeterministicStrategy, QuestionPair, Rate};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize, Serializer};

use crate::audit::causality_audit;
use crate::config::{Mode, Sampling, TournamentConfig};
use crate::error::Result;

/// One played round as recorded at the comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundRecord {
    pub round_id: u64,
    pub qa: bool,
    pub qb: bool,
    pub aa: bool,
    pub ab: bool,
    pub win: bool,
    /// Measure of the sampled leaf in quantum mode, 1 otherwise.
    pub leaf_measure: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairStats {
    pub qa: u8,
    pub qb: u8,
    pub count: u64,
    pub wins: u64,
    #[serde(serialize_with = "nine_dp_opt")]
    pub rate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TournamentReport {
    pub total_rounds: u64,
    pub wins: u64,
    #[serde(serialize_with = "nine_dp")]
    pub win_rate: f64,
    pub per_pair: Vec<PairStats>,
    #[serde(serialize_with = "nine_dp")]
    pub classical_ceiling: f64,
    #[serde(serialize_with = "nine_dp")]
    pub quantum_value: f64,
    pub seed: u64,
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy: Option<String>,
    pub sampling: Sampling,
    /// Win counts are rounded expectations rather than samples.
    pub analytic: bool,
    pub isolation: bool,
    pub isolation_margin_light_minutes: f64,
    pub bell_violating_under_isolation: bool,
}

#[derive(Debug, Clone)]
pub struct Tournament {
    pub report: TournamentReport,
    /// Empty under exact-measure sampling.
    pub records: Vec<RoundRecord>,
}

pub(crate) fn round9(x: f64) -> f64 {
    (x * 1e9).round() / 1e9
}

fn nine_dp<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(round9(*x))
}

fn nine_dp_opt<S: Serializer>(x: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_some(&round9(*v)),
        None => s.serialize_none(),
    }
}

/// Generator for one round.
pub fn round_rng(seed: u64, round_id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(round_id);
    rng
}

enum Player {
    Classical(DeterministicStrategy),
    Mixed { weights: [Rate; 16], cumulative: [f64; 16] },
    Quantum { trees: Vec<BranchTree> },
}

impl Player {
    fn new(mode: &Mode) -> Result<Self> {
        Ok(match mode {
            Mode::Classical(s) => Player::Classical(*s),
            Mode::Mixed(w) => {
                let mut acc = Rate::from_integer(0);
                let cumulative = std::array::from_fn(|i| {
                    acc += w[i];
                    ratio_to_f64(acc)
                });
                Player::Mixed { weights: *w, cumulative }
            }
            Mode::Quantum(p) => Player::Quantum {
                trees: QuestionPair::ALL.iter().map(|&q| p.branch_tree(q)).collect::<std::result::Result<_, _>>()?,
            },
        })
    }

    /// Answers and leaf measure for one round.
    fn answer(&self, q: QuestionPair, rng: &mut ChaCha8Rng) -> (bool, bool, f64) {
        match self {
            Player::Classical(s) => (s.alice(q.qa), s.bob(q.qb), 1.0),
            Player::Mixed { weights, cumulative } => {
                let u: f64 = rng.gen();
                let idx = cumulative.iter().position(|&c| u < c).unwrap_or_else(|| {
                    weights.iter().rposition(|w| *w > Rate::from_integer(0)).expect("valid mixture")
                });
                let s = DeterministicStrategy::from_index(idx as u8);
                (s.alice(q.qa), s.bob(q.qb), 1.0)
            }
            Player::Quantum { trees } => {
                let leaves: Vec<&Leaf> = trees[q.index()].leaves().collect();
                let u: f64 = rng.gen();
                let mut acc = 0.0;
                let leaf = leaves
                    .iter()
                    .find(|l| {
                        acc += l.measure;
                        u < acc
                    })
                    .or_else(|| leaves.iter().rev().find(|l| l.measure > 0.0))
                    .expect("leaf measures sum to one");
                (leaf.alice, leaf.bob, leaf.measure)
            }
        }
    }

    /// Analytic probability of winning question pair `q`.
    fn win_probability(&self, q: QuestionPair) -> f64 {
        match self {
            Player::Classical(s) => f64::from(u8::from(s.wins(q))),
            Player::Mixed { weights, .. } => ratio_to_f64(
                DeterministicStrategy::all().zip(weights).filter(|(s, _)| s.wins(q)).map(|(_, w)| *w).sum::<Rate>(),
            ),
            Player::Quantum { trees } => trees[q.index()].win_measure(),
        }
    }
}

fn ratio_to_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn sample_questions(rng: &mut ChaCha8Rng) -> QuestionPair {
    QuestionPair::new(rng.gen(), rng.gen())
}

/// Plays the tournament without touching the filesystem.
pub fn play(cfg: &TournamentConfig) -> Result<Tournament> {
    cfg.validate()?;
    let audit = causality_audit(&cfg.geometry)?;
    let player = Player::new(&cfg.mode)?;
    let mut counts = [0u64; 4];
    let mut wins = [0u64; 4];
    let mut records = Vec::new();

    match cfg.sampling {
        Sampling::MonteCarlo => {
            records.reserve(cfg.rounds as usize);
            for round_id in 0..cfg.rounds {
                let mut rng = round_rng(cfg.seed, round_id);
                let q = sample_questions(&mut rng);
                let (aa, ab, leaf_measure) = player.answer(q, &mut rng);
                let win = win_predicate(q, aa, ab);
                counts[q.index()] += 1;
                wins[q.index()] += u64::from(win);
                records.push(RoundRecord { round_id, qa: q.qa, qb: q.qb, aa, ab, win, leaf_measure });
            }
        }
        Sampling::ExactMeasure => {
            for round_id in 0..cfg.rounds {
                counts[sample_questions(&mut round_rng(cfg.seed, round_id)).index()] += 1;
            }
            for q in QuestionPair::ALL {
                wins[q.index()] = (counts[q.index()] as f64 * player.win_probability(q)).round() as u64;
            }
        }
    }

    let analytic = cfg.sampling == Sampling::ExactMeasure;
    let per_pair = QuestionPair::ALL
        .iter()
        .map(|&q| {
            let (count, w) = (counts[q.index()], wins[q.index()]);
            let rate =
                if analytic { Some(player.win_probability(q)) } else { (count > 0).then(|| w as f64 / count as f64) };
            PairStats { qa: u8::from(q.qa), qb: u8::from(q.qb), count, wins: w, rate }
        })
        .collect();
    let total_wins: u64 = wins.iter().sum();
    let win_rate = total_wins as f64 / cfg.rounds as f64;
    let ceiling = ratio_to_f64(classical_ceiling());
    let report = TournamentReport {
        total_rounds: cfg.rounds,
        wins: total_wins,
        win_rate,
        per_pair,
        classical_ceiling: ceiling,
        quantum_value: quantum_value(),
        seed: cfg.seed,
        mode: cfg.mode.name().to_string(),
        strategy: match &cfg.mode {
            Mode::Classical(s) => Some(s.to_string()),
            _ => None,
        },
        sampling: cfg.sampling,
        analytic,
        isolation: audit.isolated,
        isolation_margin_light_minutes: audit.margin_light_minutes,
        bell_violating_under_isolation: matches!(cfg.mode, Mode::Quantum(_)) && audit.isolated && win_rate > ceiling,
    };
    Ok(Tournament { report, records })
}

/// Plays the tournament and, when an output path is configured, writes the
/// summary and the per-round table there.
pub fn run_tournament(cfg: &TournamentConfig) -> Result<TournamentReport> {
    let t = play(cfg)?;
    if let Some(dir) = &cfg.output_path {
        crate::report::write_report(&t.report, &t.records, dir)?;
    }
    Ok(t.report)
}
