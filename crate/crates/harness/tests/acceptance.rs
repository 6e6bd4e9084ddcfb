//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use chsh_core::protocol::{Perspective, ALICE, BOB};
use chsh_core::{
    classical_optimum, default_protocol, mixed_strategy_rate, quantum_value, redundancy_demo, OutcomeSpec,
    QuantumProtocol, QuestionPair, Rate,
};
use chsh_harness::config::{Mode, Sampling, TournamentConfig};
use chsh_harness::tournament::play;
use chsh_harness::verify::{locality_suite, picture_equivalence};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn within(elapsed: Duration, limit: Duration, detail: String) -> Outcome {
    if elapsed < limit {
        Ok(format!("{detail} in {elapsed:.2?}"))
    } else {
        Err(format!("{detail}, but took {elapsed:.2?} (limit {limit:?})"))
    }
}

fn classical_ceiling_exact() -> Outcome {
    let start = Instant::now();
    let (best, argmax) = classical_optimum();
    let elapsed = start.elapsed();
    if best != Rate::new(3, 4) {
        return Err(format!("optimum is {best}"));
    }
    let perfect = chsh_core::DeterministicStrategy::all().filter(|s| s.win_rate() == Rate::from_integer(1)).count();
    if perfect != 0 {
        return Err(format!("{perfect} cards win every pair"));
    }
    within(
        elapsed,
        Duration::from_millis(1),
        format!("optimum 3/4 over 16 cards, {} attain it, none wins 4/4", argmax.len()),
    )
}

fn mixtures_capped() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = Rate::from_integer(0);
    for _ in 0..1000 {
        let raw: [i64; 16] = std::array::from_fn(|_| rng.gen_range(0..=1000));
        let total: i64 = raw.iter().sum::<i64>().max(1);
        let mut weights: [Rate; 16] = std::array::from_fn(|i| Rate::new(raw[i], total));
        if raw.iter().all(|&x| x == 0) {
            weights[0] = Rate::from_integer(1);
        }
        let rate = mixed_strategy_rate(&weights).map_err(|e| e.to_string())?;
        if rate > Rate::new(3, 4) {
            return Err(format!("mixture reached {rate}"));
        }
        worst = worst.max(rate);
    }
    let uniform = mixed_strategy_rate(&[Rate::new(1, 16); 16]).map_err(|e| e.to_string())?;
    if uniform != Rate::new(1, 2) {
        return Err(format!("uniform mixture gives {uniform}"));
    }
    within(start.elapsed(), Duration::from_secs(1), format!("1000 mixtures, best {worst} <= 3/4, uniform exactly 1/2"))
}

fn per_pair_quantum() -> Outcome {
    let start = Instant::now();
    let p = default_protocol().map_err(|e| e.to_string())?;
    let target = quantum_value();
    let mut worst: f64 = 0.0;
    for q in QuestionPair::ALL {
        let heis = p.win_probability(q).map_err(|e| e.to_string())?;
        let schr = p.oracle_win_probability(q).map_err(|e| e.to_string())?;
        worst = worst.max((heis - target).abs()).max((schr - target).abs());
    }
    if worst >= 1e-9 {
        return Err(format!("pair deviates from (2+sqrt2)/4 by {worst:.3e}"));
    }
    within(start.elapsed(), Duration::from_secs(1), format!("all 4 pairs at {target:.9} (max deviation {worst:.1e})"))
}

fn tournament_400k() -> Outcome {
    let start = Instant::now();
    let n = 400_000u64;
    let p = quantum_value();
    let cfg = TournamentConfig::new(
        n,
        Mode::Quantum(default_protocol().map_err(|e| e.to_string())?),
        20240,
        Sampling::MonteCarlo,
    );
    let t = play(&cfg).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let mean = n as f64 * p;
    let sigma = (n as f64 * p * (1.0 - p)).sqrt();
    let z = (t.report.wins as f64 - mean) / sigma;
    if z.abs() > 3.0 {
        return Err(format!("{} wins, {z:+.2} sigma from {mean:.0}", t.report.wins));
    }
    within(elapsed, Duration::from_secs(30), format!("{} wins of {n} ({z:+.2} sigma, sigma {sigma:.0})", t.report.wins))
}

fn branch_structure() -> Outcome {
    let p = default_protocol().map_err(|e| e.to_string())?;
    let (cos2, sin2) = ((PI / 8.0).cos().powi(2), (PI / 8.0).sin().powi(2));
    for q in QuestionPair::ALL {
        for perspective in [Perspective::Alice, Perspective::Bob] {
            let tree = p.branch_tree_from(q, perspective).map_err(|e| e.to_string())?;
            for first in &tree.first {
                if (first.measure - 0.5).abs() >= 1e-10 {
                    return Err(format!("{q} {perspective:?}: first branch {}", first.measure));
                }
                for leaf in &first.second {
                    let expected = if leaf.win { cos2 } else { sin2 };
                    if (leaf.conditional - expected).abs() >= 1e-9 {
                        return Err(format!("{q} {perspective:?}: conditional {}", leaf.conditional));
                    }
                }
                let [x, y] = first.second;
                let winner = if x.win { x } else { y };
                let loser = if x.win { y } else { x };
                if x.win == y.win || winner.conditional <= loser.conditional {
                    return Err(format!("{q} {perspective:?}: winning branch is not dominant"));
                }
            }
            let total: f64 = tree.leaves().map(|l| l.measure).sum();
            if (total - 1.0).abs() >= 1e-10 || tree.conservation_defect() >= 1e-10 {
                return Err(format!("{q} {perspective:?}: leaves sum to {total}"));
            }
        }
    }
    Ok(format!("first level 1/2 each, conditionals {cos2:.9}/{sin2:.9}, leaves sum to 1 (4 pairs x 2 perspectives)"))
}

fn locality() -> Outcome {
    let start = Instant::now();
    let s = locality_suite(500, 77).map_err(|e| e.to_string())?;
    let detail = format!(
        "{} remote circuits, {} stored descriptors changed, max recompute distance {:.1e}",
        s.circuits, s.changed, s.max_recompute_distance
    );
    if !s.passed() {
        return Err(detail);
    }
    within(start.elapsed(), Duration::from_secs(60), detail)
}

fn pictures_agree() -> Outcome {
    let start = Instant::now();
    let s = picture_equivalence(1000, 78).map_err(|e| e.to_string())?;
    let detail = format!(
        "{} circuits, {} measures, max deviation {:.1e}, max normalization error {:.1e}",
        s.circuits, s.comparisons, s.max_deviation, s.max_normalization_error
    );
    if !s.passed() {
        return Err(detail);
    }
    within(start.elapsed(), Duration::from_secs(120), detail)
}

fn no_signalling() -> Outcome {
    let p = default_protocol().map_err(|e| e.to_string())?;
    let mut marginals = [[0.0; 2]; 4];
    for q in QuestionPair::ALL {
        let net = p.build_round_network(q).map_err(|e| e.to_string())?;
        marginals[q.index()] = [
            net.branch_measure(OutcomeSpec::new(ALICE, 0)).map_err(|e| e.to_string())?,
            net.branch_measure(OutcomeSpec::new(BOB, 0)).map_err(|e| e.to_string())?,
        ];
    }
    let m = |qa, qb, who: usize| marginals[QuestionPair::new(qa, qb).index()][who];
    let mut worst: f64 = 0.0;
    for x in [false, true] {
        worst = worst.max((m(x, false, 0) - m(x, true, 0)).abs());
        worst = worst.max((m(false, x, 1) - m(true, x, 1)).abs());
    }
    if worst >= 1e-10 {
        return Err(format!("a marginal moved by {worst:.3e} with the remote question"));
    }
    Ok(format!("local marginals independent of the remote question (max gap {worst:.1e})"))
}

fn redundancy() -> Outcome {
    let v0 = redundancy_demo(0).map_err(|e| e.to_string())?;
    if (v0 - 1.0).abs() >= 1e-9 {
        return Err(format!("visibility {v0} without witnesses"));
    }
    let mut worst: f64 = 0.0;
    for m in 1..=10 {
        let v = redundancy_demo(m).map_err(|e| e.to_string())?;
        if v >= 1e-9 {
            return Err(format!("visibility {v:.3e} with {m} witnesses"));
        }
        worst = worst.max(v);
    }
    Ok(format!("visibility 1 at m=0, at most {worst:.1e} for m=1..10"))
}

fn angle_grid() -> Outcome {
    let canonical = default_protocol().map_err(|e| e.to_string())?;
    let (ta, tb) = (canonical.theta_a(), canonical.theta_b());
    let step = |k: usize| (k as f64 - 8.0) * PI / 8.0;
    let bound = quantum_value() + 1e-6;
    let mut best: f64 = 0.0;
    for i in 0..16 {
        for j in 0..16 {
            for k in 0..16 {
                let p = QuantumProtocol::unchecked([0.0, ta[1] + step(i)], [tb[0] + step(j), tb[1] + step(k)]);
                let avg = p.oracle_average_win_probability().map_err(|e| e.to_string())?;
                if avg > bound {
                    return Err(format!("angles {:?} {:?} reach {avg}", p.theta_a(), p.theta_b()));
                }
                best = best.max(avg);
            }
        }
    }
    Ok(format!("4096 angle settings, best average {best:.9} <= (2+sqrt2)/4"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("classical optimum is exactly 3/4", classical_ceiling_exact),
        ("mixed strategies never exceed 3/4", mixtures_capped),
        ("quantum protocol wins each pair with (2+sqrt2)/4", per_pair_quantum),
        ("400k-round tournament within 3 sigma", tournament_400k),
        ("branch tree structure", branch_structure),
        ("remote gates leave descriptors untouched", locality),
        ("descriptor and state-vector pictures agree", pictures_agree),
        ("no signalling through marginals", no_signalling),
        ("witness records destroy interference", redundancy),
        ("no angle setting beats (2+sqrt2)/4", angle_grid),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("[PASS] {:>2}. {name}: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("[FAIL] {:>2}. {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
