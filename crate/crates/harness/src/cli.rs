use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use chsh_core::protocol::Perspective;
use chsh_core::{classical_optimum, default_protocol, DeterministicStrategy, QuestionPair};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::audit::causality_audit;
use crate::config::{ConfigOverrides, GeometryOverrides};
use crate::error::Result;
use crate::tournament::run_tournament;
use crate::verify::{locality_suite, picture_equivalence};

#[derive(Debug, Parser)]
#[command(name = "chsh", version, about = "CHSH game simulator: classical ceiling, quantum protocol, tournaments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print all 16 Strategy Cards with their win rates and the optimum.
    Enumerate,
    /// Run a tournament.
    Play(PlayArgs),
    /// Check that the stations cannot signal each other during the answer window.
    Audit(GeometryArgs),
    /// Print the branch tree of one question pair.
    Branch(BranchArgs),
    /// Run the picture-equivalence and locality suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct GeometryArgs {
    /// Station separation in light-minutes.
    #[arg(long, allow_hyphen_values = true)]
    distance: Option<f64>,
    /// Answer window in minutes.
    #[arg(long, allow_hyphen_values = true)]
    window: Option<f64>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PlayArgs {
    #[arg(long)]
    rounds: Option<u64>,
    #[arg(long, value_parser = ["classical", "mixed", "quantum"])]
    mode: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_parser = ["exact", "mc"])]
    sampling: Option<String>,
    /// Output directory for summary.json and rounds.csv.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Classical card as four bits a0 a1 b0 b1.
    #[arg(long)]
    strategy: Option<String>,
    /// Sixteen comma-separated rational weights for mixed mode.
    #[arg(long, value_delimiter = ',')]
    weights: Option<Vec<String>>,
    #[command(flatten)]
    geometry: GeometryArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Who {
    Alice,
    Bob,
}

#[derive(Debug, Args)]
struct BranchArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
    qa: u8,
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
    qb: u8,
    #[arg(long, value_enum, default_value = "alice")]
    perspective: Who,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Random circuits for the picture-equivalence suite.
    #[arg(long, default_value_t = 1000)]
    circuits: usize,
    /// Random remote circuits for the locality suite.
    #[arg(long, default_value_t = 500)]
    locality_circuits: usize,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
}

impl GeometryArgs {
    fn overrides(&self) -> Result<ConfigOverrides> {
        let base = match &self.config {
            Some(path) => ConfigOverrides::from_file(path)?,
            None => ConfigOverrides::default(),
        };
        let flags = ConfigOverrides {
            geometry: (self.distance.is_some() || self.window.is_some()).then_some(GeometryOverrides {
                distance_light_minutes: self.distance,
                answer_window_minutes: self.window,
            }),
            ..Default::default()
        };
        Ok(base.merged(flags))
    }
}

/// Runs the CLI, writing normal output to `out` and diagnostics to `err`.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(rendered.as_bytes());
            } else {
                let _ = out.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    match execute(cli.command) {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn execute(cmd: Command) -> Result<(String, i32)> {
    match cmd {
        Command::Enumerate => Ok((enumerate_table(), 0)),
        Command::Play(args) => {
            let base = match &args.geometry.config {
                Some(path) => ConfigOverrides::from_file(path)?,
                None => ConfigOverrides::default(),
            };
            let flags = ConfigOverrides {
                rounds: args.rounds,
                mode: args.mode,
                seed: args.seed,
                sampling: args.sampling,
                out: args.out,
                strategy: args.strategy,
                weights: args.weights,
                geometry: (args.geometry.distance.is_some() || args.geometry.window.is_some()).then_some(
                    GeometryOverrides {
                        distance_light_minutes: args.geometry.distance,
                        answer_window_minutes: args.geometry.window,
                    },
                ),
                protocol: None,
            };
            let cfg = base.merged(flags).resolve()?;
            let report = run_tournament(&cfg)?;
            let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
            text.push('\n');
            Ok((text, 0))
        }
        Command::Audit(args) => {
            let cfg = args.overrides()?.resolve()?;
            let audit = causality_audit(&cfg.geometry)?;
            let text = format!(
                "distance: {:.1} light-minutes\nanswer window: {:.1} minutes\nisolated: {}\nmargin: {:.1} light-minutes\n",
                cfg.geometry.distance_light_minutes,
                cfg.geometry.answer_window_minutes,
                audit.isolated,
                audit.margin_light_minutes
            );
            Ok((text, if audit.isolated { 0 } else { 1 }))
        }
        Command::Branch(args) => {
            let q = QuestionPair::new(args.qa == 1, args.qb == 1);
            let perspective = match args.perspective {
                Who::Alice => Perspective::Alice,
                Who::Bob => Perspective::Bob,
            };
            Ok((branch_text(q, perspective)?, 0))
        }
        Command::Verify(args) => {
            let eq = picture_equivalence(args.circuits, args.seed)?;
            let loc = locality_suite(args.locality_circuits, args.seed.wrapping_add(1))?;
            let mut text = String::new();
            let status = |ok: bool| if ok { "PASS" } else { "FAIL" };
            let _ = writeln!(
                text,
                "[{}] picture equivalence: {} circuits, {} measures, max deviation {:.3e}, max normalization error {:.3e}",
                status(eq.passed()),
                eq.circuits,
                eq.comparisons,
                eq.max_deviation,
                eq.max_normalization_error
            );
            let _ = writeln!(
                text,
                "[{}] locality: {} remote circuits, {} stored descriptors changed, max recompute distance {:.3e}",
                status(loc.passed()),
                loc.circuits,
                loc.changed,
                loc.max_recompute_distance
            );
            Ok((text, if eq.passed() && loc.passed() { 0 } else { 1 }))
        }
    }
}

fn enumerate_table() -> String {
    let mut t = String::new();
    let _ = writeln!(t, "card  a0 a1 b0 b1  (0,0) (0,1) (1,0) (1,1)  rate");
    for s in DeterministicStrategy::all() {
        let b = |x: bool| u8::from(x);
        let _ = write!(t, "{s}   {:>2} {:>2} {:>2} {:>2} ", b(s.a0), b(s.a1), b(s.b0), b(s.b1));
        for q in QuestionPair::ALL {
            let _ = write!(t, "  {:>4}", if s.wins(q) { "win" } else { "lose" });
        }
        let r = s.win_rate();
        let _ = writeln!(t, "  {:.2} ({})", *r.numer() as f64 / *r.denom() as f64, r);
    }
    let (best, argmax) = classical_optimum();
    let cards: Vec<String> = argmax.iter().map(ToString::to_string).collect();
    let _ = writeln!(
        t,
        "optimum: {} = {:.2}, attained by {} cards: {}",
        best,
        *best.numer() as f64 / *best.denom() as f64,
        argmax.len(),
        cards.join(" ")
    );
    t
}

fn branch_text(q: QuestionPair, perspective: Perspective) -> Result<String> {
    let tree = default_protocol()?.branch_tree_from(q, perspective)?;
    let (own, other) = match perspective {
        Perspective::Alice => ("Alice", "Bob"),
        Perspective::Bob => ("Bob", "Alice"),
    };
    let mut t = String::new();
    let _ = writeln!(t, "question pair {q}, {own}'s perspective");
    let _ = writeln!(t, "root measure 1.000000000");
    for first in &tree.first {
        let _ = writeln!(t, "  {own} {} measure {:.9}", first.outcome, first.measure);
        for leaf in &first.second {
            let other_bit = match perspective {
                Perspective::Alice => leaf.bob,
                Perspective::Bob => leaf.alice,
            };
            let _ = writeln!(
                t,
                "    {other} {} conditional {:.9} leaf ({}, {}) measure {:.9} {}",
                u8::from(other_bit),
                leaf.conditional,
                u8::from(leaf.alice),
                u8::from(leaf.bob),
                leaf.measure,
                if leaf.win { "win" } else { "lose" }
            );
        }
    }
    let _ = writeln!(t, "winning measure {:.9}", tree.win_measure());
    Ok(t)
}
