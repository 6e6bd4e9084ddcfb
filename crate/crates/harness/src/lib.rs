//! Tournament harness for the CHSH engine: seeded tournaments, the
//! spacelike-separation audit, summary and per-round report files, randomized
//! verification suites and the `chsh` command line.

pub mod audit;
pub mod cli;
pub mod config;
pub mod error;
pub mod report;
pub mod tournament;
pub mod verify;

pub use audit::{causality_audit, Geometry, IsolationAudit};
pub use config::{Mode, Sampling, TournamentConfig};
pub use error::{Error, Result};
pub use report::{read_rounds, read_summary, write_report};
pub use tournament::{play, run_tournament, RoundRecord, Tournament, TournamentReport};
