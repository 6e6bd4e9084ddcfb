//! Output files: `summary.json` and the per-round `rounds.csv` table.

use std::fs;
use std::path::{Path, PathBuf};

use chsh_core::{win_predicate, QuestionPair};

use crate::error::{Error, Result};
use crate::tournament::{RoundRecord, TournamentReport};

pub const SUMMARY_FILE: &str = "summary.json";
pub const ROUNDS_FILE: &str = "rounds.csv";
pub const ROUNDS_HEADER: [&str; 7] = ["round_id", "qa", "qb", "aa", "ab", "win", "leaf_measure"];

pub fn summary_path(dir: &Path) -> PathBuf {
    dir.join(SUMMARY_FILE)
}

pub fn rounds_path(dir: &Path) -> PathBuf {
    dir.join(ROUNDS_FILE)
}

/// Writes both files into `dir`, creating it if needed.
pub fn write_report(report: &TournamentReport, rounds: &[RoundRecord], dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;

    let summary = summary_path(dir);
    let mut json =
        serde_json::to_string_pretty(report).map_err(|source| Error::Json { path: summary.clone(), source })?;
    json.push('\n');
    fs::write(&summary, json).map_err(|e| Error::io(&summary, e))?;

    let table = rounds_path(dir);
    let csv_err = |source| Error::Csv { path: table.clone(), source };
    let mut w = csv::Writer::from_path(&table).map_err(csv_err)?;
    w.write_record(ROUNDS_HEADER).map_err(csv_err)?;
    for r in rounds {
        let bit = |b: bool| if b { "1" } else { "0" };
        w.write_record([
            r.round_id.to_string().as_str(),
            bit(r.qa),
            bit(r.qb),
            bit(r.aa),
            bit(r.ab),
            bit(r.win),
            format!("{:.9}", r.leaf_measure).as_str(),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::io(&table, e))?;
    Ok(())
}

pub fn read_summary(path: &Path) -> Result<TournamentReport> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|source| Error::Json { path: path.to_path_buf(), source })
}

/// Reads a round table back, re-checking every row against the win rule.
pub fn read_rounds(path: &Path) -> Result<Vec<RoundRecord>> {
    let csv_err = |source| Error::Csv { path: path.to_path_buf(), source };
    let mut rdr = csv::Reader::from_path(path).map_err(csv_err)?;
    let header = rdr.headers().map_err(csv_err)?.clone();
    if header.iter().ne(ROUNDS_HEADER) {
        return Err(Error::BadRecord {
            path: path.to_path_buf(),
            row: 0,
            reason: format!("unexpected header {header:?}"),
        });
    }
    let mut out = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row.map_err(csv_err)?;
        let bad = |reason: String| Error::BadRecord { path: path.to_path_buf(), row: i + 1, reason };
        let bit = |k: usize| match &row[k] {
            "0" => Ok(false),
            "1" => Ok(true),
            other => Err(bad(format!("column {} is `{other}`, expected 0 or 1", ROUNDS_HEADER[k]))),
        };
        let rec = RoundRecord {
            round_id: row[0].parse().map_err(|_| bad(format!("bad round_id `{}`", &row[0])))?,
            qa: bit(1)?,
            qb: bit(2)?,
            aa: bit(3)?,
            ab: bit(4)?,
            win: bit(5)?,
            leaf_measure: row[6].parse().map_err(|_| bad(format!("bad leaf_measure `{}`", &row[6])))?,
        };
        if rec.win != win_predicate(QuestionPair::new(rec.qa, rec.qb), rec.aa, rec.ab) {
            return Err(bad("win flag disagrees with the answers".into()));
        }
        out.push(rec);
    }
    Ok(out)
}
