//! Match records and summaries, and their on-disk formats.
//!
//! Records are written one JSON object per line. Summaries are appended
//! to a CSV table with the columns of [`SUMMARY_HEADER`].

use std::fs::{self, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::game::{Action, PlayerId};

pub const SUMMARY_HEADER: &str =
    "game,agent_a,agent_b,budget,games,wins,draws,losses,win_rate,ci_low,ci_high,reproducible";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Win,
    Draw,
    Loss,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoveRecord {
    pub player: PlayerId,
    pub action: Action,
    /// Search iterations the agent completed for this move.
    pub iterations: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchRecord {
    pub game_index: usize,
    /// Seed of the deal.
    pub seed: u64,
    /// Seeds of the agents sitting in each seat.
    pub agent_seeds: [u64; 2],
    /// Seat of agent A.
    pub a_seat: u8,
    pub moves: Vec<MoveRecord>,
    pub returns: [f64; 2],
    /// Result for agent A.
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultSummary {
    pub game: String,
    pub agent_a: String,
    pub agent_b: String,
    pub budget: String,
    pub games: usize,
    pub wins: usize,
    pub draws: usize,
    pub losses: usize,
    /// Percent, draws counting half.
    pub win_rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub reproducible: bool,
}

/// Win rate in percent with draws counting half, and its 95% normal
/// interval clamped to `[0, 100]`.
pub fn win_rate_interval(wins: usize, draws: usize, games: usize) -> (f64, f64, f64) {
    if games == 0 {
        return (0.0, 0.0, 100.0);
    }
    let n = games as f64;
    let p = (wins as f64 + 0.5 * draws as f64) / n;
    let half = 1.96 * (p * (1.0 - p) / n).sqrt();
    (100.0 * p, (100.0 * (p - half)).max(0.0), (100.0 * (p + half)).min(100.0))
}

impl ResultSummary {
    pub fn from_records(
        game: &str,
        agent_a: &str,
        agent_b: &str,
        budget: &str,
        reproducible: bool,
        records: &[MatchRecord],
    ) -> Self {
        let count = |o| records.iter().filter(|r| r.outcome == o).count();
        let (wins, draws, losses) = (count(Outcome::Win), count(Outcome::Draw), count(Outcome::Loss));
        let (win_rate, ci_low, ci_high) = win_rate_interval(wins, draws, records.len());
        ResultSummary {
            game: game.into(),
            agent_a: agent_a.into(),
            agent_b: agent_b.into(),
            budget: budget.into(),
            games: records.len(),
            wins,
            draws,
            losses,
            win_rate,
            ci_low,
            ci_high,
            reproducible,
        }
    }

    pub fn csv_row(&self) -> String {
        let quote = |s: &str| if s.contains(',') { format!("\"{}\"", s.replace('"', "\"\"")) } else { s.to_string() };
        format!(
            "{},{},{},{},{},{},{},{},{:.4},{:.4},{:.4},{}",
            quote(&self.game),
            quote(&self.agent_a),
            quote(&self.agent_b),
            quote(&self.budget),
            self.games,
            self.wins,
            self.draws,
            self.losses,
            self.win_rate,
            self.ci_low,
            self.ci_high,
            self.reproducible
        )
    }

    /// File name of the records for this summary's key.
    pub fn records_file_name(&self) -> String {
        let raw = format!("{}__{}__{}__{}", self.game, self.agent_a, self.agent_b, self.budget);
        let clean: String =
            raw.chars().map(|c| if c.is_ascii_alphanumeric() || "_-.".contains(c) { c } else { '_' }).collect();
        format!("{clean}.jsonl")
    }
}

/// Writes the records file and appends the summary row. Returns the path
/// of the records file.
pub fn emit_results(dir: &Path, records: &[MatchRecord], summary: &ResultSummary) -> Result<PathBuf, HarnessError> {
    fs::create_dir_all(dir)?;
    let path = dir.join(summary.records_file_name());
    let mut out = std::io::BufWriter::new(fs::File::create(&path)?);
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    let table = dir.join("summary.csv");
    let fresh = !table.exists();
    let mut csv = OpenOptions::new().create(true).append(true).open(&table)?;
    if fresh {
        writeln!(csv, "{SUMMARY_HEADER}")?;
    }
    writeln!(csv, "{}", summary.csv_row())?;
    Ok(path)
}

pub fn read_records(path: &Path) -> Result<Vec<MatchRecord>, HarnessError> {
    let reader = BufReader::new(fs::File::open(path)?);
    let mut out = Vec::new();
    for line in reader.lines() {
        let line = line?;
        if !line.trim().is_empty() {
            out.push(serde_json::from_str(&line)?);
        }
    }
    Ok(out)
}
