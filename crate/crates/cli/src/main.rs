//! `epimc run` plays seat-alternated matches; `epimc fusion` counts
//! strategy fusion of the EPIMC-induced policy on enumerable games.

use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use epimc::fusion::{
    epimc_fusion_report, verify_propositions, FusionReport, GameTree, PropositionReport, DEFAULT_HISTORY_CAP,
};
use epimc::games::GameConfig;
use epimc::harness::{run_match, AgentSpec, MatchConfig};
use epimc::search::Budget;
use epimc::with_game;
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "epimc", version, about = "Determinized search matches and strategy fusion counts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Play a match between two agents.
    Run(Box<RunArgs>),
    /// Count fusing infostates of the EPIMC policy at several depths.
    Fusion(FusionArgs),
}

#[derive(Debug, Args)]
struct GameArgs {
    /// Game name: rps, card, battleship, phantom_ttt, dark_hex.
    #[arg(long, required_unless_present = "config")]
    game: Option<String>,
    /// A key=value game configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl GameArgs {
    fn load(&self) -> Result<GameConfig> {
        let cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                GameConfig::parse(&text)?
            }
            None => {
                GameConfig::from_pairs(&BTreeMap::from([("game".to_string(), self.game.clone().unwrap_or_default())]))?
            }
        };
        if let (Some(name), Some(_)) = (&self.game, &self.config) {
            if name != cfg.spec.name() {
                bail!("--game {name} disagrees with the configuration file's game {}", cfg.spec.name());
            }
        }
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    game: GameArgs,
    /// Agent spec, e.g. `epimc:depth=3,solver=iss`.
    #[arg(long, default_value = "epimc")]
    agent_a: AgentSpec,
    #[arg(long, default_value = "pimc")]
    agent_b: AgentSpec,
    /// Number of games; must be even.
    #[arg(long, default_value_t = 100)]
    games: usize,
    /// Per-move budget: `iters:K` or `ms:K`.
    #[arg(long, default_value = "iters:1000")]
    budget: Budget,
    /// Master seed. Defaults to the configuration file's seed, then 0.
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for the records file and summary table.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long)]
    solver: Option<String>,
    #[arg(long)]
    explore: Option<String>,
    #[arg(long)]
    cfr_iterations: Option<usize>,
    #[arg(long)]
    uct_c: Option<f64>,
    #[arg(long)]
    level2_samples: Option<usize>,
}

impl RunArgs {
    /// Applies the pass-through flags to the agents that take them,
    /// keeping whatever the spec already sets.
    fn finish(&self, mut spec: AgentSpec) -> AgentSpec {
        let opts: [(&str, &str, Option<String>); 6] = [
            ("epimc", "depth", self.depth.map(|v| v.to_string())),
            ("epimc", "solver", self.solver.clone()),
            ("epimc", "explore", self.explore.clone()),
            ("epimc", "cfr_iterations", self.cfr_iterations.map(|v| v.to_string())),
            ("ismcts", "uct_c", self.uct_c.map(|v| v.to_string())),
            ("iimc", "level2_samples", self.level2_samples.map(|v| v.to_string())),
        ];
        for (agent, key, value) in opts {
            if let Some(v) = value {
                if spec.name == agent {
                    spec = spec.with_default(key, v);
                }
            }
        }
        spec
    }
}

#[derive(Debug, Args)]
struct FusionArgs {
    #[command(flatten)]
    game: GameArgs,
    /// Comma-separated subgame depths.
    #[arg(long, value_delimiter = ',', default_value = "1,2")]
    depths: Vec<usize>,
    /// Print the per-infostate breakdown of every depth.
    #[arg(long)]
    detail: bool,
}

#[derive(Serialize)]
struct FusionOutput {
    game: String,
    propositions: PropositionReport,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    reports: Vec<FusionReport>,
}

fn run(args: RunArgs) -> Result<()> {
    let game = args.game.load()?;
    let cfg = MatchConfig {
        game: game.spec.clone(),
        agent_a: args.finish(args.agent_a.clone()),
        agent_b: args.finish(args.agent_b.clone()),
        num_games: args.games,
        budget: args.budget,
        seed: args.seed.or(game.seed).unwrap_or(0),
        out: args.out.clone(),
    };
    let result = run_match(&cfg)?;
    let s = &result.summary;
    println!(
        "{} vs {} on {} ({}): {}W {}D {}L, win rate {:.2}% [{:.2}, {:.2}]",
        s.agent_a, s.agent_b, s.game, s.budget, s.wins, s.draws, s.losses, s.win_rate, s.ci_low, s.ci_high
    );
    if !s.reproducible {
        println!("wall-clock budget: results are not reproducible");
    }
    if let Some(dir) = &cfg.out {
        println!("records: {}", dir.join(s.records_file_name()).display());
        println!("summary: {}", dir.join("summary.csv").display());
    }
    Ok(())
}

fn fusion(args: FusionArgs) -> Result<()> {
    let game = args.game.load()?;
    if args.depths.is_empty() {
        bail!("--depths needs at least one depth");
    }
    let out = with_game!(&game.spec, g => {
        let propositions = verify_propositions(&g, &args.depths)?;
        let mut reports = Vec::new();
        if args.detail {
            let tree = GameTree::enumerate(&g, DEFAULT_HISTORY_CAP)?;
            for &d in &propositions.depths {
                reports.push(epimc_fusion_report(&g, &tree, d)?);
            }
        }
        FusionOutput { game: game.spec.name().to_string(), propositions, reports }
    });
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run(args) => run(*args),
        Command::Fusion(args) => fusion(args),
    }
}
