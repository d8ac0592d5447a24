//! Seat-alternated matches between two agents.
//!
//! Game `g` of a match seats agent A first when `g` is even. Games `2k`
//! and `2k + 1` share the deal seed and the per-seat agent seeds, all
//! derived from the master seed and `k`, so swapping seats is the only
//! difference between the two games of a pair.

pub mod record;
pub mod spec;

use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::game::{legal_actions_for, Game, GameError, InfostateKey, PlayerId};
use crate::games::GameSpec;
use crate::search::{Budget, DecisionContext, SearchError};

pub use record::{emit_results, read_records, win_rate_interval, MatchRecord, MoveRecord, Outcome, ResultSummary};
pub use spec::AgentSpec;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("game {game_index}: agent {agent} in seat {seat} failed: {source}")]
    Agent { game_index: usize, seat: u8, agent: String, source: SearchError },
    #[error("game {game_index}: agent {agent} chose illegal action {action}")]
    IllegalChoice { game_index: usize, agent: String, action: crate::game::Action },
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchConfig {
    pub game: GameSpec,
    pub agent_a: AgentSpec,
    pub agent_b: AgentSpec,
    pub num_games: usize,
    pub budget: Budget,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl MatchConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.num_games == 0 || !self.num_games.is_multiple_of(2) {
            return Err(HarnessError::InvalidConfig(format!(
                "number of games must be even and positive, got {}",
                self.num_games
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchResult {
    pub records: Vec<MatchRecord>,
    pub summary: ResultSummary,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed of stream `stream` for seat pair `pair`.
pub fn derive_seed(master: u64, stream: u64, pair: u64) -> u64 {
    splitmix64(splitmix64(master ^ splitmix64(stream)).wrapping_add(pair))
}

/// Plays one game. `seats[s]` sits in seat `s`.
#[allow(clippy::too_many_arguments)]
pub fn play_game<G: Game>(
    game: &G,
    seats: [&mut dyn crate::search::Agent<G>; 2],
    names: [&str; 2],
    game_index: usize,
    deal_seed: u64,
    agent_seeds: [u64; 2],
    a_seat: u8,
    budget: Budget,
) -> Result<MatchRecord, HarnessError> {
    let mut deal_rng = ChaCha8Rng::seed_from_u64(deal_seed);
    let mut rngs = agent_seeds.map(ChaCha8Rng::seed_from_u64);
    let mut state = game.initial_state(&mut deal_rng);
    let mut keys = PlayerId::all().map(|p| InfostateKey::at_root(p, game.root_observation(&state, p)));
    let mut moves = Vec::new();
    while let Some(actor) = game.current_player(&state) {
        let seat = actor.index();
        let ctx = DecisionContext { key: keys[seat].clone(), legal_actions: legal_actions_for(game, &state, actor)? };
        #[cfg(not(target_arch = "wasm32"))]
        let started = std::time::Instant::now();
        let action = seats[seat].choose(game, &ctx, budget, &mut rngs[seat]).map_err(|source| HarnessError::Agent {
            game_index,
            seat: seat as u8,
            agent: names[seat].to_string(),
            source,
        })?;
        if !ctx.legal_actions.contains(&action) {
            return Err(HarnessError::IllegalChoice { game_index, agent: names[seat].to_string(), action });
        }
        #[cfg(not(target_arch = "wasm32"))]
        let elapsed_ms = (!budget.is_reproducible()).then(|| started.elapsed().as_secs_f64() * 1000.0);
        #[cfg(target_arch = "wasm32")]
        let elapsed_ms = None;
        moves.push(MoveRecord { player: actor, action, iterations: seats[seat].last_iterations(), elapsed_ms });
        let (next, obs) = game.apply(&state, action)?;
        for k in &mut keys {
            k.record(actor, action, &obs);
        }
        state = next;
    }
    let returns = game.returns(&state)?;
    let a = returns.0[a_seat as usize];
    let b = returns.0[1 - a_seat as usize];
    let outcome = if a > b {
        Outcome::Win
    } else if a < b {
        Outcome::Loss
    } else {
        Outcome::Draw
    };
    Ok(MatchRecord { game_index, seed: deal_seed, agent_seeds, a_seat, moves, returns: returns.0, outcome })
}

fn play_indexed<G: Game + 'static>(game: &G, cfg: &MatchConfig, g: usize) -> Result<MatchRecord, HarnessError> {
    let pair = (g / 2) as u64;
    let a_seat = (g % 2) as u8;
    let deal = derive_seed(cfg.seed, 0, pair);
    let seeds = [derive_seed(cfg.seed, 1, pair), derive_seed(cfg.seed, 2, pair)];
    let mut a = cfg.agent_a.build(game)?;
    let mut b = cfg.agent_b.build(game)?;
    let (na, nb) = (cfg.agent_a.to_string(), cfg.agent_b.to_string());
    if a_seat == 0 {
        play_game(game, [a.as_mut(), b.as_mut()], [&na, &nb], g, deal, seeds, a_seat, cfg.budget)
    } else {
        play_game(game, [b.as_mut(), a.as_mut()], [&nb, &na], g, deal, seeds, a_seat, cfg.budget)
    }
}

/// Plays every game of the match on an already constructed game.
pub fn run_match_on<G: Game + 'static>(game: &G, cfg: &MatchConfig) -> Result<MatchResult, HarnessError> {
    cfg.validate()?;
    #[cfg(feature = "parallel")]
    let records: Vec<MatchRecord> = {
        use rayon::prelude::*;
        (0..cfg.num_games).into_par_iter().map(|g| play_indexed(game, cfg, g)).collect::<Result<_, _>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let records: Vec<MatchRecord> = (0..cfg.num_games).map(|g| play_indexed(game, cfg, g)).collect::<Result<_, _>>()?;
    let summary = ResultSummary::from_records(
        cfg.game.name(),
        &cfg.agent_a.to_string(),
        &cfg.agent_b.to_string(),
        &cfg.budget.to_string(),
        cfg.budget.is_reproducible(),
        &records,
    );
    Ok(MatchResult { records, summary })
}

/// Builds the configured game, plays the match and writes the results if
/// an output directory is set.
pub fn run_match(cfg: &MatchConfig) -> Result<MatchResult, HarnessError> {
    let result = crate::with_game!(&cfg.game, g => run_match_on(&g, cfg)?);
    if let Some(dir) = &cfg.out {
        emit_results(dir, &result.records, &result.summary)?;
    }
    Ok(result)
}
