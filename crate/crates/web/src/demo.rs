//! Demo logic behind the browser exports, free of any JS types.

use epimc::determinize::{BeliefSampler, SamplingStrategy};
use epimc::fusion::verify_propositions;
use epimc::game::legal_actions_for;
use epimc::games::{CardConfig, CardGame, PhantomState, PhantomTicTacToe, RpsState, RpsVariant};
use epimc::leaf_eval::LeafEvaluator;
use epimc::search::epimc::build_subgame;
use epimc::search::{pimc_scores, Agent, Budget, DecisionContext, EpimcAgent, EpimcConfig};
use epimc::{Game, InfostateKey, PlayerId};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

const MAX_ITERATIONS: usize = 20_000;
const MAX_DEPTH: usize = 6;

fn check(depth: usize, iterations: usize) -> Result<(), String> {
    if !(1..=MAX_DEPTH).contains(&depth) {
        return Err(format!("depth must be in 1..={MAX_DEPTH}"));
    }
    if !(1..=MAX_ITERATIONS).contains(&iterations) {
        return Err(format!("iterations must be in 1..={MAX_ITERATIONS}"));
    }
    Ok(())
}

/// Root decision of the Leave-or-Play game under both searches, with the
/// PIMC mean of every action and the EPIMC root value.
pub fn leave_or_play_decisions(
    leave_payoff: f64,
    depth: usize,
    iterations: usize,
    seed: u64,
) -> Result<String, String> {
    check(depth, iterations)?;
    if !leave_payoff.is_finite() {
        return Err("leave payoff must be a finite number".into());
    }
    let g = RpsVariant::with_leave_payoff(leave_payoff);
    let key = InfostateKey::new(PlayerId::P0);
    let legal = g.legal_actions(&RpsState::Start);
    let budget = Budget::Iterations(iterations);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sampler = BeliefSampler::new(SamplingStrategy::Enumerate);
    let exact = LeafEvaluator::exact();

    let scores = pimc_scores(&g, &key, &legal, budget, &mut sampler, &exact, &mut rng).map_err(|e| e.to_string())?;
    let means: Vec<_> =
        legal.iter().map(|&a| json!({ "action": g.action_label(a), "mean": scores.mean_of(a) })).collect();
    let pimc = scores.best().ok_or("no iterations")?;

    let cfg = EpimcConfig { depth, evaluator: exact, ..EpimcConfig::default() };
    let tree = build_subgame(&g, &key, budget, &mut sampler, &cfg, &mut rng).map_err(|e| e.to_string())?;
    let (choice, value) = cfg.solver.solve(&tree).map_err(|e| e.to_string())?;
    let choice = choice.ok_or("empty subgame")?;

    Ok(json!({
        "leave_payoff": leave_payoff,
        "pimc": { "choice": g.action_label(pimc), "means": means },
        "epimc": { "choice": g.action_label(choice), "value": value, "depth": depth, "nodes": tree.len() },
    })
    .to_string())
}

/// Fusion counts of the EPIMC-induced policy at each depth of `depths`
/// (comma separated), plus whether the depth properties hold.
pub fn fusion_counts(game: &str, depths: &str) -> Result<String, String> {
    let depths: Vec<usize> = depths
        .split(',')
        .map(|d| d.trim().parse().map_err(|_| format!("bad depth {d:?}")))
        .collect::<Result<_, _>>()?;
    if depths.is_empty() || depths.iter().any(|&d| d == 0 || d > 8) {
        return Err("depths must lie in 1..=8".into());
    }
    let report = match game {
        "rps" => verify_propositions(&RpsVariant::new(), &depths),
        "card_toy" => verify_propositions(&card(CardConfig::toy())?, &depths),
        "card_three_tricks" => {
            verify_propositions(&card(CardConfig { suits: 2, ranks: 4, public: 8, hidden: 2, hand: 3 })?, &depths)
        }
        other => return Err(format!("unknown demo game {other:?}")),
    }
    .map_err(|e| e.to_string())?;
    #[derive(Serialize)]
    struct Out<'a, R> {
        game: &'a str,
        all_hold: bool,
        report: R,
    }
    serde_json::to_string(&Out { game, all_hold: report.all_hold(), report }).map_err(|e| e.to_string())
}

fn card(cfg: CardConfig) -> Result<CardGame, String> {
    CardGame::new(cfg).map_err(|e| e.to_string())
}

/// A human in the first seat against an EPIMC agent in the second.
pub struct PhantomMatch {
    game: PhantomTicTacToe,
    state: PhantomState,
    keys: [InfostateKey; 2],
    agent: EpimcAgent<PhantomTicTacToe>,
    budget: Budget,
    rng: ChaCha8Rng,
    events: Vec<String>,
}

const HUMAN: PlayerId = PlayerId::P0;

impl PhantomMatch {
    pub fn new(seed: u64, depth: usize, iterations: usize) -> Self {
        let game = PhantomTicTacToe::new();
        let state = game.initial_state(&mut ChaCha8Rng::seed_from_u64(seed));
        let keys = PlayerId::all().map(|p| InfostateKey::at_root(p, game.root_observation(&state, p)));
        let depth = depth.clamp(1, MAX_DEPTH);
        let config = EpimcConfig { depth, ..EpimcConfig::default() };
        PhantomMatch {
            agent: EpimcAgent::new(&game, config),
            game,
            state,
            keys,
            budget: Budget::Iterations(iterations.clamp(1, MAX_ITERATIONS)),
            rng: ChaCha8Rng::seed_from_u64(seed),
            events: Vec::new(),
        }
    }

    pub fn state(&self) -> &PhantomState {
        &self.state
    }

    fn step(&mut self, action: epimc::Action) -> Result<bool, String> {
        let actor = PlayerId(self.state.to_act);
        let before = self.state.stones[actor.index()];
        let (next, obs) = self.game.apply(&self.state, action).map_err(|e| e.to_string())?;
        for k in &mut self.keys {
            k.record(actor, action, &obs);
        }
        self.state = next;
        Ok(self.state.stones[actor.index()] != before)
    }

    /// Plays the human's `cell`, then the agent's replies until the human
    /// is to move again or the game ends. Returns the new view.
    pub fn play(&mut self, cell: u16) -> Result<String, String> {
        self.events.clear();
        if self.game.current_player(&self.state) != Some(HUMAN) {
            return Err("the game is over".into());
        }
        let action = epimc::Action(cell);
        if !self.game.legal_actions(&self.state).contains(&action) {
            return Err(format!("cell {cell} is not playable"));
        }
        let label = self.game.action_label(action);
        if self.step(action)? {
            self.events.push(format!("you placed {label}"));
        } else {
            self.events.push(format!("{label} is taken, move again"));
        }
        let mut replied = false;
        while let Some(actor) = self.game.current_player(&self.state) {
            if actor == HUMAN {
                break;
            }
            replied = true;
            let legal = legal_actions_for(&self.game, &self.state, actor).map_err(|e| e.to_string())?;
            let ctx = DecisionContext { key: self.keys[actor.index()].clone(), legal_actions: legal };
            let a = self.agent.choose(&self.game, &ctx, self.budget, &mut self.rng).map_err(|e| e.to_string())?;
            self.step(a)?;
        }
        if replied && !self.state.is_over() {
            self.events.push("the opponent placed a stone".into());
        }
        Ok(self.view_json())
    }

    /// The board as the human sees it: `X` own stones, `O` discovered
    /// opponent stones, `o` the rest of the opponent's stones once the
    /// game is over.
    pub fn view_json(&self) -> String {
        let s = &self.state;
        let cells: Vec<&str> = (0..9)
            .map(|c| {
                let bit = |m: u16| m >> c & 1 == 1;
                if bit(s.stones[0]) {
                    "X"
                } else if bit(s.revealed[0]) {
                    "O"
                } else if s.is_over() && bit(s.stones[1]) {
                    "o"
                } else {
                    ""
                }
            })
            .collect();
        let status = match s.outcome {
            0 => "your move",
            1 => "you won",
            2 => "you lost",
            _ => "draw",
        };
        json!({ "cells": cells, "status": status, "over": s.is_over(), "events": self.events }).to_string()
    }
}
