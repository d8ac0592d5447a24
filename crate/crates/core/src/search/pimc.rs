//! Perfect Information Monte Carlo.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{argmax_by_action, Agent, Budget, DecisionContext, SearchError};
use crate::determinize::BeliefSampler;
use crate::game::{Action, Game, InfostateKey};
use crate::leaf_eval::LeafEvaluator;

/// Accumulated evaluator scores per root action.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionScores {
    pub actions: Vec<Action>,
    pub sum: Vec<f64>,
    pub count: Vec<usize>,
}

impl ActionScores {
    pub fn new(actions: Vec<Action>) -> Self {
        let n = actions.len();
        ActionScores { actions, sum: vec![0.0; n], count: vec![0; n] }
    }

    pub fn mean(&self, i: usize) -> f64 {
        if self.count[i] == 0 {
            f64::NEG_INFINITY
        } else {
            self.sum[i] / self.count[i] as f64
        }
    }

    pub fn means(&self) -> Vec<f64> {
        (0..self.actions.len()).map(|i| self.mean(i)).collect()
    }

    pub fn mean_of(&self, action: Action) -> Option<f64> {
        self.actions.iter().position(|&a| a == action).map(|i| self.mean(i))
    }

    /// Best mean, ties to the smallest action id.
    pub fn best(&self) -> Option<Action> {
        if self.count.iter().all(|&c| c == 0) {
            return None;
        }
        argmax_by_action(&self.actions, &self.means()).map(|i| self.actions[i])
    }
}

/// Runs the PIMC loop: every iteration samples one world and scores every
/// legal action in it.
pub fn pimc_scores<G: Game, R: Rng + ?Sized>(
    game: &G,
    key: &InfostateKey,
    legal: &[Action],
    budget: Budget,
    sampler: &mut BeliefSampler<G>,
    evaluator: &LeafEvaluator,
    rng: &mut R,
) -> Result<ActionScores, SearchError> {
    let me = key.player();
    let mut scores = ActionScores::new(legal.to_vec());
    let mut clock = budget.clock();
    while clock.keep_going() {
        let world = sampler.sample(game, key, rng)?;
        for (i, &a) in legal.iter().enumerate() {
            let (next, _) = game.apply(world.current(), a)?;
            scores.sum[i] += evaluator.evaluate(game, &next, me, rng)?;
            scores.count[i] += 1;
        }
        clock.tick();
    }
    Ok(scores)
}

/// The action with the best mean score.
pub fn pimc_choose<G: Game, R: Rng + ?Sized>(
    game: &G,
    key: &InfostateKey,
    legal: &[Action],
    budget: Budget,
    sampler: &mut BeliefSampler<G>,
    evaluator: &LeafEvaluator,
    rng: &mut R,
) -> Result<Action, SearchError> {
    match legal {
        [] => Err(SearchError::NoLegalActions),
        [only] => Ok(*only),
        _ => pimc_scores(game, key, legal, budget, sampler, evaluator, rng)?.best().ok_or(SearchError::NoIterations),
    }
}

pub struct PimcAgent<G: Game> {
    pub evaluator: LeafEvaluator,
    sampler: BeliefSampler<G>,
    last: usize,
}

impl<G: Game> PimcAgent<G> {
    pub fn new(game: &G, evaluator: LeafEvaluator) -> Self {
        PimcAgent { evaluator, sampler: BeliefSampler::for_game(game), last: 0 }
    }

    pub fn with_sampler(evaluator: LeafEvaluator, sampler: BeliefSampler<G>) -> Self {
        PimcAgent { evaluator, sampler, last: 0 }
    }
}

impl<G: Game> Agent<G> for PimcAgent<G> {
    fn name(&self) -> String {
        "pimc".into()
    }

    fn choose(
        &mut self,
        game: &G,
        ctx: &DecisionContext,
        budget: Budget,
        rng: &mut ChaCha8Rng,
    ) -> Result<Action, SearchError> {
        if ctx.legal_actions.len() == 1 {
            self.last = 0;
            return Ok(ctx.legal_actions[0]);
        }
        let scores = pimc_scores(game, &ctx.key, &ctx.legal_actions, budget, &mut self.sampler, &self.evaluator, rng)?;
        self.last = scores.count.first().copied().unwrap_or(0);
        scores.best().ok_or(SearchError::NoIterations)
    }

    fn last_iterations(&self) -> usize {
        self.last
    }
}
