//! Recursive PIMC: every sampled world is played out to the end with both
//! players choosing their moves by an inner PIMC search on their own
//! infostate in that world.

use std::collections::HashMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::determinize::BeliefSampler;
use crate::game::{Action, Game, History, InfostateKey};
use crate::leaf_eval::LeafEvaluator;
use crate::search::{argmax_by_action, pimc_choose, ActionScores, Agent, Budget, DecisionContext, SearchError};

pub const DEFAULT_LEVEL2_SAMPLES: usize = 5;

fn play_out<G: Game, R: Rng + ?Sized>(
    game: &G,
    mut history: History<G::State>,
    level2: usize,
    inner: &mut [BeliefSampler<G>; 2],
    evaluator: &LeafEvaluator,
    rng: &mut R,
) -> Result<History<G::State>, SearchError> {
    while let Some(actor) = game.current_player(history.current()) {
        let key = history.infostate(game, actor);
        let legal = game.legal_actions(history.current());
        let a = pimc_choose(game, &key, &legal, Budget::Iterations(level2), &mut inner[actor.index()], evaluator, rng)?;
        history.push(game, a)?;
    }
    Ok(history)
}

#[allow(clippy::too_many_arguments)]
pub fn iimc_scores<G: Game, R: Rng + ?Sized>(
    game: &G,
    key: &InfostateKey,
    legal: &[Action],
    budget: Budget,
    sampler: &mut BeliefSampler<G>,
    evaluator: &LeafEvaluator,
    level2: usize,
    rng: &mut R,
) -> Result<ActionScores, SearchError> {
    let me = key.player();
    let mut inner = [BeliefSampler::for_game(game), BeliefSampler::for_game(game)];
    let mut scores = ActionScores::new(legal.to_vec());
    let mut clock = budget.clock();
    while clock.keep_going() {
        let world = sampler.sample(game, key, rng)?;
        for (i, &a) in legal.iter().enumerate() {
            let h = world.clone().with(game, a)?;
            let end = play_out(game, h, level2, &mut inner, evaluator, rng)?;
            scores.sum[i] += game.returns(end.current())?.get(me);
            scores.count[i] += 1;
        }
        clock.tick();
    }
    Ok(scores)
}

#[allow(clippy::too_many_arguments)]
pub fn iimc_choose<G: Game, R: Rng + ?Sized>(
    game: &G,
    key: &InfostateKey,
    legal: &[Action],
    budget: Budget,
    sampler: &mut BeliefSampler<G>,
    evaluator: &LeafEvaluator,
    level2: usize,
    rng: &mut R,
) -> Result<Action, SearchError> {
    match legal {
        [] => Err(SearchError::NoLegalActions),
        [only] => Ok(*only),
        _ => iimc_scores(game, key, legal, budget, sampler, evaluator, level2, rng)?
            .best()
            .ok_or(SearchError::NoIterations),
    }
}

pub struct IimcAgent<G: Game> {
    pub evaluator: LeafEvaluator,
    pub level2: usize,
    sampler: BeliefSampler<G>,
    last: usize,
}

impl<G: Game> IimcAgent<G> {
    pub fn new(game: &G, evaluator: LeafEvaluator, level2: usize) -> Self {
        IimcAgent { evaluator, level2, sampler: BeliefSampler::for_game(game), last: 0 }
    }
}

impl<G: Game> Agent<G> for IimcAgent<G> {
    fn name(&self) -> String {
        "iimc".into()
    }

    fn choose(
        &mut self,
        game: &G,
        ctx: &DecisionContext,
        budget: Budget,
        rng: &mut ChaCha8Rng,
    ) -> Result<Action, SearchError> {
        self.last = 0;
        if ctx.legal_actions.len() == 1 {
            return Ok(ctx.legal_actions[0]);
        }
        let s = iimc_scores(
            game,
            &ctx.key,
            &ctx.legal_actions,
            budget,
            &mut self.sampler,
            &self.evaluator,
            self.level2,
            rng,
        )?;
        self.last = s.count.first().copied().unwrap_or(0);
        let means = s.means();
        argmax_by_action(&s.actions, &means).map(|i| s.actions[i]).ok_or(SearchError::NoIterations)
    }

    fn last_iterations(&self) -> usize {
        self.last
    }
}

/// Frequency of each root action chosen by IIMC over `seeds`.
pub fn choice_histogram<G: Game>(
    game: &G,
    key: &InfostateKey,
    legal: &[Action],
    budget: Budget,
    seeds: std::ops::Range<u64>,
    level2: usize,
) -> Result<HashMap<Action, usize>, SearchError> {
    use rand::SeedableRng;
    let mut out = HashMap::new();
    for seed in seeds {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut sampler = BeliefSampler::for_game(game);
        let a = iimc_choose(game, key, legal, budget, &mut sampler, &LeafEvaluator::default(), level2, &mut rng)?;
        *out.entry(a).or_insert(0) += 1;
    }
    Ok(out)
}
