use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::game::{Action, Game};
use crate::search::{Agent, Budget, DecisionContext, SearchError};

/// A uniformly random legal action.
pub fn random_choose<R: Rng + ?Sized>(legal: &[Action], rng: &mut R) -> Result<Action, SearchError> {
    if legal.is_empty() {
        return Err(SearchError::NoLegalActions);
    }
    Ok(legal[rng.gen_range(0..legal.len())])
}

#[derive(Debug, Clone, Default)]
pub struct RandomAgent;

impl<G: Game> Agent<G> for RandomAgent {
    fn name(&self) -> String {
        "random".into()
    }

    fn choose(
        &mut self,
        _game: &G,
        ctx: &DecisionContext,
        _budget: Budget,
        rng: &mut ChaCha8Rng,
    ) -> Result<Action, SearchError> {
        random_choose(&ctx.legal_actions, rng)
    }
}
