//! Perfect-information leaf evaluators.
//!
//! An evaluator sees the whole world state, so it plays the determinized
//! game as if both players could see everything. Values are returned from
//! the point of view of a chosen player.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::game::{Action, Game, GameError, PlayerId};

pub const DEFAULT_NODE_BUDGET: usize = 20_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("alpha-beta search exceeded its budget of {0} nodes")]
    NodeBudgetExceeded(usize),
    #[error(transparent)]
    Game(#[from] GameError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LeafEvaluator {
    /// Mean return of `rollouts` uniformly random playouts.
    RandomRollout { rollouts: usize },
    /// Exact minimax value. Fails once more than `node_budget` nodes have
    /// been visited by a single evaluation.
    AlphaBeta { node_budget: usize, transposition: bool },
}

impl Default for LeafEvaluator {
    fn default() -> Self {
        LeafEvaluator::RandomRollout { rollouts: 1 }
    }
}

impl LeafEvaluator {
    pub fn rollout(rollouts: usize) -> Self {
        LeafEvaluator::RandomRollout { rollouts: rollouts.max(1) }
    }

    pub fn exact() -> Self {
        LeafEvaluator::AlphaBeta { node_budget: DEFAULT_NODE_BUDGET, transposition: false }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, LeafEvaluator::AlphaBeta { .. })
    }

    /// Value of `state` for `player`.
    pub fn evaluate<G: Game, R: Rng + ?Sized>(
        &self,
        game: &G,
        state: &G::State,
        player: PlayerId,
        rng: &mut R,
    ) -> Result<f64, EvalError> {
        if game.is_terminal(state) {
            return Ok(game.returns(state)?.get(player));
        }
        match *self {
            LeafEvaluator::RandomRollout { rollouts } => {
                let n = rollouts.max(1);
                let mut total = 0.0;
                for _ in 0..n {
                    total += random_playout(game, state, rng)?.get(player);
                }
                Ok(total / n as f64)
            }
            LeafEvaluator::AlphaBeta { node_budget, transposition } => {
                let v = AlphaBeta::new(node_budget, transposition).value(game, state)?;
                Ok(if player == PlayerId::P0 { v } else { -v })
            }
        }
    }
}

/// Plays uniformly random moves from `state` to the end of the game.
pub fn random_playout<G: Game, R: Rng + ?Sized>(
    game: &G,
    state: &G::State,
    rng: &mut R,
) -> Result<crate::game::Returns, GameError> {
    let mut s = state.clone();
    while !game.is_terminal(&s) {
        let actions = game.legal_actions(&s);
        let a = *actions.choose(rng).ok_or(GameError::TerminalState)?;
        s = game.apply(&s, a)?.0;
    }
    game.returns(&s)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Bound {
    Exact,
    Lower,
    Upper,
}

/// Fail-hard alpha-beta over the first player's payoff, searching actions
/// in engine order.
pub struct AlphaBeta<S> {
    budget: usize,
    nodes: usize,
    table: Option<HashMap<S, (f64, Bound)>>,
}

impl<S: Clone + Eq + std::hash::Hash> AlphaBeta<S> {
    pub fn new(budget: usize, transposition: bool) -> Self {
        AlphaBeta { budget, nodes: 0, table: transposition.then(HashMap::new) }
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    /// Minimax value of `state` for the first player.
    pub fn value<G: Game<State = S>>(&mut self, game: &G, state: &S) -> Result<f64, EvalError> {
        self.search(game, state, f64::NEG_INFINITY, f64::INFINITY)
    }

    /// Exact value of every child of `state`, and the acting player's best
    /// action (ties to the smallest id).
    pub fn best_action<G: Game<State = S>>(
        &mut self,
        game: &G,
        state: &S,
    ) -> Result<(Action, Vec<(Action, f64)>), EvalError> {
        let actor = game.current_player(state).ok_or(GameError::TerminalState)?;
        let mut values = Vec::new();
        for a in game.legal_actions(state) {
            let (next, _) = game.apply(state, a)?;
            values.push((a, self.value(game, &next)?));
        }
        let sign = if actor == PlayerId::P0 { 1.0 } else { -1.0 };
        let mut best = values[0];
        for &(a, v) in &values[1..] {
            if sign * v > sign * best.1 {
                best = (a, v);
            }
        }
        Ok((best.0, values))
    }

    fn search<G: Game<State = S>>(
        &mut self,
        game: &G,
        state: &S,
        mut alpha: f64,
        mut beta: f64,
    ) -> Result<f64, EvalError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(EvalError::NodeBudgetExceeded(self.budget));
        }
        let Some(actor) = game.current_player(state) else {
            return Ok(game.returns(state)?.get(PlayerId::P0));
        };
        let (alpha0, beta0) = (alpha, beta);
        if let Some(table) = &self.table {
            if let Some(&(v, bound)) = table.get(state) {
                match bound {
                    Bound::Exact => return Ok(v),
                    Bound::Lower => alpha = alpha.max(v),
                    Bound::Upper => beta = beta.min(v),
                }
                if alpha >= beta {
                    return Ok(v);
                }
            }
        }
        let maximizing = actor == PlayerId::P0;
        let mut best = if maximizing { f64::NEG_INFINITY } else { f64::INFINITY };
        for a in game.legal_actions(state) {
            let (next, _) = game.apply(state, a)?;
            let v = self.search(game, &next, alpha, beta)?;
            if maximizing {
                best = best.max(v);
                alpha = alpha.max(best);
            } else {
                best = best.min(v);
                beta = beta.min(best);
            }
            if alpha >= beta {
                break;
            }
        }
        if let Some(table) = &mut self.table {
            let bound = if best <= alpha0 {
                Bound::Upper
            } else if best >= beta0 {
                Bound::Lower
            } else {
                Bound::Exact
            };
            table.insert(state.clone(), (best, bound));
        }
        Ok(best)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::History;
    use crate::games::rps::{self, RpsState, RpsVariant};
    use crate::games::{PhantomState, PhantomTicTacToe, TreeGame, TreeNode};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn brute_minimax(g: &TreeGame, n: usize) -> f64 {
        match &g.nodes()[n] {
            TreeNode::Leaf(v) => *v,
            TreeNode::Decision { player, children } => {
                let vals = children.iter().map(|&c| brute_minimax(g, c));
                if *player == PlayerId::P0 {
                    vals.fold(f64::NEG_INFINITY, f64::max)
                } else {
                    vals.fold(f64::INFINITY, f64::min)
                }
            }
        }
    }

    #[test]
    fn leave_or_play_world_b_is_a_loss_for_the_first_player() {
        let g = RpsVariant::new();
        let wb = History::new(RpsState::Start).with(&g, rps::ROCK).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let v = LeafEvaluator::exact().evaluate(&g, wb.current(), PlayerId::P0, &mut rng).unwrap();
        assert_eq!(v, -1.0);
        assert_eq!(LeafEvaluator::exact().evaluate(&g, wb.current(), PlayerId::P1, &mut rng).unwrap(), 1.0);
    }

    #[test]
    fn terminal_returns_stored_value() {
        let g = RpsVariant::new();
        let left = g.apply(&RpsState::Start, rps::LEAVE).unwrap().0;
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for e in [LeafEvaluator::rollout(3), LeafEvaluator::exact()] {
            assert_eq!(e.evaluate(&g, &left, PlayerId::P0, &mut rng).unwrap(), -0.6);
        }
    }

    #[test]
    fn rollout_mean_in_world_b() {
        let g = RpsVariant::new();
        let wb = History::new(RpsState::Start).with(&g, rps::ROCK).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let v = LeafEvaluator::rollout(10_000).evaluate(&g, wb.current(), PlayerId::P0, &mut rng).unwrap();
        assert!(v.abs() <= 0.03, "{v}");
    }

    #[test]
    fn alpha_beta_matches_brute_force_on_random_trees() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let g = TreeGame::random(&mut rng, 6, 4);
            let want = brute_minimax(&g, 0);
            for tt in [false, true] {
                assert_eq!(AlphaBeta::new(usize::MAX, tt).value(&g, &0).unwrap(), want);
            }
        }
    }

    #[test]
    fn budget_overflow_is_an_error() {
        let g = PhantomTicTacToe::new();
        let e = LeafEvaluator::AlphaBeta { node_budget: 100, transposition: false };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(
            e.evaluate(&g, &PhantomState::empty(), PlayerId::P0, &mut rng).unwrap_err(),
            EvalError::NodeBudgetExceeded(100)
        );
    }

    #[test]
    fn best_action_reports_child_values() {
        let g = TreeGame::bandit(&[1.0, 3.0, 3.0, -2.0]);
        let (a, vals) = AlphaBeta::new(1000, false).best_action(&g, &0).unwrap();
        assert_eq!(a, Action(1));
        assert_eq!(vals.iter().map(|v| v.1).collect::<Vec<_>>(), vec![1.0, 3.0, 3.0, -2.0]);
    }
}
