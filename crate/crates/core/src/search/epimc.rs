//! Extended PIMC: determinized random-walk queries build a depth-limited
//! subgame whose frontier holds averaged leaf values, and an infoset-level
//! solver picks the root action.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::subgame::{NodeId, SubgameTree};
use super::{Agent, Budget, DecisionContext, SearchError};
use crate::determinize::BeliefSampler;
use crate::game::{Action, Game, InfostateKey};
use crate::leaf_eval::LeafEvaluator;
use crate::solvers::SolverKind;

pub const DEFAULT_DEPTH: usize = 3;

/// How many actions a query follows at each step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Explore {
    /// One uniformly random action.
    #[default]
    One,
    /// Every legal action.
    All,
}

impl fmt::Display for Explore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Explore::One => "one",
            Explore::All => "all",
        })
    }
}

impl FromStr for Explore {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "one" => Ok(Explore::One),
            "all" => Ok(Explore::All),
            other => Err(format!("explore must be one or all, got {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpimcConfig {
    pub depth: usize,
    pub explore: Explore,
    pub solver: SolverKind,
    pub evaluator: LeafEvaluator,
}

impl Default for EpimcConfig {
    fn default() -> Self {
        EpimcConfig {
            depth: DEFAULT_DEPTH,
            explore: Explore::One,
            solver: SolverKind::Iss,
            evaluator: LeafEvaluator::default(),
        }
    }
}

/// Walks `d` steps from `node` in the world `state`, creating nodes on the
/// way and adding one leaf evaluation where the walk stops. `reach` is the
/// uniform-prior probability of the path so far in `world`.
#[allow(clippy::too_many_arguments)]
pub fn query<G: Game, R: Rng + ?Sized>(
    game: &G,
    tree: &mut SubgameTree,
    node: NodeId,
    state: &G::State,
    world: usize,
    reach: f64,
    d: usize,
    evaluator: &LeafEvaluator,
    explore: Explore,
    rng: &mut R,
) -> Result<(), SearchError> {
    tree.set_reach(node, world, reach);
    if d == 0 || game.is_terminal(state) {
        let v = evaluator.evaluate(game, state, tree.searcher(), rng)?;
        tree.add_value(node, v);
        return Ok(());
    }
    let legal = game.legal_actions(state);
    let p = reach / legal.len() as f64;
    let chosen: Vec<Action> = match explore {
        Explore::One => vec![legal[rng.gen_range(0..legal.len())]],
        Explore::All => legal,
    };
    for a in chosen {
        let (next, obs) = game.apply(state, a)?;
        let child = tree.child(node, a, &obs, game.current_player(&next));
        query(game, tree, child, &next, world, p, d - 1, evaluator, explore, rng)?;
    }
    Ok(())
}

/// Samples and queries until the budget runs out.
pub fn build_subgame<G: Game, R: Rng + ?Sized>(
    game: &G,
    key: &InfostateKey,
    budget: Budget,
    sampler: &mut BeliefSampler<G>,
    config: &EpimcConfig,
    rng: &mut R,
) -> Result<SubgameTree, SearchError> {
    let me = key.player();
    let mut keys = [InfostateKey::new(me), InfostateKey::new(me.opponent())];
    keys[me.index()] = key.clone();
    let mut tree = SubgameTree::new(me, config.depth);
    let mut roots: HashMap<InfostateKey, NodeId> = HashMap::new();
    let mut worlds: HashMap<(NodeId, G::State), usize> = HashMap::new();
    let mut clock = budget.clock();
    while clock.keep_going() {
        let history = sampler.sample(game, key, rng)?;
        let state = history.current();
        // each world enters under the opponent's own view of it
        let opp = history.infostate(game, me.opponent());
        let root = *roots.entry(opp.clone()).or_insert_with(|| {
            let mut k = keys.clone();
            k[me.opponent().index()] = opp;
            tree.add_root(k, Some(me))
        });
        let w = *worlds.entry((root, state.clone())).or_insert_with(|| tree.add_world(0.0));
        tree.add_world_weight(w, 1.0);
        query(game, &mut tree, root, state, w, 1.0, config.depth, &config.evaluator, config.explore, rng)?;
        clock.tick();
    }
    if clock.iterations() == 0 {
        return Err(SearchError::EmptySubgame);
    }
    Ok(tree)
}

/// Builds the subgame and returns the solver's root action.
pub fn epimc_choose<G: Game, R: Rng + ?Sized>(
    game: &G,
    key: &InfostateKey,
    legal: &[Action],
    budget: Budget,
    sampler: &mut BeliefSampler<G>,
    config: &EpimcConfig,
    rng: &mut R,
) -> Result<Action, SearchError> {
    match legal {
        [] => Err(SearchError::NoLegalActions),
        [only] => Ok(*only),
        _ => {
            let tree = build_subgame(game, key, budget, sampler, config, rng)?;
            config.solver.solve(&tree)?.0.ok_or(SearchError::EmptySubgame)
        }
    }
}

pub struct EpimcAgent<G: Game> {
    pub config: EpimcConfig,
    sampler: BeliefSampler<G>,
    last: usize,
}

impl<G: Game> EpimcAgent<G> {
    pub fn new(game: &G, config: EpimcConfig) -> Self {
        EpimcAgent { config, sampler: BeliefSampler::for_game(game), last: 0 }
    }

    pub fn with_sampler(config: EpimcConfig, sampler: BeliefSampler<G>) -> Self {
        EpimcAgent { config, sampler, last: 0 }
    }
}

impl<G: Game> Agent<G> for EpimcAgent<G> {
    fn name(&self) -> String {
        "epimc".into()
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
        let tree = build_subgame(game, &ctx.key, budget, &mut self.sampler, &self.config, rng)?;
        self.last = tree.total_weight() as usize;
        self.config.solver.solve(&tree)?.0.ok_or(SearchError::EmptySubgame)
    }

    fn last_iterations(&self) -> usize {
        self.last
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::determinize::SamplingStrategy;
    use crate::game::PlayerId;
    use crate::games::rps::{self, RpsState, RpsVariant};
    use crate::search::pimc::pimc_choose;
    use crate::solvers::{cfrplus_solve, iss_solve};
    use rand::SeedableRng;

    fn leave_or_play_tree(depth: usize, iters: usize, seed: u64) -> SubgameTree {
        let g = RpsVariant::new();
        let cfg = EpimcConfig { depth, evaluator: LeafEvaluator::exact(), ..Default::default() };
        let mut s = BeliefSampler::new(SamplingStrategy::Enumerate);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        build_subgame(&g, &InfostateKey::new(PlayerId::P0), Budget::Iterations(iters), &mut s, &cfg, &mut rng).unwrap()
    }

    #[test]
    fn leave_or_play_depth_two_plays() {
        let tree = leave_or_play_tree(2, 2000, 5);
        let sol = iss_solve(&tree).unwrap();
        assert!(matches!(sol.root_action, Some(a) if a != rps::LEAVE));
        assert!(sol.root_value.abs() < 1e-9, "{}", sol.root_value);
        let q: Vec<f64> = sol.root_q.iter().map(|p| p.1).collect();
        assert!((q[0] + 0.6).abs() < 1e-12);
        let cfr = cfrplus_solve(&tree, 1000).unwrap();
        assert_ne!(cfr.root_action, Some(rps::LEAVE));
        assert!(cfr.root_value.abs() < 0.02, "{}", cfr.root_value);
    }

    #[test]
    fn leave_or_play_frontier_means_are_exact() {
        let tree = leave_or_play_tree(2, 30_000, 8);
        // 1 root + 4 root children + 9 terminal leaves below the three throws
        assert_eq!(tree.len(), 14);
        for n in tree.nodes() {
            if let Some(m) = n.mean() {
                assert!([-1.0, 0.0, 1.0, -0.6].iter().any(|v| (v - m).abs() < 1e-9), "{m}");
            }
        }
        let rock = tree.node(tree.root().unwrap()).children[&rps::ROCK][0];
        let paper = tree.node(rock).children[&rps::PAPER][0];
        assert_eq!(tree.node(paper).mean(), Some(-1.0));
    }

    #[test]
    fn depth_zero_makes_the_root_a_leaf() {
        let tree = leave_or_play_tree(0, 10, 1);
        assert_eq!(tree.len(), 1);
        let sol = iss_solve(&tree).unwrap();
        assert_eq!(sol.root_action, None);
    }

    #[test]
    fn depth_one_all_matches_pimc() {
        let g = RpsVariant::new();
        let key = InfostateKey::new(PlayerId::P0);
        let legal = g.legal_actions(&RpsState::Start);
        let cfg =
            EpimcConfig { depth: 1, explore: Explore::All, evaluator: LeafEvaluator::exact(), ..Default::default() };
        for seed in 0..20 {
            let mut s = BeliefSampler::new(SamplingStrategy::Enumerate);
            let a = epimc_choose(
                &g,
                &key,
                &legal,
                Budget::Iterations(3),
                &mut s,
                &cfg,
                &mut ChaCha8Rng::seed_from_u64(seed),
            );
            let b = pimc_choose(
                &g,
                &key,
                &legal,
                Budget::Iterations(3),
                &mut s,
                &cfg.evaluator,
                &mut ChaCha8Rng::seed_from_u64(seed),
            );
            assert_eq!(a.unwrap(), b.unwrap());
        }
    }
}
