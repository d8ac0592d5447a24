//! Single-observer Information Set MCTS.
//!
//! One tree is grown from the searcher's point of view; its nodes are the
//! acting player's infostates. The opponent's keys only cover what
//! happened after the search root.

use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::determinize::BeliefSampler;
use crate::game::{Action, Game, InfostateKey, PlayerId};
use crate::leaf_eval::random_playout;
use crate::search::{Agent, Budget, DecisionContext, SearchError};

pub const DEFAULT_UCT_C: f64 = 1.0;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EdgeStats {
    pub visits: u64,
    pub total: f64,
    /// Number of selections during which this action was legal.
    pub available: u64,
}

#[derive(Debug, Clone, Default)]
pub struct NodeStats {
    pub visits: u64,
    pub edges: BTreeMap<Action, EdgeStats>,
}

type NodeKey = (PlayerId, InfostateKey);

/// The tree built by one search.
#[derive(Debug, Clone, Default)]
pub struct IsMctsStats {
    pub nodes: HashMap<NodeKey, NodeStats>,
    pub root: Option<NodeKey>,
}

impl IsMctsStats {
    pub fn root_stats(&self) -> Option<&NodeStats> {
        self.nodes.get(self.root.as_ref()?)
    }

    /// Most visited root action, ties to the smallest id.
    pub fn best(&self) -> Option<Action> {
        let root = self.root_stats()?;
        let best = root.edges.values().map(|e| e.visits).max()?;
        root.edges.iter().find(|(_, e)| e.visits == best).map(|(a, _)| *a)
    }
}

fn uct(edge: &EdgeStats, c: f64) -> f64 {
    let mean = edge.total / edge.visits as f64;
    mean + c * ((edge.available.max(1) as f64).ln() / edge.visits as f64).sqrt()
}

/// Runs the search and returns its statistics.
pub fn ismcts_search<G: Game, R: Rng + ?Sized>(
    game: &G,
    key: &InfostateKey,
    budget: Budget,
    sampler: &mut BeliefSampler<G>,
    c: f64,
    rng: &mut R,
) -> Result<IsMctsStats, SearchError> {
    let me = key.player();
    let root: NodeKey = (me, key.clone());
    let mut stats = IsMctsStats { nodes: HashMap::new(), root: Some(root.clone()) };
    stats.nodes.insert(root, NodeStats::default());
    let mut clock = budget.clock();
    while clock.keep_going() {
        let world = sampler.sample(game, key, rng)?;
        let mut state = world.current().clone();
        let mut keys = [InfostateKey::new(me), InfostateKey::new(me.opponent())];
        keys[me.index()] = key.clone();
        let mut path: Vec<(NodeKey, Action)> = Vec::new();
        while let Some(actor) = game.current_player(&state) {
            let nk: NodeKey = (actor, keys[actor.index()].clone());
            let Some(node) = stats.nodes.get_mut(&nk) else {
                // first visit of this infostate: it joins the tree, the
                // rest of the playout is random
                stats.nodes.insert(nk, NodeStats::default());
                break;
            };
            let legal = game.legal_actions(&state);
            let untried: Vec<Action> = legal.iter().copied().filter(|a| !node.edges.contains_key(a)).collect();
            let (action, expanded) = if let Some(&a) = untried.choose(rng) {
                node.edges.insert(a, EdgeStats { available: 1, ..Default::default() });
                (a, true)
            } else {
                let mut best: Option<(Action, f64)> = None;
                for a in &legal {
                    let e = node.edges.get_mut(a).expect("all legal actions tried");
                    e.available += 1;
                }
                for a in &legal {
                    let s = uct(&node.edges[a], c);
                    if best.is_none_or(|(_, b)| s > b) {
                        best = Some((*a, s));
                    }
                }
                (best.expect("legal actions are non-empty").0, false)
            };
            path.push((nk, action));
            let (next, obs) = game.apply(&state, action)?;
            for k in &mut keys {
                k.record(actor, action, &obs);
            }
            state = next;
            if expanded {
                if let Some(a) = game.current_player(&state) {
                    stats.nodes.entry((a, keys[a.index()].clone())).or_default();
                }
                break;
            }
        }
        let returns = random_playout(game, &state, rng)?;
        for ((player, key), action) in path {
            let node = stats.nodes.get_mut(&(player, key)).expect("path nodes are in the tree");
            node.visits += 1;
            let e = node.edges.get_mut(&action).expect("path edges exist");
            e.visits += 1;
            e.total += returns.get(player);
        }
        clock.tick();
    }
    Ok(stats)
}

pub fn ismcts_choose<G: Game, R: Rng + ?Sized>(
    game: &G,
    key: &InfostateKey,
    legal: &[Action],
    budget: Budget,
    sampler: &mut BeliefSampler<G>,
    c: f64,
    rng: &mut R,
) -> Result<Action, SearchError> {
    match legal {
        [] => Err(SearchError::NoLegalActions),
        [only] => Ok(*only),
        _ => ismcts_search(game, key, budget, sampler, c, rng)?.best().ok_or(SearchError::NoIterations),
    }
}

pub struct IsMctsAgent<G: Game> {
    pub c: f64,
    sampler: BeliefSampler<G>,
    last: usize,
}

impl<G: Game> IsMctsAgent<G> {
    pub fn new(game: &G, c: f64) -> Self {
        IsMctsAgent { c, sampler: BeliefSampler::for_game(game), last: 0 }
    }
}

impl<G: Game> Agent<G> for IsMctsAgent<G> {
    fn name(&self) -> String {
        "ismcts".into()
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
        let stats = ismcts_search(game, &ctx.key, budget, &mut self.sampler, self.c, rng)?;
        self.last = stats.root_stats().map_or(0, |r| r.visits as usize);
        stats.best().ok_or(SearchError::NoIterations)
    }

    fn last_iterations(&self) -> usize {
        self.last
    }
}
