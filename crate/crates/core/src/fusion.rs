//! Strategy fusion on fully enumerated games.
//!
//! An infostate creates fusion under a policy when two of its histories
//! receive different action distributions. [`sf_count`] counts such
//! infostates over both players, and [`verify_propositions`] tracks the
//! count of the EPIMC-induced policy as the depth grows.
//!
//! The EPIMC-induced policy at depth `d` follows the infoset-level solution
//! of the depth-`d` game (built from every chance root, exact frontier
//! values) on histories shorter than `d`, and plays each world's
//! minimax-greedy action from depth `d` on.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::game::{Action, Game, GameError, InfostateKey, PlayerId};
use crate::leaf_eval::LeafEvaluator;
use crate::search::epimc::{query, Explore};
use crate::search::{SearchError, SubgameTree};
use crate::solvers::{iss_solve, SubgamePolicy};

pub const DEFAULT_HISTORY_CAP: usize = 1_000_000;
/// Tolerance for exact policy tables.
pub const TABLE_TOLERANCE: f64 = 1e-9;
/// Tolerance for policies estimated from samples.
pub const EMPIRICAL_TOLERANCE: f64 = 0.05;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FusionError {
    #[error("game tree exceeds {0} histories")]
    CapExceeded(usize),
    #[error("game does not enumerate its chance roots")]
    NotEnumerable,
    #[error("unknown infostate {0:?}")]
    UnknownInfostate(InfostateKey),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Game(#[from] GameError),
}

pub type HistId = usize;

#[derive(Debug, Clone)]
pub struct HistoryNode<S> {
    pub state: S,
    pub parent: Option<HistId>,
    pub action: Option<Action>,
    pub depth: usize,
    pub actor: Option<PlayerId>,
    pub keys: [InfostateKey; 2],
    pub legal: Vec<Action>,
    pub children: Vec<HistId>,
    /// Game value for the first player under perfect information.
    pub value: f64,
}

/// Every history of a game, with infostates grouped by the acting player.
#[derive(Debug, Clone)]
pub struct GameTree<S> {
    pub nodes: Vec<HistoryNode<S>>,
    pub roots: Vec<HistId>,
    pub horizon: usize,
    infostates: BTreeMap<(PlayerId, InfostateKey), Vec<HistId>>,
}

impl<S: Clone> GameTree<S> {
    pub fn enumerate<G: Game<State = S>>(game: &G, cap: usize) -> Result<Self, FusionError> {
        let chance = game.chance_roots().ok_or(FusionError::NotEnumerable)?;
        let mut nodes: Vec<HistoryNode<S>> = Vec::new();
        let mut roots = Vec::new();
        for (state, _) in chance {
            let keys = PlayerId::all().map(|p| InfostateKey::at_root(p, game.root_observation(&state, p)));
            roots.push(nodes.len());
            nodes.push(HistoryNode {
                actor: game.current_player(&state),
                legal: game.legal_actions(&state),
                state,
                parent: None,
                action: None,
                depth: 0,
                keys,
                children: Vec::new(),
                value: 0.0,
            });
        }
        let mut next = 0;
        while next < nodes.len() {
            let id = next;
            next += 1;
            let Some(actor) = nodes[id].actor else { continue };
            for a in nodes[id].legal.clone() {
                if nodes.len() >= cap {
                    return Err(FusionError::CapExceeded(cap));
                }
                let (state, obs) = game.apply(&nodes[id].state, a)?;
                let keys = [nodes[id].keys[0].recorded(actor, a, &obs), nodes[id].keys[1].recorded(actor, a, &obs)];
                let child = nodes.len();
                nodes.push(HistoryNode {
                    actor: game.current_player(&state),
                    legal: game.legal_actions(&state),
                    state,
                    parent: Some(id),
                    action: Some(a),
                    depth: nodes[id].depth + 1,
                    keys,
                    children: Vec::new(),
                    value: 0.0,
                });
                nodes[id].children.push(child);
            }
        }
        // children always come after their parent
        for id in (0..nodes.len()).rev() {
            let value = match nodes[id].actor {
                None => game.returns(&nodes[id].state)?.0[0],
                Some(p) => {
                    let vals = nodes[id].children.iter().map(|&c| nodes[c].value);
                    if p == PlayerId::P0 {
                        vals.fold(f64::NEG_INFINITY, f64::max)
                    } else {
                        vals.fold(f64::INFINITY, f64::min)
                    }
                }
            };
            nodes[id].value = value;
        }
        let mut infostates: BTreeMap<(PlayerId, InfostateKey), Vec<HistId>> = BTreeMap::new();
        for (id, n) in nodes.iter().enumerate() {
            if let Some(p) = n.actor {
                infostates.entry((p, n.keys[p.index()].clone())).or_default().push(id);
            }
        }
        Ok(GameTree { nodes, roots, horizon: game.horizon(), infostates })
    }
}

impl<S> GameTree<S> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Decision histories grouped by the actor's infostate.
    pub fn infostates(&self) -> &BTreeMap<(PlayerId, InfostateKey), Vec<HistId>> {
        &self.infostates
    }

    /// Actions from the root to `h`.
    pub fn path(&self, h: HistId) -> Vec<Action> {
        let mut out = Vec::new();
        let mut cur = h;
        while let (Some(p), Some(a)) = (self.nodes[cur].parent, self.nodes[cur].action) {
            out.push(a);
            cur = p;
        }
        out.reverse();
        out
    }

    /// Root index of `h`'s deal.
    pub fn root_of(&self, h: HistId) -> HistId {
        let mut cur = h;
        while let Some(p) = self.nodes[cur].parent {
            cur = p;
        }
        cur
    }
}

/// A policy over the histories of an enumerated game. The returned vector
/// is aligned with the history's legal actions.
pub trait PolicyOracle<S> {
    fn distribution(&self, tree: &GameTree<S>, h: HistId) -> Vec<f64>;
}

/// Every legal action equally likely.
#[derive(Debug, Clone, Copy, Default)]
pub struct UniformPolicy;

impl<S> PolicyOracle<S> for UniformPolicy {
    fn distribution(&self, tree: &GameTree<S>, h: HistId) -> Vec<f64> {
        let n = tree.nodes[h].legal.len();
        vec![1.0 / n as f64; n]
    }
}

/// The acting player's minimax-best action in the history's own world,
/// ties going to the smallest action id.
#[derive(Debug, Clone, Copy, Default)]
pub struct GreedyPolicy;

fn greedy<S>(tree: &GameTree<S>, h: HistId) -> Vec<f64> {
    let n = &tree.nodes[h];
    let sign = if n.actor == Some(PlayerId::P0) { 1.0 } else { -1.0 };
    let vals: Vec<f64> = n.children.iter().map(|&c| sign * tree.nodes[c].value).collect();
    let best = crate::search::argmax_by_action(&n.legal, &vals);
    (0..n.legal.len()).map(|i| if Some(i) == best { 1.0 } else { 0.0 }).collect()
}

impl<S> PolicyOracle<S> for GreedyPolicy {
    fn distribution(&self, tree: &GameTree<S>, h: HistId) -> Vec<f64> {
        greedy(tree, h)
    }
}

/// An explicit table; histories missing from it play uniformly.
#[derive(Debug, Clone, Default)]
pub struct TablePolicy(pub BTreeMap<HistId, Vec<f64>>);

impl<S> PolicyOracle<S> for TablePolicy {
    fn distribution(&self, tree: &GameTree<S>, h: HistId) -> Vec<f64> {
        self.0.get(&h).cloned().unwrap_or_else(|| UniformPolicy.distribution(tree, h))
    }
}

/// The EPIMC-induced policy at a fixed depth.
#[derive(Debug, Clone)]
pub struct EpimcInducedPolicy {
    pub depth: usize,
    pub subgame: SubgamePolicy,
}

impl EpimcInducedPolicy {
    pub fn new<G: Game>(game: &G, tree: &GameTree<G::State>, depth: usize) -> Result<Self, FusionError> {
        let chance = game.chance_roots().ok_or(FusionError::NotEnumerable)?;
        let searcher = PlayerId::P0;
        let mut sub = SubgameTree::new(searcher, depth);
        let evaluator = LeafEvaluator::exact();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for ((state, prob), &r) in chance.iter().zip(&tree.roots) {
            let w = sub.add_world(*prob);
            let root = sub.add_root(tree.nodes[r].keys.clone(), game.current_player(state));
            query(game, &mut sub, root, state, w, 1.0, depth, &evaluator, Explore::All, &mut rng)?;
        }
        let subgame = if depth == 0 { SubgamePolicy::default() } else { iss_solve(&sub)?.policy };
        Ok(EpimcInducedPolicy { depth, subgame })
    }
}

impl<S> PolicyOracle<S> for EpimcInducedPolicy {
    fn distribution(&self, tree: &GameTree<S>, h: HistId) -> Vec<f64> {
        let n = &tree.nodes[h];
        match n.actor {
            Some(p) if n.depth < self.depth => {
                let key = &n.keys[p.index()];
                n.legal.iter().map(|&a| self.subgame.prob(p, key, a)).collect()
            }
            _ => greedy(tree, h),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InfostateFusion {
    pub player: PlayerId,
    pub key: InfostateKey,
    pub histories: usize,
    /// Action paths of two histories whose distributions differ.
    pub witness: Option<[Vec<Action>; 2]>,
}

impl InfostateFusion {
    pub fn creates_fusion(&self) -> bool {
        self.witness.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FusionReport {
    pub label: String,
    pub horizon: usize,
    pub sf: usize,
    pub infostates: Vec<InfostateFusion>,
}

/// Two histories of the infostate whose distributions are more than
/// `tolerance` apart in max norm, if any.
pub fn fusion_witness<S>(
    tree: &GameTree<S>,
    policy: &dyn PolicyOracle<S>,
    members: &[HistId],
    tolerance: f64,
) -> Option<(HistId, HistId)> {
    let mut members = members.to_vec();
    members.sort_unstable();
    let dists: Vec<(HistId, Vec<f64>)> = members.iter().map(|&h| (h, policy.distribution(tree, h))).collect();
    let width = dists.iter().map(|d| d.1.len()).max().unwrap_or(0);
    for i in 0..width {
        let at = |d: &(HistId, Vec<f64>)| d.1.get(i).copied().unwrap_or(0.0);
        let lo = dists.iter().min_by(|a, b| at(a).total_cmp(&at(b)))?;
        let hi = dists.iter().max_by(|a, b| at(a).total_cmp(&at(b)))?;
        if at(hi) - at(lo) > tolerance {
            return Some((lo.0.min(hi.0), lo.0.max(hi.0)));
        }
    }
    None
}

/// Whether `policy` fuses the histories of `player`'s infostate `key`.
pub fn creates_fusion<S>(
    tree: &GameTree<S>,
    policy: &dyn PolicyOracle<S>,
    player: PlayerId,
    key: &InfostateKey,
    tolerance: f64,
) -> Result<Option<(HistId, HistId)>, FusionError> {
    let members =
        tree.infostates().get(&(player, key.clone())).ok_or_else(|| FusionError::UnknownInfostate(key.clone()))?;
    Ok(fusion_witness(tree, policy, members, tolerance))
}

pub fn sf_count<S>(tree: &GameTree<S>, policy: &dyn PolicyOracle<S>, tolerance: f64, label: &str) -> FusionReport {
    let infostates: Vec<InfostateFusion> = tree
        .infostates()
        .iter()
        .map(|((player, key), members)| InfostateFusion {
            player: *player,
            key: key.clone(),
            histories: members.len(),
            witness: fusion_witness(tree, policy, members, tolerance).map(|(a, b)| [tree.path(a), tree.path(b)]),
        })
        .collect();
    let sf = infostates.iter().filter(|i| i.creates_fusion()).count();
    FusionReport { label: label.to_string(), horizon: tree.horizon, sf, infostates }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropositionReport {
    pub horizon: usize,
    pub depths: Vec<usize>,
    pub sf: Vec<usize>,
    /// Fusion count at the horizon.
    pub sf_at_horizon: usize,
    /// Counts never increase with depth.
    pub non_increasing: bool,
    /// Every positive count is strictly reduced at a larger depth, the
    /// horizon included.
    pub strictly_reduced: bool,
    pub zero_at_horizon: bool,
}

impl PropositionReport {
    pub fn all_hold(&self) -> bool {
        self.non_increasing && self.strictly_reduced && self.zero_at_horizon
    }
}

pub fn epimc_fusion_report<G: Game>(
    game: &G,
    tree: &GameTree<G::State>,
    depth: usize,
) -> Result<FusionReport, FusionError> {
    let policy = EpimcInducedPolicy::new(game, tree, depth)?;
    Ok(sf_count(tree, &policy, TABLE_TOLERANCE, &format!("epimc d={depth}")))
}

/// SF of the EPIMC-induced policy at each depth, checked against the three
/// depth properties.
pub fn verify_propositions<G: Game>(game: &G, depths: &[usize]) -> Result<PropositionReport, FusionError> {
    let tree = GameTree::enumerate(game, DEFAULT_HISTORY_CAP)?;
    let mut depths = depths.to_vec();
    depths.sort_unstable();
    depths.dedup();
    let mut sf = Vec::with_capacity(depths.len());
    for &d in &depths {
        sf.push(epimc_fusion_report(game, &tree, d)?.sf);
    }
    let horizon = tree.horizon;
    let sf_at_horizon = match depths.iter().position(|&d| d == horizon) {
        Some(i) => sf[i],
        None => epimc_fusion_report(game, &tree, horizon)?.sf,
    };
    let non_increasing = sf.windows(2).all(|w| w[1] <= w[0]);
    let mut tail: Vec<usize> = sf.clone();
    if !depths.contains(&horizon) {
        tail.push(sf_at_horizon);
    }
    let strictly_reduced = (0..tail.len()).all(|i| tail[i] == 0 || tail[i + 1..].iter().any(|&s| s < tail[i]));
    Ok(PropositionReport {
        horizon,
        depths,
        sf,
        sf_at_horizon,
        non_increasing,
        strictly_reduced,
        zero_at_horizon: sf_at_horizon == 0,
    })
}
