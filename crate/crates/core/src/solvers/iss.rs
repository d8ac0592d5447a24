//! Information Set Search: backward induction where each infoset picks
//! its actions from the belief-weighted average of its nodes' values.
//!
//! The searcher maximises and the opponent minimises. An infoset's policy
//! is uniform over its best actions. A node whose infoset policy puts no
//! mass on the actions sampled at that node, or whose infoset is still
//! being solved further up the tree, takes the plain mean over its sampled
//! actions.

use super::SubgamePolicy;
use crate::game::Action;
use crate::search::{argmax_by_action, InfosetId, InfosetView, NodeId, SearchError, SubgameTree, TIE_EPS};

#[derive(Debug, Clone, PartialEq)]
pub struct IssSolution {
    pub policy: SubgamePolicy,
    /// Best action of the first root's actor; `None` if that root is a leaf.
    pub root_action: Option<Action>,
    /// Weighted value of the roots for the searcher.
    pub root_value: f64,
    /// Action values at the first root's infoset.
    pub root_q: Vec<(Action, f64)>,
}

#[derive(Clone, Copy, PartialEq)]
enum Mark {
    Open,
    Busy,
}

struct Solver<'a> {
    tree: &'a SubgameTree,
    view: InfosetView,
    values: Vec<Option<f64>>,
    sigma: Vec<Option<Vec<f64>>>,
    q: Vec<Vec<Option<f64>>>,
    marks: Vec<Mark>,
}

impl<'a> Solver<'a> {
    fn maximizes(&self, info: InfosetId) -> bool {
        self.view.infosets[info].player == self.tree.searcher()
    }

    fn local(&mut self, node: NodeId, action: Action) -> Result<f64, SearchError> {
        let mut v = 0.0;
        for (c, p) in self.tree.transitions(node, action) {
            v += p * self.value(c)?;
        }
        Ok(v)
    }

    /// Unweighted mean over the actions sampled at `node`.
    fn local_mean(&mut self, node: NodeId) -> Result<f64, SearchError> {
        let available: Vec<Action> = self.tree.node(node).available().collect();
        if available.is_empty() {
            return Err(SearchError::ZeroWeight);
        }
        let mut total = 0.0;
        for a in &available {
            total += self.local(node, *a)?;
        }
        Ok(total / available.len() as f64)
    }

    fn value(&mut self, node: NodeId) -> Result<f64, SearchError> {
        if let Some(v) = self.values[node] {
            return Ok(v);
        }
        let n = self.tree.node(node);
        let v = match self.view.node_infoset[node] {
            None => n.mean().ok_or(SearchError::EmptySubgame)?,
            Some(info) if self.sigma[info].is_none() && self.marks[info] == Mark::Busy => {
                // the infoset is still being solved higher up
                return self.local_mean(node);
            }
            Some(info) => {
                let sigma = self.policy(info)?;
                let actions = self.view.infosets[info].actions.clone();
                let available: Vec<Action> = n.available().collect();
                let mut mass = 0.0;
                let mut total = 0.0;
                for (i, a) in actions.iter().enumerate() {
                    if sigma[i] > 0.0 && available.contains(a) {
                        mass += sigma[i];
                        total += sigma[i] * self.local(node, *a)?;
                    }
                }
                if mass > 0.0 {
                    total / mass
                } else {
                    self.local_mean(node)?
                }
            }
        };
        self.values[node] = Some(v);
        Ok(v)
    }

    fn policy(&mut self, info: InfosetId) -> Result<Vec<f64>, SearchError> {
        if let Some(s) = &self.sigma[info] {
            return Ok(s.clone());
        }
        self.marks[info] = Mark::Busy;
        let actions = self.view.infosets[info].actions.clone();
        let members = self.view.infosets[info].nodes.clone();
        let mut num = vec![0.0; actions.len()];
        let mut den = vec![0.0; actions.len()];
        for n in members {
            let w = self.tree.node_weight(n);
            if w <= 0.0 {
                continue;
            }
            for (i, a) in actions.iter().enumerate() {
                if self.tree.node(n).children.contains_key(a) {
                    num[i] += w * self.local(n, *a)?;
                    den[i] += w;
                }
            }
        }
        let q: Vec<Option<f64>> = num.iter().zip(&den).map(|(n, d)| (*d > 0.0).then(|| n / d)).collect();
        let max = self.maximizes(info);
        let best = q
            .iter()
            .flatten()
            .copied()
            .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |b| if max { b.max(v) } else { b.min(v) })))
            .ok_or(SearchError::ZeroWeight)?;
        let ties: Vec<bool> = q.iter().map(|v| v.is_some_and(|v| (v - best).abs() <= TIE_EPS)).collect();
        let k = ties.iter().filter(|&&t| t).count() as f64;
        let sigma: Vec<f64> = ties.iter().map(|&t| if t { 1.0 / k } else { 0.0 }).collect();
        self.q[info] = q;
        self.sigma[info] = Some(sigma.clone());
        self.marks[info] = Mark::Open;
        Ok(sigma)
    }
}

pub fn iss_solve(tree: &SubgameTree) -> Result<IssSolution, SearchError> {
    let root = tree.root().ok_or(SearchError::EmptySubgame)?;
    let view = InfosetView::new(tree);
    let n_info = view.len();
    let mut s = Solver {
        tree,
        values: vec![None; tree.len()],
        sigma: vec![None; n_info],
        q: vec![Vec::new(); n_info],
        marks: vec![Mark::Open; n_info],
        view,
    };
    let mut weighted = 0.0;
    let mut weight = 0.0;
    for &r in tree.roots() {
        let w = if tree.roots().len() == 1 { 1.0 } else { tree.node_weight(r) };
        weighted += w * s.value(r)?;
        weight += w;
    }
    let root_value = if weight > 0.0 { weighted / weight } else { 0.0 };
    for i in 0..n_info {
        s.policy(i)?;
    }
    let (root_action, root_q) = match s.view.node_infoset[root] {
        None => (None, Vec::new()),
        Some(info) => {
            let actions = s.view.infosets[info].actions.clone();
            let pairs: Vec<(Action, f64)> =
                actions.iter().zip(&s.q[info]).filter_map(|(a, q)| q.map(|q| (*a, q))).collect();
            let acts: Vec<Action> = pairs.iter().map(|p| p.0).collect();
            let sign = if s.maximizes(info) { 1.0 } else { -1.0 };
            let vals: Vec<f64> = pairs.iter().map(|p| sign * p.1).collect();
            (argmax_by_action(&acts, &vals).map(|i| acts[i]), pairs)
        }
    };
    let mut policy = SubgamePolicy::default();
    for (i, info) in s.view.infosets.iter().enumerate() {
        let sigma = s.sigma[i].as_ref().expect("every infoset solved");
        policy
            .entries
            .insert((info.player, info.key.clone()), info.actions.iter().copied().zip(sigma.iter().copied()).collect());
    }
    Ok(IssSolution { policy, root_action, root_value, root_q })
}
