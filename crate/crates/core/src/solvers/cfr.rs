//! CFR+ over the infosets of a subgame: regret matching with regrets
//! floored at zero, alternating updates and linearly weighted averaging.

use super::SubgamePolicy;
use crate::game::{Action, PlayerId};
use crate::search::{InfosetId, InfosetView, NodeId, SearchError, SubgameTree};

#[derive(Debug, Clone, PartialEq)]
pub struct CfrSolution {
    pub policy: SubgamePolicy,
    pub root_action: Option<Action>,
    /// Searcher's value under the average profile.
    pub root_value: f64,
}

pub struct CfrPlusSolver<'a> {
    tree: &'a SubgameTree,
    view: InfosetView,
    regrets: Vec<Vec<f64>>,
    strategy_sum: Vec<Vec<f64>>,
    roots: Vec<(NodeId, f64)>,
    t: usize,
}

impl<'a> CfrPlusSolver<'a> {
    pub fn new(tree: &'a SubgameTree) -> Result<Self, SearchError> {
        if tree.roots().is_empty() {
            return Err(SearchError::EmptySubgame);
        }
        let view = InfosetView::new(tree);
        let regrets = view.infosets.iter().map(|i| vec![0.0; i.actions.len()]).collect();
        let strategy_sum = view.infosets.iter().map(|i| vec![0.0; i.actions.len()]).collect();
        let mut roots: Vec<(NodeId, f64)> = tree.roots().iter().map(|&r| (r, tree.node_weight(r))).collect();
        let total: f64 = roots.iter().map(|r| r.1).sum();
        for r in &mut roots {
            r.1 = if total > 0.0 { r.1 / total } else { 1.0 / tree.roots().len() as f64 };
        }
        Ok(CfrPlusSolver { tree, view, regrets, strategy_sum, roots, t: 0 })
    }

    pub fn view(&self) -> &InfosetView {
        &self.view
    }

    pub fn iterations(&self) -> usize {
        self.t
    }

    /// Cumulative regrets per infoset, aligned with the infoset's actions.
    pub fn regrets(&self) -> &[Vec<f64>] {
        &self.regrets
    }

    /// One iteration: a traversal for each player, each followed by its
    /// regret update.
    pub fn iterate(&mut self) -> Result<(), SearchError> {
        self.t += 1;
        for player in PlayerId::all() {
            let mut inst: Vec<Vec<f64>> = self.regrets.iter().map(|r| vec![0.0; r.len()]).collect();
            for (r, w) in self.roots.clone() {
                self.traverse(r, player, 1.0, w, &mut inst)?;
            }
            for (info, delta) in inst.iter().enumerate() {
                if self.view.infosets[info].player != player {
                    continue;
                }
                for (r, d) in self.regrets[info].iter_mut().zip(delta) {
                    *r = (*r + d).max(0.0);
                }
            }
        }
        Ok(())
    }

    fn available(&self, node: NodeId, info: InfosetId) -> Vec<bool> {
        let n = self.tree.node(node);
        self.view.infosets[info].actions.iter().map(|a| n.children.contains_key(a)).collect()
    }

    fn restrict(weights: &[f64], avail: &[bool]) -> Vec<f64> {
        let total: f64 = weights.iter().zip(avail).filter(|(_, &ok)| ok).map(|(w, _)| w.max(0.0)).sum();
        let k = avail.iter().filter(|&&ok| ok).count() as f64;
        weights
            .iter()
            .zip(avail)
            .map(|(w, &ok)| match (ok, total > 0.0) {
                (false, _) => 0.0,
                (true, true) => w.max(0.0) / total,
                (true, false) => 1.0 / k,
            })
            .collect()
    }

    fn traverse(
        &mut self,
        node: NodeId,
        player: PlayerId,
        reach_me: f64,
        reach_other: f64,
        inst: &mut [Vec<f64>],
    ) -> Result<f64, SearchError> {
        let Some(info) = self.view.node_infoset[node] else {
            return self.tree.node(node).mean().ok_or(SearchError::EmptySubgame);
        };
        let actor = self.view.infosets[info].player;
        let avail = self.available(node, info);
        let sigma = Self::restrict(&self.regrets[info], &avail);
        let actions = self.view.infosets[info].actions.clone();
        let mut child_values = vec![0.0; actions.len()];
        let mut v = 0.0;
        for (i, a) in actions.iter().enumerate() {
            if !avail[i] {
                continue;
            }
            let mut va = 0.0;
            for (c, q) in self.tree.transitions(node, *a) {
                let (rm, ro) = if actor == player {
                    (reach_me * sigma[i], reach_other * q)
                } else {
                    (reach_me, reach_other * sigma[i] * q)
                };
                va += q * self.traverse(c, player, rm, ro, inst)?;
            }
            child_values[i] = va;
            v += sigma[i] * va;
        }
        if actor == player {
            let sign = if player == self.tree.searcher() { 1.0 } else { -1.0 };
            let t = self.t as f64;
            for i in 0..actions.len() {
                if avail[i] {
                    inst[info][i] += reach_other * sign * (child_values[i] - v);
                    self.strategy_sum[info][i] += t * reach_me * sigma[i];
                }
            }
        }
        Ok(v)
    }

    /// Linearly weighted average strategy at an infoset.
    pub fn average(&self, info: InfosetId) -> Vec<f64> {
        let all = vec![true; self.strategy_sum[info].len()];
        Self::restrict(&self.strategy_sum[info], &all)
    }

    pub fn average_policy(&self) -> SubgamePolicy {
        let mut policy = SubgamePolicy::default();
        for (i, info) in self.view.infosets.iter().enumerate() {
            policy
                .entries
                .insert((info.player, info.key.clone()), info.actions.iter().copied().zip(self.average(i)).collect());
        }
        policy
    }

    fn average_value_at(&self, node: NodeId) -> Result<f64, SearchError> {
        let Some(info) = self.view.node_infoset[node] else {
            return self.tree.node(node).mean().ok_or(SearchError::EmptySubgame);
        };
        let avail = self.available(node, info);
        let sigma = Self::restrict(&self.average(info), &avail);
        let mut v = 0.0;
        for (i, a) in self.view.infosets[info].actions.iter().enumerate() {
            if sigma[i] > 0.0 {
                for (c, q) in self.tree.transitions(node, *a) {
                    v += sigma[i] * q * self.average_value_at(c)?;
                }
            }
        }
        Ok(v)
    }

    /// Searcher's value of the roots under the average profile.
    pub fn average_value(&self) -> Result<f64, SearchError> {
        let mut v = 0.0;
        for &(r, w) in &self.roots {
            v += w * self.average_value_at(r)?;
        }
        Ok(v)
    }

    /// Action with the highest average probability at the first root,
    /// ties to the smallest id.
    pub fn root_action(&self) -> Option<Action> {
        let info = self.view.node_infoset[self.roots[0].0]?;
        let avg = self.average(info);
        let actions = &self.view.infosets[info].actions;
        let best = avg.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        (0..actions.len()).filter(|&i| avg[i] >= best - 1e-12).map(|i| actions[i]).min()
    }
}

pub fn cfrplus_solve(tree: &SubgameTree, iterations: usize) -> Result<CfrSolution, SearchError> {
    let mut solver = CfrPlusSolver::new(tree)?;
    for _ in 0..iterations {
        solver.iterate()?;
    }
    Ok(CfrSolution {
        policy: solver.average_policy(),
        root_action: solver.root_action(),
        root_value: solver.average_value()?,
    })
}
