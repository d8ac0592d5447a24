//! Solvers that work on infosets of a [`SubgameTree`] rather than on
//! individual nodes, so every node of an infoset gets the same policy.

pub mod cfr;
pub mod iss;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::game::{Action, InfostateKey, PlayerId};
use crate::search::{SearchError, SubgameTree};

pub use cfr::{cfrplus_solve, CfrPlusSolver, CfrSolution};
pub use iss::{iss_solve, IssSolution};

pub const DEFAULT_CFR_ITERATIONS: usize = 1000;

/// An action distribution per infoset.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SubgamePolicy {
    pub entries: BTreeMap<(PlayerId, InfostateKey), Vec<(Action, f64)>>,
}

impl SubgamePolicy {
    pub fn get(&self, player: PlayerId, key: &InfostateKey) -> Option<&[(Action, f64)]> {
        self.entries.get(&(player, key.clone())).map(|v| v.as_slice())
    }

    pub fn prob(&self, player: PlayerId, key: &InfostateKey, action: Action) -> f64 {
        self.get(player, key).and_then(|d| d.iter().find(|(a, _)| *a == action)).map_or(0.0, |(_, p)| *p)
    }

    /// The distribution used at a decision node of `tree`.
    pub fn at_node(&self, tree: &SubgameTree, node: usize) -> Option<&[(Action, f64)]> {
        let n = tree.node(node);
        let actor = n.actor?;
        self.get(actor, &n.keys[actor.index()])
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolverKind {
    #[default]
    Iss,
    CfrPlus {
        iterations: usize,
    },
}

impl SolverKind {
    /// Root action and root value for the searcher.
    pub fn solve(&self, tree: &SubgameTree) -> Result<(Option<Action>, f64), SearchError> {
        match *self {
            SolverKind::Iss => {
                let s = iss_solve(tree)?;
                Ok((s.root_action, s.root_value))
            }
            SolverKind::CfrPlus { iterations } => {
                let s = cfrplus_solve(tree, iterations)?;
                Ok((s.root_action, s.root_value))
            }
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolverKind::Iss => f.write_str("iss"),
            SolverKind::CfrPlus { .. } => f.write_str("cfrplus"),
        }
    }
}

impl FromStr for SolverKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "iss" => Ok(SolverKind::Iss),
            "cfrplus" | "cfr+" | "cfr" => Ok(SolverKind::CfrPlus { iterations: DEFAULT_CFR_ITERATIONS }),
            other => Err(format!("unknown solver {other:?}")),
        }
    }
}
