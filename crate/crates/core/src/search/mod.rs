//! Search budgets, the agent contract and the determinized searchers.

pub mod epimc;
pub mod pimc;
pub mod subgame;

use std::fmt;
use std::str::FromStr;

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::determinize::SampleError;
use crate::game::{Action, Game, GameError, InfostateKey, PlayerId};
use crate::leaf_eval::EvalError;

pub use epimc::{epimc_choose, EpimcAgent, EpimcConfig, Explore};
pub use pimc::{pimc_choose, pimc_scores, ActionScores, PimcAgent};
pub use subgame::{InfosetId, InfosetView, NodeId, SubgameNode, SubgameTree};

/// Values closer than this are treated as ties.
pub const TIE_EPS: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SearchError {
    #[error("no legal actions at the decision point")]
    NoLegalActions,
    #[error("the budget allowed no completed iteration")]
    NoIterations,
    #[error("the subgame has no completed query")]
    EmptySubgame,
    #[error("infoset has zero total weight")]
    ZeroWeight,
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Game(#[from] GameError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Budget {
    Iterations(usize),
    WallClockMillis(u64),
}

impl Budget {
    pub fn is_reproducible(&self) -> bool {
        matches!(self, Budget::Iterations(_))
    }

    pub fn clock(&self) -> BudgetClock {
        BudgetClock::new(*self)
    }
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Budget::Iterations(k) => write!(f, "iters:{k}"),
            Budget::WallClockMillis(ms) => write!(f, "ms:{ms}"),
        }
    }
}

impl FromStr for Budget {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, n) = s.split_once(':').ok_or_else(|| format!("budget {s:?} must be iters:K or ms:K"))?;
        let n: u64 = n.trim().parse().map_err(|_| format!("bad budget amount in {s:?}"))?;
        match kind.trim() {
            "iters" => Ok(Budget::Iterations(n as usize)),
            "ms" => Ok(Budget::WallClockMillis(n)),
            other => Err(format!("unknown budget kind {other:?}")),
        }
    }
}

/// Tracks budget consumption within one decision.
pub struct BudgetClock {
    budget: Budget,
    done: usize,
    #[cfg(not(target_arch = "wasm32"))]
    start: Option<std::time::Instant>,
}

impl BudgetClock {
    pub fn new(budget: Budget) -> Self {
        BudgetClock {
            budget,
            done: 0,
            #[cfg(not(target_arch = "wasm32"))]
            start: matches!(budget, Budget::WallClockMillis(_)).then(std::time::Instant::now),
        }
    }

    /// Whether another iteration may start.
    pub fn keep_going(&self) -> bool {
        match self.budget {
            Budget::Iterations(k) => self.done < k,
            #[cfg(not(target_arch = "wasm32"))]
            Budget::WallClockMillis(ms) => self.start.is_some_and(|s| s.elapsed().as_millis() < u128::from(ms)),
            #[cfg(target_arch = "wasm32")]
            Budget::WallClockMillis(ms) => (self.done as u64) < ms,
        }
    }

    pub fn tick(&mut self) {
        self.done += 1;
    }

    pub fn iterations(&self) -> usize {
        self.done
    }
}

/// What an agent is told at a decision point: its own infostate and the
/// actions it may take. Agents never see the world state.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionContext {
    pub key: InfostateKey,
    pub legal_actions: Vec<Action>,
}

impl DecisionContext {
    pub fn player(&self) -> PlayerId {
        self.key.player()
    }
}

/// The shared agent contract.
pub trait Agent<G: Game>: Send {
    fn name(&self) -> String;

    fn choose(
        &mut self,
        game: &G,
        ctx: &DecisionContext,
        budget: Budget,
        rng: &mut ChaCha8Rng,
    ) -> Result<Action, SearchError>;

    /// Iterations spent by the last `choose` call.
    fn last_iterations(&self) -> usize {
        0
    }
}

/// Index of the largest value, ties (within [`TIE_EPS`]) going to the
/// smallest action id.
pub fn argmax_by_action(actions: &[Action], values: &[f64]) -> Option<usize> {
    let best = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    (0..actions.len()).filter(|&i| values[i] >= best - TIE_EPS).min_by_key(|&i| actions[i])
}
