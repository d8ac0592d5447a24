//! Agent specifications: `name[:key=value,...]`.
//!
//! | key              | agents              | default  |
//! |------------------|---------------------|----------|
//! | `depth`          | epimc               | 3        |
//! | `solver`         | epimc               | `iss`    |
//! | `explore`        | epimc               | `one`    |
//! | `cfr_iterations` | epimc               | 1000     |
//! | `eval`           | pimc, epimc, iimc   | `rollout`, or `alphabeta` |
//! | `rollouts`       | pimc, epimc, iimc   | 1        |
//! | `node_budget`    | pimc, epimc, iimc   | 20000000 |
//! | `uct_c`          | ismcts              | 1        |
//! | `level2_samples` | iimc                | 5        |

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::HarnessError;
use crate::baselines::{IimcAgent, IsMctsAgent, RandomAgent, DEFAULT_LEVEL2_SAMPLES, DEFAULT_UCT_C};
use crate::game::Game;
use crate::leaf_eval::{LeafEvaluator, DEFAULT_NODE_BUDGET};
use crate::search::{Agent, EpimcAgent, EpimcConfig, Explore, PimcAgent};
use crate::solvers::SolverKind;

const AGENTS: &[&str] = &["pimc", "epimc", "ismcts", "iimc", "random"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentSpec {
    pub name: String,
    pub params: BTreeMap<String, String>,
}

impl AgentSpec {
    pub fn new(name: &str) -> Self {
        AgentSpec { name: name.to_string(), params: BTreeMap::new() }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    /// Adds `key=value` unless the spec already sets `key`.
    pub fn with_default(mut self, key: &str, value: impl ToString) -> Self {
        self.params.entry(key.to_string()).or_insert_with(|| value.to_string());
        self
    }

    fn get<T: FromStr>(&self, key: &str, default: T) -> Result<T, HarnessError> {
        match self.params.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| HarnessError::InvalidConfig(format!("agent {}: cannot parse {key}={v}", self.name))),
        }
    }

    fn check_keys(&self, allowed: &[&str]) -> Result<(), HarnessError> {
        match self.params.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(HarnessError::InvalidConfig(format!("agent {} does not take `{k}`", self.name))),
            None => Ok(()),
        }
    }

    fn evaluator(&self) -> Result<LeafEvaluator, HarnessError> {
        let budget = self.get("node_budget", DEFAULT_NODE_BUDGET)?;
        match self.params.get("eval").map(String::as_str).unwrap_or("rollout") {
            "rollout" => Ok(LeafEvaluator::rollout(self.get("rollouts", 1)?)),
            "alphabeta" | "exact" => Ok(LeafEvaluator::AlphaBeta { node_budget: budget, transposition: false }),
            other => Err(HarnessError::InvalidConfig(format!("unknown evaluator {other:?}"))),
        }
    }

    pub fn build<G: Game + 'static>(&self, game: &G) -> Result<Box<dyn Agent<G>>, HarnessError> {
        const EVAL: [&str; 3] = ["eval", "rollouts", "node_budget"];
        match self.name.as_str() {
            "random" => {
                self.check_keys(&[])?;
                Ok(Box::new(RandomAgent))
            }
            "pimc" => {
                self.check_keys(&EVAL)?;
                Ok(Box::new(PimcAgent::new(game, self.evaluator()?)))
            }
            "epimc" => {
                self.check_keys(&[&EVAL[..], &["depth", "solver", "explore", "cfr_iterations"]].concat())?;
                let mut solver: SolverKind = self
                    .get("solver", SolverKind::Iss)
                    .map_err(|_| HarnessError::InvalidConfig(format!("unknown solver in {self}")))?;
                if let SolverKind::CfrPlus { iterations } = &mut solver {
                    *iterations = self.get("cfr_iterations", *iterations)?;
                }
                let config = EpimcConfig {
                    depth: self.get("depth", crate::search::epimc::DEFAULT_DEPTH)?,
                    explore: self.get("explore", Explore::One)?,
                    solver,
                    evaluator: self.evaluator()?,
                };
                if config.depth == 0 {
                    return Err(HarnessError::InvalidConfig("epimc depth must be at least 1".into()));
                }
                Ok(Box::new(EpimcAgent::new(game, config)))
            }
            "ismcts" => {
                self.check_keys(&["uct_c"])?;
                Ok(Box::new(IsMctsAgent::new(game, self.get("uct_c", DEFAULT_UCT_C)?)))
            }
            "iimc" => {
                self.check_keys(&[&EVAL[..], &["level2_samples"]].concat())?;
                Ok(Box::new(IimcAgent::new(
                    game,
                    self.evaluator()?,
                    self.get("level2_samples", DEFAULT_LEVEL2_SAMPLES)?,
                )))
            }
            "oos" => Err(HarnessError::InvalidConfig("OOS is not available in this build".into())),
            other => Err(HarnessError::InvalidConfig(format!(
                "unknown agent {other:?}; known agents: {}",
                AGENTS.join(", ")
            ))),
        }
    }
}

impl fmt::Display for AgentSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        if !self.params.is_empty() {
            let parts: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            write!(f, ":{}", parts.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for AgentSpec {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, rest) = match s.split_once(':') {
            Some((n, r)) => (n.trim(), Some(r)),
            None => (s.trim(), None),
        };
        if name.is_empty() {
            return Err(HarnessError::InvalidConfig("empty agent name".into()));
        }
        let mut spec = AgentSpec::new(name);
        for part in rest.into_iter().flat_map(|r| r.split(',')).filter(|p| !p.trim().is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| HarnessError::InvalidConfig(format!("agent option {part:?} must be key=value")))?;
            spec.params.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(spec)
    }
}
