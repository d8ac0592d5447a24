//! Determinized search for two-player imperfect-information games.
//!
//! The crate provides rule engines for a handful of small games, samplers
//! that draw histories consistent with a player's infostate, perfect
//! information leaf evaluators, the PIMC and extended PIMC searchers with
//! their subgame solvers, baseline agents, a fusion counter and a match
//! harness.

pub mod baselines;
pub mod determinize;
pub mod fusion;
pub mod game;
pub mod games;
pub mod harness;
pub mod leaf_eval;
pub mod search;
pub mod solvers;

pub use game::{Action, Game, GameError, History, InfostateKey, JointObservation, Observation, PlayerId, Returns};
