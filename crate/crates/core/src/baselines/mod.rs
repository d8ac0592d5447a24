//! Comparison agents.

pub mod iimc;
pub mod ismcts;
pub mod random;

pub use iimc::{iimc_choose, IimcAgent, DEFAULT_LEVEL2_SAMPLES};
pub use ismcts::{ismcts_choose, IsMctsAgent, IsMctsStats, DEFAULT_UCT_C};
pub use random::{random_choose, RandomAgent};
