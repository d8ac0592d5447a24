//! Sampling histories consistent with an infostate.
//!
//! The exact samplers walk the game forward from every root consistent
//! with the player's private view, forcing the player's own recorded
//! actions and branching over the opponent's, and keep only transitions
//! whose observation matches the next trace event. Counts of consistent
//! continuations are memoised on `(state, trace position)`, so a uniform
//! draw over all consistent histories costs one descent through that
//! counting DAG.

use std::collections::HashMap;
use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

use crate::game::{Action, Game, GameError, History, InfostateKey, JointObservation, PlayerId};

pub const DEFAULT_MAX_TRIES: usize = 10_000;
pub const DEFAULT_NODE_CAP: usize = 1_000_000;
const CACHE_LIMIT: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplingStrategy {
    /// Exact uniform draw over every consistent history.
    Enumerate,
    /// Redraw the hidden part of the deal, then keep it only if the
    /// recorded trace can be replayed on it.
    DealResample,
    /// Forward proposal from a random consistent root, picking uniformly
    /// among the locally consistent transitions at each step and restarting
    /// on dead ends.
    Rejection { max_tries: usize },
}

impl SamplingStrategy {
    /// The strategy used by default for a game, by its name.
    pub fn for_game(name: &str) -> Self {
        match name {
            "card" | "battleship" => SamplingStrategy::DealResample,
            _ => SamplingStrategy::Enumerate,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SampleError {
    #[error("no history is consistent with the infostate")]
    NoConsistentHistory,
    #[error("no consistent history found within {0} tries")]
    TriesExhausted(usize),
    #[error("enumeration exceeded the node cap of {0}")]
    CapExceeded(usize),
    #[error("the game cannot enumerate roots consistent with this infostate")]
    NotEnumerable,
    #[error(transparent)]
    Game(#[from] GameError),
}

struct Transition<S> {
    action: Action,
    actor: PlayerId,
    next: S,
    obs: JointObservation,
    next_pos: usize,
}

/// Position in the key's trace right after the root, if `root` agrees
/// with the key's private view of the deal.
fn start_pos<G: Game>(game: &G, root: &G::State, key: &InfostateKey) -> Option<usize> {
    let obs = game.root_observation(root, key.player());
    if obs.is_empty() {
        return Some(0);
    }
    let first = key.trace().first()?;
    (first.action.is_none() && first.observation == obs).then_some(1)
}

fn root_view(key: &InfostateKey) -> crate::game::Observation {
    key.trace().first().filter(|e| e.action.is_none()).map(|e| e.observation.clone()).unwrap_or_default()
}

/// Transitions out of `state` that keep the history consistent with the
/// key, given that the first `pos` trace events have been matched.
fn transitions<G: Game>(
    game: &G,
    key: &InfostateKey,
    state: &G::State,
    pos: usize,
) -> Result<Vec<Transition<G::State>>, GameError> {
    let me = key.player();
    let trace = key.trace();
    let Some(actor) = game.current_player(state) else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    if actor == me {
        let Some(event) = trace.get(pos) else { return Ok(out) };
        let Some(action) = event.action else { return Ok(out) };
        if !game.legal_actions(state).contains(&action) {
            return Ok(out);
        }
        let (next, obs) = game.apply(state, action)?;
        if obs[me.index()] == event.observation {
            out.push(Transition { action, actor, next, obs, next_pos: pos + 1 });
        }
        return Ok(out);
    }
    for action in game.legal_actions(state) {
        let (next, obs) = game.apply(state, action)?;
        let mine = &obs[me.index()];
        let next_pos = if mine.is_empty() {
            pos
        } else {
            match trace.get(pos) {
                Some(e) if e.action.is_none() && e.observation == *mine => pos + 1,
                _ => continue,
            }
        };
        out.push(Transition { action, actor, next, obs, next_pos });
    }
    Ok(out)
}

/// Memoised counts of consistent continuations.
struct CountDag<S> {
    memo: HashMap<(S, usize), u128>,
    cap: usize,
}

impl<S: Clone + Eq + std::hash::Hash> CountDag<S> {
    fn new(cap: usize) -> Self {
        CountDag { memo: HashMap::new(), cap }
    }

    fn count<G: Game<State = S>>(
        &mut self,
        game: &G,
        key: &InfostateKey,
        state: &S,
        pos: usize,
    ) -> Result<u128, SampleError> {
        if let Some(&c) = self.memo.get(&(state.clone(), pos)) {
            return Ok(c);
        }
        if self.memo.len() >= self.cap {
            return Err(SampleError::CapExceeded(self.cap));
        }
        let mut total = u128::from(pos == key.len());
        for t in transitions(game, key, state, pos)? {
            total += self.count(game, key, &t.next, t.next_pos)?;
        }
        self.memo.insert((state.clone(), pos), total);
        Ok(total)
    }

    /// Uniform draw among the consistent histories below `(root, pos)`.
    fn descend<G: Game<State = S>, R: Rng + ?Sized>(
        &self,
        game: &G,
        key: &InfostateKey,
        root: &S,
        pos: usize,
        rng: &mut R,
    ) -> Result<History<S>, SampleError> {
        let mut history = History::new(root.clone());
        let mut pos = pos;
        loop {
            let state = history.current().clone();
            let total = self.memo[&(state.clone(), pos)];
            let mut r = rng.gen_range(0..total);
            if pos == key.len() {
                if r == 0 {
                    return Ok(history);
                }
                r -= 1;
            }
            let mut chosen = None;
            for t in transitions(game, key, &state, pos)? {
                let c = self.memo[&(t.next.clone(), t.next_pos)];
                if r < c {
                    chosen = Some(t);
                    break;
                }
                r -= c;
            }
            let t = chosen.expect("counts cover every draw");
            history.push_step(t.actor, t.action, t.obs, t.next);
            pos = t.next_pos;
        }
    }
}

struct ExactBelief<S> {
    dag: CountDag<S>,
    roots: Vec<(S, usize, u128)>,
    total: u128,
}

/// Samples histories consistent with a player's infostate.
pub struct BeliefSampler<G: Game> {
    strategy: SamplingStrategy,
    node_cap: usize,
    max_tries: usize,
    cache: HashMap<InfostateKey, Arc<ExactBelief<G::State>>>,
}

impl<G: Game> BeliefSampler<G> {
    pub fn new(strategy: SamplingStrategy) -> Self {
        let max_tries = match strategy {
            SamplingStrategy::Rejection { max_tries } => max_tries,
            _ => DEFAULT_MAX_TRIES,
        };
        BeliefSampler { strategy, node_cap: DEFAULT_NODE_CAP, max_tries, cache: HashMap::new() }
    }

    pub fn for_game(game: &G) -> Self {
        Self::new(SamplingStrategy::for_game(game.name()))
    }

    pub fn with_node_cap(mut self, cap: usize) -> Self {
        self.node_cap = cap;
        self
    }

    pub fn with_max_tries(mut self, tries: usize) -> Self {
        self.max_tries = tries;
        self
    }

    pub fn strategy(&self) -> SamplingStrategy {
        self.strategy
    }

    /// Every history consistent with `key`, in action order.
    pub fn enumerate_consistent(&self, game: &G, key: &InfostateKey) -> Result<Vec<History<G::State>>, SampleError> {
        let roots = game.consistent_roots(key.player(), &root_view(key)).ok_or(SampleError::NotEnumerable)?;
        let mut out = Vec::new();
        let mut visited = 0usize;
        fn walk<G: Game>(
            game: &G,
            key: &InfostateKey,
            history: &mut History<G::State>,
            pos: usize,
            out: &mut Vec<History<G::State>>,
            visited: &mut usize,
            cap: usize,
        ) -> Result<(), SampleError> {
            *visited += 1;
            if *visited > cap {
                return Err(SampleError::CapExceeded(cap));
            }
            if pos == key.len() {
                out.push(history.clone());
            }
            for t in transitions(game, key, history.current(), pos)? {
                let mut next = history.clone();
                next.push_step(t.actor, t.action, t.obs, t.next);
                walk(game, key, &mut next, t.next_pos, out, visited, cap)?;
            }
            Ok(())
        }
        for root in roots {
            if let Some(pos) = start_pos(game, &root, key) {
                walk(game, key, &mut History::new(root), pos, &mut out, &mut visited, self.node_cap)?;
            }
        }
        Ok(out)
    }

    /// Number of histories consistent with `key`.
    pub fn count_consistent(&mut self, game: &G, key: &InfostateKey) -> Result<u128, SampleError> {
        Ok(self.exact(game, key)?.total)
    }

    fn exact(&mut self, game: &G, key: &InfostateKey) -> Result<Arc<ExactBelief<G::State>>, SampleError> {
        if let Some(b) = self.cache.get(key) {
            return Ok(b.clone());
        }
        let roots = game.consistent_roots(key.player(), &root_view(key)).ok_or(SampleError::NotEnumerable)?;
        let mut dag = CountDag::new(self.node_cap);
        let mut counted = Vec::new();
        let mut total = 0u128;
        for root in roots {
            if let Some(pos) = start_pos(game, &root, key) {
                let c = dag.count(game, key, &root, pos)?;
                if c > 0 {
                    total += c;
                    counted.push((root, pos, c));
                }
            }
        }
        let belief = Arc::new(ExactBelief { dag, roots: counted, total });
        if self.cache.len() >= CACHE_LIMIT {
            self.cache.clear();
        }
        self.cache.insert(key.clone(), belief.clone());
        Ok(belief)
    }

    fn sample_exact<R: Rng + ?Sized>(
        &mut self,
        game: &G,
        key: &InfostateKey,
        rng: &mut R,
    ) -> Result<History<G::State>, SampleError> {
        let belief = self.exact(game, key)?;
        if belief.total == 0 {
            return Err(SampleError::NoConsistentHistory);
        }
        let mut r = rng.gen_range(0..belief.total);
        for (root, pos, c) in &belief.roots {
            if r < *c {
                return belief.dag.descend(game, key, root, *pos, rng);
            }
            r -= c;
        }
        unreachable!("root counts sum to the total")
    }

    fn sample_deal<R: Rng + ?Sized>(
        &mut self,
        game: &G,
        key: &InfostateKey,
        rng: &mut R,
    ) -> Result<History<G::State>, SampleError> {
        let view = root_view(key);
        for _ in 0..self.max_tries {
            let root = match game.sample_root_given_key(key, rng) {
                Some(root) => root,
                None => {
                    game.sample_consistent_root(key.player(), &view, rng).ok_or(SampleError::NoConsistentHistory)?
                }
            };
            let Some(pos) = start_pos(game, &root, key) else { continue };
            let mut dag = CountDag::new(self.node_cap);
            if dag.count(game, key, &root, pos)? > 0 {
                return dag.descend(game, key, &root, pos, rng);
            }
        }
        Err(SampleError::TriesExhausted(self.max_tries))
    }

    fn sample_rejection<R: Rng + ?Sized>(
        &mut self,
        game: &G,
        key: &InfostateKey,
        rng: &mut R,
    ) -> Result<History<G::State>, SampleError> {
        let view = root_view(key);
        'tries: for _ in 0..self.max_tries {
            let root = game.sample_consistent_root(key.player(), &view, rng).ok_or(SampleError::NoConsistentHistory)?;
            let Some(mut pos) = start_pos(game, &root, key) else { continue };
            let mut history = History::new(root);
            loop {
                let mut options = transitions(game, key, history.current(), pos)?;
                let can_stop = pos == key.len();
                let n = options.len() + usize::from(can_stop);
                if n == 0 {
                    continue 'tries;
                }
                let pick = rng.gen_range(0..n);
                if pick == options.len() {
                    return Ok(history);
                }
                let t = options.swap_remove(pick);
                history.push_step(t.actor, t.action, t.obs, t.next);
                pos = t.next_pos;
            }
        }
        Err(SampleError::TriesExhausted(self.max_tries))
    }

    /// Draws one history consistent with `key`.
    ///
    /// `Enumerate` falls back to `Rejection` when the counting DAG would
    /// exceed the node cap.
    pub fn sample<R: Rng + ?Sized>(
        &mut self,
        game: &G,
        key: &InfostateKey,
        rng: &mut R,
    ) -> Result<History<G::State>, SampleError> {
        match self.strategy {
            SamplingStrategy::Enumerate => match self.sample_exact(game, key, rng) {
                Err(SampleError::CapExceeded(_)) | Err(SampleError::NotEnumerable) => {
                    self.sample_rejection(game, key, rng)
                }
                other => other,
            },
            SamplingStrategy::DealResample => self.sample_deal(game, key, rng),
            SamplingStrategy::Rejection { .. } => self.sample_rejection(game, key, rng),
        }
    }

    /// Forgets cached beliefs.
    pub fn clear(&mut self) {
        self.cache.clear();
    }
}

/// Free-function form of [`BeliefSampler::enumerate_consistent`] with
/// the default node cap.
pub fn enumerate_consistent<G: Game>(game: &G, key: &InfostateKey) -> Result<Vec<History<G::State>>, SampleError> {
    BeliefSampler::<G>::new(SamplingStrategy::Enumerate).enumerate_consistent(game, key)
}
