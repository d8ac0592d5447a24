//! Game abstraction shared by every rule engine, sampler and search agent.
//!
//! Games are two-player, alternating-move and deterministic once the
//! initial deal has been drawn. At every non-terminal state exactly one
//! player acts; the other implicitly plays [`Action::NOOP`]. Each
//! transition hands both players an [`Observation`], and a player's
//! [`InfostateKey`] is the sequence of its own actions interleaved with
//! the observations it received.

use std::fmt;
use std::hash::Hash;

use rand::Rng;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

/// Number of players in every game of this crate.
pub const NUM_PLAYERS: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PlayerId(pub u8);

impl PlayerId {
    pub const P0: PlayerId = PlayerId(0);
    pub const P1: PlayerId = PlayerId(1);

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn opponent(self) -> PlayerId {
        PlayerId(1 - self.0)
    }

    pub fn all() -> [PlayerId; NUM_PLAYERS] {
        [PlayerId::P0, PlayerId::P1]
    }
}

impl fmt::Display for PlayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}", self.0)
    }
}

/// A game-scoped action id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Action(pub u16);

impl Action {
    /// The null action held by every player who is not on turn.
    pub const NOOP: Action = Action(u16::MAX);

    pub fn is_noop(self) -> bool {
        self == Action::NOOP
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_noop() {
            f.write_str("noop")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// Canonical byte payload received by one player on one transition.
///
/// An empty observation means "nothing happened that you can see".
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Observation(SmallVec<[u8; 16]>);

impl Observation {
    pub fn empty() -> Self {
        Observation(SmallVec::new())
    }

    pub fn from_bytes(bytes: &[u8]) -> Self {
        Observation(SmallVec::from_slice(bytes))
    }

    pub fn push(&mut self, byte: u8) {
        self.0.push(byte);
    }

    pub fn extend_from_slice(&mut self, bytes: &[u8]) {
        self.0.extend_from_slice(bytes);
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Debug for Observation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match std::str::from_utf8(&self.0) {
            Ok(s) if !s.is_empty() && s.chars().all(|c| c.is_ascii_graphic()) => write!(f, "{s:?}"),
            _ => write!(f, "{:?}", self.0.as_slice()),
        }
    }
}

/// Observations of both players for one transition, indexed by player.
pub type JointObservation = [Observation; NUM_PLAYERS];

/// Terminal payoff of each player.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Returns(pub [f64; NUM_PLAYERS]);

impl Returns {
    /// Returns of a zero-sum game given the first player's payoff.
    pub fn zero_sum(p0: f64) -> Self {
        Returns([p0, -p0])
    }

    pub fn get(&self, player: PlayerId) -> f64 {
        self.0[player.index()]
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Returns([self.0[0] * factor, self.0[1] * factor])
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GameError {
    #[error("illegal action {action} in state {state}")]
    IllegalAction { action: Action, state: String },
    #[error("operation requires a non-terminal state")]
    TerminalState,
    #[error("returns requested for a non-terminal state")]
    NotTerminal,
    #[error("invalid game configuration: {0}")]
    InvalidConfig(String),
}

/// A two-player, alternating-move game with all chance at the root.
pub trait Game: Send + Sync {
    type State: Clone + Eq + Hash + fmt::Debug + Send + Sync;

    fn name(&self) -> &str;

    /// Draws a root state, resolving every chance event up front.
    fn initial_state<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::State;

    /// What `player` privately sees of the root (its own hand, its own fleet).
    fn root_observation(&self, state: &Self::State, player: PlayerId) -> Observation;

    /// The acting player, or `None` at terminal states.
    fn current_player(&self, state: &Self::State) -> Option<PlayerId>;

    /// Legal actions of the acting player. Empty at terminal states.
    ///
    /// The result must depend only on the acting player's infostate.
    fn legal_actions(&self, state: &Self::State) -> Vec<Action>;

    fn apply(&self, state: &Self::State, action: Action) -> Result<(Self::State, JointObservation), GameError>;

    fn returns(&self, state: &Self::State) -> Result<Returns, GameError>;

    /// Upper bound on the number of actions in any play of the game.
    fn horizon(&self) -> usize;

    /// Every root state with its probability, when the deal is small
    /// enough to enumerate.
    fn chance_roots(&self) -> Option<Vec<(Self::State, f64)>>;

    /// Every root state consistent with `player`'s root observation, when
    /// small enough to enumerate. Roots are equally likely.
    fn consistent_roots(&self, player: PlayerId, root_obs: &Observation) -> Option<Vec<Self::State>>;

    /// A uniformly drawn root consistent with `player`'s root observation.
    fn sample_consistent_root<R: Rng + ?Sized>(
        &self,
        player: PlayerId,
        root_obs: &Observation,
        rng: &mut R,
    ) -> Option<Self::State>;

    /// A root drawn uniformly from those consistent with everything `key`
    /// has seen, for games that can condition the deal on the play so far.
    /// `None` when the game has no such shortcut or no root fits.
    fn sample_root_given_key<R: Rng + ?Sized>(&self, _key: &InfostateKey, _rng: &mut R) -> Option<Self::State> {
        None
    }

    fn is_terminal(&self, state: &Self::State) -> bool {
        self.current_player(state).is_none()
    }

    fn action_label(&self, action: Action) -> String {
        action.to_string()
    }
}

/// Legal actions of `player` at `state`: the acting player's actions, or
/// the singleton noop for everyone else.
pub fn legal_actions_for<G: Game>(game: &G, state: &G::State, player: PlayerId) -> Result<Vec<Action>, GameError> {
    match game.current_player(state) {
        None => Err(GameError::TerminalState),
        Some(actor) if actor == player => Ok(game.legal_actions(state)),
        Some(_) => Ok(vec![Action::NOOP]),
    }
}

/// One entry of an infostate trace: the player's own action (or noop)
/// together with the observation that followed it.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TraceEvent {
    pub action: Option<Action>,
    pub observation: Observation,
}

impl fmt::Debug for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.action {
            Some(a) => write!(f, "({a}, {:?})", self.observation),
            None => write!(f, "(noop, {:?})", self.observation),
        }
    }
}

/// Canonical encoding of one player's action/observation sequence.
///
/// Transitions where the player neither acted nor observed anything leave
/// no trace, so a player never learns how many silent moves the opponent
/// made (failed probes in the phantom games).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct InfostateKey {
    player: PlayerId,
    trace: Vec<TraceEvent>,
}

impl InfostateKey {
    pub fn new(player: PlayerId) -> Self {
        InfostateKey { player, trace: Vec::new() }
    }

    pub fn from_trace(player: PlayerId, trace: Vec<TraceEvent>) -> Self {
        InfostateKey { player, trace }
    }

    /// Key at the root: the player's private view of the deal, if any.
    pub fn at_root(player: PlayerId, root_obs: Observation) -> Self {
        let mut key = InfostateKey::new(player);
        if !root_obs.is_empty() {
            key.trace.push(TraceEvent { action: None, observation: root_obs });
        }
        key
    }

    pub fn player(&self) -> PlayerId {
        self.player
    }

    pub fn trace(&self) -> &[TraceEvent] {
        &self.trace
    }

    pub fn len(&self) -> usize {
        self.trace.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trace.is_empty()
    }

    /// Extends the key with one transition taken by `actor`.
    pub fn record(&mut self, actor: PlayerId, action: Action, obs: &JointObservation) {
        let observation = &obs[self.player.index()];
        if actor == self.player {
            self.trace.push(TraceEvent { action: Some(action), observation: observation.clone() });
        } else if !observation.is_empty() {
            self.trace.push(TraceEvent { action: None, observation: observation.clone() });
        }
    }

    pub fn recorded(&self, actor: PlayerId, action: Action, obs: &JointObservation) -> Self {
        let mut next = self.clone();
        next.record(actor, action, obs);
        next
    }

    pub fn is_prefix_of(&self, other: &InfostateKey) -> bool {
        self.player == other.player
            && self.trace.len() <= other.trace.len()
            && other.trace[..self.trace.len()] == self.trace[..]
    }
}

impl fmt::Debug for InfostateKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{:?}", self.player, self.trace)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Step<S> {
    pub state: S,
    pub actor: PlayerId,
    pub action: Action,
    pub observations: JointObservation,
}

/// A root state followed by the transitions taken from it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct History<S> {
    root: S,
    steps: Vec<Step<S>>,
    current: S,
}

impl<S: Clone> History<S> {
    pub fn new(root: S) -> Self {
        History { current: root.clone(), root, steps: Vec::new() }
    }

    pub fn root(&self) -> &S {
        &self.root
    }

    pub fn current(&self) -> &S {
        &self.current
    }

    pub fn steps(&self) -> &[Step<S>] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn actions(&self) -> impl Iterator<Item = Action> + '_ {
        self.steps.iter().map(|s| s.action)
    }

    /// Applies `action` for the acting player and returns the observations.
    pub fn push<G: Game<State = S>>(&mut self, game: &G, action: Action) -> Result<&JointObservation, GameError> {
        let actor = game.current_player(&self.current).ok_or(GameError::TerminalState)?;
        let (next, observations) = game.apply(&self.current, action)?;
        let state = std::mem::replace(&mut self.current, next);
        self.steps.push(Step { state, actor, action, observations });
        Ok(&self.steps.last().expect("just pushed").observations)
    }

    /// Appends an already computed transition without re-applying it.
    pub fn push_step(&mut self, actor: PlayerId, action: Action, observations: JointObservation, next: S) {
        let state = std::mem::replace(&mut self.current, next);
        self.steps.push(Step { state, actor, action, observations });
    }

    pub fn with<G: Game<State = S>>(mut self, game: &G, action: Action) -> Result<Self, GameError> {
        self.push(game, action)?;
        Ok(self)
    }

    /// The infostate of `player` at the end of this history.
    pub fn infostate<G: Game<State = S>>(&self, game: &G, player: PlayerId) -> InfostateKey {
        let mut key = InfostateKey::at_root(player, game.root_observation(&self.root, player));
        for step in &self.steps {
            key.record(step.actor, step.action, &step.observations);
        }
        key
    }
}

/// Free-function form of [`History::infostate`].
pub fn infostate_of<G: Game>(game: &G, history: &History<G::State>, player: PlayerId) -> InfostateKey {
    history.infostate(game, player)
}

/// Replays `actions` from `root`.
pub fn replay<G: Game>(
    game: &G,
    root: G::State,
    actions: impl IntoIterator<Item = Action>,
) -> Result<History<G::State>, GameError> {
    let mut history = History::new(root);
    for action in actions {
        history.push(game, action)?;
    }
    Ok(history)
}
