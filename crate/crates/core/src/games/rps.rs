//! The didactic Rock-Paper-Scissors variant: the first player may leave
//! for a fixed payoff or play, in which case the second player answers
//! knowing only that a move was made.

use rand::Rng;

use crate::game::{Action, Game, GameError, JointObservation, Observation, PlayerId, Returns};

pub const LEAVE: Action = Action(0);
pub const ROCK: Action = Action(1);
pub const PAPER: Action = Action(2);
pub const SCISSORS: Action = Action(3);

pub const DEFAULT_LEAVE_PAYOFF: f64 = -0.6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RpsState {
    /// Initial state, first player to act.
    Start,
    /// First player committed to a throw (1..=3); second player to act.
    Thrown(u8),
    Left,
    Done {
        first: u8,
        second: u8,
    },
}

#[derive(Debug, Clone)]
pub struct RpsVariant {
    leave_payoff: f64,
    scale: f64,
}

impl Default for RpsVariant {
    fn default() -> Self {
        RpsVariant { leave_payoff: DEFAULT_LEAVE_PAYOFF, scale: 1.0 }
    }
}

impl RpsVariant {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_leave_payoff(leave_payoff: f64) -> Self {
        RpsVariant { leave_payoff, scale: 1.0 }
    }

    /// Same game with every payoff multiplied by `scale`.
    pub fn scaled(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn leave_payoff(&self) -> f64 {
        self.leave_payoff
    }
}

/// +1 if `a` beats `b`, -1 if it loses, 0 on a tie (1 = rock, 2 = paper, 3 = scissors).
fn duel(a: u8, b: u8) -> f64 {
    match (a, b) {
        _ if a == b => 0.0,
        (1, 3) | (3, 2) | (2, 1) => 1.0,
        _ => -1.0,
    }
}

const PLAY: &[u8] = b"Play";

impl Game for RpsVariant {
    type State = RpsState;

    fn name(&self) -> &str {
        "rps"
    }

    fn initial_state<R: Rng + ?Sized>(&self, _rng: &mut R) -> RpsState {
        RpsState::Start
    }

    fn root_observation(&self, _state: &RpsState, _player: PlayerId) -> Observation {
        Observation::empty()
    }

    fn current_player(&self, state: &RpsState) -> Option<PlayerId> {
        match state {
            RpsState::Start => Some(PlayerId::P0),
            RpsState::Thrown(_) => Some(PlayerId::P1),
            _ => None,
        }
    }

    fn legal_actions(&self, state: &RpsState) -> Vec<Action> {
        match state {
            RpsState::Start => vec![LEAVE, ROCK, PAPER, SCISSORS],
            RpsState::Thrown(_) => vec![ROCK, PAPER, SCISSORS],
            _ => Vec::new(),
        }
    }

    fn apply(&self, state: &RpsState, action: Action) -> Result<(RpsState, JointObservation), GameError> {
        let illegal = || GameError::IllegalAction { action, state: format!("{state:?}") };
        match *state {
            RpsState::Start => match action {
                LEAVE => Ok((RpsState::Left, [Observation::from_bytes(b"end"), Observation::from_bytes(b"Leave")])),
                ROCK | PAPER | SCISSORS => {
                    Ok((RpsState::Thrown(action.0 as u8), [Observation::empty(), Observation::from_bytes(PLAY)]))
                }
                _ => Err(illegal()),
            },
            RpsState::Thrown(first) => match action {
                ROCK | PAPER | SCISSORS => {
                    let second = action.0 as u8;
                    let reveal = Observation::from_bytes(&[b'e', first, second]);
                    Ok((RpsState::Done { first, second }, [reveal.clone(), reveal]))
                }
                _ => Err(illegal()),
            },
            _ => Err(GameError::TerminalState),
        }
    }

    fn returns(&self, state: &RpsState) -> Result<Returns, GameError> {
        let p0 = match *state {
            RpsState::Left => self.leave_payoff,
            RpsState::Done { first, second } => duel(first, second),
            _ => return Err(GameError::NotTerminal),
        };
        Ok(Returns::zero_sum(p0 * self.scale))
    }

    fn horizon(&self) -> usize {
        2
    }

    fn chance_roots(&self) -> Option<Vec<(RpsState, f64)>> {
        Some(vec![(RpsState::Start, 1.0)])
    }

    fn consistent_roots(&self, _player: PlayerId, _root_obs: &Observation) -> Option<Vec<RpsState>> {
        Some(vec![RpsState::Start])
    }

    fn sample_consistent_root<R: Rng + ?Sized>(
        &self,
        _player: PlayerId,
        _root_obs: &Observation,
        _rng: &mut R,
    ) -> Option<RpsState> {
        Some(RpsState::Start)
    }

    fn action_label(&self, action: Action) -> String {
        match action {
            LEAVE => "Leave".into(),
            ROCK => "Rock".into(),
            PAPER => "Paper".into(),
            SCISSORS => "Scissors".into(),
            other => other.to_string(),
        }
    }
}
