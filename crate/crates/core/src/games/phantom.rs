//! Phantom Tic-Tac-Toe and Dark Hex.
//!
//! Both games hide the opponent's stones. A move onto a cell the opponent
//! already holds is a probe: the mover learns the cell is taken and must
//! move again. The opponent is told only that the turn passed to them.

use rand::Rng;

use crate::game::{Action, Game, GameError, JointObservation, Observation, PlayerId, Returns};

pub const OBS_PLACED: u8 = b'+';
pub const OBS_BLOCKED: u8 = b'x';
pub const OBS_YOUR_TURN: u8 = b't';
pub const OBS_END: u8 = b'#';

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PhantomState {
    pub stones: [u16; 2],
    /// Opponent cells each player has discovered by probing.
    pub revealed: [u16; 2],
    pub to_act: u8,
    /// 0 = running, 1 = first player won, 2 = second player won, 3 = draw.
    pub outcome: u8,
}

impl PhantomState {
    pub fn empty() -> Self {
        PhantomState { stones: [0, 0], revealed: [0, 0], to_act: 0, outcome: 0 }
    }

    pub fn is_over(&self) -> bool {
        self.outcome != 0
    }

    /// Cells `player` knows to be occupied.
    pub fn view(&self, player: usize) -> u16 {
        self.stones[player] | self.revealed[player]
    }
}

/// Board geometry shared by the two phantom games.
trait Board {
    fn cells(&self) -> u16;
    fn connects(&self, stones: u16, player: usize) -> bool;
}

fn phantom_legal(board: &impl Board, s: &PhantomState) -> Vec<Action> {
    if s.is_over() {
        return Vec::new();
    }
    let known = s.view(s.to_act as usize);
    (0..board.cells()).filter(|c| known >> c & 1 == 0).map(Action).collect()
}

fn phantom_apply(
    board: &impl Board,
    s: &PhantomState,
    action: Action,
) -> Result<(PhantomState, JointObservation), GameError> {
    if s.is_over() {
        return Err(GameError::TerminalState);
    }
    let p = s.to_act as usize;
    let cell = action.0;
    if cell >= board.cells() || s.view(p) >> cell & 1 == 1 {
        return Err(GameError::IllegalAction { action, state: format!("{s:?}") });
    }
    let bit = 1u16 << cell;
    let mut next = *s;
    let mut obs = [Observation::empty(), Observation::empty()];
    if s.stones[1 - p] & bit != 0 {
        next.revealed[p] |= bit;
        obs[p] = Observation::from_bytes(&[cell as u8, OBS_BLOCKED]);
        return Ok((next, obs));
    }
    next.stones[p] |= bit;
    next.to_act = 1 - s.to_act;
    obs[p] = Observation::from_bytes(&[cell as u8, OBS_PLACED]);
    obs[1 - p] = Observation::from_bytes(&[OBS_YOUR_TURN]);
    let full = (next.stones[0] | next.stones[1]).count_ones() == board.cells() as u32;
    if board.connects(next.stones[p], p) {
        next.outcome = p as u8 + 1;
    } else if full {
        next.outcome = 3;
    }
    if next.is_over() {
        for o in &mut obs {
            o.extend_from_slice(&[OBS_END, next.outcome]);
        }
    }
    Ok((next, obs))
}

fn phantom_returns(s: &PhantomState) -> Result<Returns, GameError> {
    match s.outcome {
        1 => Ok(Returns::zero_sum(1.0)),
        2 => Ok(Returns::zero_sum(-1.0)),
        3 => Ok(Returns::zero_sum(0.0)),
        _ => Err(GameError::NotTerminal),
    }
}

const TTT_LINES: [u16; 8] = [
    0b000_000_111,
    0b000_111_000,
    0b111_000_000,
    0b001_001_001,
    0b010_010_010,
    0b100_100_100,
    0b100_010_001,
    0b001_010_100,
];

#[derive(Debug, Clone, Default)]
pub struct PhantomTicTacToe;

impl PhantomTicTacToe {
    pub fn new() -> Self {
        PhantomTicTacToe
    }
}

impl Board for PhantomTicTacToe {
    fn cells(&self) -> u16 {
        9
    }

    fn connects(&self, stones: u16, _player: usize) -> bool {
        TTT_LINES.iter().any(|&l| l & !stones == 0)
    }
}

macro_rules! phantom_game_impl {
    ($ty:ty, $name:expr) => {
        impl Game for $ty {
            type State = PhantomState;

            fn name(&self) -> &str {
                $name
            }

            fn initial_state<R: Rng + ?Sized>(&self, _rng: &mut R) -> PhantomState {
                PhantomState::empty()
            }

            fn root_observation(&self, _state: &PhantomState, _player: PlayerId) -> Observation {
                Observation::empty()
            }

            fn current_player(&self, state: &PhantomState) -> Option<PlayerId> {
                (!state.is_over()).then_some(PlayerId(state.to_act))
            }

            fn legal_actions(&self, state: &PhantomState) -> Vec<Action> {
                phantom_legal(self, state)
            }

            fn apply(
                &self,
                state: &PhantomState,
                action: Action,
            ) -> Result<(PhantomState, JointObservation), GameError> {
                phantom_apply(self, state, action)
            }

            fn returns(&self, state: &PhantomState) -> Result<Returns, GameError> {
                phantom_returns(state)
            }

            fn horizon(&self) -> usize {
                2 * self.cells() as usize - 1
            }

            fn chance_roots(&self) -> Option<Vec<(PhantomState, f64)>> {
                Some(vec![(PhantomState::empty(), 1.0)])
            }

            fn consistent_roots(&self, _player: PlayerId, _root_obs: &Observation) -> Option<Vec<PhantomState>> {
                Some(vec![PhantomState::empty()])
            }

            fn sample_consistent_root<R: Rng + ?Sized>(
                &self,
                _player: PlayerId,
                _root_obs: &Observation,
                _rng: &mut R,
            ) -> Option<PhantomState> {
                Some(PhantomState::empty())
            }

            fn action_label(&self, action: Action) -> String {
                let n = self.side();
                format!("{}{}", (b'a' + (action.0 % n) as u8) as char, action.0 / n + 1)
            }
        }
    };
}

impl PhantomTicTacToe {
    fn side(&self) -> u16 {
        3
    }
}

phantom_game_impl!(PhantomTicTacToe, "phantom_ttt");

/// Dark Hex on an `n x n` rhombus. The first player joins the left and
/// right edges, the second player the top and bottom edges.
#[derive(Debug, Clone)]
pub struct DarkHex {
    size: u8,
    neighbors: Vec<u16>,
}

impl DarkHex {
    pub fn new(size: u8) -> Result<Self, GameError> {
        if !(size == 3 || size == 4) {
            return Err(GameError::InvalidConfig(format!("dark hex size must be 3 or 4, got {size}")));
        }
        let n = size as i32;
        let mut neighbors = vec![0u16; (n * n) as usize];
        for r in 0..n {
            for c in 0..n {
                for (dr, dc) in [(0, 1), (0, -1), (1, 0), (-1, 0), (-1, 1), (1, -1)] {
                    let (rr, cc) = (r + dr, c + dc);
                    if (0..n).contains(&rr) && (0..n).contains(&cc) {
                        neighbors[(r * n + c) as usize] |= 1 << (rr * n + cc);
                    }
                }
            }
        }
        Ok(DarkHex { size, neighbors })
    }

    pub fn size(&self) -> u8 {
        self.size
    }

    fn side(&self) -> u16 {
        self.size as u16
    }

    fn edge(&self, player: usize, far: bool) -> u16 {
        let n = self.size as u16;
        let mut m = 0u16;
        for i in 0..n {
            let (r, c) = match (player, far) {
                (0, false) => (i, 0),
                (0, true) => (i, n - 1),
                (_, false) => (0, i),
                (_, true) => (n - 1, i),
            };
            m |= 1 << (r * n + c);
        }
        m
    }
}

impl Board for DarkHex {
    fn cells(&self) -> u16 {
        (self.size as u16) * (self.size as u16)
    }

    fn connects(&self, stones: u16, player: usize) -> bool {
        let mut frontier = stones & self.edge(player, false);
        let mut seen = frontier;
        let target = self.edge(player, true);
        while frontier != 0 {
            if seen & target != 0 {
                return true;
            }
            let mut next = 0u16;
            let mut f = frontier;
            while f != 0 {
                let c = f.trailing_zeros();
                f &= f - 1;
                next |= self.neighbors[c as usize];
            }
            frontier = next & stones & !seen;
            seen |= frontier;
        }
        seen & target != 0
    }
}

phantom_game_impl!(DarkHex, "dark_hex");
