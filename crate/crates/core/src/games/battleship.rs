//! Battleship on a small grid. Fleets are placed at random when the game
//! is dealt; players then alternate shots at the opponent's grid. Every
//! shot result (hit, miss, sunk ship) is announced to both players.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::game::{Action, Game, GameError, JointObservation, Observation, PlayerId, Returns};

pub const MAX_SHIPS: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BattleshipConfig {
    pub rows: u8,
    pub cols: u8,
    /// Ship lengths; a ship of length `n` is `n x 1` and is worth `n`.
    pub ships: Vec<u8>,
}

impl Default for BattleshipConfig {
    fn default() -> Self {
        BattleshipConfig { rows: 3, cols: 3, ships: vec![1, 2] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BattleshipState {
    /// Cell mask of every ship, per player. Unused slots are zero.
    pub fleets: [[u16; MAX_SHIPS]; 2],
    /// Cells each player has fired at.
    pub shots: [u16; 2],
    pub to_act: u8,
    pub done: bool,
}

#[derive(Debug, Clone)]
pub struct Battleship {
    config: BattleshipConfig,
    placements: Vec<[u16; MAX_SHIPS]>,
}

impl Battleship {
    pub fn new(config: BattleshipConfig) -> Result<Self, GameError> {
        let cells = config.rows as usize * config.cols as usize;
        if config.rows == 0 || config.cols == 0 || cells > 16 {
            return Err(GameError::InvalidConfig(format!(
                "battleship grid {}x{} must have 1..=16 cells",
                config.rows, config.cols
            )));
        }
        if config.ships.is_empty() || config.ships.len() > MAX_SHIPS {
            return Err(GameError::InvalidConfig(format!("fleet must have 1..={MAX_SHIPS} ships")));
        }
        let mut game = Battleship { config, placements: Vec::new() };
        game.placements = game.fleet_placements();
        if game.placements.is_empty() {
            return Err(GameError::InvalidConfig("ships do not fit on the grid".into()));
        }
        Ok(game)
    }

    pub fn config(&self) -> &BattleshipConfig {
        &self.config
    }

    /// Every cell mask a single ship of length `len` can occupy.
    pub fn ship_positions(&self, len: u8) -> Vec<u16> {
        let (rows, cols) = (self.config.rows, self.config.cols);
        let cell = |r: u8, c: u8| 1u16 << (r * cols + c);
        let mut out = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                if c + len <= cols {
                    out.push((0..len).fold(0, |m, i| m | cell(r, c + i)));
                }
                if len > 1 && r + len <= rows {
                    out.push((0..len).fold(0, |m, i| m | cell(r + i, c)));
                }
            }
        }
        out
    }

    /// Every non-overlapping placement of the whole fleet.
    pub fn fleet_placements(&self) -> Vec<[u16; MAX_SHIPS]> {
        let mut out = Vec::new();
        let per_ship: Vec<Vec<u16>> = self.config.ships.iter().map(|&l| self.ship_positions(l)).collect();
        fn rec(
            per_ship: &[Vec<u16>],
            i: usize,
            used: u16,
            cur: &mut [u16; MAX_SHIPS],
            out: &mut Vec<[u16; MAX_SHIPS]>,
        ) {
            if i == per_ship.len() {
                out.push(*cur);
                return;
            }
            for &m in &per_ship[i] {
                if m & used == 0 {
                    cur[i] = m;
                    rec(per_ship, i + 1, used | m, cur, out);
                }
            }
            cur[i] = 0;
        }
        rec(&per_ship, 0, 0, &mut [0; MAX_SHIPS], &mut out);
        out
    }

    pub fn cells(&self) -> u16 {
        (self.config.rows * self.config.cols) as u16
    }

    fn fleet_value_sunk(&self, fleet: &[u16; MAX_SHIPS], shots: u16) -> f64 {
        self.config.ships.iter().enumerate().filter(|(i, _)| fleet[*i] & !shots == 0).map(|(_, &len)| len as f64).sum()
    }

    fn fleet_destroyed(&self, fleet: &[u16; MAX_SHIPS], shots: u16) -> bool {
        fleet.iter().all(|&m| m & !shots == 0)
    }

    pub fn with_fleets(&self, fleets: [[u16; MAX_SHIPS]; 2]) -> BattleshipState {
        BattleshipState { fleets, shots: [0, 0], to_act: 0, done: false }
    }

    fn decode_fleet(obs: &Observation) -> Option<[u16; MAX_SHIPS]> {
        let b = obs.as_bytes();
        if b.len() != 2 * MAX_SHIPS {
            return None;
        }
        let mut fleet = [0u16; MAX_SHIPS];
        for (i, f) in fleet.iter_mut().enumerate() {
            *f = u16::from_le_bytes([b[2 * i], b[2 * i + 1]]);
        }
        Some(fleet)
    }

    fn root_for(&self, player: PlayerId, mine: [u16; MAX_SHIPS], theirs: [u16; MAX_SHIPS]) -> BattleshipState {
        let mut fleets = [[0; MAX_SHIPS]; 2];
        fleets[player.index()] = mine;
        fleets[player.opponent().index()] = theirs;
        self.with_fleets(fleets)
    }
}

impl Game for Battleship {
    type State = BattleshipState;

    fn name(&self) -> &str {
        "battleship"
    }

    fn initial_state<R: Rng + ?Sized>(&self, rng: &mut R) -> BattleshipState {
        let a = *self.placements.choose(rng).expect("non-empty placements");
        let b = *self.placements.choose(rng).expect("non-empty placements");
        self.with_fleets([a, b])
    }

    fn root_observation(&self, state: &BattleshipState, player: PlayerId) -> Observation {
        let mut obs = Observation::empty();
        for m in state.fleets[player.index()] {
            obs.extend_from_slice(&m.to_le_bytes());
        }
        obs
    }

    fn current_player(&self, state: &BattleshipState) -> Option<PlayerId> {
        (!state.done).then_some(PlayerId(state.to_act))
    }

    fn legal_actions(&self, state: &BattleshipState) -> Vec<Action> {
        if state.done {
            return Vec::new();
        }
        let shot = state.shots[state.to_act as usize];
        (0..self.cells()).filter(|c| shot >> c & 1 == 0).map(Action).collect()
    }

    fn apply(&self, state: &BattleshipState, action: Action) -> Result<(BattleshipState, JointObservation), GameError> {
        if state.done {
            return Err(GameError::TerminalState);
        }
        let p = state.to_act as usize;
        let cell = action.0;
        if cell >= self.cells() || state.shots[p] >> cell & 1 == 1 {
            return Err(GameError::IllegalAction { action, state: format!("{state:?}") });
        }
        let bit = 1u16 << cell;
        let mut next = *state;
        next.shots[p] |= bit;
        let target = &state.fleets[1 - p];
        let hit_ship = target.iter().position(|&m| m & bit != 0);
        let sunk = hit_ship.filter(|&i| target[i] & !next.shots[p] == 0);
        next.done = self.fleet_destroyed(target, next.shots[p]);
        next.to_act = 1 - state.to_act;
        let obs = Observation::from_bytes(&[
            cell as u8,
            hit_ship.is_some() as u8,
            sunk.map_or(0, |i| i as u8 + 1),
            next.done as u8,
        ]);
        Ok((next, [obs.clone(), obs]))
    }

    fn returns(&self, state: &BattleshipState) -> Result<Returns, GameError> {
        if !state.done {
            return Err(GameError::NotTerminal);
        }
        let p0 = self.fleet_value_sunk(&state.fleets[1], state.shots[0])
            - self.fleet_value_sunk(&state.fleets[0], state.shots[1]);
        Ok(Returns::zero_sum(p0))
    }

    fn horizon(&self) -> usize {
        2 * self.cells() as usize
    }

    fn chance_roots(&self) -> Option<Vec<(BattleshipState, f64)>> {
        let n = self.placements.len();
        if n * n > 200_000 {
            return None;
        }
        let p = 1.0 / (n * n) as f64;
        Some(
            self.placements
                .iter()
                .flat_map(|a| self.placements.iter().map(move |b| (*a, *b)))
                .map(|(a, b)| (self.with_fleets([a, b]), p))
                .collect(),
        )
    }

    fn consistent_roots(&self, player: PlayerId, root_obs: &Observation) -> Option<Vec<BattleshipState>> {
        let mine = Self::decode_fleet(root_obs)?;
        Some(self.placements.iter().map(|&t| self.root_for(player, mine, t)).collect())
    }

    fn sample_consistent_root<R: Rng + ?Sized>(
        &self,
        player: PlayerId,
        root_obs: &Observation,
        rng: &mut R,
    ) -> Option<BattleshipState> {
        let mine = Self::decode_fleet(root_obs)?;
        let theirs = *self.placements.choose(rng)?;
        Some(self.root_for(player, mine, theirs))
    }

    fn action_label(&self, action: Action) -> String {
        let cols = self.config.cols as u16;
        format!("{}{}", (b'a' + (action.0 % cols) as u8) as char, action.0 / cols + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn game() -> Battleship {
        Battleship::new(BattleshipConfig::default()).unwrap()
    }

    #[test]
    fn two_cell_ship_positions_by_enumeration() {
        let g = game();
        // oracle: every ordered pair of orthogonally adjacent cells, unordered
        let mut expected = 0;
        for a in 0..9u8 {
            for b in a + 1..9u8 {
                let (ra, ca, rb, cb) = (a / 3, a % 3, b / 3, b % 3);
                if (ra == rb && cb == ca + 1) || (ca == cb && rb == ra + 1) {
                    expected += 1;
                }
            }
        }
        assert_eq!(expected, 12);
        assert_eq!(g.ship_positions(2).len(), expected);
        assert_eq!(g.ship_positions(1).len(), 9);
        assert_eq!(g.fleet_placements().len(), 12 * 7);
    }

    #[test]
    fn shooting_every_cell_destroys_the_fleet() {
        let g = game();
        for fleet in g.fleet_placements() {
            let mut s = g.with_fleets([fleet, fleet]);
            let mut shots = 0;
            while !s.done {
                // p0 shoots in order, p1 shoots in order
                let a = g.legal_actions(&s)[0];
                s = g.apply(&s, a).unwrap().0;
                shots += 1;
            }
            assert!(shots <= 18);
        }
    }

    #[test]
    fn flawless_win_scores_total_fleet_value() {
        let g = game();
        let fleet = g.fleet_placements()[0];
        let mut s = g.with_fleets([fleet, fleet]);
        // p0 fires at the ship cells; p1 fires at empty cells
        let targets: Vec<u16> = (0..9).filter(|c| fleet.iter().any(|m| m >> c & 1 == 1)).collect();
        let misses: Vec<u16> = (0..9).filter(|c| !targets.contains(c)).collect();
        for (i, &t) in targets.iter().enumerate() {
            s = g.apply(&s, Action(t)).unwrap().0;
            if !s.done {
                s = g.apply(&s, Action(misses[i])).unwrap().0;
            }
        }
        assert!(s.done);
        assert_eq!(g.returns(&s).unwrap(), Returns::zero_sum(3.0));
    }

    #[test]
    fn shot_observation_is_public() {
        let g = game();
        let fleet = g.fleet_placements()[0];
        let s = g.with_fleets([fleet, fleet]);
        let cell = (0..9).find(|c| fleet[1] >> c & 1 == 1).unwrap();
        let (_, obs) = g.apply(&s, Action(cell)).unwrap();
        assert_eq!(obs[0], obs[1]);
        assert_eq!(obs[0].as_bytes()[1], 1);
        assert!(g.apply(&s, Action(9)).is_err());
    }

    #[test]
    fn rejects_oversized_grids() {
        assert!(Battleship::new(BattleshipConfig { rows: 5, cols: 5, ships: vec![1] }).is_err());
        assert!(Battleship::new(BattleshipConfig { rows: 1, cols: 1, ships: vec![2] }).is_err());
    }
}
