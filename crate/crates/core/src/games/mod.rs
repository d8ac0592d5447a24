//! Rule engines and the plain-text game configuration format.
//!
//! A configuration file holds one `key=value` pair per line; `#` starts a
//! comment. Recognised keys:
//!
//! | key            | games        | default |
//! |----------------|--------------|---------|
//! | `game`         | all          | required: `rps`, `card`, `battleship`, `phantom_ttt`, `dark_hex` |
//! | `seed`         | all          | none    |
//! | `size`         | `dark_hex`   | 4       |
//! | `leave_payoff` | `rps`        | -0.6    |
//! | `suits`, `ranks`, `public`, `hidden`, `hand` | `card` | 4, 13, 22, 6, 8 |
//! | `rows`, `cols`, `ships` (comma list) | `battleship` | 3, 3, `1,2` |

pub mod battleship;
pub mod card;
pub mod phantom;
pub mod rps;
pub mod tree;

use std::collections::BTreeMap;
use std::str::FromStr;

pub use battleship::{Battleship, BattleshipConfig, BattleshipState};
pub use card::{CardConfig, CardGame, CardState};
pub use phantom::{DarkHex, PhantomState, PhantomTicTacToe};
pub use rps::{RpsState, RpsVariant};
pub use tree::{TreeGame, TreeNode};

use crate::game::GameError;

#[derive(Debug, Clone, PartialEq)]
pub enum GameSpec {
    Rps { leave_payoff: f64 },
    Card(CardConfig),
    Battleship(BattleshipConfig),
    PhantomTicTacToe,
    DarkHex { size: u8 },
}

impl GameSpec {
    pub fn name(&self) -> &'static str {
        match self {
            GameSpec::Rps { .. } => "rps",
            GameSpec::Card(_) => "card",
            GameSpec::Battleship(_) => "battleship",
            GameSpec::PhantomTicTacToe => "phantom_ttt",
            GameSpec::DarkHex { .. } => "dark_hex",
        }
    }

    /// Whether the game hides the opponent's moves (as opposed to only
    /// hiding the initial deal).
    pub fn has_private_observations(&self) -> bool {
        matches!(self, GameSpec::PhantomTicTacToe | GameSpec::DarkHex { .. } | GameSpec::Rps { .. })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GameConfig {
    pub spec: GameSpec,
    pub seed: Option<u64>,
}

impl GameConfig {
    pub fn new(spec: GameSpec) -> Self {
        GameConfig { spec, seed: None }
    }

    /// Parses the `key=value` configuration format.
    pub fn parse(text: &str) -> Result<Self, GameError> {
        let mut pairs = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| GameError::InvalidConfig(format!("line {}: expected key=value, got {raw:?}", n + 1)))?;
            pairs.insert(k.trim().to_string(), v.trim().to_string());
        }
        Self::from_pairs(&pairs)
    }

    pub fn from_pairs(pairs: &BTreeMap<String, String>) -> Result<Self, GameError> {
        fn get<T: FromStr>(pairs: &BTreeMap<String, String>, key: &str, default: T) -> Result<T, GameError> {
            match pairs.get(key) {
                None => Ok(default),
                Some(v) => v.parse().map_err(|_| GameError::InvalidConfig(format!("cannot parse {key}={v}"))),
            }
        }
        let game = pairs.get("game").ok_or_else(|| GameError::InvalidConfig("missing key `game`".into()))?;
        let known: &[&str] = match game.as_str() {
            "rps" => &["leave_payoff"],
            "card" => &["suits", "ranks", "public", "hidden", "hand"],
            "battleship" => &["rows", "cols", "ships"],
            "phantom_ttt" => &[],
            "dark_hex" => &["size"],
            other => return Err(GameError::InvalidConfig(format!("unknown game {other:?}"))),
        };
        if let Some(k) = pairs.keys().find(|k| !matches!(k.as_str(), "game" | "seed") && !known.contains(&k.as_str())) {
            return Err(GameError::InvalidConfig(format!("key {k:?} does not apply to game {game}")));
        }
        let spec = match game.as_str() {
            "rps" => GameSpec::Rps { leave_payoff: get(pairs, "leave_payoff", rps::DEFAULT_LEAVE_PAYOFF)? },
            "card" => {
                let d = CardConfig::default();
                let c = CardConfig {
                    suits: get(pairs, "suits", d.suits)?,
                    ranks: get(pairs, "ranks", d.ranks)?,
                    public: get(pairs, "public", d.public)?,
                    hidden: get(pairs, "hidden", d.hidden)?,
                    hand: get(pairs, "hand", d.hand)?,
                };
                c.validate()?;
                GameSpec::Card(c)
            }
            "battleship" => {
                let d = BattleshipConfig::default();
                let ships = match pairs.get("ships") {
                    None => d.ships,
                    Some(list) => list
                        .split(',')
                        .map(|s| s.trim().parse::<u8>())
                        .collect::<Result<_, _>>()
                        .map_err(|_| GameError::InvalidConfig(format!("cannot parse ships={list}")))?,
                };
                let c =
                    BattleshipConfig { rows: get(pairs, "rows", d.rows)?, cols: get(pairs, "cols", d.cols)?, ships };
                Battleship::new(c.clone())?;
                GameSpec::Battleship(c)
            }
            "phantom_ttt" => GameSpec::PhantomTicTacToe,
            _ => {
                let size = get(pairs, "size", 4u8)?;
                DarkHex::new(size)?;
                GameSpec::DarkHex { size }
            }
        };
        let seed = match pairs.get("seed") {
            None => None,
            Some(v) => Some(v.parse().map_err(|_| GameError::InvalidConfig(format!("cannot parse seed={v}")))?),
        };
        Ok(GameConfig { spec, seed })
    }
}

/// Runs `$body` with `$g` bound to the concrete game described by a
/// [`GameSpec`]. Construction errors are propagated with `?`.
#[macro_export]
macro_rules! with_game {
    ($spec:expr, $g:ident => $body:expr) => {{
        use $crate::games::GameSpec;
        match $spec {
            GameSpec::Rps { leave_payoff } => {
                let $g = $crate::games::RpsVariant::with_leave_payoff(*leave_payoff);
                $body
            }
            GameSpec::Card(c) => {
                let $g = $crate::games::CardGame::new(*c)?;
                $body
            }
            GameSpec::Battleship(c) => {
                let $g = $crate::games::Battleship::new(c.clone())?;
                $body
            }
            GameSpec::PhantomTicTacToe => {
                let $g = $crate::games::PhantomTicTacToe::new();
                $body
            }
            GameSpec::DarkHex { size } => {
                let $g = $crate::games::DarkHex::new(*size)?;
                $body
            }
        }
    }};
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_each_game() {
        let c = GameConfig::parse("game=card\nseed=7\n").unwrap();
        assert_eq!(c.spec, GameSpec::Card(CardConfig::default()));
        assert_eq!(c.seed, Some(7));
        let c = GameConfig::parse("# comment\ngame = dark_hex\nsize = 3 # small\n").unwrap();
        assert_eq!(c.spec, GameSpec::DarkHex { size: 3 });
        let c = GameConfig::parse("game=battleship\nships=1, 2\n").unwrap();
        assert_eq!(c.spec, GameSpec::Battleship(BattleshipConfig::default()));
        let c = GameConfig::parse("game=card\nsuits=2\nranks=3\npublic=6\nhidden=2\nhand=2").unwrap();
        assert_eq!(c.spec, GameSpec::Card(CardConfig::toy()));
        assert_eq!(GameConfig::parse("game=phantom_ttt").unwrap().spec, GameSpec::PhantomTicTacToe);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(GameConfig::parse("size=3").is_err());
        assert!(GameConfig::parse("game=chess").is_err());
        assert!(GameConfig::parse("game=dark_hex\nsize=9").is_err());
        assert!(GameConfig::parse("game=card\nhidden=3").is_err());
        assert!(GameConfig::parse("game=phantom_ttt\nsize=3").is_err());
        assert!(GameConfig::parse("game rps").is_err());
    }
}
