//! Two-player trick-taking card game.
//!
//! A public subset of the deck is drawn; each player receives `hand`
//! cards and `hidden` cards stay face down. Players must follow the led
//! suit when able; the highest card of the led suit takes the trick and
//! its winner leads next. There are no trumps.

use rand::seq::{index, SliceRandom};
use rand::Rng;

use crate::game::{Action, Game, GameError, InfostateKey, JointObservation, Observation, PlayerId, Returns};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CardConfig {
    pub suits: u8,
    pub ranks: u8,
    /// Size of the public subset taken from the deck.
    pub public: u8,
    pub hidden: u8,
    pub hand: u8,
}

impl Default for CardConfig {
    fn default() -> Self {
        CardConfig { suits: 4, ranks: 13, public: 22, hidden: 6, hand: 8 }
    }
}

impl CardConfig {
    /// Two suits of three ranks, two cards per hand, two hidden: two tricks.
    pub fn toy() -> Self {
        CardConfig { suits: 2, ranks: 3, public: 6, hidden: 2, hand: 2 }
    }

    pub fn deck_size(&self) -> u8 {
        self.suits * self.ranks
    }

    pub fn validate(&self) -> Result<(), GameError> {
        let bad = |msg: String| Err(GameError::InvalidConfig(msg));
        if self.suits == 0 || self.ranks == 0 || (self.suits as u32 * self.ranks as u32) > 64 {
            return bad(format!("deck of {}x{} cards must hold 1..=64 cards", self.suits, self.ranks));
        }
        if self.public > self.deck_size() {
            return bad(format!("public subset {} exceeds deck size {}", self.public, self.deck_size()));
        }
        if self.hand == 0 {
            return bad("hand size must be positive".into());
        }
        if 2 * self.hand as u32 + self.hidden as u32 != self.public as u32 {
            return bad(format!(
                "2*hand + hidden must equal public subset size ({}*2 + {} != {})",
                self.hand, self.hidden, self.public
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CardState {
    pub public: u64,
    pub hands: [u64; 2],
    pub hidden: u64,
    pub leader: u8,
    pub lead_card: Option<u8>,
    pub to_act: u8,
    pub tricks: [u8; 2],
    pub done: bool,
}

#[derive(Debug, Clone)]
pub struct CardGame {
    config: CardConfig,
}

const ENUMERATION_LIMIT: u64 = 200_000;

/// Every subset of `mask` with exactly `k` bits set, in increasing order.
pub(crate) fn combinations(mask: u64, k: u32) -> Vec<u64> {
    let bits: Vec<u32> = (0..64).filter(|b| mask >> b & 1 == 1).collect();
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(k as usize);
    fn rec(bits: &[u32], k: usize, start: usize, chosen: &mut Vec<u32>, out: &mut Vec<u64>) {
        if chosen.len() == k {
            out.push(chosen.iter().fold(0u64, |m, b| m | 1 << b));
            return;
        }
        for i in start..bits.len() {
            if bits.len() - i < k - chosen.len() {
                break;
            }
            chosen.push(bits[i]);
            rec(bits, k, i + 1, chosen, out);
            chosen.pop();
        }
    }
    if k as usize <= bits.len() {
        rec(&bits, k as usize, 0, &mut chosen, &mut out);
    }
    out
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

impl CardGame {
    pub fn new(config: CardConfig) -> Result<Self, GameError> {
        config.validate()?;
        Ok(CardGame { config })
    }

    pub fn config(&self) -> &CardConfig {
        &self.config
    }

    pub fn suit(&self, card: u8) -> u8 {
        card / self.config.ranks
    }

    pub fn rank(&self, card: u8) -> u8 {
        card % self.config.ranks
    }

    fn suit_mask(&self, suit: u8) -> u64 {
        let ranks = self.config.ranks as u32;
        let row = if ranks == 64 { u64::MAX } else { (1u64 << ranks) - 1 };
        row << (suit as u32 * ranks)
    }

    /// Root with a given public subset and hands; the rest of the subset is hidden.
    pub fn deal(&self, public: u64, hands: [u64; 2]) -> CardState {
        CardState {
            public,
            hands,
            hidden: public & !hands[0] & !hands[1],
            leader: 0,
            lead_card: None,
            to_act: 0,
            tricks: [0, 0],
            done: false,
        }
    }

    fn decode_root_obs(obs: &Observation) -> Option<(u64, u64)> {
        let b = obs.as_bytes();
        if b.len() != 16 {
            return None;
        }
        let public = u64::from_le_bytes(b[..8].try_into().ok()?);
        let mine = u64::from_le_bytes(b[8..].try_into().ok()?);
        Some((public, mine))
    }

    fn root_with_opponent(&self, player: PlayerId, public: u64, mine: u64, theirs: u64) -> CardState {
        let mut hands = [0u64; 2];
        hands[player.index()] = mine;
        hands[player.opponent().index()] = theirs;
        self.deal(public, hands)
    }
}

impl Game for CardGame {
    type State = CardState;

    fn name(&self) -> &str {
        "card"
    }

    fn initial_state<R: Rng + ?Sized>(&self, rng: &mut R) -> CardState {
        let c = &self.config;
        let mut cards: Vec<u8> =
            index::sample(rng, c.deck_size() as usize, c.public as usize).into_iter().map(|i| i as u8).collect();
        let public = cards.iter().fold(0u64, |m, &x| m | 1 << x);
        cards.shuffle(rng);
        let mask = |xs: &[u8]| xs.iter().fold(0u64, |m, &x| m | 1 << x);
        let h = c.hand as usize;
        self.deal(public, [mask(&cards[..h]), mask(&cards[h..2 * h])])
    }

    fn root_observation(&self, state: &CardState, player: PlayerId) -> Observation {
        let mut obs = Observation::from_bytes(&state.public.to_le_bytes());
        obs.extend_from_slice(&state.hands[player.index()].to_le_bytes());
        obs
    }

    fn current_player(&self, state: &CardState) -> Option<PlayerId> {
        (!state.done).then_some(PlayerId(state.to_act))
    }

    fn legal_actions(&self, state: &CardState) -> Vec<Action> {
        if state.done {
            return Vec::new();
        }
        let hand = state.hands[state.to_act as usize];
        let allowed = match state.lead_card {
            Some(lead) => {
                let follow = hand & self.suit_mask(self.suit(lead));
                if follow != 0 {
                    follow
                } else {
                    hand
                }
            }
            None => hand,
        };
        (0..64u16).filter(|b| allowed >> b & 1 == 1).map(Action).collect()
    }

    fn apply(&self, state: &CardState, action: Action) -> Result<(CardState, JointObservation), GameError> {
        if state.done {
            return Err(GameError::TerminalState);
        }
        if !self.legal_actions(state).contains(&action) {
            return Err(GameError::IllegalAction { action, state: format!("{state:?}") });
        }
        let card = action.0 as u8;
        let actor = state.to_act as usize;
        let mut next = *state;
        next.hands[actor] &= !(1u64 << card);
        let obs = match state.lead_card {
            None => {
                next.lead_card = Some(card);
                next.to_act = 1 - state.to_act;
                Observation::from_bytes(&[card, b'l'])
            }
            Some(lead) => {
                let follower_wins = self.suit(card) == self.suit(lead) && self.rank(card) > self.rank(lead);
                let winner = if follower_wins { state.to_act } else { state.leader };
                next.tricks[winner as usize] += 1;
                next.leader = winner;
                next.to_act = winner;
                next.lead_card = None;
                next.done = next.tricks[0] + next.tricks[1] == self.config.hand;
                Observation::from_bytes(&[card, b'w', winner, next.done as u8])
            }
        };
        Ok((next, [obs.clone(), obs]))
    }

    fn returns(&self, state: &CardState) -> Result<Returns, GameError> {
        if !state.done {
            return Err(GameError::NotTerminal);
        }
        let p0 = match state.tricks[0].cmp(&state.tricks[1]) {
            std::cmp::Ordering::Greater => 1.0,
            std::cmp::Ordering::Less => -1.0,
            std::cmp::Ordering::Equal => 0.0,
        };
        Ok(Returns::zero_sum(p0))
    }

    fn horizon(&self) -> usize {
        2 * self.config.hand as usize
    }

    fn chance_roots(&self) -> Option<Vec<(CardState, f64)>> {
        let c = &self.config;
        if c.public != c.deck_size() {
            return None;
        }
        let n = c.public as u64;
        let h = c.hand as u64;
        if binomial(n, h).saturating_mul(binomial(n - h, h)) > ENUMERATION_LIMIT {
            return None;
        }
        let public = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut roots = Vec::new();
        for h0 in combinations(public, c.hand as u32) {
            for h1 in combinations(public & !h0, c.hand as u32) {
                roots.push(self.deal(public, [h0, h1]));
            }
        }
        let p = 1.0 / roots.len() as f64;
        Some(roots.into_iter().map(|r| (r, p)).collect())
    }

    fn consistent_roots(&self, player: PlayerId, root_obs: &Observation) -> Option<Vec<CardState>> {
        let (public, mine) = Self::decode_root_obs(root_obs)?;
        let unseen = public & !mine;
        if binomial(unseen.count_ones() as u64, self.config.hand as u64) > ENUMERATION_LIMIT {
            return None;
        }
        Some(
            combinations(unseen, self.config.hand as u32)
                .into_iter()
                .map(|theirs| self.root_with_opponent(player, public, mine, theirs))
                .collect(),
        )
    }

    fn sample_consistent_root<R: Rng + ?Sized>(
        &self,
        player: PlayerId,
        root_obs: &Observation,
        rng: &mut R,
    ) -> Option<CardState> {
        let (public, mine) = Self::decode_root_obs(root_obs)?;
        let mut unseen: Vec<u8> = (0..64u8).filter(|b| (public & !mine) >> b & 1 == 1).collect();
        if unseen.len() < self.config.hand as usize {
            return None;
        }
        unseen.shuffle(rng);
        let theirs = unseen[..self.config.hand as usize].iter().fold(0u64, |m, &x| m | 1 << x);
        Some(self.root_with_opponent(player, public, mine, theirs))
    }

    fn sample_root_given_key<R: Rng + ?Sized>(&self, key: &InfostateKey, rng: &mut R) -> Option<CardState> {
        let player = key.player();
        let (first, rest) = key.trace().split_first()?;
        let (public, mine) = Self::decode_root_obs(&first.observation)?;
        let mut played = 0u64;
        let mut void = 0u64;
        let mut lead: Option<u8> = None;
        for ev in rest {
            let &card = ev.observation.as_bytes().first()?;
            if ev.action.is_none() {
                played |= 1 << card;
                if let Some(l) = lead {
                    if self.suit(card) != self.suit(l) {
                        void |= self.suit_mask(self.suit(l));
                    }
                }
            }
            lead = if lead.is_none() { Some(card) } else { None };
        }
        let left = (self.config.hand as u32).checked_sub(played.count_ones())?;
        let mut pool: Vec<u8> = (0..64u8).filter(|b| (public & !mine & !played & !void) >> b & 1 == 1).collect();
        if pool.len() < left as usize {
            return None;
        }
        pool.shuffle(rng);
        let theirs = pool[..left as usize].iter().fold(played, |m, &x| m | 1 << x);
        Some(self.root_with_opponent(player, public, mine, theirs))
    }

    fn action_label(&self, action: Action) -> String {
        const SUITS: [char; 4] = ['C', 'D', 'H', 'S'];
        let card = action.0 as u8;
        let suit = self.suit(card) as usize;
        let s = SUITS.get(suit).copied().unwrap_or('?');
        format!("{}{}", self.rank(card) + 2, s)
    }
}
