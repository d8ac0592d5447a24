#![allow(dead_code)]

pub mod two_level;

use std::collections::BTreeMap;

use epimc::game::{History, InfostateKey, PlayerId};
use epimc::Game;
use rand::Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Plays up to `steps` uniformly random moves from a fresh deal.
pub fn random_prefix<G: Game, R: Rng>(game: &G, steps: usize, rng: &mut R) -> History<G::State> {
    let mut h = History::new(game.initial_state(rng));
    for _ in 0..steps {
        if game.is_terminal(h.current()) {
            break;
        }
        let legal = game.legal_actions(h.current());
        let a = legal[rng.gen_range(0..legal.len())];
        h.push(game, a).unwrap();
    }
    h
}

/// Key of whoever acts at the end of `h`.
pub fn actor_key<G: Game>(game: &G, h: &History<G::State>) -> Option<InfostateKey> {
    let p = game.current_player(h.current())?;
    Some(h.infostate(game, p))
}

pub fn history_label<S: std::fmt::Debug + Clone>(h: &History<S>) -> String {
    format!("{:?}|{:?}", h.root(), h.actions().collect::<Vec<_>>())
}

/// Pearson statistic of `counts` against a uniform law over `categories`
/// cells, and the 1% critical value.
pub fn chi_square_uniform(counts: &BTreeMap<String, u64>, categories: usize) -> (f64, f64) {
    let n: u64 = counts.values().sum();
    let expected = n as f64 / categories as f64;
    let mut stat: f64 = counts.values().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    // cells never drawn
    stat += (categories - counts.len()) as f64 * expected;
    let df = (categories - 1).max(1) as f64;
    let critical = ChiSquared::new(df).unwrap().inverse_cdf(0.99);
    (stat, critical)
}

pub fn both() -> [PlayerId; 2] {
    PlayerId::all()
}
