//! Browser bindings: the Leave-or-Play decision, fusion counts on small
//! games, and a phantom tic-tac-toe opponent.
//!
//! Every export returns a JSON string. The functions in [`demo`] hold the
//! logic and run natively as well.

use wasm_bindgen::prelude::*;

pub mod demo;

/// PIMC and EPIMC decisions at the root of the Leave-or-Play game.
#[wasm_bindgen]
pub fn leave_or_play_decisions(leave_payoff: f64, depth: u32, iterations: u32, seed: u32) -> Result<String, JsError> {
    demo::leave_or_play_decisions(leave_payoff, depth as usize, iterations as usize, seed as u64)
        .map_err(|e| JsError::new(&e))
}

/// Fusion counts of the EPIMC policy, `game` being `rps`, `card_toy` or
/// `card_three_tricks`, `depths` a comma list.
#[wasm_bindgen]
pub fn fusion_counts(game: &str, depths: &str) -> Result<String, JsError> {
    demo::fusion_counts(game, depths).map_err(|e| JsError::new(&e))
}

/// A game of phantom tic-tac-toe against EPIMC. The human plays first.
#[wasm_bindgen]
pub struct PhantomMatch(demo::PhantomMatch);

#[wasm_bindgen]
impl PhantomMatch {
    #[wasm_bindgen(constructor)]
    pub fn new(seed: u32, depth: u32, iterations: u32) -> PhantomMatch {
        PhantomMatch(demo::PhantomMatch::new(seed as u64, depth as usize, iterations as usize))
    }

    pub fn view(&self) -> String {
        self.0.view_json()
    }

    /// Probes or places at `cell` (0..9, row-major) and lets the opponent
    /// answer.
    pub fn play(&mut self, cell: u32) -> Result<String, JsError> {
        self.0.play(cell as u16).map_err(|e| JsError::new(&e))
    }
}
