//! The two worked examples as model documents.
//!
//! `FIGURE1`: the train example. Ann (`a`) and Bob (`b`) know whether the
//! train has passed Manchester (`p`); Cath (`c`) does not. Actual state `w`.
//!
//! `FIGURE2`: the four-state counterexample separating a joint coalition
//! announcement from two consecutive ones. State names spell the valuation,
//! `n` negating the following atom (`pqnr` is p ∧ q ∧ ¬r). Actual state `pqr`.

use super::EpistemicModel;
use crate::parser::parse_model;

pub const FIGURE1: &str = include_str!("../../models/fig1.model");
pub const FIGURE2: &str = include_str!("../../models/fig2.model");

pub fn figure1() -> EpistemicModel {
    parse_model(FIGURE1).expect("built-in document is valid")
}

pub fn figure2() -> EpistemicModel {
    parse_model(FIGURE2).expect("built-in document is valid")
}
