#![allow(dead_code)]

use rand::Rng;
use regulation_game::oracle::{sample_check_game, sample_check_regulation};
use regulation_game::{GameParams, Regulation};

pub fn game<R: Rng>(rng: &mut R) -> GameParams {
    sample_check_game(rng)
}

pub fn regulation<R: Rng>(rng: &mut R, params: &GameParams) -> Regulation {
    sample_check_regulation(rng, params)
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}
