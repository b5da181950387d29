//! Automata for intersections X ∩ Γ of a subvariety with a finitely
//! generated Z[F]-submodule of a split group G_a^a × G_m^b over a rational
//! function field F_q(t_1..t_k).

pub mod algebra;
pub mod analysis;
pub mod automata;
pub mod carry;
pub mod cli;
pub mod error;
pub mod group;
pub mod mlengine;
pub mod problem;
pub mod spanning;

pub use error::{Error, Result};
