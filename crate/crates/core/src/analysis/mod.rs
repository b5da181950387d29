//! Decisions, orbit structure, height counts and the F-pure hull.
//!
//! Everything below works on two languages over Σ: L, recognised by the
//! machine of [`crate::mlengine`], and L′ = L ∩ L₀, which keeps one
//! length-minimal word per element of X ∩ Γ. Questions about the set X ∩ Γ
//! are questions about L′.

mod growth;
mod hull;
mod orbits;

pub use growth::{
    classify_growth, count_by_height, count_by_heights, growth_constants, min_representative_length, GapVerdict,
    GrowthClass, GrowthConstants, BALL_BUDGET,
};
pub use hull::{f_pure_hull_additive, fp_span_contains, HullResult};
pub use orbits::{
    frob_exact, orbit_closure, orbit_decompose, solve_one_minus_frob, ComponentData, OrbitDescription, OrbitTerm,
};

use crate::automata::Dfa;
use crate::carry::bijectivize;
use crate::error::{Error, Result};
use crate::mlengine::{build, BuildOptions, DEFAULT_SAFETY_FACTOR};
use crate::problem::Problem;

/// The machine automaton for a problem and its two minimized languages.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub machine: Dfa,
    /// L.
    pub language: Dfa,
    /// L′.
    pub representatives: Dfa,
}

pub fn analyze(problem: &Problem) -> Result<Analysis> {
    let opts = BuildOptions { state_cap: problem.settings.state_cap, safety_factor: DEFAULT_SAFETY_FACTOR };
    let machine = build(&problem.variety, &problem.sigma, &opts)?;
    analyze_machine(problem, machine.dfa)
}

/// Derives L and L′ from an already built machine automaton over Σ.
pub fn analyze_machine(problem: &Problem, machine: Dfa) -> Result<Analysis> {
    if machine.alphabet() != problem.sigma.len() {
        return Err(Error::validation(format!(
            "machine alphabet has {} letters, digit set has {}",
            machine.alphabet(),
            problem.sigma.len()
        )));
    }
    let language = machine.minimize();
    let representatives = bijectivize(&language, &problem.sigma, problem.settings.state_cap)?;
    Ok(Analysis { machine, language, representatives })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Question {
    Nonempty,
    Infinite,
    InfiniteCoset,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Verdict {
    pub question: Question,
    pub answer: bool,
    pub machine_states: usize,
    pub language_states: usize,
    pub representative_states: usize,
}

/// X ∩ Γ ≠ ∅.
pub fn decide_nonempty(a: &Analysis) -> bool {
    !a.language.is_empty()
}

/// X ∩ Γ is infinite.
pub fn decide_infinite(a: &Analysis) -> bool {
    a.representatives.is_infinite()
}

/// X ∩ Γ contains a coset of an infinite subgroup.
pub fn decide_infinite_coset(a: &Analysis) -> bool {
    !a.representatives.is_sparse()
}

pub fn decide(a: &Analysis, question: Question) -> Verdict {
    let answer = match question {
        Question::Nonempty => decide_nonempty(a),
        Question::Infinite => decide_infinite(a),
        Question::InfiniteCoset => decide_infinite_coset(a),
    };
    Verdict {
        question,
        answer,
        machine_states: a.machine.state_count(),
        language_states: a.language.state_count(),
        representative_states: a.representatives.state_count(),
    }
}
