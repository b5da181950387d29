//! The automaton whose states are Frobenius pullbacks of translates of X.
//!
//! After reading x_0 … x_{ℓ-1} the machine sits at a polynomial system for
//! (X − [x_0 … x_{ℓ-1}])^{q^{-ℓr}}: a K-point a lies on it iff
//! [x_0 … x_{ℓ-1}] + F^{ℓr}(a) ∈ X. Reading x moves V to the system for
//! (V − x)^{q^{-r}}, obtained by splitting every coefficient of every
//! translated polynomial along the monomial basis of K over K^{q^r}. A state
//! accepts iff its system vanishes at the identity.
//!
//! States are compared syntactically through the canonical form of
//! [`Variety`]. Degrees never grow (translation and splitting keep the
//! monomials) and coefficient heights contract under splitting, so the set of
//! reachable systems is finite.

use crate::algebra::{height, lambda_height_offset, HeightContext};
use crate::automata::Dfa;
use crate::carry::digit_height_context;
use crate::error::{Error, Result};
use crate::group::{GroupPoint, GroupShape, Variety};
use crate::spanning::DigitSet;
use rayon::prelude::*;
use std::collections::HashMap;

/// Degree bound of the group law polynomials x + y and x·y.
pub const GROUP_LAW_DEGREE: u64 = 2;

/// Multiplier on the combinatorial state bound before exploration aborts.
pub const DEFAULT_SAFETY_FACTOR: u64 = 16;

/// Practical cap on explored states.
pub const DEFAULT_STATE_CAP: usize = 200_000;

/// Constants governing the finiteness of the state set.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct BoundReport {
    pub c0: u64,
    /// Max total degree of the defining polynomials.
    pub c1: u64,
    /// Max height of their coefficients.
    pub c2: u64,
    pub d: u64,
    pub r: u32,
    pub w0: u64,
    pub coeff_height_cap: u64,
    pub degree_cap: u64,
    /// The number of canonical systems within the caps is at most 2^this.
    pub state_cap_bits: u64,
}

fn binomial_f64(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

pub fn bound_report(x: &Variety, sigma: &DigitSet) -> BoundReport {
    let shape = sigma.shape();
    let ctx = digit_height_context(sigma);
    let q_r = ctx.lambda_modulus;
    let c0 = GROUP_LAW_DEGREE;
    let c1 = x.max_total_degree();
    let c2 = x.polys().iter().flat_map(|p| p.coeffs()).map(|c| height(c, &ctx)).max().unwrap_or(0);
    let d = lambda_height_offset(&ctx);
    let coeff_height_cap = c1 * c0 * c0 + c2 + (d * q_r).div_ceil(q_r - 1);
    let degree_cap = c1 * c0;
    // Monomials of degree <= degree_cap, coefficients of height <= 2 cap,
    // and at most one system per subset of such polynomials.
    let n = shape.dim() as u64;
    let k = shape.ring().nvars() as u64;
    let monomials = binomial_f64(degree_cap + n, n);
    let coeff_bits = binomial_f64(2 * coeff_height_cap * ctx.w0 + k, k) * 2.0 * (shape.q() as f64).log2();
    let poly_bits = monomials * coeff_bits;
    let state_cap_bits = (monomials * (poly_bits + 1.0)).ceil().min(u64::MAX as f64) as u64;
    BoundReport { c0, c1, c2, d, r: sigma.r(), w0: ctx.w0, coeff_height_cap, degree_cap, state_cap_bits }
}

/// One automaton state.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MlState {
    System(Variety),
    /// The system has no points.
    Empty,
}

impl MlState {
    pub fn from_variety(v: Variety) -> Self {
        if v.is_empty_set() {
            MlState::Empty
        } else {
            MlState::System(v)
        }
    }

    /// Polynomial strings; `["1"]` for the empty system.
    pub fn to_strings(&self) -> Vec<String> {
        match self {
            MlState::System(v) => v.to_strings(),
            MlState::Empty => vec!["1".into()],
        }
    }
}

pub fn initial_state(x: &Variety) -> MlState {
    MlState::from_variety(x.clone())
}

/// (V − letter)^{q^{-r}}.
pub fn transition(state: &MlState, letter: &GroupPoint, shape: &GroupShape, r: u32) -> MlState {
    let MlState::System(v) = state else {
        return MlState::Empty;
    };
    if v.is_whole() {
        return state.clone();
    }
    let q_r = (shape.q() as u64).pow(r);
    let translated = v.translate(shape, letter);
    let mut parts = Vec::new();
    for p in translated.polys() {
        parts.extend(p.lambda_split_all(q_r).into_values());
    }
    MlState::from_variety(Variety::new(shape, parts))
}

pub fn accepts_zero(state: &MlState, shape: &GroupShape) -> bool {
    match state {
        MlState::System(v) => v.contains_identity(shape),
        MlState::Empty => false,
    }
}

#[derive(Clone, Copy, Debug)]
pub struct BuildOptions {
    pub state_cap: usize,
    pub safety_factor: u64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { state_cap: DEFAULT_STATE_CAP, safety_factor: DEFAULT_SAFETY_FACTOR }
    }
}

/// The machine over Σ, its states in numbering order, and the bounds.
#[derive(Clone, Debug)]
pub struct Machine {
    pub dfa: Dfa,
    pub states: Vec<MlState>,
    pub report: BoundReport,
}

fn check_caps(state: &MlState, report: &BoundReport, ctx: &HeightContext) -> Result<()> {
    let MlState::System(v) = state else {
        return Ok(());
    };
    let degree = v.max_total_degree();
    if degree > report.degree_cap {
        return Err(Error::CapExceeded {
            what: "state polynomial degree".into(),
            observed: degree.to_string(),
            cap: report.degree_cap.to_string(),
        });
    }
    let h = v.polys().iter().flat_map(|p| p.coeffs()).map(|c| height(c, ctx)).max().unwrap_or(0);
    if h > 2 * report.coeff_height_cap {
        return Err(Error::CapExceeded {
            what: "state coefficient height".into(),
            observed: h.to_string(),
            cap: (2 * report.coeff_height_cap).to_string(),
        });
    }
    Ok(())
}

/// Explores all states reachable from X under Σ.
///
/// Each breadth-first layer is expanded in parallel; new states are then
/// numbered sequentially by (source state, letter), so the numbering is the
/// breadth-first discovery order regardless of scheduling.
pub fn build(x: &Variety, sigma: &DigitSet, opts: &BuildOptions) -> Result<Machine> {
    let shape = sigma.shape();
    let r = sigma.r();
    let report = bound_report(x, sigma);
    let ctx = digit_height_context(sigma);
    let theoretical = if report.state_cap_bits >= 60 {
        u64::MAX
    } else {
        (1u64 << report.state_cap_bits).saturating_mul(opts.safety_factor)
    };
    let cap = (opts.state_cap as u64).min(theoretical) as usize;

    let start = initial_state(x);
    check_caps(&start, &report, &ctx)?;
    let mut id: HashMap<MlState, usize> = HashMap::from([(start.clone(), 0)]);
    let mut states = vec![start];
    let mut rows: Vec<Vec<u32>> = Vec::new();
    let mut layer = 0..1;
    while !layer.is_empty() {
        let expanded: Vec<Vec<MlState>> = states[layer.clone()]
            .par_iter()
            .map(|s| sigma.digits().iter().map(|d| transition(s, d, shape, r)).collect())
            .collect();
        let layer_end = states.len();
        for succ in expanded {
            let mut row = Vec::with_capacity(succ.len());
            for t in succ {
                let j = match id.get(&t) {
                    Some(&j) => j,
                    None => {
                        check_caps(&t, &report, &ctx)?;
                        if states.len() >= cap {
                            return Err(Error::CapExceeded {
                                what: "automaton states".into(),
                                observed: format!("{} (bound 2^{})", states.len() + 1, report.state_cap_bits),
                                cap: cap.to_string(),
                            });
                        }
                        id.insert(t.clone(), states.len());
                        states.push(t);
                        states.len() - 1
                    }
                };
                row.push(j as u32);
            }
            rows.push(row);
        }
        layer = layer_end..states.len();
    }
    let accepting: Vec<bool> = states.iter().map(|s| accepts_zero(s, shape)).collect();
    let delta = rows.into_iter().flatten().collect();
    let dfa = Dfa::new(sigma.len(), 0, accepting, delta)?;
    Ok(Machine { dfa, states, report })
}

#[derive(serde::Serialize)]
pub struct StateRecord {
    pub id: usize,
    pub accepting: bool,
    pub polys: Vec<String>,
}

impl Machine {
    pub fn state_table(&self) -> Vec<StateRecord> {
        self.states
            .iter()
            .enumerate()
            .map(|(id, s)| StateRecord { id, accepting: self.dfa.is_accepting(id), polys: s.to_strings() })
            .collect()
    }
}
