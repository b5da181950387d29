//! Expansion-equality and unique-representative automata.
//!
//! The equality automaton reads pairs (v, w) and tracks the carry γ with
//! [v] − [w] = F^{nr}(γ) after n letters. A letter pair (s, s') moves γ to
//! F^{-r}(γ + s − s') when that root exists; otherwise the pair can never
//! expand equally. Carry heights contract: with digit heights at most 1 under
//! the context below, ht(F^{-r}(γ + d)) ≤ ⌈(ht γ + 2) / q^r⌉, which is below
//! ht γ once ht γ ≥ 3, so carries stay under the computed bound.

use crate::algebra::{height, lambda_height_offset, HeightContext};
use crate::automata::{lexlt_pair_automaton, no_trailing_letter, Dfa, DEFAULT_SUBSET_CAP};
use crate::error::{Error, Result};
use crate::group::GroupPoint;
use crate::spanning::DigitSet;
use std::collections::{BTreeMap, HashMap};

/// Height context in which every digit coordinate has height at most 1.
pub fn digit_height_context(sigma: &DigitSet) -> HeightContext {
    let q_r = (sigma.shape().q() as u64).pow(sigma.r());
    HeightContext::for_degrees(sigma.max_digit_degree(), sigma.shape().ring().nvars(), q_r)
}

fn point_height(x: &GroupPoint, ctx: &HeightContext) -> u64 {
    x.coords().map(|c| height(c, ctx)).max().unwrap_or(0)
}

/// B = max digit height + D + 1.
pub fn carry_bound(sigma: &DigitSet) -> u64 {
    let ctx = digit_height_context(sigma);
    let digit = sigma.digits().iter().map(|d| point_height(d, &ctx)).max().unwrap_or(0);
    digit + lambda_height_offset(&ctx) + 1
}

/// The equality automaton together with its carries (state i ↦ carry i; the
/// last state is the dead state).
pub struct EqualityAutomaton {
    pub dfa: Dfa,
    pub carries: Vec<GroupPoint>,
}

/// {(v, w) : |v| = |w|, [v] = [w]} over the pair alphabet.
pub fn equality_pair_automaton(sigma: &DigitSet, state_cap: usize) -> Result<EqualityAutomaton> {
    let n = sigma.len();
    let r = sigma.r();
    let ctx = digit_height_context(sigma);
    let bound = carry_bound(sigma);

    // Distinct differences s − s' and the pair → difference map.
    let mut diff_id: BTreeMap<GroupPoint, usize> = BTreeMap::new();
    let mut pair_diff = vec![0usize; n * n];
    for (a, s) in sigma.digits().iter().enumerate() {
        for (b, t) in sigma.digits().iter().enumerate() {
            let d = s.sub(t);
            let next = diff_id.len();
            pair_diff[a * n + b] = *diff_id.entry(d).or_insert(next);
        }
    }
    let mut diffs = vec![sigma.shape().identity(); diff_id.len()];
    for (d, i) in diff_id {
        diffs[i] = d;
    }

    let zero = sigma.shape().identity();
    let mut id: HashMap<GroupPoint, usize> = HashMap::from([(zero.clone(), 0)]);
    let mut carries = vec![zero];
    let mut rows: Vec<Vec<Option<usize>>> = Vec::new();
    let mut i = 0;
    while i < carries.len() {
        let gamma = carries[i].clone();
        i += 1;
        let mut row = Vec::with_capacity(diffs.len());
        for d in &diffs {
            let succ = match gamma.add(d).frob_root(r) {
                None => None,
                Some(next) => {
                    if let Some(&j) = id.get(&next) {
                        Some(j)
                    } else {
                        let h = point_height(&next, &ctx);
                        if h > bound {
                            return Err(Error::CarryBoundExceeded { height: h, bound });
                        }
                        if carries.len() >= state_cap {
                            return Err(Error::CapExceeded {
                                what: "carry states".into(),
                                observed: carries.len().to_string(),
                                cap: state_cap.to_string(),
                            });
                        }
                        id.insert(next.clone(), carries.len());
                        carries.push(next);
                        Some(carries.len() - 1)
                    }
                }
            };
            row.push(succ);
        }
        rows.push(row);
    }
    let dead = carries.len();
    let dfa = Dfa::from_fn(
        dead + 1,
        n * n,
        0,
        |s, l| if s == dead { dead } else { rows[s][pair_diff[l]].unwrap_or(dead) },
        |s| s == 0,
    );
    Ok(EqualityAutomaton { dfa, carries })
}

/// Words that are ≺-least among equal-length words with the same expansion
/// and do not end in the zero digit: exactly one representative per element.
pub fn representative_language(sigma: &DigitSet, state_cap: usize) -> Result<Dfa> {
    let n = sigma.len();
    let equal = equality_pair_automaton(sigma, state_cap)?.dfa;
    let less = lexlt_pair_automaton(n, &sigma.letter_ranks());
    let beaten = equal.intersect(&less)?.project(n, 1, state_cap.max(DEFAULT_SUBSET_CAP))?;
    let unbeaten = beaten.minimize().complement();
    Ok(unbeaten.intersect(&no_trailing_letter(n, sigma.zero_index()))?.minimize())
}

/// L ∩ L_0: the words of L that are the unique representatives of their values.
pub fn bijectivize(l: &Dfa, sigma: &DigitSet, state_cap: usize) -> Result<Dfa> {
    let l0 = representative_language(sigma, state_cap)?;
    Ok(l.intersect(&l0)?.minimize())
}
