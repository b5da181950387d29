//! Height growth of X ∩ Γ under the degree height h.
//!
//! On split groups h(F^r x) = q^r h(x) exactly and h(x + c) ≤ h(x) + h(c).
//! With m the largest digit height, a word of length n then has
//! h ≤ E_n q^{(n-1)r} where E_1 = m and E_n = E_{n-1} + m q^{-(n-1)r}, so E_n
//! increases to C0_h = m q^r / (q^r − 1).
//!
//! For the lower constant, let R_k be the least height of an element whose
//! shortest expansion has length k + 1. Every element of height at most
//! C1_h q^{kr} has an expansion of length at most k + offset as soon as
//! C1_h ≤ (R_{k+offset} − 1) / q^{kr}. The R_k are measured on the ball of all
//! expansions up to a search depth limited by [`BALL_BUDGET`], so C1_h is
//! exact for lengths inside that ball and extrapolated beyond it.

use crate::error::{Error, Result};
use crate::group::GroupPoint;
use crate::problem::Problem;
use crate::spanning::DigitSet;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use std::collections::HashSet;

use super::Analysis;

/// Bound on |Σ| · |ball| for the exhaustive representative-length search.
pub const BALL_BUDGET: usize = 200_000;

/// Bound on the number of words enumerated when counting by height.
pub const ENUMERATION_CAP: u64 = 50_000_000;

const MAX_SEARCH_DEPTH: usize = 12;
const SAMPLE_LENGTHS: usize = 6;

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct GrowthConstants {
    pub max_digit_height: u64,
    pub r: u32,
    pub q_r: u64,
    /// Loss in h(F^r x) ≥ q^r h(x) − κ3; zero for the degree height.
    pub kappa3: u64,
    pub c0_h: f64,
    pub c1_h: f64,
    /// Extra length allowed on top of ⌈log_{q^r}(H / C1_h)⌉.
    pub offset: u32,
    pub e_table: Vec<f64>,
    /// (R_{k+offset} − 1) / q^{kr} for k = 1, 2, ...; `None` when no element
    /// first appears at that length.
    pub b_table: Vec<Option<f64>>,
    pub search_depth: u32,
}

pub fn growth_constants(sigma: &DigitSet) -> Result<GrowthConstants> {
    let r = sigma.r();
    let q_r = (sigma.shape().q() as u64).pow(r);
    let m = sigma.digits().iter().map(GroupPoint::degree_height).max().unwrap_or(0);
    let qf = q_r as f64;

    let mut e_table = vec![m as f64];
    for n in 2..=64 {
        let step = m as f64 / qf.powi(n - 1);
        let next = e_table.last().unwrap() + step;
        e_table.push(next);
        if step <= 1e-12 * next.max(1.0) {
            break;
        }
    }
    let c0_h = m as f64 * qf / (qf - 1.0);

    // Least height first reached at each length.
    let mut ball: HashSet<GroupPoint> = HashSet::from([sigma.shape().identity()]);
    let mut first_heights: Vec<Option<u64>> = Vec::new();
    let mut top = 0u64;
    while first_heights.len() < MAX_SEARCH_DEPTH
        && sigma.len().saturating_mul(ball.len()) <= BALL_BUDGET
        && (top + m).saturating_mul(q_r) < u32::MAX as u64 / 2
    {
        let shifted: Vec<GroupPoint> = ball.iter().map(|y| y.frob(r)).collect();
        let mut next = HashSet::with_capacity(ball.len() * 2);
        for y in &shifted {
            for d in sigma.digits() {
                next.insert(d.add(y));
            }
        }
        let fresh = next.iter().filter(|x| !ball.contains(*x)).map(GroupPoint::degree_height).min();
        first_heights.push(fresh);
        top = next.iter().map(GroupPoint::degree_height).max().unwrap_or(0);
        ball = next;
    }
    let search_depth = first_heights.len() as u32;

    // first_heights[k] is R_k.
    let mut chosen = None;
    for offset in 0..first_heights.len() {
        let table: Vec<Option<f64>> = (1..first_heights.len().saturating_sub(offset))
            .map(|k| first_heights[k + offset].map(|rh| (rh as f64 - 1.0) / qf.powi(k as i32)))
            .collect();
        if !table.is_empty() && table.iter().flatten().all(|&b| b > 0.0) {
            chosen = Some((offset as u32, table));
            break;
        }
    }
    let (offset, b_table) = chosen.unwrap_or((0, Vec::new()));
    let c1_h = b_table.iter().flatten().copied().fold(1.0f64, f64::min);
    Ok(GrowthConstants {
        max_digit_height: m,
        r,
        q_r,
        kappa3: 0,
        c0_h,
        c1_h,
        offset,
        e_table,
        b_table,
        search_depth,
    })
}

/// Length bound n₀(H) for shortest expansions of elements of height ≤ H.
pub fn min_representative_length(gc: &GrowthConstants, h: u64) -> usize {
    let ratio = (h.max(1) as f64) / gc.c1_h;
    let mut n = 1usize;
    let mut reach = gc.q_r as f64;
    while reach * (1.0 + 1e-9) < ratio {
        reach *= gc.q_r as f64;
        n += 1;
    }
    n + gc.offset as usize
}

/// N(H) = #{x ∈ X ∩ Γ : h(x) ≤ H} for each H, from one enumeration of L′.
pub fn count_by_heights(problem: &Problem, a: &Analysis, gc: &GrowthConstants, hs: &[u64]) -> Result<Vec<u64>> {
    let Some(&h_max) = hs.iter().max() else {
        return Ok(Vec::new());
    };
    let n0 = min_representative_length(gc, h_max);
    let lang = &a.representatives;
    let words = lang.census(n0).cumulative.last().and_then(|c| c.to_u64()).unwrap_or(u64::MAX);
    if words > ENUMERATION_CAP {
        return Err(Error::CapExceeded {
            what: "words enumerated for a height count".into(),
            observed: words.to_string(),
            cap: ENUMERATION_CAP.to_string(),
        });
    }
    let sigma = &problem.sigma;
    let useful = lang.useful();
    let shifted: Vec<Vec<GroupPoint>> =
        (0..n0).map(|i| sigma.digits().iter().map(|d| d.frob(i as u32 * sigma.r())).collect()).collect();
    let tally = |h: u64, acc: &mut Vec<u64>| {
        for (slot, &bound) in acc.iter_mut().zip(hs) {
            if h <= bound {
                *slot += 1;
            }
        }
    };
    let mut total = vec![0u64; hs.len()];
    let start = lang.start();
    if !useful[start] {
        return Ok(total);
    }
    if lang.is_accepting(start) {
        tally(0, &mut total);
    }
    if n0 == 0 {
        return Ok(total);
    }
    let branches: Vec<Vec<u64>> = (0..lang.alphabet())
        .into_par_iter()
        .map(|letter| {
            let mut acc = vec![0u64; hs.len()];
            let s = lang.next(start, letter);
            if useful[s] {
                let mut stack = vec![(s, 1usize, shifted[0][letter].clone())];
                while let Some((s, len, value)) = stack.pop() {
                    if lang.is_accepting(s) {
                        tally(value.degree_height(), &mut acc);
                    }
                    if len == n0 {
                        continue;
                    }
                    for d in 0..lang.alphabet() {
                        let t = lang.next(s, d);
                        if useful[t] {
                            stack.push((t, len + 1, value.add(&shifted[len][d])));
                        }
                    }
                }
            }
            acc
        })
        .collect();
    for b in branches {
        total.iter_mut().zip(b).for_each(|(t, x)| *t += x);
    }
    Ok(total)
}

pub fn count_by_height(problem: &Problem, a: &Analysis, gc: &GrowthConstants, h: u64) -> Result<u64> {
    Ok(count_by_heights(problem, a, gc, &[h])?[0])
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
#[serde(tag = "class", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GrowthClass {
    Sparse { degree: u32 },
    NonSparse,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct GapVerdict {
    pub classification: GrowthClass,
    /// Words of L′ of each length.
    pub census: Vec<String>,
    pub cumulative: Vec<String>,
    /// (H, N(H)) at H = q^{nr}, sparse case only.
    pub samples: Vec<(u64, u64)>,
    /// Least-squares slope of log N(H) against log log H.
    pub fit_exponent: Option<f64>,
    /// c_{n+1} / c_n where c_n > 0.
    pub ratios: Vec<f64>,
    /// Geometric mean of the ratios over the upper half of the census.
    pub rho: Option<f64>,
}

fn fit_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let sxx: f64 = points.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

pub fn classify_growth(problem: &Problem, a: &Analysis, gc: &GrowthConstants, n_max: usize) -> Result<GapVerdict> {
    let lang = &a.representatives;
    let census = lang.census(n_max);
    let counts: Vec<f64> = census.counts.iter().map(|c| c.to_f64().unwrap_or(f64::INFINITY)).collect();
    let ratios: Vec<f64> =
        counts.windows(2).skip(1).filter(|w| w[0] > 0.0).map(|w| w[1] / w[0]).collect();
    let upper = &ratios[ratios.len() / 2..];
    let rho = (!upper.is_empty() && upper.iter().all(|&x| x > 0.0))
        .then(|| (upper.iter().map(|x| x.ln()).sum::<f64>() / upper.len() as f64).exp());
    let (classification, samples, fit_exponent) = match lang.growth_degree() {
        crate::automata::GrowthDegree::Infinite => (GrowthClass::NonSparse, Vec::new(), None),
        crate::automata::GrowthDegree::Polynomial(d) => {
            let hs: Vec<u64> = (1..=SAMPLE_LENGTHS.min(n_max) as u32).map(|n| gc.q_r.pow(n)).collect();
            let ns = count_by_heights(problem, a, gc, &hs)?;
            let samples: Vec<(u64, u64)> = hs.into_iter().zip(ns).collect();
            let pts: Vec<(f64, f64)> = samples
                .iter()
                .filter(|&&(h, n)| h > 1 && n > 0)
                .map(|&(h, n)| ((h as f64).ln().ln(), (n as f64).ln()))
                .collect();
            (GrowthClass::Sparse { degree: d }, samples, fit_slope(&pts))
        }
    };
    Ok(GapVerdict {
        classification,
        census: census.counts.iter().map(|c| c.to_string()).collect(),
        cumulative: census.cumulative.iter().map(|c| c.to_string()).collect(),
        samples,
        fit_exponent,
        ratios,
        rho,
    })
}
