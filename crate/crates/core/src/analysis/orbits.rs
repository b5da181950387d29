//! Orbit descriptions of sparse intersections.
//!
//! For a loop word w with δ = |w|·r and θ solving (1 − F^δ)θ = −[w],
//! [w^n] = F^{nδ}θ − θ. Substituting into u_0 w_0^{n_0} u_1 ... u_m collects the
//! expansion as a_0 + Σ_{i≥1} F^{n_0δ_0 + … + n_{i-1}δ_{i-1}} a_i with
//!
//!   a_i = F^{S_i}[u_i] + F^{S_i}θ_{i-1} − F^{S_{i+1}}θ_i,   S_i = r·|u_0 … u_{i-1}|,
//!
//! θ_{-1} = θ_m = 0. One loop gives the translate a_0 of the orbit of a_1.
//!
//! The equation for θ is F_q-linear on additive coordinates (x ↦ x − x^{q^δ}
//! acts along chains m, m^{q^δ}, m^{q^{2δ}}, … of Laurent monomials) and
//! multiplicative on the others (γ ↦ γ^{1−q^δ}, solvable on monomials with
//! divisible exponents). Constant parts may need roots in an extension
//! F_{p^j} of a prime constant field; points over an extension are printed
//! over F_{p^j} with generator g.

use crate::algebra::{FqField, Mono, Poly, PolyRing, RatFunc, Ring};
use crate::automata::simple_sparse_decomposition;
use crate::error::{Error, Result};
use crate::group::{GroupPoint, GroupShape};
use crate::problem::Problem;
use crate::spanning::DigitSet;
use std::collections::BTreeMap;

use super::Analysis;

/// Bound on the number of simple sparse components examined.
pub const COMPONENT_CAP: usize = 10_000;

/// Iterates checked for each emitted orbit.
const VERIFY_ITERATES: u32 = 10;

/// Bound on enumerated finite orbits.
const FINITE_ORBIT_CAP: usize = 64;

/// One orbit {F^{nδ} base : n ≥ 0} inside an orbit sum.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct OrbitTerm {
    pub base: GroupPoint,
    pub delta: u32,
    /// Largest j with F(a) − a over K^{p^j}; `None` when a has constant coordinates.
    pub depth: Option<u32>,
    /// The base is F^{-shift·δ} of the original point.
    pub shift: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub finite: Option<Vec<GroupPoint>>,
}

/// Raw data of a simple sparse component u_0 w_0* u_1 … u_m.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct ComponentData {
    pub prefixes: Vec<GroupPoint>,
    pub loops: Vec<GroupPoint>,
    pub prefix_lengths: Vec<usize>,
    pub loop_lengths: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum OrbitDescription {
    Singleton {
        point: GroupPoint,
    },
    /// translate + {F^{nδ} base : n ≥ 0}.
    Orbit {
        translate: GroupPoint,
        base: GroupPoint,
        delta: u32,
        /// Degree over F_p of the constant field holding translate and base
        /// when it had to be enlarged, else 1.
        extension_degree: u32,
        #[serde(skip_serializing_if = "Option::is_none")]
        finite: Option<Vec<GroupPoint>>,
        verified_iterates: u32,
    },
    /// translate + Σ_i {F^{nδ_i} base_i : n ≥ 0}.
    OrbitSum {
        translate: GroupPoint,
        orbits: Vec<OrbitTerm>,
    },
    /// translate + {Σ_i F^{n_1δ_1 + … + n_iδ_i} points_i}.
    Eset {
        translate: Option<GroupPoint>,
        points: Vec<GroupPoint>,
        deltas: Vec<u32>,
        solvable: bool,
        extension_degree: u32,
        component: ComponentData,
    },
}

fn checked_qpow(q: u32, n: u32) -> Option<u64> {
    (q as u64).checked_pow(n)
}

/// x ↦ x^m on every coordinate, m a power of p, acting on constants too.
/// `None` on exponent overflow.
pub fn frob_exact(x: &GroupPoint, m: u64) -> Option<GroupPoint> {
    let map = |v: &[RatFunc]| v.iter().map(|c| c.power_map(m)).collect::<Option<Vec<_>>>();
    Some(GroupPoint { add: map(&x.add)?, mul: map(&x.mul)? })
}

/// The ground ring, then F_{p^j}(t) for j = 2..=cap when F_q is prime.
fn candidate_rings(shape: &GroupShape, cap: u32) -> Vec<(u32, Ring)> {
    let base = shape.ring();
    let mut out = vec![(1, base.clone())];
    if base.field.is_prime_field() {
        for j in 2..=cap {
            match FqField::with_default_modulus(base.field.p(), j) {
                Ok(f) => out.push((j, PolyRing::new(f, base.vars.clone()))),
                Err(_) => break,
            }
        }
    }
    out
}

/// Laurent terms of x, when its denominator is a monomial.
fn laurent_terms(x: &RatFunc) -> Option<Vec<(Vec<i64>, u32)>> {
    let den = x.den();
    if den.len() != 1 {
        return None;
    }
    let shift: Vec<i64> = den.terms()[0].0.iter().map(|&e| e as i64).collect();
    Some(
        x.num()
            .terms()
            .iter()
            .map(|(m, c)| (m.iter().zip(&shift).map(|(&e, s)| e as i64 - s).collect(), *c))
            .collect(),
    )
}

fn from_laurent(ring: &Ring, terms: Vec<(Vec<i64>, u32)>) -> RatFunc {
    if terms.is_empty() {
        return RatFunc::zero(ring);
    }
    let k = ring.nvars();
    let low: Vec<i64> = (0..k).map(|i| terms.iter().map(|(e, _)| e[i]).min().unwrap_or(0).min(0)).collect();
    let num = Poly::from_terms(
        ring,
        terms.into_iter().map(|(e, c)| (e.iter().zip(&low).map(|(x, l)| (x - l) as u32).collect::<Mono>(), c)).collect(),
    );
    let den = Poly::monomial(ring, low.iter().map(|l| (-l) as u32).collect(), 1);
    RatFunc::new(num, den)
}

/// γ with γ − γ^m = c.
fn solve_additive(c: &RatFunc, m: u64) -> Option<RatFunc> {
    let ring = c.ring().clone();
    let f = &ring.field;
    if c.is_zero() {
        return Some(c.clone());
    }
    let mi = i64::try_from(m).ok()?;
    let mut constant = 0u32;
    // chain base -> (power index -> coefficient)
    let mut chains: BTreeMap<Vec<i64>, BTreeMap<u32, u32>> = BTreeMap::new();
    for (mut e, a) in laurent_terms(c)? {
        if e.iter().all(|&x| x == 0) {
            constant = a;
            continue;
        }
        let mut k = 0;
        while e.iter().all(|&x| x % mi == 0) {
            e.iter_mut().for_each(|x| *x /= mi);
            k += 1;
        }
        chains.entry(e).or_default().insert(k, a);
    }
    let mut terms = Vec::new();
    if constant != 0 {
        let x = f.elements().find(|&x| f.sub(x, f.pow(x, m)) == constant)?;
        terms.push((vec![0; ring.nvars()], x));
    }
    for (base, coeffs) in chains {
        let top = *coeffs.keys().next_back().expect("nonempty chain");
        let mut g = 0u32;
        let mut e = base.clone();
        for k in 0..=top {
            g = f.add(coeffs.get(&k).copied().unwrap_or(0), f.pow(g, m));
            if k == top {
                if g != 0 {
                    return None;
                }
            } else {
                if g != 0 {
                    terms.push((e.clone(), g));
                }
                e.iter_mut().for_each(|x| *x *= mi);
            }
        }
    }
    Some(from_laurent(&ring, terms))
}

/// γ with γ^{1−m} = c.
fn solve_multiplicative(c: &RatFunc, m: u64) -> Option<RatFunc> {
    let ring = c.ring().clone();
    let f = &ring.field;
    let terms = laurent_terms(c)?;
    let [(e, a)] = terms.as_slice() else {
        return None;
    };
    let d = i64::try_from(m - 1).ok()?;
    if e.iter().any(|&x| x % d != 0) {
        return None;
    }
    let target = f.inv(*a);
    let b = f.elements().filter(|&b| b != 0).find(|&b| f.pow(b, m - 1) == target)?;
    Some(from_laurent(&ring, vec![(e.iter().map(|&x| -x / d).collect(), b)]))
}

fn solve_in(c: &GroupPoint, m: u64) -> Option<GroupPoint> {
    let add = c.add.iter().map(|x| solve_additive(x, m)).collect::<Option<Vec<_>>>()?;
    let mul = c.mul.iter().map(|x| solve_multiplicative(x, m)).collect::<Option<Vec<_>>>()?;
    Some(GroupPoint { add, mul })
}

/// γ with (1 − F^β)γ = c, over K or a constant-field extension of degree
/// at most `ext_cap`; returns γ and the extension degree.
pub fn solve_one_minus_frob(shape: &GroupShape, c: &GroupPoint, beta: u32, ext_cap: u32) -> Option<(GroupPoint, u32)> {
    let m = checked_qpow(shape.q(), beta)?;
    solve_all(shape, std::slice::from_ref(c), vec![m], ext_cap).map(|(mut v, j)| (v.remove(0), j))
}

/// Solves each (1 − F^{β_i})γ_i = c_i in one common ring.
fn solve_all(shape: &GroupShape, cs: &[GroupPoint], ms: Vec<u64>, ext_cap: u32) -> Option<(Vec<GroupPoint>, u32)> {
    for (j, ring) in candidate_rings(shape, ext_cap) {
        let solved: Option<Vec<_>> = cs.iter().zip(&ms).map(|(c, &m)| solve_in(&c.embed(&ring), m)).collect();
        if let Some(v) = solved {
            return Some((v, j));
        }
    }
    None
}

fn all_constant(x: &GroupPoint) -> bool {
    x.coords().all(|c| c.is_constant())
}

/// {F^{nδ} x} for x with constant coordinates.
fn finite_orbit(x: &GroupPoint, m: u64) -> Vec<GroupPoint> {
    let mut out = vec![x.clone()];
    while out.len() < FINITE_ORBIT_CAP {
        let next = frob_exact(out.last().unwrap(), m).expect("constants do not overflow");
        if next == out[0] {
            break;
        }
        out.push(next);
    }
    out
}

fn component_data(sigma: &DigitSet, us: &[Vec<usize>], ws: &[Vec<usize>]) -> ComponentData {
    ComponentData {
        prefixes: us.iter().map(|u| sigma.expand(u)).collect(),
        loops: ws.iter().map(|w| sigma.expand(w)).collect(),
        prefix_lengths: us.iter().map(Vec::len).collect(),
        loop_lengths: ws.iter().map(Vec::len).collect(),
    }
}

fn breach(what: &str) -> Error {
    Error::Internal(format!("orbit description does not reproduce its component: {what}"))
}

/// One description per simple sparse component of L′.
pub fn orbit_decompose(problem: &Problem, a: &Analysis) -> Result<Vec<OrbitDescription>> {
    let comps = simple_sparse_decomposition(&a.representatives, COMPONENT_CAP)?;
    comps.iter().map(|c| describe(problem, &c.us, &c.ws)).collect()
}

fn describe(problem: &Problem, us: &[Vec<usize>], ws: &[Vec<usize>]) -> Result<OrbitDescription> {
    let sigma = &problem.sigma;
    match ws.len() {
        0 => Ok(OrbitDescription::Singleton { point: sigma.expand(&us[0]) }),
        1 => describe_orbit(problem, us, ws),
        _ => describe_eset(problem, us, ws),
    }
}

fn instantiate(us: &[Vec<usize>], ws: &[Vec<usize>], ns: &[usize]) -> Vec<usize> {
    let mut out = us[0].clone();
    for (i, w) in ws.iter().enumerate() {
        for _ in 0..ns[i] {
            out.extend_from_slice(w);
        }
        out.extend_from_slice(&us[i + 1]);
    }
    out
}

fn unsolved(sigma: &DigitSet, us: &[Vec<usize>], ws: &[Vec<usize>]) -> OrbitDescription {
    OrbitDescription::Eset {
        translate: None,
        points: Vec::new(),
        deltas: ws.iter().map(|w| w.len() as u32 * sigma.r()).collect(),
        solvable: false,
        extension_degree: 0,
        component: component_data(sigma, us, ws),
    }
}

fn describe_orbit(problem: &Problem, us: &[Vec<usize>], ws: &[Vec<usize>]) -> Result<OrbitDescription> {
    let sigma = &problem.sigma;
    let shape = &problem.shape;
    let beta = ws[0].len() as u32 * sigma.r();
    let p_n = |n: usize| sigma.expand(&instantiate(us, ws, &[n]));
    let ps: Vec<GroupPoint> = (0..=4).map(p_n).collect();
    let diffs: Vec<GroupPoint> = (0..4).map(|n| ps[n + 1].sub(&ps[n].frob(beta))).collect();
    if diffs.iter().any(|d| d != &diffs[0]) {
        return Err(breach("P_{n+1} - F^δ P_n is not constant"));
    }
    let Some(m) = checked_qpow(shape.q(), beta) else {
        return Ok(unsolved(sigma, us, ws));
    };
    let Some((gamma, ext)) = solve_one_minus_frob(shape, &diffs[0], beta, problem.settings.extension_cap) else {
        return Ok(unsolved(sigma, us, ws));
    };
    let ring = gamma.coords().next().map(|c| c.ring().clone()).unwrap_or_else(|| shape.ring().clone());
    let base = ps[0].embed(&ring).sub(&gamma);
    if base.is_identity() && ext == 1 {
        return Ok(OrbitDescription::Singleton { point: gamma });
    }
    // translate + F^{nδ}(base) must be P_n, and P_n must lie on X.
    let mut iterate = base.clone();
    let mut verified = 0;
    for n in 0..=VERIFY_ITERATES {
        let pn = if n <= 4 { ps[n as usize].clone() } else { p_n(n as usize) };
        if gamma.add(&iterate) != pn.embed(&ring) {
            return Err(breach("orbit iterate"));
        }
        if !problem.variety.contains(&pn) {
            return Err(breach("iterate off the variety"));
        }
        verified = n;
        match frob_exact(&iterate, m) {
            Some(next) if next.degree_height() < u32::MAX as u64 / 2 => iterate = next,
            _ => break,
        }
    }
    let finite = all_constant(&base).then(|| finite_orbit(&base, m));
    Ok(OrbitDescription::Orbit { translate: gamma, base, delta: beta, extension_degree: ext, finite, verified_iterates: verified })
}

fn describe_eset(problem: &Problem, us: &[Vec<usize>], ws: &[Vec<usize>]) -> Result<OrbitDescription> {
    let sigma = &problem.sigma;
    let shape = &problem.shape;
    let r = sigma.r();
    let q = shape.q();
    let betas: Vec<u32> = ws.iter().map(|w| w.len() as u32 * r).collect();
    let Some(ms) = betas.iter().map(|&b| checked_qpow(q, b)).collect::<Option<Vec<_>>>() else {
        return Ok(unsolved(sigma, us, ws));
    };
    let rhs: Vec<GroupPoint> = ws.iter().map(|w| sigma.expand(w).neg()).collect();
    let Some((thetas, ext)) = solve_all(shape, &rhs, ms, problem.settings.extension_cap) else {
        return Ok(unsolved(sigma, us, ws));
    };
    let ring = thetas[0].coords().next().map(|c| c.ring().clone()).unwrap_or_else(|| shape.ring().clone());
    let mut offsets = vec![0u32];
    for u in us {
        offsets.push(offsets.last().unwrap() + u.len() as u32 * r);
    }
    let shift = |x: &GroupPoint, s: u32| checked_qpow(q, s).and_then(|m| frob_exact(x, m));
    let mut points = Vec::with_capacity(us.len());
    for i in 0..us.len() {
        let mut a = shift(&sigma.expand(&us[i]).embed(&ring), offsets[i]);
        if i > 0 {
            a = a.zip(shift(&thetas[i - 1], offsets[i])).map(|(a, t)| a.add(&t));
        }
        if i < ws.len() {
            a = a.zip(shift(&thetas[i], offsets[i + 1])).map(|(a, t)| a.sub(&t));
        }
        match a {
            Some(a) => points.push(a),
            None => return Ok(unsolved(sigma, us, ws)),
        }
    }
    // a_0 + Σ F^{N_i} a_i against direct expansion for loop counts ≤ 2.
    let m = ws.len();
    let mut ns = vec![0usize; m];
    loop {
        let mut value = points[0].clone();
        let mut acc = 0u32;
        for i in 1..=m {
            acc += ns[i - 1] as u32 * betas[i - 1];
            match shift(&points[i], acc) {
                Some(v) => value = value.add(&v),
                None => return Err(Error::Internal("exponent overflow while checking an E-set".into())),
            }
        }
        if value != sigma.expand(&instantiate(us, ws, &ns)).embed(&ring) {
            return Err(breach("E-set sum"));
        }
        let Some(i) = ns.iter().position(|&n| n < 2) else { break };
        ns[i] += 1;
        ns[..i].iter_mut().for_each(|n| *n = 0);
    }
    let translate = points.remove(0);
    Ok(OrbitDescription::Eset {
        translate: Some(translate),
        points,
        deltas: betas,
        solvable: true,
        extension_degree: ext,
        component: component_data(sigma, us, ws),
    })
}

/// Largest j with every coordinate of F(a) − a in K^{p^j}; `None` if all
/// those coordinates are constant.
fn purity_depth(shape: &GroupShape, a: &GroupPoint) -> Option<u32> {
    let d = a.frob(1).sub(a);
    d.coords().filter_map(|c| c.power_depth(shape.p() as u64)).min()
}

/// Replaces the E-set a_0 + E(a_1..a_m; δ) by translate + orbits of
/// F^{-kδ} a_i, where kδ is the largest multiple of δ with q^{kδ} ≤ p^{j_i}.
pub fn orbit_closure(shape: &GroupShape, e: &OrbitDescription) -> Result<OrbitDescription> {
    let OrbitDescription::Eset { translate, points, deltas, solvable, extension_degree, .. } = e else {
        return Err(Error::validation("orbit closure takes an E-set"));
    };
    if *extension_degree > 1 {
        return Err(Error::NotInGroundField);
    }
    let Some(translate) = translate.clone().filter(|_| *solvable) else {
        return Err(Error::validation("orbit closure needs a solved E-set"));
    };
    let Some(&delta) = deltas.first() else {
        return Err(Error::validation("E-set has no loops"));
    };
    if deltas.iter().any(|&d| d != delta) {
        return Err(Error::validation("E-set deltas differ; split by their lcm first"));
    }
    let e_deg = shape.ring().field.e();
    let m = checked_qpow(shape.q(), delta).ok_or_else(|| Error::validation("delta too large"))?;
    let mut orbits = Vec::with_capacity(points.len());
    for a in points {
        let depth = purity_depth(shape, a);
        let (base, shift, finite) = match depth {
            None => (a.clone(), 0, Some(finite_orbit(a, m))),
            Some(j) => {
                let mut k = j / (e_deg * delta);
                loop {
                    let root = checked_qpow(shape.q(), k * delta).and_then(|mk| {
                        let map = |v: &[RatFunc]| v.iter().map(|c| c.root_p_power(mk)).collect::<Option<Vec<_>>>();
                        Some(GroupPoint { add: map(&a.add)?, mul: map(&a.mul)? })
                    });
                    if let Some(b) = root {
                        break (b, k, None);
                    }
                    k -= 1;
                }
            }
        };
        orbits.push(OrbitTerm { base, delta, depth, shift, finite });
    }
    Ok(OrbitDescription::OrbitSum { translate, orbits })
}
