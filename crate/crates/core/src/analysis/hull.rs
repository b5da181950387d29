//! The F-pure hull of a finitely generated Z[F]-submodule Γ of G_a(K).
//!
//! A Z[F]-submodule of G_a(K) is the F_p-span of {F^j γ_i : j ≥ 0}. While some
//! nonzero F_p-combination z of the current generators is a q-th power whose
//! root δ lies outside the current module, a generator with nonzero
//! coefficient is replaced by δ. The module only grows: the replaced γ_k is
//! recovered from F(δ) = z. Heights of new generators drop by a factor q, so
//! only finitely many tuples occur; tuples seen before are skipped.

use crate::algebra::{gcd, Poly, RatFunc};
use crate::error::{Error, Result};
use std::collections::{BTreeMap, BTreeSet};

/// Largest p^s enumerated per round.
pub const COMBINATION_CAP: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct HullResult {
    #[serde(serialize_with = "as_strings")]
    pub generators: Vec<RatFunc>,
    /// Least n with F^n(g) ∈ Γ, per output generator.
    pub n0: Vec<Option<u32>>,
    pub rounds: u32,
}

fn as_strings<S: serde::Serializer>(v: &[RatFunc], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

fn lcm(a: &Poly, b: &Poly) -> Poly {
    let g = gcd(a, b);
    a.mul(&b.div_exact(&g).expect("gcd divides"))
}

/// Coordinates over F_p of a polynomial: one slot per (monomial, digit of
/// the F_q code).
fn fp_vector(p: &Poly, e: u32, prime: u32, index: &mut BTreeMap<(Vec<u32>, u32), usize>) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    for (m, c) in p.terms() {
        let mut code = *c;
        for digit in 0..e {
            let v = code % prime;
            code /= prime;
            if v != 0 {
                let next = index.len();
                let slot = *index.entry((m.to_vec(), digit)).or_insert(next);
                out.push((slot, v));
            }
        }
    }
    out
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let (mut b, mut n) = (a as u64 % p as u64, p as u64 - 2);
    while n > 0 {
        if n & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        n >>= 1;
    }
    r as u32
}

/// Is `target` in the F_p-span of `elements`?
fn in_span(target: &RatFunc, elements: &[RatFunc]) -> bool {
    if target.is_zero() {
        return true;
    }
    let field = target.field().clone();
    let (prime, e) = (field.p(), field.e());
    let mut den = target.den().clone();
    for x in elements {
        den = lcm(&den, x.den());
    }
    let scaled = |x: &RatFunc| x.num().mul(&den.div_exact(x.den()).expect("common denominator"));
    let mut index = BTreeMap::new();
    let mut rows: Vec<Vec<(usize, u32)>> = elements.iter().map(|x| fp_vector(&scaled(x), e, prime, &mut index)).collect();
    let t = fp_vector(&scaled(target), e, prime, &mut index);
    let width = index.len();
    let dense = |v: &[(usize, u32)]| {
        let mut d = vec![0u32; width];
        for &(i, x) in v {
            d[i] = x;
        }
        d
    };
    // Row-reduce the spanning set, then reduce the target against it.
    let mut basis: Vec<(usize, Vec<u32>)> = Vec::new();
    let reduce = |v: &mut Vec<u32>, basis: &[(usize, Vec<u32>)]| {
        for (pivot, row) in basis {
            let c = v[*pivot];
            if c != 0 {
                for (x, y) in v.iter_mut().zip(row) {
                    *x = (*x + prime - (c as u64 * *y as u64 % prime as u64) as u32) % prime;
                }
            }
        }
    };
    for r in rows.drain(..) {
        let mut v = dense(&r);
        reduce(&mut v, &basis);
        if let Some(pivot) = v.iter().position(|&x| x != 0) {
            let inv = inv_mod(v[pivot], prime);
            v.iter_mut().for_each(|x| *x = (*x as u64 * inv as u64 % prime as u64) as u32);
            for (_, row) in basis.iter_mut() {
                let c = row[pivot];
                if c != 0 {
                    for (x, y) in row.iter_mut().zip(&v) {
                        *x = (*x + prime - (c as u64 * *y as u64 % prime as u64) as u32) % prime;
                    }
                }
            }
            basis.push((pivot, v));
        }
    }
    let mut tv = dense(&t);
    reduce(&mut tv, &basis);
    tv.iter().all(|&x| x == 0)
}

/// Is `target` in the Z[F]-module generated by `gens`? Powers F^j γ are
/// used while q^j h(γ) ≤ h(target) (1 + max h(γ_i)).
pub fn fp_span_contains(target: &RatFunc, gens: &[RatFunc]) -> bool {
    let q = target.ring().q() as u64;
    let max_h = gens.iter().map(RatFunc::degree_height).max().unwrap_or(0);
    let bound = target.degree_height().max(1) * (1 + max_h);
    let mut elements = Vec::new();
    for g in gens {
        if g.is_zero() {
            continue;
        }
        elements.push(g.clone());
        if g.is_constant() {
            continue;
        }
        let mut j = 1;
        while let Some(scale) = q.checked_pow(j) {
            if scale.saturating_mul(g.degree_height()) > bound {
                break;
            }
            elements.push(g.frobenius(j));
            j += 1;
        }
    }
    in_span(target, &elements)
}

/// Nonzero coefficient vectors in F_p^s, in lexicographic order.
fn combinations(p: u32, s: usize) -> impl Iterator<Item = Vec<u32>> {
    let total = (p as u64).pow(s as u32);
    (1..total).map(move |mut n| {
        let mut v = vec![0u32; s];
        for slot in v.iter_mut().rev() {
            *slot = (n % p as u64) as u32;
            n /= p as u64;
        }
        v
    })
}

pub fn f_pure_hull_additive(gens: &[RatFunc]) -> Result<HullResult> {
    let Some(first) = gens.first() else {
        return Err(Error::validation("hull needs at least one generator"));
    };
    let field = first.field().clone();
    let p = field.p();
    if (p as u64).checked_pow(gens.len() as u32).is_none_or(|n| n > COMBINATION_CAP) {
        return Err(Error::validation(format!("p^s exceeds {COMBINATION_CAP} combinations per round")));
    }
    let mut current: Vec<RatFunc> = gens.to_vec();
    let mut seen: BTreeSet<Vec<RatFunc>> = BTreeSet::new();
    let key = |v: &[RatFunc]| {
        let mut k = v.to_vec();
        k.sort();
        k
    };
    seen.insert(key(&current));
    let mut rounds = 0u32;
    'outer: loop {
        for c in combinations(p, current.len()) {
            let mut z = RatFunc::zero(first.ring());
            for (ci, g) in c.iter().zip(&current) {
                if *ci != 0 {
                    z = z.add(&g.scale(*ci));
                }
            }
            let Some(delta) = z.qth_root() else { continue };
            if fp_span_contains(&delta, &current) {
                continue;
            }
            let k = c.iter().position(|&x| x != 0).expect("nonzero combination");
            let mut next = current.clone();
            next[k] = delta;
            if seen.insert(key(&next)) {
                current = next;
                rounds += 1;
                continue 'outer;
            }
        }
        break;
    }
    let n0 = current
        .iter()
        .map(|g| (0..=rounds).find(|&n| fp_span_contains(&g.frobenius(n), gens)))
        .collect();
    Ok(HullResult { generators: current, n0, rounds })
}
