//! Lambda operators: the coordinates of x in the basis {h_j} of K over K^Q.
//!
//! For Q a power of q the monomials t^d with 0 <= d_i < Q form a basis of
//! K over K^Q, and x = sum_j lambda_j(x)^Q h_j. On a polynomial, lambda_j
//! keeps the terms whose exponent is congruent to h_j mod Q and divides the
//! shifted exponent by Q. Coefficient roots are trivial because c^q = c on F_q.
//! A fraction f/g is handled through f/g = (f g^{Q-1}) / g^Q.

use super::poly::{Mono, Poly, Ring};
use super::ratfunc::RatFunc;
use std::collections::BTreeMap;

/// The basis h_0 = 1, h_1, ..., h_{m-1} of K over K^Q with m = Q^k.
#[derive(Clone, Debug)]
pub struct LambdaBasis {
    ring: Ring,
    modulus: u64,
    digits: Vec<Mono>,
}

impl LambdaBasis {
    /// Basis over K^{q^level}.
    pub fn new(ring: &Ring, level: u32) -> Self {
        let modulus = (ring.q() as u64).checked_pow(level).expect("lambda modulus overflow");
        let k = ring.nvars();
        let m = modulus.checked_pow(k as u32).expect("lambda basis too large");
        let digits = (0..m)
            .map(|mut idx| {
                let mut d = Mono::from_elem(0, k);
                for slot in d.iter_mut() {
                    *slot = (idx % modulus) as u32;
                    idx /= modulus;
                }
                d
            })
            .collect();
        LambdaBasis { ring: ring.clone(), modulus, digits }
    }

    /// The order-one basis over K^q.
    pub fn order_one(ring: &Ring) -> Self {
        Self::new(ring, 1)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Exponent vector of h_j.
    pub fn digit(&self, j: usize) -> &Mono {
        &self.digits[j]
    }

    pub fn index_of(&self, residue: &[u32]) -> usize {
        residue.iter().rev().fold(0u64, |acc, &d| acc * self.modulus + d as u64) as usize
    }

    pub fn element(&self, j: usize) -> RatFunc {
        RatFunc::from_poly(Poly::monomial(&self.ring, self.digits[j].clone(), 1))
    }
}

/// Splits x into its nonzero lambda components, keyed by the residue of h_j.
pub fn lambda_split(x: &RatFunc, modulus: u64) -> BTreeMap<Mono, RatFunc> {
    let mut out = BTreeMap::new();
    if x.is_zero() {
        return out;
    }
    let ring = x.ring().clone();
    let numer = if x.den().is_one() { x.num().clone() } else { x.num().mul(&x.den().pow(modulus - 1)) };
    let mut buckets: BTreeMap<Mono, Vec<(Mono, u32)>> = BTreeMap::new();
    for (m, c) in numer.terms() {
        let residue: Mono = m.iter().map(|&e| (e as u64 % modulus) as u32).collect();
        let shifted: Mono = m.iter().map(|&e| (e as u64 / modulus) as u32).collect();
        buckets.entry(residue).or_default().push((shifted, *c));
    }
    for (residue, terms) in buckets {
        // Terms stay in decreasing order: dividing congruent exponents by Q is monotone.
        let p = Poly::from_terms(&ring, terms);
        let value = if x.den().is_one() { RatFunc::from_poly(p) } else { RatFunc::new(p, x.den().clone()) };
        out.insert(residue, value);
    }
    out
}

/// lambda_j(x) for the basis element h_j.
pub fn lambda_apply(basis: &LambdaBasis, j: usize, x: &RatFunc) -> RatFunc {
    lambda_split(x, basis.modulus())
        .remove(basis.digit(j))
        .unwrap_or_else(|| RatFunc::zero(x.ring()))
}

/// Applies the word's operators in order: `word[0]` acts first.
pub fn lambda_word_apply(basis: &LambdaBasis, word: &[usize], x: &RatFunc) -> RatFunc {
    word.iter().fold(x.clone(), |acc, &j| lambda_apply(basis, j, &acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::FqField;
    use crate::algebra::poly::PolyRing;

    fn ring(p: u32) -> Ring {
        PolyRing::new(FqField::prime(p).unwrap(), vec!["t".into()])
    }

    #[test]
    fn digits_of_small_polynomial() {
        let r = ring(2);
        let b = LambdaBasis::order_one(&r);
        let t = RatFunc::var(&r, 0);
        let x = t.pow(2).unwrap().add(&t).add(&RatFunc::one(&r));
        assert_eq!(lambda_apply(&b, 0, &x).to_string(), "t + 1");
        assert_eq!(lambda_apply(&b, 1, &x).to_string(), "1");
        assert!(lambda_apply(&b, 1, &RatFunc::zero(&r)).is_zero());
    }

    #[test]
    fn reconstruction_for_fraction() {
        let r = ring(3);
        let b = LambdaBasis::order_one(&r);
        let t = RatFunc::var(&r, 0);
        let x = t.pow(5).unwrap().add(&RatFunc::from_i64(&r, 2)).div(&t.add(&RatFunc::one(&r)).pow(2).unwrap()).unwrap();
        let mut acc = RatFunc::zero(&r);
        for j in 0..b.len() {
            acc = acc.add(&lambda_apply(&b, j, &x).frobenius(1).mul(&b.element(j)));
        }
        assert_eq!(acc, x);
    }

    #[test]
    fn monomial_denominator_shrinks() {
        let r = ring(7);
        let b = LambdaBasis::order_one(&r);
        let t_inv = RatFunc::var(&r, 0).inv().unwrap();
        // t^{-1} = (t^{-1})^7 * t^6
        assert_eq!(lambda_apply(&b, 6, &t_inv), t_inv);
    }
}
