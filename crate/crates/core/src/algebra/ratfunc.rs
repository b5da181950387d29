//! Elements of K = F_q(t_1, ..., t_k) as reduced fractions.
//!
//! The pair (num, den) is kept with gcd(num, den) = 1 and den monic in
//! graded-lex order, so equal field elements have equal representations.

use super::field::FqField;
use super::poly::{gcd, Poly, Ring};
use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn zero(ring: &Ring) -> Self {
        RatFunc { num: Poly::zero(ring), den: Poly::one(ring) }
    }

    pub fn one(ring: &Ring) -> Self {
        Self::constant(ring, 1)
    }

    pub fn constant(ring: &Ring, c: u32) -> Self {
        RatFunc { num: Poly::constant(ring, c), den: Poly::one(ring) }
    }

    pub fn from_i64(ring: &Ring, n: i64) -> Self {
        Self::constant(ring, ring.field.from_i64(n))
    }

    pub fn var(ring: &Ring, i: usize) -> Self {
        RatFunc { num: Poly::var(ring, i), den: Poly::one(ring) }
    }

    pub fn from_poly(p: Poly) -> Self {
        let den = Poly::one(p.ring());
        RatFunc { num: p, den }
    }

    /// Reduces num/den. Panics if den = 0.
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero(num.ring());
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let (den, lc) = den.make_monic();
        let num = if lc == 1 { num } else { num.scale(num.field().inv(lc)) };
        RatFunc { num, den }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }
    pub fn den(&self) -> &Poly {
        &self.den
    }
    pub fn ring(&self) -> &Ring {
        self.num.ring()
    }
    pub fn field(&self) -> &FqField {
        self.num.field()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The F_q value if constant.
    pub fn constant_value(&self) -> Option<u32> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    pub fn neg(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return RatFunc::new(self.num.add(&other.num), self.den.clone());
        }
        RatFunc::new(self.num.mul(&other.den).add(&other.num.mul(&self.den)), self.den.mul(&other.den))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.ring());
        }
        if self.den.is_one() && other.den.is_one() {
            return RatFunc { num: self.num.mul(&other.num), den: self.den.clone() };
        }
        // Cross-cancel before multiplying keeps the intermediate small.
        let g1 = gcd(&self.num, &other.den);
        let g2 = gcd(&other.num, &self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = other.den.div_exact(&g1).unwrap();
        let n2 = other.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        let den = d1.mul(&d2);
        let (den, lc) = den.make_monic();
        let num = n1.mul(&n2);
        let num = if lc == 1 { num } else { num.scale(num.field().inv(lc)) };
        RatFunc { num, den }
    }

    pub fn scale(&self, c: u32) -> Self {
        RatFunc { num: self.num.scale(c), den: if c == 0 { Poly::one(self.ring()) } else { self.den.clone() } }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let (num, lc) = self.num.make_monic();
        let den = self.den.scale(self.field().inv(lc));
        Some(RatFunc { num: den, den: num })
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        Some(self.mul(&other.inv()?))
    }

    /// Integer power; negative exponents invert. `None` for 0^negative.
    pub fn pow(&self, n: i64) -> Option<Self> {
        if n < 0 {
            return self.inv()?.pow(-n);
        }
        // A reduced fraction stays reduced under powers.
        let num = self.num.pow(n as u64);
        let den = self.den.pow(n as u64);
        Some(RatFunc { num, den })
    }

    /// x^{q^n}. Frobenius is an injective ring map, so reduction is preserved.
    pub fn frobenius(&self, n: u32) -> Self {
        RatFunc { num: self.num.frobenius(n), den: self.den.frobenius(n) }
    }

    /// x^m for m a power of p, including the action on constants.
    pub fn power_map(&self, m: u64) -> Option<Self> {
        Some(RatFunc { num: self.num.power_map(m)?, den: self.den.power_map(m)? })
    }

    /// The m-th root for m a power of p, if x lies in K^m.
    pub fn root_p_power(&self, m: u64) -> Option<Self> {
        Some(RatFunc { num: self.num.root_p_power(m)?, den: self.den.root_p_power(m)? })
    }

    /// The q-th root if x lies in K^q.
    pub fn qth_root(&self) -> Option<Self> {
        self.root_by(self.ring().q() as u64)
    }

    /// The (q^n)-th root if x lies in K^{q^n}.
    pub fn qpow_root(&self, n: u32) -> Option<Self> {
        let m = (self.ring().q() as u64).checked_pow(n)?;
        self.root_by(m)
    }

    pub(crate) fn root_by(&self, m: u64) -> Option<Self> {
        Some(RatFunc { num: self.num.root_by(m)?, den: self.den.root_by(m)? })
    }

    /// Largest j with x in K^{m^j} for m a power of q (x nonconstant);
    /// `None` means x is constant.
    pub fn power_depth(&self, m: u64) -> Option<u32> {
        if self.is_constant() {
            return None;
        }
        let mut j = 0;
        let mut cur = self.clone();
        while let Some(r) = cur.root_by(m) {
            j += 1;
            cur = r;
        }
        Some(j)
    }

    pub fn num_degree(&self) -> u64 {
        self.num.total_degree()
    }

    pub fn den_degree(&self) -> u64 {
        self.den.total_degree()
    }

    /// max(deg num, deg den): the unscaled height.
    pub fn degree_height(&self) -> u64 {
        self.num_degree().max(self.den_degree())
    }

    /// Re-expresses the element over another ring with the same variables
    /// whose field contains this one as its prime subfield.
    pub fn embed(&self, target: &Ring) -> Self {
        let conv = |p: &Poly| Poly::from_terms(target, p.terms().to_vec());
        RatFunc { num: conv(&self.num), den: conv(&self.den) }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &Poly| {
            if p.len() == 1 && (p.is_constant() || p.leading_coeff() == 1) {
                p.to_string()
            } else {
                format!("({p})")
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Compares by the canonical printing order (used for deterministic output).
pub fn canonical_cmp(a: &RatFunc, b: &RatFunc) -> Ordering {
    a.cmp(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::PolyRing;

    fn ring(p: u32) -> Ring {
        PolyRing::new(FqField::prime(p).unwrap(), vec!["t".into()])
    }

    #[test]
    fn reduces_on_construction() {
        let r = ring(2);
        let t = Poly::var(&r, 0);
        let one = Poly::one(&r);
        let x = RatFunc::new(t.pow(3).add(&one), t.add(&one));
        assert_eq!(x.to_string(), "t^2 + t + 1");
        assert!(x.is_polynomial());
    }

    #[test]
    fn frobenius_of_fraction() {
        let r = ring(2);
        let t = RatFunc::var(&r, 0);
        let x = t.div(&t.add(&RatFunc::one(&r))).unwrap();
        assert_eq!(x.frobenius(1).to_string(), "t^2/(t^2 + 1)");
        assert_eq!(x.frobenius(1).qth_root(), Some(x.clone()));
        assert_eq!(t.qth_root(), None);
    }

    #[test]
    fn field_laws_spot_check() {
        let r = ring(7);
        let t = RatFunc::var(&r, 0);
        let a = t.add(&RatFunc::from_i64(&r, 3));
        let b = t.pow(2).unwrap().sub(&RatFunc::one(&r)).div(&a).unwrap();
        let c = t.inv().unwrap();
        assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        assert!(b.mul(&b.inv().unwrap()).is_one());
        assert_eq!(a.sub(&a), RatFunc::zero(&r));
    }

    #[test]
    fn power_depth_counts_roots() {
        let r = ring(2);
        let t = RatFunc::var(&r, 0);
        let x = t.pow(4).unwrap().add(&t.pow(2).unwrap());
        assert_eq!(x.power_depth(2), Some(1));
        assert_eq!(RatFunc::one(&r).power_depth(2), None);
    }
}
