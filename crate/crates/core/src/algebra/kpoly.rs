//! Polynomials over K in a separate set of indeterminates.
//!
//! Exponents are signed so that Laurent monomials can be represented; the
//! group module decides which indeterminates may go negative. Terms are
//! strictly decreasing in graded-lex order and carry nonzero coefficients.

use super::lambda::{lambda_apply, lambda_split, LambdaBasis};
use super::poly::{Mono, Ring};
use super::ratfunc::RatFunc;
use smallvec::SmallVec;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

pub type KMono = SmallVec<[i32; 4]>;

/// Base field ring plus names of the polynomial indeterminates.
#[derive(Debug, PartialEq, Eq)]
pub struct KPolyRing {
    pub base: Ring,
    pub vars: Vec<String>,
}

pub type KRing = Arc<KPolyRing>;

impl KPolyRing {
    pub fn new(base: Ring, vars: Vec<String>) -> KRing {
        Arc::new(KPolyRing { base, vars })
    }
    pub fn nvars(&self) -> usize {
        self.vars.len()
    }
}

pub fn kgrlex(a: &[i32], b: &[i32]) -> Ordering {
    let da: i64 = a.iter().map(|&x| x as i64).sum();
    let db: i64 = b.iter().map(|&x| x as i64).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

#[derive(Clone)]
pub struct KPoly {
    ring: KRing,
    terms: Vec<(KMono, RatFunc)>,
}

impl PartialEq for KPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}
impl Eq for KPoly {}

impl std::hash::Hash for KPoly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl Ord for KPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        for (x, y) in self.terms.iter().zip(&other.terms) {
            let c = kgrlex(&x.0, &y.0).then_with(|| x.1.cmp(&y.1));
            if c != Ordering::Equal {
                return c;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}
impl PartialOrd for KPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl KPoly {
    pub fn zero(ring: &KRing) -> Self {
        KPoly { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn constant(ring: &KRing, c: RatFunc) -> Self {
        Self::term(ring, KMono::from_elem(0, ring.nvars()), c)
    }

    pub fn one(ring: &KRing) -> Self {
        Self::constant(ring, RatFunc::one(&ring.base))
    }

    pub fn var(ring: &KRing, i: usize) -> Self {
        let mut m = KMono::from_elem(0, ring.nvars());
        m[i] = 1;
        Self::term(ring, m, RatFunc::one(&ring.base))
    }

    pub fn term(ring: &KRing, mono: KMono, c: RatFunc) -> Self {
        let terms = if c.is_zero() { Vec::new() } else { vec![(mono, c)] };
        KPoly { ring: ring.clone(), terms }
    }

    pub fn from_terms(ring: &KRing, mut terms: Vec<(KMono, RatFunc)>) -> Self {
        terms.sort_by(|a, b| kgrlex(&b.0, &a.0));
        let mut out: Vec<(KMono, RatFunc)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 = last.1.add(&c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|t| !t.1.is_zero());
        KPoly { ring: ring.clone(), terms: out }
    }

    pub fn ring(&self) -> &KRing {
        &self.ring
    }
    pub fn base(&self) -> &Ring {
        &self.ring.base
    }
    pub fn terms(&self) -> &[(KMono, RatFunc)] {
        &self.terms
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient if the polynomial is constant (zero included).
    pub fn constant_value(&self) -> Option<RatFunc> {
        match self.terms.as_slice() {
            [] => Some(RatFunc::zero(self.base())),
            [(m, c)] if m.iter().all(|&e| e == 0) => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    /// Sum of absolute exponents, maximized over terms.
    pub fn total_degree(&self) -> u64 {
        self.terms.iter().map(|t| t.0.iter().map(|&e| e.unsigned_abs() as u64).sum::<u64>()).max().unwrap_or(0)
    }

    pub fn leading_coeff(&self) -> Option<&RatFunc> {
        self.terms.first().map(|t| &t.1)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut all = self.terms.clone();
        all.extend(other.terms.iter().cloned());
        KPoly::from_terms(&self.ring, all)
    }

    pub fn neg(&self) -> Self {
        KPoly { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &RatFunc) -> Self {
        if c.is_zero() {
            return KPoly::zero(&self.ring);
        }
        KPoly { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, x)| (m.clone(), x.mul(c))).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut all = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                all.push((ma.iter().zip(mb).map(|(a, b)| a + b).collect(), ca.mul(cb)));
            }
        }
        KPoly::from_terms(&self.ring, all)
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(KPoly::one(&self.ring), |acc, _| acc.mul(self))
    }

    /// Shifts every exponent by `delta` (a monomial multiplication).
    pub fn shift(&self, delta: &[i32]) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.iter().zip(delta).map(|(a, b)| a + b).collect(), c.clone()))
            .collect();
        KPoly { ring: self.ring.clone(), terms }
    }

    /// Divides by the leading coefficient.
    pub fn make_monic(&self) -> Self {
        match self.terms.first() {
            Some((_, lc)) if !lc.is_one() => self.scale(&lc.inv().expect("nonzero leading coefficient")),
            _ => self.clone(),
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(&RatFunc) -> RatFunc) -> Self {
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, c)| {
                let v = f(c);
                (!v.is_zero()).then(|| (m.clone(), v))
            })
            .collect();
        KPoly { ring: self.ring.clone(), terms }
    }

    /// P^lambda: the composed operators of `word` applied to every coefficient.
    pub fn lambda_transform(&self, basis: &LambdaBasis, word: &[usize]) -> Self {
        word.iter().fold(self.clone(), |acc, &j| acc.map_coeffs(|c| lambda_apply(basis, j, c)))
    }

    /// All nonzero P^lambda over the basis of K over K^Q at once, keyed by residue.
    pub fn lambda_split_all(&self, modulus: u64) -> BTreeMap<Mono, KPoly> {
        let mut out: BTreeMap<Mono, Vec<(KMono, RatFunc)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            for (residue, part) in lambda_split(c, modulus) {
                out.entry(residue).or_default().push((m.clone(), part));
            }
        }
        // Monomials are unchanged, so the order of pushed terms is preserved.
        out.into_iter().map(|(r, terms)| (r, KPoly { ring: self.ring.clone(), terms })).collect()
    }

    /// Evaluates at K-values; `None` if a negative exponent meets a zero value.
    pub fn eval(&self, values: &[RatFunc]) -> Option<RatFunc> {
        let mut acc = RatFunc::zero(self.base());
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (&e, x) in m.iter().zip(values) {
                if e != 0 {
                    v = v.mul(&x.pow(e as i64)?);
                }
            }
            acc = acc.add(&v);
        }
        Some(acc)
    }

    /// Sum of coefficients of monomials free of the indeterminates in `zero_vars`,
    /// i.e. the value at (zero_vars = 0, others = 1).
    pub fn value_at_unit(&self, zero_vars: &[usize]) -> RatFunc {
        self.terms
            .iter()
            .filter(|(m, _)| zero_vars.iter().all(|&i| m[i] == 0))
            .fold(RatFunc::zero(self.base()), |acc, (_, c)| acc.add(c))
    }

    pub fn max_coeff_degree_height(&self) -> u64 {
        self.terms.iter().map(|t| t.1.degree_height()).max().unwrap_or(0)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = &RatFunc> {
        self.terms.iter().map(|t| &t.1)
    }
}

fn mono_string(vars: &[String], m: &[i32]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(vars[i].clone()),
            _ => parts.push(format!("{}^{}", vars[i], e)),
        }
    }
    parts.join("*")
}

impl fmt::Display for KPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut parts = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mono = mono_string(&self.ring.vars, m);
            let coeff = c.to_string();
            let s = if mono.is_empty() {
                if c.num().len() > 1 && !c.is_polynomial() {
                    format!("({coeff})")
                } else {
                    coeff
                }
            } else if c.is_one() {
                mono
            } else if c.is_polynomial() && c.num().len() == 1 {
                format!("{coeff}*{mono}")
            } else {
                format!("({coeff})*{mono}")
            };
            parts.push(s);
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for KPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::FqField;
    use crate::algebra::poly::PolyRing;

    #[test]
    fn lambda_transform_matches_direct_split() {
        let base = PolyRing::new(FqField::prime(2).unwrap(), vec!["t".into()]);
        let kr = KPolyRing::new(base.clone(), vec!["x".into()]);
        let x = KPoly::var(&kr, 0);
        let t = RatFunc::var(&base, 0);
        let p = x.pow(2).add(&x.scale(&t.pow(2).unwrap()));
        let b = LambdaBasis::order_one(&base);
        assert_eq!(p.lambda_transform(&b, &[0]).to_string(), "x^2 + t*x");
        assert_eq!(p.lambda_transform(&b, &[]), p);
        let all = p.lambda_split_all(2);
        assert_eq!(all.len(), 1);
    }
}
