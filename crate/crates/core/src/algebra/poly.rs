//! Sparse multivariate polynomials over F_q.
//!
//! Terms are kept strictly decreasing in graded-lex order, so `terms[0]` is
//! the leading term. No zero coefficients are stored.

use super::field::FqField;
use smallvec::SmallVec;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// Exponent vector over the ring's variables.
pub type Mono = SmallVec<[u32; 3]>;

/// Coefficient field plus variable names; shared by every polynomial over it.
#[derive(Debug, PartialEq, Eq)]
pub struct PolyRing {
    pub field: FqField,
    pub vars: Vec<String>,
}

pub type Ring = Arc<PolyRing>;

impl PolyRing {
    pub fn new(field: FqField, vars: Vec<String>) -> Ring {
        Arc::new(PolyRing { field, vars })
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }
}

/// Graded lexicographic comparison.
pub fn grlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&x| x as u64).sum();
    let db: u64 = b.iter().map(|&x| x as u64).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

#[derive(Clone)]
pub struct Poly {
    ring: Ring,
    terms: Vec<(Mono, u32)>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}
impl Eq for Poly {}

impl Hash for Poly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        for (x, y) in self.terms.iter().zip(&other.terms) {
            let c = grlex(&x.0, &y.0).then(x.1.cmp(&y.1));
            if c != Ordering::Equal {
                return c;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}
impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Poly {
    pub fn zero(ring: &Ring) -> Self {
        Poly { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn one(ring: &Ring) -> Self {
        Self::constant(ring, 1)
    }

    pub fn constant(ring: &Ring, c: u32) -> Self {
        Self::monomial(ring, Mono::from_elem(0, ring.nvars()), c)
    }

    pub fn var(ring: &Ring, i: usize) -> Self {
        let mut m = Mono::from_elem(0, ring.nvars());
        m[i] = 1;
        Self::monomial(ring, m, 1)
    }

    pub fn monomial(ring: &Ring, mono: Mono, c: u32) -> Self {
        debug_assert_eq!(mono.len(), ring.nvars());
        let terms = if c == 0 { Vec::new() } else { vec![(mono, c)] };
        Poly { ring: ring.clone(), terms }
    }

    /// Sorts, merges equal monomials, and drops zeros.
    pub fn from_terms(ring: &Ring, mut terms: Vec<(Mono, u32)>) -> Self {
        let f = &ring.field;
        terms.sort_by(|a, b| grlex(&b.0, &a.0));
        let mut out: Vec<(Mono, u32)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 = f.add(last.1, c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|t| t.1 != 0);
        Poly { ring: ring.clone(), terms: out }
    }

    /// Builds from terms already strictly decreasing and nonzero.
    pub(crate) fn from_sorted(ring: &Ring, terms: Vec<(Mono, u32)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| grlex(&w[0].0, &w[1].0) == Ordering::Greater));
        debug_assert!(terms.iter().all(|t| t.1 != 0));
        Poly { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }
    pub fn field(&self) -> &FqField {
        &self.ring.field
    }
    pub fn terms(&self) -> &[(Mono, u32)] {
        &self.terms
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value() == Some(1)
    }

    /// The value if this is a constant (zero included).
    pub fn constant_value(&self) -> Option<u32> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(m, c)] if m.iter().all(|&e| e == 0) => Some(*c),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn leading(&self) -> Option<&(Mono, u32)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> u32 {
        self.terms.first().map_or(0, |t| t.1)
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.iter().map(|t| t.0.iter().map(|&e| e as u64).sum::<u64>()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.iter().map(|t| t.0[v]).max().unwrap_or(0)
    }

    /// Indices of variables that occur with positive exponent.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.ring.nvars()).filter(|&v| self.terms.iter().any(|t| t.0[v] > 0)).collect()
    }

    pub fn neg(&self) -> Self {
        let f = self.field();
        Poly { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), f.neg(*c))).collect() }
    }

    pub fn scale(&self, c: u32) -> Self {
        if c == 0 {
            return Poly::zero(&self.ring);
        }
        let f = self.field();
        Poly { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, x)| (m.clone(), f.mul(*x, c))).collect() }
    }

    /// Multiplies by the monomial `c * t^mono`.
    pub fn mul_term(&self, mono: &[u32], c: u32) -> Self {
        if c == 0 {
            return Poly::zero(&self.ring);
        }
        let f = self.field();
        let terms = self
            .terms
            .iter()
            .map(|(m, x)| (m.iter().zip(mono).map(|(a, b)| a + b).collect(), f.mul(*x, c)))
            .collect();
        Poly { ring: self.ring.clone(), terms }
    }

    fn merge(&self, other: &Self, negate_other: bool) -> Self {
        let f = self.field();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        let g = |c: u32| if negate_other { f.neg(c) } else { c };
        while i < a.len() && j < b.len() {
            match grlex(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0.clone(), g(b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = f.add(a[i].1, g(b[j].1));
                    if c != 0 {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), g(*c))));
        Poly { ring: self.ring.clone(), terms: out }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.merge(other, true)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.ring);
        }
        if other.terms.len() == 1 {
            return self.mul_term(&other.terms[0].0, other.terms[0].1);
        }
        if self.terms.len() == 1 {
            return other.mul_term(&self.terms[0].0, self.terms[0].1);
        }
        let f = self.field();
        let mut acc: BTreeMap<Mono, u32> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: Mono = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                let c = f.mul(*ca, *cb);
                let slot = acc.entry(m).or_insert(0);
                *slot = f.add(*slot, c);
            }
        }
        Poly::from_terms(&self.ring, acc.into_iter().filter(|t| t.1 != 0).collect())
    }

    pub fn pow(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.ring);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Scales so the leading coefficient is 1; returns the old leading coefficient.
    pub fn make_monic(&self) -> (Self, u32) {
        let lc = self.leading_coeff();
        if lc == 0 || lc == 1 {
            return (self.clone(), lc);
        }
        (self.scale(self.field().inv(lc)), lc)
    }

    /// x^{q^n}: exponents scale by q^n; coefficients are fixed since c^q = c on F_q.
    pub fn frobenius(&self, n: u32) -> Self {
        if n == 0 {
            return self.clone();
        }
        let k = (self.ring.q() as u64).checked_pow(n).expect("Frobenius power overflow");
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let m = m
                    .iter()
                    .map(|&e| u32::try_from(e as u64 * k).expect("exponent overflow under Frobenius"))
                    .collect();
                (m, *c)
            })
            .collect();
        Poly::from_sorted(&self.ring, terms)
    }

    /// self^m for m a power of p: exponents scale by m and coefficients are
    /// raised to m. `None` if an exponent overflows.
    pub fn power_map(&self, m: u64) -> Option<Self> {
        let f = self.field();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (mono, c) in &self.terms {
            let mono = mono.iter().map(|&e| u32::try_from(e as u64 * m).ok()).collect::<Option<Mono>>()?;
            terms.push((mono, f.pow(*c, m)));
        }
        Some(Poly::from_sorted(&self.ring, terms))
    }

    /// y with y^m = self for m a power of p, when every exponent is divisible
    /// by m. Coefficient roots use c^{1/p} = c^{p^{e-1}}.
    pub fn root_p_power(&self, m: u64) -> Option<Self> {
        let f = self.field();
        let (p, e) = (f.p() as u64, f.e());
        let mut j = 0u32;
        let mut k = 1u64;
        while k < m {
            k = k.checked_mul(p)?;
            j += 1;
        }
        if k != m {
            return None;
        }
        // c^{1/p^j} = c^{p^{(e-1) j mod e}}.
        let coeff_power = p.pow(((e - 1) * j) % e);
        let mut terms = Vec::with_capacity(self.terms.len());
        for (mono, c) in &self.terms {
            if mono.iter().any(|&x| x as u64 % m != 0) {
                return None;
            }
            terms.push((mono.iter().map(|&x| (x as u64 / m) as u32).collect(), f.pow(*c, coeff_power)));
        }
        Some(Poly::from_sorted(&self.ring, terms))
    }

    /// The polynomial y with y^{modulus} = self when every exponent is divisible
    /// by `modulus` (a power of q); coefficients are their own q-th roots.
    pub fn root_by(&self, modulus: u64) -> Option<Self> {
        if modulus == 1 {
            return Some(self.clone());
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            if m.iter().any(|&e| e as u64 % modulus != 0) {
                return None;
            }
            terms.push((m.iter().map(|&e| (e as u64 / modulus) as u32).collect(), *c));
        }
        Some(Poly::from_sorted(&self.ring, terms))
    }

    /// Exact division; `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Self> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if d.is_one() {
            return Some(self.clone());
        }
        let f = self.field();
        let (lm, lc) = d.leading().cloned().unwrap();
        let lc_inv = f.inv(lc);
        if d.terms.len() == 1 {
            let mut terms = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                if m.iter().zip(&lm).any(|(a, b)| a < b) {
                    return None;
                }
                terms.push((m.iter().zip(&lm).map(|(a, b)| a - b).collect(), f.mul(*c, lc_inv)));
            }
            return Some(Poly::from_sorted(&self.ring, terms));
        }
        let mut rem = self.clone();
        let mut quot: Vec<(Mono, u32)> = Vec::new();
        while let Some((rm, rc)) = rem.leading().cloned() {
            if rm.iter().zip(&lm).any(|(a, b)| a < b) {
                return None;
            }
            let qm: Mono = rm.iter().zip(&lm).map(|(a, b)| a - b).collect();
            let qc = f.mul(rc, lc_inv);
            rem = rem.sub(&d.mul_term(&qm, qc));
            quot.push((qm, qc));
        }
        Some(Poly::from_terms(&self.ring, quot))
    }

    /// Evaluates with every variable substituted by an F_q value.
    pub fn eval(&self, point: &[u32]) -> u32 {
        let f = self.field();
        self.terms.iter().fold(0, |acc, (m, c)| {
            let v = m.iter().zip(point).fold(*c, |v, (&e, &x)| f.mul(v, f.pow(x, e as u64)));
            f.add(acc, v)
        })
    }

    /// Coefficients with respect to variable `v`, each free of `v`.
    fn coeffs_wrt(&self, v: usize) -> BTreeMap<u32, Poly> {
        let mut buckets: BTreeMap<u32, Vec<(Mono, u32)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            let d = m2[v];
            m2[v] = 0;
            buckets.entry(d).or_default().push((m2, *c));
        }
        buckets.into_iter().map(|(d, ts)| (d, Poly::from_terms(&self.ring, ts))).collect()
    }

    fn leading_coeff_wrt(&self, v: usize) -> (u32, Poly) {
        let d = self.degree_in(v);
        let ts = self
            .terms
            .iter()
            .filter(|t| t.0[v] == d)
            .map(|(m, c)| {
                let mut m2 = m.clone();
                m2[v] = 0;
                (m2, *c)
            })
            .collect();
        (d, Poly::from_terms(&self.ring, ts))
    }

    fn content_wrt(&self, v: usize) -> Poly {
        let mut g = Poly::zero(&self.ring);
        for c in self.coeffs_wrt(v).into_values() {
            g = gcd(&g, &c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Pseudo-remainder of `self` by `b` as polynomials in `v`.
    fn prem_wrt(&self, b: &Poly, v: usize) -> Poly {
        let (db, lcb) = b.leading_coeff_wrt(v);
        let mut r = self.clone();
        while !r.is_zero() {
            let (dr, lcr) = r.leading_coeff_wrt(v);
            if dr < db {
                break;
            }
            let mut shift = Mono::from_elem(0, self.ring.nvars());
            shift[v] = dr - db;
            r = lcb.mul(&r).sub(&lcr.mul(&b.mul_term(&shift, 1)));
        }
        r
    }
}

/// Monic gcd; gcd(0, 0) = 0.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.make_monic().0;
    }
    if b.is_zero() {
        return a.make_monic().0;
    }
    let ring = a.ring().clone();
    if a.is_constant() || b.is_constant() {
        return Poly::one(&ring);
    }
    if a.is_monomial() || b.is_monomial() {
        let (mono, other) = if a.is_monomial() { (a, b) } else { (b, a) };
        let mut g: Mono = mono.terms[0].0.clone();
        for (m, _) in &other.terms {
            for (x, y) in g.iter_mut().zip(m) {
                *x = (*x).min(*y);
            }
        }
        return Poly::monomial(&ring, g, 1);
    }
    let mut vars = a.support_vars();
    for v in b.support_vars() {
        if !vars.contains(&v) {
            vars.push(v);
        }
    }
    vars.sort_unstable();
    if vars.len() == 1 {
        return gcd_univariate(a, b, vars[0]);
    }
    let v = *vars.last().unwrap();
    let ca = a.content_wrt(v);
    let cb = b.content_wrt(v);
    let gc = gcd(&ca, &cb);
    let mut pa = a.div_exact(&ca).expect("content divides");
    let mut pb = b.div_exact(&cb).expect("content divides");
    if pa.degree_in(v) == 0 || pb.degree_in(v) == 0 {
        return gc;
    }
    if pa.degree_in(v) < pb.degree_in(v) {
        std::mem::swap(&mut pa, &mut pb);
    }
    while !pb.is_zero() {
        let r = pa.prem_wrt(&pb, v);
        pa = pb;
        if r.is_zero() {
            break;
        }
        if r.degree_in(v) == 0 {
            // A nonzero remainder free of v makes the primitive parts coprime.
            pa = Poly::one(&ring);
            break;
        }
        let c = r.content_wrt(v);
        pb = r.div_exact(&c).expect("content divides");
    }
    let gp = if pa.degree_in(v) == 0 {
        Poly::one(&ring)
    } else {
        let c = pa.content_wrt(v);
        pa.div_exact(&c).expect("content divides")
    };
    gc.mul(&gp).make_monic().0
}

fn gcd_univariate(a: &Poly, b: &Poly, v: usize) -> Poly {
    let (mut x, mut y) = (a.clone(), b.clone());
    if x.degree_in(v) < y.degree_in(v) {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_zero() {
        let r = rem_univariate(&x, &y, v);
        x = y;
        y = r;
    }
    x.make_monic().0
}

fn rem_univariate(a: &Poly, b: &Poly, v: usize) -> Poly {
    let f = a.field();
    let (bm, bc) = b.leading().cloned().unwrap();
    let db = bm[v];
    let inv = f.inv(bc);
    let mut r = a.clone();
    while let Some((rm, rc)) = r.leading().cloned() {
        if rm[v] < db {
            break;
        }
        let mut shift = Mono::from_elem(0, a.ring().nvars());
        shift[v] = rm[v] - db;
        r = r.sub(&b.mul_term(&shift, f.mul(rc, inv)));
    }
    r
}

fn write_mono(out: &mut String, ring: &PolyRing, m: &[u32]) -> bool {
    let mut first = true;
    for (i, &e) in m.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            out.push('*');
        }
        first = false;
        out.push_str(&ring.vars[i]);
        if e > 1 {
            out.push('^');
            out.push_str(&e.to_string());
        }
    }
    !first
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let field = self.field();
        let mut parts = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut s = String::new();
            let is_const = m.iter().all(|&e| e == 0);
            if is_const {
                s.push_str(&field.format(*c));
            } else {
                if *c != 1 {
                    s.push_str(&field.format(*c));
                    s.push('*');
                }
                write_mono(&mut s, &self.ring, m);
            }
            parts.push(s);
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u32, k: usize) -> Ring {
        let vars = if k == 1 { vec!["t".to_string()] } else { (1..=k).map(|i| format!("t{i}")).collect() };
        PolyRing::new(FqField::prime(p).unwrap(), vars)
    }

    fn t_pow(r: &Ring, e: u32) -> Poly {
        Poly::monomial(r, Mono::from_elem(e, 1), 1)
    }

    #[test]
    fn arithmetic_and_display() {
        let r = ring(7, 1);
        let t = Poly::var(&r, 0);
        let f = t.add(&Poly::one(&r)).pow(2);
        assert_eq!(f.to_string(), "t^2 + 2*t + 1");
        assert_eq!(f.sub(&f).to_string(), "0");
    }

    #[test]
    fn univariate_gcd() {
        let r = ring(2, 1);
        let t = Poly::var(&r, 0);
        let one = Poly::one(&r);
        let a = t.pow(3).add(&one); // (t+1)(t^2+t+1)
        let b = t.add(&one).pow(2);
        assert_eq!(gcd(&a, &b), t.add(&one));
        assert_eq!(gcd(&t_pow(&r, 4), &t_pow(&r, 2).add(&t)), t);
    }

    #[test]
    fn multivariate_gcd_recovers_common_factor() {
        let r = ring(5, 2);
        let x = Poly::var(&r, 0);
        let y = Poly::var(&r, 1);
        let one = Poly::one(&r);
        let h = x.mul(&y).add(&x).add(&one.scale(2));
        let a = h.mul(&x.add(&y.pow(2)));
        let b = h.mul(&y.sub(&one)).mul(&x);
        let g = gcd(&a, &b);
        assert_eq!(g, h.make_monic().0);
    }

    #[test]
    fn exact_division() {
        let r = ring(3, 2);
        let x = Poly::var(&r, 0);
        let y = Poly::var(&r, 1);
        let a = x.add(&y);
        let b = x.sub(&y).add(&Poly::one(&r));
        let prod = a.mul(&b);
        assert_eq!(prod.div_exact(&a), Some(b.clone()));
        assert_eq!(prod.add(&Poly::one(&r)).div_exact(&a), None);
    }

    #[test]
    fn frobenius_and_root() {
        let r = ring(2, 1);
        let t = Poly::var(&r, 0);
        let f = t.add(&Poly::one(&r));
        assert_eq!(f.frobenius(1), f.pow(2));
        assert_eq!(f.frobenius(1).root_by(2), Some(f.clone()));
        assert_eq!(f.root_by(2), None);
    }
}
