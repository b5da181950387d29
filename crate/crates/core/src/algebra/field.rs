//! The finite field F_q, q = p^e.
//!
//! Elements are `u32` codes. For e = 1 the code is the residue mod p. For
//! e > 1 the code is c_0 + c_1 p + ... + c_{e-1} p^{e-1}, the coefficient
//! vector of a polynomial in the generator g modulo the user's irreducible
//! modulus; multiplication then goes through discrete-log tables.

use crate::error::{Error, Result};
use std::fmt;

/// Largest q accepted for e > 1 (log tables are allocated eagerly).
const MAX_EXTENSION_ORDER: u32 = 1 << 20;

#[derive(Clone)]
pub struct FqField {
    p: u32,
    e: u32,
    q: u32,
    /// Monic modulus, coefficients low to high; `None` when e = 1.
    modulus: Option<Vec<u32>>,
    log: Vec<u32>,
    exp: Vec<u32>,
}

impl PartialEq for FqField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}
impl Eq for FqField {}

impl fmt::Debug for FqField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.modulus {
            None => write!(f, "F_{}", self.p),
            Some(m) => write!(f, "F_{}^{} mod {:?}", self.p, self.e, m),
        }
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n as u64 {
        if n as u64 % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FqField {
    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1, None)
    }

    /// Builds F_{p^e}. For e > 1 the modulus (low-to-high coefficients,
    /// degree e) is required and checked for irreducibility.
    pub fn new(p: u32, e: u32, modulus: Option<Vec<u32>>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::validation(format!("characteristic {p} is not prime")));
        }
        if p > (1 << 30) {
            return Err(Error::validation("characteristic too large"));
        }
        if e == 0 {
            return Err(Error::validation("extension degree must be at least 1"));
        }
        if e == 1 {
            return Ok(FqField { p, e, q: p, modulus: None, log: Vec::new(), exp: Vec::new() });
        }
        let q = (p as u64).checked_pow(e).filter(|&q| q <= MAX_EXTENSION_ORDER as u64).ok_or_else(|| {
            Error::validation(format!("field order {p}^{e} exceeds the supported maximum"))
        })? as u32;
        let mut m = modulus.ok_or_else(|| Error::validation("extension fields need an explicit modulus"))?;
        for c in m.iter_mut() {
            *c %= p;
        }
        while m.last() == Some(&0) {
            m.pop();
        }
        if m.len() != e as usize + 1 {
            return Err(Error::validation(format!("modulus must have degree {e}")));
        }
        let lead_inv = inv_mod(m[e as usize], p);
        for c in m.iter_mut() {
            *c = (*c as u64 * lead_inv as u64 % p as u64) as u32;
        }
        if !is_irreducible(&m, p) {
            return Err(Error::validation("modulus is reducible"));
        }
        let mut field = FqField { p, e, q, modulus: Some(m), log: Vec::new(), exp: Vec::new() };
        field.build_tables()?;
        Ok(field)
    }

    /// F_{p^e} with the lexicographically smallest monic irreducible modulus.
    pub fn with_default_modulus(p: u32, e: u32) -> Result<Self> {
        if e == 1 {
            return Self::prime(p);
        }
        let modulus = first_irreducible(p, e)
            .ok_or_else(|| Error::validation(format!("no irreducible of degree {e} over F_{p}")))?;
        Self::new(p, e, Some(modulus))
    }

    fn build_tables(&mut self) -> Result<()> {
        let order = self.q - 1;
        for cand in 2..self.q {
            let mut exp = Vec::with_capacity(order as usize);
            let mut x = 1u32;
            let mut ok = true;
            for i in 0..order {
                if i > 0 && x == 1 {
                    ok = false;
                    break;
                }
                exp.push(x);
                x = self.poly_mulmod(x, cand);
            }
            if ok && x == 1 {
                let mut log = vec![0u32; self.q as usize];
                for (i, &v) in exp.iter().enumerate() {
                    log[v as usize] = i as u32;
                }
                self.exp = exp;
                self.log = log;
                return Ok(());
            }
        }
        Err(Error::Internal("no primitive element found".into()))
    }

    fn digits(&self, mut a: u32) -> Vec<u32> {
        let mut d = Vec::with_capacity(self.e as usize);
        for _ in 0..self.e {
            d.push(a % self.p);
            a /= self.p;
        }
        d
    }

    fn undigits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0u32, |acc, &c| acc * self.p + c)
    }

    fn poly_mulmod(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (self.digits(a), self.digits(b));
        let p = self.p as u64;
        let e = self.e as usize;
        let mut prod = vec![0u64; 2 * e - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        let m = self.modulus.as_ref().expect("extension modulus");
        for k in (e..prod.len()).rev() {
            let c = prod[k];
            if c != 0 {
                for (i, &mi) in m.iter().enumerate().take(e) {
                    prod[k - e + i] = (prod[k - e + i] + (p - c) * mi as u64) % p;
                }
                prod[k] = 0;
            }
        }
        let low: Vec<u32> = prod[..e].iter().map(|&c| c as u32).collect();
        self.undigits(&low)
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn e(&self) -> u32 {
        self.e
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn modulus(&self) -> Option<&[u32]> {
        self.modulus.as_deref()
    }
    pub fn is_prime_field(&self) -> bool {
        self.e == 1
    }

    /// Image of an integer in the prime subfield.
    pub fn from_i64(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    /// The generator symbol g (only meaningful for e > 1).
    pub fn generator(&self) -> Option<u32> {
        (self.e > 1).then_some(self.p)
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.e == 1 {
            let s = a as u64 + b as u64;
            return (s % self.p as u64) as u32;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let d: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.undigits(&d)
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.e == 1 {
            return if a == 0 { 0 } else { self.p - a };
        }
        let d: Vec<u32> = self.digits(a).iter().map(|&x| (self.p - x) % self.p).collect();
        self.undigits(&d)
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.e == 1 {
            return (a as u64 * b as u64 % self.p as u64) as u32;
        }
        let order = self.q - 1;
        let l = (self.log[a as usize] + self.log[b as usize]) % order;
        self.exp[l as usize]
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero in {self:?}");
        if self.e == 1 {
            return inv_mod(a, self.p);
        }
        let order = self.q - 1;
        let l = (order - self.log[a as usize]) % order;
        self.exp[l as usize]
    }

    pub fn pow(&self, a: u32, n: u64) -> u32 {
        let mut base = a;
        let mut n = n;
        let mut acc = 1u32;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }

    /// Whether `a` lies in the prime subfield F_p.
    pub fn in_prime_field(&self, a: u32) -> bool {
        a < self.p
    }

    /// Writes an element as an integer (e = 1) or a polynomial in g.
    pub fn format(&self, a: u32) -> String {
        if self.e == 1 {
            return a.to_string();
        }
        let d = self.digits(a);
        let mut parts = Vec::new();
        for (i, &c) in d.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let s = match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "g".to_string(),
                (1, c) => format!("{c}*g"),
                (i, 1) => format!("g^{i}"),
                (i, c) => format!("{c}*g^{i}"),
            };
            parts.push(s);
        }
        if parts.is_empty() {
            "0".into()
        } else if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            format!("({})", parts.join("+"))
        }
    }

    /// Whether `format(a)` needs parentheses when used as a factor.
    pub fn is_simple(&self, a: u32) -> bool {
        self.e == 1 || a < self.p || self.digits(a).iter().filter(|&&c| c != 0).count() <= 1
    }
}

pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (p as i64, (a % p) as i64);
    while new_r != 0 {
        let quo = r / new_r;
        (t, new_t) = (new_t, t - quo * new_t);
        (r, new_r) = (new_r, r - quo * new_r);
    }
    assert!(r == 1, "{a} is not invertible mod {p}");
    t.rem_euclid(p as i64) as u32
}

/// Remainder of `a` modulo the monic `m` over F_p; both low-to-high.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let dm = m.len() - 1;
    let p64 = p as u64;
    while r.len() > dm {
        let c = r.pop().unwrap() % p64;
        if c != 0 {
            let shift = r.len() - dm;
            for i in 0..dm {
                r[shift + i] = (r[shift + i] + (p64 - c) * m[i] as u64) % p64;
            }
        }
    }
    r.into_iter().map(|c| (c % p64) as u32).collect()
}

/// Trial factorization: no monic factor of degree 1..=deg/2.
pub(crate) fn is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut f = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                f.push((c % p as u64) as u32);
                c /= p as u64;
            }
            f.push(1);
            if poly_rem(m, &f, p).iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

fn first_irreducible(p: u32, e: u32) -> Option<Vec<u32>> {
    let count = (p as u64).checked_pow(e)?;
    (0..count).find_map(|code| {
        let mut f = Vec::with_capacity(e as usize + 1);
        let mut c = code;
        for _ in 0..e {
            f.push((c % p as u64) as u32);
            c /= p as u64;
        }
        f.push(1);
        (f[0] != 0 && is_irreducible(&f, p)).then_some(f)
    })
}
