//! Test-side oracles that share no arithmetic with the library.
//!
//! Problems are built from explicit Laurent data over F_7, rendered to JSON
//! for the library, and checked here with independent arithmetic: exact
//! Laurent polynomials over F_7, and an evaluation t ↦ α into GF(7^6) with
//! Zech logarithms. A nonzero evaluation proves non-membership; a zero one is
//! confirmed exactly.

#![allow(dead_code)]

use frobml::automata::Dfa;
use frobml::problem::{Problem, ProblemSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::path::Path;

pub const P: i64 = 7;

fn modp(x: i64) -> u8 {
    x.rem_euclid(P) as u8
}

fn inv7(c: u8) -> u8 {
    (1..7u8).find(|&d| (c as u32 * d as u32) % 7 == 1).expect("unit")
}

fn pow7(c: u8, e: i64) -> u8 {
    let base = if e < 0 { inv7(c) } else { c };
    let mut r = 1u32;
    for _ in 0..e.unsigned_abs() % 6 {
        r = r * base as u32 % 7;
    }
    r as u8
}

/// A Laurent polynomial in t over F_7.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Laurent(pub BTreeMap<i64, u8>);

impl Laurent {
    pub fn zero() -> Self {
        Laurent::default()
    }

    pub fn from_terms(terms: &[(i64, i64)]) -> Self {
        let mut out = Laurent::zero();
        for &(c, k) in terms {
            out = out.add(&Laurent::mono(modp(c), k));
        }
        out
    }

    pub fn mono(c: u8, k: i64) -> Self {
        let mut m = BTreeMap::new();
        if c % 7 != 0 {
            m.insert(k, c % 7);
        }
        Laurent(m)
    }

    pub fn constant(c: i64) -> Self {
        Laurent::mono(modp(c), 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut m = self.0.clone();
        for (&k, &c) in &other.0 {
            let v = (m.get(&k).copied().unwrap_or(0) + c) % 7;
            if v == 0 {
                m.remove(&k);
            } else {
                m.insert(k, v);
            }
        }
        Laurent(m)
    }

    pub fn scale(&self, c: u8) -> Self {
        if c % 7 == 0 {
            return Laurent::zero();
        }
        Laurent(self.0.iter().map(|(&k, &v)| (k, (v as u32 * c as u32 % 7) as u8)).collect())
    }

    pub fn neg(&self) -> Self {
        self.scale(6)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Laurent::zero();
        for (&k1, &c1) in &self.0 {
            for (&k2, &c2) in &other.0 {
                out = out.add(&Laurent::mono((c1 as u32 * c2 as u32 % 7) as u8, k1 + k2));
            }
        }
        out
    }

    /// t ↦ t^(7^i); coefficients in F_7 are fixed.
    pub fn frob(&self, i: u32) -> Self {
        let s = P.pow(i);
        Laurent(self.0.iter().map(|(&k, &c)| (k * s, c)).collect())
    }

    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .rev()
            .map(|(&k, &c)| match k {
                0 => format!("{c}"),
                1 => format!("{c}*t"),
                _ => format!("{c}*t^{k}"),
            })
            .collect();
        parts.join(" + ")
    }
}

/// A point with Laurent additive coordinates and monomial multiplicative
/// ones, c·t^k with c ≠ 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pt {
    pub add: Vec<Laurent>,
    pub mul: Vec<(u8, i64)>,
}

impl Pt {
    pub fn identity(a: usize, b: usize) -> Self {
        Pt { add: vec![Laurent::zero(); a], mul: vec![(1, 0); b] }
    }

    pub fn plus(&self, o: &Self) -> Self {
        Pt {
            add: self.add.iter().zip(&o.add).map(|(x, y)| x.add(y)).collect(),
            mul: self.mul.iter().zip(&o.mul).map(|(&(c, k), &(d, l))| ((c as u32 * d as u32 % 7) as u8, k + l)).collect(),
        }
    }

    pub fn times(&self, n: i64) -> Self {
        Pt {
            add: self.add.iter().map(|x| x.scale(modp(n))).collect(),
            mul: self.mul.iter().map(|&(c, k)| (pow7(c, n), k * n)).collect(),
        }
    }

    pub fn frob(&self, i: u32) -> Self {
        Pt { add: self.add.iter().map(|x| x.frob(i)).collect(), mul: self.mul.iter().map(|&(c, k)| (c, k * P.pow(i))).collect() }
    }

    pub fn coords(&self) -> Vec<Laurent> {
        self.add.iter().cloned().chain(self.mul.iter().map(|&(c, k)| Laurent::mono(c, k))).collect()
    }

    pub fn render(&self) -> String {
        let add: Vec<String> = self.add.iter().map(|x| format!("\"{}\"", x.render())).collect();
        let mul: Vec<String> = self.mul.iter().map(|&(c, k)| format!("\"{}\"", Laurent::mono(c, k).render())).collect();
        format!("{{\"add\":[{}],\"mul\":[{}]}}", add.join(","), mul.join(","))
    }
}

/// Σ_i F^i(d_i) with r = 1.
pub fn expand(digits: &[Pt], word: &[usize], a: usize, b: usize) -> Pt {
    word.iter().enumerate().fold(Pt::identity(a, b), |acc, (i, &l)| acc.plus(&digits[l].frob(i as u32)))
}

/// coefficient · Π coordinate^exponent; multiplicative exponents may be negative.
#[derive(Clone, Debug)]
pub struct Term {
    pub coef: Laurent,
    pub exps: Vec<i64>,
}

#[derive(Clone, Debug)]
pub struct Equation(pub Vec<Term>);

impl Equation {
    pub fn render(&self, a: usize) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|term| {
                let mut s = format!("({})", term.coef.render());
                for (j, &e) in term.exps.iter().enumerate() {
                    if e != 0 {
                        let name = if j < a { format!("x{}", j + 1) } else { format!("y{}", j - a + 1) };
                        s.push_str(&format!("*{name}^{e}"));
                    }
                }
                s
            })
            .collect();
        parts.join(" + ")
    }

    /// Exact value at a point.
    pub fn eval(&self, x: &Pt, a: usize) -> Laurent {
        let mut total = Laurent::zero();
        for term in &self.0 {
            let mut v = term.coef.clone();
            for (j, &e) in term.exps.iter().enumerate() {
                if j < a {
                    for _ in 0..e {
                        v = v.mul(&x.add[j]);
                    }
                } else {
                    let (c, k) = x.mul[j - a];
                    v = v.mul(&Laurent::mono(pow7(c, e), k * e));
                }
            }
            total = total.add(&v);
        }
        total
    }
}

/// Builds an equation from (coefficient terms, exponent vector) pairs.
pub fn eq(terms: &[(&[(i64, i64)], &[i64])]) -> Equation {
    Equation(terms.iter().map(|(c, e)| Term { coef: Laurent::from_terms(c), exps: e.to_vec() }).collect())
}

#[derive(Clone, Debug)]
pub struct OracleProblem {
    pub name: String,
    pub a: usize,
    pub b: usize,
    pub generators: Vec<Pt>,
    pub digits: Vec<Pt>,
    pub equations: Vec<Equation>,
}

impl OracleProblem {
    pub fn to_json(&self) -> String {
        let gens: Vec<String> = self.generators.iter().map(Pt::render).collect();
        let digits: Vec<String> = self.digits.iter().map(Pt::render).collect();
        let eqs: Vec<String> = self.equations.iter().map(|e| format!("\"{}\"", e.render(self.a))).collect();
        format!(
            "{{\"field\":{{\"p\":7,\"vars\":[\"t\"]}},\"group\":{{\"additive\":{},\"multiplicative\":{}}},\
             \"generators\":[{}],\"variety\":[{}],\"options\":{{\"r\":1,\"digits\":[{}]}}}}",
            self.a,
            self.b,
            gens.join(","),
            eqs.join(","),
            digits.join(",")
        )
    }

    pub fn resolve(&self) -> Problem {
        ProblemSpec::from_json(&self.to_json())
            .and_then(|s| s.resolve(Path::new(".")))
            .unwrap_or_else(|e| panic!("{}: {e}", self.name))
    }

    pub fn expand(&self, word: &[usize]) -> Pt {
        expand(&self.digits, word, self.a, self.b)
    }

    pub fn contains(&self, x: &Pt) -> bool {
        self.equations.iter().all(|e| e.eval(x, self.a).is_zero())
    }
}

/// Σ = {Σ_j c_j u_j} with additive multipliers c_j ∈ 0..7 for additive-only
/// generators and exponents |c_j| ≤ m for multiplicative-only ones.
fn product_digits(gens: &[Pt], ranges: &[Vec<i64>]) -> Vec<Pt> {
    let (a, b) = (gens[0].add.len(), gens[0].mul.len());
    let mut out = vec![Pt::identity(a, b)];
    for (g, range) in gens.iter().zip(ranges) {
        let mut next = Vec::new();
        for base in &out {
            for &c in range {
                next.push(base.plus(&g.times(c)));
            }
        }
        out = next;
    }
    // zero first; the library keeps order
    let zero = Pt::identity(a, b);
    out.retain(|d| *d != zero);
    out.insert(0, zero);
    out
}

fn additive_range() -> Vec<i64> {
    (0..7).collect()
}

fn balanced(m: i64) -> Vec<i64> {
    (-m..=m).collect()
}

fn pt(add: &[Laurent], mul: &[(u8, i64)]) -> Pt {
    Pt { add: add.to_vec(), mul: mul.to_vec() }
}

/// The generated problem family over F_7(t). Coefficients are drawn from a
/// seeded generator; shapes range from G_a to G_a^2 × G_m^2.
pub fn generated_problems(seed: u64) -> Vec<OracleProblem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nz = |rng: &mut ChaCha8Rng| rng.gen_range(1..7i64);
    let l = Laurent::from_terms;
    let mut out = Vec::new();

    // G_a, Γ = Z[F]·(t + c0), X = {x1 − (a g + b F(g))}.
    let c0 = rng.gen_range(0..7i64);
    let g = l(&[(1, 1), (c0, 0)]);
    let (ca, cb) = (nz(&mut rng), rng.gen_range(0..7i64));
    let target = g.scale(modp(ca)).add(&g.frob(1).scale(modp(cb)));
    let gens = vec![pt(&[g.clone()], &[])];
    out.push(OracleProblem {
        name: "ga_point".into(),
        a: 1,
        b: 0,
        digits: product_digits(&gens, &[additive_range()]),
        generators: gens,
        equations: vec![Equation(vec![
            Term { coef: Laurent::constant(1), exps: vec![1] },
            Term { coef: target.neg(), exps: vec![0] },
        ])],
    });

    // G_a, Γ = Z[F]·t, X = {x1 (x1 − a t)}.
    let a1 = nz(&mut rng);
    let gens = vec![pt(&[l(&[(1, 1)])], &[])];
    out.push(OracleProblem {
        name: "ga_two_points".into(),
        a: 1,
        b: 0,
        digits: product_digits(&gens, &[additive_range()]),
        generators: gens,
        equations: vec![eq(&[(&[(1, 0)], &[2]), (&[(-a1, 1)], &[1])])],
    });

    // G_m, Γ = ⟨c t⟩, X = {y1 − (c t)^e0}.
    let c = nz(&mut rng) as u8;
    let e0 = rng.gen_range(-24..=24i64);
    let gens = vec![pt(&[], &[(c, 1)])];
    let target = gens[0].times(e0).mul[0];
    out.push(OracleProblem {
        name: "gm_point".into(),
        a: 0,
        b: 1,
        digits: product_digits(&gens, &[balanced(4)]),
        generators: gens,
        equations: vec![Equation(vec![
            Term { coef: Laurent::constant(1), exps: vec![1] },
            Term { coef: Laurent::mono(target.0, target.1).neg(), exps: vec![0] },
        ])],
    });

    // G_m, Γ = ⟨t⟩, X = {y1^2 − 1}: only the identity lies in Γ.
    let gens = vec![pt(&[], &[(1, 1)])];
    out.push(OracleProblem {
        name: "gm_square_roots_of_one".into(),
        a: 0,
        b: 1,
        digits: product_digits(&gens, &[balanced(4)]),
        generators: gens,
        equations: vec![eq(&[(&[(1, 0)], &[2]), (&[(-1, 0)], &[0])])],
    });

    // G_a^2, Γ = Z[F]·(t, t^2), X = {x1^2 − x2}: the F-orbit of (t, t^2).
    let gens = vec![pt(&[l(&[(1, 1)]), l(&[(1, 2)])], &[])];
    out.push(OracleProblem {
        name: "ga2_frobenius_parabola".into(),
        a: 2,
        b: 0,
        digits: product_digits(&gens, &[additive_range()]),
        generators: gens,
        equations: vec![eq(&[(&[(1, 0)], &[2, 0]), (&[(-1, 0)], &[0, 1])])],
    });

    // G_a^2, Γ = Z[F]·(t, a t), X = {x2 − a x1, x1 − b t}.
    let (a2, b2) = (nz(&mut rng), nz(&mut rng));
    let gens = vec![pt(&[l(&[(1, 1)]), l(&[(a2, 1)])], &[])];
    out.push(OracleProblem {
        name: "ga2_line".into(),
        a: 2,
        b: 0,
        digits: product_digits(&gens, &[additive_range()]),
        generators: gens,
        equations: vec![eq(&[(&[(1, 0)], &[0, 1]), (&[(-a2, 0)], &[1, 0])]), eq(&[(&[(1, 0)], &[1, 0]), (&[(-b2, 1)], &[0, 0])])],
    });

    // G_m^2, Γ = ⟨(t, t^2)⟩, X = {y1^2 − y2, y1 − t^e0}.
    let e0 = rng.gen_range(-24..=24i64);
    let gens = vec![pt(&[], &[(1, 1), (1, 2)])];
    out.push(OracleProblem {
        name: "gm2_parabola".into(),
        a: 0,
        b: 2,
        digits: product_digits(&gens, &[balanced(4)]),
        generators: gens,
        equations: vec![eq(&[(&[(1, 0)], &[2, 0]), (&[(-1, 0)], &[0, 1])]), eq(&[(&[(1, 0)], &[1, 0]), (&[(-1, e0)], &[0, 0])])],
    });

    // G_m^2, Γ = ⟨(t, 2)⟩, X = {y2 − 1}: an infinite subgroup of index 3.
    let gens = vec![pt(&[], &[(1, 1), (2, 0)])];
    out.push(OracleProblem {
        name: "gm2_torsion_coset".into(),
        a: 0,
        b: 2,
        digits: product_digits(&gens, &[balanced(4)]),
        generators: gens,
        equations: vec![eq(&[(&[(1, 0)], &[0, 1]), (&[(-1, 0)], &[0, 0])])],
    });

    // G_a × G_m, Γ = Z[F]t × ⟨t⟩, X = {x1 − a y1}.
    let a3 = nz(&mut rng);
    let gens = vec![pt(&[l(&[(1, 1)])], &[(1, 0)]), pt(&[Laurent::zero()], &[(1, 1)])];
    out.push(OracleProblem {
        name: "gagm_diagonal".into(),
        a: 1,
        b: 1,
        digits: product_digits(&gens, &[additive_range(), balanced(3)]),
        generators: gens.clone(),
        equations: vec![eq(&[(&[(1, 0)], &[1, 0]), (&[(-a3, 0)], &[0, 1])])],
    });

    // Same Γ, X = {x1 − b t}: a coset of the G_m part.
    let b3 = nz(&mut rng);
    out.push(OracleProblem {
        name: "gagm_fiber".into(),
        a: 1,
        b: 1,
        digits: product_digits(&gens, &[additive_range(), balanced(3)]),
        generators: gens,
        equations: vec![eq(&[(&[(1, 0)], &[1, 0]), (&[(-b3, 1)], &[0, 0])])],
    });

    // G_a × G_m^2, Γ = Z[F](t,1,1) + ⟨(0, t, t^-1)⟩, X = {y1 y2 − 1, x1^2 − y1}.
    let gens = vec![pt(&[l(&[(1, 1)])], &[(1, 0), (1, 0)]), pt(&[Laurent::zero()], &[(1, 1), (1, -1)])];
    out.push(OracleProblem {
        name: "gagm2_conic".into(),
        a: 1,
        b: 2,
        digits: product_digits(&gens, &[additive_range(), balanced(3)]),
        generators: gens,
        equations: vec![
            eq(&[(&[(1, 0)], &[0, 1, 1]), (&[(-1, 0)], &[0, 0, 0])]),
            eq(&[(&[(1, 0)], &[2, 0, 0]), (&[(-1, 0)], &[0, 1, 0])]),
        ],
    });

    // G_a^2 × G_m^2, Γ = Z[F](t, a t, 1, 1) + ⟨(0, 0, t, t)⟩, X = {x1 − y1, x2 − a y2}.
    let a4 = nz(&mut rng);
    let gens = vec![pt(&[l(&[(1, 1)]), l(&[(a4, 1)])], &[(1, 0), (1, 0)]), pt(&[Laurent::zero(), Laurent::zero()], &[(1, 1), (1, 1)])];
    out.push(OracleProblem {
        name: "ga2gm2_double_diagonal".into(),
        a: 2,
        b: 2,
        digits: product_digits(&gens, &[additive_range(), balanced(3)]),
        generators: gens,
        equations: vec![
            eq(&[(&[(1, 0)], &[1, 0, 0, 0]), (&[(-1, 0)], &[0, 0, 1, 0])]),
            eq(&[(&[(1, 0)], &[0, 1, 0, 0]), (&[(-a4, 0)], &[0, 0, 0, 1])]),
        ],
    });
    out
}

/// GF(7^6) in Zech-logarithm form; the tables stay cache-resident. Elements are discrete logarithms base a
/// primitive element α, with `ZERO` for 0.
pub struct Gf {
    order: u64,
    log: Vec<u32>,
    zech: Vec<u32>,
}

pub const ZERO: u32 = u32::MAX;
const DEGREE: usize = 6;

fn poly_mulmod(a: &[u8; DEGREE], b: &[u8; DEGREE], f: &[u8; DEGREE]) -> [u8; DEGREE] {
    let mut prod = [0u32; 2 * DEGREE];
    for i in 0..DEGREE {
        for j in 0..DEGREE {
            prod[i + j] += a[i] as u32 * b[j] as u32;
        }
    }
    // x^8 = −Σ f_i x^i
    for k in (DEGREE..2 * DEGREE).rev() {
        let c = prod[k] % 7;
        prod[k] = 0;
        for i in 0..DEGREE {
            prod[k - DEGREE + i] += c * (7 - f[i] as u32);
        }
    }
    let mut out = [0u8; DEGREE];
    for i in 0..DEGREE {
        out[i] = (prod[i] % 7) as u8;
    }
    out
}

fn poly_powmod(mut base: [u8; DEGREE], mut e: u64, f: &[u8; DEGREE]) -> [u8; DEGREE] {
    let mut acc = [0u8; DEGREE];
    acc[0] = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &base, f);
        }
        base = poly_mulmod(&base, &base, f);
        e >>= 1;
    }
    acc
}

fn code(v: &[u8; DEGREE]) -> usize {
    v.iter().rev().fold(0usize, |acc, &d| acc * 7 + d as usize)
}

impl Gf {
    pub fn new() -> Self {
        let q = 7u64.pow(DEGREE as u32);
        let order = q - 1;
        let primes: Vec<u64> = (2..=order).filter(|&d| order % d == 0 && (2..d).take_while(|k| k * k <= d).all(|k| d % k != 0)).collect();
        let mut x = [0u8; DEGREE];
        x[1] = 1;
        let mut one = [0u8; DEGREE];
        one[0] = 1;
        let f = (1..q)
            .map(|n| {
                let mut f = [0u8; DEGREE];
                let mut m = n;
                for slot in f.iter_mut() {
                    *slot = (m % 7) as u8;
                    m /= 7;
                }
                f
            })
            .find(|f| {
                f[0] != 0
                    && poly_powmod(x, order, f) == one
                    && primes.iter().all(|&p| poly_powmod(x, order / p, f) != one)
            })
            .expect("a primitive polynomial exists");
        let mut log = vec![ZERO; q as usize];
        let mut exp = vec![0u32; order as usize];
        let mut cur = one;
        for n in 0..order {
            exp[n as usize] = code(&cur) as u32;
            log[code(&cur)] = n as u32;
            cur = poly_mulmod(&cur, &x, &f);
        }
        let zech = (0..order as usize)
            .map(|n| {
                let c = exp[n] as usize;
                let plus_one = c - c % 7 + (c % 7 + 1) % 7;
                log[plus_one]
            })
            .collect();
        Gf { order, log, zech }
    }

    pub fn constant(&self, c: u8) -> u32 {
        self.log[(c % 7) as usize]
    }

    fn reduce(&self, s: u32) -> u32 {
        if s as u64 >= self.order {
            s - self.order as u32
        } else {
            s
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == ZERO || b == ZERO {
            ZERO
        } else {
            self.reduce(a + b)
        }
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if a == ZERO {
            return b;
        }
        if b == ZERO {
            return a;
        }
        let d = if b >= a { b - a } else { b + self.order as u32 - a };
        let z = self.zech[d as usize];
        if z == ZERO {
            ZERO
        } else {
            self.reduce(a + z)
        }
    }

    #[inline]
    pub fn pow(&self, a: u32, e: i64) -> u32 {
        match e {
            0 => 0,
            _ if a == ZERO => {
                assert!(e > 0, "zero to a negative power");
                ZERO
            }
            1 => a,
            _ => (a as i64 * e).rem_euclid(self.order as i64) as u32,
        }
    }

    /// x ↦ x^(7^i).
    pub fn frob(&self, a: u32, i: u32) -> u32 {
        if a == ZERO {
            ZERO
        } else {
            ((a as u128 * 7u128.pow(i) % self.order as u128) as u64) as u32
        }
    }

    /// Value of a Laurent polynomial at t = α.
    pub fn eval(&self, x: &Laurent) -> u32 {
        x.0.iter().fold(ZERO, |acc, (&k, &c)| self.add(acc, self.mul(self.constant(c), self.pow(1, k))))
    }
}

impl Default for Gf {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Clone, Debug, Default)]
pub struct OracleReport {
    pub words: u64,
    pub accepted: u64,
    pub exact_checks: u64,
    pub mismatches: Vec<Vec<usize>>,
}

struct Walk<'a> {
    op: &'a OracleProblem,
    dfa: &'a Dfa,
    gf: &'a Gf,
    max_len: usize,
    coords: usize,
    /// digit_vals[(level * letters + letter) * coords + j]
    digit_vals: Vec<u32>,
    coef_vals: Vec<Vec<u32>>,
    /// Coordinate values of the current prefix at each depth.
    vals: Vec<u32>,
    word: Vec<usize>,
    report: OracleReport,
}

impl Walk<'_> {
    fn hashed_zero(&self, level: usize) -> bool {
        let vals = &self.vals[level * self.coords..(level + 1) * self.coords];
        self.op.equations.iter().zip(&self.coef_vals).all(|(eq, coefs)| {
            let mut total = ZERO;
            for (term, &c) in eq.0.iter().zip(coefs) {
                let mut v = c;
                for (j, &e) in term.exps.iter().enumerate() {
                    if e != 0 {
                        v = self.gf.mul(v, self.gf.pow(vals[j], e));
                    }
                }
                total = self.gf.add(total, v);
            }
            total == ZERO
        })
    }

    fn visit(&mut self, state: usize) {
        let level = self.word.len();
        self.report.words += 1;
        let member = if self.hashed_zero(level) {
            self.report.exact_checks += 1;
            self.op.contains(&self.op.expand(&self.word))
        } else {
            false
        };
        let accepted = self.dfa.is_accepting(state);
        if accepted {
            self.report.accepted += 1;
        }
        if accepted != member && self.report.mismatches.len() < 10 {
            self.report.mismatches.push(self.word.clone());
        }
        if level == self.max_len {
            return;
        }
        let (a, n, letters) = (self.op.a, self.coords, self.op.digits.len());
        for letter in 0..letters {
            for j in 0..n {
                let prev = self.vals[level * n + j];
                let d = self.digit_vals[(level * letters + letter) * n + j];
                self.vals[(level + 1) * n + j] = if j < a { self.gf.add(prev, d) } else { self.gf.mul(prev, d) };
            }
            self.word.push(letter);
            self.visit(self.dfa.next(state, letter));
            self.word.pop();
        }
    }
}

/// Compares acceptance by `dfa` (letters indexed like `op.digits`) with
/// membership of the expansion in X, for every word of length ≤ `max_len`.
pub fn check_language(op: &OracleProblem, dfa: &Dfa, max_len: usize, gf: &Gf) -> OracleReport {
    assert_eq!(dfa.alphabet(), op.digits.len());
    let coords = op.a + op.b;
    let mut digit_vals = Vec::with_capacity(max_len * op.digits.len() * coords);
    for level in 0..max_len {
        for d in &op.digits {
            digit_vals.extend(d.coords().iter().map(|c| gf.frob(gf.eval(c), level as u32)));
        }
    }
    let coef_vals = op.equations.iter().map(|e| e.0.iter().map(|t| gf.eval(&t.coef)).collect()).collect();
    let mut vals = vec![ZERO; (max_len + 1) * coords];
    for (slot, c) in vals.iter_mut().zip(Pt::identity(op.a, op.b).coords()) {
        *slot = gf.eval(&c);
    }
    let mut walk =
        Walk { op, dfa, gf, max_len, coords, digit_vals, coef_vals, vals, word: Vec::new(), report: OracleReport::default() };
    walk.visit(dfa.start());
    walk.report
}

/// Words of length ≤ `max_len` accepted by `dfa`, by depth-first search
/// pruned at states that cannot reach acceptance.
pub fn accepted_words(dfa: &Dfa, max_len: usize) -> Vec<Vec<usize>> {
    let useful = dfa.coreachable();
    let mut out = Vec::new();
    let mut stack = vec![(dfa.start(), Vec::new())];
    while let Some((s, w)) = stack.pop() {
        if !useful[s] {
            continue;
        }
        if dfa.is_accepting(s) {
            out.push(w.clone());
        }
        if w.len() < max_len {
            for l in 0..dfa.alphabet() {
                let mut next = w.clone();
                next.push(l);
                stack.push((dfa.next(s, l), next));
            }
        }
    }
    out.sort();
    out
}

#[derive(Clone, Debug, Default)]
pub struct BijectivityReport {
    pub representative_words: usize,
    pub language_words: usize,
    pub collisions: Vec<(Vec<usize>, Vec<usize>)>,
    /// (length, in L only, in L′ only)
    pub set_differences: Vec<(usize, usize, usize)>,
}

/// Distinct L′-words have distinct expansions, and for each n ≤ `max_len`
/// the expansions of L- and L′-words of length ≤ n agree.
pub fn check_bijectivity(op: &OracleProblem, language: &Dfa, representatives: &Dfa, max_len: usize) -> BijectivityReport {
    let mut report = BijectivityReport::default();
    let lw = accepted_words(language, max_len);
    let rw = accepted_words(representatives, max_len);
    report.language_words = lw.len();
    report.representative_words = rw.len();
    let mut seen: BTreeMap<Pt, Vec<usize>> = BTreeMap::new();
    for w in &rw {
        let x = op.expand(w);
        if let Some(prev) = seen.insert(x, w.clone()) {
            if report.collisions.len() < 10 {
                report.collisions.push((prev, w.clone()));
            }
        }
    }
    for n in 0..=max_len {
        let l: HashSet<Pt> = lw.iter().filter(|w| w.len() <= n).map(|w| op.expand(w)).collect();
        let r: HashSet<Pt> = rw.iter().filter(|w| w.len() <= n).map(|w| op.expand(w)).collect();
        let only_l = l.difference(&r).count();
        let only_r = r.difference(&l).count();
        if only_l + only_r > 0 {
            report.set_differences.push((n, only_l, only_r));
        }
    }
    report
}

/// Exponent sums Σ e_i 7^i over words of length ≤ `max_len` in Σ = {t^e}.
pub fn monomial_expansions(exponents: &[i64], max_len: usize) -> BTreeSet<i64> {
    let mut out = BTreeSet::from([0]);
    let mut frontier = vec![0i64];
    for i in 0..max_len {
        let scale = P.pow(i as u32);
        frontier = frontier.iter().flat_map(|&s| exponents.iter().map(move |&e| s + e * scale)).collect();
        out.extend(frontier.iter().copied());
    }
    out
}

/// G_a × G_m over F_7(t), Γ = Z[F]t × ⟨t⟩, Σ = {(c t, t^e) : c ∈ F_7, |e| ≤ 3}.
pub fn diagonal_family_json(variety: &[&str]) -> String {
    let mut digits = Vec::new();
    for c in 0..7 {
        for e in -3i32..=3 {
            digits.push(format!(r#"{{"add":["{c}*t"],"mul":["t^{e}"]}}"#));
        }
    }
    let variety: Vec<String> = variety.iter().map(|v| format!("\"{v}\"")).collect();
    format!(
        r#"{{"field":{{"p":7,"vars":["t"]}},"group":{{"additive":1,"multiplicative":1}},
"generators":[{{"add":["t"],"mul":["1"]}},{{"add":["0"],"mul":["t"]}}],
"variety":[{}],"options":{{"r":1,"digits":[{}],"depth":8}}}}"#,
        variety.join(","),
        digits.join(",")
    )
}

/// Exponents of Σ = {t^e : |e| ≤ 4} in G_m over F_7(t), in letter order.
pub const SANDWICH_EXPONENTS: [i64; 9] = [0, -4, -3, -2, -1, 1, 2, 3, 4];

pub fn sandwich_json() -> String {
    let digits: Vec<String> = SANDWICH_EXPONENTS.iter().map(|e| format!(r#"{{"mul":["t^{e}"]}}"#)).collect();
    format!(
        r#"{{"field":{{"p":7,"vars":["t"]}},"group":{{"multiplicative":1}},"generators":[{{"mul":["t"]}}],
"variety":[],"options":{{"r":1,"digits":[{}],"depth":6}}}}"#,
        digits.join(",")
    )
}

/// G_a over F_p(t) with the given generator strings.
pub fn additive_json(p: u32, gens: &[String]) -> String {
    let gens: Vec<String> = gens.iter().map(|g| format!(r#"{{"add":["{g}"]}}"#)).collect();
    format!(r#"{{"field":{{"p":{p},"vars":["t"]}},"group":{{"additive":1}},"generators":[{}],"variety":[]}}"#, gens.join(","))
}

pub fn resolve_json(src: &str) -> Problem {
    ProblemSpec::from_json(src).and_then(|s| s.resolve(Path::new("."))).expect("problem resolves")
}

/// Polynomials over F_2 as bit vectors, bit k for t^k.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct F2Poly(pub Vec<u64>);

impl F2Poly {
    pub fn from_exponents(exps: impl IntoIterator<Item = usize>) -> Self {
        let mut p = F2Poly::default();
        for k in exps {
            p.flip(k);
        }
        p.trim()
    }

    fn flip(&mut self, k: usize) {
        if self.0.len() <= k / 64 {
            self.0.resize(k / 64 + 1, 0);
        }
        self.0[k / 64] ^= 1 << (k % 64);
    }

    fn trim(mut self) -> Self {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponents(&self) -> Vec<usize> {
        (0..self.0.len() * 64).filter(|&k| self.0[k / 64] >> (k % 64) & 1 == 1).collect()
    }

    pub fn degree(&self) -> Option<usize> {
        self.exponents().last().copied()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        F2Poly((0..n).map(|i| self.0.get(i).unwrap_or(&0) ^ o.0.get(i).unwrap_or(&0)).collect()).trim()
    }

    /// p(t)^(2^j) = p(t^(2^j)).
    pub fn frob(&self, j: u32) -> Self {
        F2Poly::from_exponents(self.exponents().into_iter().map(|k| k << j))
    }

    /// The square root when every exponent is even.
    pub fn sqrt(&self) -> Option<Self> {
        let e = self.exponents();
        e.iter().all(|k| k % 2 == 0).then(|| F2Poly::from_exponents(e.into_iter().map(|k| k / 2)))
    }
}

/// Is `target` in the F_2-span of {F^j g : g ∈ gens, j ≤ max_j}?
pub fn f2_span_contains(target: &F2Poly, gens: &[F2Poly], max_j: u32) -> bool {
    let mut basis: BTreeMap<usize, F2Poly> = BTreeMap::new();
    let reduce = |mut v: F2Poly, basis: &BTreeMap<usize, F2Poly>| {
        while let Some(d) = v.degree() {
            match basis.get(&d) {
                Some(b) => v = v.add(b),
                None => break,
            }
        }
        v
    };
    for g in gens {
        for j in 0..=max_j {
            let v = reduce(g.frob(j), &basis);
            if let Some(d) = v.degree() {
                basis.insert(d, v);
            }
        }
    }
    reduce(target.clone(), &basis).is_zero()
}
