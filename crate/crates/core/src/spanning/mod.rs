//! Digit sets, F^r-expansions, and weak spanning sets.
//!
//! A weak F^r-spanning set Σ contains 0, is symmetric, and every sum of five
//! digits can be written t + F^r t' with t, t' in Σ. Together with the
//! generators lying in Σ this already gives [Σ*] ⊇ Γ: a digit-wise sum of two
//! expansions only ever adds three terms per position (two digits and a
//! carry), the 5-term axiom supplies the new digit and carry, and F acts by
//! shifting. So the finite checks here are sufficient for all axioms used.

use crate::error::{Error, Result};
use crate::group::{GroupPoint, GroupShape, ModulePresentation};
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// Default cap on |Σ| for the constructed spanning set.
pub const DEFAULT_DIGIT_CAP: usize = 5000;

/// Largest digit set accepted by the exhaustive 5-term axiom check.
pub const VERIFY_LIMIT: usize = 64;

/// Σ with its Frobenius exponent r. Digit indices are the alphabet.
#[derive(Clone, Debug)]
pub struct DigitSet {
    shape: GroupShape,
    r: u32,
    digits: Vec<GroupPoint>,
    zero_index: usize,
    index: HashMap<GroupPoint, usize>,
}

impl PartialEq for DigitSet {
    fn eq(&self, other: &Self) -> bool {
        self.shape == other.shape && self.r == other.r && self.digits == other.digits
    }
}
impl Eq for DigitSet {}

impl DigitSet {
    /// Keeps the given order, dropping repeats; requires 0 and symmetry.
    pub fn new(shape: &GroupShape, r: u32, digits: Vec<GroupPoint>) -> Result<Self> {
        if r == 0 {
            return Err(Error::validation("frobenius exponent r must be positive"));
        }
        let mut index = HashMap::with_capacity(digits.len());
        let mut kept = Vec::with_capacity(digits.len());
        for d in digits {
            if d.add.len() != shape.additive() || d.mul.len() != shape.multiplicative() {
                return Err(Error::validation("digit does not match the group shape"));
            }
            if !index.contains_key(&d) {
                index.insert(d.clone(), kept.len());
                kept.push(d);
            }
        }
        let zero_index = *index
            .get(&shape.identity())
            .ok_or_else(|| Error::AxiomViolation { axiom: "contains-zero".into(), tuple: vec![] })?;
        for (i, d) in kept.iter().enumerate() {
            if !index.contains_key(&d.neg()) {
                return Err(Error::AxiomViolation { axiom: "symmetric".into(), tuple: vec![i] });
            }
        }
        Ok(DigitSet { shape: shape.clone(), r, digits: kept, zero_index, index })
    }

    /// Sorts under the canonical point order before indexing.
    pub fn canonical(shape: &GroupShape, r: u32, mut digits: Vec<GroupPoint>) -> Result<Self> {
        digits.sort();
        digits.dedup();
        Self::new(shape, r, digits)
    }

    pub fn shape(&self) -> &GroupShape {
        &self.shape
    }
    pub fn r(&self) -> u32 {
        self.r
    }
    pub fn len(&self) -> usize {
        self.digits.len()
    }
    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }
    pub fn digits(&self) -> &[GroupPoint] {
        &self.digits
    }
    pub fn digit(&self, i: usize) -> &GroupPoint {
        &self.digits[i]
    }
    pub fn zero_index(&self) -> usize {
        self.zero_index
    }
    pub fn index_of(&self, x: &GroupPoint) -> Option<usize> {
        self.index.get(x).copied()
    }

    /// Rank of each letter in the total order with 0 least and the rest by index.
    pub fn letter_ranks(&self) -> Vec<usize> {
        (0..self.len())
            .map(|i| match i.cmp(&self.zero_index) {
                std::cmp::Ordering::Equal => 0,
                std::cmp::Ordering::Less => i + 1,
                std::cmp::Ordering::Greater => i,
            })
            .collect()
    }

    /// Max degree height over all digit coordinates.
    pub fn max_digit_degree(&self) -> u64 {
        self.digits.iter().map(|d| d.degree_height()).max().unwrap_or(0)
    }

    /// [w]_{F^r} for a word of digit indices, first letter least significant.
    pub fn expand(&self, word: &[usize]) -> GroupPoint {
        expand_points(&self.shape, word.iter().map(|&i| &self.digits[i]), self.r)
    }
}

/// x_0 + F^r x_1 + ... + F^{mr} x_m, by Horner from the most significant end.
pub fn expand_points<'a, I>(shape: &GroupShape, word: I, r: u32) -> GroupPoint
where
    I: IntoIterator<Item = &'a GroupPoint>,
    I::IntoIter: DoubleEndedIterator,
{
    word.into_iter().rev().fold(shape.identity(), |acc, x| x.add(&acc.frob(r)))
}

/// Free-function form of [`DigitSet::expand`].
pub fn expand(sigma: &DigitSet, word: &[usize]) -> GroupPoint {
    sigma.expand(word)
}

/// {[w] : |w| <= len}. Since 0 ∈ Σ this equals the expansions of length exactly len.
pub fn bounded_expansions(sigma: &DigitSet, len: usize) -> BTreeSet<GroupPoint> {
    let mut level: BTreeSet<GroupPoint> = BTreeSet::from([sigma.shape.identity()]);
    for _ in 0..len {
        let mut next = BTreeSet::new();
        for y in &level {
            let fy = y.frob(sigma.r);
            for d in &sigma.digits {
                next.insert(d.add(&fy));
            }
        }
        level = next;
    }
    level
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CertificateMode {
    Constructed,
    Verified,
}

/// Evidence for the 5-term axiom.
///
/// Witnesses are keyed by the canonical string of the 5-digit sum: every
/// 5-tuple with that sum shares the witness, so covering all distinct sums
/// covers all |Σ|^5 tuples.
#[derive(Clone, Debug, serde::Serialize)]
pub struct SpanningCertificate {
    pub mode: CertificateMode,
    pub checked_pairs: u64,
    pub witnesses: BTreeMap<String, (usize, usize)>,
}

/// Constants b = p q^l, b_l = p of the split-group relation b x = p F^l(x).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SplitRelation {
    pub ell: u32,
    pub b: i64,
    pub p: i64,
}

impl SplitRelation {
    /// Least l with q^l > 6 l.
    pub fn for_field(p: u32, q: u32) -> Self {
        let mut ell = 1u32;
        while (q as i64).pow(ell) <= 6 * ell as i64 {
            ell += 1;
        }
        SplitRelation { ell, b: p as i64 * (q as i64).pow(ell), p: p as i64 }
    }

    /// Coefficients are taken with |a| < 6b.
    pub fn coefficient_bound(&self) -> i64 {
        6 * self.b
    }

    /// Splits summed coefficients into those of t and t' with sum = t + F^l t'.
    /// Truncated division gives |remainder| < b; only b_l is nonzero, so the
    /// low block of t' is p times the quotient.
    pub fn carry_split(&self, sum: &[i64]) -> (Vec<i64>, Vec<i64>) {
        let low = sum.iter().map(|a| a % self.b).collect();
        let high = sum.iter().map(|a| self.p * (a / self.b)).collect();
        (low, high)
    }
}

/// Σ_i Σ_{j<r} a_{i,j} F^j(u_i), coefficients laid out generator-major.
pub fn eval_combination(shape: &GroupShape, gens: &ModulePresentation, r: u32, coeffs: &[i64]) -> GroupPoint {
    let mut acc = shape.identity();
    for (i, u) in gens.generators().iter().enumerate() {
        for j in 0..r {
            let a = coeffs[i * r as usize + j as usize];
            if a != 0 {
                acc = acc.add(&u.frob(j).scalar_mul(a));
            }
        }
    }
    acc
}

/// Checks b u = p F^l(u) on every generator.
pub fn check_split_relation(gens: &ModulePresentation, rel: &SplitRelation) -> Result<()> {
    for (i, u) in gens.generators().iter().enumerate() {
        if u.scalar_mul(rel.b) != u.frob(rel.ell).scalar_mul(rel.p) {
            return Err(Error::AxiomViolation { axiom: "split-relation".into(), tuple: vec![i] });
        }
    }
    Ok(())
}

/// All multiples a·v with |a| < bound, deduplicated.
fn multiples(shape: &GroupShape, v: &GroupPoint, bound: i64, cap: usize) -> Result<BTreeSet<GroupPoint>> {
    let mut out = BTreeSet::from([shape.identity()]);
    let (mut pos, mut neg) = (shape.identity(), shape.identity());
    let minus = v.neg();
    for _ in 1..bound {
        pos = pos.add(v);
        neg = neg.add(&minus);
        let grew_pos = out.insert(pos.clone());
        let grew_neg = out.insert(neg.clone());
        if out.len() > cap {
            return Err(Error::DigitSetTooLarge { size: out.len(), cap });
        }
        if !grew_pos && !grew_neg && pos.is_identity() {
            // v has finite order and the whole cycle is already present.
            break;
        }
    }
    Ok(out)
}

/// The box { Σ a_{i,j} F^j u_i : |a_{i,j}| < 6b } for split groups.
///
/// Built as an iterated sumset with deduplication after each factor, so its
/// cost follows the collapsed size rather than the raw box.
pub fn canonical_weak_spanning(
    gens: &ModulePresentation,
    shape: &GroupShape,
    cap: usize,
) -> Result<(DigitSet, SpanningCertificate)> {
    let rel = SplitRelation::for_field(shape.p(), shape.q());
    check_split_relation(gens, &rel)?;
    let bound = rel.coefficient_bound();
    let mut acc: BTreeSet<GroupPoint> = BTreeSet::from([shape.identity()]);
    for u in gens.generators() {
        for j in 0..rel.ell {
            let m = multiples(shape, &u.frob(j), bound, cap)?;
            let mut next = BTreeSet::new();
            for x in &acc {
                for y in &m {
                    next.insert(x.add(y));
                }
                if next.len() > cap {
                    return Err(Error::DigitSetTooLarge { size: next.len(), cap });
                }
            }
            acc = next;
        }
    }
    let sigma = DigitSet::canonical(shape, rel.ell, acc.into_iter().collect())?;
    let cert = SpanningCertificate { mode: CertificateMode::Constructed, checked_pairs: 0, witnesses: BTreeMap::new() };
    Ok((sigma, cert))
}

/// Exhaustive check of symmetry, generators in Σ, and the 5-term axiom.
pub fn verify_weak_spanning(sigma: &DigitSet, gens: &ModulePresentation) -> Result<SpanningCertificate> {
    if sigma.len() > VERIFY_LIMIT {
        return Err(Error::validation(format!(
            "exhaustive verification needs at most {VERIFY_LIMIT} digits, got {}",
            sigma.len()
        )));
    }
    if sigma.index_of(&sigma.shape.identity()).is_none() {
        return Err(Error::AxiomViolation { axiom: "contains-zero".into(), tuple: vec![] });
    }
    for (i, d) in sigma.digits.iter().enumerate() {
        if sigma.index_of(&d.neg()).is_none() {
            return Err(Error::AxiomViolation { axiom: "symmetric".into(), tuple: vec![i] });
        }
    }
    for (i, u) in gens.generators().iter().enumerate() {
        if sigma.index_of(u).is_none() {
            return Err(Error::AxiomViolation { axiom: "generators".into(), tuple: vec![i] });
        }
    }
    // Distinct k-fold sums, each with one digit tuple producing it.
    let mut sums: BTreeMap<GroupPoint, Vec<usize>> = BTreeMap::from([(sigma.shape.identity(), vec![])]);
    for _ in 0..5 {
        let mut next: BTreeMap<GroupPoint, Vec<usize>> = BTreeMap::new();
        for (x, tuple) in &sums {
            for (i, d) in sigma.digits.iter().enumerate() {
                next.entry(x.add(d)).or_insert_with(|| {
                    let mut t = tuple.clone();
                    t.push(i);
                    t
                });
            }
        }
        sums = next;
    }
    let shifted: Vec<GroupPoint> = sigma.digits.iter().map(|d| d.frob(sigma.r)).collect();
    let mut checked_pairs = 0u64;
    let mut witnesses = BTreeMap::new();
    'sums: for (x, tuple) in &sums {
        for (j, fd) in shifted.iter().enumerate() {
            checked_pairs += 1;
            if let Some(i) = sigma.index_of(&x.sub(fd)) {
                witnesses.insert(x.to_string(), (i, j));
                continue 'sums;
            }
        }
        return Err(Error::AxiomViolation { axiom: "five-term".into(), tuple: tuple.clone() });
    }
    Ok(SpanningCertificate { mode: CertificateMode::Verified, checked_pairs, witnesses })
}
