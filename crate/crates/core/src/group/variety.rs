use super::{GroupPoint, GroupShape};
use crate::algebra::{gcd, parse_kpoly, KMono, KPoly, Poly, RatFunc};
use crate::error::Result;
use std::collections::BTreeMap;
use std::fmt;

/// A closed subvariety of G cut out by polynomials in x_1..x_a, y_1..y_b.
///
/// Canonical form: each polynomial has its y-exponents shifted so the least
/// one is 0, then is scaled to a primitive polynomial over F_q[t] with
/// normalized leading coefficient; the list is sorted and
/// deduplicated with zeros dropped. A nonzero constant collapses the system
/// to `[1]`, the empty variety. Both steps keep the zero set on the torus.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variety {
    polys: Vec<KPoly>,
}

/// Laurent shift on the y-coordinates, then [`primitive_part`].
pub fn normalize_poly(p: &KPoly, shape: &GroupShape) -> KPoly {
    if p.is_zero() {
        return p.clone();
    }
    let n = shape.dim();
    let mut delta = KMono::from_elem(0, n);
    for j in shape.laurent_vars() {
        let min = p.terms().iter().map(|t| t.0[j]).min().unwrap_or(0);
        delta[j] = -min;
    }
    // A uniform shift preserves graded-lex order, so terms stay sorted.
    let shifted = if delta.iter().any(|&d| d != 0) { p.shift(&delta) } else { p.clone() };
    primitive_part(&shifted)
}

/// The unique K^*-multiple of p whose coefficients are polynomials over F_q
/// with gcd 1 and whose leading coefficient has leading F_q-coefficient 1.
pub fn primitive_part(p: &KPoly) -> KPoly {
    let Some(first) = p.terms().first() else {
        return p.clone();
    };
    let ring = first.1.ring().clone();
    let mut den = Poly::one(&ring);
    for c in p.coeffs() {
        if !c.den().is_one() {
            let g = gcd(&den, c.den());
            den = den.mul(&c.den().div_exact(&g).expect("gcd divides"));
        }
    }
    let mut content = Poly::zero(&ring);
    for c in p.coeffs() {
        let n = if c.den().is_one() { c.num().clone() } else { c.num().mul(&den.div_exact(c.den()).expect("lcm")) };
        content = gcd(&content, &n);
        if content.is_one() {
            break;
        }
    }
    let lead = first.1.num().mul(&den.div_exact(first.1.den()).expect("lcm"));
    let lead = lead.div_exact(&content).expect("content divides");
    let unit = ring.field.inv(lead.leading_coeff());
    let factor = RatFunc::new(den.scale(unit), content);
    if factor.is_one() {
        p.clone()
    } else {
        p.scale(&factor)
    }
}

impl Variety {
    /// Canonicalizes an arbitrary list of defining polynomials.
    pub fn new(shape: &GroupShape, polys: Vec<KPoly>) -> Self {
        let mut out: Vec<KPoly> = Vec::with_capacity(polys.len());
        for p in polys {
            if p.is_zero() {
                continue;
            }
            let n = normalize_poly(&p, shape);
            if n.is_constant() {
                return Variety { polys: vec![KPoly::one(shape.coords())] };
            }
            out.push(n);
        }
        out.sort();
        out.dedup();
        Variety { polys: out }
    }

    pub fn whole(_shape: &GroupShape) -> Self {
        Variety { polys: Vec::new() }
    }

    pub fn parse(shape: &GroupShape, sources: &[String]) -> Result<Self> {
        let laurent = shape.laurent_vars();
        let polys = sources.iter().map(|s| parse_kpoly(s, shape.coords(), &laurent)).collect::<Result<Vec<_>>>()?;
        Ok(Self::new(shape, polys))
    }

    pub fn polys(&self) -> &[KPoly] {
        &self.polys
    }

    /// Whether the system contains a nonzero constant (no points).
    pub fn is_empty_set(&self) -> bool {
        self.polys.iter().any(|p| p.is_constant())
    }

    pub fn is_whole(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn contains(&self, x: &GroupPoint) -> bool {
        let values = x.values();
        self.polys.iter().all(|p| p.eval(&values).is_some_and(|v| v.is_zero()))
    }

    /// Whether the identity (x = 0, y = 1) lies on the variety.
    pub fn contains_identity(&self, shape: &GroupShape) -> bool {
        let zero_vars = shape.additive_vars();
        self.polys.iter().all(|p| p.value_at_unit(&zero_vars).is_zero())
    }

    /// V − g = {h : h + g ∈ V}, canonicalized.
    pub fn translate(&self, shape: &GroupShape, g: &GroupPoint) -> Self {
        Self::new(shape, self.polys.iter().map(|p| translate_poly(p, shape, g)).collect())
    }

    pub fn max_total_degree(&self) -> u64 {
        self.polys.iter().map(|p| p.total_degree()).max().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.polys.iter().map(|p| p.to_string()).collect()
    }
}

/// P(x + g_add, g_mul · y).
pub fn translate_poly(p: &KPoly, shape: &GroupShape, g: &GroupPoint) -> KPoly {
    let ring = shape.coords();
    let a = shape.additive();
    let mut shifted_powers: Vec<BTreeMap<i32, KPoly>> = vec![BTreeMap::new(); a];
    let mut terms: Vec<KPoly> = Vec::with_capacity(p.terms().len());
    for (m, c) in p.terms() {
        let mut coeff = c.clone();
        let mut rest = KMono::from_elem(0, shape.dim());
        for j in 0..shape.multiplicative() {
            let e = m[a + j];
            rest[a + j] = e;
            if e != 0 {
                coeff = coeff.mul(&g.mul[j].pow(e as i64).expect("unit coordinate"));
            }
        }
        let mut term = KPoly::term(ring, rest, coeff);
        for i in 0..a {
            let e = m[i];
            if e == 0 {
                continue;
            }
            if g.add[i].is_zero() {
                let mut mono = KMono::from_elem(0, shape.dim());
                mono[i] = e;
                term = term.shift(&mono);
                continue;
            }
            let power = shifted_powers[i]
                .entry(e)
                .or_insert_with(|| {
                    KPoly::var(ring, i).add(&KPoly::constant(ring, g.add[i].clone())).pow(e as u32)
                })
                .clone();
            term = term.mul(&power);
        }
        terms.push(term);
    }
    let all = terms.into_iter().flat_map(|t| t.terms().to_vec()).collect();
    KPoly::from_terms(ring, all)
}

impl fmt::Display for Variety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.to_strings().join(", "))
    }
}

impl fmt::Debug for Variety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Variety{self}")
    }
}

pub fn variety_contains(v: &Variety, x: &GroupPoint) -> bool {
    v.contains(x)
}

pub fn variety_translate(v: &Variety, shape: &GroupShape, g: &GroupPoint) -> Variety {
    v.translate(shape, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_ratfunc, FqField, PolyRing};

    fn shape() -> GroupShape {
        GroupShape::new(1, 1, PolyRing::new(FqField::prime(7).unwrap(), vec!["t".into()])).unwrap()
    }

    fn pt(s: &GroupShape, a: &str, m: &str) -> GroupPoint {
        let r = s.ring();
        s.point(vec![parse_ratfunc(a, r).unwrap()], vec![parse_ratfunc(m, r).unwrap()]).unwrap()
    }

    #[test]
    fn diagonal_membership() {
        let s = shape();
        let v = Variety::parse(&s, &["x1 - y1".into()]).unwrap();
        assert!(v.contains(&pt(&s, "t", "t")));
        assert!(!v.contains(&pt(&s, "t", "t^2")));
        assert!(Variety::whole(&s).contains(&pt(&s, "t", "t^2")));
    }

    #[test]
    fn translation() {
        let s = shape();
        let v = Variety::parse(&s, &["x1 - t".into()]).unwrap();
        let g = pt(&s, "t", "1");
        assert_eq!(v.translate(&s, &g), Variety::parse(&s, &["x1".into()]).unwrap());
        let w = Variety::parse(&s, &["x1^2 - t*y1 + 3".into()]).unwrap();
        let h = pt(&s, "t+2", "t^-3");
        assert_eq!(w.translate(&s, &h).translate(&s, &h.neg()), w);
        let x = pt(&s, "5*t", "t^4");
        assert_eq!(w.translate(&s, &h).contains(&x), w.contains(&x.add(&h)));
    }

    #[test]
    fn laurent_normalization_is_canonical() {
        let s = shape();
        let a = Variety::parse(&s, &["x1*y1^-1 - 1".into()]).unwrap();
        let b = Variety::parse(&s, &["3*x1 - 3*y1".into()]).unwrap();
        assert_eq!(a, b);
        let e = Variety::parse(&s, &["t*y1".into()]).unwrap();
        assert!(e.is_empty_set());
        let f = Variety::parse(&s, &["3*x1/(t^2+1) + 1/t".into()]).unwrap();
        assert_eq!(f.to_strings(), ["t*x1 + 5*t^2 + 5"]);
    }
}
