//! Property tests over randomly generated inputs.

mod common;

use frobml::algebra::{lambda_split, parse_kpoly, parse_ratfunc, FqField, LambdaBasis, Poly, PolyRing, RatFunc, Ring};
use frobml::analysis::{analyze, orbit_decompose, OrbitDescription};
use frobml::automata::Dfa;
use frobml::group::{GroupPoint, GroupShape, Variety};
use num_traits::ToPrimitive;
use proptest::prelude::*;
use std::collections::BTreeSet;

fn ring(p: u32) -> Ring {
    PolyRing::new(FqField::prime(p).unwrap(), vec!["t".into()])
}

fn render(coeffs: &[u8]) -> String {
    let terms: Vec<String> = coeffs.iter().enumerate().filter(|(_, &c)| c != 0).map(|(k, c)| format!("{c}*t^{k}")).collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// (numerator coefficients, denominator exponent) over F_7.
fn element() -> impl Strategy<Value = (Vec<u8>, u32)> {
    (prop::collection::vec(0u8..7, 1..5), 0u32..3)
}

fn nonzero_element() -> impl Strategy<Value = (Vec<u8>, u32)> {
    element().prop_filter("nonzero", |(c, _)| c.iter().any(|&x| x != 0))
}

fn to_ratfunc(r: &Ring, (coeffs, den): &(Vec<u8>, u32)) -> RatFunc {
    parse_ratfunc(&format!("({}) / t^{den}", render(coeffs)), r).unwrap()
}

fn shape() -> GroupShape {
    GroupShape::new(1, 1, ring(7)).unwrap()
}

fn point() -> impl Strategy<Value = GroupPoint> {
    (element(), nonzero_element()).prop_map(|(a, m)| {
        let s = shape();
        s.point(vec![to_ratfunc(s.ring(), &a)], vec![to_ratfunc(s.ring(), &m)]).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_laws(x in point(), y in point(), z in point()) {
        let s = shape();
        prop_assert_eq!(x.add(&y).add(&z), x.add(&y.add(&z)));
        prop_assert_eq!(x.add(&y), y.add(&x));
        prop_assert_eq!(x.add(&s.identity()), x.clone());
        prop_assert!(x.add(&x.neg()).is_identity());
        prop_assert_eq!(x.scalar_mul(3), x.add(&x).add(&x));
    }

    #[test]
    fn frobenius_is_an_endomorphism(x in point(), y in point(), n in 1u32..3) {
        prop_assert_eq!(x.add(&y).frob(n), x.frob(n).add(&y.frob(n)));
        prop_assert_eq!(x.frob(n).frob_root(n), Some(x.clone()));
        prop_assert_eq!(x.frob(1).frob(n), x.frob(n + 1));
    }

    #[test]
    fn translation_moves_membership(x in point(), g in point(), which in 0usize..4) {
        let s = shape();
        let polys = [
            vec!["x1 - y1"],
            vec!["x1^2 - t*y1"],
            vec!["x1*y1 - 1", "x1 - t"],
            vec!["y1^2 - y1", "x1"],
        ];
        let sources: Vec<String> = polys[which].iter().map(|p| p.to_string()).collect();
        let v = Variety::parse(&s, &sources).unwrap();
        let on = x.sub(&g);
        // X − g = {h : h + g ∈ X}.
        prop_assert_eq!(v.translate(&s, &g).contains(&on), v.contains(&x));
        prop_assert_eq!(v.translate(&s, &g).contains(&x), v.contains(&x.add(&g)));
    }

    #[test]
    fn lambda_components_reconstruct(num in prop::collection::vec(0u8..7, 1..12), den in prop::collection::vec(0u8..7, 1..4), level in 1u32..3) {
        let r = ring(7);
        prop_assume!(den.iter().any(|&c| c != 0));
        let x = parse_ratfunc(&format!("({}) / ({})", render(&num), render(&den)), &r);
        prop_assume!(x.is_ok());
        let x = x.unwrap();
        let q = 7u64.pow(level);
        let basis = LambdaBasis::new(&r, level);
        let mut sum = RatFunc::zero(&r);
        for (residue, part) in lambda_split(&x, q) {
            let h = RatFunc::from_poly(Poly::monomial(&r, residue.clone(), 1));
            sum = sum.add(&part.frobenius(level).mul(&h));
            prop_assert!(basis.index_of(&residue) < basis.len());
        }
        prop_assert_eq!(sum, x);
    }
}

fn dfa() -> impl Strategy<Value = Dfa> {
    (1usize..6).prop_flat_map(|n| {
        (prop::collection::vec(0..n as u32, n * 2), prop::collection::vec(any::<bool>(), n))
            .prop_map(move |(delta, acc)| Dfa::new(2, 0, acc, delta).unwrap())
    })
}

fn words(max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..max_len {
        frontier = frontier
            .iter()
            .flat_map(|w: &Vec<usize>| (0..2).map(move |l| [w.clone(), vec![l]].concat()))
            .collect();
        out.extend(frontier.iter().cloned());
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn automata_operations_match_enumeration(a in dfa(), b in dfa()) {
        let all = words(7);
        let inter = a.intersect(&b).unwrap();
        let uni = a.union(&b).unwrap();
        let comp = a.complement();
        let min = a.minimize();
        prop_assert!(min.state_count() <= a.state_count());
        for w in &all {
            prop_assert_eq!(inter.accepts(w), a.accepts(w) && b.accepts(w));
            prop_assert_eq!(uni.accepts(w), a.accepts(w) || b.accepts(w));
            prop_assert_eq!(comp.accepts(w), !a.accepts(w));
            prop_assert_eq!(min.accepts(w), a.accepts(w));
        }
        let census = a.census(7);
        for n in 0..=7 {
            let count = all.iter().filter(|w| w.len() == n && a.accepts(w)).count();
            prop_assert_eq!(census.counts[n].to_usize().unwrap(), count);
        }
        // A language accepted by an n-state machine is nonempty iff it has a word shorter than n.
        let short = all.iter().any(|w| w.len() < a.state_count() && a.accepts(w));
        prop_assert_eq!(!a.is_empty(), short);
        // Infinite iff some accepted word has length in [n, 2n).
        let n = a.state_count();
        let long = words(2 * n).iter().any(|w| w.len() >= n && a.accepts(w));
        prop_assert_eq!(a.is_infinite(), long);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    /// Every point an orbit description produces lies in X, and the points of
    /// bounded height it produces are exactly the expansions of representative words.
    #[test]
    fn decomposition_points_lie_in_x(scale in 1u8..7) {
        let src = common::diagonal_family_json(&[&format!("x1 - {scale}*y1")]);
        let problem = common::resolve_json(&src);
        let a = analyze(&problem).unwrap();
        let d = orbit_decompose(&problem, &a).unwrap();
        let bound = 7u64.pow(3);
        let mut described = BTreeSet::new();
        for desc in &d {
            match desc {
                OrbitDescription::Orbit { translate, base, delta, .. } => {
                    for k in 0..=3 {
                        let x = translate.add(&base.frob(k * delta));
                        prop_assert!(problem.variety.contains(&x));
                        if x.degree_height() <= bound {
                            described.insert(x);
                        }
                    }
                }
                OrbitDescription::Singleton { point } => {
                    prop_assert!(problem.variety.contains(point));
                    described.insert(point.clone());
                }
                other => prop_assert!(false, "unexpected {:?}", other),
            }
        }
        let from_words: BTreeSet<GroupPoint> = common::accepted_words(&a.representatives, 4)
            .iter()
            .map(|w| problem.sigma.expand(w))
            .filter(|x| x.degree_height() <= bound)
            .collect();
        prop_assert_eq!(described, from_words);
    }
}

#[test]
fn variety_parse_accepts_laurent_terms() {
    let s = shape();
    let p = parse_kpoly("y1^-1 - t", s.coords(), &s.laurent_vars());
    assert!(p.is_ok());
}
