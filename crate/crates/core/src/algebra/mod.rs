//! Exact arithmetic in F_q, F_q[t_1..t_k] and K = F_q(t_1..t_k): Frobenius
//! powers, q-th roots, lambda operators and the W-height.

pub mod field;
pub mod height;
pub mod kpoly;
pub mod lambda;
pub mod parse;
pub mod poly;
pub mod ratfunc;

pub use field::FqField;
pub use height::{height, lambda_height_offset, HeightContext};
pub use kpoly::{KMono, KPoly, KPolyRing, KRing};
pub use lambda::{lambda_apply, lambda_split, lambda_word_apply, LambdaBasis};
pub use parse::{parse_kpoly, parse_poly, parse_ratfunc};
pub use poly::{gcd, Mono, Poly, PolyRing, Ring};
pub use ratfunc::RatFunc;

/// x^{q^n}.
pub fn frobenius_power(x: &RatFunc, n: u32) -> RatFunc {
    x.frobenius(n)
}

/// The q-th root of x when x lies in K^q.
pub fn qth_root(x: &RatFunc) -> Option<RatFunc> {
    x.qth_root()
}
