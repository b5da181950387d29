//! The W-height with W = {polynomials of total degree <= w0}.
//!
//! ht(x) is the least l with x = a/b, a and b in W^l, i.e. both of total
//! degree <= l*w0. Any representation is a common multiple of the reduced
//! one, so the reduced representation minimizes both degrees.

use super::ratfunc::RatFunc;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HeightContext {
    /// Degree scale of W.
    pub w0: u64,
    /// Number of field variables k.
    pub nvars: usize,
    /// The modulus Q of the lambda basis in use (a power of q).
    pub lambda_modulus: u64,
}

impl HeightContext {
    pub fn new(w0: u64, nvars: usize, lambda_modulus: u64) -> Self {
        assert!(w0 >= 1, "w0 must be positive");
        HeightContext { w0, nvars, lambda_modulus }
    }

    /// The smallest admissible w0: at least 1, every digit-coordinate degree,
    /// and k(Q - 1).
    pub fn for_degrees(max_digit_degree: u64, nvars: usize, lambda_modulus: u64) -> Self {
        let w0 = 1.max(max_digit_degree).max(nvars as u64 * (lambda_modulus - 1));
        Self::new(w0, nvars, lambda_modulus)
    }
}

fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

pub fn height(x: &RatFunc, ctx: &HeightContext) -> u64 {
    ceil_div(x.num_degree(), ctx.w0).max(ceil_div(x.den_degree(), ctx.w0))
}

/// D with ht(lambda_j(a)) <= floor(ht(a)/Q) + D on polynomials.
pub fn lambda_height_offset(ctx: &HeightContext) -> u64 {
    ceil_div(ctx.nvars as u64 * (ctx.lambda_modulus - 1), ctx.w0)
}
