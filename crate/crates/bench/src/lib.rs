//! Shared fixtures for the criterion benchmarks.

use motive_calc_core::{MotiveExpr, TatePolynomial};

/// The right route of the sixfold computation, written in the expression language.
pub const GM_RHS: &str = "Bl(Bl(Prod(Q(6), P(4)), Fib(Hilb2QY, 1), 6), \
                          Bl(Bl(PB(Q(6), 3), PB(K3, 4), 3), Fib(Fib(Hilb2QY, 1), 1), 3), 2)";

/// A balanced tree of sums and twists with `2^depth` leaves.
pub fn balanced_expr(depth: u32) -> MotiveExpr {
    if depth == 0 {
        return MotiveExpr::atom("K3");
    }
    let half = balanced_expr(depth - 1);
    (half.clone() + half.twist(TatePolynomial::lefschetz(1))).twist(TatePolynomial::from_dense([1u32, 1]))
}

/// `(1 + L)^n`, whose coefficients grow past 64 bits for large `n`.
pub fn binomial_power(n: u32) -> TatePolynomial {
    let base = TatePolynomial::from_dense([1u32, 1]);
    (0..n).map(|_| base.clone()).product()
}
