//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use moncore::monomials::weighted_at_least;
use moncore::{FieldSpec, MonomialIdeal, RingContext};

pub fn ring(d: usize, field: FieldSpec) -> Arc<RingContext> {
    Arc::new(RingContext::standard(d, field))
}

/// `(x^6, x^5 y^3, x^4 y^4, x^2 y^8, y^9)`.
pub fn two_variable(field: FieldSpec) -> MonomialIdeal {
    let r = ring(2, field);
    MonomialIdeal::minimalize(&r, [[6, 0], [5, 3], [4, 4], [2, 8], [0, 9]].map(|g| g.to_vec()))
}

/// `(x^3, y^4, z^5)`.
pub fn three_powers() -> MonomialIdeal {
    MonomialIdeal::pure_powers(&ring(3, FieldSpec::Rational), &[3, 4, 5])
}

/// `(x^n, y^n, z^n, x^{n-k} y^k, x^{n-l} z^l, y^{n-m} z^m)`.
pub fn three_variable_shape(n: u64, k: u64, l: u64, m: u64) -> MonomialIdeal {
    let r = ring(3, FieldSpec::Rational);
    let gens = [[n, 0, 0], [0, n, 0], [0, 0, n], [n - k, k, 0], [n - l, 0, l], [0, n - m, m]];
    MonomialIdeal::minimalize(&r, gens.map(|g| g.to_vec()))
}

/// `S_{>=n}` of `k[x^{a_1}, ...]` in subring coordinates.
pub fn weighted(weights: &[u64], n: u64) -> MonomialIdeal {
    let r = Arc::new(
        RingContext::standard(weights.len(), FieldSpec::Rational).with_weights(weights.to_vec()).unwrap(),
    );
    weighted_at_least(&r, n).unwrap()
}
