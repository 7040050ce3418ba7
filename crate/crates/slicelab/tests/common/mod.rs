//! Shared builders for the integration test targets.
#![allow(dead_code)]

use slicelab::clifford::Multivector;
use slicelab::scalar::{Rat, Scalar};
use slicelab::slice::SliceFunction;
use slicelab::stem::{LaurentPoly, Monomial, StemPolynomial};

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::from_ratio(num, den)
}

pub fn sc(m: u32, num: i64, den: i64) -> Multivector<Rat> {
    Multivector::scalar(m, rat(num, den)).unwrap()
}

/// One rational term: interleaved exponents [a₁, b₁, …, a_n, b_n] with a
/// num/den coefficient.
pub type TermSpec = (Vec<i32>, i64, i64);

/// Laurent polynomial from interleaved exponent vectors
/// [a₁, b₁, …, a_n, b_n] with rational coefficients.
pub fn poly(m: u32, n: u32, terms: &[TermSpec]) -> LaurentPoly<Rat> {
    let mut p = LaurentPoly::zero(m, n).unwrap();
    for (exps, num, den) in terms {
        p.add_term(Monomial(exps.clone()), sc(m, *num, *den)).unwrap();
    }
    p
}

/// Slice function from explicit stem components keyed by variable subset.
pub fn func(m: u32, n: u32, comps: &[(u32, Vec<TermSpec>)]) -> SliceFunction<Rat> {
    let mut stem = StemPolynomial::zero(m, n).unwrap();
    for (k, terms) in comps {
        stem.set_component(*k, poly(m, n, terms)).unwrap();
    }
    SliceFunction::new_laurent(stem).unwrap()
}

/// The ordered power product x₁^{e₁} ⊙ ⋯ ⊙ x_n^{e_n}.
pub fn x_pow(m: u32, exps: &[u32]) -> SliceFunction<Rat> {
    SliceFunction::monomial(m, exps, sc(m, 1, 1)).unwrap()
}

pub fn assert_same(actual: &SliceFunction<Rat>, expected: &SliceFunction<Rat>) {
    assert!(
        actual.sub(expected).unwrap().is_zero(),
        "functions differ:\n  actual:   {actual:?}\n  expected: {expected:?}"
    );
}
