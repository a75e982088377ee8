//! Shared generators for the integration suites.
#![allow(dead_code)]

use num_rational::BigRational;
use ppvkit::matrix::Matrix;
use ppvkit::ore::OreOperator;
use ppvkit::rat::{ParamRat, Rat, Var, Vars};
use proptest::prelude::*;

pub fn vars() -> Vars {
    Vars::with_params(&["t"])
}

pub fn x() -> Rat {
    Rat::var(Var::MAIN)
}

pub fn t() -> Rat {
    Rat::var(Var::param(0))
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// `Σ c·x^a·t^b` from `(c, a, b)` triples.
pub fn poly_from(terms: &[(i64, u32, u32)]) -> Rat {
    terms.iter().fold(Rat::zero(), |acc, &(c, a, b)| {
        let m = &x().pow(a as i32).unwrap() * &t().pow(b as i32).unwrap();
        &acc + &(&m * &Rat::from_int(c))
    })
}

pub fn small_poly() -> impl Strategy<Value = Rat> {
    prop::collection::vec((-3i64..=3, 0u32..=2, 0u32..=2), 1..4).prop_map(|v| poly_from(&v))
}

pub fn nonzero_poly() -> impl Strategy<Value = Rat> {
    small_poly().prop_map(|p| if p.is_zero() { Rat::one() } else { p })
}

pub fn rat() -> impl Strategy<Value = Rat> {
    (small_poly(), nonzero_poly()).prop_map(|(n, d)| &n / &d)
}

/// Linear factors `x − c(t)` whose roots lie in Q(t).
pub fn linear_factor(i: usize) -> Rat {
    let roots = [
        Rat::zero(),
        Rat::one(),
        Rat::from_int(-2),
        t(),
        &t() * &Rat::from_int(2),
        &(-&t()) - &Rat::one(),
    ];
    &x() - &roots[i % roots.len()]
}

/// Rational functions whose denominators split over Q(t).
pub fn split_rat() -> impl Strategy<Value = Rat> {
    (small_poly(), prop::collection::vec(0usize..6, 0..4)).prop_map(|(n, fs)| {
        let d = fs.iter().fold(Rat::one(), |acc, &i| &acc * &linear_factor(i));
        &n / &d
    })
}

pub fn param_poly() -> impl Strategy<Value = ParamRat> {
    prop::collection::vec((-3i64..=3, 0u32..=2), 1..3)
        .prop_map(|v| ParamRat::try_from(poly_from(&v.iter().map(|&(c, b)| (c, 0, b)).collect::<Vec<_>>())).unwrap())
}

pub fn param_rat() -> impl Strategy<Value = ParamRat> {
    (param_poly(), param_poly()).prop_map(|(n, d)| if d.is_zero() { n } else { n.checked_div(&d).unwrap() })
}

pub fn nonzero_param_rat() -> impl Strategy<Value = ParamRat> {
    param_rat().prop_map(|p| if p.is_zero() { ParamRat::one() } else { p })
}

pub fn operator() -> impl Strategy<Value = OreOperator> {
    prop::collection::vec(param_rat(), 1..4).prop_map(|c| OreOperator::new(Var::param(0), c))
}

pub fn nonzero_operator() -> impl Strategy<Value = OreOperator> {
    (prop::collection::vec(param_rat(), 0..3), nonzero_param_rat()).prop_map(|(mut c, lead)| {
        c.push(lead);
        OreOperator::new(Var::param(0), c)
    })
}

pub fn matrix_of(rows: Vec<Vec<Rat>>) -> Matrix {
    Matrix::from_rows(rows)
}
