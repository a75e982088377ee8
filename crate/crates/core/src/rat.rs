//! Exact rational functions in the main variable and the parameters.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{format_poly, Poly};

/// A variable index. `Var::MAIN` is the main variable `x`; parameters are
/// numbered from 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub usize);

impl Var {
    pub const MAIN: Var = Var(0);

    pub fn param(i: usize) -> Var {
        Var(i + 1)
    }

    pub fn is_main(self) -> bool {
        self.0 == 0
    }
}

/// Names for the main variable and the parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vars {
    names: Vec<String>,
}

impl Vars {
    pub fn new<S: AsRef<str>>(main: &str, params: &[S]) -> Self {
        let mut names = vec![main.to_string()];
        names.extend(params.iter().map(|p| p.as_ref().to_string()));
        Vars { names }
    }

    /// `x` together with the given parameters.
    pub fn with_params<S: AsRef<str>>(params: &[S]) -> Self {
        Vars::new("x", params)
    }

    pub fn var(&self, name: &str) -> Result<Var> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(Var)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn name(&self, v: Var) -> &str {
        &self.names[v.0]
    }

    pub fn main_name(&self) -> &str {
        &self.names[0]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn param_names(&self) -> &[String] {
        &self.names[1..]
    }

    pub fn num_params(&self) -> usize {
        self.names.len() - 1
    }

    pub fn params(&self) -> impl Iterator<Item = Var> {
        (1..self.names.len()).map(Var)
    }

    /// Partial derivative with respect to a named variable.
    pub fn derive(&self, name: &str, f: &Rat) -> Result<Rat> {
        Ok(f.derive(self.var(name)?))
    }
}

/// A rational function `numer / denom` in canonical form: the two
/// polynomials are coprime and the denominator has leading coefficient 1
/// under the graded lexicographic order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rat {
    numer: Poly,
    denom: Poly,
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})/({:?})", self.numer, self.denom)
    }
}

impl Default for Rat {
    fn default() -> Self {
        Rat::zero()
    }
}

impl Rat {
    pub fn zero() -> Self {
        Rat {
            numer: Poly::zero(),
            denom: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Rat::from_poly(Poly::one())
    }

    pub fn from_int(n: i64) -> Self {
        Rat::from_poly(Poly::from_int(n))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Rat::constant(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn constant(c: BigRational) -> Self {
        Rat::from_poly(Poly::constant(c))
    }

    pub fn var(v: Var) -> Self {
        Rat::from_poly(Poly::var(v.0))
    }

    pub fn from_poly(p: Poly) -> Self {
        Rat {
            numer: p,
            denom: Poly::one(),
        }
    }

    /// Builds `n / d` and brings it to canonical form.
    pub fn new(n: Poly, d: Poly) -> Result<Self> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat::canonical(n, d))
    }

    fn canonical(n: Poly, d: Poly) -> Self {
        if n.is_zero() {
            return Rat::zero();
        }
        if let Some(c) = d.constant_value() {
            return Rat {
                numer: n.scale(&c.recip()),
                denom: Poly::one(),
            };
        }
        let g = n.gcd(&d);
        let (n, d) = if g.is_one() {
            (n, d)
        } else {
            (
                n.exact_div(&g).expect("gcd divides numerator"),
                d.exact_div(&g).expect("gcd divides denominator"),
            )
        };
        let lc = d.leading_coeff();
        if lc.is_one() {
            Rat { numer: n, denom: d }
        } else {
            let inv = lc.recip();
            Rat {
                numer: n.scale(&inv),
                denom: d.scale(&inv),
            }
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.numer
    }

    pub fn denom(&self) -> &Poly {
        &self.denom
    }

    pub fn is_zero(&self) -> bool {
        self.numer.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.denom.is_one() && self.numer.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.denom.is_one() && self.numer.is_constant()
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        if self.denom.is_one() {
            self.numer.constant_value()
        } else {
            None
        }
    }

    /// Term count of numerator and denominator; a cheap complexity measure.
    pub fn size(&self) -> usize {
        self.numer.num_terms() + self.denom.num_terms()
    }

    pub fn is_polynomial(&self) -> bool {
        self.denom.is_one()
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.numer.contains_var(v.0) || self.denom.contains_var(v.0)
    }

    /// True when the main variable does not occur.
    pub fn is_param_only(&self) -> bool {
        !self.contains_var(Var::MAIN)
    }

    /// All variable indices that occur.
    pub fn vars(&self) -> Vec<Var> {
        let mut v = self.numer.vars();
        for i in self.denom.vars() {
            if !v.contains(&i) {
                v.push(i);
            }
        }
        v.sort_unstable();
        v.into_iter().map(Var).collect()
    }

    pub fn inv(&self) -> Result<Rat> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat::canonical(self.denom.clone(), self.numer.clone()))
    }

    pub fn checked_div(&self, other: &Rat) -> Result<Rat> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat::canonical(
            &self.numer * &other.denom,
            &self.denom * &other.numer,
        ))
    }

    pub fn scale(&self, c: &BigRational) -> Rat {
        if c.is_zero() {
            return Rat::zero();
        }
        Rat {
            numer: self.numer.scale(c),
            denom: self.denom.clone(),
        }
    }

    pub fn pow(&self, e: i32) -> Result<Rat> {
        if e >= 0 {
            Ok(Rat {
                numer: self.numer.pow(e as u32),
                denom: self.denom.pow(e as u32),
            })
        } else {
            self.inv()?.pow(-e)
        }
    }

    /// Formal partial derivative.
    pub fn derive(&self, v: Var) -> Rat {
        let dn = self.numer.derive(v.0);
        if self.denom.is_one() {
            return Rat::from_poly(dn);
        }
        let dd = self.denom.derive(v.0);
        if dd.is_zero() {
            return Rat::canonical(dn, self.denom.clone());
        }
        let n = &(&dn * &self.denom) - &(&self.numer * &dd);
        Rat::canonical(n, &self.denom * &self.denom)
    }

    /// Iterated derivative.
    pub fn derive_n(&self, v: Var, n: usize) -> Rat {
        let mut f = self.clone();
        for _ in 0..n {
            f = f.derive(v);
        }
        f
    }

    pub fn substitute(&self, v: Var, value: &BigRational) -> Result<Rat> {
        Rat::new(
            self.numer.substitute(v.0, value),
            self.denom.substitute(v.0, value),
        )
    }

    /// Substitutes a rational function for a variable.
    pub fn compose(&self, v: Var, value: &Rat) -> Result<Rat> {
        // n(value)/d(value), evaluated by Horner in the field.
        let horner = |p: &Poly| -> Rat {
            let mut acc = Rat::zero();
            for c in p.to_univariate(v.0).iter().rev() {
                acc = &(&acc * value) + &Rat::from_poly(c.clone());
            }
            acc
        };
        horner(&self.numer).checked_div(&horner(&self.denom))
    }

    pub fn eval_complex(&self, point: &[Complex64]) -> Result<Complex64> {
        let d = self.denom.eval_complex(point);
        if d.norm() == 0.0 || !d.is_finite() {
            return Err(Error::EvalError("denominator vanishes".into()));
        }
        Ok(self.numer.eval_complex(point) / d)
    }

    /// Whether the numerator's leading coefficient is negative (used for
    /// sign-aware printing).
    pub fn looks_negative(&self) -> bool {
        self.numer.leading_coeff().is_negative()
    }

    pub fn display<'a>(&'a self, vars: &'a Vars) -> RatDisplay<'a> {
        RatDisplay { rat: self, vars }
    }

    /// Text that the expression parser reads back to the same value.
    pub fn to_text(&self, vars: &Vars) -> String {
        self.display(vars).to_string()
    }
}

pub struct RatDisplay<'a> {
    rat: &'a Rat,
    vars: &'a Vars,
}

fn wrap_if_compound(s: String, p: &Poly) -> String {
    // A bare divisor must be one factor: `1/x*t` would parse as `t/x`.
    if p.num_terms() == 1 && !s.contains(['/', '*', '-']) {
        s
    } else {
        format!("({s})")
    }
}

impl fmt::Display for RatDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.vars.names();
        if self.rat.denom.is_one() {
            return f.write_str(&format_poly(&self.rat.numer, names));
        }
        // Fractional numerator coefficients move into the denominator.
        let l = BigRational::from_integer(self.rat.numer.coeff_denominator_lcm());
        let (numer, denom) = (self.rat.numer.scale(&l), self.rat.denom.scale(&l));
        let n = format_poly(&numer, names);
        let d = format_poly(&denom, names);
        let n = if numer.num_terms() == 1 {
            n
        } else {
            format!("({n})")
        };
        write!(f, "{}/{}", n, wrap_if_compound(d, &denom))
    }
}

impl Add for &Rat {
    type Output = Rat;
    fn add(self, rhs: &Rat) -> Rat {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.denom == rhs.denom {
            return Rat::canonical(&self.numer + &rhs.numer, self.denom.clone());
        }
        // Only factors of g = gcd(d1, d2) can cancel from the sum.
        let g = self.denom.gcd(&rhs.denom);
        let (d1, d2) = if g.is_one() {
            (self.denom.clone(), rhs.denom.clone())
        } else {
            (
                self.denom.exact_div(&g).expect("gcd divides"),
                rhs.denom.exact_div(&g).expect("gcd divides"),
            )
        };
        let t = &(&self.numer * &d2) + &(&rhs.numer * &d1);
        if t.is_zero() {
            return Rat::zero();
        }
        let den = &d1 * &rhs.denom;
        if g.is_one() {
            return Rat { numer: t, denom: den };
        }
        let h = t.gcd(&g);
        if h.is_one() {
            Rat { numer: t, denom: den }
        } else {
            Rat {
                numer: t.exact_div(&h).expect("gcd divides"),
                denom: den.exact_div(&h).expect("gcd divides"),
            }
        }
    }
}

impl Sub for &Rat {
    type Output = Rat;
    fn sub(self, rhs: &Rat) -> Rat {
        self + &(-rhs)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat {
            numer: -&self.numer,
            denom: self.denom.clone(),
        }
    }
}

impl Mul for &Rat {
    type Output = Rat;
    fn mul(self, rhs: &Rat) -> Rat {
        if self.is_zero() || rhs.is_zero() {
            return Rat::zero();
        }
        if self.denom.is_one() && rhs.denom.is_one() {
            return Rat::from_poly(&self.numer * &rhs.numer);
        }
        // Cross-cancel; both quotients stay reduced and monic.
        let cancel = |n: &Poly, d: &Poly| -> (Poly, Poly) {
            let g = n.gcd(d);
            if g.is_one() {
                (n.clone(), d.clone())
            } else {
                (n.exact_div(&g).expect("gcd divides"), d.exact_div(&g).expect("gcd divides"))
            }
        };
        let (n1, d2) = cancel(&self.numer, &rhs.denom);
        let (n2, d1) = cancel(&rhs.numer, &self.denom);
        Rat {
            numer: &n1 * &n2,
            denom: &d1 * &d2,
        }
    }
}

/// Panics on division by zero; use [`Rat::checked_div`] for a `Result`.
impl Div for &Rat {
    type Output = Rat;
    fn div(self, rhs: &Rat) -> Rat {
        self.checked_div(rhs).expect("division by zero")
    }
}

macro_rules! forward_owned {
    ($ty:ident, $tr:ident, $m:ident) => {
        impl $tr for $ty {
            type Output = $ty;
            fn $m(self, rhs: $ty) -> $ty {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&$ty> for $ty {
            type Output = $ty;
            fn $m(self, rhs: &$ty) -> $ty {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Rat, Add, add);
forward_owned!(Rat, Sub, sub);
forward_owned!(Rat, Mul, mul);
forward_owned!(Rat, Div, div);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        -&self
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_int(n)
    }
}

/// The arithmetic operations of the field, as named operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn arith(op: ArithOp, f: &Rat, g: &Rat) -> Result<Rat> {
    Ok(match op {
        ArithOp::Add => f + g,
        ArithOp::Sub => f - g,
        ArithOp::Mul => f * g,
        ArithOp::Div => f.checked_div(g)?,
    })
}

/// A rational function in the parameters only.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ParamRat(Rat);

impl fmt::Debug for ParamRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl ParamRat {
    pub fn zero() -> Self {
        ParamRat(Rat::zero())
    }

    pub fn one() -> Self {
        ParamRat(Rat::one())
    }

    pub fn from_int(n: i64) -> Self {
        ParamRat(Rat::from_int(n))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        ParamRat(Rat::from_ratio(n, d))
    }

    pub fn constant(c: BigRational) -> Self {
        ParamRat(Rat::constant(c))
    }

    /// The parameter itself. Panics for the main variable.
    pub fn param(v: Var) -> Self {
        assert!(!v.is_main(), "ParamRat cannot hold the main variable");
        ParamRat(Rat::var(v))
    }

    pub fn as_rat(&self) -> &Rat {
        &self.0
    }

    pub fn into_rat(self) -> Rat {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.0.is_constant()
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        self.0.constant_value()
    }

    pub fn inv(&self) -> Result<ParamRat> {
        self.0.inv().map(ParamRat)
    }

    pub fn checked_div(&self, other: &ParamRat) -> Result<ParamRat> {
        self.0.checked_div(&other.0).map(ParamRat)
    }

    pub fn scale(&self, c: &BigRational) -> ParamRat {
        ParamRat(self.0.scale(c))
    }

    pub fn derive(&self, v: Var) -> ParamRat {
        ParamRat(self.0.derive(v))
    }

    pub fn derive_n(&self, v: Var, n: usize) -> ParamRat {
        ParamRat(self.0.derive_n(v, n))
    }

    pub fn looks_negative(&self) -> bool {
        self.0.looks_negative()
    }

    pub fn display<'a>(&'a self, vars: &'a Vars) -> RatDisplay<'a> {
        self.0.display(vars)
    }
}

impl TryFrom<Rat> for ParamRat {
    type Error = Error;
    fn try_from(r: Rat) -> Result<Self> {
        if r.is_param_only() {
            Ok(ParamRat(r))
        } else {
            Err(Error::DependsOnMainVariable)
        }
    }
}

impl From<ParamRat> for Rat {
    fn from(p: ParamRat) -> Rat {
        p.0
    }
}

macro_rules! param_ops {
    ($tr:ident, $m:ident) => {
        impl $tr for &ParamRat {
            type Output = ParamRat;
            fn $m(self, rhs: &ParamRat) -> ParamRat {
                ParamRat((&self.0).$m(&rhs.0))
            }
        }
        forward_owned!(ParamRat, $tr, $m);
    };
}
param_ops!(Add, add);
param_ops!(Sub, sub);
param_ops!(Mul, mul);
param_ops!(Div, div);

impl Neg for &ParamRat {
    type Output = ParamRat;
    fn neg(self) -> ParamRat {
        ParamRat(-&self.0)
    }
}

impl Neg for ParamRat {
    type Output = ParamRat;
    fn neg(self) -> ParamRat {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Rat {
        Rat::var(Var::MAIN)
    }
    fn t() -> Rat {
        Rat::var(Var::param(0))
    }

    #[test]
    fn additive_inverse() {
        let f = &t() / &x();
        assert!((&f + &(-&f)).is_zero());
        assert_eq!(arith(ArithOp::Add, &f, &-&f).unwrap(), Rat::zero());
    }

    #[test]
    fn cancellation() {
        let f = &t() / &x();
        assert_eq!(&f * &x(), t());
    }

    #[test]
    fn difference_of_squares_divides() {
        let num = &(&x() * &x()) - &(&t() * &t());
        let den = &x() - &t();
        assert_eq!(arith(ArithOp::Div, &num, &den).unwrap(), &x() + &t());
    }

    #[test]
    fn division_by_zero_is_error() {
        assert_eq!(
            arith(ArithOp::Div, &x(), &Rat::zero()),
            Err(Error::DivisionByZero)
        );
        assert!(Rat::zero().inv().is_err());
    }

    #[test]
    fn derivatives() {
        let vars = Vars::with_params(&["t"]);
        let f = &t() / &x();
        assert_eq!(
            vars.derive("x", &f).unwrap(),
            -(&t() / &(&x() * &x()))
        );
        assert_eq!(vars.derive("t", &f).unwrap(), &Rat::one() / &x());
        assert!(matches!(
            vars.derive("s", &f),
            Err(Error::UnknownVariable(_))
        ));
    }

    #[test]
    fn canonical_denominator_is_monic() {
        let f = Rat::new(Poly::var(1), Poly::var(0).scale(&BigRational::from_integer(3.into())))
            .unwrap();
        assert!(f.denom().leading_coeff().is_one());
        assert_eq!(f, &(&t() / &x()) * &Rat::from_ratio(1, 3));
    }

    #[test]
    fn display() {
        let vars = Vars::with_params(&["t"]);
        let f = &(&x() + &t()) / &(&x() * &x() - Rat::one());
        assert_eq!(f.to_text(&vars), "(x + t)/(x^2 - 1)");
        assert_eq!((&t() / &x()).to_text(&vars), "t/x");
        assert_eq!(Rat::from_ratio(-2, 3).to_text(&vars), "-2/3");
    }

    #[test]
    fn param_rat_rejects_main_variable() {
        assert!(ParamRat::try_from(x()).is_err());
        assert!(ParamRat::try_from(t()).is_ok());
    }
}
