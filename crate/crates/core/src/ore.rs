//! Linear differential operators `Σ aᵢ ∂ⁱ` over ℚ(t₁..tₘ) for one
//! designated parameter derivation, with the rule `∂·a = a∂ + ∂(a)`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::matrix::{solve_linear, Matrix};
use crate::parser::{parse_ast, Ast};
use crate::rat::{ParamRat, Rat, Var, Vars};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OreOperator {
    deriv: Var,
    /// `coeffs[i]` multiplies `∂ⁱ`; empty for the zero operator.
    coeffs: Vec<ParamRat>,
}

impl fmt::Debug for OreOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ore[{:?}]{:?}", self.deriv, self.coeffs)
    }
}

impl OreOperator {
    pub fn new(deriv: Var, mut coeffs: Vec<ParamRat>) -> Self {
        assert!(!deriv.is_main(), "operators act on parameters");
        while coeffs.last().is_some_and(ParamRat::is_zero) {
            coeffs.pop();
        }
        OreOperator { deriv, coeffs }
    }

    pub fn zero(deriv: Var) -> Self {
        OreOperator::new(deriv, Vec::new())
    }

    pub fn one(deriv: Var) -> Self {
        OreOperator::scalar(deriv, ParamRat::one())
    }

    pub fn scalar(deriv: Var, a: ParamRat) -> Self {
        OreOperator::new(deriv, vec![a])
    }

    /// `∂`
    pub fn d(deriv: Var) -> Self {
        OreOperator::new(deriv, vec![ParamRat::zero(), ParamRat::one()])
    }

    /// `∂ - a`
    pub fn d_minus(deriv: Var, a: ParamRat) -> Self {
        OreOperator::new(deriv, vec![-a, ParamRat::one()])
    }

    pub fn deriv(&self) -> Var {
        self.deriv
    }

    pub fn coeffs(&self) -> &[ParamRat] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> ParamRat {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero operator.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> ParamRat {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    fn same_deriv(&self, other: &OreOperator) -> Result<()> {
        if self.deriv == other.deriv {
            Ok(())
        } else {
            Err(Error::MixedDerivations)
        }
    }

    pub fn add(&self, other: &OreOperator) -> Result<OreOperator> {
        self.same_deriv(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        Ok(OreOperator::new(
            self.deriv,
            (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect(),
        ))
    }

    pub fn sub(&self, other: &OreOperator) -> Result<OreOperator> {
        self.same_deriv(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        Ok(OreOperator::new(
            self.deriv,
            (0..n).map(|i| self.coeff(i) - other.coeff(i)).collect(),
        ))
    }

    pub fn neg(&self) -> OreOperator {
        OreOperator::new(self.deriv, self.coeffs.iter().map(|c| -c).collect())
    }

    /// Left multiplication by a scalar: `a·L`.
    pub fn scale_left(&self, a: &ParamRat) -> OreOperator {
        OreOperator::new(self.deriv, self.coeffs.iter().map(|c| a * c).collect())
    }

    /// Composition `self ∘ other`.
    pub fn mul(&self, other: &OreOperator) -> Result<OreOperator> {
        self.same_deriv(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(OreOperator::zero(self.deriv));
        }
        let d = self.deriv;
        let max_i = self.coeffs.len() - 1;
        // derivs[j][k] = ∂^k(b_j)
        let derivs: Vec<Vec<ParamRat>> = other
            .coeffs
            .iter()
            .map(|b| {
                let mut v = Vec::with_capacity(max_i + 1);
                let mut cur = b.clone();
                for _ in 0..=max_i {
                    let next = cur.derive(d);
                    v.push(cur);
                    cur = next;
                }
                v
            })
            .collect();
        let mut out = vec![ParamRat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, bd) in derivs.iter().enumerate() {
                let mut binom = BigInt::one();
                for (k, bk) in bd.iter().enumerate().take(i + 1) {
                    if !bk.is_zero() {
                        let term = (a * bk).scale(&BigRational::from_integer(binom.clone()));
                        out[i - k + j] = &out[i - k + j] + &term;
                    }
                    binom = binom * BigInt::from(i - k) / BigInt::from(k + 1);
                }
            }
        }
        Ok(OreOperator::new(d, out))
    }

    pub fn pow(&self, e: u32) -> OreOperator {
        let mut acc = OreOperator::one(self.deriv);
        for _ in 0..e {
            acc = acc.mul(self).expect("same derivation");
        }
        acc
    }

    /// `Σ aᵢ ∂ⁱ(f)`
    pub fn apply(&self, f: &ParamRat) -> ParamRat {
        let mut acc = ParamRat::zero();
        let mut cur = f.clone();
        for (i, a) in self.coeffs.iter().enumerate() {
            if !a.is_zero() {
                acc = &acc + &(a * &cur);
            }
            if i + 1 < self.coeffs.len() {
                cur = cur.derive(self.deriv);
            }
        }
        acc
    }

    /// Leading coefficient 1 (the zero operator stays zero).
    pub fn monic(&self) -> OreOperator {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.leading_coeff().inv().expect("nonzero leading coefficient");
        self.scale_left(&inv)
    }

    /// `self = q·divisor + r` with `ord r < ord divisor`.
    pub fn right_divide(&self, divisor: &OreOperator) -> Result<(OreOperator, OreOperator)> {
        self.same_deriv(divisor)?;
        let Some(dd) = divisor.order() else {
            return Err(Error::ZeroOperator);
        };
        let lc_inv = divisor.leading_coeff().inv()?;
        let mut q = OreOperator::zero(self.deriv);
        let mut r = self.clone();
        while let Some(dr) = r.order() {
            if dr < dd {
                break;
            }
            let mut c = vec![ParamRat::zero(); dr - dd + 1];
            c[dr - dd] = &r.leading_coeff() * &lc_inv;
            let term = OreOperator::new(self.deriv, c);
            r = r.sub(&term.mul(divisor)?)?;
            // Guard against cancellation failure leaving the order unchanged.
            debug_assert!(r.order().map_or(true, |o| o < dr));
            q = q.add(&term)?;
        }
        Ok((q, r))
    }

    /// Whether `divisor` is a right factor.
    pub fn right_divisible_by(&self, divisor: &OreOperator) -> Result<bool> {
        Ok(self.right_divide(divisor)?.1.is_zero())
    }

    pub fn display<'a>(&'a self, vars: &'a Vars) -> OreDisplay<'a> {
        OreDisplay { op: self, vars }
    }

    pub fn to_text(&self, vars: &Vars) -> String {
        self.display(vars).to_string()
    }
}

/// Greatest common right divisor, monic.
pub fn gcrd(l: &OreOperator, m: &OreOperator) -> Result<OreOperator> {
    l.same_deriv(m)?;
    if l.is_zero() && m.is_zero() {
        return Err(Error::ZeroOperator);
    }
    let (mut a, mut b) = (l.clone(), m.clone());
    while !b.is_zero() {
        let (_, r) = a.right_divide(&b)?;
        a = b;
        b = r.monic();
    }
    Ok(a.monic())
}

/// Least common left multiple, monic. `lclm(0, M) = 0`.
///
/// Its order is `ord l + ord m − ord gcrd(l, m)`, so the cofactors come from
/// one linear system `U·l = V·m` with `U` monic; the extended Euclidean
/// cofactors swell far more.
pub fn lclm(l: &OreOperator, m: &OreOperator) -> Result<OreOperator> {
    l.same_deriv(m)?;
    if l.is_zero() && m.is_zero() {
        return Err(Error::ZeroOperator);
    }
    let (Some(a), Some(b)) = (l.order(), m.order()) else {
        return Ok(OreOperator::zero(l.deriv));
    };
    let g = gcrd(l, m)?.order().expect("gcrd of nonzero operators");
    let k = a + b - g;
    let d = OreOperator::d(l.deriv);
    let padded = |op: &OreOperator| -> Vec<Rat> {
        (0..=k).map(|i| op.coeff(i).into_rat()).collect()
    };
    // Left multiples D^i·l and D^j·m, each with k + 1 coefficients.
    let mut lefts = vec![l.clone()];
    for _ in 0..k - a {
        lefts.push(d.mul(lefts.last().expect("nonempty"))?);
    }
    let mut rights = vec![m.clone()];
    for _ in 0..k - b {
        rights.push(d.mul(rights.last().expect("nonempty"))?);
    }
    let top = lefts.pop().expect("nonempty");
    let mut cols: Vec<Vec<Rat>> = lefts.iter().map(padded).collect();
    cols.extend(rights.iter().map(|r| padded(&r.neg())));
    let rhs: Vec<Rat> = padded(&top.neg());
    let rows: Vec<Vec<Rat>> = (0..=k).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    let z = if cols.is_empty() {
        Vec::new()
    } else {
        solve_linear(&Matrix::from_rows(rows), &rhs).expect("the lclm has the predicted order")
    };
    let mut out = top;
    for (op, c) in lefts.iter().zip(&z) {
        let c = ParamRat::try_from(c.clone())?;
        out = out.add(&op.scale_left(&c))?;
    }
    Ok(out.monic())
}

/// Result of [`annihilator_of_span`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Annihilator {
    pub operator: OreOperator,
    /// Set when every generator was zero and the identity was returned.
    pub all_zero: bool,
}

/// The Wronskian matrix `W[i][j] = ∂^i(g_j)` of size `k × k`.
pub fn wronskian_matrix(deriv: Var, gens: &[ParamRat]) -> Matrix {
    let k = gens.len();
    let mut rows = vec![Vec::with_capacity(k); k];
    for g in gens {
        let mut cur = g.as_rat().clone();
        for row in rows.iter_mut() {
            let next = cur.derive(deriv);
            row.push(cur);
            cur = next;
        }
    }
    Matrix::from_rows(rows)
}

/// Dimension of the span of `gens` over the constants of `deriv`.
pub fn wronskian_rank(deriv: Var, gens: &[ParamRat]) -> usize {
    let nonzero: Vec<ParamRat> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    independent_subset(deriv, &nonzero).len()
}

fn independent_subset(deriv: Var, gens: &[ParamRat]) -> Vec<ParamRat> {
    let mut basis: Vec<ParamRat> = Vec::new();
    for g in gens {
        let mut trial = basis.clone();
        trial.push(g.clone());
        if !wronskian_matrix(deriv, &trial).det().is_zero() {
            basis = trial;
        }
    }
    basis
}

/// The monic operator of least order annihilating every generator, built
/// from bordered Wronskian determinants of a maximal independent subset.
pub fn annihilator_of_span(deriv: Var, gens: &[ParamRat]) -> Annihilator {
    let nonzero: Vec<ParamRat> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if nonzero.is_empty() {
        return Annihilator {
            operator: OreOperator::one(deriv),
            all_zero: true,
        };
    }
    let basis = independent_subset(deriv, &nonzero);
    let r = basis.len();
    // Rows: derivative orders 0..=r; columns: basis elements.
    let mut full = vec![Vec::with_capacity(r); r + 1];
    for g in &basis {
        let mut cur = g.as_rat().clone();
        for row in full.iter_mut() {
            let next = cur.derive(deriv);
            row.push(cur);
            cur = next;
        }
    }
    let minor = |skip: usize| -> Rat {
        let rows: Vec<Vec<Rat>> = full
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != skip)
            .map(|(_, row)| row.clone())
            .collect();
        Matrix::from_rows(rows).det()
    };
    let w = minor(r);
    let mut coeffs = Vec::with_capacity(r + 1);
    for i in 0..r {
        let sign = if (r - i) % 2 == 0 { Rat::one() } else { Rat::from_int(-1) };
        let c = &(&sign * &minor(i)) / &w;
        coeffs.push(ParamRat::try_from(c).expect("parameter-only"));
    }
    coeffs.push(ParamRat::one());
    Annihilator {
        operator: OreOperator::new(deriv, coeffs),
        all_zero: false,
    }
}

pub struct OreDisplay<'a> {
    op: &'a OreOperator,
    vars: &'a Vars,
}

impl fmt::Display for OreDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.op.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.op.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.looks_negative();
            let abs = if neg { -c } else { c.clone() };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let d = match i {
                0 => String::new(),
                1 => "D".to_string(),
                k => format!("D^{k}"),
            };
            let text = abs.as_rat().to_text(self.vars);
            if i == 0 {
                f.write_str(&text)?;
            } else if abs.is_one() {
                f.write_str(&d)?;
            } else if abs.as_rat().numer().num_terms() > 1 && abs.as_rat().is_polynomial() {
                write!(f, "({text})*{d}")?;
            } else {
                write!(f, "{text}*{d}")?;
            }
        }
        Ok(())
    }
}

/// Parses operator text such as `"D^2 - (1/t)*D"`. The symbol `D` stands
/// for the derivation with respect to `deriv`; products are compositions.
pub fn parse_operator(src: &str, vars: &Vars, deriv: Var) -> Result<OreOperator> {
    eval_op(&parse_ast(src)?, vars, deriv)
}

fn eval_op(ast: &Ast, vars: &Vars, deriv: Var) -> Result<OreOperator> {
    let scalar = |r: Rat| OreOperator::scalar(deriv, ParamRat::try_from(r).expect("constant"));
    Ok(match ast {
        Ast::Num(n) => scalar(Rat::constant(BigRational::from_integer(n.clone()))),
        Ast::Ident { name, pos } => {
            if name == "D" {
                OreOperator::d(deriv)
            } else {
                match vars.var(name) {
                    Ok(v) if !v.is_main() => OreOperator::scalar(deriv, ParamRat::param(v)),
                    _ => {
                        return Err(Error::Parse {
                            pos: *pos,
                            msg: format!("unknown identifier `{name}`"),
                        })
                    }
                }
            }
        }
        Ast::Neg(a) => eval_op(a, vars, deriv)?.neg(),
        Ast::Add(a, b) => eval_op(a, vars, deriv)?.add(&eval_op(b, vars, deriv)?)?,
        Ast::Sub(a, b) => eval_op(a, vars, deriv)?.sub(&eval_op(b, vars, deriv)?)?,
        Ast::Mul(a, b) => eval_op(a, vars, deriv)?.mul(&eval_op(b, vars, deriv)?)?,
        Ast::Div(a, b) => {
            let den = eval_op(b, vars, deriv)?;
            if den.order() != Some(0) {
                return Err(Error::Unsupported(
                    "division by an operator of positive order".into(),
                ));
            }
            let inv = OreOperator::scalar(deriv, den.coeff(0).inv()?);
            eval_op(a, vars, deriv)?.mul(&inv)?
        }
        Ast::Pow(a, e) => {
            let base = eval_op(a, vars, deriv)?;
            if *e >= 0 {
                base.pow(*e as u32)
            } else if base.order() == Some(0) {
                let inv = base.coeff(0).inv()?;
                OreOperator::scalar(deriv, inv).pow((-e) as u32)
            } else {
                return Err(Error::Unsupported("negative power of an operator".into()));
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const T: Var = Var(1);

    fn t() -> ParamRat {
        ParamRat::param(T)
    }
    fn d() -> OreOperator {
        OreOperator::d(T)
    }
    fn sc(a: ParamRat) -> OreOperator {
        OreOperator::scalar(T, a)
    }
    fn vars() -> Vars {
        Vars::with_params(&["t"])
    }

    #[test]
    fn commutation_rule() {
        // ∂·t = t∂ + 1
        let p = d().mul(&sc(t())).unwrap();
        assert_eq!(p, OreOperator::new(T, vec![ParamRat::one(), t()]));
        assert_eq!(p.to_text(&vars()), "t*D + 1");
        assert_ne!(p, sc(t()).mul(&d()).unwrap());
    }

    #[test]
    fn identity_element() {
        let l = parse_operator("t*D^2 + D - 3", &vars(), T).unwrap();
        assert_eq!(l.mul(&OreOperator::one(T)).unwrap(), l);
        assert_eq!(OreOperator::one(T).mul(&l).unwrap(), l);
    }

    #[test]
    fn product_matches_composition() {
        let one = OreOperator::one(T);
        let a = d().add(&one).unwrap();
        let b = d().sub(&one).unwrap();
        let d2m1 = d().pow(2).sub(&one).unwrap();
        assert_eq!(a.mul(&b).unwrap(), d2m1);
        assert_eq!(b.mul(&a).unwrap(), d2m1);
        for f in [ParamRat::one(), t(), &t() * &t()] {
            assert_eq!(a.mul(&b).unwrap().apply(&f), a.apply(&b.apply(&f)));
        }
    }

    #[test]
    fn division_examples() {
        let (q, r) = d().pow(2).right_divide(&d()).unwrap();
        assert_eq!((q, r.is_zero()), (d(), true));
        let (q, r) = d().right_divide(&d().pow(2)).unwrap();
        assert!(q.is_zero());
        assert_eq!(r, d());
        let div = OreOperator::d_minus(T, ParamRat::one() / t());
        let l = d().pow(2);
        let (q, r) = l.right_divide(&div).unwrap();
        assert_eq!(q.mul(&div).unwrap().add(&r).unwrap(), l);
        // t ∈ ker ∂², so ∂ − 1/t is a right factor.
        assert!(r.is_zero());
        assert_eq!(d().right_divide(&OreOperator::zero(T)), Err(Error::ZeroOperator));
    }

    #[test]
    fn gcrd_lclm_examples() {
        assert_eq!(gcrd(&d().pow(2), &d()).unwrap(), d());
        assert_eq!(lclm(&d(), &d()).unwrap(), d());
        let l = lclm(&OreOperator::d_minus(T, ParamRat::one() / t()), &d()).unwrap();
        assert_eq!(l.order(), Some(2));
        assert!(l.apply(&t()).is_zero());
        assert!(l.apply(&ParamRat::one()).is_zero());
        assert_eq!(l, d().pow(2));
        assert_eq!(
            gcrd(&OreOperator::zero(T), &OreOperator::zero(T)),
            Err(Error::ZeroOperator)
        );
    }

    #[test]
    fn apply_examples() {
        assert_eq!(d().apply(&t()), ParamRat::one());
        assert!(OreOperator::d_minus(T, ParamRat::one() / t()).apply(&t()).is_zero());
        assert_eq!(d().pow(2).apply(&(&t() * &t())), ParamRat::from_int(2));
    }

    #[test]
    fn annihilator_examples() {
        let a = annihilator_of_span(T, &[t()]);
        assert_eq!(a.operator, OreOperator::d_minus(T, ParamRat::one() / t()));
        let a = annihilator_of_span(T, &[ParamRat::one(), t()]);
        assert_eq!(a.operator, d().pow(2));
        let a = annihilator_of_span(T, &[t(), &t() * &ParamRat::from_int(2)]);
        assert_eq!(a.operator.order(), Some(1));
        assert_eq!(a.operator, OreOperator::d_minus(T, ParamRat::one() / t()));
        let a = annihilator_of_span(T, &[ParamRat::zero()]);
        assert!(a.all_zero && a.operator.is_one());
    }

    #[test]
    fn mixed_derivations_rejected() {
        let other = OreOperator::d(Var(2));
        assert_eq!(d().mul(&other), Err(Error::MixedDerivations));
    }

    #[test]
    fn parse_and_print() {
        let v = vars();
        let l = parse_operator("D^2 - (1/t)*D", &v, T).unwrap();
        assert_eq!(l.to_text(&v), "D^2 - 1/t*D");
        assert_eq!(parse_operator(&l.to_text(&v), &v, T).unwrap(), l);
        assert!(parse_operator("x*D", &v, T).is_err());
        assert_eq!(
            parse_operator("D*t", &v, T).unwrap(),
            OreOperator::new(T, vec![ParamRat::one(), t()])
        );
    }
}
