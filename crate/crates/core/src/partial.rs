//! Partial fractions and Hermite reduction in the main variable.

use crate::error::{Error, Result};
use crate::rat::{Rat, Var, Vars};
use crate::upoly::{series, UPoly};

/// One term `coeff / (x - root)^order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoleTerm {
    pub root: Rat,
    pub order: usize,
    pub coeff: Rat,
}

impl PoleTerm {
    pub fn to_rat(&self) -> Rat {
        let base = &Rat::var(Var::MAIN) - &self.root;
        &self.coeff / &base.pow(self.order as i32).expect("nonzero base")
    }
}

/// Decomposition `f = polynomial + Σ pole terms + unsplit`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialFractionForm {
    /// Polynomial part, coefficients free of `x`.
    pub polynomial: UPoly,
    /// Grouped by root, ascending order within a root.
    pub poles: Vec<PoleTerm>,
    /// Part whose denominator has no root in the parameter field.
    pub unsplit: Option<Rat>,
}

impl PartialFractionForm {
    pub fn recombine(&self) -> Rat {
        let mut acc = self.polynomial.to_rat(Var::MAIN);
        for p in &self.poles {
            acc = &acc + &p.to_rat();
        }
        if let Some(u) = &self.unsplit {
            acc = &acc + u;
        }
        acc
    }

    /// Distinct roots, in order of first appearance.
    pub fn roots(&self) -> Vec<Rat> {
        let mut out: Vec<Rat> = Vec::new();
        for p in &self.poles {
            if !out.contains(&p.root) {
                out.push(p.root.clone());
            }
        }
        out
    }

    /// Highest pole order at `root` (0 if absent).
    pub fn order_at(&self, root: &Rat) -> usize {
        self.poles
            .iter()
            .filter(|p| &p.root == root)
            .map(|p| p.order)
            .max()
            .unwrap_or(0)
    }

    /// Coefficient of `1/(x - root)^order` (zero if absent).
    pub fn coeff(&self, root: &Rat, order: usize) -> Rat {
        self.poles
            .iter()
            .find(|p| &p.root == root && p.order == order)
            .map(|p| p.coeff.clone())
            .unwrap_or_default()
    }

    /// Simple-pole residues `(root, residue)`, nonzero only.
    pub fn residues(&self) -> Vec<(Rat, Rat)> {
        self.poles
            .iter()
            .filter(|p| p.order == 1)
            .map(|p| (p.root.clone(), p.coeff.clone()))
            .collect()
    }

    /// Error out when an irreducible higher-degree factor was carried along.
    pub fn require_split(&self, vars: &Vars) -> Result<()> {
        match &self.unsplit {
            None => Ok(()),
            Some(u) => Err(Error::UnsupportedDenominator {
                factor: Rat::from_poly(u.denom().clone()).to_text(vars),
            }),
        }
    }
}

/// Decomposes `f` in partial fractions over ℚ(t₁..tₘ).
pub fn partial_fractions_x(f: &Rat) -> PartialFractionForm {
    let (num, den) = UPoly::split_rat(f);
    let (poly_part, rem) = num.divrem(&den);
    let den_monic_inv = den.lc().inv().expect("nonzero denominator");
    let rem = rem.scale(&den_monic_inv);
    let den = den.monic();
    let mut poles = Vec::new();
    let mut remaining_den = den.clone();
    if den.degree().unwrap_or(0) > 0 {
        for c in den.param_field_roots() {
            let m = den.multiplicity(&c);
            let factor = UPoly::linear(&c).pow(m);
            let cofactor = den.divrem(&factor).0;
            remaining_den = remaining_den.divrem(&factor).0;
            // Laurent coefficients of rem / den at c.
            let r_shift: Vec<Rat> = padded(rem.taylor_shift(&c), m);
            let e_shift: Vec<Rat> = padded(cofactor.taylor_shift(&c), m);
            let h = series::div(&r_shift, &e_shift, m);
            for (k, coeff) in h.into_iter().enumerate() {
                if !coeff.is_zero() {
                    poles.push(PoleTerm {
                        root: c.clone(),
                        order: m - k,
                        coeff,
                    });
                }
            }
        }
    }
    // Deterministic order: roots as found (sorted canonically), then order.
    poles.sort_by_cached_key(|p| (format!("{:?}", p.root), p.order));
    let mut form = PartialFractionForm {
        polynomial: poly_part,
        poles,
        unsplit: None,
    };
    if remaining_den.degree().unwrap_or(0) > 0 {
        let rest = f - &form.recombine();
        if !rest.is_zero() {
            form.unsplit = Some(rest);
        }
    }
    form
}

fn padded(p: UPoly, n: usize) -> Vec<Rat> {
    let mut v = p.coeffs().to_vec();
    v.resize(n, Rat::zero());
    v.truncate(n);
    v
}

/// `f = ∂ₓR + residual` where the residual has only simple poles and no
/// polynomial part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermiteReduction {
    pub integral: Rat,
    pub residual: Rat,
    /// Simple-pole residues `(c, b)` of the residual.
    pub residues: Vec<(Rat, Rat)>,
}

pub fn hermite_reduce_x(f: &Rat, vars: &Vars) -> Result<HermiteReduction> {
    let form = partial_fractions_x(f);
    form.require_split(vars)?;
    let x = Rat::var(Var::MAIN);
    // Antiderivative of the polynomial part.
    let mut integral = Rat::zero();
    for (k, c) in form.polynomial.coeffs().iter().enumerate() {
        let term = c * &x.pow(k as i32 + 1)?;
        integral = &integral + &term.scale(&num_rational::BigRational::new(
            1.into(),
            (k as i64 + 1).into(),
        ));
    }
    let mut residual = Rat::zero();
    let mut residues = Vec::new();
    for p in &form.poles {
        if p.order == 1 {
            residual = &residual + &p.to_rat();
            residues.push((p.root.clone(), p.coeff.clone()));
        } else {
            let j = p.order as i64;
            let antideriv = PoleTerm {
                root: p.root.clone(),
                order: p.order - 1,
                coeff: p.coeff.scale(&num_rational::BigRational::new(
                    (-1).into(),
                    (j - 1).into(),
                )),
            };
            integral = &integral + &antideriv.to_rat();
        }
    }
    Ok(HermiteReduction {
        integral,
        residual,
        residues,
    })
}
