//! Parameterized Galois groups of rank-one equations `∂ₓy = a` and
//! `∂ₓy = a·y` over `ℚ(t)(x)` with a single parametric derivation `∂_t`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::groups::{zariski_closure, AlgebraicGroupTag, GaSubgroup, GmSubgroup, Subgroup};
use crate::matrix::Matrix;
use crate::ore::annihilator_of_span;
use crate::partial::hermite_reduce_x;
use crate::poly::Poly;
use crate::rat::{ParamRat, Rat, Var, Vars};
use crate::systems::poly_lcm;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Caveat {
    UpperBoundOnly,
    MixedConstantNonconstantResidues,
    RationalRelationDetected,
}

impl Caveat {
    pub fn as_str(self) -> &'static str {
        match self {
            Caveat::UpperBoundOnly => "UpperBoundOnly",
            Caveat::MixedConstantNonconstantResidues => "MixedConstantNonconstantResidues",
            Caveat::RationalRelationDetected => "RationalRelationDetected",
        }
    }
}

/// What the reduction of `a` left behind.
#[derive(Clone, Debug, PartialEq)]
pub struct ReductionTrace {
    /// `R` with `a − ∂ₓR` having only simple poles.
    pub r: Rat,
    /// Simple-pole residues `(c, b)`.
    pub residues: Vec<(Rat, Rat)>,
    pub exponential_part: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Rank1Answer {
    pub group: Subgroup,
    pub trace: ReductionTrace,
    pub caveats: Vec<Caveat>,
}

impl Rank1Answer {
    pub fn has_caveat(&self, c: Caveat) -> bool {
        self.caveats.contains(&c)
    }

    pub fn render(&self, vars: &Vars) -> String {
        let mut out = format!("group: {}\n", self.group.render(vars));
        out += &format!("R: {}\n", self.trace.r.to_text(vars));
        let res: Vec<String> = self
            .trace
            .residues
            .iter()
            .map(|(c, b)| format!("{} at {}", b.to_text(vars), c.to_text(vars)))
            .collect();
        out += &format!("residues: [{}]\n", res.join(", "));
        out += &format!("exponential part: {}\n", self.trace.exponential_part);
        let flags: Vec<&str> = self.caveats.iter().map(|c| c.as_str()).collect();
        out += &format!("caveats: [{}]", flags.join(", "));
        out
    }

    pub fn to_json(&self, vars: &Vars) -> Value {
        json!({
            "group": self.group.render(vars),
            "trace": {
                "R": self.trace.r.to_text(vars),
                "residues": self.trace.residues.iter().map(|(c, b)| json!({
                    "pole": c.to_text(vars),
                    "residue": b.to_text(vars),
                })).collect::<Vec<_>>(),
                "exponential_part": self.trace.exponential_part,
            },
            "caveats": self.caveats.iter().map(|c| c.as_str()).collect::<Vec<_>>(),
        })
    }
}

fn single_param(vars: &Vars) -> Result<Var> {
    match vars.num_params() {
        1 => Ok(Var::param(0)),
        m => Err(Error::ParameterCount(m)),
    }
}

fn reduce(a: &Rat, vars: &Vars) -> Result<(ReductionTrace, Vec<ParamRat>)> {
    let h = hermite_reduce_x(a, vars)?;
    let residues: Vec<ParamRat> = h
        .residues
        .iter()
        .map(|(_, b)| ParamRat::try_from(b.clone()))
        .collect::<Result<_>>()?;
    let trace = ReductionTrace {
        exponential_part: !h.integral.is_zero(),
        r: h.integral,
        residues: h.residues,
    };
    Ok((trace, residues))
}

/// Group of `∂ₓy = a`: the kernel of the annihilator of the residues.
pub fn additive_group(a: &Rat, vars: &Vars) -> Result<Rank1Answer> {
    let t = single_param(vars)?;
    let (trace, residues) = reduce(a, vars)?;
    let ann = annihilator_of_span(t, &residues);
    let group = if ann.all_zero {
        GaSubgroup::trivial(t)
    } else {
        GaSubgroup::kernel(&ann.operator)?
    };
    Ok(Rank1Answer { group: Subgroup::Ga(group), trace, caveats: Vec::new() })
}

/// Group of `∂ₓy = a·y`.
pub fn multiplicative_group(a: &Rat, vars: &Vars) -> Result<Rank1Answer> {
    let t = single_param(vars)?;
    let (trace, residues) = reduce(a, vars)?;
    let mut caveats = Vec::new();

    let mut constant = Vec::new();
    let mut nonconstant: Vec<ParamRat> = Vec::new();
    for b in residues.iter().filter(|b| !b.is_zero()) {
        match b.constant_value() {
            Some(q) => constant.push(q),
            None => {
                if !nonconstant.contains(b) {
                    nonconstant.push(b.clone());
                }
            }
        }
    }

    let group = if nonconstant.is_empty() {
        if trace.exponential_part {
            caveats.push(Caveat::UpperBoundOnly);
            GmSubgroup::constants(t).with_upper_bound(true)
        } else {
            let n = constant
                .iter()
                .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            match n.to_u64() {
                Some(n) => GmSubgroup::finite_cyclic(n),
                None => return Err(Error::Unsupported(format!("cyclic order {n} too large"))),
            }
        }
    } else {
        let derivs: Vec<ParamRat> = nonconstant.iter().map(|b| b.derive(t)).collect();
        let ann = annihilator_of_span(t, &derivs);
        if !constant.is_empty() {
            caveats.push(Caveat::MixedConstantNonconstantResidues);
        }
        if has_rational_relation(&derivs) {
            caveats.push(Caveat::RationalRelationDetected);
        }
        if !caveats.is_empty() {
            caveats.push(Caveat::UpperBoundOnly);
        }
        caveats.sort();
        GmSubgroup::log_kernel(&ann.operator)?.with_upper_bound(!caveats.is_empty())
    };
    Ok(Rank1Answer { group: Subgroup::Gm(group), trace, caveats })
}

/// Whether the elements are linearly dependent over `ℚ`.
fn has_rational_relation(elems: &[ParamRat]) -> bool {
    if elems.len() < 2 {
        return elems.iter().any(ParamRat::is_zero);
    }
    let mut den = Poly::one();
    for e in elems {
        den = poly_lcm(&den, e.as_rat().denom());
    }
    let den = Rat::from_poly(den);
    let numers: Vec<Poly> = elems
        .iter()
        .map(|e| {
            let p = e.as_rat() * &den;
            debug_assert!(p.is_polynomial());
            p.numer().clone()
        })
        .collect();
    // One row per monomial, one column per element.
    let mut monomials: Vec<_> = numers
        .iter()
        .flat_map(|p| p.terms().map(|(m, _)| m.clone()))
        .collect();
    monomials.sort();
    monomials.dedup();
    let rows: Vec<Vec<Rat>> = monomials
        .iter()
        .map(|m| {
            numers
                .iter()
                .map(|p| {
                    p.terms()
                        .find(|(n, _)| *n == m)
                        .map(|(_, c)| Rat::constant(c.clone()))
                        .unwrap_or_else(Rat::zero)
                })
                .collect()
        })
        .collect();
    if rows.is_empty() {
        return true;
    }
    Matrix::from_rows(rows).rank() < elems.len()
}

/// Zariski closure of the answer: the classical group of the unparameterized
/// specializations.
pub fn classical_pv_group(answer: &Rank1Answer) -> AlgebraicGroupTag {
    zariski_closure(&answer.group)
}
