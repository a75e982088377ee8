//! Descriptors for differential algebraic subgroups of the additive and
//! multiplicative groups over the parameter field.
//!
//! Groups are given by defining equations only:
//!
//! * `Ga[L]` is `{a : L(a) = 0}`;
//! * `Gm[L]` is `{a : L(∂a/a) = 0}`, with `L = 1` giving the constant points;
//! * `mu_n` is the finite cyclic group of `n`-th roots of unity.
//!
//! Containment of kernels is decided by right division: `ker L₁ ⊆ ker L₂`
//! exactly when `L₁` is a right factor of `L₂`.

use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ore::OreOperator;
use crate::rat::{ParamRat, Var, Vars};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GaSubgroup {
    Full,
    /// Operator stored monic; `Kernel(1)` is the trivial group.
    Kernel(OreOperator),
}

impl GaSubgroup {
    pub fn kernel(l: &OreOperator) -> Result<Self> {
        if l.is_zero() {
            return Err(Error::ZeroOperator);
        }
        Ok(GaSubgroup::Kernel(l.monic()))
    }

    pub fn trivial(deriv: Var) -> Self {
        GaSubgroup::Kernel(OreOperator::one(deriv))
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, GaSubgroup::Kernel(l) if l.is_one())
    }

    pub fn render(&self, vars: &Vars) -> String {
        match self {
            GaSubgroup::Full => "Full".to_string(),
            GaSubgroup::Kernel(l) => format!("Ga[L = {}]", l.to_text(vars)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GmKind {
    Full,
    FiniteCyclic(u64),
    /// Operator stored monic; `LogKernel(1)` is the constant points `Gm(C)`.
    LogKernel(OreOperator),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GmSubgroup {
    pub kind: GmKind,
    /// The descriptor is a proven upper bound, not necessarily the group.
    pub upper_bound_only: bool,
}

impl GmSubgroup {
    pub fn full() -> Self {
        GmSubgroup { kind: GmKind::Full, upper_bound_only: false }
    }

    /// Panics if `n == 0`.
    pub fn finite_cyclic(n: u64) -> Self {
        assert!(n >= 1, "cyclic group order must be positive");
        GmSubgroup { kind: GmKind::FiniteCyclic(n), upper_bound_only: false }
    }

    pub fn log_kernel(l: &OreOperator) -> Result<Self> {
        if l.is_zero() {
            return Err(Error::ZeroOperator);
        }
        Ok(GmSubgroup { kind: GmKind::LogKernel(l.monic()), upper_bound_only: false })
    }

    pub fn constants(deriv: Var) -> Self {
        GmSubgroup {
            kind: GmKind::LogKernel(OreOperator::one(deriv)),
            upper_bound_only: false,
        }
    }

    pub fn with_upper_bound(mut self, flag: bool) -> Self {
        self.upper_bound_only = flag;
        self
    }

    pub fn render(&self, vars: &Vars) -> String {
        match &self.kind {
            GmKind::Full => "Full".to_string(),
            GmKind::FiniteCyclic(n) => format!("mu_n[n = {n}]"),
            GmKind::LogKernel(l) if l.is_one() => "Gm(C)".to_string(),
            GmKind::LogKernel(l) => format!("Gm[L(∂a/a)=0, L = {}]", l.to_text(vars)),
        }
    }
}

/// `H ⊆ G` for additive subgroups.
pub fn ga_contains(g: &GaSubgroup, h: &GaSubgroup) -> Result<bool> {
    match (g, h) {
        (GaSubgroup::Full, _) => Ok(true),
        (GaSubgroup::Kernel(_), GaSubgroup::Full) => Ok(false),
        (GaSubgroup::Kernel(lg), GaSubgroup::Kernel(lh)) => lg.right_divisible_by(lh),
    }
}

/// `H ⊆ G` for multiplicative subgroups.
pub fn gm_contains(g: &GmSubgroup, h: &GmSubgroup) -> Result<bool> {
    use GmKind::*;
    match (&g.kind, &h.kind) {
        (Full, _) => Ok(true),
        (_, Full) => Ok(false),
        (FiniteCyclic(m), FiniteCyclic(n)) => Ok(m % n == 0),
        // Roots of unity are constants, so ∂a/a = 0 lies in every kernel.
        (LogKernel(_), FiniteCyclic(_)) => Ok(true),
        // LogKernel groups contain the infinite group of constants.
        (FiniteCyclic(_), LogKernel(_)) => Ok(false),
        (LogKernel(lg), LogKernel(lh)) => lg.right_divisible_by(lh),
    }
}

/// Intersection within the shapes the classification allows.
pub fn gm_intersect(a: &GmSubgroup, b: &GmSubgroup) -> Result<GmSubgroup> {
    use GmKind::*;
    let flag = a.upper_bound_only || b.upper_bound_only;
    let kind = match (&a.kind, &b.kind) {
        (Full, k) | (k, Full) => k.clone(),
        (FiniteCyclic(m), FiniteCyclic(n)) => FiniteCyclic(m.gcd(n)),
        (FiniteCyclic(n), LogKernel(_)) | (LogKernel(_), FiniteCyclic(n)) => FiniteCyclic(*n),
        (LogKernel(l), LogKernel(m)) => {
            if l.right_divisible_by(m)? {
                LogKernel(m.clone())
            } else if m.right_divisible_by(l)? {
                LogKernel(l.clone())
            } else {
                return Err(Error::Unsupported(
                    "intersection of incomparable log-kernel groups".into(),
                ));
            }
        }
    };
    Ok(GmSubgroup { kind, upper_bound_only: flag })
}

/// Classical algebraic groups that arise as Zariski closures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AlgebraicGroupTag {
    TrivialGroup,
    FiniteCyclic(u64),
    FullGa,
    FullGm,
}

impl AlgebraicGroupTag {
    /// `self ⊆ other` in the order Trivial ⊂ FiniteCyclic(n) ⊂ Full.
    pub fn is_subgroup_of(&self, other: &AlgebraicGroupTag) -> bool {
        use AlgebraicGroupTag::*;
        match (self, other) {
            (TrivialGroup, _) => true,
            (FiniteCyclic(1), _) => true,
            (FiniteCyclic(n), FiniteCyclic(m)) => m % n == 0,
            (FiniteCyclic(_), FullGm) => true,
            (FullGa, FullGa) | (FullGm, FullGm) => true,
            _ => false,
        }
    }
}

impl fmt::Display for AlgebraicGroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraicGroupTag::TrivialGroup => f.write_str("TrivialGroup"),
            AlgebraicGroupTag::FiniteCyclic(n) => write!(f, "FiniteCyclic({n})"),
            AlgebraicGroupTag::FullGa => f.write_str("FullGa"),
            AlgebraicGroupTag::FullGm => f.write_str("FullGm"),
        }
    }
}

pub fn zariski_closure_ga(g: &GaSubgroup) -> AlgebraicGroupTag {
    match g {
        GaSubgroup::Kernel(l) if l.is_one() => AlgebraicGroupTag::TrivialGroup,
        // Any infinite subgroup of the additive line is dense.
        _ => AlgebraicGroupTag::FullGa,
    }
}

pub fn zariski_closure_gm(g: &GmSubgroup) -> AlgebraicGroupTag {
    match &g.kind {
        GmKind::FiniteCyclic(1) => AlgebraicGroupTag::TrivialGroup,
        GmKind::FiniteCyclic(n) => AlgebraicGroupTag::FiniteCyclic(*n),
        GmKind::LogKernel(_) | GmKind::Full => AlgebraicGroupTag::FullGm,
    }
}

/// Either kind of rank-one group descriptor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Subgroup {
    Ga(GaSubgroup),
    Gm(GmSubgroup),
}

impl Subgroup {
    pub fn render(&self, vars: &Vars) -> String {
        match self {
            Subgroup::Ga(g) => g.render(vars),
            Subgroup::Gm(g) => g.render(vars),
        }
    }
}

pub fn zariski_closure(g: &Subgroup) -> AlgebraicGroupTag {
    match g {
        Subgroup::Ga(g) => zariski_closure_ga(g),
        Subgroup::Gm(g) => zariski_closure_gm(g),
    }
}

/// `∂f / f`.
pub fn log_derivative(deriv: Var, f: &ParamRat) -> Result<ParamRat> {
    if f.is_zero() {
        return Err(Error::DivisionByZero);
    }
    f.derive(deriv).checked_div(f)
}

/// The subgroups of `Gm[∂]` and their fixed fields for the equation
/// `∂ₓy = (t/x)y`, from smallest to largest group.
pub fn gm_del_subgroup_table(deriv: Var, n: u64) -> Vec<(GmSubgroup, &'static str)> {
    vec![
        (GmSubgroup::finite_cyclic(n), "k((x^t)^n, log x)"),
        (GmSubgroup::constants(deriv), "k(log x)"),
        (
            GmSubgroup::log_kernel(&OreOperator::d(deriv)).expect("nonzero"),
            "k",
        ),
    ]
}
