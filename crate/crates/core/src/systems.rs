//! Integrability conditions for parameterized linear systems and a bounded
//! rational-ansatz search for completions `∂_h Y = B_h Y` of `∂ₓY = AY`.
//!
//! The integrability condition for a pair of derivations `(i, j)` is
//! `∂ᵢAⱼ − ∂ⱼAᵢ = AᵢAⱼ − AⱼAᵢ`, which is what equating the mixed
//! derivatives of a common fundamental solution gives.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matrix::{solve_linear, Matrix};
use crate::parser::SystemSpec;
use crate::partial::partial_fractions_x;
use crate::poly::Poly;
use crate::rat::{ParamRat, Rat, Var, Vars};

/// Square matrices attached to named derivations.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamLinearSystem {
    vars: Vars,
    n: usize,
    matrices: BTreeMap<Var, Matrix>,
}

impl ParamLinearSystem {
    pub fn new(vars: Vars, n: usize) -> Self {
        ParamLinearSystem { vars, n, matrices: BTreeMap::new() }
    }

    pub fn from_spec(spec: &SystemSpec) -> Result<Self> {
        let vars = spec.vars();
        let mut sys = ParamLinearSystem::new(vars.clone(), spec.n);
        for (name, _) in &spec.matrices {
            let m = spec.matrix(name)?.expect("present");
            sys.set(vars.var(name)?, Matrix::from_rows(m))?;
        }
        Ok(sys)
    }

    pub fn with(mut self, v: Var, m: Matrix) -> Result<Self> {
        self.set(v, m)?;
        Ok(self)
    }

    pub fn set(&mut self, v: Var, m: Matrix) -> Result<()> {
        if m.rows() != self.n || m.cols() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "expected {0}x{0}, got {1}x{2}",
                self.n,
                m.rows(),
                m.cols()
            )));
        }
        if v.0 > self.vars.num_params() {
            return Err(Error::UnknownVariable(format!("#{}", v.0)));
        }
        self.matrices.insert(v, m);
        Ok(())
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn matrix(&self, v: Var) -> Option<&Matrix> {
        self.matrices.get(&v)
    }

    pub fn main_matrix(&self) -> Result<&Matrix> {
        self.matrix(Var::MAIN)
            .ok_or_else(|| Error::MissingMatrix(self.vars.main_name().to_string()))
    }

    pub fn derivations(&self) -> Vec<Var> {
        self.matrices.keys().copied().collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Integrable,
    ViolationsFound,
    NotFoundWithinAnsatz,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Integrable => "Integrable",
            Verdict::ViolationsFound => "ViolationsFound",
            Verdict::NotFoundWithinAnsatz => "NotFoundWithinAnsatz",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub i: Var,
    pub j: Var,
    /// `∂ᵢAⱼ − ∂ⱼAᵢ − (AᵢAⱼ − AⱼAᵢ)`, nonzero.
    pub residual: Matrix,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntegrabilityReport {
    pub verdict: Verdict,
    /// Completion matrices `B_h`, when found.
    pub witnesses: Vec<(Var, Matrix)>,
    pub violations: Vec<Violation>,
    pub notes: Vec<String>,
}

const BOUNDED_NOTE: &str =
    "no completion exists within the rational ansatz bounds; this is a bounded search, not a proof of non-integrability";

impl IntegrabilityReport {
    pub fn witness(&self, v: Var) -> Option<&Matrix> {
        self.witnesses.iter().find(|(w, _)| *w == v).map(|(_, m)| m)
    }

    pub fn to_json(&self, vars: &Vars) -> Value {
        let witnesses: serde_json::Map<String, Value> = self
            .witnesses
            .iter()
            .map(|(v, m)| (vars.name(*v).to_string(), json!(m.display(vars))))
            .collect();
        let violations: Vec<Value> = self
            .violations
            .iter()
            .map(|v| {
                json!({
                    "i": vars.name(v.i),
                    "j": vars.name(v.j),
                    "residual": v.residual.display(vars),
                })
            })
            .collect();
        json!({
            "verdict": self.verdict.as_str(),
            "witnesses": witnesses,
            "violations": violations,
            "notes": self.notes,
        })
    }
}

/// `∂ᵢAⱼ − ∂ⱼAᵢ − (AᵢAⱼ − AⱼAᵢ)`.
pub fn integrability_residual(i: Var, ai: &Matrix, j: Var, aj: &Matrix) -> Matrix {
    aj.derive(i)
        .sub(&ai.derive(j))
        .sub(&ai.commutator(aj))
}

/// Checks every pair of derivations that carries a matrix.
pub fn check_integrability(sys: &ParamLinearSystem) -> IntegrabilityReport {
    let vars = sys.derivations();
    let mut pairs = Vec::new();
    for (a, &i) in vars.iter().enumerate() {
        for &j in &vars[a + 1..] {
            pairs.push((i, j));
        }
    }
    check_pairs(sys, &pairs).expect("all matrices present")
}

/// Checks the requested pairs; a missing matrix is an error.
pub fn check_pairs(sys: &ParamLinearSystem, pairs: &[(Var, Var)]) -> Result<IntegrabilityReport> {
    let get = |v: Var| {
        sys.matrix(v)
            .ok_or_else(|| Error::MissingMatrix(sys.vars.name(v).to_string()))
    };
    let mut violations = Vec::new();
    for &(i, j) in pairs {
        let residual = integrability_residual(i, get(i)?, j, get(j)?);
        if !residual.is_zero() {
            violations.push(Violation { i, j, residual });
        }
    }
    Ok(IntegrabilityReport {
        verdict: if violations.is_empty() {
            Verdict::Integrable
        } else {
            Verdict::ViolationsFound
        },
        witnesses: Vec::new(),
        violations,
        notes: Vec::new(),
    })
}

/// Size of the rational ansatz for each `B_h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnsatzBounds {
    /// Extra pole order beyond the pole order of `A` at each pole.
    pub pole_headroom: usize,
    /// Degree of the polynomial part; `None` picks one more than the degree
    /// of the polynomial part of `A`.
    pub poly_degree: Option<usize>,
    pub extra_poles: Vec<ParamRat>,
}

impl Default for AnsatzBounds {
    fn default() -> Self {
        AnsatzBounds { pole_headroom: 1, poly_degree: None, extra_poles: Vec::new() }
    }
}

impl AnsatzBounds {
    pub fn new(pole_headroom: usize, poly_degree: usize) -> Self {
        AnsatzBounds { pole_headroom, poly_degree: Some(poly_degree), extra_poles: Vec::new() }
    }
}

/// Poles of a matrix in `x` and the degree of its polynomial part.
#[derive(Clone, Debug)]
pub(crate) struct PoleData {
    /// `(root, maximal order)`
    pub poles: Vec<(Rat, usize)>,
    /// `None` when the polynomial part vanishes.
    pub poly_degree: Option<usize>,
}

pub(crate) fn pole_data(a: &Matrix, vars: &Vars) -> Result<PoleData> {
    let mut poles: Vec<(Rat, usize)> = Vec::new();
    let mut poly_degree: Option<usize> = None;
    for e in a.entries() {
        if e.is_zero() {
            continue;
        }
        let form = partial_fractions_x(e);
        form.require_split(vars)?;
        if let Some(d) = form.polynomial.degree() {
            poly_degree = Some(poly_degree.map_or(d, |p| p.max(d)));
        }
        for root in form.roots() {
            let ord = form.order_at(&root);
            match poles.iter_mut().find(|(r, _)| *r == root) {
                Some((_, o)) => *o = (*o).max(ord),
                None => poles.push((root, ord)),
            }
        }
    }
    Ok(PoleData { poles, poly_degree })
}

/// Basis functions `1/(x−p)^j` and `x^d` of the ansatz.
fn ansatz_basis(data: &PoleData, bounds: &AnsatzBounds) -> Vec<Rat> {
    let x = Rat::var(Var::MAIN);
    let mut poles = data.poles.clone();
    for p in &bounds.extra_poles {
        let r = p.as_rat().clone();
        if !poles.iter().any(|(q, _)| *q == r) {
            poles.push((r, 0));
        }
    }
    let mut basis = Vec::new();
    for (p, ord) in &poles {
        let base = &x - p;
        for j in 1..=(ord + bounds.pole_headroom) {
            basis.push(base.pow(-(j as i32)).expect("nonzero"));
        }
    }
    let degree = bounds
        .poly_degree
        .unwrap_or_else(|| data.poly_degree.map_or(0, |d| d + 1));
    for d in 0..=degree {
        basis.push(x.pow(d as i32).expect("power"));
    }
    basis
}

pub(crate) fn poly_lcm(a: &Poly, b: &Poly) -> Poly {
    if b.is_one() || a.exact_div(b).is_some() {
        return a.clone();
    }
    let g = a.gcd(b);
    a * &b.exact_div(&g).expect("gcd divides")
}

/// Turns the rational identity `Σ_u unknown_u · cols[u] = rhs` (in `x`) into
/// linear equations over the parameter field, appended as rows.
pub(crate) fn push_identity_rows(
    cols: &[Rat],
    rhs: &Rat,
    rows: &mut Vec<Vec<Rat>>,
    rhs_out: &mut Vec<Rat>,
) {
    let mut den = Poly::one();
    for c in cols.iter().chain(std::iter::once(rhs)) {
        if !c.is_zero() {
            den = poly_lcm(&den, c.denom());
        }
    }
    let den = Rat::from_poly(den);
    let expand = |r: &Rat| -> Vec<Poly> {
        if r.is_zero() {
            return Vec::new();
        }
        let p = r * &den;
        debug_assert!(p.is_polynomial());
        p.numer().to_univariate(Var::MAIN.0)
    };
    let col_polys: Vec<Vec<Poly>> = cols.iter().map(expand).collect();
    let rhs_poly = expand(rhs);
    let max_len = col_polys
        .iter()
        .map(Vec::len)
        .chain(std::iter::once(rhs_poly.len()))
        .max()
        .unwrap_or(0);
    for k in 0..max_len {
        let row: Vec<Rat> = col_polys
            .iter()
            .map(|c| c.get(k).cloned().map(Rat::from_poly).unwrap_or_default())
            .collect();
        let r = rhs_poly.get(k).cloned().map(Rat::from_poly).unwrap_or_default();
        if row.iter().all(Rat::is_zero) && r.is_zero() {
            continue;
        }
        rows.push(row);
        rhs_out.push(r);
    }
}

/// Solves `∂ₓB − (AB − BA) = rhs` for `B` in the span of `basis ⊗ gl_n`.
fn solve_completion(a: &Matrix, rhs: &Matrix, basis: &[Rat]) -> Option<Matrix> {
    let n = a.rows();
    let unknowns = basis.len() * n * n;
    // E_u for the unknown (φ, r, c): ∂ₓ(φ e_rc) − (A φ e_rc − φ e_rc A).
    let mut columns: Vec<Matrix> = Vec::with_capacity(unknowns);
    for phi in basis {
        let dphi = phi.derive(Var::MAIN);
        for r in 0..n {
            for c in 0..n {
                let mut e = Matrix::zeros(n, n);
                e[(r, c)] = &e[(r, c)] + &dphi;
                for i in 0..n {
                    // −(A e_rc)[i][c] = −A[i][r]·φ
                    let v = &a[(i, r)] * phi;
                    e[(i, c)] = &e[(i, c)] - &v;
                }
                for j in 0..n {
                    // +(e_rc A)[r][j] = φ·A[c][j]
                    let v = phi * &a[(c, j)];
                    e[(r, j)] = &e[(r, j)] + &v;
                }
                columns.push(e);
            }
        }
    }
    let mut rows = Vec::new();
    let mut rhs_vec = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let cols: Vec<Rat> = columns.iter().map(|m| m[(i, j)].clone()).collect();
            push_identity_rows(&cols, &rhs[(i, j)], &mut rows, &mut rhs_vec);
        }
    }
    let solution = if rows.is_empty() {
        vec![Rat::zero(); unknowns]
    } else {
        let m = Matrix::from_rows(rows);
        solve_linear(&m, &rhs_vec)?
    };
    let mut b = Matrix::zeros(n, n);
    for (k, phi) in basis.iter().enumerate() {
        for r in 0..n {
            for c in 0..n {
                let coeff = &solution[k * n * n + r * n + c];
                if !coeff.is_zero() {
                    b[(r, c)] = &b[(r, c)] + &(coeff * phi);
                }
            }
        }
    }
    Some(b)
}

/// Searches for `B_h` with `∂ₓB_h − ∂_h A = A·B_h − B_h·A` inside the
/// rational ansatz, then verifies all pairwise conditions.
pub fn solve_complete_integrability(
    a: &Matrix,
    vars: &Vars,
    params: &[Var],
    bounds: &AnsatzBounds,
) -> Result<IntegrabilityReport> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("matrix is not square".into()));
    }
    let data = pole_data(a, vars)?;
    let basis = ansatz_basis(&data, bounds);
    let found: Vec<Option<Matrix>> = params
        .par_iter()
        .map(|&h| solve_completion(a, &a.derive(h), &basis))
        .collect();
    let not_found = |notes: Vec<String>| IntegrabilityReport {
        verdict: Verdict::NotFoundWithinAnsatz,
        witnesses: Vec::new(),
        violations: Vec::new(),
        notes,
    };
    let mut witnesses = Vec::new();
    for (&h, b) in params.iter().zip(found) {
        match b {
            Some(b) => witnesses.push((h, b)),
            None => {
                return Ok(not_found(vec![
                    format!("no completion for `{}`", vars.name(h)),
                    BOUNDED_NOTE.to_string(),
                ]))
            }
        }
    }
    let mut sys = ParamLinearSystem::new(vars.clone(), a.rows());
    sys.set(Var::MAIN, a.clone())?;
    for (h, b) in &witnesses {
        sys.set(*h, b.clone())?;
    }
    let check = check_integrability(&sys);
    if check.verdict != Verdict::Integrable {
        let mut r = not_found(vec![
            "per-derivation completions exist but are not mutually compatible".to_string(),
            BOUNDED_NOTE.to_string(),
        ]);
        r.violations = check.violations;
        return Ok(r);
    }
    Ok(IntegrabilityReport {
        verdict: Verdict::Integrable,
        witnesses,
        violations: Vec::new(),
        notes: Vec::new(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum IsomonodromyVerdict {
    IsomonodromicWithinAnsatz(Vec<(Var, Matrix)>),
    NotFoundWithinAnsatz,
}

impl IsomonodromyVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            IsomonodromyVerdict::IsomonodromicWithinAnsatz(_) => "IsomonodromicWithinAnsatz",
            IsomonodromyVerdict::NotFoundWithinAnsatz => "NotFoundWithinAnsatz",
        }
    }

    pub fn is_isomonodromic(&self) -> bool {
        matches!(self, IsomonodromyVerdict::IsomonodromicWithinAnsatz(_))
    }
}

/// Isomonodromy reading of [`solve_complete_integrability`] over all
/// parameters. The rational ansatz is complete only when the equation has
/// regular singular points; otherwise a negative answer says nothing.
pub fn isomonodromy_verdict(a: &Matrix, vars: &Vars, bounds: &AnsatzBounds) -> Result<IsomonodromyVerdict> {
    let params: Vec<Var> = vars.params().collect();
    let report = solve_complete_integrability(a, vars, &params, bounds)?;
    Ok(match report.verdict {
        Verdict::Integrable => IsomonodromyVerdict::IsomonodromicWithinAnsatz(report.witnesses),
        _ => IsomonodromyVerdict::NotFoundWithinAnsatz,
    })
}
