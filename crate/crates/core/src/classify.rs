//! Partial classification of traceless 2×2 systems `∂ₓY = AY` with one
//! parameter: completely integrable, reducible (hence solvable), or a
//! candidate for the generic case.
//!
//! Reducibility is detected by a rational eigen-line: polynomial `v` and
//! `λ ∈ k` with `A·v − ∂ₓv = λ·v`, so that `e^{∫λ}·v` solves the system.
//! Candidate residues of `λ` are the eigenvalues of the residue matrices of
//! `A` at its simple poles.

use num_rational::BigRational;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::partial::partial_fractions_x;
use crate::rat::{Rat, Var, Vars};
use crate::systems::{
    check_integrability, pole_data, push_identity_rows, solve_complete_integrability, AnsatzBounds,
    ParamLinearSystem, Verdict,
};
use crate::upoly::UPoly;

pub const DEFAULT_DEGREE_CAP: usize = 5;
const MAX_CANDIDATES: usize = 4096;

#[derive(Clone, Debug, PartialEq)]
pub enum TrichotomyVerdict {
    CompletelyIntegrable { witnesses: Vec<(Var, Matrix)> },
    ReducibleSolvable { v: Vec<Rat>, lambda: Rat },
    GenericSL2Candidate,
    Unknown(Vec<String>),
}

impl TrichotomyVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            TrichotomyVerdict::CompletelyIntegrable { .. } => "CompletelyIntegrable",
            TrichotomyVerdict::ReducibleSolvable { .. } => "ReducibleSolvable",
            TrichotomyVerdict::GenericSL2Candidate => "GenericSL2Candidate",
            TrichotomyVerdict::Unknown(_) => "Unknown",
        }
    }

    pub fn to_json(&self, vars: &Vars) -> Value {
        let mut out = json!({ "verdict": self.name(), "interpretation": interpret_verdict(self) });
        match self {
            TrichotomyVerdict::CompletelyIntegrable { witnesses } => {
                let w: serde_json::Map<String, Value> = witnesses
                    .iter()
                    .map(|(v, m)| (vars.name(*v).to_string(), json!(m.display(vars))))
                    .collect();
                out["witnesses"] = Value::Object(w);
            }
            TrichotomyVerdict::ReducibleSolvable { v, lambda } => {
                out["v"] = json!(v.iter().map(|e| e.to_text(vars)).collect::<Vec<_>>());
                out["lambda"] = json!(lambda.to_text(vars));
            }
            TrichotomyVerdict::GenericSL2Candidate => {}
            TrichotomyVerdict::Unknown(reasons) => out["reasons"] = json!(reasons),
        }
        out
    }
}

pub fn interpret_verdict(v: &TrichotomyVerdict) -> String {
    match v {
        TrichotomyVerdict::CompletelyIntegrable { .. } => {
            "PPV-group conjugate to SL2(C); isomonodromic family (regular-singular reading)".into()
        }
        TrichotomyVerdict::ReducibleSolvable { .. } => {
            "PPV-group in a Borel subgroup; solutions are parameterized liouvillian".into()
        }
        TrichotomyVerdict::GenericSL2Candidate => {
            "candidate PPV-group SL2(k0) or a proper Zariski-dense subgroup; not decided".into()
        }
        TrichotomyVerdict::Unknown(reasons) => {
            format!("undecided; skipped subsearches: {}", reasons.join("; "))
        }
    }
}

/// `A·v − ∂ₓv − λ·v`.
pub fn eigen_line_residual(a: &Matrix, v: &[Rat], lambda: &Rat) -> Vec<Rat> {
    let av = a.mul_vec(v);
    av.iter()
        .zip(v)
        .map(|(w, vi)| &(w - &vi.derive(Var::MAIN)) - &(lambda * vi))
        .collect()
}

pub fn classify_2x2(a: &Matrix, vars: &Vars, bounds: &AnsatzBounds, degree_cap: usize) -> Result<TrichotomyVerdict> {
    if a.rows() != 2 || a.cols() != 2 {
        return Err(Error::DimensionMismatch(format!("expected 2x2, got {}x{}", a.rows(), a.cols())));
    }
    if !a.trace().is_zero() {
        return Err(Error::NotTraceless);
    }
    if vars.num_params() != 1 {
        return Err(Error::ParameterCount(vars.num_params()));
    }
    let t = Var::param(0);
    let report = solve_complete_integrability(a, vars, &[t], bounds)?;
    let integrable = if report.verdict == Verdict::Integrable {
        // tr B is x-free, so removing it keeps the witness valid and in sl₂.
        let witnesses: Vec<(Var, Matrix)> = report
            .witnesses
            .into_iter()
            .map(|(h, b)| {
                let half = b.trace().scale(&BigRational::new(1.into(), 2.into()));
                (h, b.sub(&Matrix::identity(2).scale(&half)))
            })
            .collect();
        let mut sys = ParamLinearSystem::new(vars.clone(), 2);
        sys.set(Var::MAIN, a.clone())?;
        for (h, b) in &witnesses {
            sys.set(*h, b.clone())?;
        }
        assert_eq!(check_integrability(&sys).verdict, Verdict::Integrable, "witness failed re-verification");
        Some(TrichotomyVerdict::CompletelyIntegrable { witnesses })
    } else {
        None
    };
    // A parameter-free matrix is always completed by B = 0; an eigen-line
    // says more in that case.
    let parameter_free = a.derive(t).is_zero();
    if let Some(v) = &integrable {
        if !parameter_free {
            return Ok(v.clone());
        }
    }
    let mut reasons = Vec::new();
    if let Some((v, lambda)) = eigen_line_search(a, vars, degree_cap, &mut reasons)? {
        assert!(
            eigen_line_residual(a, &v, &lambda).iter().all(Rat::is_zero),
            "eigen-line failed re-verification"
        );
        return Ok(TrichotomyVerdict::ReducibleSolvable { v, lambda });
    }
    if let Some(v) = integrable {
        return Ok(v);
    }
    Ok(if reasons.is_empty() {
        TrichotomyVerdict::GenericSL2Candidate
    } else {
        TrichotomyVerdict::Unknown(reasons)
    })
}

/// Eigenvalues of a 2×2 matrix with x-free entries, if they lie in `ℚ(t)`.
fn eigenvalues(m: &Matrix) -> Option<Vec<Rat>> {
    let charpoly = UPoly::new(vec![m.det(), -m.trace(), Rat::one()]);
    let roots = charpoly.param_field_roots();
    if roots.is_empty() {
        None
    } else {
        Some(roots)
    }
}

fn eigen_line_search(
    a: &Matrix,
    vars: &Vars,
    cap: usize,
    reasons: &mut Vec<String>,
) -> Result<Option<(Vec<Rat>, Rat)>> {
    let data = pole_data(a, vars)?;
    let before = reasons.len();
    for (p, ord) in &data.poles {
        if *ord > 1 {
            reasons.push(format!("pole at {} has order {ord}; eigen-line search needs simple poles", p.to_text(vars)));
        }
    }
    if let Some(d) = data.poly_degree.filter(|&d| d >= 1) {
        reasons.push(format!("polynomial part of degree {d}; eigen-line search needs degree 0"));
    }
    if reasons.len() > before {
        return Ok(None);
    }

    let forms: Vec<_> = a.entries().map(partial_fractions_x).collect();
    let matrix_of = |f: &dyn Fn(&crate::partial::PartialFractionForm) -> Rat| {
        Matrix::from_rows(vec![
            vec![f(&forms[0]), f(&forms[1])],
            vec![f(&forms[2]), f(&forms[3])],
        ])
    };
    // Candidate choices per pole, then for the constant part.
    let mut choices: Vec<(Option<Rat>, Vec<Rat>)> = Vec::new();
    for (p, _) in &data.poles {
        let residue = matrix_of(&|f| f.coeff(p, 1));
        match eigenvalues(&residue) {
            Some(e) => choices.push((Some(p.clone()), e)),
            None => reasons.push(format!(
                "residue matrix at {} has eigenvalues outside the parameter field",
                p.to_text(vars)
            )),
        }
    }
    let constant = matrix_of(&|f| f.polynomial.coeff(0));
    match eigenvalues(&constant) {
        Some(e) => choices.push((None, e)),
        None => reasons.push("constant part has eigenvalues outside the parameter field".into()),
    }
    if reasons.len() > before {
        return Ok(None);
    }
    let total: usize = choices.iter().map(|(_, e)| e.len()).product();
    if total > MAX_CANDIDATES {
        reasons.push(format!("{total} exponent combinations exceed the limit of {MAX_CANDIDATES}"));
        return Ok(None);
    }

    let x = Rat::var(Var::MAIN);
    let candidates: Vec<Rat> = (0..total)
        .map(|mut idx| {
            let mut lambda = Rat::zero();
            for (pole, eig) in &choices {
                let e = &eig[idx % eig.len()];
                idx /= eig.len();
                lambda = match pole {
                    Some(p) => &lambda + &(e / &(&x - p)),
                    None => &lambda + e,
                };
            }
            lambda
        })
        .collect();
    // Lowest degree first, so the reported line is as simple as possible.
    Ok((0..=cap).find_map(|deg| {
        candidates
            .par_iter()
            .find_map_first(|lambda| polynomial_eigen_line(a, lambda, deg).map(|v| (v, lambda.clone())))
    }))
}

/// Nonzero polynomial `v` of degree at most `cap` with `A·v − ∂ₓv = λ·v`.
fn polynomial_eigen_line(a: &Matrix, lambda: &Rat, cap: usize) -> Option<Vec<Rat>> {
    let x = Rat::var(Var::MAIN);
    let powers: Vec<Rat> = (0..=cap).map(|k| x.pow(k as i32).expect("power")).collect();
    let shifted = a.sub(&Matrix::identity(2).scale(lambda));
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for i in 0..2 {
        // Unknown (j, k) is the coefficient of x^k in v_j.
        let mut cols = Vec::with_capacity(2 * (cap + 1));
        for j in 0..2 {
            for (k, xk) in powers.iter().enumerate() {
                let mut c = &shifted[(i, j)] * xk;
                if i == j && k > 0 {
                    c = &c - &(&powers[k - 1] * &Rat::from_int(k as i64));
                }
                cols.push(c);
            }
        }
        push_identity_rows(&cols, &Rat::zero(), &mut rows, &mut rhs);
    }
    let basis = if rows.is_empty() {
        return None;
    } else {
        Matrix::from_rows(rows).nullspace()
    };
    let coeffs = basis.into_iter().next()?;
    let v: Vec<Rat> = (0..2)
        .map(|j| {
            (0..=cap).fold(Rat::zero(), |acc, k| &acc + &(&coeffs[j * (cap + 1) + k] * &powers[k]))
        })
        .collect();
    Some(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_expr;

    fn vars() -> Vars {
        Vars::with_params(&["t"])
    }
    fn m(rows: [[&str; 2]; 2]) -> Matrix {
        let v = vars();
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|s| parse_expr(s, &v).unwrap()).collect())
                .collect(),
        )
    }

    #[test]
    fn constant_diagonal_is_integrable() {
        let a = m([["t", "0"], ["0", "-t"]]);
        match classify_2x2(&a, &vars(), &AnsatzBounds::default(), DEFAULT_DEGREE_CAP).unwrap() {
            TrichotomyVerdict::CompletelyIntegrable { witnesses } => {
                assert_eq!(witnesses[0].1, m([["x", "0"], ["0", "-x"]]));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn diagonal_in_x_is_reducible() {
        let a = m([["1/(2*x)", "0"], ["0", "-1/(2*x)"]]);
        match classify_2x2(&a, &vars(), &AnsatzBounds::default(), DEFAULT_DEGREE_CAP).unwrap() {
            TrichotomyVerdict::ReducibleSolvable { v, lambda } => {
                assert!(eigen_line_residual(&a, &v, &lambda).iter().all(Rat::is_zero));
                // Either coordinate line, with the matching exponent.
                let half = parse_expr("1/(2*x)", &vars()).unwrap();
                assert!(
                    (v == vec![Rat::one(), Rat::zero()] && lambda == half)
                        || (v == vec![Rat::zero(), Rat::one()] && lambda == -&half)
                );
            }
            other => panic!("{other:?}"),
        }
        let a = m([["t/x", "0"], ["0", "-t/x"]]);
        let verdict = classify_2x2(&a, &vars(), &AnsatzBounds::default(), DEFAULT_DEGREE_CAP).unwrap();
        assert_eq!(verdict.name(), "ReducibleSolvable");
    }

    #[test]
    fn rescaling_family_is_integrable() {
        // y(x, t) = f(t·x) with f'' = f/u, so ∂_t y = (x/t)·∂ₓy.
        let a = m([["0", "1"], ["t/x", "0"]]);
        let verdict = classify_2x2(&a, &vars(), &AnsatzBounds::default(), 3).unwrap();
        let expected = m([["-1/(2*t)", "x/t"], ["1", "1/(2*t)"]]);
        assert_eq!(verdict, TrichotomyVerdict::CompletelyIntegrable { witnesses: vec![(Var(1), expected)] });
    }

    #[test]
    fn two_pole_family_is_generic_candidate() {
        let a = m([["0", "1"], ["t/x + 1/(x-1)", "0"]]);
        let verdict = classify_2x2(&a, &vars(), &AnsatzBounds::default(), 3).unwrap();
        assert_eq!(verdict, TrichotomyVerdict::GenericSL2Candidate);
    }

    #[test]
    fn skipped_searches_give_unknown() {
        let a = m([["0", "1"], ["1/x^3 + t", "0"]]);
        match classify_2x2(&a, &vars(), &AnsatzBounds::default(), 3).unwrap() {
            TrichotomyVerdict::Unknown(reasons) => assert_eq!(reasons.len(), 1),
            other => panic!("{other:?}"),
        }
        assert!(interpret_verdict(&TrichotomyVerdict::Unknown(vec!["r".into()])).contains('r'));
    }

    #[test]
    fn errors() {
        assert_eq!(
            classify_2x2(&m([["1", "0"], ["0", "0"]]), &vars(), &AnsatzBounds::default(), 3),
            Err(Error::NotTraceless)
        );
    }
}
