//! Command-line front end. [`run`] is pure apart from reading input files
//! and the `PPVKIT_FORMAT` variable, so tests drive it directly.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::classify::{classify_2x2, interpret_verdict, TrichotomyVerdict};
use crate::error::{Error, Result};
use crate::groups::{gm_del_subgroup_table, Subgroup};
use crate::matrix::Matrix;
use crate::monodromy::{cross_check, monodromy_scan, Grid, LoopSpec, MonodromyReport, DEFAULT_EPS, DEFAULT_TOL};
use crate::ore::{annihilator_of_span, gcrd, lclm, parse_operator};
use crate::parser::{parse_expr, parse_system};
use crate::rank1::{additive_group, classical_pv_group, multiplicative_group};
use crate::rat::{ParamRat, Var, Vars};
use crate::systems::{
    check_integrability, isomonodromy_verdict, solve_complete_integrability, AnsatzBounds, IntegrabilityReport,
    IsomonodromyVerdict, ParamLinearSystem,
};

pub const FORMAT_ENV: &str = "PPVKIT_FORMAT";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "ppvkit", version, about = "Parameterized linear differential equations over Q(t)(x)")]
struct Cli {
    /// Output format; defaults to $PPVKIT_FORMAT, then `human`.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OreOp {
    Mul,
    Div,
    Gcrd,
    Lclm,
    Annihilator,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GroupKind {
    Add,
    Mult,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    /// Extra pole order allowed beyond the poles of A.
    #[arg(long, default_value_t = 1)]
    pole_headroom: usize,
    /// Degree of the polynomial part of the ansatz.
    #[arg(long)]
    poly_degree: Option<usize>,
}

impl BoundsArgs {
    fn bounds(&self) -> AnsatzBounds {
        AnsatzBounds { pole_headroom: self.pole_headroom, poly_degree: self.poly_degree, extra_poles: Vec::new() }
    }
}

#[derive(Args, Debug)]
struct NumericArgs {
    /// Loop such as `center=0,radius=1,segments=64` or `points=1;1i;-1;-1i`.
    #[arg(long = "loop", value_parser = parse_loop)]
    path: LoopSpec,
    /// Parameter axes such as `t=0.1:0.9:5` or `t=0.3,0.6,0.9`.
    #[arg(long)]
    grid: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_EPS)]
    eps: f64,
}

fn parse_loop(s: &str) -> std::result::Result<LoopSpec, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Operator arithmetic in the ring of linear differential operators in D.
    Ore {
        #[arg(value_enum)]
        op: OreOp,
        /// Two operators, or generators for `annihilator`.
        #[arg(required = true)]
        operands: Vec<String>,
        #[arg(long, default_value = "t")]
        params: String,
        /// Derivation of the operator ring; defaults to the first parameter.
        #[arg(long)]
        deriv: Option<String>,
    },
    /// Galois group of dy/dx = a (`add`) or dy/dx = a*y (`mult`).
    Group {
        #[arg(value_enum)]
        kind: GroupKind,
        expr: String,
        #[arg(long, default_value = "t")]
        params: String,
        /// Also print the Zariski closure.
        #[arg(long)]
        closure: bool,
    },
    CheckIntegrable {
        system: PathBuf,
    },
    SolveIntegrable {
        system: PathBuf,
        #[command(flatten)]
        bounds: BoundsArgs,
    },
    Isomonodromy {
        system: PathBuf,
        #[command(flatten)]
        bounds: BoundsArgs,
    },
    #[command(name = "classify-2x2")]
    Classify2x2 {
        system: PathBuf,
        #[arg(long, default_value_t = crate::classify::DEFAULT_DEGREE_CAP)]
        degree_cap: usize,
        #[command(flatten)]
        bounds: BoundsArgs,
    },
    Monodromy {
        system: PathBuf,
        #[command(flatten)]
        numeric: NumericArgs,
    },
    CrossCheck {
        system: PathBuf,
        #[command(flatten)]
        numeric: NumericArgs,
        #[command(flatten)]
        bounds: BoundsArgs,
    },
    /// Subgroups of Gm[D] and their fixed fields for dy/dx = (t/x)*y.
    Table {
        #[arg(long, default_value_t = 3)]
        n: u64,
    },
}

/// Exit status and captured streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs with `argv` (program name first), reading `PPVKIT_FORMAT`.
pub fn run<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    run_with_env(argv, std::env::var(FORMAT_ENV).ok().as_deref())
}

pub fn run_with_env<I, S>(argv: I, env_format: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    let format = match (cli.format, env_format) {
        (Some(f), _) => f,
        (None, None) => Format::Human,
        (None, Some(s)) => match Format::from_str(s, true) {
            Ok(f) => f,
            Err(_) => return usage(format!("{FORMAT_ENV} must be `human` or `json`, got `{s}`")),
        },
    };
    match dispatch(cli.command, format) {
        Ok(Output::Text(text)) => Outcome { code: 0, stdout: text, stderr: String::new() },
        Ok(Output::Usage(msg)) => usage(msg),
        Err(e) => match format {
            Format::Json => Outcome {
                code: 1,
                stdout: json!({ "error": { "kind": e.kind(), "message": e.to_string() } }).to_string() + "\n",
                stderr: String::new(),
            },
            Format::Human => Outcome { code: 1, stdout: String::new(), stderr: format!("error: {e}\n") },
        },
    }
}

fn usage(msg: String) -> Outcome {
    Outcome { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n\nUsage: ppvkit [--format human|json] <COMMAND>\n") }
}

enum Output {
    Text(String),
    Usage(String),
}

fn param_vars(params: &str) -> Vars {
    let names: Vec<&str> = params.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    Vars::with_params(&names)
}

fn load(path: &PathBuf) -> Result<(ParamLinearSystem, Vars)> {
    let src = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let spec = parse_system(&src)?;
    let sys = ParamLinearSystem::from_spec(&spec)?;
    let vars = spec.vars();
    Ok((sys, vars))
}

fn emit(format: Format, value: Value, human: String) -> Output {
    Output::Text(match format {
        Format::Json => value.to_string() + "\n",
        Format::Human => human,
    })
}

fn matrix_text(m: &Matrix, vars: &Vars) -> String {
    let rows: Vec<String> = m.display(vars).iter().map(|r| format!("[{}]", r.join(", "))).collect();
    format!("[{}]", rows.join(", "))
}

fn report_text(r: &IntegrabilityReport, vars: &Vars) -> String {
    let mut out = format!("verdict: {}\n", r.verdict.as_str());
    for (h, b) in &r.witnesses {
        let _ = writeln!(out, "B_{} = {}", vars.name(*h), matrix_text(b, vars));
    }
    for v in &r.violations {
        let _ = writeln!(
            out,
            "violation ({}, {}): {}",
            vars.name(v.i),
            vars.name(v.j),
            matrix_text(&v.residual, vars)
        );
    }
    for n in &r.notes {
        let _ = writeln!(out, "note: {n}");
    }
    out
}

fn scan_text(r: &MonodromyReport, vars: &Vars) -> String {
    let mut out = format!("verdict: {}\nspread: {:e}\n", r.verdict.name(), r.spread);
    for s in &r.samples {
        let tau: Vec<String> = s.tau.iter().map(|(v, q)| format!("{}={q}", vars.name(*v))).collect();
        match &s.outcome {
            Ok((_, inv)) => {
                let inv: Vec<String> = inv.iter().map(|z| format!("{:.9}{:+.9}i", z.re, z.im)).collect();
                let _ = writeln!(out, "{}: charpoly [{}]", tau.join(","), inv.join(", "));
            }
            Err(e) => {
                let _ = writeln!(out, "{}: error: {e}", tau.join(","));
            }
        }
    }
    out
}

fn dispatch(cmd: Command, format: Format) -> Result<Output> {
    match cmd {
        Command::Ore { op, operands, params, deriv } => {
            let vars = param_vars(&params);
            let d = match &deriv {
                Some(name) => vars.var(name)?,
                None => vars.params().next().ok_or_else(|| Error::ParameterCount(0))?,
            };
            if d.is_main() {
                return Err(Error::Unsupported("the operator derivation must be a parameter".into()));
            }
            if op != OreOp::Annihilator && operands.len() != 2 {
                return Ok(Output::Usage(format!("`ore` with this operation takes two operators, got {}", operands.len())));
            }
            if op == OreOp::Annihilator {
                let gens = operands
                    .iter()
                    .map(|s| ParamRat::try_from(parse_expr(s, &vars)?))
                    .collect::<Result<Vec<_>>>()?;
                let ann = annihilator_of_span(d, &gens);
                let text = ann.operator.to_text(&vars);
                return Ok(emit(
                    format,
                    json!({ "op": "annihilator", "result": text, "order": ann.operator.order(), "all_zero": ann.all_zero }),
                    format!("{text}\n"),
                ));
            }
            let l = parse_operator(&operands[0], &vars, d)?;
            let m = parse_operator(&operands[1], &vars, d)?;
            match op {
                OreOp::Div => {
                    let (q, r) = l.right_divide(&m)?;
                    let (q, r) = (q.to_text(&vars), r.to_text(&vars));
                    Ok(emit(
                        format,
                        json!({ "op": "div", "quotient": q, "remainder": r }),
                        format!("quotient: {q}\nremainder: {r}\n"),
                    ))
                }
                _ => {
                    let (name, result) = match op {
                        OreOp::Mul => ("mul", l.mul(&m)?),
                        OreOp::Gcrd => ("gcrd", gcrd(&l, &m)?),
                        _ => ("lclm", lclm(&l, &m)?),
                    };
                    let text = result.to_text(&vars);
                    Ok(emit(format, json!({ "op": name, "result": text }), format!("{text}\n")))
                }
            }
        }
        Command::Group { kind, expr, params, closure } => {
            let vars = param_vars(&params);
            let a = parse_expr(&expr, &vars)?;
            let answer = match kind {
                GroupKind::Add => additive_group(&a, &vars)?,
                GroupKind::Mult => multiplicative_group(&a, &vars)?,
            };
            let mut value = answer.to_json(&vars);
            let mut human = answer.render(&vars) + "\n";
            if closure {
                let tag = classical_pv_group(&answer);
                value["closure"] = json!(tag.to_string());
                let _ = writeln!(human, "closure: {tag}");
            }
            Ok(emit(format, value, human))
        }
        Command::CheckIntegrable { system } => {
            let (sys, vars) = load(&system)?;
            let r = check_integrability(&sys);
            Ok(emit(format, r.to_json(&vars), report_text(&r, &vars)))
        }
        Command::SolveIntegrable { system, bounds } => {
            let (sys, vars) = load(&system)?;
            let params: Vec<Var> = vars.params().collect();
            let r = solve_complete_integrability(sys.main_matrix()?, &vars, &params, &bounds.bounds())?;
            Ok(emit(format, r.to_json(&vars), report_text(&r, &vars)))
        }
        Command::Isomonodromy { system, bounds } => {
            let (sys, vars) = load(&system)?;
            let v = isomonodromy_verdict(sys.main_matrix()?, &vars, &bounds.bounds())?;
            let mut human = format!("verdict: {}\n", v.as_str());
            let mut value = json!({ "verdict": v.as_str() });
            if let IsomonodromyVerdict::IsomonodromicWithinAnsatz(w) = &v {
                let mut map = serde_json::Map::new();
                for (h, b) in w {
                    map.insert(vars.name(*h).to_string(), json!(b.display(&vars)));
                    let _ = writeln!(human, "B_{} = {}", vars.name(*h), matrix_text(b, &vars));
                }
                value["witnesses"] = Value::Object(map);
            }
            Ok(emit(format, value, human))
        }
        Command::Classify2x2 { system, degree_cap, bounds } => {
            let (sys, vars) = load(&system)?;
            let v = classify_2x2(sys.main_matrix()?, &vars, &bounds.bounds(), degree_cap)?;
            let mut human = format!("verdict: {}\n", v.name());
            match &v {
                TrichotomyVerdict::CompletelyIntegrable { witnesses } => {
                    for (h, b) in witnesses {
                        let _ = writeln!(human, "B_{} = {}", vars.name(*h), matrix_text(b, &vars));
                    }
                }
                TrichotomyVerdict::ReducibleSolvable { v, lambda } => {
                    let v: Vec<String> = v.iter().map(|e| e.to_text(&vars)).collect();
                    let _ = writeln!(human, "v = [{}]\nlambda = {}", v.join(", "), lambda.to_text(&vars));
                }
                _ => {}
            }
            let _ = writeln!(human, "{}", interpret_verdict(&v));
            Ok(emit(format, v.to_json(&vars), human))
        }
        Command::Monodromy { system, numeric } => {
            let (sys, vars) = load(&system)?;
            let grid = grid_for(&numeric, &vars)?;
            let r = monodromy_scan(sys.main_matrix()?, &vars, &numeric.path, &grid, numeric.tol, numeric.eps)?;
            Ok(emit(format, r.to_json(&vars), scan_text(&r, &vars)))
        }
        Command::CrossCheck { system, numeric, bounds } => {
            let (sys, vars) = load(&system)?;
            let grid = grid_for(&numeric, &vars)?;
            let c = cross_check(
                sys.main_matrix()?,
                &vars,
                &bounds.bounds(),
                &numeric.path,
                &grid,
                numeric.tol,
                numeric.eps,
            )?;
            let human = format!(
                "symbolic: {}\nnumeric: {}\nagreement: {}\n",
                c.symbolic.as_str(),
                c.numeric.verdict.name(),
                c.agreement.name()
            );
            Ok(emit(format, c.to_json(), human))
        }
        Command::Table { n } => {
            if n == 0 {
                return Ok(Output::Usage("--n must be positive".into()));
            }
            let vars = Vars::with_params(&["t"]);
            let rows = gm_del_subgroup_table(Var::param(0), n);
            let mut human = String::new();
            let mut values = Vec::new();
            for (g, field) in &rows {
                let group = Subgroup::Gm(g.clone()).render(&vars);
                let _ = writeln!(human, "{field:<20} {group}");
                values.push(json!({ "field": field, "group": group }));
            }
            Ok(emit(format, json!({ "rows": values }), human))
        }
    }
}

fn grid_for(numeric: &NumericArgs, vars: &Vars) -> Result<Grid> {
    if numeric.grid.is_empty() {
        Ok(Grid::default_for(vars))
    } else {
        let specs: Vec<&str> = numeric.grid.iter().map(String::as_str).collect();
        Grid::parse(&specs, vars)
    }
}
