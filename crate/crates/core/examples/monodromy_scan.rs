//! Numeric monodromy around loops in the x-plane, scanned over parameter
//! values and compared with the symbolic isomonodromy verdict.

use num_complex::Complex64;
use num_rational::BigRational;
use ppvkit::monodromy::{cross_check, integrate_transfer, Grid, LoopSpec, DEFAULT_EPS, DEFAULT_TOL};
use ppvkit::parser::parse_system;
use ppvkit::rat::Var;
use ppvkit::systems::{AnsatzBounds, ParamLinearSystem};

fn main() -> Result<(), ppvkit::error::Error> {
    let spec = parse_system(include_str!("../fixtures/t_over_x.json"))?;
    let vars = spec.vars();
    let sys = ParamLinearSystem::from_spec(&spec)?;
    let a = sys.main_matrix()?;

    let circle = LoopSpec::circle(Complex64::new(0.0, 0.0), 1.0, 64);
    let half = BigRational::new(1.into(), 2.into());
    let m = integrate_transfer(a, &vars, &[(Var::param(0), half)], &circle, DEFAULT_TOL)?;
    println!("monodromy of y' = (t/x) y at t = 1/2: {:.12}", m.get(0, 0));

    let loop_spec: LoopSpec = "points=2;2i;-2;-2i".parse()?;
    let grid = Grid::parse(&["t=0.3,0.6,0.9"], &vars)?;
    for (name, src) in [
        ("t/x", include_str!("../fixtures/t_over_x.json")),
        ("1/x", include_str!("../fixtures/one_over_x.json")),
    ] {
        let spec = parse_system(src)?;
        let sys = ParamLinearSystem::from_spec(&spec)?;
        let c = cross_check(sys.main_matrix()?, &vars, &AnsatzBounds::default(), &loop_spec, &grid, DEFAULT_TOL, DEFAULT_EPS)?;
        println!("{name}: {}", c.to_json());
    }

    let spec = parse_system(include_str!("../fixtures/diag.json"))?;
    let vars = spec.vars();
    let sys = ParamLinearSystem::from_spec(&spec)?;
    let c = cross_check(
        sys.main_matrix()?,
        &vars,
        &AnsatzBounds::default(),
        &circle,
        &Grid::default_for(&vars),
        DEFAULT_TOL,
        DEFAULT_EPS,
    )?;
    println!("diag(t1, t2): {}", c.to_json());
    Ok(())
}
