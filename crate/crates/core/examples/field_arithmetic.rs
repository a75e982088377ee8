//! Exact arithmetic in Q(t)(x): parsing, canonical forms, partial fractions
//! over the parameter field and Hermite reduction.

use ppvkit::parser::parse_expr;
use ppvkit::partial::{hermite_reduce_x, partial_fractions_x};
use ppvkit::rat::{Var, Vars};

fn main() -> Result<(), ppvkit::error::Error> {
    let vars = Vars::with_params(&["t"]);
    let f = parse_expr("(x^2 - t^2)/(x - t) + 1/x", &vars)?;
    println!("canonical form: {}", f.to_text(&vars));
    println!("d/dx:           {}", f.derive(Var::MAIN).to_text(&vars));
    println!("d/dt:           {}", f.derive(Var::param(0)).to_text(&vars));

    // Roots of the denominator may depend on t.
    let g = parse_expr("(3*x + t)/((x - t)^2*(x + 1))", &vars)?;
    let form = partial_fractions_x(&g);
    println!("\npartial fractions of {}:", g.to_text(&vars));
    for p in &form.poles {
        println!("  {} / (x - ({}))^{}", p.coeff.to_text(&vars), p.root.to_text(&vars), p.order);
    }
    assert_eq!(form.recombine(), g);

    let h = hermite_reduce_x(&parse_expr("x^2 + t/(x-1)^2 + 2/(x+3)", &vars)?, &vars)?;
    println!("\nintegral part: {}", h.integral.to_text(&vars));
    println!("residual:      {}", h.residual.to_text(&vars));

    // Irreducible quadratics over Q(t) are reported, not split.
    let err = hermite_reduce_x(&parse_expr("1/(x^2 - t)", &vars)?, &vars).unwrap_err();
    println!("\n1/(x^2 - t): {err}");
    Ok(())
}
