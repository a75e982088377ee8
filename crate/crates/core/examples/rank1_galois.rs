//! Galois groups of y' = a and y' = a*y over Q(t)(x) with one parameter.

use ppvkit::parser::parse_expr;
use ppvkit::rank1::{additive_group, classical_pv_group, multiplicative_group};
use ppvkit::rat::Vars;

fn main() -> Result<(), ppvkit::error::Error> {
    let vars = Vars::with_params(&["t"]);
    println!("y' = a");
    for a in ["t/(x-1)", "1/(x-1) + t/(x-2)", "1/(x-1) + t/(x-2) + t^2/(x-3)", "x^3 + 1/(x-5)^2"] {
        let ans = additive_group(&parse_expr(a, &vars)?, &vars)?;
        println!("  a = {a:<32} {}  (closure {})", ans.group.render(&vars), classical_pv_group(&ans));
    }
    println!("y' = a*y");
    for a in ["t/x", "(2/3)/x", "t/x + t/(x-1)", "t^2/x + t/(x-1)", "1/(2*x) + 1", "t/x + 2*t/(x-1)"] {
        let ans = multiplicative_group(&parse_expr(a, &vars)?, &vars)?;
        let flags: Vec<&str> = ans.caveats.iter().map(|c| c.as_str()).collect();
        println!(
            "  a = {a:<20} {:<28} closure {:<16} {}",
            ans.group.render(&vars),
            classical_pv_group(&ans).to_string(),
            flags.join(",")
        );
    }
    Ok(())
}
