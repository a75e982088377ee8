//! Differential algebraic subgroups of Ga and Gm given by operators,
//! containment, Zariski closures and the subgroup/field table for
//! y' = (t/x) y.

use ppvkit::groups::{
    ga_contains, gm_contains, gm_del_subgroup_table, log_derivative, zariski_closure_gm, GaSubgroup,
    GmSubgroup,
};
use ppvkit::ore::parse_operator;
use ppvkit::parser::parse_expr;
use ppvkit::rat::{ParamRat, Var, Vars};

fn main() -> Result<(), ppvkit::error::Error> {
    let vars = Vars::with_params(&["t"]);
    let t = Var::param(0);

    let small = GaSubgroup::kernel(&parse_operator("D - 1/t", &vars, t)?)?;
    let big = GaSubgroup::kernel(&parse_operator("D^2", &vars, t)?)?;
    println!("{} inside {}: {}", small.render(&vars), big.render(&vars), ga_contains(&big, &small)?);
    println!("{} inside {}: {}", big.render(&vars), small.render(&vars), ga_contains(&small, &big)?);

    let f = ParamRat::try_from(parse_expr("t^3", &vars)?)?;
    println!("log derivative of t^3: {}", log_derivative(t, &f)?.display(&vars));

    println!("\nsubgroups of Gm[D] and fixed fields:");
    for n in [2u64, 6] {
        let rows = gm_del_subgroup_table(t, n);
        for (g, field) in &rows {
            println!("  {field:<20} {:<28} closure {}", g.render(&vars), zariski_closure_gm(g));
        }
        for w in rows.windows(2) {
            assert!(gm_contains(&w[1].0, &w[0].0)?);
        }
    }
    let mu4 = GmSubgroup::finite_cyclic(4);
    println!("\nmu_2 inside mu_4: {}", gm_contains(&mu4, &GmSubgroup::finite_cyclic(2))?);
    Ok(())
}
