//! Integrability conditions and the rational completion search on shipped
//! system descriptions.

use ppvkit::parser::parse_system;
use ppvkit::rat::Var;
use ppvkit::systems::{
    check_integrability, isomonodromy_verdict, solve_complete_integrability, AnsatzBounds, ParamLinearSystem,
};

fn main() -> Result<(), ppvkit::error::Error> {
    for src in [
        include_str!("../fixtures/diag.json"),
        include_str!("../fixtures/nilpotent_pair.json"),
    ] {
        let spec = parse_system(src)?;
        let sys = ParamLinearSystem::from_spec(&spec)?;
        let report = check_integrability(&sys);
        println!("{}", serde_json::to_string_pretty(&report.to_json(&spec.vars())).unwrap());
    }

    for src in [
        include_str!("../fixtures/diag.json"),
        include_str!("../fixtures/t_over_x.json"),
        include_str!("../fixtures/sl2_rescaling.json"),
    ] {
        let spec = parse_system(src)?;
        let vars = spec.vars();
        let sys = ParamLinearSystem::from_spec(&spec)?;
        let a = sys.main_matrix()?;
        let params: Vec<Var> = vars.params().collect();
        let report = solve_complete_integrability(a, &vars, &params, &AnsatzBounds::default())?;
        println!("\nA = {:?}", a.display(&vars));
        println!("  completion: {}", report.verdict.as_str());
        for (h, b) in &report.witnesses {
            println!("  B_{} = {:?}", vars.name(*h), b.display(&vars));
        }
        println!("  isomonodromy: {}", isomonodromy_verdict(a, &vars, &AnsatzBounds::default())?.as_str());
    }
    Ok(())
}
