//! Sorting traceless 2x2 systems into integrable, reducible, or generic
//! candidates.

use ppvkit::classify::{classify_2x2, interpret_verdict, DEFAULT_DEGREE_CAP};
use ppvkit::parser::parse_system;
use ppvkit::systems::{AnsatzBounds, ParamLinearSystem};

fn main() -> Result<(), ppvkit::error::Error> {
    for (name, src) in [
        ("constant diagonal", include_str!("../fixtures/sl2_constant_diag.json")),
        ("logarithmic diagonal", include_str!("../fixtures/sl2_log_diag.json")),
        ("rescaling family", include_str!("../fixtures/sl2_rescaling.json")),
        ("two poles", include_str!("../fixtures/sl2_two_poles.json")),
    ] {
        let spec = parse_system(src)?;
        let vars = spec.vars();
        let sys = ParamLinearSystem::from_spec(&spec)?;
        let v = classify_2x2(sys.main_matrix()?, &vars, &AnsatzBounds::default(), DEFAULT_DEGREE_CAP)?;
        println!("{name}: {}", v.to_json(&vars));
        println!("  {}", interpret_verdict(&v));
    }
    Ok(())
}
