//! The ring of linear differential operators in D = d/dt with coefficients
//! in Q(t): products, right division, gcrd, lclm and annihilators of spans.

use ppvkit::ore::{annihilator_of_span, gcrd, lclm, parse_operator, wronskian_rank};
use ppvkit::parser::parse_expr;
use ppvkit::rat::{ParamRat, Var, Vars};

fn main() -> Result<(), ppvkit::error::Error> {
    let vars = Vars::with_params(&["t"]);
    let t = Var::param(0);
    let op = |s: &str| parse_operator(s, &vars, t);

    let d = op("D")?;
    let a = op("t")?;
    println!("D * t = {}", d.mul(&a)?.to_text(&vars));

    let l = op("D^3 - 1/t*D^2")?;
    let m = op("D^2")?;
    let (q, r) = l.right_divide(&m)?;
    println!("({}) = ({})({}) + ({})", l.to_text(&vars), q.to_text(&vars), m.to_text(&vars), r.to_text(&vars));

    let l1 = op("D - 1/t")?; // kills t
    let l2 = op("D - 2/t")?; // kills t^2
    let both = lclm(&l1, &l2)?;
    println!("lclm = {}", both.to_text(&vars));
    println!("gcrd(lclm, D - 1/t) = {}", gcrd(&both, &l1)?.to_text(&vars));

    let gens: Vec<ParamRat> = ["t", "t^2", "3*t - t^2"]
        .iter()
        .map(|s| ParamRat::try_from(parse_expr(s, &vars).unwrap()).unwrap())
        .collect();
    println!("rank of span = {}", wronskian_rank(t, &gens));
    let ann = annihilator_of_span(t, &gens);
    println!("annihilator = {}", ann.operator.to_text(&vars));
    for g in &gens {
        assert!(ann.operator.apply(g).is_zero());
    }
    Ok(())
}
