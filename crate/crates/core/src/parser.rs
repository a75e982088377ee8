//! Expression and system-description parsing.
//!
//! A small precedence-climbing parser for rational expressions:
//!
//! ```text
//! sum     := term (('+' | '-') term)*
//! term    := ('-' | '+') term | product
//! product := power (('*' | '/') power)*
//! power   := atom ('^' exponent)?
//! exponent:= '-'? INT ('^' exponent)?
//! atom    := INT | IDENT | '(' sum ')'
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::rat::{Rat, Vars};

#[derive(Clone, Debug, PartialEq)]
pub enum Ast {
    Num(BigInt),
    Ident { name: String, pos: usize },
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, i32),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

fn lex(src: &str) -> Result<Lexer> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && (chars[i].1 == '.' || chars[i].1 == 'e' || chars[i].1 == 'E') {
                return Err(Error::Parse {
                    pos: chars[i].0,
                    msg: "floating-point literals are not supported; use p/q".into(),
                });
            }
            let text: String = chars[start..i].iter().map(|(_, c)| *c).collect();
            toks.push((Tok::Int(text.parse().expect("digits")), pos));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            let text: String = chars[start..i].iter().map(|(_, c)| *c).collect();
            toks.push((Tok::Ident(text), pos));
        } else if "+-*/^()".contains(c) {
            toks.push((Tok::Op(c), pos));
            i += 1;
        } else {
            return Err(Error::Parse {
                pos,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    toks.push((Tok::End, src.len()));
    Ok(Lexer { toks })
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn sum(&mut self) -> Result<Ast> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Op('+') => {
                    self.bump();
                    lhs = Ast::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Op('-') => {
                    self.bump();
                    lhs = Ast::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Ast> {
        match self.peek() {
            Tok::Op('-') => {
                self.bump();
                Ok(Ast::Neg(Box::new(self.term()?)))
            }
            Tok::Op('+') => {
                self.bump();
                self.term()
            }
            _ => self.product(),
        }
    }

    fn product(&mut self) -> Result<Ast> {
        let mut lhs = self.power()?;
        loop {
            match self.peek() {
                Tok::Op('*') => {
                    self.bump();
                    lhs = Ast::Mul(Box::new(lhs), Box::new(self.power()?));
                }
                Tok::Op('/') => {
                    self.bump();
                    lhs = Ast::Div(Box::new(lhs), Box::new(self.power()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn power(&mut self) -> Result<Ast> {
        let base = self.atom()?;
        if let Tok::Op('^') = self.peek() {
            self.bump();
            let e = self.exponent()?;
            Ok(Ast::Pow(Box::new(base), e))
        } else {
            Ok(base)
        }
    }

    fn exponent(&mut self) -> Result<i32> {
        let neg = if let Tok::Op('-') = self.peek() {
            self.bump();
            true
        } else {
            false
        };
        let pos = self.pos();
        let base = match self.bump() {
            Tok::Int(n) => n,
            _ => {
                return Err(Error::Parse {
                    pos,
                    msg: "exponent must be an integer literal".into(),
                })
            }
        };
        let mut value = base.to_i64().filter(|v| *v <= i32::MAX as i64);
        if let Tok::Op('^') = self.peek() {
            self.bump();
            let inner = self.exponent()?;
            if inner < 0 {
                return self.err("exponent must be an integer literal");
            }
            value = value.and_then(|b| b.checked_pow(inner as u32));
        }
        let v = value
            .and_then(|v| i32::try_from(v).ok())
            .ok_or(Error::Parse {
                pos,
                msg: "exponent too large".into(),
            })?;
        Ok(if neg { -v } else { v })
    }

    fn atom(&mut self) -> Result<Ast> {
        let pos = self.pos();
        match self.bump() {
            Tok::Int(n) => Ok(Ast::Num(n)),
            Tok::Ident(name) => Ok(Ast::Ident { name, pos }),
            Tok::Op('(') => {
                let inner = self.sum()?;
                match self.peek() {
                    Tok::Op(')') => {
                        self.bump();
                        Ok(inner)
                    }
                    _ => self.err("expected `)`"),
                }
            }
            Tok::End => Err(Error::Parse {
                pos,
                msg: "unexpected end of input".into(),
            }),
            t => Err(Error::Parse {
                pos,
                msg: format!("unexpected token {t:?}"),
            }),
        }
    }
}

/// Parses text into an expression tree.
pub fn parse_ast(src: &str) -> Result<Ast> {
    let Lexer { toks } = lex(src)?;
    let mut p = Parser { toks, at: 0 };
    let ast = p.sum()?;
    if *p.peek() != Tok::End {
        return p.err("unexpected trailing input");
    }
    Ok(ast)
}

/// Parses a rational expression in the declared variables.
pub fn parse_expr(src: &str, vars: &Vars) -> Result<Rat> {
    eval_rat(&parse_ast(src)?, vars)
}

fn eval_rat(ast: &Ast, vars: &Vars) -> Result<Rat> {
    Ok(match ast {
        Ast::Num(n) => Rat::constant(BigRational::from_integer(n.clone())),
        Ast::Ident { name, pos } => match vars.var(name) {
            Ok(v) => Rat::var(v),
            Err(_) => {
                return Err(Error::Parse {
                    pos: *pos,
                    msg: format!("unknown identifier `{name}`"),
                })
            }
        },
        Ast::Neg(a) => -eval_rat(a, vars)?,
        Ast::Add(a, b) => eval_rat(a, vars)? + eval_rat(b, vars)?,
        Ast::Sub(a, b) => eval_rat(a, vars)? - eval_rat(b, vars)?,
        Ast::Mul(a, b) => eval_rat(a, vars)? * eval_rat(b, vars)?,
        Ast::Div(a, b) => eval_rat(a, vars)?.checked_div(&eval_rat(b, vars)?)?,
        Ast::Pow(a, e) => eval_rat(a, vars)?.pow(*e)?,
    })
}

/// Validated system description: a square matrix of expressions for each
/// named derivation.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemSpec {
    pub params: Vec<String>,
    pub var: String,
    pub n: usize,
    /// In input order.
    pub matrices: Vec<(String, Vec<Vec<String>>)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    params: Vec<String>,
    #[serde(default)]
    var: Option<String>,
    n: usize,
    matrices: OrderedMatrices,
}

struct OrderedMatrices(Vec<(String, Vec<Vec<String>>)>);

impl<'de> Deserialize<'de> for OrderedMatrices {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = OrderedMatrices;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object mapping derivation names to matrices")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> std::result::Result<Self::Value, A::Error> {
                let mut out: Vec<(String, Vec<Vec<String>>)> = Vec::new();
                while let Some(key) = map.next_key::<String>()? {
                    if out.iter().any(|(k, _)| *k == key) {
                        return Err(de::Error::custom(format!("duplicate derivation `{key}`")));
                    }
                    out.push((key, map.next_value()?));
                }
                Ok(OrderedMatrices(out))
            }
        }
        d.deserialize_map(V)
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_')
}

/// Parses and validates a JSON system description.
pub fn parse_system(src: &str) -> Result<SystemSpec> {
    let raw: RawSpec = serde_json::from_str(src).map_err(|e| {
        let msg = e.to_string();
        if let Some(rest) = msg.strip_prefix("duplicate derivation `") {
            let name = rest.split('`').next().unwrap_or_default();
            Error::DuplicateDerivation(name.to_string())
        } else {
            Error::Schema(msg)
        }
    })?;
    let var = raw.var.unwrap_or_else(|| "x".to_string());
    if raw.n == 0 {
        return Err(Error::Schema("`n` must be positive".into()));
    }
    for (i, p) in raw.params.iter().enumerate() {
        if !is_identifier(p) {
            return Err(Error::Schema(format!("`{p}` is not an identifier")));
        }
        if raw.params[..i].contains(p) || *p == var {
            return Err(Error::Schema(format!("duplicate variable name `{p}`")));
        }
    }
    if !is_identifier(&var) {
        return Err(Error::Schema(format!("`{var}` is not an identifier")));
    }
    let spec = SystemSpec {
        params: raw.params,
        var,
        n: raw.n,
        matrices: raw.matrices.0,
    };
    let vars = spec.vars();
    for (name, m) in &spec.matrices {
        vars.var(name)
            .map_err(|_| Error::Schema(format!("derivation `{name}` is not a declared variable")))?;
        if m.len() != spec.n {
            return Err(Error::DimensionMismatch(format!(
                "matrix `{name}` has {} rows, expected {}",
                m.len(),
                spec.n
            )));
        }
        for (i, row) in m.iter().enumerate() {
            if row.len() != spec.n {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} of matrix `{name}` has {} entries, expected {}",
                    row.len(),
                    spec.n
                )));
            }
            for e in row {
                parse_expr(e, &vars)?;
            }
        }
    }
    Ok(spec)
}

impl SystemSpec {
    pub fn vars(&self) -> Vars {
        Vars::new(&self.var, &self.params)
    }

    /// The parsed matrix for derivation `name`, if present.
    pub fn matrix(&self, name: &str) -> Result<Option<Vec<Vec<Rat>>>> {
        let vars = self.vars();
        self.matrices
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, m)| {
                m.iter()
                    .map(|row| row.iter().map(|e| parse_expr(e, &vars)).collect())
                    .collect()
            })
            .transpose()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut mats = serde_json::Map::new();
        for (name, m) in &self.matrices {
            mats.insert(name.clone(), serde_json::json!(m));
        }
        serde_json::json!({
            "params": self.params,
            "var": self.var,
            "n": self.n,
            "matrices": mats,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::Var;

    fn vars() -> Vars {
        Vars::with_params(&["t"])
    }

    #[test]
    fn t_over_x() {
        let f = parse_expr("t/x", &vars()).unwrap();
        assert_eq!(f, &Rat::var(Var::param(0)) / &Rat::var(Var::MAIN));
    }

    #[test]
    fn grammar_exercise() {
        let f = parse_expr("-(x - t)^2/(x + 1)", &vars()).unwrap();
        let x = Rat::var(Var::MAIN);
        let t = Rat::var(Var::param(0));
        let d = &x - &t;
        let expected = -(&(&d * &d) / &(&x + &Rat::one()));
        assert_eq!(f, expected);
        assert_eq!(parse_expr("-x^2", &vars()).unwrap(), -(&x * &x));
        assert_eq!(parse_expr("2^3^2", &vars()).unwrap(), Rat::from_int(512));
        assert_eq!(parse_expr("x^-2", &vars()).unwrap(), (&x * &x).inv().unwrap());
        assert_eq!(parse_expr("1/2/x", &vars()).unwrap(), &Rat::from_ratio(1, 2) / &x);
    }

    #[test]
    fn multi_parameter() {
        let v = Vars::with_params(&["t1", "t2"]);
        let f = parse_expr("t1*x + t2", &v).unwrap();
        let expected = &(&Rat::var(Var::param(0)) * &Rat::var(Var::MAIN)) + &Rat::var(Var::param(1));
        assert_eq!(f, expected);
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(
            parse_expr("x + s", &vars()),
            Err(Error::Parse { pos: 4, msg: "unknown identifier `s`".into() })
        );
        assert!(matches!(parse_expr("x^t", &vars()), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(parse_expr("x $ 1", &vars()), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(parse_expr("0.5*x", &vars()), Err(Error::Parse { pos: 1, .. })));
        assert!(matches!(parse_expr("(x + 1", &vars()), Err(Error::Parse { .. })));
        assert!(matches!(parse_expr("x/0", &vars()), Err(Error::DivisionByZero)));
    }

    #[test]
    fn systems() {
        let s = parse_system(r#"{"params":["t"],"n":1,"matrices":{"x":[["t/x"]]}}"#).unwrap();
        assert_eq!(s.n, 1);
        assert_eq!(s.var, "x");
        let s = parse_system(
            r#"{"params":["t1","t2"],"n":2,"matrices":{"x":[["t1","0"],["0","t2"]]}}"#,
        )
        .unwrap();
        assert_eq!(s.matrix("x").unwrap().unwrap()[1][1], Rat::var(Var::param(1)));
        assert!(matches!(
            parse_system(r#"{"params":["t"],"n":2,"matrices":{"x":[["1","0","0"],["0","1"]]}}"#),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            parse_system(r#"{"params":["t"],"n":1,"matrices":{"x":[["1"]],"x":[["2"]]}}"#),
            Err(Error::DuplicateDerivation(_))
        ));
        assert!(matches!(
            parse_system(r#"{"params":["t","t"],"n":1,"matrices":{}}"#),
            Err(Error::Schema(_))
        ));
        assert!(matches!(
            parse_system(r#"{"params":["t"],"n":1,"matrices":{"s":[["1"]]}}"#),
            Err(Error::Schema(_))
        ));
    }
}
