//! The s-expression grammar for sets and functions.
//!
//! Set expressions:
//! `(cyl "ab")`, `(pat "y" "ab" "a")`, `(fin "a" "ab")`, `(uni X …)`,
//! `(int X …)`, `(dif X Y)`, `(cmp X)`, `(tr "w" X)`, `(all)`, `(none)`.
//!
//! Function expressions extend them:
//! `(ind X)`, `(add f g)`, `(sub f g)`, `(scl 3 f)`, `(mul f g)`,
//! `(trf "w" f)`, `(one)`, `(zero)`.
//!
//! `add` and `mul` accept two or more arguments; `scl` takes an
//! integer or a rational written `p/q`. Words use one character per
//! letter, uppercase for inverses, `""` for the identity.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use thiserror::Error;

use crate::freegroup::{FreeGroup, Word};
use crate::funcalc::StepFunction;
use crate::regset::{Pattern, RegSet};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SexprError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown operator {0:?}")]
    UnknownOp(String),
    #[error("operator {op} expects {expected}, got {got} arguments")]
    Arity { op: String, expected: String, got: usize },
    #[error("bad word {0:?}: {1}")]
    BadWord(String, String),
    #[error("bad pattern: {0}")]
    BadPattern(String),
    #[error("bad scalar {0:?}")]
    BadScalar(String),
    #[error("cylinder prefix must be a nonempty word")]
    EmptyCylinder,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Open,
    Close,
    Atom(String),
    Str(String),
}

fn tokenize(src: &str) -> Result<Vec<Token>, SexprError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            '(' => {
                chars.next();
                out.push(Token::Open);
            }
            ')' => {
                chars.next();
                out.push(Token::Close);
            }
            '"' => {
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('"') => break,
                        Some(c) => s.push(c),
                        None => return Err(SexprError::Syntax("unterminated string".into())),
                    }
                }
                out.push(Token::Str(s));
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            _ => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == '"' {
                        break;
                    }
                    s.push(c);
                    chars.next();
                }
                out.push(Token::Atom(s));
            }
        }
    }
    Ok(out)
}

/// Generic parsed form before set/function interpretation.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Node {
    List(String, Vec<Node>),
    Str(String),
    Atom(String),
}

fn parse_node(tokens: &[Token], pos: &mut usize) -> Result<Node, SexprError> {
    match tokens.get(*pos) {
        Some(Token::Open) => {
            *pos += 1;
            let op = match tokens.get(*pos) {
                Some(Token::Atom(s)) => s.clone(),
                _ => return Err(SexprError::Syntax("expected operator after '('".into())),
            };
            *pos += 1;
            let mut args = Vec::new();
            loop {
                match tokens.get(*pos) {
                    Some(Token::Close) => {
                        *pos += 1;
                        return Ok(Node::List(op, args));
                    }
                    Some(_) => args.push(parse_node(tokens, pos)?),
                    None => return Err(SexprError::Syntax("missing ')'".into())),
                }
            }
        }
        Some(Token::Str(s)) => {
            *pos += 1;
            Ok(Node::Str(s.clone()))
        }
        Some(Token::Atom(s)) => {
            *pos += 1;
            Ok(Node::Atom(s.clone()))
        }
        _ => Err(SexprError::Syntax("unexpected end of input".into())),
    }
}

fn parse_root(src: &str) -> Result<Node, SexprError> {
    let tokens = tokenize(src)?;
    let mut pos = 0;
    let node = parse_node(&tokens, &mut pos)?;
    if pos != tokens.len() {
        return Err(SexprError::Syntax("trailing input after expression".into()));
    }
    Ok(node)
}

/// A set expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetExpr {
    Cyl(String),
    Pat(String, String, String),
    Fin(Vec<String>),
    Uni(Vec<SetExpr>),
    Int(Vec<SetExpr>),
    Dif(Box<SetExpr>, Box<SetExpr>),
    Cmp(Box<SetExpr>),
    Tr(String, Box<SetExpr>),
    All,
    None_,
}

/// A function expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunExpr {
    Ind(SetExpr),
    Add(Vec<FunExpr>),
    Sub(Box<FunExpr>, Box<FunExpr>),
    Scl(BigRational, Box<FunExpr>),
    Mul(Vec<FunExpr>),
    Trf(String, Box<FunExpr>),
    One,
    Zero,
}

fn expect_str(node: &Node, op: &str) -> Result<String, SexprError> {
    match node {
        Node::Str(s) => Ok(s.clone()),
        _ => Err(SexprError::Syntax(format!("{op} expects quoted words"))),
    }
}

fn node_to_set(node: &Node) -> Result<SetExpr, SexprError> {
    let Node::List(op, args) = node else {
        return Err(SexprError::Syntax("expected a set expression list".into()));
    };
    let arity = |expected: &str, ok: bool| -> Result<(), SexprError> {
        if ok {
            Ok(())
        } else {
            Err(SexprError::Arity { op: op.clone(), expected: expected.into(), got: args.len() })
        }
    };
    match op.as_str() {
        "cyl" => {
            arity("1", args.len() == 1)?;
            Ok(SetExpr::Cyl(expect_str(&args[0], op)?))
        }
        "pat" => {
            arity("3", args.len() == 3)?;
            Ok(SetExpr::Pat(
                expect_str(&args[0], op)?,
                expect_str(&args[1], op)?,
                expect_str(&args[2], op)?,
            ))
        }
        "fin" => Ok(SetExpr::Fin(
            args.iter().map(|a| expect_str(a, op)).collect::<Result<_, _>>()?,
        )),
        "uni" => {
            arity("≥1", !args.is_empty())?;
            Ok(SetExpr::Uni(args.iter().map(node_to_set).collect::<Result<_, _>>()?))
        }
        "int" => {
            arity("≥1", !args.is_empty())?;
            Ok(SetExpr::Int(args.iter().map(node_to_set).collect::<Result<_, _>>()?))
        }
        "dif" => {
            arity("2", args.len() == 2)?;
            Ok(SetExpr::Dif(
                Box::new(node_to_set(&args[0])?),
                Box::new(node_to_set(&args[1])?),
            ))
        }
        "cmp" => {
            arity("1", args.len() == 1)?;
            Ok(SetExpr::Cmp(Box::new(node_to_set(&args[0])?)))
        }
        "tr" => {
            arity("2", args.len() == 2)?;
            Ok(SetExpr::Tr(
                expect_str(&args[0], op)?,
                Box::new(node_to_set(&args[1])?),
            ))
        }
        "all" => {
            arity("0", args.is_empty())?;
            Ok(SetExpr::All)
        }
        "none" => {
            arity("0", args.is_empty())?;
            Ok(SetExpr::None_)
        }
        _ => Err(SexprError::UnknownOp(op.clone())),
    }
}

fn node_to_fun(node: &Node) -> Result<FunExpr, SexprError> {
    let Node::List(op, args) = node else {
        return Err(SexprError::Syntax("expected a function expression list".into()));
    };
    let arity = |expected: &str, ok: bool| -> Result<(), SexprError> {
        if ok {
            Ok(())
        } else {
            Err(SexprError::Arity { op: op.clone(), expected: expected.into(), got: args.len() })
        }
    };
    match op.as_str() {
        "ind" => {
            arity("1", args.len() == 1)?;
            Ok(FunExpr::Ind(node_to_set(&args[0])?))
        }
        "add" => {
            arity("≥2", args.len() >= 2)?;
            Ok(FunExpr::Add(args.iter().map(node_to_fun).collect::<Result<_, _>>()?))
        }
        "sub" => {
            arity("2", args.len() == 2)?;
            Ok(FunExpr::Sub(
                Box::new(node_to_fun(&args[0])?),
                Box::new(node_to_fun(&args[1])?),
            ))
        }
        "scl" => {
            arity("2", args.len() == 2)?;
            let Node::Atom(scalar) = &args[0] else {
                return Err(SexprError::Syntax("scl expects a bare scalar".into()));
            };
            let value = BigRational::from_str(scalar)
                .map_err(|_| SexprError::BadScalar(scalar.clone()))?;
            Ok(FunExpr::Scl(value, Box::new(node_to_fun(&args[1])?)))
        }
        "mul" => {
            arity("≥2", args.len() >= 2)?;
            Ok(FunExpr::Mul(args.iter().map(node_to_fun).collect::<Result<_, _>>()?))
        }
        "trf" => {
            arity("2", args.len() == 2)?;
            Ok(FunExpr::Trf(
                expect_str(&args[0], op)?,
                Box::new(node_to_fun(&args[1])?),
            ))
        }
        "one" => {
            arity("0", args.is_empty())?;
            Ok(FunExpr::One)
        }
        "zero" => {
            arity("0", args.is_empty())?;
            Ok(FunExpr::Zero)
        }
        _ => Err(SexprError::UnknownOp(op.clone())),
    }
}

pub fn parse_set(src: &str) -> Result<SetExpr, SexprError> {
    node_to_set(&parse_root(src)?)
}

pub fn parse_fun(src: &str) -> Result<FunExpr, SexprError> {
    node_to_fun(&parse_root(src)?)
}

fn parse_word(group: FreeGroup, text: &str) -> Result<Word, SexprError> {
    group
        .parse(text)
        .map_err(|e| SexprError::BadWord(text.into(), e.to_string()))
}

pub fn eval_set(group: FreeGroup, expr: &SetExpr) -> Result<RegSet, SexprError> {
    match expr {
        SetExpr::Cyl(t) => {
            let t = parse_word(group, t)?;
            RegSet::cylinder(group, &t).map_err(|_| SexprError::EmptyCylinder)
        }
        SetExpr::Pat(head, tail, last) => {
            let p = Pattern::parse(head, tail, last, group.rank())
                .map_err(SexprError::BadPattern)?;
            Ok(RegSet::pattern(group, &p))
        }
        SetExpr::Fin(words) => {
            let words: Vec<Word> = words
                .iter()
                .map(|w| parse_word(group, w))
                .collect::<Result<_, _>>()?;
            Ok(RegSet::finite(group, &words))
        }
        SetExpr::Uni(parts) => {
            let mut acc = RegSet::empty(group);
            for p in parts {
                acc = acc.union(&eval_set(group, p)?);
            }
            Ok(acc)
        }
        SetExpr::Int(parts) => {
            let mut acc = RegSet::universe(group);
            for p in parts {
                acc = acc.intersect(&eval_set(group, p)?);
            }
            Ok(acc)
        }
        SetExpr::Dif(x, y) => Ok(eval_set(group, x)?.difference(&eval_set(group, y)?)),
        SetExpr::Cmp(x) => Ok(eval_set(group, x)?.complement()),
        SetExpr::Tr(w, x) => {
            let w = parse_word(group, w)?;
            Ok(eval_set(group, x)?.translate(&w))
        }
        SetExpr::All => Ok(RegSet::universe(group)),
        SetExpr::None_ => Ok(RegSet::empty(group)),
    }
}

pub fn eval_fun(group: FreeGroup, expr: &FunExpr) -> Result<StepFunction, SexprError> {
    match expr {
        FunExpr::Ind(s) => Ok(StepFunction::indicator(&eval_set(group, s)?)),
        FunExpr::Add(parts) => {
            let mut acc = StepFunction::zero(group);
            for p in parts {
                acc = acc.add(&eval_fun(group, p)?);
            }
            Ok(acc)
        }
        FunExpr::Sub(x, y) => Ok(eval_fun(group, x)?.sub(&eval_fun(group, y)?)),
        FunExpr::Scl(c, x) => Ok(eval_fun(group, x)?.scale(c)),
        FunExpr::Mul(parts) => {
            let mut acc = StepFunction::one(group);
            for p in parts {
                acc = acc.mul(&eval_fun(group, p)?);
            }
            Ok(acc)
        }
        FunExpr::Trf(w, x) => {
            let w = parse_word(group, w)?;
            Ok(eval_fun(group, x)?.translate(&w))
        }
        FunExpr::One => Ok(StepFunction::one(group)),
        FunExpr::Zero => Ok(StepFunction::zero(group)),
    }
}

impl fmt::Display for SetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetExpr::Cyl(t) => write!(f, "(cyl \"{t}\")"),
            SetExpr::Pat(y, tail, z) => write!(f, "(pat \"{y}\" \"{tail}\" \"{z}\")"),
            SetExpr::Fin(ws) => {
                write!(f, "(fin")?;
                for w in ws {
                    write!(f, " \"{w}\"")?;
                }
                write!(f, ")")
            }
            SetExpr::Uni(ps) => {
                write!(f, "(uni")?;
                for p in ps {
                    write!(f, " {p}")?;
                }
                write!(f, ")")
            }
            SetExpr::Int(ps) => {
                write!(f, "(int")?;
                for p in ps {
                    write!(f, " {p}")?;
                }
                write!(f, ")")
            }
            SetExpr::Dif(x, y) => write!(f, "(dif {x} {y})"),
            SetExpr::Cmp(x) => write!(f, "(cmp {x})"),
            SetExpr::Tr(w, x) => write!(f, "(tr \"{w}\" {x})"),
            SetExpr::All => write!(f, "(all)"),
            SetExpr::None_ => write!(f, "(none)"),
        }
    }
}

impl fmt::Display for FunExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunExpr::Ind(s) => write!(f, "(ind {s})"),
            FunExpr::Add(ps) => {
                write!(f, "(add")?;
                for p in ps {
                    write!(f, " {p}")?;
                }
                write!(f, ")")
            }
            FunExpr::Sub(x, y) => write!(f, "(sub {x} {y})"),
            FunExpr::Scl(c, x) => write!(f, "(scl {c} {x})"),
            FunExpr::Mul(ps) => {
                write!(f, "(mul")?;
                for p in ps {
                    write!(f, " {p}")?;
                }
                write!(f, ")")
            }
            FunExpr::Trf(w, x) => write!(f, "(trf \"{w}\" {x})"),
            FunExpr::One => write!(f, "(one)"),
            FunExpr::Zero => write!(f, "(zero)"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn g() -> FreeGroup {
        FreeGroup::new(2)
    }

    #[test]
    fn parse_and_eval_sets() {
        let e = parse_set(r#"(uni (cyl "a") (dif (pat "" "b" "a") (cyl "bb")))"#).unwrap();
        let s = eval_set(g(), &e).unwrap();
        assert!(s.contains(&g().parse("a").unwrap()));
        assert!(s.contains(&g().parse("ba").unwrap()));
        assert!(!s.contains(&g().parse("bba").unwrap()));

        assert_eq!(
            eval_set(g(), &parse_set("(all)").unwrap()).unwrap(),
            RegSet::universe(g())
        );
        assert!(eval_set(g(), &parse_set("(none)").unwrap()).unwrap().is_empty());

        let tr = parse_set(r#"(tr "a" (cyl "A"))"#).unwrap();
        assert_eq!(
            eval_set(g(), &tr).unwrap(),
            RegSet::cylinder(g(), &g().parse("a").unwrap()).unwrap().complement()
        );
    }

    #[test]
    fn parse_and_eval_functions() {
        let e = parse_fun(r#"(add (ind (cyl "a")) (scl -2 (ind (cyl "b"))))"#).unwrap();
        let f = eval_fun(g(), &e).unwrap();
        assert_eq!(f.eval(&g().parse("ab").unwrap()), BigRational::one());
        assert_eq!(
            f.eval(&g().parse("ba").unwrap()),
            -BigRational::from_integer(2.into())
        );

        let one = eval_fun(g(), &parse_fun("(one)").unwrap()).unwrap();
        assert_eq!(one, StepFunction::one(g()));

        let half = parse_fun(r#"(scl 1/2 (one))"#).unwrap();
        let h = eval_fun(g(), &half).unwrap();
        assert!(!h.is_integer_valued());
    }

    #[test]
    fn display_roundtrip() {
        for src in [
            r#"(cyl "ab")"#,
            r#"(pat "b" "aB" "b")"#,
            r#"(uni (cyl "a") (int (all) (cmp (fin "a" "ab"))))"#,
            r#"(tr "Ba" (dif (all) (none)))"#,
        ] {
            let e = parse_set(src).unwrap();
            assert_eq!(parse_set(&e.to_string()).unwrap(), e);
        }
        for src in [
            r#"(ind (cyl "a"))"#,
            r#"(add (one) (scl -3 (ind (pat "" "a" "b"))))"#,
            r#"(mul (sub (one) (ind (cyl "a"))) (trf "b" (zero)))"#,
        ] {
            let e = parse_fun(src).unwrap();
            assert_eq!(parse_fun(&e.to_string()).unwrap(), e);
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_set("(cyl)"), Err(SexprError::Arity { .. })));
        assert!(matches!(parse_set("(wat 3)"), Err(SexprError::UnknownOp(_))));
        assert!(parse_set(r#"(cyl "a" extra"#).is_err());
        assert!(matches!(
            eval_set(g(), &parse_set(r#"(cyl "")"#).unwrap()),
            Err(SexprError::EmptyCylinder)
        ));
        assert!(matches!(
            eval_set(g(), &parse_set(r#"(cyl "xyz")"#).unwrap()),
            Err(SexprError::BadWord(..))
        ));
        assert!(matches!(
            eval_set(g(), &parse_set(r#"(pat "A" "a" "b")"#).unwrap()),
            Err(SexprError::BadPattern(_))
        ));
    }
}
