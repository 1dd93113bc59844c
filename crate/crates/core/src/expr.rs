//! Small arithmetic expressions over named variables, e.g. `-(t*u)/(1 - t^2)`.
//!
//! Parsing is delegated to `meval`; names are resolved once at compile time
//! and the resulting postfix program is evaluated without allocation beyond
//! a reusable stack.

use meval::tokenizer::{Operation, Token};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
enum Op {
    Num(f64),
    Var(usize),
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Neg,
    Call(fn(f64) -> f64),
}

/// A compiled expression. Evaluation is total: domain violations yield NaN
/// or infinities, which callers screen.
#[derive(Debug, Clone)]
pub struct Expression {
    text: String,
    vars: Vec<String>,
    program: Vec<Op>,
}

type Unary = fn(f64) -> f64;

const UNARY: &[(&str, Unary)] = &[
    ("exp", f64::exp),
    ("sin", f64::sin),
    ("cos", f64::cos),
    ("tan", f64::tan),
    ("arctan", f64::atan),
    ("atan", f64::atan),
    ("sqrt", f64::sqrt),
    ("abs", f64::abs),
];

impl Expression {
    /// Compiles `text` with the given variable names, in argument order for [`Expression::eval`].
    ///
    /// Errors are [`Error::Parse`] with `line = 1` and a 1-based column into `text`.
    pub fn compile(text: &str, vars: &[&str]) -> Result<Expression> {
        let tokens = parse(text)?;
        let mut program = Vec::with_capacity(tokens.len());
        for token in tokens.iter() {
            let op = match token {
                Token::Number(x) => Op::Num(*x),
                Token::Var(name) => match vars.iter().position(|v| v == name) {
                    Some(i) => Op::Var(i),
                    None => match name.as_str() {
                        "pi" => Op::Num(std::f64::consts::PI),
                        "e" => Op::Num(std::f64::consts::E),
                        _ => {
                            let expected = vars.join(", ");
                            return Err(name_error(text, name, &format!(
                                "unknown variable `{name}` (expected one of: {expected}, pi, e)"
                            )));
                        }
                    },
                },
                Token::Binary(op) => match op {
                    Operation::Plus => Op::Add,
                    Operation::Minus => Op::Sub,
                    Operation::Times => Op::Mul,
                    Operation::Div => Op::Div,
                    Operation::Pow => Op::Pow,
                    Operation::Rem => return Err(char_error(text, '%', "`%` is not supported")),
                },
                Token::Unary(Operation::Minus) => Op::Neg,
                Token::Unary(_) => continue,
                Token::Func(name, arity) => {
                    let arity = arity.unwrap_or(0);
                    match (name.as_str(), arity) {
                        ("pow", 2) => Op::Pow,
                        ("pow", _) => {
                            return Err(name_error(text, name, "`pow` takes two arguments"));
                        }
                        (_, 1) => match UNARY.iter().find(|(n, _)| n == name) {
                            Some((_, f)) => Op::Call(*f),
                            None => return Err(unknown_function(text, name)),
                        },
                        _ if UNARY.iter().any(|(n, _)| n == name) => {
                            return Err(name_error(text, name, &format!("`{name}` takes one argument")));
                        }
                        _ => return Err(unknown_function(text, name)),
                    }
                }
                other => {
                    return Err(Error::Parse {
                        line: 1,
                        column: 1,
                        message: format!("unexpected token {other:?}"),
                    })
                }
            };
            program.push(op);
        }
        Ok(Expression {
            text: text.to_string(),
            vars: vars.iter().map(|v| v.to_string()).collect(),
            program,
        })
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn variables(&self) -> &[String] {
        &self.vars
    }

    /// Evaluates with `args[i]` bound to the `i`-th variable.
    pub fn eval(&self, args: &[f64]) -> f64 {
        assert_eq!(args.len(), self.vars.len(), "argument count must match variable count");
        let mut stack: Vec<f64> = Vec::with_capacity(8);
        for op in &self.program {
            match *op {
                Op::Num(x) => stack.push(x),
                Op::Var(i) => stack.push(args[i]),
                Op::Neg => {
                    let x = stack.pop().expect("well-formed program");
                    stack.push(-x);
                }
                Op::Call(f) => {
                    let x = stack.pop().expect("well-formed program");
                    stack.push(f(x));
                }
                binary => {
                    let r = stack.pop().expect("well-formed program");
                    let l = stack.pop().expect("well-formed program");
                    stack.push(match binary {
                        Op::Add => l + r,
                        Op::Sub => l - r,
                        Op::Mul => l * r,
                        Op::Div => l / r,
                        Op::Pow => l.powf(r),
                        _ => unreachable!(),
                    });
                }
            }
        }
        stack.pop().expect("well-formed program")
    }
}

fn parse(text: &str) -> Result<meval::Expr> {
    use meval::tokenizer::ParseError;
    let end = text.chars().count() + 1;
    text.parse::<meval::Expr>().map_err(|e| {
        let (column, message) = match e {
            meval::Error::ParseError(ParseError::UnexpectedToken(byte)) => {
                (column_of(text, byte), "unexpected token".to_string())
            }
            meval::Error::ParseError(ParseError::MissingRParen(n)) => {
                let plural = if n == 1 { "is" } else { "es" };
                (end, format!("missing {n} closing parenthes{plural}"))
            }
            meval::Error::ParseError(ParseError::MissingArgument) => {
                (end, "expression ends while an operand is expected".to_string())
            }
            other => (1, other.to_string()),
        };
        Error::Parse { line: 1, column, message }
    })
}

fn column_of(text: &str, byte: usize) -> usize {
    text.get(..byte).map_or(byte, |s| s.chars().count()) + 1
}

/// Column of the first occurrence of `name` as a whole identifier.
fn find_name(text: &str, name: &str) -> usize {
    let is_ident = |c: char| c.is_alphanumeric() || c == '_';
    let mut from = 0;
    while let Some(i) = text[from..].find(name) {
        let start = from + i;
        let end = start + name.len();
        let before = text[..start].chars().next_back();
        let after = text[end..].chars().next();
        if !before.is_some_and(is_ident) && !after.is_some_and(is_ident) {
            return column_of(text, start);
        }
        from = end;
    }
    1
}

fn name_error(text: &str, name: &str, message: &str) -> Error {
    Error::Parse {
        line: 1,
        column: find_name(text, name),
        message: message.to_string(),
    }
}

fn char_error(text: &str, c: char, message: &str) -> Error {
    Error::Parse {
        line: 1,
        column: text.find(c).map_or(1, |b| column_of(text, b)),
        message: message.to_string(),
    }
}

fn unknown_function(text: &str, name: &str) -> Error {
    let known: Vec<&str> = UNARY.iter().map(|(n, _)| *n).chain(["pow"]).collect();
    name_error(text, name, &format!("unknown function `{name}` (known: {})", known.join(", ")))
}
