//! Arithmetic expressions in `x` and `y`.
//!
//! Grammar (loosest to tightest binding):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' unary)?            right associative
//! atom    := number | 'x' | 'y' | 'pi' | name '(' expr ')' | 'pow' '(' expr ',' expr ')' | '(' expr ')'
//! ```
//!
//! Function names: `sin cos exp ln abs sqrt gamma`, plus the two-argument
//! `pow(a, b)` which parses to the same node as `a ^ b`.

mod diff;
mod parser;

use std::fmt;

pub use parser::parse;

use crate::error::{Error, Result};
use crate::special;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    Y,
}

impl Var {
    pub fn name(self) -> char {
        match self {
            Var::X => 'x',
            Var::Y => 'y',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Pow => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Ln,
    Abs,
    Sqrt,
    Gamma,
}

impl Func {
    pub const ALL: [Func; 7] = [
        Func::Sin,
        Func::Cos,
        Func::Exp,
        Func::Ln,
        Func::Abs,
        Func::Sqrt,
        Func::Gamma,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Abs => "abs",
            Func::Sqrt => "sqrt",
            Func::Gamma => "gamma",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// Expression tree. Immutable once built; cloning is cheap enough at the
/// sizes the CLI deals with.
#[derive(Debug, Clone, PartialEq)]
pub enum Ast {
    Num(f64),
    Pi,
    Var(Var),
    Neg(Box<Ast>),
    Binary(BinOp, Box<Ast>, Box<Ast>),
    Call(Func, Box<Ast>),
}

const NEG_PRECEDENCE: u8 = 3;
const ATOM_PRECEDENCE: u8 = 5;

impl Ast {
    pub fn num(v: f64) -> Ast {
        Ast::Num(v)
    }

    pub fn x() -> Ast {
        Ast::Var(Var::X)
    }

    pub fn y() -> Ast {
        Ast::Var(Var::Y)
    }

    pub fn binary(op: BinOp, lhs: Ast, rhs: Ast) -> Ast {
        Ast::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn call(func: Func, arg: Ast) -> Ast {
        Ast::Call(func, Box::new(arg))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(inner: Ast) -> Ast {
        Ast::Neg(Box::new(inner))
    }

    /// True when `var` occurs anywhere in the tree.
    pub fn depends_on(&self, var: Var) -> bool {
        match self {
            Ast::Num(_) | Ast::Pi => false,
            Ast::Var(v) => *v == var,
            Ast::Neg(e) | Ast::Call(_, e) => e.depends_on(var),
            Ast::Binary(_, l, r) => l.depends_on(var) || r.depends_on(var),
        }
    }

    /// Replaces every occurrence of `var` by `with`.
    pub fn substitute(&self, var: Var, with: &Ast) -> Ast {
        match self {
            Ast::Var(v) if *v == var => with.clone(),
            Ast::Num(_) | Ast::Pi | Ast::Var(_) => self.clone(),
            Ast::Neg(e) => Ast::neg(e.substitute(var, with)),
            Ast::Call(f, e) => Ast::call(*f, e.substitute(var, with)),
            Ast::Binary(op, l, r) => {
                Ast::binary(*op, l.substitute(var, with), r.substitute(var, with))
            }
        }
    }

    /// Evaluates the tree; `y` may be omitted for expressions in `x` only.
    pub fn eval(&self, x: f64, y: Option<f64>) -> Result<f64> {
        match self {
            Ast::Num(v) => Ok(*v),
            Ast::Pi => Ok(std::f64::consts::PI),
            Ast::Var(Var::X) => Ok(x),
            Ast::Var(Var::Y) => y.ok_or(Error::UnboundVariable('y')),
            Ast::Neg(e) => Ok(-e.eval(x, y)?),
            Ast::Binary(op, l, r) => {
                let a = l.eval(x, y)?;
                let b = r.eval(x, y)?;
                apply_binary(*op, a, b)
            }
            Ast::Call(f, e) => apply_func(*f, e.eval(x, y)?),
        }
    }

    /// Evaluates an expression in `x` alone.
    pub fn eval_x(&self, x: f64) -> Result<f64> {
        self.eval(x, None)
    }

    fn precedence(&self) -> u8 {
        match self {
            Ast::Binary(op, ..) => op.precedence(),
            Ast::Neg(_) => NEG_PRECEDENCE,
            Ast::Num(v) if v.is_sign_negative() => NEG_PRECEDENCE,
            _ => ATOM_PRECEDENCE,
        }
    }

    /// Symbolic derivative with respect to `var`, simplified.
    pub fn differentiate(&self, var: Var) -> Result<Ast> {
        diff::differentiate(self, var).map(|d| diff::simplify(&d))
    }

    /// Applies [`Ast::differentiate`] `order` times.
    pub fn nth_derivative(&self, var: Var, order: usize) -> Result<Ast> {
        let mut current = self.clone();
        for _ in 0..order {
            current = current.differentiate(var)?;
        }
        Ok(current)
    }

    /// Constant folding and identity elimination.
    pub fn simplified(&self) -> Ast {
        diff::simplify(self)
    }
}

fn apply_binary(op: BinOp, a: f64, b: f64) -> Result<f64> {
    let value = match op {
        BinOp::Add => a + b,
        BinOp::Sub => a - b,
        BinOp::Mul => a * b,
        BinOp::Div => {
            if b == 0.0 {
                return Err(Error::domain("/", format!("division of {a} by zero")));
            }
            a / b
        }
        BinOp::Pow => {
            if a == 0.0 && b < 0.0 {
                return Err(Error::domain(
                    "^",
                    format!("0 raised to negative power {b}"),
                ));
            }
            if a < 0.0 && b.fract() != 0.0 {
                return Err(Error::domain(
                    "^",
                    format!("negative base {a} with non-integer exponent {b}"),
                ));
            }
            a.powf(b)
        }
    };
    if value.is_finite() || !(a.is_finite() && b.is_finite()) {
        Ok(value)
    } else {
        Err(Error::domain(
            op.symbol(),
            format!("overflow evaluating {a} {} {b}", op.symbol()),
        ))
    }
}

fn apply_func(f: Func, v: f64) -> Result<f64> {
    let value = match f {
        Func::Sin => v.sin(),
        Func::Cos => v.cos(),
        Func::Exp => v.exp(),
        Func::Ln => {
            if v <= 0.0 {
                return Err(Error::domain("ln", format!("argument {v} is not positive")));
            }
            v.ln()
        }
        Func::Abs => v.abs(),
        Func::Sqrt => {
            if v < 0.0 {
                return Err(Error::domain("sqrt", format!("argument {v} is negative")));
            }
            v.sqrt()
        }
        Func::Gamma => special::gammafn(v)?,
    };
    if value.is_finite() || !v.is_finite() {
        Ok(value)
    } else {
        Err(Error::domain(f.name(), format!("overflow at argument {v}")))
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, child: &Ast, min_precedence: u8) -> fmt::Result {
    if child.precedence() < min_precedence {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

/// Pretty printer with minimal parentheses; output re-parses to the same tree.
impl fmt::Display for Ast {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // shortest decimal that round-trips, never in exponent form
            Ast::Num(v) if v.is_sign_negative() => write!(f, "-{}", v.abs()),
            Ast::Num(v) => write!(f, "{v}"),
            Ast::Pi => f.write_str("pi"),
            Ast::Var(v) => write!(f, "{}", v.name()),
            Ast::Neg(e) => {
                f.write_str("-")?;
                write_child(f, e, NEG_PRECEDENCE)
            }
            Ast::Call(func, e) => write!(f, "{}({e})", func.name()),
            Ast::Binary(op, l, r) => {
                let p = op.precedence();
                if *op == BinOp::Pow {
                    write_child(f, l, ATOM_PRECEDENCE)?;
                    f.write_str("^")?;
                    write_child(f, r, NEG_PRECEDENCE)
                } else {
                    write_child(f, l, p)?;
                    write!(f, " {} ", op.symbol())?;
                    write_child(f, r, p + 1)
                }
            }
        }
    }
}

impl std::str::FromStr for Ast {
    type Err = Error;

    fn from_str(s: &str) -> Result<Ast> {
        Ok(parse(s)?)
    }
}
