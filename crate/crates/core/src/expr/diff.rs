use super::{Ast, BinOp, Func, Var};
use crate::error::{Error, Result};

fn mul(a: Ast, b: Ast) -> Ast {
    Ast::binary(BinOp::Mul, a, b)
}

fn add(a: Ast, b: Ast) -> Ast {
    Ast::binary(BinOp::Add, a, b)
}

fn sub(a: Ast, b: Ast) -> Ast {
    Ast::binary(BinOp::Sub, a, b)
}

fn div(a: Ast, b: Ast) -> Ast {
    Ast::binary(BinOp::Div, a, b)
}

fn pow(a: Ast, b: Ast) -> Ast {
    Ast::binary(BinOp::Pow, a, b)
}

/// Raw derivative; the caller simplifies.
pub(super) fn differentiate(e: &Ast, var: Var) -> Result<Ast> {
    // anything free of `var` is a constant, whatever its node kind
    if !e.depends_on(var) {
        return Ok(Ast::Num(0.0));
    }
    Ok(match e {
        Ast::Num(_) | Ast::Pi => Ast::Num(0.0),
        Ast::Var(_) => Ast::Num(1.0),
        Ast::Neg(u) => Ast::neg(differentiate(u, var)?),
        Ast::Binary(op, u, v) => {
            let (u, v) = (u.as_ref(), v.as_ref());
            match op {
                BinOp::Add => add(differentiate(u, var)?, differentiate(v, var)?),
                BinOp::Sub => sub(differentiate(u, var)?, differentiate(v, var)?),
                BinOp::Mul => add(
                    mul(differentiate(u, var)?, v.clone()),
                    mul(u.clone(), differentiate(v, var)?),
                ),
                BinOp::Div => div(
                    sub(
                        mul(differentiate(u, var)?, v.clone()),
                        mul(u.clone(), differentiate(v, var)?),
                    ),
                    pow(v.clone(), Ast::Num(2.0)),
                ),
                BinOp::Pow if !v.depends_on(var) => mul(
                    mul(v.clone(), pow(u.clone(), sub(v.clone(), Ast::Num(1.0)))),
                    differentiate(u, var)?,
                ),
                BinOp::Pow if !u.depends_on(var) => mul(
                    mul(e.clone(), Ast::call(Func::Ln, u.clone())),
                    differentiate(v, var)?,
                ),
                BinOp::Pow => mul(
                    e.clone(),
                    add(
                        mul(differentiate(v, var)?, Ast::call(Func::Ln, u.clone())),
                        div(mul(v.clone(), differentiate(u, var)?), u.clone()),
                    ),
                ),
            }
        }
        Ast::Call(func, u) => {
            let du = differentiate(u, var)?;
            let u = u.as_ref().clone();
            let outer = match func {
                Func::Sin => Ast::call(Func::Cos, u),
                Func::Cos => Ast::neg(Ast::call(Func::Sin, u)),
                Func::Exp => Ast::call(Func::Exp, u),
                Func::Ln => div(Ast::Num(1.0), u),
                Func::Sqrt => div(Ast::Num(1.0), mul(Ast::Num(2.0), Ast::call(Func::Sqrt, u))),
                Func::Abs => return Err(Error::NonDifferentiable("abs")),
                Func::Gamma => return Err(Error::NonDifferentiable("gamma")),
            };
            mul(outer, du)
        }
    })
}

fn is_num(e: &Ast, v: f64) -> bool {
    matches!(e, Ast::Num(n) if *n == v)
}

fn fold(op: BinOp, a: f64, b: f64) -> Option<f64> {
    let value = match op {
        BinOp::Add => a + b,
        BinOp::Sub => a - b,
        BinOp::Mul => a * b,
        BinOp::Div if b != 0.0 => a / b,
        BinOp::Pow if !(a < 0.0 && b.fract() != 0.0) && !(a == 0.0 && b < 0.0) => a.powf(b),
        _ => return None,
    };
    value.is_finite().then_some(value)
}

/// Constant folding plus the identities `0 + e`, `e + 0`, `e - 0`, `0 - e`,
/// `0 * e`, `1 * e`, `e / 1`, `e ^ 1`, `e ^ 0` and double negation.
pub(super) fn simplify(e: &Ast) -> Ast {
    match e {
        Ast::Num(_) | Ast::Pi | Ast::Var(_) => e.clone(),
        Ast::Call(f, u) => Ast::call(*f, simplify(u)),
        Ast::Neg(u) => match simplify(u) {
            Ast::Num(v) => Ast::Num(-v),
            Ast::Neg(inner) => *inner,
            other => Ast::neg(other),
        },
        Ast::Binary(op, l, r) => {
            let l = simplify(l);
            let r = simplify(r);
            if let (Ast::Num(a), Ast::Num(b)) = (&l, &r) {
                if let Some(v) = fold(*op, *a, *b) {
                    return Ast::Num(v);
                }
            }
            match op {
                BinOp::Add if is_num(&l, 0.0) => r,
                BinOp::Add | BinOp::Sub if is_num(&r, 0.0) => l,
                BinOp::Sub if is_num(&l, 0.0) => simplify(&Ast::neg(r)),
                BinOp::Mul if is_num(&l, 0.0) || is_num(&r, 0.0) => Ast::Num(0.0),
                BinOp::Mul if is_num(&l, 1.0) => r,
                BinOp::Mul | BinOp::Div if is_num(&r, 1.0) => l,
                BinOp::Pow if is_num(&r, 1.0) => l,
                BinOp::Pow if is_num(&r, 0.0) => Ast::Num(1.0),
                _ => Ast::binary(*op, l, r),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    fn d(src: &str) -> Ast {
        parse(src).unwrap().differentiate(Var::X).unwrap()
    }

    #[test]
    fn square_differentiates_to_two_x() {
        assert_eq!(d("x^2"), mul(Ast::Num(2.0), Ast::x()));
        assert_eq!(d("x^2").to_string(), "2 * x");
    }

    #[test]
    fn product_rule_at_zero() {
        assert_eq!(d("sin(x)*x").eval_x(0.0).unwrap(), 0.0);
    }

    #[test]
    fn exponential_chain_rule() {
        // 2e, cross-checked by central differences in the oracle script
        let v = d("exp(2*x)").eval_x(0.5).unwrap();
        assert!((v - 5.436_563_656_918_09).abs() < 1e-12);
    }

    #[test]
    fn constants_and_identities() {
        assert_eq!(d("7"), Ast::Num(0.0));
        assert_eq!(d("x"), Ast::Num(1.0));
        assert_eq!(d("3*x + 1"), Ast::Num(3.0));
        assert_eq!(d("gamma(1.5) * x"), Ast::call(Func::Gamma, Ast::Num(1.5)));
        assert_eq!(d("abs(2) + x"), Ast::Num(1.0));
    }

    #[test]
    fn abs_and_gamma_are_not_differentiable() {
        let abs = parse("abs(x)").unwrap().differentiate(Var::X);
        assert_eq!(abs, Err(Error::NonDifferentiable("abs")));
        let gamma = parse("gamma(x + 1)").unwrap().differentiate(Var::X);
        assert_eq!(gamma, Err(Error::NonDifferentiable("gamma")));
    }

    #[test]
    fn higher_derivatives() {
        let e = parse("x^3").unwrap();
        assert_eq!(e.nth_derivative(Var::X, 3).unwrap(), Ast::Num(6.0));
        assert_eq!(e.nth_derivative(Var::X, 4).unwrap(), Ast::Num(0.0));
        let s = parse("sin(x)").unwrap().nth_derivative(Var::X, 2).unwrap();
        assert!((s.eval_x(1.0).unwrap() + 1f64.sin()).abs() < 1e-15);
    }

    #[test]
    fn partial_derivatives_in_y() {
        let e = parse("x*y^2").unwrap().differentiate(Var::Y).unwrap();
        assert_eq!(e.eval(3.0, Some(2.0)).unwrap(), 12.0);
    }

    #[test]
    fn variable_exponents() {
        let e = d("2^x");
        let v = e.eval_x(1.0).unwrap();
        assert!((v - 2.0 * 2f64.ln()).abs() < 1e-14);
        let e = d("x^x");
        let v = e.eval_x(2.0).unwrap();
        assert!((v - 4.0 * (2f64.ln() + 1.0)).abs() < 1e-13);
    }

    #[test]
    fn simplify_rules() {
        let s = |src: &str| parse(src).unwrap().simplified().to_string();
        assert_eq!(s("0 + x"), "x");
        assert_eq!(s("x * 1"), "x");
        assert_eq!(s("x^1"), "x");
        assert_eq!(s("x^0"), "1");
        assert_eq!(s("0 - x"), "-x");
        assert_eq!(s("2 * 3 + x"), "6 + x");
        assert_eq!(s("--x"), "x");
        assert_eq!(s("1 / 0 + x"), "1 / 0 + x");
    }
}
