use super::{Ast, BinOp, Func, Var};
use crate::error::ParseError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    Comma,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Op(c) => format!("`{c}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    /// Returns the next token and the byte offset it starts at.
    fn next(&mut self) -> Result<(Tok, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let Some(c) = rest.chars().next() else {
            return Ok((Tok::End, start));
        };
        let tok = match c {
            '+' | '-' | '*' | '/' | '^' => {
                self.pos += 1;
                Tok::Op(c)
            }
            '(' => {
                self.pos += 1;
                Tok::LParen
            }
            ')' => {
                self.pos += 1;
                Tok::RParen
            }
            ',' => {
                self.pos += 1;
                Tok::Comma
            }
            c if c.is_ascii_digit() || c == '.' => {
                let len = number_len(rest.as_bytes());
                let text = &rest[..len];
                let value = text.parse::<f64>().map_err(|_| ParseError {
                    offset: start,
                    expected: "decimal literal".into(),
                    found: format!("`{text}`"),
                })?;
                self.pos += len;
                Tok::Num(value)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let len = rest
                    .bytes()
                    .take_while(|b| b.is_ascii_alphanumeric() || *b == b'_')
                    .count();
                self.pos += len;
                Tok::Ident(rest[..len].to_string())
            }
            other => {
                return Err(ParseError {
                    offset: start,
                    expected: "operator, operand or parenthesis".into(),
                    found: format!("character `{other}`"),
                })
            }
        };
        Ok((tok, start))
    }
}

// digits [. digits] [(e|E) [+|-] digits]
fn number_len(bytes: &[u8]) -> usize {
    let digits = |from: usize| {
        bytes[from..]
            .iter()
            .take_while(|b| b.is_ascii_digit())
            .count()
    };
    let mut i = digits(0);
    if bytes.get(i) == Some(&b'.') {
        i += 1 + digits(i + 1);
    }
    if matches!(bytes.get(i), Some(b'e' | b'E')) {
        let mut j = i + 1;
        if matches!(bytes.get(j), Some(b'+' | b'-')) {
            j += 1;
        }
        let exp_digits = digits(j);
        if exp_digits > 0 {
            i = j + exp_digits;
        }
    }
    i
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    offset: usize,
}

const OPERAND: &str = "number, variable, `pi`, function call or `(`";

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self, ParseError> {
        let mut lexer = Lexer { src, pos: 0 };
        let (tok, offset) = lexer.next()?;
        Ok(Parser { lexer, tok, offset })
    }

    fn bump(&mut self) -> Result<Tok, ParseError> {
        let (tok, offset) = self.lexer.next()?;
        self.offset = offset;
        Ok(std::mem::replace(&mut self.tok, tok))
    }

    fn error(&self, expected: &str) -> ParseError {
        ParseError {
            offset: self.offset,
            expected: expected.to_string(),
            found: self.tok.describe(),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<(), ParseError> {
        if self.tok == tok {
            self.bump()?;
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn expr(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.tok {
                Tok::Op('+') => BinOp::Add,
                Tok::Op('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump()?;
            let rhs = self.term()?;
            lhs = Ast::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.tok {
                Tok::Op('*') => BinOp::Mul,
                Tok::Op('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump()?;
            let rhs = self.unary()?;
            lhs = Ast::binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Ast, ParseError> {
        if self.tok == Tok::Op('-') {
            self.bump()?;
            return Ok(Ast::neg(self.unary()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Ast, ParseError> {
        let base = self.atom()?;
        if self.tok == Tok::Op('^') {
            self.bump()?;
            let exponent = self.unary()?;
            return Ok(Ast::binary(BinOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Ast, ParseError> {
        match self.tok.clone() {
            Tok::Num(v) => {
                self.bump()?;
                Ok(Ast::Num(v))
            }
            Tok::LParen => {
                self.bump()?;
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Ident(name) => match name.as_str() {
                "x" => {
                    self.bump()?;
                    Ok(Ast::Var(Var::X))
                }
                "y" => {
                    self.bump()?;
                    Ok(Ast::Var(Var::Y))
                }
                "pi" => {
                    self.bump()?;
                    Ok(Ast::Pi)
                }
                "pow" => {
                    self.bump()?;
                    self.expect(Tok::LParen, "`(` after `pow`")?;
                    let base = self.expr()?;
                    self.expect(Tok::Comma, "`,` between the two arguments of `pow`")?;
                    let exponent = self.expr()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(Ast::binary(BinOp::Pow, base, exponent))
                }
                other => match Func::from_name(other) {
                    Some(func) => {
                        self.bump()?;
                        self.expect(Tok::LParen, &format!("`(` after `{other}`"))?;
                        let arg = self.expr()?;
                        self.expect(Tok::RParen, "`)`")?;
                        Ok(Ast::call(func, arg))
                    }
                    None => Err(self.error(
                        "variable `x`/`y`, `pi` or one of sin, cos, exp, ln, abs, sqrt, pow, gamma",
                    )),
                },
            },
            _ => Err(self.error(OPERAND)),
        }
    }
}

/// Parses an expression in `x` and `y`.
pub fn parse(source: &str) -> Result<Ast, ParseError> {
    let mut parser = Parser::new(source)?;
    let ast = parser.expr()?;
    if parser.tok != Tok::End {
        return Err(parser.error("operator or end of input"));
    }
    Ok(ast)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn num(v: f64) -> Ast {
        Ast::Num(v)
    }

    #[test]
    fn builds_expected_tree() {
        let ast = parse("x^2 + 1").unwrap();
        assert_eq!(
            ast,
            Ast::binary(
                BinOp::Add,
                Ast::binary(BinOp::Pow, Ast::x(), num(2.0)),
                num(1.0)
            )
        );
    }

    #[test]
    fn power_is_right_associative() {
        let ast = parse("2^3^2").unwrap();
        assert_eq!(
            ast,
            Ast::binary(
                BinOp::Pow,
                num(2.0),
                Ast::binary(BinOp::Pow, num(3.0), num(2.0))
            )
        );
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        assert_eq!(
            parse("-x^2").unwrap(),
            Ast::neg(Ast::binary(BinOp::Pow, Ast::x(), num(2.0)))
        );
        assert_eq!(
            parse("-2*x").unwrap(),
            Ast::binary(BinOp::Mul, Ast::neg(num(2.0)), Ast::x())
        );
    }

    #[test]
    fn literals() {
        assert_eq!(parse("1.5e-3").unwrap(), num(1.5e-3));
        assert_eq!(parse(".25").unwrap(), num(0.25));
        assert_eq!(parse("3.").unwrap(), num(3.0));
        assert_eq!(parse("2E2").unwrap(), num(200.0));
        // the exponent marker without digits is not part of the literal
        assert!(parse("2e").is_err());
    }

    #[test]
    fn incomplete_input_reports_offset() {
        let err = parse("x +").unwrap_err();
        assert_eq!(err.offset, 3);
        assert_eq!(err.found, "end of input");
    }

    #[test]
    fn error_offsets() {
        assert_eq!(parse("").unwrap_err().offset, 0);
        assert_eq!(parse("(x + 1").unwrap_err().offset, 6);
        assert_eq!(parse("x $ 2").unwrap_err().offset, 2);
        assert_eq!(parse("foo(x)").unwrap_err().offset, 0);
        assert_eq!(parse("x 2").unwrap_err().offset, 2);
        assert_eq!(parse("sin x").unwrap_err().offset, 4);
        assert_eq!(parse("pow(x)").unwrap_err().offset, 5);
        assert_eq!(parse("1..2").unwrap_err().offset, 2);
    }
}
