use std::f64::consts::PI;

use super::{Expr, ExprError, Node};
use crate::Complex;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num { value: f64, integral: bool },
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokenize(text: &'a str) -> Result<Vec<(Tok, usize)>, ExprError> {
        let mut lx = Lexer {
            src: text.as_bytes(),
            pos: 0,
        };
        let mut out = Vec::new();
        loop {
            lx.skip_ws();
            let start = lx.pos;
            let Some(&b) = lx.src.get(lx.pos) else {
                out.push((Tok::End, start));
                return Ok(out);
            };
            let tok = match b {
                b'+' => lx.single(Tok::Plus),
                b'-' => lx.single(Tok::Minus),
                b'*' => lx.single(Tok::Star),
                b'/' => lx.single(Tok::Slash),
                b'^' => lx.single(Tok::Caret),
                b'(' => lx.single(Tok::LParen),
                b')' => lx.single(Tok::RParen),
                b'0'..=b'9' | b'.' => lx.number()?,
                b if b.is_ascii_alphabetic() || b == b'_' => lx.ident(),
                _ => {
                    return Err(syntax(
                        start,
                        format!("unexpected character `{}`", b as char),
                    ));
                }
            };
            out.push((tok, start));
        }
    }

    fn skip_ws(&mut self) {
        while self
            .src
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_whitespace())
        {
            self.pos += 1;
        }
    }

    fn single(&mut self, t: Tok) -> Tok {
        self.pos += 1;
        t
    }

    fn digits(&mut self) -> usize {
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        self.pos - start
    }

    fn number(&mut self) -> Result<Tok, ExprError> {
        let start = self.pos;
        let mut integral = true;
        let mut n = self.digits();
        if self.src.get(self.pos) == Some(&b'.') {
            integral = false;
            self.pos += 1;
            n += self.digits();
        }
        if n == 0 {
            return Err(syntax(start, "malformed number".into()));
        }
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if self.digits() == 0 {
                // not an exponent; leave `e` for the identifier lexer
                self.pos = save;
            } else {
                integral = false;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        let value: f64 = text
            .parse()
            .map_err(|_| syntax(start, format!("malformed number `{text}`")))?;
        if !value.is_finite() {
            return Err(syntax(start, format!("number `{text}` overflows")));
        }
        Ok(Tok::Num { value, integral })
    }

    fn ident(&mut self) -> Tok {
        let start = self.pos;
        while self
            .src
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_')
        {
            self.pos += 1;
        }
        Tok::Ident(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }
}

fn syntax(offset: usize, message: String) -> ExprError {
    ExprError::Syntax { offset, message }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

/// Parse an expression in `z`.
///
/// ```text
/// expr     := term (('+'|'-') term)*
/// term     := unary (('*'|'/') unary)*
/// unary    := '-' unary | power
/// power    := atom ('^' exponent)?
/// exponent := '-'? INT | '(' '-'? INT ')'
/// atom     := 'z' | 'i' | 'pi' | NUMBER | func '(' expr ')' | '(' expr ')'
/// func     := 'log' | 'exp' | 'sqrt'
/// ```
pub fn parse(text: &str) -> Result<Expr, ExprError> {
    let toks = Lexer::tokenize(text)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    match p.peek() {
        Tok::End => Ok(e),
        t => Err(syntax(p.offset(), format!("unexpected {}", describe(t)))),
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num { value, .. } => format!("number {value}"),
        Tok::Ident(s) => format!("identifier `{s}`"),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::Slash => "`/`".into(),
        Tok::Caret => "`^`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::End => "end of input".into(),
    }
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), ExprError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(syntax(
                self.offset(),
                format!(
                    "expected {}, found {}",
                    describe(&want),
                    describe(self.peek())
                ),
            ))
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::new(Node::Add(lhs, self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::new(Node::Sub(lhs, self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::new(Node::Mul(lhs, self.unary()?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Expr::new(Node::Div(lhs, self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::new(Node::Neg(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let parens = *self.peek() == Tok::LParen;
        if parens {
            self.bump();
        }
        let negative = *self.peek() == Tok::Minus;
        if negative {
            self.bump();
        }
        let at = self.offset();
        let n = match self.bump() {
            Tok::Num {
                value,
                integral: true,
            } if value <= i32::MAX as f64 => value as i32,
            t => {
                return Err(syntax(
                    at,
                    format!("exponent must be an integer, found {}", describe(&t)),
                ))
            }
        };
        if parens {
            self.expect(Tok::RParen)?;
        }
        Ok(Expr::new(Node::Pow(base, if negative { -n } else { n })))
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let at = self.offset();
        match self.bump() {
            Tok::Num { value, .. } => Ok(Expr::real(value)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "z" => Ok(Expr::var()),
                "i" => Ok(Expr::constant(Complex::new(0.0, 1.0))),
                "pi" => Ok(Expr::real(PI)),
                "log" | "exp" | "sqrt" => {
                    self.expect(Tok::LParen)?;
                    let arg = self.expr()?;
                    self.expect(Tok::RParen)?;
                    Ok(Expr::new(match name.as_str() {
                        "log" => Node::Log(arg),
                        "exp" => Node::Exp(arg),
                        _ => Node::Sqrt(arg),
                    }))
                }
                _ => Err(ExprError::UnknownIdentifier { name, offset: at }),
            },
            t => Err(syntax(at, format!("unexpected {}", describe(&t)))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> Expr {
        Expr::var()
    }
    fn k(x: f64) -> Expr {
        Expr::real(x)
    }

    #[test]
    fn parses_variable() {
        assert_eq!(parse("z").unwrap(), z());
        assert_eq!(parse("  z\t").unwrap(), z());
    }

    #[test]
    fn parses_quotient_structure() {
        let want = (z().pow(2) - k(1.0)) / ((k(2.0) * Expr::i()) * z());
        assert_eq!(parse("(z^2 - 1)/(2*i*z)").unwrap(), want);
    }

    #[test]
    fn parses_log_expression() {
        let num = ((k(1.0) + Expr::i() * k(PI)) + z().pow(2)) - k(2.0) * z().ln();
        let want = num / (k(4.0) * Expr::i());
        assert_eq!(parse("(1 + i*pi + z^2 - 2*log(z))/(4*i)").unwrap(), want);
    }

    #[test]
    fn precedence() {
        assert_eq!(parse("1+2*z").unwrap(), k(1.0) + k(2.0) * z());
        assert_eq!(parse("1-z-z").unwrap(), (k(1.0) - z()) - z());
        assert_eq!(parse("-z^2").unwrap(), -(z().pow(2)));
        assert_eq!(parse("2*-z").unwrap(), k(2.0) * -z());
        assert_eq!(parse("z^-2").unwrap(), z().pow(-2));
        assert_eq!(parse("z^(-3)").unwrap(), z().pow(-3));
        assert_eq!(parse("z/2/z").unwrap(), (z() / k(2.0)) / z());
    }

    #[test]
    fn numbers() {
        assert_eq!(parse("1.5e-3").unwrap(), k(1.5e-3));
        assert_eq!(parse(".25").unwrap(), k(0.25));
        assert_eq!(parse("1E2").unwrap(), k(100.0));
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        match parse("z + * 2") {
            Err(ExprError::Syntax { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("{other:?}"),
        }
        match parse("(z + 1") {
            Err(ExprError::Syntax { offset, .. }) => assert_eq!(offset, 6),
            other => panic!("{other:?}"),
        }
        match parse("z^2.5") {
            Err(ExprError::Syntax { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse("z^2^3"),
            Err(ExprError::Syntax { offset: 3, .. })
        ));
        assert!(matches!(
            parse("2z"),
            Err(ExprError::Syntax { offset: 1, .. })
        ));
        assert!(matches!(
            parse(""),
            Err(ExprError::Syntax { offset: 0, .. })
        ));
        assert!(matches!(
            parse("z $"),
            Err(ExprError::Syntax { offset: 2, .. })
        ));
        assert!(matches!(
            parse("log z"),
            Err(ExprError::Syntax { offset: 4, .. })
        ));
    }

    #[test]
    fn unknown_identifier() {
        assert_eq!(
            parse("1 + sin(z)"),
            Err(ExprError::UnknownIdentifier {
                name: "sin".into(),
                offset: 4
            })
        );
        assert!(matches!(
            parse("2e"),
            Err(ExprError::Syntax { .. }) | Err(ExprError::UnknownIdentifier { .. })
        ));
    }
}
