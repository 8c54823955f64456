use std::fmt;

use super::{Expr, Node};
use crate::Complex;

const SUM: u8 = 1;
const PRODUCT: u8 = 2;
const UNARY: u8 = 3;
const ATOM: u8 = 5;

fn precedence(e: &Expr) -> u8 {
    match e.node() {
        Node::Add(..) | Node::Sub(..) => SUM,
        Node::Mul(..) | Node::Div(..) => PRODUCT,
        Node::Neg(_) => UNARY,
        Node::Pow(..) => 4,
        Node::Const(c) if c.im == 0.0 && c.re.is_sign_negative() => UNARY,
        _ => ATOM,
    }
}

fn write_real(f: &mut fmt::Formatter<'_>, x: f64) -> fmt::Result {
    // Debug formatting of f64 is the shortest string that round-trips.
    write!(f, "{x:?}")
}

fn write_const(f: &mut fmt::Formatter<'_>, c: Complex) -> fmt::Result {
    if c.im == 0.0 {
        write_real(f, c.re)
    } else if c.re == 0.0 && c.im == 1.0 {
        f.write_str("i")
    } else {
        f.write_str("(")?;
        write_real(f, c.re)?;
        f.write_str(if c.im.is_sign_negative() {
            " - "
        } else {
            " + "
        })?;
        write_real(f, c.im.abs())?;
        f.write_str("*i)")
    }
}

/// Print `e` so that re-parsing yields the same tree, parenthesizing only
/// where a child binds looser than `min_prec`.
pub(super) fn write_expr(f: &mut fmt::Formatter<'_>, e: &Expr, min_prec: u8) -> fmt::Result {
    let paren = precedence(e) < min_prec;
    if paren {
        f.write_str("(")?;
    }
    match e.node() {
        Node::Var => f.write_str("z")?,
        Node::Const(c) => write_const(f, *c)?,
        Node::Add(a, b) => binary(f, a, " + ", b, SUM)?,
        Node::Sub(a, b) => binary(f, a, " - ", b, SUM)?,
        Node::Mul(a, b) => binary(f, a, "*", b, PRODUCT)?,
        Node::Div(a, b) => binary(f, a, "/", b, PRODUCT)?,
        Node::Neg(a) => {
            f.write_str("-")?;
            write_expr(f, a, UNARY)?;
        }
        Node::Pow(a, n) => {
            write_expr(f, a, ATOM)?;
            write!(f, "^{n}")?;
        }
        Node::Log(a) => call(f, "log", a)?,
        Node::Exp(a) => call(f, "exp", a)?,
        Node::Sqrt(a) => call(f, "sqrt", a)?,
    }
    if paren {
        f.write_str(")")?;
    }
    Ok(())
}

fn binary(f: &mut fmt::Formatter<'_>, a: &Expr, op: &str, b: &Expr, prec: u8) -> fmt::Result {
    write_expr(f, a, prec)?;
    f.write_str(op)?;
    write_expr(f, b, prec + 1)
}

fn call(f: &mut fmt::Formatter<'_>, name: &str, a: &Expr) -> fmt::Result {
    write!(f, "{name}(")?;
    write_expr(f, a, 0)?;
    f.write_str(")")
}

#[cfg(test)]
mod tests {
    use crate::expr::{parse, Expr};
    use crate::Complex;

    fn roundtrip(s: &str) -> String {
        parse(s).unwrap().to_string()
    }

    #[test]
    fn prints_minimal_parentheses() {
        assert_eq!(roundtrip("(z^2 - 1)/(2*i*z)"), "(z^2 - 1.0)/(2.0*i*z)");
        assert_eq!(roundtrip("1 - (z - 2)"), "1.0 - (z - 2.0)");
        assert_eq!(roundtrip("-(z+1)^2"), "-(z + 1.0)^2");
        assert_eq!(roundtrip("(-z)^2"), "(-z)^2");
        assert_eq!(roundtrip("z^-2"), "z^-2");
        assert_eq!(roundtrip("log(exp(z)*2)"), "log(exp(z)*2.0)");
    }

    #[test]
    fn prints_complex_constants() {
        let e = Expr::constant(Complex::new(1.5, -2.0)) * Expr::var();
        assert_eq!(e.to_string(), "(1.5 - 2.0*i)*z");
        let back = parse(&e.to_string()).unwrap();
        let z = Complex::new(0.3, 0.7);
        assert_eq!(back.eval(z).unwrap(), e.eval(z).unwrap());
        assert_eq!((Expr::real(-2.0) * Expr::var()).to_string(), "-2.0*z");
        assert_eq!((Expr::var() * Expr::real(-2.0)).to_string(), "z*-2.0");
        assert_eq!(Expr::real(1e-20).to_string(), "1e-20");
    }

    #[test]
    fn print_parse_print_is_a_fixed_point() {
        for s in [
            "(1 + i*pi + z^2 - 2*log(z))/(4*i)",
            "z - (z - (z - 1))",
            "--z",
            "sqrt(z)/(z*(z+i))^-3",
        ] {
            let once = roundtrip(s);
            assert_eq!(roundtrip(&once), once);
        }
    }
}
