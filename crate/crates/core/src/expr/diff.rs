use super::{Expr, Node};
use crate::Complex;

fn is_value(e: &Expr, v: f64) -> bool {
    e.as_const() == Some(Complex::new(v, 0.0))
}

// Simplifying constructors. They only remove exact zeros and ones so the
// derivative tree stays small; anything else is left to `constant_fold`.

pub(super) fn add(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) => Expr::constant(x + y),
        _ if is_value(&a, 0.0) => b,
        _ if is_value(&b, 0.0) => a,
        _ => Expr::new(Node::Add(a, b)),
    }
}

pub(super) fn sub(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) => Expr::constant(x - y),
        _ if is_value(&b, 0.0) => a,
        _ if is_value(&a, 0.0) => neg(b),
        _ => Expr::new(Node::Sub(a, b)),
    }
}

pub(super) fn mul(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) => Expr::constant(x * y),
        _ if is_value(&a, 0.0) || is_value(&b, 0.0) => Expr::real(0.0),
        _ if is_value(&a, 1.0) => b,
        _ if is_value(&b, 1.0) => a,
        _ => Expr::new(Node::Mul(a, b)),
    }
}

pub(super) fn div(a: Expr, b: Expr) -> Expr {
    if is_value(&a, 0.0) {
        Expr::real(0.0)
    } else if is_value(&b, 1.0) {
        a
    } else {
        Expr::new(Node::Div(a, b))
    }
}

pub(super) fn neg(a: Expr) -> Expr {
    match a.node() {
        Node::Const(c) => Expr::constant(-c),
        Node::Neg(inner) => inner.clone(),
        _ => Expr::new(Node::Neg(a)),
    }
}

pub(super) fn pow(a: Expr, n: i32) -> Expr {
    match n {
        0 => Expr::real(1.0),
        1 => a,
        _ => Expr::new(Node::Pow(a, n)),
    }
}

pub(super) fn differentiate(e: &Expr) -> Expr {
    match e.node() {
        Node::Var => Expr::real(1.0),
        Node::Const(_) => Expr::real(0.0),
        Node::Add(a, b) => add(differentiate(a), differentiate(b)),
        Node::Sub(a, b) => sub(differentiate(a), differentiate(b)),
        Node::Mul(a, b) => add(
            mul(differentiate(a), b.clone()),
            mul(a.clone(), differentiate(b)),
        ),
        Node::Div(a, b) => {
            let da = differentiate(a);
            let db = differentiate(b);
            if is_value(&db, 0.0) {
                div(da, b.clone())
            } else {
                div(
                    sub(mul(da, b.clone()), mul(a.clone(), db)),
                    pow(b.clone(), 2),
                )
            }
        }
        Node::Pow(a, n) => {
            if *n == 0 {
                return Expr::real(0.0);
            }
            mul(
                mul(Expr::real(f64::from(*n)), pow(a.clone(), n - 1)),
                differentiate(a),
            )
        }
        Node::Neg(a) => neg(differentiate(a)),
        Node::Log(a) => div(differentiate(a), a.clone()),
        Node::Exp(a) => mul(e.clone(), differentiate(a)),
        Node::Sqrt(a) => div(differentiate(a), mul(Expr::real(2.0), e.clone())),
    }
}

#[cfg(test)]
mod tests {
    use crate::expr::parse;
    use crate::Complex;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn central_difference(s: &str, z: Complex, h: f64) -> Complex {
        let e = parse(s).unwrap();
        (e.eval(z + h).unwrap() - e.eval(z - h).unwrap()) / (2.0 * h)
    }

    #[test]
    fn power_rule() {
        let d = parse("z^2").unwrap().differentiate();
        assert_eq!(d.to_string(), "2.0*z");
    }

    #[test]
    fn cayley_quotient_derivative_at_i() {
        // oracle: central difference, step 1e-5
        let s = "(z - i)/(z + i)";
        let fd = central_difference(s, c(0.0, 1.0), 1e-5);
        assert!((fd - c(0.0, -0.5)).norm() < 1e-9, "oracle {fd}");
        let d = parse(s).unwrap().differentiate().eval(c(0.0, 1.0)).unwrap();
        assert!((d - c(0.0, -0.5)).norm() < 1e-14, "{d}");
    }

    #[test]
    fn extremal_m_derivative_at_i_is_one() {
        let s = "(1 + i*pi + z^2 - 2*log(z))/(4*i)";
        let fd = central_difference(s, c(0.0, 1.0), 1e-5);
        assert!((fd - c(1.0, 0.0)).norm() < 1e-9, "oracle {fd}");
        let d = parse(s).unwrap().differentiate();
        assert!((d.eval(c(0.0, 1.0)).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn transcendental_rules() {
        let z = c(0.4, 1.3);
        for s in [
            "exp(z^2)",
            "sqrt(z + 1)",
            "log(z*z + i)",
            "1/sqrt(z)",
            "z^-3*exp(-z)",
        ] {
            let d = parse(s).unwrap().differentiate().eval(z).unwrap();
            let fd = central_difference(s, z, 1e-5);
            assert!(
                (d - fd).norm() <= 1e-8 * (1.0 + d.norm()),
                "{s}: {d} vs {fd}"
            );
        }
    }

    #[test]
    fn zero_power_and_constants() {
        assert_eq!(
            parse("z^0").unwrap().differentiate().as_const(),
            Some(c(0.0, 0.0))
        );
        assert_eq!(
            parse("3*i").unwrap().differentiate().as_const(),
            Some(c(0.0, 0.0))
        );
    }
}
