use super::diff::{add, div, mul, neg, pow, sub};
use super::{Expr, Node};
use crate::Complex;

pub(super) fn constant_fold(e: &Expr) -> Expr {
    let folded = match e.node() {
        Node::Var | Node::Const(_) => return e.clone(),
        Node::Add(a, b) => add(constant_fold(a), constant_fold(b)),
        Node::Sub(a, b) => sub(constant_fold(a), constant_fold(b)),
        Node::Mul(a, b) => mul_no_zero(constant_fold(a), constant_fold(b)),
        Node::Div(a, b) => Expr::new(Node::Div(constant_fold(a), constant_fold(b))),
        Node::Pow(a, n) => Expr::new(Node::Pow(constant_fold(a), *n)),
        Node::Neg(a) => neg(constant_fold(a)),
        Node::Log(a) => Expr::new(Node::Log(constant_fold(a))),
        Node::Exp(a) => Expr::new(Node::Exp(constant_fold(a))),
        Node::Sqrt(a) => Expr::new(Node::Sqrt(constant_fold(a))),
    };
    collapse(folded)
}

// `x*0` is kept: dropping `x` could hide a domain error of `x`.
fn mul_no_zero(a: Expr, b: Expr) -> Expr {
    let zero = Some(Complex::new(0.0, 0.0));
    if (a.as_const() == zero) != (b.as_const() == zero) {
        Expr::new(Node::Mul(a, b))
    } else {
        mul(a, b)
    }
}

fn all_const(e: &Expr) -> bool {
    match e.node() {
        Node::Var => false,
        Node::Const(_) => true,
        Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
            a.as_const().is_some() && b.as_const().is_some()
        }
        Node::Pow(a, _) | Node::Neg(a) | Node::Log(a) | Node::Exp(a) | Node::Sqrt(a) => {
            a.as_const().is_some()
        }
    }
}

fn collapse(e: Expr) -> Expr {
    if all_const(&e) {
        // Any point works: the subtree does not mention z. Failing subtrees
        // (1/0, log(-1)) stay unfolded so the error surfaces at evaluation.
        if let Ok(v) = e.eval(Complex::new(0.0, 0.0)) {
            return Expr::constant(v);
        }
        return e;
    }
    match e.node() {
        Node::Div(a, b) => div(a.clone(), b.clone()),
        Node::Pow(a, n) => pow(a.clone(), *n),
        _ => e,
    }
}

#[cfg(test)]
mod tests {
    use crate::expr::{parse, Expr, Node};
    use crate::Complex;

    #[test]
    fn folds_constant_products() {
        let e = parse("2*3*z").unwrap().constant_fold();
        assert_eq!(e, Expr::real(6.0) * Expr::var());
        assert_eq!(e.to_string(), "6.0*z");
    }

    #[test]
    fn drops_additive_zero() {
        assert_eq!(parse("z + 0").unwrap().constant_fold(), Expr::var());
        assert_eq!(parse("0 + z*1").unwrap().constant_fold(), Expr::var());
        assert_eq!(parse("(z/1)^1").unwrap().constant_fold(), Expr::var());
    }

    #[test]
    fn folds_reciprocal_of_4i() {
        let e = Expr::new(Node::Div(Expr::real(1.0), Expr::real(4.0) * Expr::i()));
        let folded = e.constant_fold();
        assert_eq!(folded.as_const(), Some(Complex::new(0.0, -0.25)));
    }

    #[test]
    fn keeps_failing_constant_subtrees() {
        let e = parse("1/0 + z").unwrap().constant_fold();
        assert!(e.eval(Complex::new(0.0, 1.0)).is_err());
        let e = parse("log(0*z)").unwrap().constant_fold();
        assert!(e.eval(Complex::new(0.0, 1.0)).is_err());
    }

    #[test]
    fn folding_preserves_values() {
        let s = "(1 + i*pi + z^2 - 2*log(z))/(4*i)";
        let e = parse(s).unwrap();
        let f = e.constant_fold();
        assert!(f.size() < e.size());
        let z = Complex::new(-0.7, 0.4);
        let (a, b) = (e.eval(z).unwrap(), f.eval(z).unwrap());
        assert!((a - b).norm() <= 1e-14 * a.norm());
    }
}
