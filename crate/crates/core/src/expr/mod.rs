//! Holomorphic expressions in one complex variable `z`.
//!
//! An [`Expr`] is an immutable, reference-counted syntax tree. It can be
//! parsed from text, evaluated at a point, differentiated symbolically and
//! constant-folded. There is deliberately no conjugation node: every
//! expression is holomorphic away from the principal branch cuts of `log`
//! and `sqrt`, which lie on the non-positive real axis.
//!
//! ```
//! use minsurf::expr::Expr;
//! use minsurf::Complex;
//!
//! let a = Expr::parse("(z^2 - 1)/(2*i*z)").unwrap();
//! let v = a.eval(Complex::new(0.0, 1.0)).unwrap();
//! assert!((v - Complex::new(1.0, 0.0)).norm() < 1e-15);
//! ```

mod diff;
mod fold;
mod parse;
mod print;

use std::fmt;
use std::ops;
use std::sync::Arc;

use thiserror::Error;

use crate::Complex;

pub use parse::parse;

/// Errors raised while parsing or evaluating an expression.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("{func} evaluated on its branch cut at {arg}")]
    BranchCut { func: &'static str, arg: Complex },
    #[error("non-finite value")]
    NonFinite,
}

/// One node of the expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Var,
    Const(Complex),
    Add(Expr, Expr),
    Sub(Expr, Expr),
    Mul(Expr, Expr),
    Div(Expr, Expr),
    /// Integer power; negative exponents are allowed.
    Pow(Expr, i32),
    Neg(Expr),
    Log(Expr),
    Exp(Expr),
    Sqrt(Expr),
}

/// Immutable holomorphic expression in `z`. Cloning is cheap.
#[derive(Clone, PartialEq)]
pub struct Expr(Arc<Node>);

impl Expr {
    pub fn new(node: Node) -> Self {
        Expr(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    /// The variable `z`.
    pub fn var() -> Self {
        Expr::new(Node::Var)
    }

    pub fn constant(c: Complex) -> Self {
        Expr::new(Node::Const(c))
    }

    pub fn real(x: f64) -> Self {
        Expr::constant(Complex::new(x, 0.0))
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Expr::constant(Complex::new(0.0, 1.0))
    }

    pub fn parse(text: &str) -> Result<Self, ExprError> {
        parse::parse(text)
    }

    pub fn pow(self, n: i32) -> Self {
        Expr::new(Node::Pow(self, n))
    }

    pub fn ln(self) -> Self {
        Expr::new(Node::Log(self))
    }

    pub fn exp(self) -> Self {
        Expr::new(Node::Exp(self))
    }

    pub fn sqrt(self) -> Self {
        Expr::new(Node::Sqrt(self))
    }

    pub fn as_const(&self) -> Option<Complex> {
        match self.node() {
            Node::Const(c) => Some(*c),
            _ => None,
        }
    }

    /// Evaluate at `z` using principal branches for `log` and `sqrt`.
    pub fn eval(&self, z: Complex) -> Result<Complex, ExprError> {
        if !is_finite(z) {
            return Err(ExprError::NonFinite);
        }
        self.eval_inner(z)
    }

    fn eval_inner(&self, z: Complex) -> Result<Complex, ExprError> {
        let value = match self.node() {
            Node::Var => z,
            Node::Const(c) => *c,
            Node::Add(a, b) => a.eval_inner(z)? + b.eval_inner(z)?,
            Node::Sub(a, b) => a.eval_inner(z)? - b.eval_inner(z)?,
            Node::Mul(a, b) => a.eval_inner(z)? * b.eval_inner(z)?,
            Node::Div(a, b) => {
                let num = a.eval_inner(z)?;
                let den = b.eval_inner(z)?;
                if den == Complex::new(0.0, 0.0) {
                    return Err(ExprError::DivisionByZero);
                }
                num / den
            }
            Node::Pow(a, n) => {
                let base = a.eval_inner(z)?;
                if *n < 0 && base == Complex::new(0.0, 0.0) {
                    return Err(ExprError::DivisionByZero);
                }
                base.powi(*n)
            }
            Node::Neg(a) => -a.eval_inner(z)?,
            Node::Log(a) => {
                let arg = a.eval_inner(z)?;
                check_cut("log", arg)?;
                arg.ln()
            }
            Node::Exp(a) => a.eval_inner(z)?.exp(),
            Node::Sqrt(a) => {
                let arg = a.eval_inner(z)?;
                check_cut("sqrt", arg)?;
                arg.sqrt()
            }
        };
        if is_finite(value) {
            Ok(value)
        } else {
            Err(ExprError::NonFinite)
        }
    }

    /// Exact symbolic derivative with respect to `z`.
    pub fn differentiate(&self) -> Expr {
        diff::differentiate(self)
    }

    /// Collapse constant subtrees and drop trivial identities (`x+0`, `x*1`, ...).
    pub fn constant_fold(&self) -> Expr {
        fold::constant_fold(self)
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self.node() {
            Node::Var | Node::Const(_) => 1,
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                1 + a.size() + b.size()
            }
            Node::Pow(a, _) | Node::Neg(a) | Node::Log(a) | Node::Exp(a) | Node::Sqrt(a) => {
                1 + a.size()
            }
        }
    }
}

pub(crate) fn is_finite(c: Complex) -> bool {
    c.re.is_finite() && c.im.is_finite()
}

fn check_cut(func: &'static str, arg: Complex) -> Result<(), ExprError> {
    if arg.im == 0.0 && arg.re <= 0.0 {
        Err(ExprError::BranchCut { func, arg })
    } else {
        Ok(())
    }
}

/// Parse `text` and evaluate it at `z`.
pub fn eval_str(text: &str, z: Complex) -> Result<Complex, ExprError> {
    parse(text)?.eval(z)
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self.node(), f)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print::write_expr(f, self, 0)
    }
}

impl From<f64> for Expr {
    fn from(x: f64) -> Self {
        Expr::real(x)
    }
}

impl From<Complex> for Expr {
    fn from(c: Complex) -> Self {
        Expr::constant(c)
    }
}

impl std::str::FromStr for Expr {
    type Err = ExprError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $node:ident) => {
        impl ops::$trait for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::new(Node::$node(self, rhs))
            }
        }

        impl ops::$trait<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                Expr::new(Node::$node(self.clone(), rhs.clone()))
            }
        }
    };
}

binop!(Add, add, Add);
binop!(Sub, sub, Sub);
binop!(Mul, mul, Mul);
binop!(Div, div, Div);

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::new(Node::Neg(self))
    }
}
