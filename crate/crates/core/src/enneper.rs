//! Minimal graphs from Weierstrass–Enneper data `(p, q)`.
//!
//! The projection of the surface is the harmonic map with `h' = p` and
//! `g' = p q²`, and in isothermal parameters
//!
//! ```text
//! φ₁ = p(1 + q²),  φ₂ = -i p(1 - q²),  φ₃ = 2i p q,
//! (u, v, t) = (Re b + Re ∫φ₁, Im b + Re ∫φ₂, -Re ∫φ₃),
//! λ = |p|(1 + |q|²) = |h'| + |g'|,
//! K = -4|q'|² / (|p|²(1 + |q|²)⁴) = -Δ log λ / λ².
//! ```
//!
//! Gaussian curvature is available by three independent routes: the
//! `(p, q)` formula, the dilatation formula `-|ω'|²/(|h'g'|(1+|ω|)⁴)` and a
//! five-point finite-difference Laplacian of `log λ`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::contour::{self, ContourError, QuadratureConfig};
use crate::expr::{Expr, ExprError};
use crate::harmonic::{self, Domain, GridSpec, HarmonicError, HarmonicMap};
use crate::Complex;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnneperError {
    #[error("evaluation failed at {at}: {source}")]
    Eval {
        at: Complex,
        #[source]
        source: ExprError,
    },
    #[error(transparent)]
    Contour(#[from] ContourError),
    #[error(transparent)]
    Harmonic(#[from] HarmonicError),
    #[error("p({0}) = 0: the projection is not sense-preserving there")]
    Degenerate(Complex),
    #[error("g'({0}) = 0: the dilatation formula is indeterminate there")]
    Indeterminate(Complex),
    #[error("finite-difference stencil of step {step:e} around {z} leaves the domain")]
    StencilOutsideDomain { z: Complex, step: f64 },
    #[error("{0} is not in the upper half-plane")]
    OutsideDomain(Complex),
}

fn eval(e: &Expr, z: Complex) -> Result<Complex, EnneperError> {
    e.eval(z)
        .map_err(|source| EnneperError::Eval { at: z, source })
}

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

/// Weierstrass–Enneper pair plus the normalization `f(base) = base_value`.
#[derive(Debug, Clone)]
pub struct WEData {
    p: Expr,
    q: Expr,
    dq: Expr,
    phi1: Expr,
    phi2: Expr,
    height: Expr,
    base: Complex,
    base_value: Complex,
}

impl WEData {
    /// Data anchored at `f(i) = i`.
    pub fn new(p: Expr, q: Expr) -> Self {
        let i = c(0.0, 1.0);
        Self::build(p, q, i, i)
    }

    pub fn with_base(self, base: Complex, base_value: Complex) -> Result<Self, EnneperError> {
        if !(base.im > 0.0 && base.is_finite()) {
            return Err(EnneperError::OutsideDomain(base));
        }
        if !base_value.is_finite() {
            return Err(EnneperError::Eval {
                at: base,
                source: ExprError::NonFinite,
            });
        }
        Ok(Self::build(self.p, self.q, base, base_value))
    }

    /// Parse `p` and `q` from text.
    pub fn parse(p: &str, q: &str) -> Result<Self, ExprError> {
        Ok(Self::new(Expr::parse(p)?, Expr::parse(q)?))
    }

    /// A minimal graph over the whole half-plane: `p = c/(1 - q²)` makes
    /// `h' - g' = c`, so `Im f = c · Im z` with `f(i) = c·i`.
    pub fn halfplane_graph(q: Expr, c_scale: f64) -> Self {
        let one = Expr::real(1.0);
        let p = Expr::real(c_scale) / (one - q.clone().pow(2));
        Self::build(p, q, c(0.0, 1.0), c(0.0, c_scale))
    }

    fn build(p: Expr, q: Expr, base: Complex, base_value: Complex) -> Self {
        let one = Expr::real(1.0);
        let q2 = q.clone().pow(2);
        let phi1 = p.clone() * (one.clone() + q2.clone());
        let phi2 = Expr::constant(c(0.0, -1.0)) * p.clone() * (one - q2);
        let height = Expr::constant(c(0.0, -2.0)) * p.clone() * q.clone();
        WEData {
            dq: q.differentiate(),
            p,
            q,
            phi1,
            phi2,
            height,
            base,
            base_value,
        }
    }

    pub fn p(&self) -> &Expr {
        &self.p
    }

    pub fn q(&self) -> &Expr {
        &self.q
    }

    pub fn q_prime(&self) -> &Expr {
        &self.dq
    }

    pub fn base(&self) -> Complex {
        self.base
    }

    pub fn base_value(&self) -> Complex {
        self.base_value
    }

    /// Integrand whose real part integrates to the height `t`, i.e. `-φ₃`.
    pub fn height_integrand(&self) -> &Expr {
        &self.height
    }

    /// The projection `f = h + conj(g)` with `h' = p`, `g' = p q²`.
    pub fn harmonic_map(&self) -> HarmonicMap {
        HarmonicMap {
            h_prime: self.p.clone(),
            g_prime: self.p.clone() * self.q.clone().pow(2),
            base_a: self.base,
            base_b: self.base_value,
            closed_form_re: None,
        }
    }

    fn pq(&self, z: Complex) -> Result<(Complex, Complex), EnneperError> {
        Ok((eval(&self.p, z)?, eval(&self.q, z)?))
    }

    /// `(φ₁, φ₂, φ₃) = (p(1+q²), -ip(1-q²), 2ipq)`.
    pub fn phi(&self, z: Complex) -> Result<[Complex; 3], EnneperError> {
        let (p, q) = self.pq(z)?;
        let one = c(1.0, 0.0);
        let i = c(0.0, 1.0);
        Ok([p * (one + q * q), -i * p * (one - q * q), 2.0 * i * p * q])
    }

    /// `|φ₁² + φ₂² + φ₃²|`, zero up to rounding for any data.
    pub fn conformality_residual(&self, z: Complex) -> Result<f64, EnneperError> {
        let phi = self.phi(z)?;
        Ok(phi.iter().map(|f| f * f).sum::<Complex>().norm())
    }

    /// Conformality residual divided by `1 + Σ|φ_k|²`.
    pub fn relative_conformality_residual(&self, z: Complex) -> Result<f64, EnneperError> {
        let phi = self.phi(z)?;
        let scale = 1.0 + phi.iter().map(|f| f.norm_sqr()).sum::<f64>();
        Ok(phi.iter().map(|f| f * f).sum::<Complex>().norm() / scale)
    }

    /// Surface point `(u, v, t)` above the parameter `z`.
    pub fn immerse(&self, z: Complex, cfg: &QuadratureConfig) -> Result<Position, EnneperError> {
        let i1 = contour::integrate_from_base(&self.phi1, self.base, z, cfg)?;
        let i2 = contour::integrate_from_base(&self.phi2, self.base, z, cfg)?;
        let i3 = contour::integrate_from_base(&self.height, self.base, z, cfg)?;
        Ok(Position {
            u: self.base_value.re + i1.re,
            v: self.base_value.im + i2.re,
            t: i3.re,
        })
    }

    /// `λ = |p|(1 + |q|²)`.
    pub fn conformal_factor(&self, z: Complex) -> Result<f64, EnneperError> {
        let (p, q) = self.pq(z)?;
        Ok(p.norm() * (1.0 + q.norm_sqr()))
    }

    /// `K = -4|q'|² / (|p|²(1 + |q|²)⁴)`.
    pub fn gauss_curvature(&self, z: Complex) -> Result<f64, EnneperError> {
        let (p, q) = self.pq(z)?;
        if p == c(0.0, 0.0) {
            return Err(EnneperError::Degenerate(z));
        }
        let dq = eval(&self.dq, z)?;
        Ok(-4.0 * dq.norm_sqr() / (p.norm_sqr() * (1.0 + q.norm_sqr()).powi(4)))
    }

    /// `K = -Δ log λ / λ²` with a five-point Laplacian of step `h`. The
    /// stencil must stay inside the upper half-plane.
    pub fn gauss_curvature_fd(&self, z: Complex, h: f64) -> Result<f64, EnneperError> {
        if !(z.im - h > contour::MIN_IM && h > 0.0) {
            return Err(EnneperError::StencilOutsideDomain { z, step: h });
        }
        let log_lambda = |w: Complex| -> Result<f64, EnneperError> {
            let lambda = self
                .conformal_factor(w)
                .map_err(|_| EnneperError::StencilOutsideDomain { z, step: h })?;
            if lambda > 0.0 {
                Ok(lambda.ln())
            } else {
                Err(EnneperError::Degenerate(w))
            }
        };
        let centre = log_lambda(z)?;
        let sum = log_lambda(z + h)?
            + log_lambda(z - h)?
            + log_lambda(z + c(0.0, h))?
            + log_lambda(z - c(0.0, h))?;
        let laplacian = (sum - 4.0 * centre) / (h * h);
        Ok(-laplacian / (2.0 * centre).exp())
    }

    /// `λ_Ω(z)² / λ(z)²`, the right side of the Schwarz–Pick curvature chain
    /// as usually displayed. See [`WEData::curvature_bound_chain`].
    pub fn curvature_bound(&self, z: Complex, domain: Domain) -> Result<f64, EnneperError> {
        let density = harmonic::hyperbolic_density(domain, z)?;
        let lambda = self.conformal_factor(z)?;
        Ok((density / lambda).powi(2))
    }

    /// `4 λ_Ω(z)² / λ(z)²`. Applying Schwarz–Pick to `K = -4|q'|²/…` keeps
    /// the factor 4, and this is the value that actually bounds `|K|`.
    pub fn curvature_bound_chain(&self, z: Complex, domain: Domain) -> Result<f64, EnneperError> {
        Ok(4.0 * self.curvature_bound(z, domain)?)
    }
}

/// Default finite-difference step `1e-4 · (1 + |z|)`.
pub fn fd_step(z: Complex) -> f64 {
    1e-4 * (1.0 + z.norm())
}

/// `K = -|ω'|² / (|h'g'| (1 + |ω|)⁴)` with `ω = g'/h'`.
///
/// Undefined where `g'` vanishes; use [`WEData::gauss_curvature`] there.
pub fn gauss_curvature_dilatation(m: &HarmonicMap, z: Complex) -> Result<f64, EnneperError> {
    let (h, g) = m.derivatives(z)?;
    if h == c(0.0, 0.0) {
        return Err(EnneperError::Degenerate(z));
    }
    if g.norm() <= f64::EPSILON * h.norm() {
        return Err(EnneperError::Indeterminate(z));
    }
    let omega = m.g_prime.clone() / m.h_prime.clone();
    let d_omega = eval(&omega.differentiate(), z)?;
    Ok(-d_omega.norm_sqr() / ((h * g).norm() * (1.0 + (g / h).norm()).powi(4)))
}

/// `1 / dist(z, ℝ)²`, the sharp curvature bound over the half-plane.
pub fn schober_bound(z: Complex) -> Result<f64, EnneperError> {
    if z.im > 0.0 && z.is_finite() {
        Ok(z.im.powi(-2))
    } else {
        Err(EnneperError::OutsideDomain(z))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Position {
    pub u: f64,
    pub v: f64,
    pub t: f64,
}

/// One evaluated surface point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceSample {
    pub z: Complex,
    pub position: Position,
    pub lambda: f64,
    #[serde(rename = "K")]
    pub k: f64,
    /// `λ_Ω²/λ²` on the half-plane.
    pub bound: f64,
    /// `4λ_Ω²/λ²`, which bounds `|K|`.
    pub bound_chain: f64,
    /// `1/(Im z)²`.
    pub sharp_bound: f64,
    /// `p(z) ≠ 0` and `|q(z)| < 1`.
    pub admissible: bool,
}

impl SurfaceSample {
    /// `|K| · (Im z)²`, at most 1 for graphs over the whole half-plane.
    pub fn ratio(&self) -> f64 {
        self.k.abs() / self.sharp_bound
    }
}

fn sample_point(
    we: &WEData,
    z: Complex,
    cfg: &QuadratureConfig,
) -> Result<SurfaceSample, EnneperError> {
    let (p, q) = we.pq(z)?;
    let position = we.immerse(z, cfg)?;
    Ok(SurfaceSample {
        z,
        position,
        lambda: we.conformal_factor(z)?,
        k: we.gauss_curvature(z)?,
        bound: we.curvature_bound(z, Domain::HalfPlane)?,
        bound_chain: we.curvature_bound_chain(z, Domain::HalfPlane)?,
        sharp_bound: schober_bound(z)?,
        admissible: p != c(0.0, 0.0) && q.norm() < 1.0,
    })
}

/// Evaluate the surface on every grid point, row-major. Failures are kept
/// per point.
pub fn sample_surface(
    we: &WEData,
    grid: &GridSpec,
    cfg: &QuadratureConfig,
) -> Result<Vec<Result<SurfaceSample, EnneperError>>, EnneperError> {
    grid.validate()?;
    cfg.validate()?;
    Ok(grid
        .points()
        .par_iter()
        .map(|&z| sample_point(we, z, cfg))
        .collect())
}

/// The minimal graph over the half-plane whose curvature above `i` is `-1`,
/// attaining `|K| ≤ 1/dist²` with equality.
#[derive(Debug, Clone)]
pub struct ExtremalInstance {
    pub we: WEData,
    /// `h' = (a+1)/2`, `g' = (a-1)/2` with `a = (z²-1)/(2iz)`.
    pub map: HarmonicMap,
    /// `m = (1 + iπ + z² - 2 log z)/(4i)`, so that `h = (m+z)/2`, `g = (m-z)/2`.
    pub m: Expr,
    /// `-(1+z²)/(2z)`; `t = Re ∫ᵢᶻ` of it.
    pub t_integrand: Expr,
}

const EXTREMAL_A: &str = "(z^2 - 1)/(2*i*z)";
const EXTREMAL_Q: &str = "(z - i)/(z + i)";
const EXTREMAL_M: &str = "(1 + i*pi + z^2 - 2*log(z))/(4*i)";
const EXTREMAL_T: &str = "-(1 + z^2)/(2*z)";

pub fn extremal_halfplane_example() -> ExtremalInstance {
    let parse = |s: &str| Expr::parse(s).expect("built-in expression parses");
    let a = parse(EXTREMAL_A);
    let one = Expr::real(1.0);
    let two = Expr::real(2.0);
    let h_prime = (a.clone() + one.clone()) / two.clone();
    let g_prime = (a - one) / two;
    let m = parse(EXTREMAL_M);
    let i = c(0.0, 1.0);
    let map = HarmonicMap::new(h_prime.clone(), g_prime, i, i)
        .expect("i is inside")
        .with_closed_form_re(m.clone());
    ExtremalInstance {
        we: WEData::new(h_prime, parse(EXTREMAL_Q)),
        map,
        m,
        t_integrand: parse(EXTREMAL_T),
    }
}

impl ExtremalInstance {
    /// Closed-form surface point: `u = (xy + arctan(x/y))/2`, `v = y`,
    /// `t = (-1 - Re z² - 2 ln|z|)/4`.
    pub fn closed_form_position(z: Complex) -> Position {
        let (x, y) = (z.re, z.im);
        Position {
            u: 0.5 * (x * y + (x / y).atan()),
            v: y,
            t: 0.25 * (-1.0 - (x * x - y * y) - 2.0 * z.norm().ln()),
        }
    }

    /// Height by quadrature of [`ExtremalInstance::t_integrand`].
    pub fn height(&self, z: Complex, cfg: &QuadratureConfig) -> Result<f64, EnneperError> {
        Ok(contour::integrate_from_base(&self.t_integrand, self.we.base(), z, cfg)?.re)
    }

    /// `(f_z(z), f_zbar(z)) = ((m'(z)+1)/2, (m'(z)-1)/2)`.
    pub fn wirtinger_derivatives(&self, z: Complex) -> Result<(Complex, Complex), EnneperError> {
        let dm = eval(&self.m.differentiate(), z)?;
        Ok(((dm + 1.0) / 2.0, (dm - 1.0) / 2.0))
    }
}
