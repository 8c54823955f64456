//! Planar harmonic maps `f = h + conj(g)` of the upper half-plane.
//!
//! A map is stored through its holomorphic derivatives `h'` and `g'` plus a
//! normalization `f(a) = b`; positions are recovered by contour integration,
//! `f(z) = b + ∫ₐᶻ h' + conj(∫ₐᶻ g')`.
//!
//! For a harmonic diffeomorphism of the half-plane onto itself with
//! `f(a) = b`, `|Df(z)| = |h'(z)| + |g'(z)| ≥ Im b / Im a`. Composing with
//! the Cayley map gives the disk version `|DF(z)| ≥ Im F(0) / 2`.
//! [`verify_heinz`] and [`verify_heinz_disk`] check these bounds on grids.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::contour::{self, ContourError, QuadratureConfig};
use crate::expr::{is_finite, Expr, ExprError};
use crate::Complex;

/// Lower bound constant for harmonic diffeomorphisms of the disk onto a
/// convex domain: `|Df| ≥ C · dist(f(0), ∂Ω)` holds with `C = 1/4`.
pub const CONVEX_DOMAIN_CONSTANT: f64 = 0.25;
/// Conjectured sharp value of the convex-domain constant.
pub const CONVEX_DOMAIN_CONJECTURE: f64 = 0.5;
/// Known constant `1/π` when the target is the unit disk.
pub const DISK_TARGET_CONSTANT: f64 = 1.0 / PI;
/// Conjectured sharp disk-target constant `2/π`.
pub const DISK_TARGET_CONJECTURE: f64 = 2.0 / PI;
/// Sharp bound `3√3/(2π)` for `|h'(0)| + |g'(0)|` over harmonic
/// diffeomorphisms of the disk onto itself fixing the origin.
pub const DISK_SELF_MAP_CONSTANT: f64 = 0.826_993_343_132_688_3;

/// Smallest `Im z` a [`GridSpec`] may reach.
pub const GRID_IM_FLOOR: f64 = 1e-3;

/// Default slack used by bound reports.
pub const DEFAULT_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HarmonicError {
    #[error("evaluation failed at {at}: {source}")]
    Eval {
        at: Complex,
        #[source]
        source: ExprError,
    },
    #[error(transparent)]
    Contour(#[from] ContourError),
    #[error("{z} is outside the {domain:?}")]
    OutsideDomain { z: Complex, domain: Domain },
    #[error("h'({0}) = 0: the map is not sense-preserving there")]
    Degenerate(Complex),
    #[error("|q({z})| = {modulus} is not below 1")]
    NotIntoDisk { z: Complex, modulus: f64 },
    #[error("imaginary parts must be positive: Im a = {im_a}, Im b = {im_b}")]
    NonPositive { im_a: f64, im_b: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

/// Hyperbolic domains with a closed-form density.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Disk,
    #[serde(rename = "halfplane")]
    HalfPlane,
}

impl Domain {
    pub fn contains(self, z: Complex) -> bool {
        is_finite(z)
            && match self {
                Domain::Disk => z.norm_sqr() < 1.0,
                Domain::HalfPlane => z.im > 0.0,
            }
    }

    fn check(self, z: Complex) -> Result<(), HarmonicError> {
        if self.contains(z) {
            Ok(())
        } else {
            Err(HarmonicError::OutsideDomain { z, domain: self })
        }
    }
}

fn eval(e: &Expr, z: Complex) -> Result<Complex, HarmonicError> {
    e.eval(z)
        .map_err(|source| HarmonicError::Eval { at: z, source })
}

#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicMap {
    pub h_prime: Expr,
    pub g_prime: Expr,
    pub base_a: Complex,
    pub base_b: Complex,
    /// Optional closed form `F` with `Re f(z) = Re F(z)`, for validation.
    pub closed_form_re: Option<Expr>,
}

impl HarmonicMap {
    pub fn new(
        h_prime: Expr,
        g_prime: Expr,
        base_a: Complex,
        base_b: Complex,
    ) -> Result<Self, HarmonicError> {
        Domain::HalfPlane.check(base_a)?;
        if !is_finite(base_b) {
            return Err(HarmonicError::Eval {
                at: base_a,
                source: ExprError::NonFinite,
            });
        }
        Ok(HarmonicMap {
            h_prime,
            g_prime,
            base_a,
            base_b,
            closed_form_re: None,
        })
    }

    pub fn with_closed_form_re(mut self, closed_form: Expr) -> Self {
        self.closed_form_re = Some(closed_form);
        self
    }

    /// `f(z) = z`.
    pub fn identity() -> Self {
        let i = Complex::new(0.0, 1.0);
        HarmonicMap::new(Expr::real(1.0), Expr::real(0.0), i, i).expect("i is inside")
    }

    /// The self-map of the half-plane with `Im f = c · Im z`, `c = Im b / Im a`,
    /// built from a holomorphic `a_fn` with positive real part:
    /// `h' = (a_fn + c)/2`, `g' = (a_fn - c)/2`.
    pub fn halfplane_self_map(
        a_fn: Expr,
        base_a: Complex,
        base_b: Complex,
    ) -> Result<Self, HarmonicError> {
        let c = Expr::real(heinz_lower_bound(base_a, base_b)?);
        let two = Expr::real(2.0);
        HarmonicMap::new(
            (a_fn.clone() + c.clone()) / two.clone(),
            (a_fn - c) / two,
            base_a,
            base_b,
        )
    }

    /// `(h'(z), g'(z))`.
    pub fn derivatives(&self, z: Complex) -> Result<(Complex, Complex), HarmonicError> {
        Domain::HalfPlane.check(z)?;
        Ok((eval(&self.h_prime, z)?, eval(&self.g_prime, z)?))
    }

    /// `|Df(z)| = |h'(z)| + |g'(z)|`.
    pub fn df_norm(&self, z: Complex) -> Result<f64, HarmonicError> {
        let (h, g) = self.derivatives(z)?;
        Ok(h.norm() + g.norm())
    }

    /// `J(z) = |h'(z)|² - |g'(z)|²`.
    pub fn jacobian(&self, z: Complex) -> Result<f64, HarmonicError> {
        let (h, g) = self.derivatives(z)?;
        Ok(h.norm_sqr() - g.norm_sqr())
    }

    /// Second complex dilatation `g'(z) / h'(z)`.
    pub fn dilatation(&self, z: Complex) -> Result<Complex, HarmonicError> {
        let (h, g) = self.derivatives(z)?;
        if h == Complex::new(0.0, 0.0) {
            return Err(HarmonicError::Degenerate(z));
        }
        Ok(g / h)
    }

    /// `f(z)` by quadrature from the base point.
    pub fn evaluate(&self, z: Complex, cfg: &QuadratureConfig) -> Result<Complex, HarmonicError> {
        Domain::HalfPlane.check(z)?;
        let h = contour::integrate_from_base(&self.h_prime, self.base_a, z, cfg)?;
        let g = contour::integrate_from_base(&self.g_prime, self.base_a, z, cfg)?;
        Ok(self.base_b + h + g.conj())
    }

    /// `Re f(z) - Re F(z)` for the stored closed form `F`, if any.
    pub fn closed_form_gap(
        &self,
        z: Complex,
        cfg: &QuadratureConfig,
    ) -> Option<Result<f64, HarmonicError>> {
        let closed = self.closed_form_re.as_ref()?;
        Some((|| Ok(self.evaluate(z, cfg)?.re - eval(closed, z)?.re))())
    }
}

/// `Im b / Im a`, the Heinz lower bound for `|Df|` when `f(a) = b`.
pub fn heinz_lower_bound(a: Complex, b: Complex) -> Result<f64, HarmonicError> {
    if a.im > 0.0 && b.im > 0.0 && is_finite(a) && is_finite(b) {
        Ok(b.im / a.im)
    } else {
        Err(HarmonicError::NonPositive {
            im_a: a.im,
            im_b: b.im,
        })
    }
}

/// Rectangular sampling grid in the upper half-plane, row-major (rows run
/// over `Im z`, columns over `Re z`). Endpoints are included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub n_re: usize,
    pub n_im: usize,
}

impl GridSpec {
    pub fn new(re: (f64, f64, usize), im: (f64, f64, usize)) -> Result<Self, HarmonicError> {
        let g = GridSpec {
            re_min: re.0,
            re_max: re.1,
            n_re: re.2,
            im_min: im.0,
            im_max: im.1,
            n_im: im.2,
        };
        g.validate()?;
        Ok(g)
    }

    /// A single point.
    pub fn point(z: Complex) -> Result<Self, HarmonicError> {
        GridSpec::new((z.re, z.re, 1), (z.im, z.im, 1))
    }

    pub fn validate(&self) -> Result<(), HarmonicError> {
        let bad = |m: String| Err(HarmonicError::InvalidGrid(m));
        let all = [self.re_min, self.re_max, self.im_min, self.im_max];
        if all.iter().any(|x| !x.is_finite()) {
            return bad("bounds must be finite".into());
        }
        if self.n_re == 0 || self.n_im == 0 {
            return bad("counts must be at least 1".into());
        }
        if self.re_min > self.re_max || self.im_min > self.im_max {
            return bad("min must not exceed max".into());
        }
        if self.im_min < GRID_IM_FLOOR {
            return bad(format!(
                "im_min = {} is below the boundary exclusion {GRID_IM_FLOOR}",
                self.im_min
            ));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n_re * self.n_im
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn axis(min: f64, max: f64, n: usize, k: usize) -> f64 {
        if n == 1 {
            min
        } else {
            min + (max - min) * (k as f64) / ((n - 1) as f64)
        }
    }

    /// Point at row `row` (imaginary axis) and column `col` (real axis).
    pub fn at(&self, row: usize, col: usize) -> Complex {
        Complex::new(
            Self::axis(self.re_min, self.re_max, self.n_re, col),
            Self::axis(self.im_min, self.im_max, self.n_im, row),
        )
    }

    pub fn points(&self) -> Vec<Complex> {
        (0..self.n_im)
            .flat_map(|r| (0..self.n_re).map(move |c| (r, c)))
            .map(|(r, c)| self.at(r, c))
            .collect()
    }
}

/// Polar grid on the disk `|z| ≤ radius`: the centre plus `n_radial` rings
/// of `n_angular` points each.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskGrid {
    pub radius: f64,
    pub n_radial: usize,
    pub n_angular: usize,
}

impl DiskGrid {
    pub fn new(radius: f64, n_radial: usize, n_angular: usize) -> Result<Self, HarmonicError> {
        if !(radius > 0.0 && radius < 1.0) || n_radial == 0 || n_angular == 0 {
            return Err(HarmonicError::InvalidGrid(format!(
                "disk grid needs 0 < radius < 1 and positive counts, got {radius}, {n_radial}, {n_angular}"
            )));
        }
        Ok(DiskGrid {
            radius,
            n_radial,
            n_angular,
        })
    }

    pub fn points(&self) -> Vec<Complex> {
        let mut pts = vec![Complex::new(0.0, 0.0)];
        for k in 1..=self.n_radial {
            let r = self.radius * k as f64 / self.n_radial as f64;
            for j in 0..self.n_angular {
                pts.push(Complex::from_polar(
                    r,
                    2.0 * PI * j as f64 / self.n_angular as f64,
                ));
            }
        }
        pts
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub z: Complex,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub z: Complex,
    pub message: String,
}

/// Outcome of checking `value(z) ≥ bound` over a set of sample points.
/// Violations and failures are listed in sample order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub bound: f64,
    pub min_value: f64,
    pub argmin: Complex,
    pub samples: usize,
    pub violations: Vec<Violation>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<Failure>,
}

impl BoundReport {
    /// Minimum over `points` of `value`, checked against `bound - slack`.
    pub fn collect<F>(points: &[Complex], bound: f64, slack: f64, value: F) -> Self
    where
        F: Fn(Complex) -> Result<f64, HarmonicError> + Sync,
    {
        let values: Vec<_> = points.par_iter().map(|&z| value(z)).collect();
        let mut report = BoundReport {
            bound,
            min_value: f64::INFINITY,
            argmin: Complex::new(f64::NAN, f64::NAN),
            samples: points.len(),
            violations: Vec::new(),
            failures: Vec::new(),
        };
        for (&z, v) in points.iter().zip(values) {
            match v {
                Ok(v) => {
                    if v < report.min_value {
                        report.min_value = v;
                        report.argmin = z;
                    }
                    if v < bound - slack {
                        report.violations.push(Violation { z, value: v });
                    }
                }
                Err(e) => report.failures.push(Failure {
                    z,
                    message: e.to_string(),
                }),
            }
        }
        report
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.failures.is_empty()
    }
}

/// Check `|Df| ≥ Im b / Im a` on every grid point.
///
/// Points where the map is not sense-preserving (`J ≤ 0`) are recorded as
/// failures.
pub fn verify_heinz(
    m: &HarmonicMap,
    grid: &GridSpec,
    slack: f64,
) -> Result<BoundReport, HarmonicError> {
    grid.validate()?;
    let bound = heinz_lower_bound(m.base_a, m.base_b)?;
    Ok(BoundReport::collect(&grid.points(), bound, slack, |z| {
        let (h, g) = m.derivatives(z)?;
        if h.norm() <= g.norm() {
            return Err(HarmonicError::Degenerate(z));
        }
        Ok(h.norm() + g.norm())
    }))
}

/// The Cayley map `i(1+z)/(1-z)` from the unit disk onto the upper half-plane.
pub fn cayley_disk_to_halfplane(z: Complex) -> Result<Complex, HarmonicError> {
    Domain::Disk.check(z)?;
    let one = Complex::new(1.0, 0.0);
    Ok(Complex::new(0.0, 1.0) * (one + z) / (one - z))
}

/// Inverse Cayley map `(w - i)/(w + i)`.
pub fn cayley_halfplane_to_disk(w: Complex) -> Result<Complex, HarmonicError> {
    Domain::HalfPlane.check(w)?;
    let i = Complex::new(0.0, 1.0);
    Ok((w - i) / (w + i))
}

/// Derivative `2i/(1-z)²` of the Cayley map.
pub fn cayley_derivative(z: Complex) -> Result<Complex, HarmonicError> {
    Domain::Disk.check(z)?;
    let d = Complex::new(1.0, 0.0) - z;
    Ok(Complex::new(0.0, 2.0) / (d * d))
}

/// `|DF(z)|` for `F = f ∘ cayley`, i.e. `|Df(cayley(z))| · |cayley'(z)|`.
pub fn disk_df_norm(m: &HarmonicMap, z: Complex) -> Result<f64, HarmonicError> {
    let w = cayley_disk_to_halfplane(z)?;
    Ok(m.df_norm(w)? * cayley_derivative(z)?.norm())
}

/// Check `|DF| ≥ dist(F(0), ∂U) / 2` for `F = m ∘ cayley` over a disk grid.
pub fn verify_heinz_disk(
    m: &HarmonicMap,
    grid: &DiskGrid,
    slack: f64,
    cfg: &QuadratureConfig,
) -> Result<BoundReport, HarmonicError> {
    let f0 = m.evaluate(Complex::new(0.0, 1.0), cfg)?;
    if f0.im <= 0.0 {
        return Err(HarmonicError::NonPositive {
            im_a: 1.0,
            im_b: f0.im,
        });
    }
    let bound = 0.5 * f0.im;
    Ok(BoundReport::collect(&grid.points(), bound, slack, |z| {
        disk_df_norm(m, z)
    }))
}

/// Poisson kernel of the upper half-plane, `Im z / |z - t|²`.
pub fn poisson_kernel(z: Complex, t: f64) -> Result<f64, HarmonicError> {
    Domain::HalfPlane.check(z)?;
    Ok(z.im / (z - t).norm_sqr())
}

/// Hyperbolic density: `1/(1-|z|²)` on the disk, `1/(2 Im z)` on the half-plane.
pub fn hyperbolic_density(domain: Domain, z: Complex) -> Result<f64, HarmonicError> {
    domain.check(z)?;
    Ok(match domain {
        Domain::Disk => 1.0 / (1.0 - z.norm_sqr()),
        Domain::HalfPlane => 0.5 / z.im,
    })
}

/// `λ_Ω(z)(1 - |q(z)|²) - |q'(z)|`; non-negative for any holomorphic
/// `q: Ω → D`, zero where `q` is a conformal isomorphism.
pub fn schwarz_pick_residual(q: &Expr, z: Complex, domain: Domain) -> Result<f64, HarmonicError> {
    schwarz_pick_residual_with(q, &q.differentiate(), z, domain)
}

/// [`schwarz_pick_residual`] with a precomputed derivative `dq`.
pub fn schwarz_pick_residual_with(
    q: &Expr,
    dq: &Expr,
    z: Complex,
    domain: Domain,
) -> Result<f64, HarmonicError> {
    let density = hyperbolic_density(domain, z)?;
    let qz = eval(q, z)?;
    let modulus = qz.norm();
    if modulus >= 1.0 {
        return Err(HarmonicError::NotIntoDisk { z, modulus });
    }
    Ok(density * (1.0 - qz.norm_sqr()) - eval(dq, z)?.norm())
}

/// `rotation · (z - α)/(z - conj α)`: a conformal map of the half-plane onto
/// the disk sending `α` to 0.
pub fn halfplane_disk_factor(alpha: Complex, rotation: f64) -> Expr {
    let z = Expr::var();
    let factor = (z.clone() - Expr::constant(alpha)) / (z - Expr::constant(alpha.conj()));
    if rotation == 0.0 {
        factor
    } else {
        Expr::constant(Complex::from_polar(1.0, rotation)) * factor
    }
}

/// `scale · ∏ factor(α_k)` for zeros `α_k` in the half-plane; maps the
/// half-plane into the disk of radius `scale`.
pub fn halfplane_blaschke(zeros: &[Complex], rotation: f64, scale: f64) -> Expr {
    zeros.iter().fold(
        Expr::constant(Complex::from_polar(scale, rotation)),
        |acc, &a| acc * halfplane_disk_factor(a, 0.0),
    )
}
