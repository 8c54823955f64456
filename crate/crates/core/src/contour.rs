//! Line integrals of holomorphic expressions inside the upper half-plane.
//!
//! Integrals are taken along straight segments (or polylines). The
//! half-plane is convex, so a segment between two interior points never
//! leaves it and never meets the branch cut of the principal `log`.
//!
//! The quadrature is a globally adaptive Gauss–Kronrod 7/15 scheme: the
//! interval with the largest `|K15 - G7|` is bisected until the summed error
//! drops below `max(abs_tol, rel_tol * |result|)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{is_finite, Expr, ExprError};
use crate::Complex;

/// Points with `Im z` at or below this are treated as boundary points.
pub const MIN_IM: f64 = 1e-9;

const MAX_INTERVALS: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ContourError {
    #[error("tolerance not reached: best estimate {estimate} with error bound {error:e}")]
    ToleranceNotReached { estimate: Complex, error: f64 },
    #[error("integrand failed at {at}: {source}")]
    Eval {
        at: Complex,
        #[source]
        source: ExprError,
    },
    #[error("point {0} is not inside the upper half-plane")]
    OutsideDomain(Complex),
    #[error("invalid quadrature configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid path: {0}")]
    InvalidPath(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_depth: 40,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<(), ContourError> {
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(ContourError::InvalidConfig(format!(
                "abs_tol must be positive, got {}",
                self.abs_tol
            )));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(ContourError::InvalidConfig(format!(
                "rel_tol must be positive, got {}",
                self.rel_tol
            )));
        }
        if self.max_depth == 0 {
            return Err(ContourError::InvalidConfig(
                "max_depth must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// A quadrature result together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Complex,
    pub error: f64,
    /// Number of subintervals in the final partition.
    pub intervals: usize,
}

/// A polyline in the upper half-plane.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    vertices: Vec<Complex>,
}

impl Path {
    pub fn new(vertices: Vec<Complex>) -> Result<Self, ContourError> {
        if vertices.len() < 2 {
            return Err(ContourError::InvalidPath(
                "a path needs at least two vertices".into(),
            ));
        }
        for &v in &vertices {
            check_inside(v)?;
        }
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(ContourError::InvalidPath(
                "consecutive vertices must be distinct".into(),
            ));
        }
        Ok(Path { vertices })
    }

    pub fn vertices(&self) -> &[Complex] {
        &self.vertices
    }

    pub fn start(&self) -> Complex {
        self.vertices[0]
    }

    pub fn end(&self) -> Complex {
        self.vertices[self.vertices.len() - 1]
    }
}

fn check_inside(z: Complex) -> Result<(), ContourError> {
    if is_finite(z) && z.im > MIN_IM {
        Ok(())
    } else {
        Err(ContourError::OutsideDomain(z))
    }
}

// Gauss–Kronrod 15-point abscissae on [-1, 1] (positive half, descending)
// and weights; odd-indexed abscissae plus the centre are the Gauss 7 nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn gauss_kronrod<F, E>(f: &mut F, a: f64, b: f64) -> Result<(Complex, f64), E>
where
    F: FnMut(f64) -> Result<Complex, E>,
{
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK.iter().zip(&WGK).take(7).enumerate() {
        let dx = half * x;
        let pair = f(centre - dx)? + f(centre + dx)?;
        kronrod += pair * w;
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    Ok((kronrod * half, ((kronrod - gauss) * half).norm()))
}

struct Piece {
    a: f64,
    b: f64,
    value: Complex,
    error: f64,
    depth: u32,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// Globally adaptive Gauss–Kronrod quadrature of a complex-valued function
/// of a real variable over `[a, b]`.
pub fn adaptive_quadrature<F>(
    mut f: F,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate, ContourError>
where
    F: FnMut(f64) -> Result<Complex, ContourError>,
{
    cfg.validate()?;
    let (value, error) = gauss_kronrod(&mut f, a, b)?;
    let mut heap = BinaryHeap::new();
    heap.push(Piece {
        a,
        b,
        value,
        error,
        depth: 0,
    });
    let mut total = value;
    let mut total_err = error;
    loop {
        let tol = cfg.abs_tol.max(cfg.rel_tol * total.norm());
        if total_err <= tol {
            break;
        }
        let worst = heap.peek().expect("partition is never empty");
        if worst.depth >= cfg.max_depth || heap.len() >= MAX_INTERVALS {
            let (estimate, error) = sum_pieces(&heap);
            return Err(ContourError::ToleranceNotReached { estimate, error });
        }
        let worst = heap.pop().expect("partition is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        let (lv, le) = gauss_kronrod(&mut f, worst.a, mid)?;
        let (rv, re) = gauss_kronrod(&mut f, mid, worst.b)?;
        total += lv + rv - worst.value;
        total_err += le + re - worst.error;
        for (lo, hi, value, error) in [(worst.a, mid, lv, le), (mid, worst.b, rv, re)] {
            heap.push(Piece {
                a: lo,
                b: hi,
                value,
                error,
                depth: worst.depth + 1,
            });
        }
    }
    let (value, error) = sum_pieces(&heap);
    Ok(Estimate {
        value,
        error,
        intervals: heap.len(),
    })
}

// Re-sum in interval order so the result does not depend on update history.
fn sum_pieces(heap: &BinaryHeap<Piece>) -> (Complex, f64) {
    let mut pieces: Vec<&Piece> = heap.iter().collect();
    pieces.sort_by(|p, q| p.a.total_cmp(&q.a));
    pieces
        .iter()
        .fold((Complex::new(0.0, 0.0), 0.0), |(v, e), p| {
            (v + p.value, e + p.error)
        })
}

/// `∫ f(t) dt` over a real interval, for real integrands.
pub fn integrate_real<F>(
    f: F,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate, ContourError>
where
    F: Fn(f64) -> f64,
{
    adaptive_quadrature(|t| Ok(Complex::new(f(t), 0.0)), a, b, cfg)
}

/// Integral of `f` along the segment `from -> to`, with its error estimate.
pub fn segment_estimate(
    f: &Expr,
    from: Complex,
    to: Complex,
    cfg: &QuadratureConfig,
) -> Result<Estimate, ContourError> {
    check_inside(from)?;
    check_inside(to)?;
    cfg.validate()?;
    let chord = to - from;
    if chord == Complex::new(0.0, 0.0) {
        return Ok(Estimate {
            value: chord,
            error: 0.0,
            intervals: 0,
        });
    }
    let len = chord.norm();
    // Tolerances apply to the integral, which carries the factor `chord`.
    let scaled = QuadratureConfig {
        abs_tol: cfg.abs_tol / len,
        ..*cfg
    };
    let integrand = |s: f64| {
        let z = from + chord * s;
        f.eval(z)
            .map_err(|source| ContourError::Eval { at: z, source })
    };
    match adaptive_quadrature(integrand, 0.0, 1.0, &scaled) {
        Ok(est) => Ok(Estimate {
            value: est.value * chord,
            error: est.error * len,
            intervals: est.intervals,
        }),
        Err(ContourError::ToleranceNotReached { estimate, error }) => {
            Err(ContourError::ToleranceNotReached {
                estimate: estimate * chord,
                error: error * len,
            })
        }
        Err(e) => Err(e),
    }
}

/// `∫ f(ζ) dζ` along the straight segment from `from` to `to`.
pub fn integrate_segment(
    f: &Expr,
    from: Complex,
    to: Complex,
    cfg: &QuadratureConfig,
) -> Result<Complex, ContourError> {
    segment_estimate(f, from, to, cfg).map(|e| e.value)
}

/// `∫ f(ζ) dζ` along a polyline.
pub fn integrate_path(
    f: &Expr,
    path: &Path,
    cfg: &QuadratureConfig,
) -> Result<Complex, ContourError> {
    path.vertices()
        .windows(2)
        .try_fold(Complex::new(0.0, 0.0), |acc, w| {
            Ok(acc + integrate_segment(f, w[0], w[1], cfg)?)
        })
}

/// The antiderivative of `f` anchored at `base`, evaluated at `z`.
///
/// `f` is holomorphic on the convex half-plane, so the straight segment
/// gives the same value as any other path.
pub fn integrate_from_base(
    f: &Expr,
    base: Complex,
    z: Complex,
    cfg: &QuadratureConfig,
) -> Result<Complex, ContourError> {
    integrate_segment(f, base, z, cfg)
}

/// [`integrate_from_base`] for many targets. Failures are reported per
/// entry; output order matches `targets`.
pub fn batch_antiderivative(
    f: &Expr,
    base: Complex,
    targets: &[Complex],
    cfg: &QuadratureConfig,
) -> Vec<Result<Complex, ContourError>> {
    targets
        .par_iter()
        .map(|&z| integrate_from_base(f, base, z, cfg))
        .collect()
}
