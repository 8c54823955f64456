//! Adaptive Gauss–Kronrod integration along segments and polylines.

use minsurf::contour::{
    adaptive_quadrature, batch_antiderivative, integrate_path, integrate_segment, segment_estimate,
    Path, QuadratureConfig,
};
use minsurf::{Complex, Expr};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = QuadratureConfig::default();
    let i = Complex::new(0.0, 1.0);

    let recip = Expr::parse("1/z")?;
    let est = segment_estimate(&recip, i, 2.0 * i, &cfg)?;
    println!(
        "∫ dz/z from i to 2i = {} (error {:.1e}, {} intervals)",
        est.value, est.error, est.intervals
    );
    println!("ln 2                = {}", 2f64.ln());

    // Path independence on the half-plane.
    let f = Expr::parse("exp(i*z)/(z + i)")?;
    let a = Complex::new(-2.0, 0.5);
    let b = Complex::new(3.0, 0.2);
    let detour = Path::new(vec![a, Complex::new(-2.0, 4.0), Complex::new(3.0, 4.0), b])?;
    println!("straight {}", integrate_segment(&f, a, b, &cfg)?);
    println!("detour   {}", integrate_path(&f, &detour, &cfg)?);

    // Antiderivative of the extremal height integrand at several points.
    let t = Expr::parse("-(1 + z^2)/(2*z)")?;
    let targets = [
        Complex::new(0.5, 0.5),
        Complex::new(-1.0, 2.0),
        Complex::new(0.0, 3.0),
    ];
    for (z, v) in targets
        .iter()
        .zip(batch_antiderivative(&t, i, &targets, &cfg))
    {
        let closed = 0.25 * (-1.0 - (z * z).re - 2.0 * z.norm().ln());
        println!("t({z}) = {:.15} closed form {closed:.15}", v?.re);
    }

    // A real integral with an endpoint singularity.
    let sqrt = adaptive_quadrature(|x| Ok(Complex::new(x.sqrt(), 0.0)), 0.0, 1.0, &cfg)?;
    println!(
        "∫₀¹ √x dx = {} ({} intervals)",
        sqrt.value.re, sqrt.intervals
    );
    Ok(())
}
