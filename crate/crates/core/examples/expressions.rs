//! Parse, print, differentiate and fold expressions in `z`.

use minsurf::{Complex, Expr};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let z = Complex::new(0.5, 1.5);
    for text in [
        "(z^2 - 1)/(2*i*z)",
        "(z - i)/(z + i)",
        "(1 + i*pi + z^2 - 2*log(z))/(4*i)",
        "-z^2",
    ] {
        let e = Expr::parse(text)?;
        let d = e.differentiate().constant_fold();
        println!("f(z)  = {e}");
        println!("f'(z) = {d}");
        println!("  f({z}) = {}", e.eval(z)?);
        println!("  f'({z}) = {}\n", d.eval(z)?);
    }

    // Errors carry their position or the failing operation.
    for bad in ["z +", "sin(z)", "1/(z - z)", "log(z - 2)"] {
        match Expr::parse(bad).and_then(|e| e.eval(Complex::new(1.0, 0.0))) {
            Ok(v) => println!("{bad:>12} -> {v}"),
            Err(err) => println!("{bad:>12} -> error: {err}"),
        }
    }
    Ok(())
}
