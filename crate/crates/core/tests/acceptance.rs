//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the process exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use minsurf::cli::{self, Command, Format, JobConfig, Suite};
use minsurf::contour::QuadratureConfig;
use minsurf::enneper::{
    extremal_halfplane_example, fd_step, gauss_curvature_dilatation, EnneperError, ExtremalInstance,
};
use minsurf::harmonic::{
    self, halfplane_blaschke, halfplane_disk_factor, verify_heinz, verify_heinz_disk, DiskGrid,
    Domain, GridSpec, HarmonicMap,
};
use minsurf::{Complex, Expr, WEData};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const I: Complex = Complex::new(0.0, 1.0);

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_point(rng: &mut ChaCha8Rng, re: f64, im: (f64, f64)) -> Complex {
    Complex::new(rng.gen_range(-re..re), rng.gen_range(im.0..im.1))
}

/// `0.9 · e^{iθ} · ∏ (z-α)/(z-ᾱ)` with one or two random zeros.
fn random_disk_valued(rng: &mut ChaCha8Rng) -> Expr {
    let n = rng.gen_range(1..=2);
    let zeros: Vec<Complex> = (0..n).map(|_| random_point(rng, 2.0, (0.3, 2.5))).collect();
    halfplane_blaschke(&zeros, rng.gen_range(0.0..std::f64::consts::TAU), 0.9)
}

fn random_graphs(seed: u64, count: usize) -> Vec<WEData> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| WEData::halfplane_graph(random_disk_valued(&mut r), 1.0))
        .collect()
}

fn criterion_grid() -> GridSpec {
    GridSpec::new((-5.0, 5.0, 100), (1e-2, 5.0, 100)).unwrap()
}

fn sharpness() -> Outcome {
    let ex = extremal_halfplane_example();
    let k = ex.we.gauss_curvature(I).map_err(|e| e.to_string())?;
    let kfd = ex
        .we
        .gauss_curvature_fd(I, fd_step(I))
        .map_err(|e| e.to_string())?;
    let cfg = JobConfig {
        command: Command::Verify,
        suite: Some(Suite::Sharpness),
        ..JobConfig::default()
    };
    let start = Instant::now();
    let outcome = cli::run(&cfg).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let detail = format!(
        "K(i) = {k:.15}, K_fd(i) = {kfd:.9}, verify --suite sharpness pass = {} in {elapsed:.2?}",
        outcome.passed
    );
    check(
        (k + 1.0).abs() <= 1e-9
            && (kfd + 1.0).abs() <= 1e-4
            && outcome.exit_code() == 0
            && elapsed < Duration::from_secs(5),
        detail,
    )
}

fn pointwise_bound() -> Outcome {
    let mut instances = vec![extremal_halfplane_example().we];
    instances.extend(random_graphs(2, 5));
    let points = criterion_grid().points();
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut failures = 0usize;
    for we in &instances {
        let ratios: Vec<Result<f64, EnneperError>> = points
            .par_iter()
            .map(|&z| Ok(we.gauss_curvature(z)?.abs() * z.im * z.im))
            .collect();
        for r in ratios {
            match r {
                Ok(r) => worst = worst.max(r),
                Err(_) => failures += 1,
            }
        }
    }
    let elapsed = start.elapsed();
    check(
        worst <= 1.0 + 1e-6 && failures == 0 && elapsed < Duration::from_secs(30),
        format!(
            "max |K|·y² = {worst:.12} over {} instances × {} points, {failures} failures, {elapsed:.2?}",
            instances.len(),
            points.len()
        ),
    )
}

/// `a_fn = s₁(-iz) + s₂(i/z) + s₃`, which has positive real part on the
/// half-plane, so the resulting map is sense-preserving.
fn random_self_map(r: &mut ChaCha8Rng) -> HarmonicMap {
    let z = Expr::var();
    let s = [
        r.gen_range(0.0..2.0),
        r.gen_range(0.0..2.0),
        r.gen_range(0.1..2.0),
    ];
    let a_fn = Expr::real(s[0]) * Expr::constant(-I) * z.clone()
        + Expr::real(s[1]) * Expr::i() / z
        + Expr::real(s[2]);
    let a = random_point(r, 3.0, (0.1, 3.0));
    let b = random_point(r, 3.0, (0.1, 3.0));
    HarmonicMap::halfplane_self_map(a_fn, a, b).unwrap()
}

fn heinz() -> Outcome {
    let grid = criterion_grid();
    let ex = extremal_halfplane_example();
    let report = verify_heinz(&ex.map, &grid, 1e-9).map_err(|e| e.to_string())?;
    let mut ok = report.min_value >= 1.0 - 1e-9 && report.failures.is_empty();
    let mut worst_margin = f64::INFINITY;
    let mut r = rng(3);
    for _ in 0..10 {
        let m = random_self_map(&mut r);
        let rep = verify_heinz(&m, &grid, 1e-9).map_err(|e| e.to_string())?;
        ok &= rep.passed();
        worst_margin = worst_margin.min(rep.min_value - rep.bound);
    }
    check(
        ok,
        format!(
            "extremal min |Df| = {:.12}; random maps min(|Df| - Im b/Im a) = {worst_margin:.3e}",
            report.min_value
        ),
    )
}

fn disk_transfer() -> Outcome {
    let ex = extremal_halfplane_example();
    let disk = DiskGrid::new(0.95, 40, 72).map_err(|e| e.to_string())?;
    let report = verify_heinz_disk(&ex.map, &disk, 1e-9, &QuadratureConfig::default())
        .map_err(|e| e.to_string())?;
    check(
        report.min_value >= 0.5 - 1e-9 && report.failures.is_empty() && report.bound == 0.5,
        format!(
            "bound = {}, min |DF| = {:.12} over {} points",
            report.bound, report.min_value, report.samples
        ),
    )
}

fn route_equivalence() -> Outcome {
    let mut instances = vec![extremal_halfplane_example().we];
    instances.extend(random_graphs(5, 4));
    let mut r = rng(55);
    let mut worst = 0.0f64;
    let (mut compared, mut skipped) = (0, 0);
    for we in &instances {
        let map = we.harmonic_map();
        for _ in 0..40 {
            let z = random_point(&mut r, 3.0, (0.1, 3.0));
            let k = we.gauss_curvature(z).map_err(|e| e.to_string())?;
            let kfd = we
                .gauss_curvature_fd(z, fd_step(z))
                .map_err(|e| e.to_string())?;
            let kd = match gauss_curvature_dilatation(&map, z) {
                Ok(kd) => kd,
                Err(EnneperError::Indeterminate(_)) => {
                    skipped += 1;
                    continue;
                }
                Err(e) => return Err(e.to_string()),
            };
            let tol = 1e-5f64.max(1e-3 * k.abs());
            let spread = [(k - kfd).abs(), (k - kd).abs(), (kfd - kd).abs()]
                .into_iter()
                .fold(0.0, f64::max);
            worst = worst.max(spread / tol);
            compared += 1;
        }
    }
    check(
        worst <= 1.0,
        format!("{compared} points compared, {skipped} skipped (g' = 0), max spread / tol = {worst:.3e}"),
    )
}

fn identities() -> Outcome {
    let mut instances = vec![extremal_halfplane_example().we];
    instances.extend(random_graphs(6, 4));
    let mut r = rng(66);
    let (mut conf, mut lam) = (0.0f64, 0.0f64);
    for we in &instances {
        let map = we.harmonic_map();
        for _ in 0..50 {
            let z = random_point(&mut r, 3.0, (0.05, 3.0));
            conf = conf.max(
                we.relative_conformality_residual(z)
                    .map_err(|e| e.to_string())?,
            );
            let lambda = we.conformal_factor(z).map_err(|e| e.to_string())?;
            let df = map.df_norm(z).map_err(|e| e.to_string())?;
            lam = lam.max((lambda - df).abs() / lambda.max(1.0));
        }
    }
    let ex = extremal_halfplane_example();
    let q = Expr::parse("(z - i)/(z + i)").unwrap();
    let mut dil = 0.0f64;
    for _ in 0..50 {
        let z = random_point(&mut r, 3.0, (0.05, 3.0));
        let w = ex.map.dilatation(z).map_err(|e| e.to_string())?;
        let want = q.eval(z).unwrap().powi(2);
        dil = dil.max((w - want).norm());
    }
    let (fz, fzbar) = ex.wirtinger_derivatives(I).map_err(|e| e.to_string())?;
    let wirt = (fz - 1.0).norm().max(fzbar.norm());
    check(
        conf <= 1e-12 && lam <= 1e-12 && dil <= 1e-10 && wirt <= 1e-12,
        format!(
            "conformality {conf:.1e}, lambda {lam:.1e}, dilatation {dil:.1e}, f_z(i)/f_zbar(i) {wirt:.1e}"
        ),
    )
}

fn closed_form_immersion() -> Outcome {
    let ex = extremal_halfplane_example();
    let cfg = QuadratureConfig::default();
    let mut r = rng(7);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let z = random_point(&mut r, 3.0, (0.05, 3.0));
        let got = ex.we.immerse(z, &cfg).map_err(|e| e.to_string())?;
        let want = ExtremalInstance::closed_form_position(z);
        worst = worst
            .max((got.u - want.u).abs())
            .max((got.v - want.v).abs())
            .max((got.t - want.t).abs());
    }
    check(
        worst <= 1e-8,
        format!("max |position - closed form| = {worst:.3e} at 100 points"),
    )
}

/// Twenty holomorphic maps of the half-plane into the unit disk.
fn disk_valued_corpus() -> Vec<Expr> {
    let p = |s: &str| Expr::parse(s).unwrap();
    let mut corpus = vec![
        p("(z - i)/(z + i)"),
        p("((z - i)/(z + i))^2"),
        p("((z - i)/(z + i))^3/2"),
        p("exp(i*z)"),
        p("exp(i*z)/2 + 1/4"),
        p("exp(2*i*z)*(z - i)/(z + i)"),
        p("0"),
        p("0.3 - 0.4*i"),
        p("(z - 2*i)/(z + 2*i)"),
        p("(z - 1 - i)/(z - 1 + i)*(z + 1 - i/2)/(z + 1 + i/2)"),
        p("i/(z + i)"),
        p("1/(1 - i*z)"),
        p("(1 + i*z)/(2 - i*z)"),
        p("exp(i*z)^2*0.9"),
        p("((z - i)/(z + i) + 0.5)/(1 + 0.5*(z - i)/(z + i))"),
    ];
    let mut r = rng(8);
    while corpus.len() < 20 {
        corpus.push(random_disk_valued(&mut r));
    }
    corpus
}

fn schwarz_pick() -> Outcome {
    let grid = GridSpec::new((-4.0, 4.0, 25), (0.05, 4.0, 25)).unwrap();
    let points = grid.points();
    let mut min = f64::INFINITY;
    let corpus = disk_valued_corpus();
    for q in &corpus {
        let dq = q.differentiate();
        for &z in &points {
            let r = harmonic::schwarz_pick_residual_with(q, &dq, z, Domain::HalfPlane)
                .map_err(|e| format!("{q}: {e}"))?;
            min = min.min(r);
        }
    }
    let cayley = halfplane_disk_factor(I, 0.0);
    let mut rg = rng(9);
    let mut equality = 0.0f64;
    for _ in 0..50 {
        let z = random_point(&mut rg, 4.0, (0.05, 4.0));
        let r = harmonic::schwarz_pick_residual(&cayley, z, Domain::HalfPlane)
            .map_err(|e| e.to_string())?;
        let scale = harmonic::hyperbolic_density(Domain::HalfPlane, z)
            .unwrap()
            .max(1.0);
        equality = equality.max(r.abs() / scale);
    }
    check(
        min >= -1e-12 && equality <= 1e-10,
        format!(
            "{} functions: min residual {min:.3e}; conformal case max |residual| {equality:.3e}",
            corpus.len()
        ),
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |name: &str| -> Result<Vec<u8>, String> {
        let path = dir.path().join(name);
        let cfg = JobConfig {
            command: Command::Curvature,
            format: Some(Format::Csv),
            output_path: Some(path.clone()),
            ..JobConfig::default()
        };
        cli::cmd_curvature(&cfg).map_err(|e| e.to_string())?;
        std::fs::read(&path).map_err(|e| e.to_string())
    };
    let (a, b) = (run("a.csv")?, run("b.csv")?);
    check(
        a == b && !a.is_empty(),
        format!(
            "two curvature runs, {} bytes each, identical = {}",
            a.len(),
            a == b
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("sharpness of the extremal curvature", sharpness),
        ("pointwise curvature bound", pointwise_bound),
        ("Heinz bound on the half-plane", heinz),
        ("disk transfer of the Heinz bound", disk_transfer),
        ("curvature route equivalence", route_equivalence),
        ("exact identities", identities),
        ("closed-form immersion", closed_form_immersion),
        ("Schwarz-Pick suite", schwarz_pick),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {}. {name}: {detail}", n + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {}. {name}: {detail}", n + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
