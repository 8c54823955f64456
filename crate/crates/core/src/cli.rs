//! Job configuration, output writers and verification suites for the
//! `minsurf` command-line tool.
//!
//! Every command is a plain library function taking a [`JobConfig`] and
//! returning a [`RunOutcome`]; the binary only parses flags, calls [`run`],
//! prints the summary and maps the outcome to an exit code.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::contour::QuadratureConfig;
use crate::enneper::{
    self, extremal_halfplane_example, fd_step, gauss_curvature_dilatation, EnneperError,
    SurfaceSample, WEData,
};
use crate::expr::ExprError;
use crate::harmonic::{self, DiskGrid, Domain, GridSpec, HarmonicError, HarmonicMap};
use crate::Complex;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("expression `{text}`: {source}")]
    Expr {
        text: String,
        #[source]
        source: ExprError,
    },
    #[error("bad grid `{0}`: expected `re_min:re_max:n x im_min:im_max:n`")]
    GridSyntax(String),
    #[error("bad complex number `{0}`: expected `RE,IM`")]
    ComplexSyntax(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Harmonic(#[from] HarmonicError),
    #[error(transparent)]
    Enneper(#[from] EnneperError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Surface,
    #[default]
    Curvature,
    Verify,
    Extremal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Obj,
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Heinz,
    HeinzDisk,
    SchwarzPick,
    Conformality,
    CurvatureRoutes,
    Sharpness,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Heinz,
        Suite::HeinzDisk,
        Suite::SchwarzPick,
        Suite::Conformality,
        Suite::CurvatureRoutes,
        Suite::Sharpness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Heinz => "heinz",
            Suite::HeinzDisk => "heinz-disk",
            Suite::SchwarzPick => "schwarz-pick",
            Suite::Conformality => "conformality",
            Suite::CurvatureRoutes => "curvature-routes",
            Suite::Sharpness => "sharpness",
        }
    }

    fn default_tolerance(self) -> f64 {
        match self {
            Suite::Heinz | Suite::HeinzDisk | Suite::Sharpness => 1e-9,
            Suite::SchwarzPick | Suite::Conformality => 1e-12,
            Suite::CurvatureRoutes => 1e-3,
        }
    }
}

impl FromStr for Suite {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| CliError::UnknownSuite(s.to_string()))
    }
}

/// Everything one command needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct JobConfig {
    pub command: Command,
    pub p: Option<String>,
    pub q: Option<String>,
    /// Use the built-in extremal instance; implied when `p` and `q` are absent.
    pub extremal: bool,
    pub base: Complex,
    /// `f(base)`; defaults to `base`.
    pub base_value: Option<Complex>,
    pub grid: GridSpec,
    pub quadrature: QuadratureConfig,
    pub output_path: Option<PathBuf>,
    pub format: Option<Format>,
    pub suite: Option<Suite>,
    pub tol: Option<f64>,
}

impl Default for JobConfig {
    fn default() -> Self {
        JobConfig {
            command: Command::default(),
            p: None,
            q: None,
            extremal: false,
            base: Complex::new(0.0, 1.0),
            base_value: None,
            grid: GridSpec {
                re_min: -3.0,
                re_max: 3.0,
                n_re: 50,
                im_min: 0.05,
                im_max: 3.0,
                n_im: 50,
            },
            quadrature: QuadratureConfig::default(),
            output_path: None,
            format: None,
            suite: None,
            tol: None,
        }
    }
}

impl JobConfig {
    pub fn uses_extremal(&self) -> bool {
        self.extremal || (self.p.is_none() && self.q.is_none())
    }

    /// The Weierstrass–Enneper data named by the config.
    pub fn we_data(&self) -> Result<WEData, CliError> {
        if self.uses_extremal() {
            return Ok(extremal_halfplane_example().we);
        }
        let (Some(p), Some(q)) = (&self.p, &self.q) else {
            return Err(CliError::Config("both --p and --q are required".into()));
        };
        let parse = |text: &String| {
            crate::Expr::parse(text).map_err(|source| CliError::Expr {
                text: text.clone(),
                source,
            })
        };
        let we = WEData::new(parse(p)?, parse(q)?);
        Ok(we.with_base(self.base, self.base_value.unwrap_or(self.base))?)
    }

    /// The projection of the surface as a harmonic map.
    pub fn harmonic_map(&self) -> Result<HarmonicMap, CliError> {
        if self.uses_extremal() {
            return Ok(extremal_halfplane_example().map);
        }
        Ok(self.we_data()?.harmonic_map())
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or(match self.command {
            Command::Surface | Command::Extremal => Format::Obj,
            Command::Curvature => Format::Csv,
            Command::Verify => Format::Json,
        })
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.grid.validate()?;
        self.quadrature
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        self.we_data()?;
        let format = self.format();
        let allowed: &[Format] = match self.command {
            Command::Surface => &[Format::Obj, Format::Csv],
            Command::Curvature => &[Format::Csv, Format::Svg],
            Command::Verify => &[Format::Json],
            Command::Extremal => &[Format::Obj, Format::Csv],
        };
        if !allowed.contains(&format) {
            return Err(CliError::Config(format!(
                "format {format:?} does not apply to {:?}",
                self.command
            )));
        }
        if self.command == Command::Verify && self.suite.is_none() {
            return Err(CliError::Config("verify needs --suite".into()));
        }
        if matches!(self.tol, Some(t) if !(t > 0.0 && t.is_finite())) {
            return Err(CliError::Config("--tol must be positive".into()));
        }
        Ok(())
    }

    fn output(&self) -> Result<&Path, CliError> {
        self.output_path
            .as_deref()
            .ok_or_else(|| CliError::Config(format!("{:?} needs --out", self.command)))
    }
}

/// Parse `re_min:re_max:n x im_min:im_max:n`.
pub fn parse_grid(spec: &str) -> Result<GridSpec, CliError> {
    let bad = || CliError::GridSyntax(spec.to_string());
    let (re, im) = spec.split_once(['x', 'X']).ok_or_else(bad)?;
    let axis = |s: &str| -> Result<(f64, f64, usize), CliError> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let [lo, hi, n] = parts.as_slice() else {
            return Err(bad());
        };
        Ok((
            lo.trim().parse().map_err(|_| bad())?,
            hi.trim().parse().map_err(|_| bad())?,
            n.trim().parse().map_err(|_| bad())?,
        ))
    };
    Ok(GridSpec::new(axis(re)?, axis(im)?)?)
}

/// Parse `RE,IM`.
pub fn parse_complex(s: &str) -> Result<Complex, CliError> {
    let bad = || CliError::ComplexSyntax(s.to_string());
    let (re, im) = s.split_once(',').ok_or_else(bad)?;
    let z = Complex::new(
        re.trim().parse().map_err(|_| bad())?,
        im.trim().parse().map_err(|_| bad())?,
    );
    if z.is_finite() {
        Ok(z)
    } else {
        Err(bad())
    }
}

/// Command-line arguments of the `minsurf` binary.
#[derive(Debug, Clone, Parser)]
#[command(
    name = "minsurf",
    version,
    about = "Minimal graphs over the half-plane"
)]
pub struct CliArgs {
    #[arg(value_enum)]
    pub command: Command,
    /// Weierstrass–Enneper parameter p(z)
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<String>,
    /// Weierstrass–Enneper parameter q(z)
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<String>,
    /// Use the built-in extremal surface
    #[arg(long)]
    pub extremal: bool,
    /// Base point as RE,IM
    #[arg(long, allow_hyphen_values = true)]
    pub base: Option<String>,
    /// Value f(base) as RE,IM (defaults to the base point)
    #[arg(long, allow_hyphen_values = true)]
    pub base_value: Option<String>,
    /// Grid as re_min:re_max:n x im_min:im_max:n
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file (directory for `extremal`)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Verification suite name
    #[arg(long)]
    pub suite: Option<String>,
    /// Tolerance override for the suite
    #[arg(long)]
    pub tol: Option<f64>,
    /// JSON job configuration; flags override its fields
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl CliArgs {
    pub fn into_config(self) -> Result<JobConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|source| CliError::Io {
                    path: path.clone(),
                    source,
                })?;
                serde_json::from_str(&text)?
            }
            None => JobConfig::default(),
        };
        cfg.command = self.command;
        if self.p.is_some() {
            cfg.p = self.p;
        }
        if self.q.is_some() {
            cfg.q = self.q;
        }
        cfg.extremal |= self.extremal;
        if let Some(b) = &self.base {
            cfg.base = parse_complex(b)?;
        }
        if let Some(b) = &self.base_value {
            cfg.base_value = Some(parse_complex(b)?);
        }
        if let Some(g) = &self.grid {
            cfg.grid = parse_grid(g)?;
        }
        if self.format.is_some() {
            cfg.format = self.format;
        }
        if self.out.is_some() {
            cfg.output_path = self.out;
        }
        if let Some(s) = &self.suite {
            cfg.suite = Some(s.parse()?);
        }
        if self.tol.is_some() {
            cfg.tol = self.tol;
        }
        Ok(cfg)
    }
}

/// What a command produced.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RunOutcome {
    pub files: Vec<PathBuf>,
    pub samples: usize,
    pub failed_samples: usize,
    pub cells: usize,
    pub failed_cells: usize,
    pub warnings: Vec<String>,
    /// JSON printed by the binary on stdout.
    pub summary: Option<serde_json::Value>,
    /// False when a verification suite failed.
    pub passed: bool,
}

impl RunOutcome {
    /// More than 1% of samples or mesh cells failed.
    pub fn too_many_failures(&self) -> bool {
        self.failed_samples * 100 > self.samples || self.failed_cells * 100 > self.cells
    }

    /// 0 on success, 1 when a suite failed, 2 when too many samples failed.
    /// The binary exits with 3 on invalid input.
    pub fn exit_code(&self) -> i32 {
        if !self.passed {
            1
        } else if self.too_many_failures() {
            2
        } else {
            0
        }
    }

    fn absorb(&mut self, other: RunOutcome) {
        self.files.extend(other.files);
        self.samples += other.samples;
        self.failed_samples += other.failed_samples;
        self.cells += other.cells;
        self.failed_cells += other.failed_cells;
        self.warnings.extend(other.warnings);
        self.passed &= other.passed;
    }
}

/// Dispatch on `cfg.command`.
pub fn run(cfg: &JobConfig) -> Result<RunOutcome, CliError> {
    cfg.validate()?;
    match cfg.command {
        Command::Surface => cmd_surface(cfg),
        Command::Curvature => cmd_curvature(cfg),
        Command::Verify => cmd_verify(cfg),
        Command::Extremal => cmd_extremal(cfg),
    }
}

/// Fixed 17-significant-digit formatting used in every text output.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn create(path: &Path) -> Result<io::BufWriter<fs::File>, CliError> {
    let file = fs::File::create(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(io::BufWriter::new(file))
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeshStats {
    pub vertices: usize,
    pub triangles: usize,
    pub cells: usize,
    pub failed_cells: usize,
}

/// Write the sampled immersion as a triangle mesh: `v` lines in row-major
/// grid order, then two `f` lines per grid cell (1-based). Cells touching a
/// failed sample are left out and the vertex numbering skips failed samples.
pub fn write_obj<W: Write>(
    out: &mut W,
    grid: &GridSpec,
    samples: &[Result<SurfaceSample, EnneperError>],
) -> io::Result<MeshStats> {
    let mut index = vec![None; samples.len()];
    let mut next = 1usize;
    for (slot, s) in index.iter_mut().zip(samples) {
        if let Ok(s) = s {
            let p = s.position;
            writeln!(out, "v {} {} {}", num(p.u), num(p.v), num(p.t))?;
            *slot = Some(next);
            next += 1;
        }
    }
    let cols = grid.n_re;
    let cells = (grid.n_re - 1) * (grid.n_im - 1);
    let mut stats = MeshStats {
        vertices: next - 1,
        triangles: 0,
        cells,
        failed_cells: 0,
    };
    for r in 0..grid.n_im.saturating_sub(1) {
        for c in 0..cols - 1 {
            let k = r * cols + c;
            let corners = [index[k], index[k + 1], index[k + cols + 1], index[k + cols]];
            let [Some(a), Some(b), Some(c2), Some(d)] = corners else {
                stats.failed_cells += 1;
                continue;
            };
            writeln!(out, "f {a} {b} {c2}")?;
            writeln!(out, "f {a} {c2} {d}")?;
            stats.triangles += 2;
        }
    }
    Ok(stats)
}

fn write_positions_csv<W: Write>(
    out: &mut W,
    samples: &[Result<SurfaceSample, EnneperError>],
) -> io::Result<()> {
    writeln!(out, "re,im,u,v,t")?;
    for s in samples.iter().flatten() {
        let p = s.position;
        writeln!(
            out,
            "{},{},{},{},{}",
            num(s.z.re),
            num(s.z.im),
            num(p.u),
            num(p.v),
            num(p.t)
        )?;
    }
    Ok(())
}

fn count_failures(samples: &[Result<SurfaceSample, EnneperError>]) -> (usize, Vec<String>) {
    let mut warnings = Vec::new();
    for s in samples {
        if let Err(e) = s {
            warnings.push(format!("sample failed: {e}"));
        }
    }
    (warnings.len(), warnings)
}

/// Sample the immersion and write a mesh (OBJ) or a position table (CSV).
pub fn cmd_surface(cfg: &JobConfig) -> Result<RunOutcome, CliError> {
    let path = cfg.output()?;
    let we = cfg.we_data()?;
    let samples = enneper::sample_surface(&we, &cfg.grid, &cfg.quadrature)?;
    let (failed, warnings) = count_failures(&samples);
    let mut out = create(path)?;
    let mut outcome = RunOutcome {
        files: vec![path.to_path_buf()],
        samples: samples.len(),
        failed_samples: failed,
        warnings,
        passed: true,
        ..RunOutcome::default()
    };
    match cfg.format() {
        Format::Csv => write_positions_csv(&mut out, &samples).map_err(io_err(path))?,
        _ => {
            let stats = write_obj(&mut out, &cfg.grid, &samples).map_err(io_err(path))?;
            outcome.cells = stats.cells;
            outcome.failed_cells = stats.failed_cells;
            if stats.failed_cells > 0 {
                outcome
                    .warnings
                    .push(format!("{} mesh cells omitted", stats.failed_cells));
            }
        }
    }
    out.flush().map_err(io_err(path))?;
    Ok(outcome)
}

/// One row of the curvature report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureRow {
    pub z: Complex,
    pub u: f64,
    pub v: f64,
    pub t: f64,
    pub lambda: f64,
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "K_fd")]
    pub k_fd: f64,
    pub schober_bound: f64,
    pub ratio: f64,
}

pub const CURVATURE_CSV_HEADER: &str = "re,im,u,v,t,lambda,K,K_fd,schober_bound,ratio";

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureSummary {
    pub samples: usize,
    pub failed: usize,
    pub max_ratio: f64,
    pub argmax: Complex,
    pub max_abs_k: f64,
}

/// Finite-difference curvature with the default step, shrunk near the
/// boundary so the stencil stays in the half-plane.
fn fd_curvature(we: &WEData, z: Complex) -> Result<f64, EnneperError> {
    we.gauss_curvature_fd(z, fd_step(z).min(0.5 * z.im))
}

/// Curvature rows for every grid point that evaluates cleanly.
pub fn curvature_rows(
    cfg: &JobConfig,
) -> Result<(Vec<Result<CurvatureRow, EnneperError>>, CurvatureSummary), CliError> {
    let we = cfg.we_data()?;
    let samples = enneper::sample_surface(&we, &cfg.grid, &cfg.quadrature)?;
    let rows: Vec<_> = samples
        .into_iter()
        .map(|s| {
            let s = s?;
            Ok(CurvatureRow {
                z: s.z,
                u: s.position.u,
                v: s.position.v,
                t: s.position.t,
                lambda: s.lambda,
                k: s.k,
                k_fd: fd_curvature(&we, s.z)?,
                schober_bound: s.sharp_bound,
                ratio: s.ratio(),
            })
        })
        .collect();
    let mut summary = CurvatureSummary {
        samples: rows.len(),
        failed: 0,
        max_ratio: f64::NEG_INFINITY,
        argmax: Complex::new(f64::NAN, f64::NAN),
        max_abs_k: 0.0,
    };
    for r in &rows {
        match r {
            Ok(r) => {
                if r.ratio > summary.max_ratio {
                    summary.max_ratio = r.ratio;
                    summary.argmax = r.z;
                }
                summary.max_abs_k = summary.max_abs_k.max(r.k.abs());
            }
            Err(_) => summary.failed += 1,
        }
    }
    Ok((rows, summary))
}

pub fn write_curvature_csv<W: Write>(
    out: &mut W,
    rows: &[Result<CurvatureRow, EnneperError>],
) -> io::Result<()> {
    writeln!(out, "{CURVATURE_CSV_HEADER}")?;
    for r in rows.iter().flatten() {
        let fields = [
            r.z.re,
            r.z.im,
            r.u,
            r.v,
            r.t,
            r.lambda,
            r.k,
            r.k_fd,
            r.schober_bound,
            r.ratio,
        ];
        let line: Vec<String> = fields.iter().map(|&x| num(x)).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}

/// Heat map of `|K|·(Im z)²` over the grid, white (0) to red (1).
pub fn write_curvature_svg<W: Write>(
    out: &mut W,
    grid: &GridSpec,
    rows: &[Result<CurvatureRow, EnneperError>],
) -> io::Result<()> {
    const CELL: usize = 8;
    let (w, h) = (grid.n_re * CELL, grid.n_im * CELL);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">"
    );
    for (k, r) in rows.iter().enumerate() {
        let (row, col) = (k / grid.n_re, k % grid.n_re);
        // Im z grows upwards.
        let y = (grid.n_im - 1 - row) * CELL;
        let x = col * CELL;
        let fill = match r {
            Ok(r) => {
                let shade = (255.0 * (1.0 - r.ratio.clamp(0.0, 1.0))).round() as u8;
                format!("#ff{shade:02x}{shade:02x}")
            }
            Err(_) => "#808080".to_string(),
        };
        let _ = writeln!(
            svg,
            "<rect x=\"{x}\" y=\"{y}\" width=\"{CELL}\" height=\"{CELL}\" fill=\"{fill}\"/>"
        );
    }
    svg.push_str("</svg>\n");
    out.write_all(svg.as_bytes())
}

/// Curvature report: CSV (or SVG heat map) to the output path, summary
/// with the maximal `|K|·(Im z)²` in [`RunOutcome::summary`].
pub fn cmd_curvature(cfg: &JobConfig) -> Result<RunOutcome, CliError> {
    let path = cfg.output()?;
    let (rows, summary) = curvature_rows(cfg)?;
    let mut out = create(path)?;
    match cfg.format() {
        Format::Svg => write_curvature_svg(&mut out, &cfg.grid, &rows),
        _ => write_curvature_csv(&mut out, &rows),
    }
    .and_then(|_| out.flush())
    .map_err(io_err(path))?;
    let warnings = rows
        .iter()
        .filter_map(|r| r.as_ref().err())
        .map(|e| format!("sample failed: {e}"))
        .collect();
    Ok(RunOutcome {
        files: vec![path.to_path_buf()],
        samples: summary.samples,
        failed_samples: summary.failed,
        warnings,
        summary: Some(serde_json::to_value(summary)?),
        passed: true,
        ..RunOutcome::default()
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub observed: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn new(name: impl Into<String>, observed: f64, tolerance: f64, pass: bool) -> Self {
        Check {
            name: name.into(),
            observed,
            tolerance,
            pass: pass && !observed.is_nan(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
    pub pass: bool,
}

/// Disk grid used by the `heinz-disk` suite.
pub const HEINZ_DISK_GRID: (f64, usize, usize) = (0.95, 40, 72);

fn failure_check(name: &str, failures: usize) -> Check {
    Check::new(name, failures as f64, 0.0, failures == 0)
}

/// Run one verification suite against the configured data and grid.
pub fn run_suite(suite: Suite, cfg: &JobConfig) -> Result<VerificationReport, CliError> {
    let tol = cfg.tol.unwrap_or(suite.default_tolerance());
    let grid = &cfg.grid;
    let points = grid.points();
    let mut checks = Vec::new();
    match suite {
        Suite::Heinz => {
            let m = cfg.harmonic_map()?;
            let r = harmonic::verify_heinz(&m, grid, tol)?;
            checks.push(Check::new(
                format!("min |Df| >= Im b / Im a = {}", r.bound),
                r.min_value,
                tol,
                r.violations.is_empty(),
            ));
            checks.push(failure_check(
                "failed or non-sense-preserving samples",
                r.failures.len(),
            ));
        }
        Suite::HeinzDisk => {
            let m = cfg.harmonic_map()?;
            let (radius, n_r, n_t) = HEINZ_DISK_GRID;
            let disk = DiskGrid::new(radius, n_r, n_t)?;
            let r = harmonic::verify_heinz_disk(&m, &disk, tol, &cfg.quadrature)?;
            checks.push(Check::new(
                format!("min |D(f∘cayley)| over |z| <= {radius} >= {}", r.bound),
                r.min_value,
                tol,
                r.violations.is_empty(),
            ));
            checks.push(failure_check("failed samples", r.failures.len()));
        }
        Suite::SchwarzPick => {
            let we = cfg.we_data()?;
            let (q, dq) = (we.q(), we.q_prime());
            let r = harmonic::BoundReport::collect(&points, 0.0, tol, |z| {
                harmonic::schwarz_pick_residual_with(q, dq, z, Domain::HalfPlane)
            });
            checks.push(Check::new(
                "min Schwarz-Pick residual >= 0",
                r.min_value,
                tol,
                r.violations.is_empty(),
            ));
            checks.push(failure_check(
                "failed samples or |q| >= 1",
                r.failures.len(),
            ));
        }
        Suite::Conformality => {
            let we = cfg.we_data()?;
            let (max, failures) = max_over(&points, |z| we.relative_conformality_residual(z));
            checks.push(Check::new(
                "max relative conformality residual",
                max,
                tol,
                max <= tol,
            ));
            checks.push(failure_check("failed samples", failures));
        }
        Suite::CurvatureRoutes => {
            let we = cfg.we_data()?;
            let m = cfg.harmonic_map()?;
            let (fd, fd_fail) = max_over(&points, |z| {
                let k = we.gauss_curvature(z)?;
                let kfd = fd_curvature(&we, z)?;
                Ok((k - kfd).abs() / (1e-5f64).max(tol * k.abs()))
            });
            checks.push(Check::new(
                "max |K - K_fd| / max(1e-5, tol*|K|)",
                fd,
                tol,
                fd <= 1.0,
            ));
            let (dil, _) = max_over(&points, |z| {
                let k = we.gauss_curvature(z)?;
                match gauss_curvature_dilatation(&m, z) {
                    Ok(kd) => Ok((k - kd).abs() / 1f64.max(k.abs())),
                    Err(EnneperError::Indeterminate(_)) => Ok(0.0),
                    Err(e) => Err(e),
                }
            });
            checks.push(Check::new(
                "max |K - K_dilatation| / max(1, |K|)",
                dil,
                1e-8,
                dil <= 1e-8,
            ));
            checks.push(failure_check("failed samples", fd_fail));
        }
        Suite::Sharpness => {
            let we = cfg.we_data()?;
            let z0 = we.base();
            let target = -enneper::schober_bound(z0)?;
            let k = we.gauss_curvature(z0)?;
            checks.push(Check::new(
                format!("K(base) = -1/(Im base)^2 = {target}"),
                k,
                tol,
                (k - target).abs() <= tol,
            ));
            let kfd = we.gauss_curvature_fd(z0, fd_step(z0))?;
            checks.push(Check::new(
                "finite-difference K(base) agrees",
                kfd,
                1e-4,
                (kfd - target).abs() <= 1e-4,
            ));
            let (ratio, failures) =
                max_over(&points, |z| Ok(we.gauss_curvature(z)?.abs() * z.im * z.im));
            checks.push(Check::new(
                "max |K|·(Im z)^2 over grid <= 1",
                ratio,
                1e-6,
                ratio <= 1.0 + 1e-6,
            ));
            checks.push(failure_check("failed samples", failures));
        }
    }
    let pass = checks.iter().all(|c| c.pass);
    Ok(VerificationReport {
        suite,
        checks,
        pass,
    })
}

fn max_over<F>(points: &[Complex], f: F) -> (f64, usize)
where
    F: Fn(Complex) -> Result<f64, EnneperError> + Sync,
{
    use rayon::prelude::*;
    let values: Vec<_> = points.par_iter().map(|&z| f(z)).collect();
    let mut max = f64::NEG_INFINITY;
    let mut failures = 0;
    for v in values {
        match v {
            Ok(v) => max = max.max(v),
            Err(_) => failures += 1,
        }
    }
    (max, failures)
}

/// Run the configured suite; write the JSON report to the output path when
/// one is given.
pub fn cmd_verify(cfg: &JobConfig) -> Result<RunOutcome, CliError> {
    let suite = cfg
        .suite
        .ok_or_else(|| CliError::Config("verify needs --suite".into()))?;
    let report = run_suite(suite, cfg)?;
    let json = serde_json::to_string_pretty(&report)?;
    let mut files = Vec::new();
    if let Some(path) = &cfg.output_path {
        fs::write(path, format!("{json}\n")).map_err(io_err(path))?;
        files.push(path.clone());
    }
    Ok(RunOutcome {
        files,
        samples: cfg.grid.len(),
        passed: report.pass,
        summary: Some(serde_json::to_value(&report)?),
        ..RunOutcome::default()
    })
}

/// Mesh, curvature table and sharpness report for the built-in extremal
/// surface, written into the output directory. `--format csv` skips the mesh.
pub fn cmd_extremal(cfg: &JobConfig) -> Result<RunOutcome, CliError> {
    let dir = cfg.output()?.to_path_buf();
    fs::create_dir_all(&dir).map_err(io_err(&dir))?;
    let base = JobConfig {
        extremal: true,
        p: None,
        q: None,
        base: Complex::new(0.0, 1.0),
        base_value: None,
        ..cfg.clone()
    };
    let mut outcome = RunOutcome {
        passed: true,
        ..RunOutcome::default()
    };
    if cfg.format() != Format::Csv {
        outcome.absorb(cmd_surface(&JobConfig {
            command: Command::Surface,
            format: Some(Format::Obj),
            output_path: Some(dir.join("surface.obj")),
            ..base.clone()
        })?);
    }
    let curvature = cmd_curvature(&JobConfig {
        command: Command::Curvature,
        format: Some(Format::Csv),
        output_path: Some(dir.join("curvature.csv")),
        ..base.clone()
    })?;
    let curvature_summary = curvature.summary.clone();
    outcome.absorb(curvature);
    let verify = cmd_verify(&JobConfig {
        command: Command::Verify,
        suite: Some(Suite::Sharpness),
        output_path: Some(dir.join("verify.json")),
        ..base
    })?;
    outcome.summary = Some(serde_json::json!({
        "curvature": curvature_summary,
        "verify": verify.summary,
    }));
    outcome.files.extend(verify.files);
    outcome.passed &= verify.passed;
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_syntax() {
        let g = parse_grid("-3:3:50x0.05:3:50").unwrap();
        assert_eq!((g.re_min, g.re_max, g.n_re), (-3.0, 3.0, 50));
        assert_eq!((g.im_min, g.im_max, g.n_im), (0.05, 3.0, 50));
        let g = parse_grid("-1:1:3 x 1e-2:2:4").unwrap();
        assert_eq!((g.im_min, g.n_im), (0.01, 4));
        assert!(matches!(parse_grid("-1:1:3"), Err(CliError::GridSyntax(_))));
        assert!(matches!(
            parse_grid("-1:1x0.1:1:2"),
            Err(CliError::GridSyntax(_))
        ));
        assert!(matches!(
            parse_grid("-1:1:2x0:1:2"),
            Err(CliError::Harmonic(_))
        ));
    }

    #[test]
    fn complex_syntax() {
        assert_eq!(parse_complex("0,1").unwrap(), Complex::new(0.0, 1.0));
        assert_eq!(
            parse_complex(" -2.5 , 3 ").unwrap(),
            Complex::new(-2.5, 3.0)
        );
        assert!(parse_complex("1").is_err());
        assert!(parse_complex("a,b").is_err());
    }

    #[test]
    fn suite_names() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
            let json = serde_json::to_string(&s).unwrap();
            assert_eq!(json, format!("\"{}\"", s.name()));
        }
        assert!(matches!(
            "bogus".parse::<Suite>(),
            Err(CliError::UnknownSuite(_))
        ));
    }

    #[test]
    fn validation() {
        let mut cfg = JobConfig::default();
        cfg.validate().unwrap();
        cfg.format = Some(Format::Obj);
        assert!(cfg.validate().is_err());
        cfg.format = None;
        cfg.p = Some("1".into());
        assert!(matches!(cfg.validate(), Err(CliError::Config(_))));
        cfg.q = Some("z +".into());
        assert!(matches!(cfg.validate(), Err(CliError::Expr { .. })));
        cfg.q = Some("z/2".into());
        cfg.validate().unwrap();
        cfg.command = Command::Verify;
        assert!(cfg.validate().is_err());
        cfg.suite = Some(Suite::Conformality);
        cfg.validate().unwrap();
    }

    fn sample(z: Complex) -> Result<SurfaceSample, EnneperError> {
        Ok(SurfaceSample {
            z,
            position: enneper::Position {
                u: z.re,
                v: z.im,
                t: 0.0,
            },
            lambda: 1.0,
            k: 0.0,
            bound: 1.0,
            bound_chain: 4.0,
            sharp_bound: 1.0,
            admissible: true,
        })
    }

    #[test]
    fn obj_tessellation() {
        let grid = GridSpec::new((0.0, 1.0, 2), (1.0, 2.0, 2)).unwrap();
        let samples: Vec<_> = grid.points().into_iter().map(sample).collect();
        let mut buf = Vec::new();
        let stats = write_obj(&mut buf, &grid, &samples).unwrap();
        assert_eq!((stats.vertices, stats.triangles), (4, 2));
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 6);
        assert!(lines[0].starts_with("v 0.0000000000000000e0 1.0000000000000000e0"));
        assert_eq!(lines[4], "f 1 2 4");
        assert_eq!(lines[5], "f 1 4 3");
    }

    #[test]
    fn obj_skips_failed_cells() {
        let grid = GridSpec::new((0.0, 2.0, 3), (1.0, 2.0, 2)).unwrap();
        let mut samples: Vec<_> = grid.points().into_iter().map(sample).collect();
        samples[0] = Err(EnneperError::Degenerate(Complex::new(0.0, 1.0)));
        let mut buf = Vec::new();
        let stats = write_obj(&mut buf, &grid, &samples).unwrap();
        assert_eq!(stats.vertices, 5);
        assert_eq!(
            (stats.cells, stats.failed_cells, stats.triangles),
            (2, 1, 2)
        );
        let text = String::from_utf8(buf).unwrap();
        // vertices renumbered: grid index 1 -> 1, 2 -> 2, 4 -> 4, 5 -> 5
        assert!(text.contains("f 1 2 5\nf 1 5 4\n"), "{text}");
    }

    #[test]
    fn exit_codes() {
        let ok = RunOutcome {
            passed: true,
            samples: 100,
            failed_samples: 1,
            ..RunOutcome::default()
        };
        assert_eq!(ok.exit_code(), 0);
        let many = RunOutcome {
            failed_samples: 2,
            ..ok.clone()
        };
        assert_eq!(many.exit_code(), 2);
        let fail = RunOutcome {
            passed: false,
            ..ok
        };
        assert_eq!(fail.exit_code(), 1);
    }
}
