//! `rotkit` command-line front-end.
//!
//! Exit codes: 0 on success, 2 for bad flags or input, 1 when a computation fails
//! (degenerate registration, interpolation breakdown, suite errors).

pub mod format;
pub mod xyz;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use rotkit::bench::{run_suites, BenchConfig, Suite};
use rotkit::convert::{convert, ReprKind, Rotation};
use rotkit::interp::{
    FisherBlendPath, InterpMethod, Interpolator, LinearEulerPath, LinearRotationVectorPath,
    LinearSixdPath, MatrixGeodesicPath, NlerpPath, SlerpPath,
};
use rotkit::probdist::MatrixFisher;
use rotkit::registration::{horn_align, icp, DEFAULT_ICP_MAX_ITER, DEFAULT_ICP_TOL};
use rotkit::repr::Registry;
use rotkit::so3::{canonicalize, geodesic_distance, sample_uniform};
use rotkit::{
    AxisAngle, EulerAngles, Mat3, RotError, RotationMatrix, RotationVector, SixD, UnitQuaternion,
    Vec3,
};

use format::{join, num, Format, Meta, ReportDocument};

#[derive(Debug, Parser)]
#[command(name = "rotkit", version, about = "Rotation representations: conversion, interpolation, registration and benchmarks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run benchmark suites and write a report.
    Bench(BenchArgs),
    /// Convert one rotation between representations.
    Convert(ConvertArgs),
    /// Sample an interpolation path.
    Interp(InterpArgs),
    /// Rigidly align two point files.
    Register(RegisterArgs),
    /// Print Haar-uniform unit quaternions.
    Sample(SampleArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    All,
    Stability,
    Singularity,
    Interp,
    Robustness,
    Timing,
}

impl SuiteArg {
    fn suites(self) -> Vec<Suite> {
        match self {
            SuiteArg::All => Suite::ALL.to_vec(),
            SuiteArg::Stability => vec![Suite::Stability],
            SuiteArg::Singularity => vec![Suite::Singularity],
            SuiteArg::Interp => vec![Suite::Interp],
            SuiteArg::Robustness => vec![Suite::Robustness],
            SuiteArg::Timing => vec![Suite::Timing],
        }
    }
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value_t = SuiteArg::All)]
    pub suite: SuiteArg,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Timed iterations per kernel.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: Option<u64>,
    /// Rotations per batch.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub batch: Option<u64>,
    /// Size of the robustness edge-case set.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub edge_cases: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Value layouts accepted by `convert`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReprTag {
    /// w,x,y,z
    Quat,
    /// 9 entries, row-major
    Matrix,
    /// α,β,γ for R = Rz(α) Ry(β) Rx(γ)
    EulerZyx,
    /// α,β,γ for R = Rx(α) Ry(β) Rz(γ)
    EulerXyz,
    /// ux,uy,uz,θ
    AxisAngle,
    /// vx,vy,vz
    Rotvec,
    /// first column then second column
    Sixd,
}

impl ReprTag {
    fn arity(self) -> usize {
        match self {
            ReprTag::Quat | ReprTag::AxisAngle => 4,
            ReprTag::Matrix => 9,
            ReprTag::EulerZyx | ReprTag::EulerXyz | ReprTag::Rotvec => 3,
            ReprTag::Sixd => 6,
        }
    }

    fn kind(self) -> ReprKind {
        match self {
            ReprTag::Quat => ReprKind::Quaternion,
            ReprTag::Matrix => ReprKind::Matrix,
            ReprTag::EulerZyx => ReprKind::Euler(rotkit::EulerConvention::ZYX),
            ReprTag::EulerXyz => ReprKind::Euler(rotkit::EulerConvention::XYZ),
            ReprTag::AxisAngle => ReprKind::AxisAngle,
            ReprTag::Rotvec => ReprKind::RotationVector,
            ReprTag::Sixd => ReprKind::SixD,
        }
    }

    fn name(self) -> &'static str {
        match self {
            ReprTag::Quat => "quat",
            ReprTag::Matrix => "matrix",
            ReprTag::EulerZyx => "euler-zyx",
            ReprTag::EulerXyz => "euler-xyz",
            ReprTag::AxisAngle => "axis-angle",
            ReprTag::Rotvec => "rotvec",
            ReprTag::Sixd => "sixd",
        }
    }

    fn parse(self, v: &[f64]) -> Result<Rotation, CliError> {
        check_arity(self.name(), self.arity(), v)?;
        let r = match self {
            ReprTag::Quat => Rotation::Quaternion(UnitQuaternion::new(v[0], v[1], v[2], v[3])?),
            ReprTag::Matrix => Rotation::Matrix(RotationMatrix::new(Mat3::from_row_slice(v))?),
            ReprTag::EulerZyx => Rotation::Euler(EulerAngles::zyx(v[0], v[1], v[2])),
            ReprTag::EulerXyz => Rotation::Euler(EulerAngles::xyz(v[0], v[1], v[2])),
            ReprTag::AxisAngle => {
                Rotation::AxisAngle(AxisAngle::new(Vec3::new(v[0], v[1], v[2]), v[3])?)
            }
            ReprTag::Rotvec => Rotation::RotationVector(RotationVector::new(v[0], v[1], v[2])),
            ReprTag::Sixd => Rotation::SixD(SixD::new(
                Vec3::new(v[0], v[1], v[2]),
                Vec3::new(v[3], v[4], v[5]),
            )?),
        };
        Ok(r)
    }
}

fn components(r: &Rotation) -> Vec<f64> {
    match r {
        Rotation::Quaternion(q) => q.to_array().to_vec(),
        Rotation::Matrix(m) => m.to_row_major().to_vec(),
        Rotation::Euler(e) => e.angles().to_vec(),
        Rotation::AxisAngle(aa) => {
            let u = aa.axis();
            vec![u.x, u.y, u.z, aa.angle()]
        }
        Rotation::RotationVector(v) => v.vector().as_slice().to_vec(),
        Rotation::SixD(s) => s.to_array().to_vec(),
    }
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    #[arg(long, value_enum)]
    pub from: ReprTag,
    #[arg(long, value_enum)]
    pub to: ReprTag,
    /// Comma-separated components in the source layout.
    #[arg(long, allow_hyphen_values = true)]
    pub value: String,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("where").args(["samples", "t"]).multiple(false)))]
pub struct InterpArgs {
    /// slerp, nlerp, matrix-geodesic, linear-rotation-vector, linear-sixd,
    /// linear-euler or fisher-blend.
    #[arg(long)]
    pub method: String,
    /// Start point in the method's native layout (quaternion, 9 matrix entries,
    /// rotation vector, 6D, ZYX Euler angles, or 9 Fisher parameter entries).
    #[arg(long, allow_hyphen_values = true)]
    pub start: String,
    #[arg(long, allow_hyphen_values = true)]
    pub end: String,
    /// Evenly spaced samples over [0, 1], endpoints included.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: Option<u64>,
    /// Single parameter value instead of a sweep.
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RegisterMethod {
    Horn,
    Icp,
}

#[derive(Debug, Args)]
pub struct RegisterArgs {
    #[arg(long)]
    pub source: PathBuf,
    #[arg(long)]
    pub target: PathBuf,
    #[arg(long, value_enum, default_value_t = RegisterMethod::Horn)]
    pub method: RegisterMethod,
    #[arg(long, default_value_t = DEFAULT_ICP_MAX_ITER)]
    pub max_iter: usize,
    #[arg(long, default_value_t = DEFAULT_ICP_TOL)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
    #[error("write failed: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failed(_) | CliError::Io(_) => 1,
        }
    }
}

/// Input validation failures are usage errors.
impl From<RotError> for CliError {
    fn from(e: RotError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<xyz::XyzError> for CliError {
    fn from(e: xyz::XyzError) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn check_arity(what: &str, n: usize, v: &[f64]) -> Result<(), CliError> {
    if v.len() != n {
        return Err(CliError::Usage(format!(
            "{what} takes {n} comma-separated values, got {}",
            v.len()
        )));
    }
    Ok(())
}

fn parse_values(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|f| {
            let f = f.trim();
            f.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::Usage(format!("`{f}` is not a finite number")))
        })
        .collect()
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Bench(a) => cmd_bench(&a, out),
        Command::Convert(a) => cmd_convert(&a, out),
        Command::Interp(a) => cmd_interp(&a, out),
        Command::Register(a) => cmd_register(&a, out),
        Command::Sample(a) => cmd_sample(&a, out),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn cmd_bench(a: &BenchArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let mut cfg = BenchConfig::with_seed(a.seed);
    if let Some(t) = a.trials {
        cfg.trials = t as usize;
    }
    if let Some(b) = a.batch {
        cfg.batch = b as usize;
    }
    if let Some(n) = a.edge_cases {
        cfg.n_edge = n as usize;
    }
    cfg.validate()?;
    let suites = a.suite.suites();
    let rows = run_suites(&Registry::builtin(), &cfg, &suites)
        .map_err(|e| CliError::Failed(e.to_string()))?;
    let meta = Meta::new(&cfg, suites.iter().map(|s| s.name().to_string()).collect());
    let doc = ReportDocument { meta, rows: &rows };

    let mut file;
    let sink: &mut dyn Write = match &a.out {
        Some(path) => {
            file = BufWriter::new(File::create(path).map_err(|e| {
                CliError::Usage(format!("cannot create {}: {e}", path.display()))
            })?);
            &mut file
        }
        None => out,
    };
    match a.format {
        Format::Csv => format::write_csv(sink, &rows)?,
        Format::Json => format::write_json(sink, &doc)?,
        Format::Md => format::write_markdown(sink, &doc)?,
    }
    sink.flush()?;
    Ok(())
}

pub fn cmd_convert(a: &ConvertArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let src = a.from.parse(&parse_values(&a.value)?)?;
    let dst = convert(&src, a.to.kind()).map_err(|e| CliError::Failed(e.to_string()))?;
    writeln!(out, "{}", join(&components(&dst)))?;
    Ok(())
}

fn build_path(method: InterpMethod, start: &[f64], end: &[f64]) -> Result<Box<dyn Interpolator>, CliError> {
    let quat = |v: &[f64]| -> Result<UnitQuaternion, CliError> {
        check_arity("quaternion endpoint", 4, v)?;
        Ok(UnitQuaternion::new(v[0], v[1], v[2], v[3])?)
    };
    let matrix = |v: &[f64]| -> Result<RotationMatrix, CliError> {
        check_arity("matrix endpoint", 9, v)?;
        Ok(RotationMatrix::new(Mat3::from_row_slice(v))?)
    };
    let rotvec = |v: &[f64]| -> Result<RotationVector, CliError> {
        check_arity("rotation-vector endpoint", 3, v)?;
        Ok(RotationVector::new(v[0], v[1], v[2]))
    };
    let sixd = |v: &[f64]| -> Result<SixD, CliError> {
        check_arity("6D endpoint", 6, v)?;
        Ok(SixD::new(Vec3::new(v[0], v[1], v[2]), Vec3::new(v[3], v[4], v[5]))?)
    };
    let euler = |v: &[f64]| -> Result<EulerAngles, CliError> {
        check_arity("ZYX Euler endpoint", 3, v)?;
        Ok(EulerAngles::zyx(v[0], v[1], v[2]))
    };
    let fisher = |v: &[f64]| -> Result<MatrixFisher, CliError> {
        check_arity("Fisher parameter endpoint", 9, v)?;
        Ok(MatrixFisher::new(Mat3::from_row_slice(v))?)
    };
    Ok(match method {
        InterpMethod::Slerp => Box::new(SlerpPath::new(quat(start)?, quat(end)?)),
        InterpMethod::Nlerp => Box::new(NlerpPath::new(quat(start)?, quat(end)?)),
        InterpMethod::MatrixGeodesic => Box::new(MatrixGeodesicPath::new(matrix(start)?, matrix(end)?)),
        InterpMethod::LinearRotationVector => {
            Box::new(LinearRotationVectorPath::new(rotvec(start)?, rotvec(end)?))
        }
        InterpMethod::LinearSixd => Box::new(LinearSixdPath::new(sixd(start)?, sixd(end)?)?),
        InterpMethod::LinearEuler => Box::new(LinearEulerPath::new(euler(start)?, euler(end)?)?),
        InterpMethod::FisherBlend => Box::new(FisherBlendPath::new(fisher(start)?, fisher(end)?)),
    })
}

pub fn cmd_interp(a: &InterpArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let method: InterpMethod = a.method.parse()?;
    let path = build_path(method, &parse_values(&a.start)?, &parse_values(&a.end)?)?;
    let ts: Vec<f64> = match (a.t, a.samples) {
        (Some(t), _) => {
            if !(0.0..=1.0).contains(&t) {
                return Err(CliError::Usage(format!("--t must lie in [0, 1], got {t}")));
            }
            vec![t]
        }
        (None, k) => {
            let k = k.unwrap_or(11) as usize;
            if k == 1 {
                vec![0.0]
            } else {
                (0..k).map(|i| i as f64 / (k - 1) as f64).collect()
            }
        }
    };
    let failed = |e: RotError| CliError::Failed(e.to_string());
    let mut prev = path.eval(0.0).map_err(failed)?;
    let mut length = 0.0;
    let mut rows = Vec::with_capacity(ts.len());
    for &t in &ts {
        let r = path.eval(t).map_err(failed)?;
        length += geodesic_distance(&prev, &r);
        prev = r;
        let mut row = vec![t];
        row.extend(path.components(t).map_err(failed)?);
        row.push(length);
        rows.push(row);
    }
    for row in rows {
        writeln!(out, "{}", join(&row))?;
    }
    Ok(())
}

pub fn cmd_register(a: &RegisterArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let source = xyz::read_points(&a.source)?;
    let target = xyz::read_points(&a.target)?;
    let classify = |e: RotError| match e {
        RotError::SizeMismatch { .. } | RotError::TooFewPoints(_) => CliError::Usage(e.to_string()),
        _ => CliError::Failed(e.to_string()),
    };
    let (transform, rms, iterations) = match a.method {
        RegisterMethod::Horn => {
            let r = horn_align(&source, &target).map_err(classify)?;
            (r.transform, r.rms, None)
        }
        RegisterMethod::Icp => {
            if !(a.tol >= 0.0) {
                return Err(CliError::Usage(format!("--tol must be non-negative, got {}", a.tol)));
            }
            let r = icp(&source, &target, a.max_iter, a.tol).map_err(classify)?;
            (r.transform, r.rms, Some(r.iterations))
        }
    };
    let q = rotkit::convert::matrix_to_quat(&transform.rotation);
    writeln!(out, "quaternion: {}", join(&q.to_array()))?;
    writeln!(out, "matrix: {}", join(&transform.rotation.to_row_major()))?;
    writeln!(out, "translation: {}", join(transform.translation.as_slice()))?;
    writeln!(out, "rms: {}", num(rms))?;
    if let Some(n) = iterations {
        writeln!(out, "iterations: {n}")?;
    }
    Ok(())
}

pub fn cmd_sample(a: &SampleArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let mut rng = rotkit::Rng::new(a.seed);
    for _ in 0..a.n {
        let q = canonicalize(&sample_uniform(&mut rng));
        writeln!(out, "{}", join(&q.to_array()))?;
    }
    Ok(())
}
