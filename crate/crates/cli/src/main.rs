use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use frame_certify::certify::{certify_complex, complement_property, hmw_lower_bound, CertifyOptions, Verdict};
use frame_certify::constructions::{
    bodmann_hammen, connect_frames, path_eval, r3_example, random_frame, trivial_non_retrievable, AngleVariant,
    BodmannHammenParams,
};
use frame_certify::frame::{frame_bounds, ComplexFrame, Field};
use frame_certify::io::{frame_to_json, parse_frame};
use frame_certify::stability::{stability_experiment, stability_radius};
use frame_certify::Error;

const VERSION: &str = env!("CARGO_PKG_VERSION");

const EXIT_USAGE: u8 = 64;
const EXIT_SOFTWARE: u8 = 70;
const EXIT_IO: u8 = 74;

#[derive(Parser, Debug)]
#[command(name = "frame-certify", version, about = "Phase retrievability certification for finite frames")]
struct Cli {
    #[command(flatten)]
    config: ConfigArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct ConfigArgs {
    /// Base seed; falls back to FRAME_CERTIFY_SEED, then 42.
    #[arg(long, global = true, env = "FRAME_CERTIFY_SEED", default_value_t = 42)]
    seed: u64,
    /// Multistart count for the a0 search.
    #[arg(long, global = true, default_value_t = 64)]
    starts: usize,
    /// Relative stopping tolerance of each start.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, global = true, default_value_t = 100)]
    trials: usize,
    /// Perturbation radius as a fraction of rho.
    #[arg(long, global = true, default_value_t = 0.99)]
    radius_fraction: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Reject Bodmann-Hammen angles that hit a denied rational multiple of pi.
    #[arg(long, global = true)]
    strict_angles: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Serialize, Debug)]
struct RunConfig {
    seed: u64,
    starts: usize,
    tol: f64,
    trials: usize,
    radius_fraction: f64,
    output_format: Format,
    strict_angles: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide phase retrievability of a frame file.
    Certify {
        frame: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
    },
    /// Stability radius of a retrievable frame.
    Rho { frame: PathBuf },
    /// Emit a reference frame as canonical JSON.
    Construct {
        #[arg(value_enum)]
        family: Family,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, value_enum, default_value_t = VariantArg::TwoPi)]
        variant: VariantArg,
    },
    /// Run a validation experiment.
    Experiment {
        #[command(subcommand)]
        kind: Experiment,
    },
    /// Cardinality bounds for dimension n.
    Bounds {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand, Debug)]
enum Experiment {
    /// Certify random perturbations within a fraction of rho.
    Perturb {
        #[arg(long)]
        frame: PathBuf,
    },
    /// Connect two frames and track frame bounds along the path.
    Path {
        #[arg(long, requires = "to")]
        from: Option<PathBuf>,
        #[arg(long, requires = "from")]
        to: Option<PathBuf>,
        /// Dimension for random endpoints when no files are given.
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 41)]
        points: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum MethodArg {
    Eigen,
    Complement,
    Auto,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Family {
    BodmannHammen,
    R3Example,
    Trivial,
    Random,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum VariantArg {
    Verbatim,
    TwoPi,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotRetrievableInput { .. } => 1,
            Error::InvalidFrame(_)
            | Error::Json(_)
            | Error::NotRealFrame
            | Error::TooLarge { .. }
            | Error::BadDimension(_)
            | Error::DeniedAngle { .. }
            | Error::DegenerateAngle(_)
            | Error::BadCardinality { .. }
            | Error::CardinalityTooSmall { .. }
            | Error::ShapeMismatch { .. }
            | Error::PathParameter(_) => EXIT_USAGE,
            _ => EXIT_SOFTWARE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("frame-certify: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> CmdResult {
    let config = run_config(&cli.config)?;
    let mut opts = CertifyOptions::with_seed(config.seed);
    opts.a0.starts = config.starts;
    opts.a0.tol = config.tol;

    match cli.command {
        Command::Certify { frame, method } => cmd_certify(&read_frame(&frame)?, method, &config, &opts),
        Command::Rho { frame } => cmd_rho(&read_frame(&frame)?, &config, &opts),
        Command::Construct {
            family,
            n,
            m,
            a,
            variant,
        } => cmd_construct(family, n, m, a, variant, &config),
        Command::Experiment { kind } => match kind {
            Experiment::Perturb { frame } => cmd_perturb(&read_frame(&frame)?, &config, &opts),
            Experiment::Path {
                from,
                to,
                n,
                m,
                points,
            } => cmd_path(from.as_deref(), to.as_deref(), n, m, points, &config),
        },
        Command::Bounds { n } => cmd_bounds(n, &config),
    }
}

fn run_config(args: &ConfigArgs) -> Result<RunConfig, Failure> {
    if args.seed == 0 || args.starts == 0 || args.trials == 0 {
        return Err(Failure::usage("--seed, --starts and --trials must be positive"));
    }
    if !(args.tol > 0.0) || !(args.radius_fraction > 0.0) {
        return Err(Failure::usage("--tol and --radius-fraction must be positive"));
    }
    Ok(RunConfig {
        seed: args.seed,
        starts: args.starts,
        tol: args.tol,
        trials: args.trials,
        radius_fraction: args.radius_fraction,
        output_format: args.format,
        strict_angles: args.strict_angles,
    })
}

fn read_frame(path: &Path) -> Result<ComplexFrame, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_IO,
        message: format!("{}: {e}", path.display()),
    })?;
    parse_frame(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

/// Adds `version` and `config` to a JSON object.
fn stamp(value: impl Serialize, config: &RunConfig) -> Value {
    let mut v = serde_json::to_value(value).expect("report serializes");
    if let Value::Object(map) = &mut v {
        map.insert("version".into(), json!(VERSION));
        map.insert("config".into(), serde_json::to_value(config).expect("config serializes"));
    }
    v
}

fn emit_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json"));
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Retrievable => 0,
        Verdict::NotRetrievable => 1,
        Verdict::Inconclusive => 2,
    }
}

fn csv_list(xs: &[f64]) -> String {
    xs.iter().map(|x| format!("{x:.16e}")).collect::<Vec<_>>().join(";")
}

fn cmd_certify(fr: &ComplexFrame, method: MethodArg, config: &RunConfig, opts: &CertifyOptions) -> CmdResult {
    let use_complement = match method {
        MethodArg::Complement => true,
        MethodArg::Eigen => false,
        MethodArg::Auto => fr.field() == Field::Real,
    };

    if use_complement {
        let res = complement_property(fr)?;
        let verdict = if res.holds {
            Verdict::Retrievable
        } else {
            Verdict::NotRetrievable
        };
        match config.output_format {
            Format::Json => emit_json(&stamp(
                json!({
                    "verdict": verdict,
                    "method": "complement",
                    "holds": res.holds,
                    "failing_partition": res.failing_partition,
                    "seed": config.seed,
                }),
                config,
            )),
            Format::Csv => {
                let part = res
                    .failing_partition
                    .map(|p| p.iter().map(|&b| if b { "1" } else { "0" }).collect::<String>())
                    .unwrap_or_default();
                println!("verdict,method,holds,failing_partition,seed,version");
                println!("{verdict},complement,{},{part},{},{VERSION}", res.holds, config.seed);
            }
        }
        return Ok(verdict_code(verdict));
    }

    let rep = certify_complex(fr, opts);
    match config.output_format {
        Format::Json => emit_json(&stamp(&rep, config)),
        Format::Csv => {
            let method = serde_json::to_value(rep.method).expect("method");
            println!("verdict,a0,method,starts,tol,seed,witness_xi,kernel_excess,version");
            println!(
                "{},{:.16e},{},{},{:.16e},{},{},{},{VERSION}",
                rep.verdict,
                rep.a0_estimate,
                method.as_str().unwrap_or_default(),
                rep.starts_used,
                rep.tolerance,
                rep.seed,
                csv_list(&rep.witness_xi),
                rep.kernel_excess.as_deref().map(csv_list).unwrap_or_default(),
            );
        }
    }
    Ok(verdict_code(rep.verdict))
}

fn cmd_rho(fr: &ComplexFrame, config: &RunConfig, opts: &CertifyOptions) -> CmdResult {
    let rep = certify_complex(fr, opts);
    if rep.verdict != Verdict::Retrievable {
        return Err(Failure {
            code: 1,
            message: format!(
                "frame is not certified retrievable ({}, a0 = {:e}); the stability radius needs a0 > 0",
                rep.verdict, rep.a0_estimate
            ),
        });
    }
    let rho = stability_radius(fr, rep.a0_estimate)?;
    match config.output_format {
        Format::Json => emit_json(&stamp(rho, config)),
        Format::Csv => {
            println!("rho,B,a0,a1,m,version");
            println!(
                "{:.16e},{:.16e},{:.16e},{:.16e},{},{VERSION}",
                rho.rho, rho.b, rho.a0, rho.a1, rho.m
            );
        }
    }
    Ok(0)
}

fn cmd_construct(
    family: Family,
    n: Option<usize>,
    m: Option<usize>,
    a: f64,
    variant: VariantArg,
    config: &RunConfig,
) -> CmdResult {
    let need_n = || n.ok_or_else(|| Failure::usage("this family needs --n"));
    let fr = match family {
        Family::R3Example => r3_example(),
        Family::BodmannHammen => bodmann_hammen(&BodmannHammenParams {
            n: need_n()?,
            a,
            variant: match variant {
                VariantArg::Verbatim => AngleVariant::Verbatim,
                VariantArg::TwoPi => AngleVariant::TwoPi,
            },
            strict: config.strict_angles,
        })?,
        Family::Trivial => {
            let n = need_n()?;
            trivial_non_retrievable(n, m.unwrap_or((4 * n).saturating_sub(4)))?
        }
        Family::Random => {
            let n = need_n()?;
            random_frame(n, m.unwrap_or(4 * n), config.seed)?
        }
    };
    match config.output_format {
        Format::Json => println!("{}", frame_to_json(&fr)),
        Format::Csv => {
            println!("k,i,re,im");
            for (k, v) in fr.vectors().iter().enumerate() {
                for (i, c) in v.iter().enumerate() {
                    println!("{k},{i},{:.16e},{:.16e}", c.re, c.im);
                }
            }
        }
    }
    Ok(0)
}

fn cmd_perturb(fr: &ComplexFrame, config: &RunConfig, opts: &CertifyOptions) -> CmdResult {
    let rep = stability_experiment(fr, config.trials, config.radius_fraction, config.seed, opts)?;
    match config.output_format {
        Format::Json => emit_json(&stamp(&rep, config)),
        Format::Csv => print!("{}", rep.to_csv()),
    }
    Ok(if rep.passed() { 0 } else { 1 })
}

#[derive(Serialize)]
struct PathPoint {
    t: f64,
    lower: f64,
    upper: f64,
}

fn cmd_path(
    from: Option<&Path>,
    to: Option<&Path>,
    n: usize,
    m: Option<usize>,
    points: usize,
    config: &RunConfig,
) -> CmdResult {
    let (f1, f2) = match (from, to) {
        (Some(a), Some(b)) => (read_frame(a)?, read_frame(b)?),
        _ => {
            let m = m.unwrap_or(2 * n);
            (
                random_frame(n, m, config.seed)?,
                random_frame(n, m, config.seed.wrapping_add(1))?,
            )
        }
    };
    if points < 2 {
        return Err(Failure::usage("--points must be at least 2"));
    }
    let path = connect_frames(&f1, &f2)?;
    let mut grid = Vec::with_capacity(points);
    for s in 0..points {
        let t = (-1.0 + 2.0 * s as f64 / (points - 1) as f64).clamp(-1.0, 1.0);
        let b = frame_bounds(&path_eval(&path, t)?);
        grid.push(PathPoint {
            t,
            lower: b.lower,
            upper: b.upper,
        });
    }
    let endpoints_exact = path_eval(&path, -1.0)? == f1 && path_eval(&path, 1.0)? == f2;
    let min_lower = grid.iter().map(|p| p.lower).fold(f64::INFINITY, f64::min);
    match config.output_format {
        Format::Json => emit_json(&stamp(
            json!({
                "n": f1.n(),
                "m": f1.m(),
                "i": path.i,
                "j": path.j,
                "gamma": path.gamma,
                "delta": path.delta,
                "reorder_at_zero": path.reorder_at_zero(),
                "endpoints_exact": endpoints_exact,
                "min_lower": min_lower,
                "grid": grid,
            }),
            config,
        )),
        Format::Csv => {
            println!("t,lower,upper");
            for p in &grid {
                println!("{:.16e},{:.16e},{:.16e}", p.t, p.lower, p.upper);
            }
        }
    }
    Ok(if endpoints_exact && min_lower > 0.0 { 0 } else { 1 })
}

fn cmd_bounds(n: usize, config: &RunConfig) -> CmdResult {
    if n == 0 {
        return Err(Failure::usage("--n must be positive"));
    }
    let b = hmw_lower_bound(n);
    match config.output_format {
        Format::Json => emit_json(&stamp(b, config)),
        Format::Csv => {
            println!("n,hmw_lower,two_n,conjectured_critical,generic_upper");
            println!(
                "{},{},{},{},{}",
                b.n, b.hmw_lower, b.two_n, b.conjectured_critical, b.generic_upper
            );
        }
    }
    Ok(0)
}
