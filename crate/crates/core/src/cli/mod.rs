//! Command-line front end.
//!
//! Exit status: 0 when every report passes, 1 when a harness reports a
//! failure, 2 for malformed arguments, configs or out-of-range parameters.

pub mod config;
pub mod output;
pub mod suite;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex;

use crate::catalog;
use crate::cgl::CglConfig;
use crate::commutator::{shift_identity, verify_identity};
use crate::error::{Error, Result};
use crate::harness::{self, EstimateSweep};
use crate::hermite::{generate_by_recurrence, monomial_expand, Flavor, HermitePoly};
use crate::multiindex::{enumerate_up_to, MultiIndex};
use crate::scalar::{parse_complex, Exponent};
use crate::semigroup::{gaussian_kernel_norm, weighted_kernel_norm, ComplexParam, GridShape};

use config::{parse_pair, SuiteConfig, DEFAULT_CONFIG};
use output::{estimate_table, fmt_real, identity_row, Stamp, Table, IDENTITY_HEADER};

fn complex_arg(s: &str) -> std::result::Result<Complex<f64>, String> {
    parse_complex(s).map_err(|e| e.to_string())
}

fn exponent_arg(s: &str) -> std::result::Result<Exponent<f64>, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn alpha_arg(s: &str) -> std::result::Result<MultiIndex, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn flavor_arg(s: &str) -> std::result::Result<Flavor, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// `N,L`: points per axis and half-width.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridArg {
    pub points: usize,
    pub half_width: f64,
}

fn grid_arg(s: &str) -> std::result::Result<GridArg, String> {
    let (n, l) = s.split_once(',').ok_or("expected N,L")?;
    Ok(GridArg {
        points: n.trim().parse().map_err(|_| format!("bad point count '{n}'"))?,
        half_width: l.trim().parse().map_err(|_| format!("bad half-width '{l}'"))?,
    })
}

impl GridArg {
    fn shape(self, dim: usize) -> Result<GridShape<f64>> {
        GridShape::new(dim, self.points, self.half_width)
    }
}

#[derive(Debug, Parser)]
#[command(name = "gw-commute", version, about = "Weight/heat-semigroup commutator verification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a Hermite polynomial as `beta<TAB>laurent` lines.
    Hermite(HermiteArgs),
    /// Compare every evaluator of the commutator for one case.
    VerifyIdentity(IdentityArgs),
    /// Check the commutator estimate over a parameter sweep.
    VerifyEstimate(EstimateArgs),
    /// Tabulate the estimate constants.
    Constants(ConstantsArgs),
    /// Weighted Lebesgue norms of the complex Gaussian kernel.
    KernelNorms(KernelNormArgs),
    /// Ginzburg-Landau run with decay and weighted-growth probes.
    Cgl(CglArgs),
    /// Run the harnesses selected by a config file.
    Suite(SuiteArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum HermiteMethod {
    /// Closed form.
    Closed,
    /// Generated from order zero by the three-term recurrence.
    Recurrence,
    /// Expansion of `x^α` in `𝒉_{ω,γ}`; lines are `gamma<TAB>weight`.
    Expand,
}

#[derive(Debug, Args)]
pub struct HermiteArgs {
    #[arg(long, value_parser = alpha_arg)]
    pub alpha: MultiIndex,
    /// `H` (standard) or `h` (half argument).
    #[arg(long, value_parser = flavor_arg, default_value = "H")]
    pub flavor: Flavor,
    #[arg(long, value_enum, default_value = "closed")]
    pub method: HermiteMethod,
    /// Substitute `ω ↦ 1/ω`.
    #[arg(long)]
    pub inverted: bool,
}

#[derive(Debug, Args)]
pub struct IdentityArgs {
    #[arg(long, value_parser = alpha_arg)]
    pub alpha: MultiIndex,
    #[arg(long, value_parser = complex_arg, default_value = "1,0", allow_hyphen_values = true)]
    pub omega: Complex<f64>,
    #[arg(long, default_value = "gauss")]
    pub testfn: String,
    /// Defaults to the standard box for the dimension of `alpha`.
    #[arg(long, value_parser = grid_arg)]
    pub grid: Option<GridArg>,
    /// Also check the coordinate-shift identity on every axis.
    #[arg(long)]
    pub shift: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    pub m: Vec<u32>,
    /// Exponent pairs `p:q` with `q ≤ p`.
    #[arg(long = "pair", value_delimiter = ',', default_value = "1:1,2:1,inf:1,2:2,inf:2,inf:inf")]
    pub pairs: Vec<String>,
    /// Repeatable.
    #[arg(long, value_parser = complex_arg, action = ArgAction::Append, allow_hyphen_values = true)]
    pub omega: Vec<Complex<f64>>,
    /// Repeatable.
    #[arg(long, action = ArgAction::Append)]
    pub testfn: Vec<String>,
    #[arg(long, default_value_t = 0)]
    pub random_mixtures: usize,
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
    /// Use the radial weight `|x|^m` instead of monomials.
    #[arg(long)]
    pub radial: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConstantsArgs {
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    pub m: Vec<u32>,
    #[arg(long, value_parser = exponent_arg, value_delimiter = ',', default_value = "1,2,inf")]
    pub r: Vec<Exponent<f64>>,
    #[arg(long, value_delimiter = ',', default_value = "0,0.5,1,1.5", allow_hyphen_values = true)]
    pub theta: Vec<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct KernelNormArgs {
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, value_parser = complex_arg, default_value = "1,0", allow_hyphen_values = true)]
    pub omega: Complex<f64>,
    #[arg(long, default_value_t = 2)]
    pub max_order: u32,
    #[arg(long, value_parser = exponent_arg, value_delimiter = ',', default_value = "1,2,inf")]
    pub r: Vec<Exponent<f64>>,
    #[arg(long, value_parser = grid_arg)]
    pub grid: Option<GridArg>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CglArgs {
    #[arg(long, value_parser = complex_arg, default_value = "1,0", allow_hyphen_values = true)]
    pub nu: Complex<f64>,
    #[arg(long, value_parser = complex_arg, default_value = "-1,0", allow_hyphen_values = true)]
    pub lambda: Complex<f64>,
    #[arg(long, default_value_t = 4.0)]
    pub p: f64,
    #[arg(long, default_value_t = 0.01)]
    pub eps: f64,
    /// Width parameter of the initial Gaussian.
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long = "T", default_value_t = 100.0)]
    pub t_end: f64,
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
    #[arg(long, value_delimiter = ',', default_value = "1,2")]
    pub m: Vec<u32>,
    #[arg(long, value_parser = exponent_arg, default_value = "1")]
    pub q: Exponent<f64>,
    #[arg(long, value_parser = grid_arg, default_value = "4096,192")]
    pub grid: GridArg,
    #[arg(long, default_value_t = 0.25)]
    pub sample_every: f64,
    #[arg(long, default_value_t = 0.05)]
    pub smallness: f64,
    /// Output prefix.
    #[arg(long, default_value = "cgl")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    /// Defaults to the bundled full configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

/// Exit status for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BlowUp { .. } => 1,
        _ => 2,
    }
}

/// Drops `--out`/`--out-dir` and their values so the hash depends only on what is computed.
fn stamp_for(args: &[String]) -> Stamp {
    let mut kept = Vec::new();
    let mut skip = false;
    for a in args.iter().skip(1) {
        if skip {
            skip = false;
            continue;
        }
        if a == "--out" || a == "--out-dir" {
            skip = true;
            continue;
        }
        if a.starts_with("--out=") || a.starts_with("--out-dir=") {
            continue;
        }
        kept.push(a.as_str());
    }
    Stamp::of_args(&kept)
}

fn emit(table: &Table, out: Option<&Path>, stamp: &Stamp) -> Result<()> {
    match out {
        Some(p) => table.write(p, stamp),
        None => {
            std::io::stdout().write_all(&table.render(stamp)?)?;
            Ok(())
        }
    }
}

fn pass_code(failures: usize) -> i32 {
    if failures == 0 {
        0
    } else {
        1
    }
}

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("GW_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Parse(format!("GW_THREADS must be a positive integer, got '{v}'")))?;
    // A second call in the same process keeps the first pool.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Parses `args` (program name first) and runs; returns the exit status.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = configure_threads().and_then(|_| execute(cli.command, &stamp_for(&args)));
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn execute(cmd: Command, stamp: &Stamp) -> Result<i32> {
    match cmd {
        Command::Hermite(a) => hermite(a),
        Command::VerifyIdentity(a) => identity(a, stamp),
        Command::VerifyEstimate(a) => estimate(a, stamp),
        Command::Constants(a) => constants(a, stamp),
        Command::KernelNorms(a) => kernel_norms(a, stamp),
        Command::Cgl(a) => cgl(a, stamp),
        Command::Suite(a) => run_suite_command(a),
    }
}

fn hermite(a: HermiteArgs) -> Result<i32> {
    let text = match a.method {
        HermiteMethod::Expand => {
            let mut s = String::new();
            for (beta, c) in monomial_expand(&a.alpha) {
                let idx = a.alpha.sub_checked(&beta.scale(2))?.expect("2β ≤ α");
                s.push_str(&format!("{idx}\t{c}\n"));
            }
            s
        }
        method => {
            let poly = match method {
                HermiteMethod::Closed => HermitePoly::closed_form(&a.alpha, a.flavor),
                _ => generate_by_recurrence(&a.alpha, a.flavor),
            };
            let poly = if a.inverted { poly.invert_parameter() } else { poly };
            poly.to_string()
        }
    };
    print!("{text}");
    Ok(0)
}

fn identity(a: IdentityArgs, stamp: &Stamp) -> Result<i32> {
    let n = a.alpha.dim();
    let shape = match a.grid {
        Some(g) => g.shape(n)?,
        None => harness::default_shape(n)?,
    };
    let phi = catalog::lookup(&a.testfn)?.sample(shape)?;
    let omega = ComplexParam::new(a.omega)?;
    let mut reports = verify_identity(&a.alpha, &omega, &phi)?;
    if a.shift {
        for j in 0..n {
            reports.push(shift_identity(&a.alpha, j, &omega, &phi)?);
        }
    }
    let mut t = Table::new(&IDENTITY_HEADER);
    for r in &reports {
        t.push(identity_row(r, &a.testfn), r.pass);
    }
    emit(&t, a.out.as_deref(), stamp)?;
    Ok(pass_code(t.failures()))
}

fn estimate(a: EstimateArgs, stamp: &Stamp) -> Result<i32> {
    let defaults = EstimateSweep::default();
    let pairs = a
        .pairs
        .iter()
        .filter(|s| !s.is_empty())
        .map(|s| parse_pair(&s.replace(':', ",")))
        .collect::<Result<Vec<_>>>()?;
    let sweep = EstimateSweep {
        dims: vec![a.n],
        orders: a.m,
        pairs,
        omegas: if a.omega.is_empty() { defaults.omegas } else { a.omega },
        testfns: if a.testfn.is_empty() { defaults.testfns } else { a.testfn },
        random_mixtures: a.random_mixtures,
        seed: a.seed,
    };
    let reports = if a.radial { sweep.run_radial()? } else { sweep.run()? };
    let t = estimate_table(&reports);
    emit(&t, a.out.as_deref(), stamp)?;
    Ok(pass_code(t.failures()))
}

fn constants(a: ConstantsArgs, stamp: &Stamp) -> Result<i32> {
    for &theta in &a.theta {
        harness::check_theta(theta)?;
    }
    let rows = harness::constants_table(&a.n, &a.m, &a.r, &a.theta)?;
    emit(&suite::constants_table(&rows), a.out.as_deref(), stamp)?;
    Ok(0)
}

fn kernel_norms(a: KernelNormArgs, stamp: &Stamp) -> Result<i32> {
    let shape = match a.grid {
        Some(g) => g.shape(a.n)?,
        None => harness::default_shape(a.n)?,
    };
    let omega = ComplexParam::new(a.omega)?;
    let mut t = Table::new(&["n", "beta", "r", "omega_re", "omega_im", "quadrature", "analytic"]);
    let mut betas = vec![MultiIndex::zero(a.n)];
    betas.extend(enumerate_up_to(a.n, a.max_order));
    for beta in &betas {
        for &r in &a.r {
            let norm = weighted_kernel_norm(shape, &omega, beta, r)?;
            let analytic = if beta.is_zero() {
                fmt_real(gaussian_kernel_norm(a.n, &omega, r))
            } else {
                String::new()
            };
            t.push(
                vec![
                    a.n.to_string(),
                    beta.to_string(),
                    r.to_string(),
                    fmt_real(a.omega.re),
                    fmt_real(a.omega.im),
                    fmt_real(norm),
                    analytic,
                ],
                true,
            );
        }
    }
    emit(&t, a.out.as_deref(), stamp)?;
    Ok(0)
}

fn cgl(a: CglArgs, stamp: &Stamp) -> Result<i32> {
    let cfg = CglConfig {
        nu: a.nu,
        lambda: a.lambda,
        p: a.p,
        dt: a.dt,
        t_end: a.t_end,
        sample_every: a.sample_every,
        smallness: a.smallness,
    };
    let shape = a.grid.shape(1)?;
    let outcome = harness::run_cgl(&cfg, shape, a.eps, a.sigma, &a.m, a.q)?;
    if let Some(dir) = a.out.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    suite::write_cgl_artifacts(&outcome, &a.out, stamp)?;
    let summary = suite::cgl_summary(&outcome);
    std::io::stdout().write_all(&summary.render(stamp)?)?;
    Ok(pass_code(summary.failures()))
}

fn run_suite_command(a: SuiteArgs) -> Result<i32> {
    let text = match &a.config {
        Some(p) => std::fs::read_to_string(p)?,
        None => DEFAULT_CONFIG.to_string(),
    };
    let cfg = SuiteConfig::parse(&text)?;
    let stamp = Stamp::of_bytes(text.as_bytes());
    let outcome = suite::run_suite(&cfg, &stamp, &a.out_dir)?;
    for s in &outcome.summaries {
        let status = if s.failures == 0 { "PASS" } else { "FAIL" };
        println!("{status} {} rows={} failures={}", s.name, s.rows, s.failures);
    }
    Ok(if outcome.pass() { 0 } else { 1 })
}
