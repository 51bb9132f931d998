//! `divkern`: evaluate the kernels and run the verification drivers.

mod lemmas;
mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use divkern::kernels::{self, KernelParams, KernelValue};
use divkern::lambert::{verify_lambert, LambertConfig};
use divkern::quadrature::QuadratureConfig;
use divkern::report::VerificationReport;
use divkern::specialfn::btransform::{
    b_transform, b_transform_quadrature, b_transform_route, BTransformInput,
};
use divkern::summation::{self, TestFunctionSpec, VoronoiConfig, VoronoiRoute};
use divkern::{Complex64, Error};
use output::{Emit, Format};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "divkern",
    version,
    about = "Divisor-sum kernels and summation identities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    output: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Pass tolerance of verify commands; requested relative accuracy of the
    /// quadrature routes of eval commands.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Relative tolerance of the adaptive quadrature used by verify commands.
    #[arg(long, global = true)]
    quad_tol: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// H_z^(k)(x) for real x >= 0.
    EvalH(EvalH),
    /// K_z^(k)(x), x complex.
    EvalK(EvalK),
    /// B(z, b).
    EvalB(EvalB),
    /// Voronoi formula on a finite interval (alpha, beta).
    VerifyVoronoi(VerifyVoronoi),
    /// Voronoi formula for a rapidly decaying test function on (0, inf).
    VerifyVoronoiSchwartz(VerifySchwartz),
    /// Transformation of sum sigma_z^(k)(n) e^(-nw).
    VerifyLambert(VerifyLambert),
    /// Exact and numerical lemma checks.
    VerifyLemmas(VerifyLemmas),
    /// H over a grid of x, one CSV row per point.
    Tabulate(Tabulate),
    /// sigma_z^(k)(n) and S_z^(k)(n) for n <= N.
    Sieve(Sieve),
}

#[derive(Args, Debug)]
struct KZ {
    #[arg(long)]
    k: u32,
    /// Complex parameter as "re" or "re,im".
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    z: Complex64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum HRoute {
    Auto,
    Series,
    Quadrature,
    SteepestDescent,
    Combination,
    Bessel,
}

#[derive(Args, Debug)]
struct EvalH {
    #[command(flatten)]
    kz: KZ,
    #[arg(long)]
    x: f64,
    #[arg(long, value_enum, default_value_t = HRoute::Auto)]
    route: HRoute,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum KRoute {
    Series,
    Real,
    Contour,
}

#[derive(Args, Debug)]
struct EvalK {
    #[command(flatten)]
    kz: KZ,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    x: Complex64,
    #[arg(long, value_enum, default_value_t = KRoute::Series)]
    route: KRoute,
}

#[derive(Args, Debug)]
struct EvalB {
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    z: Complex64,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    b: Complex64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FKind {
    Exp,
    Gaussian,
    PolyExp,
}

#[derive(Args, Debug)]
struct TestFn {
    /// Test function: e^(-wt), e^(-t^2) or t^p e^(-wt).
    #[arg(long = "f", value_enum, default_value_t = FKind::Exp)]
    kind: FKind,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "1")]
    w: Complex64,
    #[arg(long, default_value_t = 1)]
    p: u32,
}

impl TestFn {
    fn spec(&self) -> divkern::Result<TestFunctionSpec> {
        match self.kind {
            FKind::Exp => TestFunctionSpec::exp_decay(self.w),
            FKind::Gaussian => Ok(TestFunctionSpec::Gaussian),
            FKind::PolyExp => TestFunctionSpec::poly_exp(self.p, self.w),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum VRoute {
    Kernel,
    Bessel,
}

#[derive(Args, Debug)]
struct VerifyVoronoi {
    #[arg(long, default_value_t = 2)]
    k: u32,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0.5")]
    z: Complex64,
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    #[arg(long, default_value_t = 10.5)]
    beta: f64,
    /// Dual-series terms.
    #[arg(long, default_value_t = 1024)]
    n: u64,
    #[arg(long, value_enum, default_value_t = VRoute::Kernel)]
    route: VRoute,
    #[command(flatten)]
    f: TestFn,
    /// Check sum_{n <= x} d(n) against the classical Bessel series instead.
    #[arg(long)]
    classical_x: Option<f64>,
}

#[derive(Args, Debug)]
struct VerifySchwartz {
    #[arg(long, default_value_t = 2)]
    k: u32,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0.5")]
    z: Complex64,
    #[arg(long, default_value_t = 200)]
    n: u64,
    #[command(flatten)]
    f: TestFn,
}

#[derive(Args, Debug)]
struct VerifyLambert {
    #[command(flatten)]
    kz: KZ,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    w: Complex64,
}

#[derive(Args, Debug)]
struct VerifyLemmas {
    #[arg(long, value_enum)]
    which: lemmas::Which,
    #[arg(long, default_value_t = 3)]
    k: u32,
    /// Parameter for the lemma45 and ODE checks (exact binary value on the rational path).
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    z: Option<Complex64>,
}

#[derive(Args, Debug)]
struct Tabulate {
    #[command(flatten)]
    kz: KZ,
    #[arg(long, default_value_t = 0.0)]
    x_min: f64,
    #[arg(long, default_value_t = 10.0)]
    x_max: f64,
    #[arg(long, default_value_t = 101)]
    points: usize,
    /// Geometric spacing (needs x_min > 0).
    #[arg(long)]
    log: bool,
}

#[derive(Args, Debug)]
struct Sieve {
    #[command(flatten)]
    kz: KZ,
    #[arg(long)]
    n: u64,
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| -> Result<f64, String> {
        let v: f64 = t.parse().map_err(|_| format!("not a number: {t:?}"))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(format!("not finite: {t:?}"))
        }
    };
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected \"re\" or \"re,im\", got {s:?}")),
    }
}

enum Outcome {
    Done,
    Verified(bool),
}

fn eval_quad(g: &Global) -> divkern::Result<QuadratureConfig> {
    let mut q = kernels::kernel_quad();
    if let Some(t) = g.tol.or(g.quad_tol) {
        q.rel_tol = t;
    }
    q.validate()?;
    Ok(q)
}

fn verify_quad(g: &Global) -> divkern::Result<QuadratureConfig> {
    let mut q = summation::default_voronoi_quad();
    if let Some(t) = g.quad_tol {
        q.rel_tol = t;
    }
    q.validate()?;
    Ok(q)
}

fn tolerance(g: &Global, default: f64) -> divkern::Result<f64> {
    let t = g.tol.unwrap_or(default);
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("--tol must be positive, got {t}")));
    }
    Ok(t)
}

fn eval_h(a: &EvalH, g: &Global, out: &mut Emit) -> divkern::Result<Outcome> {
    let p = KernelParams::new(a.kz.k, a.kz.z)?;
    let q = eval_quad(g)?;
    let x = a.x;
    let v = match a.route {
        HRoute::Auto => kernels::h_eval(&p, x)?,
        HRoute::Series => kernels::h_series(&p, x)?,
        HRoute::Quadrature => kernels::h_quadrature_with(&p, x, &q)?,
        HRoute::SteepestDescent => kernels::h_steepest_descent(&p, x)?,
        HRoute::Combination => kernels::h_from_k_combination(&p, x)?,
        HRoute::Bessel => {
            if p.k != 1 {
                return Err(Error::Domain(format!(
                    "the Bessel route needs k = 1, got k = {}",
                    p.k
                )));
            }
            KernelValue {
                value: kernels::h_k1_closed_form(p.z, x)?,
                route: kernels::Route::BesselClosedForm,
                est_error: 1e-14 * kernels::h_k1_closed_form(p.z, x)?.norm(),
            }
        }
    };
    let quad = (a.route == HRoute::Quadrature).then_some(q);
    out.value("H", p.k, p.z, Complex64::new(x, 0.0), &v, quad)?;
    Ok(Outcome::Done)
}

fn eval_k(a: &EvalK, g: &Global, out: &mut Emit) -> divkern::Result<Outcome> {
    let p = KernelParams::new(a.kz.k, a.kz.z)?;
    let q = eval_quad(g)?;
    let v = match a.route {
        KRoute::Series => kernels::k_series(&p, a.x)?,
        KRoute::Contour => kernels::k_contour(&p, a.x)?,
        KRoute::Real => {
            if a.x.im != 0.0 {
                return Err(Error::Domain(format!(
                    "the real-integral route needs real x, got x = {}",
                    a.x
                )));
            }
            kernels::k_real_with(&p, a.x.re, &q)?
        }
    };
    let quad = (a.route == KRoute::Real).then_some(q);
    out.value("K", p.k, p.z, a.x, &v, quad)?;
    Ok(Outcome::Done)
}

fn eval_b(a: &EvalB, out: &mut Emit) -> divkern::Result<Outcome> {
    let inp = BTransformInput::new(a.z, a.b)?;
    let route = b_transform_route(&inp)?;
    let v = b_transform(&inp)?;
    // the defining integral is an independent check where it converges
    let check = if a.z.re > -1.0 && a.z.re < 2.0 && a.b.re > 0.0 {
        Some((v - b_transform_quadrature(a.z, a.b)?).norm())
    } else {
        None
    };
    out.b_value(a.z, a.b, v, route, check)?;
    Ok(Outcome::Done)
}

fn report(r: VerificationReport, out: &mut Emit) -> divkern::Result<Outcome> {
    out.report(&r)?;
    Ok(Outcome::Verified(r.pass))
}

fn verify_voronoi(a: &VerifyVoronoi, g: &Global, out: &mut Emit) -> divkern::Result<Outcome> {
    if let Some(x) = a.classical_x {
        let tol = tolerance(g, 5e-3)?;
        return report(summation::classical_voronoi_check(x, a.n, tol)?, out);
    }
    let mut cfg = VoronoiConfig::new(a.k, a.z, a.alpha, a.beta, a.n)?;
    cfg.quad = verify_quad(g)?;
    let route = match a.route {
        VRoute::Kernel => VoronoiRoute::Kernel,
        VRoute::Bessel => VoronoiRoute::Bessel,
    };
    let tol = tolerance(
        g,
        if route == VoronoiRoute::Bessel {
            1e-4
        } else {
            1e-3
        },
    )?;
    report(summation::voronoi_rhs(&cfg, &a.f.spec()?, route, tol)?, out)
}

fn verify_schwartz(a: &VerifySchwartz, g: &Global, out: &mut Emit) -> divkern::Result<Outcome> {
    let p = KernelParams::new(a.k, a.z)?;
    let f = a.f.spec()?;
    let default = if matches!(f, TestFunctionSpec::ExpDecay { .. }) {
        1e-9
    } else {
        1e-4
    };
    let tol = tolerance(g, default)?;
    report(
        summation::voronoi_schwartz(&p, &f, a.n, &verify_quad(g)?, tol)?,
        out,
    )
}

fn verify_lambert_cmd(a: &VerifyLambert, g: &Global, out: &mut Emit) -> divkern::Result<Outcome> {
    let cfg = LambertConfig::new(a.kz.k, a.kz.z, a.w)?;
    report(verify_lambert(&cfg, tolerance(g, 1e-9)?)?, out)
}

fn tabulate(a: &Tabulate, out: &mut Emit) -> divkern::Result<Outcome> {
    let p = KernelParams::new(a.kz.k, a.kz.z)?;
    if a.points < 2 || !(a.x_min >= 0.0 && a.x_max > a.x_min && a.x_max.is_finite()) {
        return Err(Error::Domain(
            "need points >= 2 and 0 <= x_min < x_max".into(),
        ));
    }
    if a.log && a.x_min <= 0.0 {
        return Err(Error::Domain("--log needs x_min > 0".into()));
    }
    let last = (a.points - 1) as f64;
    let xs: Vec<f64> = (0..a.points)
        .map(|i| {
            let s = i as f64 / last;
            if a.log {
                a.x_min * (a.x_max / a.x_min).powf(s)
            } else {
                a.x_min + (a.x_max - a.x_min) * s
            }
        })
        .collect();
    let rows = kernels::tabulate_h(&p, &xs)?;
    out.tabulation(&p, &rows)?;
    Ok(Outcome::Done)
}

fn sieve(a: &Sieve, out: &mut Emit) -> divkern::Result<Outcome> {
    let t = divkern::arith::build_table(a.kz.k, a.kz.z, a.n)?;
    out.sieve(&t)?;
    Ok(Outcome::Done)
}

fn run(cli: &Cli) -> divkern::Result<Outcome> {
    let g = &cli.global;
    if let Some(n) = g.threads {
        if n == 0 {
            return Err(Error::Domain("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Domain(format!("thread pool: {e}")))?;
    }
    let mut out = Emit::new(g.output, g.out.clone());
    let r = match &cli.command {
        Command::EvalH(a) => eval_h(a, g, &mut out),
        Command::EvalK(a) => eval_k(a, g, &mut out),
        Command::EvalB(a) => eval_b(a, &mut out),
        Command::VerifyVoronoi(a) => verify_voronoi(a, g, &mut out),
        Command::VerifyVoronoiSchwartz(a) => verify_schwartz(a, g, &mut out),
        Command::VerifyLambert(a) => verify_lambert_cmd(a, g, &mut out),
        Command::VerifyLemmas(a) => {
            let r = lemmas::run(a.which, a.k, a.z, g.tol)?;
            out.lemmas(&r)?;
            Ok(Outcome::Verified(r.pass))
        }
        Command::Tabulate(a) => tabulate(a, &mut out),
        Command::Sieve(a) => sieve(a, &mut out),
    }?;
    out.finish()?;
    Ok(r)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(Outcome::Done) | Ok(Outcome::Verified(true)) => ExitCode::SUCCESS,
        Ok(Outcome::Verified(false)) => ExitCode::from(2),
        Err(e) => {
            eprintln!("divkern: {e}");
            ExitCode::from(1)
        }
    }
}
