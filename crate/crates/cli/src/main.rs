//! Command-line front end: single-point queries, parameter sweeps, and
//! machine-readable output for plotting.
//!
//! All physical quantities are in natural units hbar = 2m = 1 with energy
//! E = k^2; momenta and inverse lengths share units. Numbers are printed
//! with 17 significant digits so identical invocations produce
//! byte-identical, round-trip-exact output.
//!
//! Exit codes: 0 success, 2 invalid parameters or grid, 3 boundary
//! condition outside the Lambda chart (|d| too small), 4 requested angular
//! grid intersects the forward cone.

use abscat::eigenbasis::WaveSample;
use abscat::numfmt::float17;
use abscat::params::{d_invariant, u_to_lambda, Flux, LambdaParams, ParamError, UParams};
use abscat::scattering::{kernel_with_sigma, sigma, ScatteringError};
use abscat::spectrum::{eigenfunction_radial, find_bound_states};
use abscat::sweep::{SweepError, SweepSpec};
use abscat::{bessel_j, bessel_k, gamma_real, C64, Order};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::f64::consts::PI;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

/// CLI-level forward-cone half width (the library refuses only within
/// 1e-8; pointwise values closer than this to the forward direction are
/// numerically dominated by the excluded singular terms).
const CLI_FORWARD_CONE: f64 = 1e-4;

#[derive(Parser)]
#[command(
    name = "abscat",
    version,
    about = "Bound states and planar scattering for flux-line Hamiltonians with a point interaction",
    long_about = "Computes bound-state spectra, the 2x2 channel S-matrix, angular scattering \
kernels and differential cross-sections for a charged particle around a magnetic flux line \
carrying a contact interaction.\n\nUnits: natural, hbar = 2m = 1, energy E = k^2.\n\nThe model \
is set by the flux --alpha plus either Lambda-chart couplings (--u, --v, --w-re, --w-im) or \
unitary-chart parameters (--omega, --a, --b, --q); the latter are converted internally and \
must satisfy d = sin(omega) + q sin(a - pi alpha) != 0."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bound-state spectrum as JSON; optionally dump eigenfunction samples
    Spectrum(SpectrumArgs),
    /// Channel S-matrix over a momentum grid, with a unitarity-deficit column
    Smatrix(SmatrixArgs),
    /// Differential cross-section over an angular grid at fixed momentum
    Xsection(XsectionArgs),
    /// Cartesian sweep over the (u, v, |w|) coupling grid
    Sweep(SweepArgs),
    /// Debug evaluation of the Gamma / J / K kernels
    Specfun(SpecfunArgs),
}

#[derive(Args, Clone)]
struct ModelArgs {
    /// Flux parameter alpha, in [1e-6, 1 - 1e-6]
    #[arg(long)]
    alpha: f64,

    /// Coupling u (Lambda chart)
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["omega", "a", "b", "q"])]
    u: Option<f64>,
    /// Coupling v (Lambda chart)
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["omega", "a", "b", "q"])]
    v: Option<f64>,
    /// Re w (Lambda chart)
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["omega", "a", "b", "q"])]
    w_re: Option<f64>,
    /// Im w (Lambda chart)
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["omega", "a", "b", "q"])]
    w_im: Option<f64>,

    /// Angle omega (unitary chart; requires --a, --b, --q)
    #[arg(long, allow_negative_numbers = true, requires_all = ["a", "b", "q"])]
    omega: Option<f64>,
    /// Angle a (unitary chart)
    #[arg(long, allow_negative_numbers = true, requires_all = ["omega", "b", "q"])]
    a: Option<f64>,
    /// Angle b (unitary chart)
    #[arg(long, allow_negative_numbers = true, requires_all = ["omega", "a", "q"])]
    b: Option<f64>,
    /// Modulus q in [0, 1] (unitary chart)
    #[arg(long, requires_all = ["omega", "a", "b"])]
    q: Option<f64>,
}

#[derive(Args)]
struct OutputArgs {
    /// Write to this path instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Dump eigenfunction samples (CSV r,theta,re,im) instead of the report
    #[arg(long)]
    eigenfunction: bool,
    /// Radial sample count for --eigenfunction
    #[arg(long, default_value_t = 50)]
    r_count: usize,
    /// Angular sample count for --eigenfunction
    #[arg(long, default_value_t = 8)]
    theta_count: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SmatrixArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Single momentum (alternative to a grid)
    #[arg(long, conflicts_with_all = ["k_min", "k_max", "k_count"])]
    k: Option<f64>,
    /// Grid lower momentum (log-spaced grid)
    #[arg(long, requires_all = ["k_max", "k_count"])]
    k_min: Option<f64>,
    /// Grid upper momentum
    #[arg(long, requires_all = ["k_min", "k_count"])]
    k_max: Option<f64>,
    /// Grid size
    #[arg(long, requires_all = ["k_min", "k_max"])]
    k_count: Option<usize>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct XsectionArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Momentum
    #[arg(long)]
    k: f64,
    /// Incoming direction theta0
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    theta0: f64,
    /// Number of outgoing angles (midpoint grid over [0, 2 pi))
    #[arg(long, default_value_t = 360)]
    theta_count: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// Flux parameter alpha
    #[arg(long)]
    alpha: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = -2.0)]
    u_min: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 2.0)]
    u_max: f64,
    #[arg(long, default_value_t = 9)]
    u_count: usize,
    #[arg(long, allow_negative_numbers = true, default_value_t = -2.0)]
    v_min: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 2.0)]
    v_max: f64,
    #[arg(long, default_value_t = 9)]
    v_count: usize,
    /// |w| grid lower end
    #[arg(long, default_value_t = 0.0)]
    w_min: f64,
    #[arg(long, default_value_t = 2.0)]
    w_max: f64,
    #[arg(long, default_value_t = 3)]
    w_count: usize,
    /// Momentum at which Sigma is evaluated per grid point
    #[arg(long, default_value_t = 1.0)]
    k: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SpecFn {
    /// Bessel J of real order
    J,
    /// Modified Bessel K of real order
    K,
    /// Gamma on (0, 3)
    Gamma,
}

#[derive(Args)]
struct SpecfunArgs {
    /// Which kernel to evaluate
    #[arg(long = "fn", value_enum)]
    kind: SpecFn,
    /// Order nu in (-1, 2); ignored for gamma
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.5)]
    nu: f64,
    /// Argument
    #[arg(long, allow_negative_numbers = true)]
    x: f64,
    #[command(flatten)]
    output: OutputArgs,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Failure {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<ParamError> for Failure {
    fn from(e: ParamError) -> Failure {
        match e {
            ParamError::NotInvertible(_) => Failure::new(3, e.to_string()),
            _ => Failure::new(2, e.to_string()),
        }
    }
}

impl From<ScatteringError> for Failure {
    fn from(e: ScatteringError) -> Failure {
        match e {
            ScatteringError::ForwardDirection(_) => Failure::new(4, e.to_string()),
            _ => Failure::new(2, e.to_string()),
        }
    }
}

impl From<SweepError> for Failure {
    fn from(e: SweepError) -> Failure {
        Failure::new(2, e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::new(2, format!("i/o error: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Spectrum(args) => cmd_spectrum(args),
        Command::Smatrix(args) => cmd_smatrix(args),
        Command::Xsection(args) => cmd_xsection(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Specfun(args) => cmd_specfun(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

/// Resolve the model arguments into (flux, Lambda parameters).
fn resolve_model(args: &ModelArgs) -> Result<(Flux, LambdaParams), Failure> {
    let flux = Flux::new(args.alpha)?;
    if args.omega.is_some() {
        let up = UParams::new(
            args.omega.unwrap(),
            args.a.unwrap(),
            args.b.unwrap(),
            args.q.unwrap(),
        )?;
        let lam = u_to_lambda(flux, &up)
            .map_err(|e| Failure::new(3, format!("{e} (d = {})", d_invariant(flux, &up))))?;
        return Ok((flux, lam));
    }
    for &x in [&args.u, &args.v, &args.w_re, &args.w_im].into_iter().flatten() {
        if !x.is_finite() {
            return Err(Failure::new(2, format!("coupling value {x} is not finite")));
        }
    }
    let lam = LambdaParams::new(
        args.u.unwrap_or(0.0),
        args.v.unwrap_or(0.0),
        C64::new(args.w_re.unwrap_or(0.0), args.w_im.unwrap_or(0.0)),
    );
    Ok((flux, lam))
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => std::io::stdout().write_all(content.as_bytes())?,
    }
    Ok(())
}

fn cmd_spectrum(args: SpectrumArgs) -> Result<(), Failure> {
    let (flux, lam) = resolve_model(&args.model)?;
    let report = find_bound_states(flux, &lam);
    if !args.eigenfunction {
        return emit(&args.output.out, &format!("{}\n", report.to_json()));
    }
    if args.r_count < 1 || args.theta_count < 1 {
        return Err(Failure::new(2, "sample counts must be at least 1"));
    }
    let mut body = String::from("# r,theta,re,im\n");
    for state in &report.states {
        body.push_str(&format!(
            "# state p={} energy={} multiplicity={}\n",
            float17(state.p),
            float17(state.energy),
            state.multiplicity
        ));
        let (r_lo, r_hi) = (0.05 / state.p, 20.0 / state.p);
        let ratio = (r_hi / r_lo).powf(1.0 / (args.r_count.max(2) - 1) as f64);
        for i in 0..args.r_count {
            let r = r_lo * ratio.powi(i as i32);
            let (c1, c2) = eigenfunction_radial(flux, state, r)
                .map_err(|e| Failure::new(2, e.to_string()))?;
            for j in 0..args.theta_count {
                let theta = 2.0 * PI * j as f64 / args.theta_count as f64;
                let sample = WaveSample {
                    r,
                    theta,
                    value: c1 * C64::cis(-theta) + c2,
                };
                body.push_str(&format!(
                    "{},{},{},{}\n",
                    float17(sample.r),
                    float17(sample.theta),
                    float17(sample.value.re),
                    float17(sample.value.im)
                ));
            }
        }
    }
    emit(&args.output.out, &body)
}

fn momentum_grid(args: &SmatrixArgs) -> Result<Vec<f64>, Failure> {
    if let Some(k) = args.k {
        if !(k.is_finite() && k > 0.0) {
            return Err(Failure::new(2, format!("momentum k = {k} must be positive")));
        }
        return Ok(vec![k]);
    }
    match (args.k_min, args.k_max, args.k_count) {
        (Some(lo), Some(hi), Some(n)) => {
            if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && hi >= lo) {
                return Err(Failure::new(2, "need 0 < k-min <= k-max"));
            }
            if n < 1 {
                return Err(Failure::new(2, "k-count must be at least 1"));
            }
            if n == 1 {
                return Ok(vec![lo]);
            }
            let step = (hi / lo).ln() / (n - 1) as f64;
            Ok((0..n).map(|i| lo * (step * i as f64).exp()).collect())
        }
        _ => Err(Failure::new(2, "provide --k or the full --k-min/--k-max/--k-count grid")),
    }
}

fn cmd_smatrix(args: SmatrixArgs) -> Result<(), Failure> {
    let (flux, lam) = resolve_model(&args.model)?;
    let grid = momentum_grid(&args)?;
    let mut rows = Vec::with_capacity(grid.len());
    for &k in &grid {
        let s = sigma(flux, &lam, k)?;
        rows.push((s, s.unitarity_deficit()));
    }
    let body = match args.format {
        Format::Csv => {
            let mut out = format!(
                "# alpha={} u={} v={} w_re={} w_im={}\n",
                float17(flux.alpha()),
                float17(lam.u),
                float17(lam.v),
                float17(lam.w.re),
                float17(lam.w.im)
            );
            out.push_str(
                "k,s11_re,s11_im,s12_re,s12_im,s21_re,s21_im,s22_re,s22_im,deficit\n",
            );
            for (s, deficit) in &rows {
                let e = &s.entries.e;
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{}\n",
                    float17(s.k),
                    float17(e[0].re),
                    float17(e[0].im),
                    float17(e[1].re),
                    float17(e[1].im),
                    float17(e[2].re),
                    float17(e[2].im),
                    float17(e[3].re),
                    float17(e[3].im),
                    float17(*deficit)
                ));
            }
            out
        }
        Format::Json => {
            let rows: Vec<String> = rows
                .iter()
                .map(|(s, deficit)| {
                    let base = s.to_json();
                    format!(
                        "{},\"deficit\":{}}}",
                        &base[..base.len() - 1],
                        float17(*deficit)
                    )
                })
                .collect();
            format!(
                "{{\"params\":{},\"rows\":[{}]}}\n",
                lam.to_json(flux),
                rows.join(",")
            )
        }
    };
    emit(&args.output.out, &body)
}

fn cmd_xsection(args: XsectionArgs) -> Result<(), Failure> {
    let (flux, lam) = resolve_model(&args.model)?;
    if args.theta_count < 1 {
        return Err(Failure::new(2, "theta-count must be at least 1"));
    }
    if !args.theta0.is_finite() {
        return Err(Failure::new(2, "theta0 must be finite"));
    }
    let sig = sigma(flux, &lam, args.k)?;
    // midpoint grid over [0, 2 pi); every angle must clear the forward cone
    let thetas: Vec<f64> = (0..args.theta_count)
        .map(|i| 2.0 * PI * (i as f64 + 0.5) / args.theta_count as f64)
        .collect();
    for &theta in &thetas {
        let half = 0.5 * (theta - args.theta0);
        if half.sin().abs() <= CLI_FORWARD_CONE {
            return Err(Failure::new(
                4,
                format!(
                    "grid angle theta = {theta} lies within the forward cone around theta0 = {}",
                    args.theta0
                ),
            ));
        }
    }
    let mut body = format!(
        "# alpha={} u={} v={} w_re={} w_im={} k={} theta0={}\n# delta_coefficient={}\n",
        float17(flux.alpha()),
        float17(lam.u),
        float17(lam.v),
        float17(lam.w.re),
        float17(lam.w.im),
        float17(args.k),
        float17(args.theta0),
        float17((PI * flux.alpha()).cos())
    );
    body.push_str("theta,dsigma_dtheta,re_S,im_S\n");
    for &theta in &thetas {
        let sample = kernel_with_sigma(flux, &sig, theta, args.theta0)?;
        let dsdt = 2.0 * PI / args.k * sample.value.norm_sqr();
        body.push_str(&format!(
            "{},{},{},{}\n",
            float17(theta),
            float17(dsdt),
            float17(sample.value.re),
            float17(sample.value.im)
        ));
    }
    emit(&args.output.out, &body)
}

fn linear_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>, Failure> {
    if !(lo.is_finite() && hi.is_finite() && hi >= lo) {
        return Err(Failure::new(2, format!("grid range [{lo}, {hi}] is not ordered")));
    }
    if n < 1 {
        return Err(Failure::new(2, "grid counts must be at least 1"));
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    let step = (hi - lo) / (n - 1) as f64;
    Ok((0..n).map(|i| lo + step * i as f64).collect())
}

fn cmd_sweep(args: SweepArgs) -> Result<(), Failure> {
    let flux = Flux::new(args.alpha)?;
    if args.w_min < 0.0 {
        return Err(Failure::new(2, "w grid must be nonnegative (|w| magnitudes)"));
    }
    let spec = SweepSpec {
        flux,
        u_values: linear_grid(args.u_min, args.u_max, args.u_count)?,
        v_values: linear_grid(args.v_min, args.v_max, args.v_count)?,
        w_values: linear_grid(args.w_min, args.w_max, args.w_count)?,
        k: args.k,
    };
    let points = spec.run()?;
    let mut body = format!(
        "# alpha={} k={} points={}\n",
        float17(flux.alpha()),
        float17(args.k),
        points.len()
    );
    body.push_str("u,v,w_abs,count,p1,p2,s11_re,s11_im,s12_re,s12_im,s21_re,s21_im,s22_re,s22_im\n");
    for pt in &points {
        // fill momenta with multiplicity: a double root occupies both slots
        let mut slots = [f64::NAN; 2];
        if pt.count == 2 && pt.momenta.len() == 1 {
            slots = [pt.momenta[0]; 2];
        } else {
            for (slot, p) in slots.iter_mut().zip(&pt.momenta) {
                *slot = *p;
            }
        }
        let e = &pt.sigma.entries.e;
        body.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            float17(pt.u),
            float17(pt.v),
            float17(pt.w_abs),
            pt.count,
            float17(slots[0]),
            float17(slots[1]),
            float17(e[0].re),
            float17(e[0].im),
            float17(e[1].re),
            float17(e[1].im),
            float17(e[2].re),
            float17(e[2].im),
            float17(e[3].re),
            float17(e[3].im)
        ));
    }
    emit(&args.output.out, &body)
}

fn cmd_specfun(args: SpecfunArgs) -> Result<(), Failure> {
    let value = match args.kind {
        SpecFn::Gamma => gamma_real(args.x).map_err(|e| Failure::new(2, e.to_string()))?,
        SpecFn::J => {
            let nu = Order::new(args.nu).map_err(|e| Failure::new(2, e.to_string()))?;
            bessel_j(nu, args.x).map_err(|e| Failure::new(2, e.to_string()))?
        }
        SpecFn::K => {
            let nu = Order::new(args.nu).map_err(|e| Failure::new(2, e.to_string()))?;
            bessel_k(nu, args.x).map_err(|e| Failure::new(2, e.to_string()))?
        }
    };
    emit(&args.output.out, &format!("{}\n", float17(value)))
}
