//! Command-line front end. [`run_from`] parses arguments, runs one
//! subcommand and returns the rendered output with its exit code; the binary
//! only forwards that to the process.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::bell::{bell_operator, JordanParams, MAX_DENSE_PARTIES};
use crate::error::{Error, Result};
use crate::lhv::{
    classical_value, game_classical_value, game_measurements, game_quantum_simulated,
    game_quantum_value, proof_check, ClassicalBound, GameClassical, ProofReport, MAX_PROOF_PARTIES,
};
use crate::optimize::{
    maximize_equal_angle, maximize_full_with, violation_curve, CurvePoint, Method, SimplexOptions,
    ViolationResult, DEFAULT_RESTARTS,
};
use crate::states::{
    psi2, psi3, psi3_prime, violation_of, x_star_n3, AmplitudeTriple, MeasurementSet, PureState,
};
use crate::verify::{run_suite, Fault, VerifyOptions, VerifyReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum StateName {
    Psi2,
    Psi3,
    #[value(name = "psi3prime")]
    Psi3Prime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FaultArg {
    CharPolyDropBeta,
}

/// Parsed command line.
#[derive(Debug, Parser)]
#[command(
    name = "jordan-bell",
    version,
    about = "Quantum violations of n-party CH-type Bell inequalities"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Output format
    #[arg(long, global = true, value_enum, default_value = "human")]
    pub format: Format,
    /// Write output to this file instead of standard output
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Largest violation for n parties
    Violation(ViolationArgs),
    /// Optimal equal overlap and violation for n = 3..n_max
    Table(TableArgs),
    /// Classical and quantum values of the three-party game
    Game,
    /// Run the verification suite
    Verify(VerifyArgs),
    /// Amplitudes of a named state
    State {
        #[arg(value_enum)]
        name: StateName,
    },
    /// Exhaustive classical bound and coverage proof
    Classical {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Debug, Args)]
pub struct ViolationArgs {
    /// Number of parties (default 3, or the number of angles given)
    #[arg(long)]
    pub n: Option<usize>,
    /// Fixed overlaps x_1,...,x_n; no optimization
    #[arg(long, value_delimiter = ',', num_args = 1.., conflicts_with_all = ["equal_angle", "full"])]
    pub angles: Option<Vec<f64>>,
    /// Fixed common overlap for every party; no optimization
    #[arg(long, conflicts_with = "full")]
    pub equal_angle: Option<f64>,
    /// Search all n overlaps on the full operator instead of the equal-angle cubic
    #[arg(long)]
    pub full: bool,
    #[arg(long, default_value_t = DEFAULT_RESTARTS)]
    pub restarts: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Simplex diameter at which a restart stops
    #[arg(long)]
    pub tol: Option<f64>,
    /// Also print the eigenvector amplitudes
    #[arg(long)]
    pub amplitudes: bool,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long, default_value_t = 7)]
    pub n_max: usize,
    /// Emit whitespace-separated `n lambda_max` columns for gnuplot
    #[arg(long)]
    pub gnuplot: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Replace every check's tolerance
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Random parameter draws per party count
    #[arg(long, default_value_t = 10)]
    pub draws: usize,
    /// Corrupt one formula to show the suite catches it
    #[arg(long, value_enum)]
    pub inject_fault: Option<FaultArg>,
}

/// Rendered result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invocation {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Six-decimal rendering without a negative zero.
pub fn fmt6(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn fmt_sci(v: f64) -> String {
    format!("{v:.6e}")
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    let mut s =
        serde_json::to_string_pretty(v).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

pub fn cmd_violation(args: &ViolationArgs, format: Format) -> Result<String> {
    let result = violation(args)?;
    render_violation(&result, format, args.amplitudes)
}

fn violation(args: &ViolationArgs) -> Result<ViolationResult> {
    if args.restarts == 0 {
        return Err(usage("--restarts must be at least 1"));
    }
    if let Some(xs) = &args.angles {
        if let Some(n) = args.n {
            if n != xs.len() {
                return Err(usage(format!("--n {n} but {} angles given", xs.len())));
            }
        }
        return fixed_angles(JordanParams::new(xs.clone())?);
    }
    let n = args.n.unwrap_or(3);
    if n < 2 {
        return Err(Error::PartyCount(n, "n >= 2"));
    }
    if let Some(x) = args.equal_angle {
        return fixed_angles(JordanParams::equal(n, x)?);
    }
    if args.full {
        let mut opts = SimplexOptions::default();
        if let Some(t) = args.tol {
            if t.is_nan() || t <= 0.0 {
                return Err(usage("--tol must be positive"));
            }
            opts.diameter_tol = t;
        }
        return maximize_full_with(n, args.restarts, args.seed, opts);
    }
    maximize_equal_angle(n)
}

fn fixed_angles(xs: JordanParams) -> Result<ViolationResult> {
    if xs.n() > MAX_DENSE_PARTIES {
        return Err(Error::PartyCount(xs.n(), "n <= 10 for fixed angles"));
    }
    let (lambda_max, eigvec) = bell_operator(&xs)?.max_eigenpair()?;
    Ok(ViolationResult {
        n: xs.n(),
        xs,
        lambda_max,
        eigvec,
        method: Method::FixedAngles,
        converged: true,
    })
}

fn render_violation(r: &ViolationResult, format: Format, amplitudes: bool) -> Result<String> {
    let xs: Vec<String> = r.xs.xs().iter().map(|&x| fmt6(x)).collect();
    let mut out = String::new();
    match format {
        Format::Json => return json(r),
        Format::Csv => {
            let head: Vec<String> = (1..=r.n).map(|i| format!("x_{i}")).collect();
            writeln!(out, "n,method,lambda_max,{}", head.join(",")).ok();
            writeln!(
                out,
                "{},{},{},{}",
                r.n,
                r.method,
                fmt6(r.lambda_max),
                xs.join(",")
            )
            .ok();
            if amplitudes {
                out.push_str(&amplitude_csv(&r.eigvec_state()?));
            }
        }
        Format::Human => {
            writeln!(out, "n           {}", r.n).ok();
            writeln!(out, "method      {}", r.method).ok();
            writeln!(out, "x           {}", xs.join(", ")).ok();
            writeln!(out, "lambda_max  {}", fmt6(r.lambda_max)).ok();
            if r.method == Method::FullOperator {
                writeln!(out, "converged   {}", r.converged).ok();
            }
            if amplitudes {
                out.push_str(&amplitude_table(&r.eigvec_state()?));
            }
        }
    }
    Ok(out)
}

impl ViolationResult {
    fn eigvec_state(&self) -> Result<PureState> {
        PureState::normalized(self.eigvec.clone())
    }
}

fn basis_label(index: usize, n: usize) -> String {
    format!("|{:0width$b}>", index, width = n)
}

fn amplitude_table(s: &PureState) -> String {
    let mut out = format!("{:<6} {:<10} {:>11} {:>11}\n", "index", "basis", "re", "im");
    for (i, re, im) in s.to_triples() {
        let label = basis_label(i, s.n());
        writeln!(out, "{i:<6} {label:<10} {:>11} {:>11}", fmt6(re), fmt6(im)).ok();
    }
    out
}

fn amplitude_csv(s: &PureState) -> String {
    let mut out = String::from("index,basis,re,im\n");
    for (i, re, im) in s.to_triples() {
        writeln!(
            out,
            "{i},{:0width$b},{},{}",
            i,
            fmt6(re),
            fmt6(im),
            width = s.n()
        )
        .ok();
    }
    out
}

pub fn cmd_table(args: &TableArgs, format: Format) -> Result<String> {
    if args.n_max < 3 {
        return Err(usage("--n-max must be at least 3"));
    }
    let rows = violation_curve(3, args.n_max)?;
    if args.gnuplot {
        let mut out = String::from("# n lambda_max\n");
        for p in &rows {
            writeln!(out, "{} {}", p.n, fmt6(p.lambda_max)).ok();
        }
        return Ok(out);
    }
    render_table(&rows, format)
}

fn render_table(rows: &[CurvePoint], format: Format) -> Result<String> {
    let mut out = String::new();
    match format {
        Format::Json => return json(&rows),
        Format::Csv => {
            out.push_str("n,x,lambda_max\n");
            for p in rows {
                writeln!(out, "{},{},{}", p.n, fmt6(p.x), fmt6(p.lambda_max)).ok();
            }
        }
        Format::Human => {
            out.push_str(" n  x         lambda_max\n");
            for p in rows {
                writeln!(out, "{:>2}  {}  {}", p.n, fmt6(p.x), fmt6(p.lambda_max)).ok();
            }
        }
    }
    Ok(out)
}

/// Classical and quantum winning probabilities of the three-party game.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameReport {
    pub classical: GameClassical,
    /// violation of the optimal three-party state
    pub delta: f64,
    pub quantum_formula: f64,
    pub quantum_simulated: f64,
    /// violation of the equal-magnitude state with `σ_z`/`σ_x` settings
    pub delta_prime: f64,
    pub prime_formula: f64,
    pub prime_simulated: f64,
}

pub fn game_report() -> Result<GameReport> {
    let meas = game_measurements(x_star_n3())?;
    let delta = violation_of(&psi3(), &meas)?;
    let zx = MeasurementSet::z_x(3);
    let delta_prime = violation_of(&psi3_prime(), &zx)?;
    Ok(GameReport {
        classical: game_classical_value(),
        delta,
        quantum_formula: game_quantum_value(delta),
        quantum_simulated: game_quantum_simulated(&psi3(), &meas)?,
        delta_prime,
        prime_formula: game_quantum_value(delta_prime),
        prime_simulated: game_quantum_simulated(&psi3_prime(), &zx)?,
    })
}

pub fn cmd_game(format: Format) -> Result<String> {
    let g = game_report()?;
    let w = g.classical.witness.0;
    let witness = w.map(|f| format!("{}{}", f[0], f[1])).join(" ");
    let rows = [
        ("classical", g.classical.value),
        ("quantum_formula", g.quantum_formula),
        ("quantum_simulated", g.quantum_simulated),
        ("delta", g.delta),
        ("psi3prime_formula", g.prime_formula),
        ("psi3prime_simulated", g.prime_simulated),
        ("psi3prime_delta", g.delta_prime),
    ];
    let mut out = String::new();
    match format {
        Format::Json => return json(&g),
        Format::Csv => {
            out.push_str("quantity,value\n");
            for (k, v) in rows {
                writeln!(out, "{k},{}", fmt6(v)).ok();
            }
        }
        Format::Human => {
            writeln!(
                out,
                "classical value     {}  (witness replies {witness}, {} strategies)",
                fmt6(g.classical.value),
                g.classical.strategies
            )
            .ok();
            for (k, v) in &rows[1..] {
                writeln!(out, "{k:<19} {}", fmt6(*v)).ok();
            }
        }
    }
    Ok(out)
}

pub fn cmd_verify(args: &VerifyArgs, format: Format) -> Result<(String, bool)> {
    if let Some(t) = args.tol {
        if t.is_nan() || t < 0.0 {
            return Err(usage("--tol must be non-negative"));
        }
    }
    if args.draws == 0 {
        return Err(usage("--draws must be at least 1"));
    }
    let report = run_suite(&VerifyOptions {
        tolerance: args.tol,
        seed: args.seed,
        draws: args.draws,
        fault: args.inject_fault.map(|f| match f {
            FaultArg::CharPolyDropBeta => Fault::CharPolyDropBeta,
        }),
    });
    Ok((render_verify(&report, format)?, report.passed))
}

fn render_verify(r: &VerifyReport, format: Format) -> Result<String> {
    let mut out = String::new();
    match format {
        Format::Json => return json(r),
        Format::Csv => {
            out.push_str("check,passed,residual,tolerance\n");
            for c in &r.checks {
                writeln!(
                    out,
                    "{},{},{},{}",
                    c.name,
                    c.passed,
                    fmt_sci(c.residual),
                    fmt_sci(c.tolerance)
                )
                .ok();
            }
        }
        Format::Human => {
            for c in &r.checks {
                let tag = if c.passed { "PASS" } else { "FAIL" };
                writeln!(
                    out,
                    "{tag}  {:<24} residual {:>13}  tol {:>13}  {}",
                    c.name,
                    fmt_sci(c.residual),
                    fmt_sci(c.tolerance),
                    c.detail
                )
                .ok();
            }
            let failing = r.failing();
            if failing.is_empty() {
                writeln!(out, "all {} checks passed", r.checks.len()).ok();
            } else {
                writeln!(out, "{} failed: {}", failing.len(), failing.join(", ")).ok();
            }
        }
    }
    Ok(out)
}

/// Named state with its amplitudes and the violation it attains.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateReport {
    pub name: String,
    pub n: usize,
    /// common overlap of the measurement settings used for `violation`
    pub x: f64,
    pub violation: f64,
    pub amplitudes: Vec<AmplitudeTriple>,
}

pub fn state_report(name: StateName) -> Result<StateReport> {
    let (label, state, x) = match name {
        StateName::Psi2 => ("psi2", psi2(), std::f64::consts::FRAC_1_SQRT_2),
        StateName::Psi3 => ("psi3", psi3(), x_star_n3()),
        StateName::Psi3Prime => ("psi3prime", psi3_prime(), std::f64::consts::FRAC_1_SQRT_2),
    };
    let n = state.n();
    let meas = MeasurementSet::tilted(&vec![x; n])?;
    Ok(StateReport {
        name: label.into(),
        n,
        x,
        violation: violation_of(&state, &meas)?,
        amplitudes: state.to_triples(),
    })
}

pub fn cmd_state(name: StateName, format: Format) -> Result<String> {
    let r = state_report(name)?;
    let state = PureState::from_triples(&r.amplitudes)?;
    Ok(match format {
        Format::Json => json(&r)?,
        Format::Csv => amplitude_csv(&state),
        Format::Human => {
            let mut out = String::new();
            writeln!(out, "state       {}", r.name).ok();
            writeln!(out, "x           {}", fmt6(r.x)).ok();
            writeln!(out, "violation   {}", fmt6(r.violation)).ok();
            out.push_str(&amplitude_table(&state));
            out
        }
    })
}

/// Classical bound with the coverage proof for the same party count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalReport {
    pub bound: ClassicalBound,
    pub proof: Option<ProofReport>,
}

pub fn cmd_classical(n: usize, format: Format) -> Result<String> {
    let bound = classical_value(n)?;
    let proof = if n <= MAX_PROOF_PARTIES {
        Some(proof_check(n)?)
    } else {
        None
    };
    let r = ClassicalReport { bound, proof };
    let mut out = String::new();
    match format {
        Format::Json => return json(&r),
        Format::Csv => {
            out.push_str("n,classical_value,strategies\n");
            writeln!(out, "{},{},{}", n, fmt6(r.bound.value), r.bound.strategies).ok();
        }
        Format::Human => {
            writeln!(out, "n                {n}").ok();
            writeln!(out, "classical value  {}", fmt6(r.bound.value)).ok();
            writeln!(out, "strategies       {}", r.bound.strategies).ok();
            let w: Vec<String> = r
                .bound
                .witness
                .outcomes()
                .iter()
                .map(|(a, b)| format!("({a:+},{b:+})"))
                .collect();
            writeln!(out, "witness          {}", w.join(" ")).ok();
            if let Some(p) = &r.proof {
                let hist: Vec<String> = p
                    .multiplicity
                    .iter()
                    .map(|(k, v)| format!("{k}:{v}"))
                    .collect();
                writeln!(out, "sequences        {} covered", p.sequences).ok();
                writeln!(out, "multiplicity     {}", hist.join(" ")).ok();
            }
        }
    }
    Ok(out)
}

/// Runs one subcommand on already parsed arguments. The flag reports a
/// failed verification.
pub fn execute(cfg: &RunConfig) -> Result<(String, bool)> {
    let f = cfg.format;
    match &cfg.command {
        Command::Violation(a) => cmd_violation(a, f).map(|s| (s, true)),
        Command::Table(a) => cmd_table(a, f).map(|s| (s, true)),
        Command::Game => cmd_game(f).map(|s| (s, true)),
        Command::Verify(a) => cmd_verify(a, f),
        Command::State { name } => cmd_state(*name, f).map(|s| (s, true)),
        Command::Classical { n } => cmd_classical(*n, f).map(|s| (s, true)),
    }
}

/// Parses `args` (program name first), runs, and writes `--out` if given.
pub fn run_from<I, T>(args: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let (stdout, stderr) = if e.use_stderr() {
                (String::new(), text)
            } else {
                (text, String::new())
            };
            return Invocation {
                code,
                stdout,
                stderr,
            };
        }
    };
    let (text, ok) = match execute(&cfg) {
        Ok(v) => v,
        Err(e) => {
            return Invocation {
                code: EXIT_USAGE,
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
            }
        }
    };
    let code = if ok { EXIT_OK } else { EXIT_VERIFY_FAILED };
    let stderr = if ok {
        String::new()
    } else {
        "verification failed\n".to_string()
    };
    match &cfg.out {
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => Invocation {
                code,
                stdout: String::new(),
                stderr,
            },
            Err(e) => Invocation {
                code: EXIT_USAGE,
                stdout: String::new(),
                stderr: format!("error: cannot write {}: {e}\n", path.display()),
            },
        },
        None => Invocation {
            code,
            stdout: text,
            stderr,
        },
    }
}
