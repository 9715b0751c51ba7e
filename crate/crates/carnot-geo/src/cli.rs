//! Command-line front end: every computation behind JSON input and
//! CSV/JSON output.
//!
//! Exit codes: 0 success, 1 verification failure, 2 malformed input or
//! usage, 3 invariant violation, 4 non-generic extremal.
//!
//! CSV output uses '.' decimals, '\n' line endings and 17 significant
//! digits, so values round-trip and files diff cleanly across runs.

use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::algebra::GroupElement;
use crate::conjugacy;
use crate::cutlocus::{self, CutTime};
use crate::extremal::{self, Covector, ExtremalParams};
use crate::oracle;
use crate::verify::{self, Suite};
use crate::{Error, Result};

/// Shared run configuration from the global flags.
#[derive(Debug, Clone, Copy)]
pub struct RunConfig {
    pub tol_singular: f64,
    pub tol_classify: f64,
    pub ode_step: f64,
    pub fd_step: f64,
    pub seed: u64,
    pub out: OutFormat,
}

impl RunConfig {
    fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("tol-singular", self.tol_singular),
            ("tol-classify", self.tol_classify),
            ("ode-step", self.ode_step),
            ("fd-step", self.fd_step),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("--{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Csv,
    Json,
}

#[derive(Parser)]
#[command(
    name = "carnot-geo",
    version,
    about = "Geodesics, conjugate points and cut-locus strata in the free step-2 rank-4 Carnot group"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Relative singular-value threshold for conjugacy flags.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol_singular: f64,
    /// Relative tolerance for stratum classification.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol_classify: f64,
    /// Fixed RK4 step for oracle integration.
    #[arg(long, global = true, default_value_t = 1e-4)]
    ode_step: f64,
    /// Central-difference step for Jacobian probes.
    #[arg(long, global = true, default_value_t = 1e-5)]
    fd_step: f64,
    /// Seed for randomized verification suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output format for streaming commands.
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Csv)]
    out: OutFormat,
}

#[derive(Subcommand)]
enum Command {
    /// Sample an extremal trajectory on a uniform time grid.
    Trajectory {
        /// Extremal parameters: inline JSON or a path to a JSON file.
        params: String,
        #[arg(long)]
        s_max: f64,
        /// Number of grid intervals (emits grid+1 rows).
        #[arg(long)]
        grid: usize,
    },
    /// Scan conjugacy diagnostics along a generic extremal.
    ConjugateScan {
        params: String,
        #[arg(long)]
        s_min: f64,
        #[arg(long)]
        s_max: f64,
        #[arg(long)]
        grid: usize,
        /// Append the finite-difference singularity probe column.
        #[arg(long)]
        with_oracle: bool,
    },
    /// Classify a group element against the candidate cut-locus strata.
    Classify {
        /// Group element {"x":[...4], "t":[...6]}: inline JSON or a path.
        point: String,
    },
    /// Exact distance to a vertical point with coefficients t1, t2.
    DistanceVertical {
        #[arg(long)]
        t1: f64,
        #[arg(long)]
        t2: f64,
    },
    /// Cut time of an extremal with a rational frequency certificate.
    CutTime {
        params: String,
        /// Numerator of phi1/phi2.
        #[arg(long)]
        p: u64,
        /// Denominator of phi1/phi2.
        #[arg(long)]
        q: u64,
    },
    /// Convert between extremal parameters and initial covectors.
    Covector {
        /// Input JSON (parameters for `to`, covector for `from`).
        input: String,
        #[arg(long, value_parser = ["to", "from"])]
        direction: String,
    },
    /// Run the randomized property suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

/// Extremal parameters accept either the full frame form or the
/// canonical shorthand on the standard frame.
#[derive(Deserialize)]
#[serde(untagged)]
enum ParamsJson {
    Full {
        a1: [f64; 4],
        b1: [f64; 4],
        a2: [f64; 4],
        b2: [f64; 4],
        phi1: f64,
        phi2: f64,
    },
    Canonical {
        r1: f64,
        r2: f64,
        phi1: f64,
        phi2: f64,
    },
}

#[derive(Serialize)]
struct ParamsOut {
    a1: [f64; 4],
    b1: [f64; 4],
    a2: [f64; 4],
    b2: [f64; 4],
    phi1: f64,
    phi2: f64,
}

/// Formats a double with 17 significant digits, enough to round-trip.
fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

/// Reads the argument as inline JSON when it looks like JSON, otherwise
/// as a file path.
fn read_json_arg(arg: &str) -> std::result::Result<String, String> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        Ok(arg.to_string())
    } else {
        std::fs::read_to_string(arg).map_err(|e| format!("cannot read '{arg}': {e}"))
    }
}

fn parse_params(arg: &str) -> std::result::Result<ExtremalParams, CmdError> {
    let text = read_json_arg(arg).map_err(CmdError::Malformed)?;
    let parsed: ParamsJson =
        serde_json::from_str(&text).map_err(|e| CmdError::Malformed(format!("params JSON: {e}")))?;
    let built = match parsed {
        ParamsJson::Full {
            a1,
            b1,
            a2,
            b2,
            phi1,
            phi2,
        } => ExtremalParams::new(
            crate::Point4(a1),
            crate::Point4(b1),
            crate::Point4(a2),
            crate::Point4(b2),
            phi1,
            phi2,
        ),
        ParamsJson::Canonical { r1, r2, phi1, phi2 } => {
            ExtremalParams::canonical(r1, r2, phi1, phi2)
        }
    };
    built.map_err(CmdError::Lib)
}

fn parse_group_element(arg: &str) -> std::result::Result<GroupElement, CmdError> {
    let text = read_json_arg(arg).map_err(CmdError::Malformed)?;
    serde_json::from_str(&text).map_err(|e| CmdError::Malformed(format!("point JSON: {e}")))
}

fn parse_covector(arg: &str) -> std::result::Result<Covector, CmdError> {
    let text = read_json_arg(arg).map_err(CmdError::Malformed)?;
    serde_json::from_str(&text).map_err(|e| CmdError::Malformed(format!("covector JSON: {e}")))
}

/// Command-level error with its exit code semantics.
enum CmdError {
    Malformed(String),
    Lib(Error),
}

impl CmdError {
    fn exit_code(&self) -> i32 {
        match self {
            CmdError::Malformed(_) => 2,
            CmdError::Lib(Error::Config(_)) => 2,
            CmdError::Lib(Error::NonGeneric(_)) => 4,
            CmdError::Lib(_) => 3,
        }
    }

    fn message(&self) -> String {
        match self {
            CmdError::Malformed(m) => m.clone(),
            CmdError::Lib(e) => e.to_string(),
        }
    }
}

impl From<Error> for CmdError {
    fn from(e: Error) -> CmdError {
        CmdError::Lib(e)
    }
}

/// Entry point for the binary: parses `std::env::args`.
pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    run_from(std::env::args(), &mut out)
}

/// Testable entry point: parses the given arguments and writes to `out`.
pub fn run_from<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successful exits.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = write!(out, "{e}");
            return code;
        }
    };
    let cfg = RunConfig {
        tol_singular: cli.tol_singular,
        tol_classify: cli.tol_classify,
        ode_step: cli.ode_step,
        fd_step: cli.fd_step,
        seed: cli.seed,
        out: cli.out,
    };
    if let Err(e) = cfg.validate() {
        let _ = writeln!(out, "error: {e}");
        return 2;
    }
    let result = match cli.command {
        Command::Trajectory { params, s_max, grid } => cmd_trajectory(&cfg, &params, s_max, grid, out),
        Command::ConjugateScan {
            params,
            s_min,
            s_max,
            grid,
            with_oracle,
        } => cmd_conjugate_scan(&cfg, &params, s_min, s_max, grid, with_oracle, out),
        Command::Classify { point } => cmd_classify(&cfg, &point, out),
        Command::DistanceVertical { t1, t2 } => cmd_distance_vertical(t1, t2, out),
        Command::CutTime { params, p, q } => cmd_cut_time(&params, p, q, out),
        Command::Covector { input, direction } => cmd_covector(&cfg, &input, &direction, out),
        Command::Verify { suite } => {
            let sc = verify::SuiteConfig {
                ode_step: cfg.ode_step,
                fd_step: cfg.fd_step,
            };
            return cmd_verify(&suite, cfg.seed, sc, out);
        }
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(out, "error: {}", e.message());
            e.exit_code()
        }
    }
}

fn cmd_trajectory(
    cfg: &RunConfig,
    params: &str,
    s_max: f64,
    grid: usize,
    out: &mut dyn Write,
) -> std::result::Result<(), CmdError> {
    if grid == 0 || s_max.is_nan() || s_max <= 0.0 {
        return Err(CmdError::Lib(Error::Config(
            "need --grid >= 1 and --s-max > 0".into(),
        )));
    }
    let p = parse_params(params)?;
    let points: Vec<GroupElement> = (0..=grid)
        .map(|i| extremal::trajectory(&p, s_max * i as f64 / grid as f64))
        .collect();
    match cfg.out {
        OutFormat::Csv => {
            let _ = writeln!(out, "s,x1,x2,x3,x4,t12,t13,t14,t23,t24,t34");
            for (i, g) in points.iter().enumerate() {
                let s = s_max * i as f64 / grid as f64;
                let mut row = vec![fmt(s)];
                row.extend(g.x.0.iter().map(|v| fmt(*v)));
                row.extend(g.t.0.iter().map(|v| fmt(*v)));
                let _ = writeln!(out, "{}", row.join(","));
            }
        }
        OutFormat::Json => {
            let _ = writeln!(out, "{}", serde_json::to_string(&points).unwrap());
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_conjugate_scan(
    cfg: &RunConfig,
    params: &str,
    s_min: f64,
    s_max: f64,
    grid: usize,
    with_oracle: bool,
    out: &mut dyn Write,
) -> std::result::Result<(), CmdError> {
    if grid == 0 || !(s_min > 0.0 && s_max > s_min) {
        return Err(CmdError::Lib(Error::Config(
            "need --grid >= 1 and 0 < --s-min < --s-max".into(),
        )));
    }
    let p = parse_params(params)?;
    let mut rows: Vec<serde_json::Value> = Vec::new();
    let header = if with_oracle {
        "s,detM1,detM2,quarticD,sigma_min_full,rank_t,pfaffian,in_C4,stratum,fd_probe"
    } else {
        "s,detM1,detM2,quarticD,sigma_min_full,rank_t,pfaffian,in_C4,stratum"
    };
    if cfg.out == OutFormat::Csv {
        let _ = writeln!(out, "{header}");
    }
    for i in 0..=grid {
        let s = s_min + (s_max - s_min) * i as f64 / grid as f64;
        let report = conjugacy::is_conjugate(&p, s, cfg.tol_singular)?;
        let stratum = cutlocus::classify_c4(&extremal::trajectory(&p, s), cfg.tol_classify);
        let probe = if with_oracle {
            Some(oracle::exp_singularity_probe(&p, s, cfg.fd_step)?)
        } else {
            None
        };
        match cfg.out {
            OutFormat::Csv => {
                let mut row = vec![
                    fmt(s),
                    fmt(report.det_m1),
                    fmt(report.det_m2),
                    fmt(report.quartic_d),
                    fmt(report.sigma_min_full),
                    report.rank_t.to_string(),
                    fmt(report.pfaffian_t),
                    u8::from(stratum.in_c4()).to_string(),
                    stratum.tag.to_string(),
                ];
                if let Some(pr) = probe {
                    row.push(fmt(pr));
                }
                let _ = writeln!(out, "{}", row.join(","));
            }
            OutFormat::Json => {
                let mut value = json!({
                    "s": s,
                    "detM1": report.det_m1,
                    "detM2": report.det_m2,
                    "quarticD": report.quartic_d,
                    "sigma_min_full": report.sigma_min_full,
                    "rank_t": report.rank_t,
                    "pfaffian": report.pfaffian_t,
                    "in_C4": stratum.in_c4(),
                    "stratum": stratum.tag.to_string(),
                });
                if let Some(pr) = probe {
                    value["fd_probe"] = json!(pr);
                }
                rows.push(value);
            }
        }
    }
    if cfg.out == OutFormat::Json {
        let _ = writeln!(out, "{}", serde_json::to_string(&rows).unwrap());
    }
    Ok(())
}

fn cmd_classify(
    cfg: &RunConfig,
    point: &str,
    out: &mut dyn Write,
) -> std::result::Result<(), CmdError> {
    let g = parse_group_element(point)?;
    if !(g.x.is_finite() && g.t.is_finite()) {
        return Err(CmdError::Malformed("non-finite entries in point".into()));
    }
    let stratum = cutlocus::classify_c4(&g, cfg.tol_classify);
    let subgroup = cutlocus::rank_and_subgroup(&g, cfg.tol_classify);
    let _ = writeln!(
        out,
        "{}",
        json!({
            "stratum": stratum.tag.to_string(),
            "lambda1": stratum.lambda1,
            "lambda2": stratum.lambda2,
            "rank": subgroup.rank,
            "in_H": subgroup.in_h,
            "min_subgroup_dim": subgroup.min_subgroup_dim,
        })
    );
    Ok(())
}

fn cmd_distance_vertical(
    t1: f64,
    t2: f64,
    out: &mut dyn Write,
) -> std::result::Result<(), CmdError> {
    let d = cutlocus::vertical_distance(t1, t2)?;
    let _ = writeln!(out, "{}", json!({ "d": d }));
    Ok(())
}

fn cmd_cut_time(
    params: &str,
    p_num: u64,
    q_den: u64,
    out: &mut dyn Write,
) -> std::result::Result<(), CmdError> {
    let p = parse_params(params)?;
    let ct = cutlocus::cut_time_rational(&p, p_num, q_den)?;
    let kind = match ct {
        CutTime::Exact(_) => "exact",
        CutTime::UpperBound(_) => "upper_bound",
    };
    let _ = writeln!(out, "{}", json!({ "kind": kind, "t_cut": ct.time() }));
    Ok(())
}

fn cmd_covector(
    cfg: &RunConfig,
    input: &str,
    direction: &str,
    out: &mut dyn Write,
) -> std::result::Result<(), CmdError> {
    match direction {
        "to" => {
            let p = parse_params(input)?;
            let c = extremal::to_covector(&p)?;
            let _ = writeln!(out, "{}", serde_json::to_string(&c).unwrap());
        }
        "from" => {
            let c = parse_covector(input)?;
            let p = extremal::from_covector(&c, cfg.tol_classify)?;
            let out_params = ParamsOut {
                a1: p.a1.0,
                b1: p.b1.0,
                a2: p.a2.0,
                b2: p.b2.0,
                phi1: p.phi1,
                phi2: p.phi2,
            };
            let _ = writeln!(out, "{}", serde_json::to_string(&out_params).unwrap());
        }
        other => {
            return Err(CmdError::Malformed(format!(
                "--direction must be 'to' or 'from', got '{other}'"
            )))
        }
    }
    Ok(())
}

fn cmd_verify(suite: &str, seed: u64, sc: verify::SuiteConfig, out: &mut dyn Write) -> i32 {
    let suite: Suite = match suite.parse() {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            return 2;
        }
    };
    let mut all_passed = true;
    for (name, checks) in verify::run(suite, seed, sc) {
        for check in checks {
            all_passed &= check.passed;
            let status = if check.passed { "PASS" } else { "FAIL" };
            let note = if check.note.is_empty() {
                String::new()
            } else {
                format!("  [{}]", check.note)
            };
            let _ = writeln!(
                out,
                "[{status}] {name}/{:<34} residual {:>10.3e} (tol {:.1e}){note}",
                check.name, check.residual, check.tolerance
            );
        }
    }
    let _ = writeln!(
        out,
        "{}",
        if all_passed {
            "verification passed"
        } else {
            "verification FAILED"
        }
    );
    i32::from(!all_passed)
}
