//! `stokes`: validated enclosures of the Stokes constant from the command line.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use stokes_core::pipeline::{exit_code, run, Mode, RunConfig, RunOutput};
use stokes_core::{IntegratorConfig, ShootingConfig};

#[derive(Parser, Debug)]
#[command(
    name = "stokes",
    version,
    about = "Validated Stokes-constant enclosures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the pipeline for one problem.
    Run(RunArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Verify,
    Refine,
    Thresholds,
    Oracle,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Verify => Mode::Verify,
            ModeArg::Refine => Mode::Refine,
            ModeArg::Thresholds => Mode::Thresholds,
            ModeArg::Oracle => Mode::Oracle,
        }
    }
}

#[derive(clap::Args, Debug)]
struct RunArgs {
    /// Problem name: example1 or example2.
    #[arg(long)]
    problem: String,
    #[arg(long, value_enum, default_value = "verify")]
    mode: ModeArg,
    /// First radius of the threshold scan.
    #[arg(long, default_value_t = 2.5)]
    scan_start: f64,
    /// Geometric factor of the threshold scan.
    #[arg(long, default_value_t = 1.25)]
    scan_factor: f64,
    #[arg(long, default_value_t = 60)]
    max_iters: usize,
    /// Taylor order.
    #[arg(long)]
    order: Option<usize>,
    /// Local error target per step.
    #[arg(long)]
    tol: Option<f64>,
    /// Largest admissible enclosure width.
    #[arg(long)]
    width_cap: Option<f64>,
    /// Uniform subdivision of the vertical shooting segment.
    #[arg(long)]
    subdivide: Option<usize>,
    /// Largest step size.
    #[arg(long)]
    h_max: Option<f64>,
    /// Centre of the vertical shooting segment is `Im s = -rho_bar`.
    #[arg(long)]
    rho_bar: Option<f64>,
    /// `|Re s|` of both shooting starts.
    #[arg(long)]
    re_s: Option<f64>,
    /// Half-length of the vertical shooting segment.
    #[arg(long)]
    half_width: Option<f64>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write per-step integration logs to this file.
    #[arg(long)]
    trace: Option<PathBuf>,
}

fn config(a: &RunArgs) -> RunConfig {
    let mut cfg = RunConfig::new(&a.problem, a.mode.into());
    cfg.scan_start = a.scan_start;
    cfg.scan_factor = a.scan_factor;
    cfg.max_iters = a.max_iters;
    let d = IntegratorConfig::default();
    cfg.integrator = IntegratorConfig {
        order: a.order.unwrap_or(d.order),
        tol: a.tol.unwrap_or(d.tol),
        width_cap: a.width_cap.unwrap_or(d.width_cap),
        subdivide: a.subdivide.unwrap_or(d.subdivide),
        h_max: a.h_max.unwrap_or(d.h_max),
        trace: a.trace.is_some(),
    };
    if a.rho_bar.is_some() || a.re_s.is_some() || a.half_width.is_some() {
        let base = ShootingConfig::default();
        cfg.shooting = Some(ShootingConfig::symmetric(
            a.re_s.unwrap_or(base.s_plus_re),
            a.rho_bar.unwrap_or(base.rho_bar),
            a.half_width.unwrap_or(base.half_width),
        ));
    }
    cfg
}

fn trace_text(out: &RunOutput) -> String {
    let RunOutput::Certificate(c) = out else {
        return String::new();
    };
    let mut s = String::new();
    for (name, hit) in [("minus", &c.delta.hit_minus), ("plus", &c.delta.hit_plus)] {
        s.push_str(&format!("# {name}: tau h s1 width\n"));
        for r in &hit.trace {
            s.push_str(&format!(
                "{:.6} {:.6e} {:.6} {:.3e}\n",
                r.tau, r.h, r.s1, r.width
            ));
        }
    }
    s
}

fn summary(out: &RunOutput) -> String {
    match out {
        RunOutput::Thresholds(t) => format!(
            "{}: rho1 = {}, rho2 = {}, rho* = {}, rho0 = {}",
            t.problem,
            t.thresholds.rho1,
            t.thresholds.rho2,
            t.thresholds.rho_star,
            t.thresholds.rho0
        ),
        RunOutput::Certificate(c) => {
            let mut s = format!(
                "{}: rho* in {}, Theta in {} + {} i",
                c.problem, c.delta.rho_star_enc, c.theta_basic.re, c.theta_basic.im
            );
            if let Some(r) = &c.theta_refined {
                s.push_str(&format!(", refined {} + {} i", r.value.re, r.value.im));
            }
            s.push_str(&format!(
                ", {}",
                serde_json::to_value(c.conclusion)
                    .expect("conclusion")
                    .as_str()
                    .unwrap_or("")
            ));
            s
        }
        RunOutput::Oracle(o) => format!(
            "NON-RIGOROUS {}: Theta ~ {:.9} + {:.9} i",
            o.problem, o.theta_estimate.theta.0, o.theta_estimate.theta.1
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Run(args) = cli.command;
    let cfg = config(&args);
    let result = run(&cfg);
    let code = exit_code(&result);
    let report = match &result {
        Ok(out) => serde_json::to_string_pretty(out).expect("report serializes"),
        Err(e) => serde_json::to_string_pretty(&serde_json::json!({
            "kind": "error",
            "message": e.to_string(),
            "error": e,
        }))
        .expect("error serializes"),
    };
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, format!("{report}\n")) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => println!("{report}"),
    }
    if let (Some(path), Ok(out)) = (&args.trace, &result) {
        if let Err(e) = std::fs::write(path, trace_text(out)) {
            eprintln!("cannot write {}: {e}", path.display());
        }
    }
    match &result {
        Ok(out) => eprintln!("{}", summary(out)),
        Err(e) => eprintln!("error: {e}"),
    }
    ExitCode::from(code as u8)
}
