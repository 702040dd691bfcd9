//! Command-line front end. Exit codes: 0 PASS, 1 FAIL, 2 error.

use std::error::Error;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use kdvh::diffpoly::to_latex;
use kdvh::energy::{build_blueprint, eval::check_threshold};
use kdvh::hierarchy::{classify, generate};
use kdvh::ibp::{alpha_coeffs, verify_identity};
use kdvh::lab::{run_solve, Config, Experiment, Report, RunManifest, Verdict};

#[derive(Parser)]
#[command(name = "kdvh", version, about = "KdV hierarchy algebra, modified energies and spectral experiments")]
struct Cli {
    /// Write a JSON run manifest to this path.
    #[arg(long, global = true, value_name = "PATH")]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hierarchy levels.
    Hierarchy {
        #[command(subcommand)]
        cmd: HierarchyCmd,
    },
    /// Trilinear integration-by-parts coefficients.
    Ibp {
        #[command(subcommand)]
        cmd: IbpCmd,
    },
    /// Modified-energy blueprints.
    Energy {
        #[command(subcommand)]
        cmd: EnergyCmd,
    },
    /// Run the solver from a config file.
    Solve {
        #[arg(long, value_name = "FILE")]
        config: PathBuf,
    },
    /// Run an experiment pipeline.
    Exp(ExpArgs),
}

#[derive(Subcommand)]
enum HierarchyCmd {
    /// Print level L: gradient, Hamiltonian and flow.
    Gen {
        #[arg(long)]
        l: usize,
        #[arg(long, conflicts_with = "latex")]
        json: bool,
        #[arg(long)]
        latex: bool,
    },
}

#[derive(Subcommand)]
enum IbpCmd {
    /// Print the coefficient row for level L.
    Alpha {
        #[arg(long)]
        l: usize,
        /// Certify the identity with the Euler-operator check.
        #[arg(long)]
        verify: bool,
    },
}

#[derive(Subcommand)]
enum EnergyCmd {
    /// Build the cancellation blueprint for level L.
    Build {
        #[arg(long)]
        l: usize,
        /// Also evaluate coefficients at this regularity.
        #[arg(long)]
        s: Option<f64>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct ExpArgs {
    /// conservation, mu-cauchy, bona-smith, energy-drift or scaling.
    name: String,
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Override a config key, `key=value`; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

/// Collects what a command printed or wrote, for the manifest.
struct Run {
    manifest: RunManifest,
    stdout: String,
}

impl Run {
    fn new(config: &Config) -> Self {
        Run { manifest: RunManifest::start(std::env::args().collect(), config.entries().clone()), stdout: String::new() }
    }

    fn print(&mut self, text: &str) {
        self.stdout.push_str(text);
        if !text.ends_with('\n') {
            self.stdout.push('\n');
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Box<dyn Error>> {
    let (mut run, verdict, metrics) = match &cli.command {
        Command::Hierarchy { cmd: HierarchyCmd::Gen { l, json, latex } } => hierarchy_gen(*l, *json, *latex)?,
        Command::Ibp { cmd: IbpCmd::Alpha { l, verify } } => ibp_alpha(*l, *verify)?,
        Command::Energy { cmd: EnergyCmd::Build { l, s, json } } => energy_build(*l, *s, *json)?,
        Command::Solve { config } => {
            let cfg = Config::load(config)?;
            report_run(&cfg, run_solve(&cfg)?)?
        }
        Command::Exp(args) => {
            let exp: Experiment = args.name.parse()?;
            let mut cfg = match &args.config {
                Some(p) => Config::load(p)?,
                None => Config::new(),
            };
            for kv in &args.overrides {
                let (k, v) = kv.split_once('=').ok_or_else(|| format!("expected key=value, got `{kv}`"))?;
                cfg.set(k.trim(), v.trim())?;
            }
            let mut r = report_run(&cfg, exp.run(&cfg)?)?;
            r.0.manifest.seed = Some(cfg.seed()?);
            r
        }
    };
    let stdout = std::mem::take(&mut run.stdout);
    if !stdout.is_empty() {
        run.manifest.record_output("stdout", stdout.as_bytes());
        std::io::stdout().write_all(stdout.as_bytes())?;
    }
    run.manifest.finish(verdict, metrics);
    if let Some(path) = &cli.manifest {
        run.manifest.write(path)?;
    }
    Ok(verdict.map_or(0, |v| v.exit_code() as u8))
}

type Outcome = (Run, Option<Verdict>, serde_json::Value);

fn hierarchy_gen(l: usize, json: bool, latex: bool) -> Result<Outcome, Box<dyn Error>> {
    let level = generate(l);
    let report = classify(&level)?;
    let mut run = Run::new(&Config::new());
    if json {
        let mut v = level.to_json();
        v["rank"] = json!(report.rank.to_string());
        run.print(&serde_json::to_string_pretty(&v)?);
    } else if latex {
        run.print(&format!("G_{{{l}}} = {}", to_latex(&level.g)));
        run.print(&format!("H_{{{l}}} = \\int {} \\, dx", to_latex(&level.h.canonical)));
    } else {
        run.print(&format!("G_{l} = {}", level.g));
        run.print(&format!("H_{l} = ∫ {} dx", level.h.canonical));
        run.print(&format!("u_t = {}", level.rhs));
        run.print(&format!("rank {}", report.rank));
        for g in &report.groups {
            run.print(&format!("  degree {}: weight {}, {} monomials", g.k, g.weight, g.coefficients.len()));
        }
    }
    Ok((run, None, json!({ "l": l, "rank": report.rank.to_string() })))
}

fn ibp_alpha(l: usize, verify: bool) -> Result<Outcome, Box<dyn Error>> {
    let table = alpha_coeffs(l);
    let verified = verify.then(|| verify_identity(l));
    let mut run = Run::new(&Config::new());
    let v = table.to_json(verified);
    run.print(&serde_json::to_string_pretty(&v)?);
    Ok((run, verified.map(Verdict::from_bool), v))
}

fn energy_build(l: usize, s: Option<f64>, json: bool) -> Result<Outcome, Box<dyn Error>> {
    if let Some(s) = s {
        check_threshold(l, s)?;
    }
    let bp = build_blueprint(l)?;
    let mut run = Run::new(&Config::new());
    let v = bp.to_json(s);
    if json {
        run.print(&serde_json::to_string_pretty(&v)?);
    } else {
        for (j, b) in bp.betas.iter().enumerate() {
            run.print(&format!("beta_{}(s) = {b}", j + 1));
        }
        for (q, g) in bp.gammas.iter().enumerate() {
            run.print(&format!("gamma_{q}(s) = {g}"));
        }
        for st in &bp.stages {
            let diag: Vec<String> = st.diagonal.iter().map(|d| d.to_string()).collect();
            run.print(&format!("order {}: diagonal [{}], residue {}", st.order, diag.join(", "), st.residue.len()));
        }
    }
    let closed = bp.resonant_residue.is_empty() && bp.stages.iter().all(|s| s.residue.is_empty());
    Ok((run, Some(Verdict::from_bool(closed)), v["diagnostics"].clone()))
}

/// Writes the report tables: to `output.path` (extra tables beside it as
/// `<stem>.<table>.csv`) with the summary on stdout, or the primary CSV on
/// stdout with the summary on stderr.
fn report_run(cfg: &Config, report: Report) -> Result<Outcome, Box<dyn Error>> {
    let mut run = Run::new(cfg);
    let summary = serde_json::to_string_pretty(&report.summary())?;
    match cfg.get("output.path") {
        Some(path) => {
            let path = Path::new(path);
            for (i, t) in report.tables.iter().enumerate() {
                let target = if i == 0 { path.to_path_buf() } else { sibling(path, &t.name) };
                let csv = t.to_csv();
                std::fs::write(&target, &csv)?;
                run.manifest.record_output(target.display().to_string(), csv.as_bytes());
            }
            run.print(&summary);
        }
        None => {
            run.print(&report.tables[0].to_csv());
            eprintln!("{summary}");
        }
    }
    Ok((run, Some(report.verdict), report.metrics))
}

fn sibling(path: &Path, name: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("output");
    path.with_file_name(format!("{stem}.{name}.csv"))
}
