use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use atomwall::error::Error;
use atomwall::experiments::presets::preset_products;
use atomwall::experiments::run::Manifest;
use atomwall::experiments::{
    embedded_assets, preset_config, replay, run_products, Assets, KernelSpec, Product, ScenarioConfig, SweepSpec,
    PRESET_NAMES,
};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

#[derive(Parser)]
#[command(name = "atomwall", version, about = "Atom-surface potentials and atom-mirror trajectories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Potential curve CSV (plus van der Waals reference for field-free runs).
    Potential(Common),
    /// Trajectory CSV from the config's initial state.
    Trajectory(Common),
    /// Containment report JSON for the configured potential.
    Report(Common),
    /// One trajectory per value of a numeric config field.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Dot path into the config, e.g. `initial.vz_mps`.
        #[arg(long)]
        axis: String,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        values: Vec<f64>,
        /// `start:stop:count`, inclusive, appended to --values.
        #[arg(long, allow_hyphen_values = true)]
        range: Option<String>,
    },
    /// Runs a built-in scenario.
    Preset {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(PRESET_NAMES))]
        name: String,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long)]
        kernel: Option<String>,
        #[arg(long)]
        seedless: bool,
    },
    /// Recomputes every output in a manifest and compares checksums.
    Replay { manifest: PathBuf },
}

#[derive(Args)]
struct Common {
    /// Scenario JSON.
    #[arg(long, required_unless_present = "preset", conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Start from a built-in scenario instead of a file.
    #[arg(long)]
    preset: Option<String>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// oscillatory_image, ground_state_quadrature or tabulated=<csv>.
    #[arg(long)]
    kernel: Option<String>,
    /// Reserved: nothing in a run is random.
    #[arg(long)]
    #[allow(dead_code)]
    seedless: bool,
}

enum Failure {
    Core(Error),
    Usage(String),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn report(&self) -> (u8, String) {
        let (code, kind, message) = match self {
            Failure::Core(e) => (e.exit_code() as u8, e.kind(), e.to_string()),
            Failure::Usage(m) => (2, "usage", m.clone()),
            Failure::Mismatch(m) => (3, "replay_mismatch", m.clone()),
        };
        (code, json!({ "kind": kind, "message": message }).to_string())
    }
}

/// Loads the scenario and inlines every file it references, applying a
/// kernel override (tabulated paths are relative to the working directory).
fn load(source: &Common) -> Result<ScenarioConfig, Failure> {
    let (cfg, assets) = match (&source.config, &source.preset) {
        (Some(path), None) => ScenarioConfig::load(path)?,
        (None, Some(name)) => (preset_config(name)?, embedded_assets()),
        _ => return Err(Failure::Usage("give exactly one of --config, --preset".into())),
    };
    let mut cfg = cfg.self_contained(&assets)?;
    if let Some(k) = &source.kernel {
        cfg.kernel = override_kernel(k)?;
    }
    Ok(cfg)
}

fn override_kernel(arg: &str) -> Result<KernelSpec, Failure> {
    let spec = KernelSpec::parse_cli(arg)?;
    let KernelSpec::Tabulated { path: Some(path), .. } = &spec else {
        return Ok(spec);
    };
    let (label, text) = Assets::Dir(PathBuf::from(".")).read(path)?;
    let curve = atomwall::surface::TabulatedCurve::parse_csv(label, &text)?;
    Ok(KernelSpec::Tabulated { path: None, rows: Some(curve.rows()) })
}

fn parse_range(s: &str) -> Result<Vec<f64>, Failure> {
    let bad = || Failure::Usage(format!("--range expects start:stop:count, got `{s}`"));
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts.as_slice() else { return Err(bad()) };
    let (a, b): (f64, f64) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
    let n: usize = n.parse().map_err(|_| bad())?;
    Ok(match n {
        0 => vec![],
        1 => vec![a],
        _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
    })
}

fn summary(manifest: &Manifest, written: &[PathBuf]) -> String {
    let files: Vec<String> = written.iter().map(|p| p.display().to_string()).collect();
    let body = json!({
        "run": manifest.config.name,
        "files": files,
        "outputs": manifest.outputs,
    });
    serde_json::to_string_pretty(&body).expect("summary serializes")
}

fn run_one(cfg: &ScenarioConfig, products: &[Product], sweep: Option<&SweepSpec>, out: &Path) -> Result<String, Failure> {
    let (manifest, written) = run_products(cfg, &Assets::Dir(PathBuf::from(".")), products, sweep, out)?;
    Ok(summary(&manifest, &written))
}

fn potential_products(cfg: &ScenarioConfig) -> &'static [Product] {
    if cfg.laser.is_none() {
        &[Product::Potential, Product::VdwReference]
    } else {
        &[Product::Potential]
    }
}

fn execute(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Potential(c) => {
            let cfg = load(&c)?;
            run_one(&cfg, potential_products(&cfg), None, &c.out)
        }
        Command::Trajectory(c) => run_one(&load(&c)?, &[Product::Trajectory], None, &c.out),
        Command::Report(c) => run_one(&load(&c)?, &[Product::Report], None, &c.out),
        Command::Sweep { common, axis, mut values, range } => {
            if let Some(r) = range {
                values.extend(parse_range(&r)?);
            }
            let cfg = load(&common)?;
            run_one(&cfg, &[Product::Sweep], Some(&SweepSpec { axis, values }), &common.out)
        }
        Command::Preset { name, out, kernel, seedless } => {
            let common = Common { config: None, preset: Some(name.clone()), out, kernel, seedless };
            let cfg = load(&common)?;
            run_one(&cfg, preset_products(&name)?, None, &common.out)
        }
        Command::Replay { manifest } => {
            let m = Manifest::load(&manifest)?;
            let checks = replay(&m)?;
            let text = serde_json::to_string_pretty(&checks).expect("checks serialize");
            let bad: Vec<&str> = checks.iter().filter(|c| !c.matches).map(|c| c.file.as_str()).collect();
            if bad.is_empty() {
                Ok(text)
            } else {
                emit(&text);
                Err(Failure::Mismatch(format!("checksum mismatch: {}", bad.join(", "))))
            }
        }
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let (code, text) = Failure::Usage(e.render().to_string().trim().trim_start_matches("error: ").to_string()).report();
            eprintln!("{text}");
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(out) => {
            emit(&out);
            ExitCode::SUCCESS
        }
        Err(f) => {
            let (code, text) = f.report();
            eprintln!("{text}");
            ExitCode::from(code)
        }
    }
}
