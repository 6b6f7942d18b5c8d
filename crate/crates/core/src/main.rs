use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cyclab::lab::{self, ExperimentConfig, LabError};

#[derive(Parser)]
#[command(name = "cyclab", version, about = "Primitive-cyclic reduction counts against predicted densities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand)]
enum Command {
    /// Count primitive-cyclic primes up to each checkpoint.
    Count,
    /// Evaluate the predicted density with its tail interval.
    Predict,
    /// Join counts and predictions per checkpoint.
    Compare,
    /// Probe the mod-q images for q ≤ 13.
    Probe,
    /// Run built-in known-answer checks.
    Selftest,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Opts {
    /// JSON configuration file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Curve coefficients `a,b` of y² = x³ + ax + b.
    #[arg(long, global = true, allow_hyphen_values = true)]
    curve: Option<String>,
    /// Rational point `x,y`; repeatable, replaces configured points.
    #[arg(long = "point", global = true, allow_hyphen_values = true)]
    points: Vec<String>,
    /// Cyclotomic conductor f.
    #[arg(long, global = true)]
    modulus: Option<u64>,
    /// Admissible residue mod f; repeatable.
    #[arg(long = "residue", global = true)]
    residues: Vec<u64>,
    #[arg(long, global = true)]
    xlimit: Option<u64>,
    /// Comma-separated checkpoints.
    #[arg(long, global = true)]
    checkpoints: Option<String>,
    #[arg(long, global = true)]
    truncation: Option<u64>,
    /// Exact degree `q=deg` of the q-division field; repeatable.
    #[arg(long = "override", global = true)]
    overrides: Vec<String>,
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Primes sampled per q by the image probe; 0 skips probing.
    #[arg(long, global = true)]
    probe_budget: Option<usize>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

fn parse_pair<T: std::str::FromStr>(s: &str, sep: char, what: &str) -> Result<(T, T), LabError> {
    let bad = || LabError::Config(format!("cannot parse {what} {s:?}"));
    let (l, r) = s.split_once(sep).ok_or_else(bad)?;
    Ok((l.trim().parse().map_err(|_| bad())?, r.trim().parse().map_err(|_| bad())?))
}

fn build_config(o: &Opts) -> Result<ExperimentConfig, LabError> {
    let mut c = match &o.config {
        Some(p) => ExperimentConfig::from_file(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = &o.curve {
        let (a, b) = parse_pair::<i64>(s, ',', "curve")?;
        c.curve.a = a;
        c.curve.b = b;
    }
    if !o.points.is_empty() {
        c.curve.points = o.points.clone();
    }
    if let Some(f) = o.modulus {
        c.condition.f = f;
        c.condition.residues = None;
    }
    if !o.residues.is_empty() {
        c.condition.residues = Some(o.residues.clone());
    }
    if let Some(x) = o.xlimit {
        c.x_limit = x;
        if o.checkpoints.is_none() {
            c.checkpoints.clear();
        }
    }
    if let Some(s) = &o.checkpoints {
        c.checkpoints = s
            .split(',')
            .map(|v| v.trim().parse().map_err(|_| LabError::Config(format!("bad checkpoint {v:?}"))))
            .collect::<Result<_, _>>()?;
    }
    if let Some(y) = o.truncation {
        c.truncation = y;
    }
    for s in &o.overrides {
        let (q, d) = parse_pair::<u64>(s, '=', "override")?;
        c.degree_overrides.insert(q, d);
    }
    if let Some(w) = o.workers {
        c.workers = w;
    }
    if let Some(b) = o.probe_budget {
        c.probe_budget = b;
    }
    Ok(c)
}

/// Writes to `--out` when given, otherwise to the configured paths, and
/// to stdout when neither is set.
fn emit(o: &Opts, cfg: &ExperimentConfig, csv: impl Fn() -> String, json: impl Fn() -> String) -> Result<(), LabError> {
    if let Some(path) = &o.out {
        let text = if o.format == Some(Format::Json) { json() } else { csv() };
        std::fs::write(path, text)?;
        return Ok(());
    }
    let mut wrote = false;
    if let Some(p) = &cfg.output.csv {
        std::fs::write(p, csv())?;
        wrote = true;
    }
    if let Some(p) = &cfg.output.json {
        std::fs::write(p, json())?;
        wrote = true;
    }
    if !wrote {
        print!("{}", if o.format == Some(Format::Json) { json() } else { csv() });
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), LabError> {
    if let Command::Selftest = cli.command {
        let checks = lab::selftest();
        for c in &checks {
            println!("{} {}", if c.passed { "PASS" } else { "FAIL" }, c.name);
        }
        return if checks.iter().all(|c| c.passed) {
            Ok(())
        } else {
            Err(LabError::Compute("selftest failed".into()))
        };
    }
    let cfg = build_config(&cli.opts)?;
    let exp = cfg.validate()?;
    let o = &cli.opts;
    match cli.command {
        Command::Count => {
            let s = lab::run_count(&exp)?;
            emit(o, &cfg, || lab::count_csv(&s), || lab::count_json(&s))
        }
        Command::Predict => {
            let p = lab::run_predict(&exp)?;
            let text = lab::predict_json(&p);
            emit(o, &cfg, || text.clone(), || text.clone())
        }
        Command::Compare => {
            let r = lab::run_compare(&exp)?;
            emit(o, &cfg, || lab::compare_csv(&r.rows), || lab::compare_json(&r))
        }
        Command::Probe => {
            let r = lab::run_probe(&exp)?;
            emit(o, &cfg, || lab::probe_csv(&r), || lab::probe_json(&r))
        }
        Command::Selftest => unreachable!(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cyclab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
