use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::config::{parse_override_args, ScenarioConfig};
use crate::output::{csv_record, emit_outputs, CSV_HEADER};
use crate::scenario::run_scenario;
use crate::verify::{self, Level};
use crate::CliError;

#[derive(Parser, Debug)]
#[command(name = "rsl", version, about = "Resource and quantum speed limits along open-system trajectories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate every bound for each duration of one scenario
    Run {
        /// JSON scenario file
        #[arg(long)]
        config: PathBuf,
        /// Field overrides as `--<key> <value>`, after all other options
        #[arg(trailing_var_arg = true, allow_hyphen_values = true, value_name = "OVERRIDES")]
        overrides: Vec<String>,
    },
    /// Run the Cartesian product of parameter lists over a base scenario
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// `key=v1,v2,...`; repeat for more keys
        #[arg(long = "grid", value_name = "KEY=VALUES", required = true)]
        grid: Vec<String>,
        #[arg(trailing_var_arg = true, allow_hyphen_values = true, value_name = "OVERRIDES")]
        overrides: Vec<String>,
    },
    /// Run the built-in acceptance checks
    Verify {
        #[arg(long, value_enum, default_value_t = LevelArg::Fast)]
        level: LevelArg,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LevelArg {
    Fast,
    Full,
}

/// Entry point with injectable arguments, environment and streams. Returns
/// the process exit code.
pub fn main_with<I, A>(args: I, env_output_dir: Option<PathBuf>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let result = match cli.command {
        Command::Run { config, overrides } => run(&config, &overrides, env_output_dir.as_deref(), out),
        Command::Sweep { config, grid, overrides } => {
            sweep(&config, &grid, &overrides, env_output_dir.as_deref(), out)
        }
        Command::Verify { level } => {
            let level = match level {
                LevelArg::Fast => Level::Fast,
                LevelArg::Full => Level::Full,
            };
            return verify_command(level, out);
        }
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "rsl: {e}");
            e.exit_code()
        }
    }
}

fn run(config: &Path, overrides: &[String], env_dir: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    let pairs = parse_override_args(overrides)?;
    let cfg = ScenarioConfig::from_file(config, &pairs, env_dir)?;
    let run = run_scenario(&cfg)?;
    emit_outputs(&run, &cfg.output_dir)?;
    let _ = writeln!(
        out,
        "{}: {} rows written to {}",
        run.scenario,
        run.reports.len(),
        cfg.output_dir.display()
    );
    if let Some(s) = &run.separable {
        let _ = writeln!(
            out,
            "separable check: oracle {:.6}, search {:.6} (difference {:.3e})",
            s.oracle_value,
            s.search_value,
            s.oracle_value - s.search_value
        );
    }
    Ok(())
}

/// Splits on commas outside brackets and parentheses, so list values such
/// as `[0.5,1]` or `werner(0.3)` stay intact.
fn split_values(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '[' | '(' | '{' => depth += 1,
            ']' | ')' | '}' => depth -= 1,
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur).trim().to_string());
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    out.push(cur.trim().to_string());
    out
}

fn parse_grid(specs: &[String]) -> Result<Vec<(String, Vec<String>)>, CliError> {
    specs
        .iter()
        .map(|g| {
            let (k, v) = g
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("--grid expects key=v1,v2,..., got {g:?}")))?;
            let values = split_values(v);
            if values.iter().any(String::is_empty) {
                return Err(CliError::Usage(format!("--grid {k}: empty value")));
            }
            Ok((k.trim().to_string(), values))
        })
        .collect()
}

fn slug(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '-' { c } else { '_' })
        .collect()
}

fn sweep(
    config: &Path,
    grid: &[String],
    overrides: &[String],
    env_dir: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let axes = parse_grid(grid)?;
    let base = parse_override_args(overrides)?;
    let root = ScenarioConfig::from_file(config, &base, env_dir)?.output_dir;
    let mut combos: Vec<Vec<(String, String)>> = vec![Vec::new()];
    for (key, values) in &axes {
        combos = combos
            .into_iter()
            .flat_map(|c| {
                values.iter().map(move |v| {
                    let mut c = c.clone();
                    c.push((key.clone(), v.clone()));
                    c
                })
            })
            .collect();
    }
    let mut table = csv::Writer::from_writer(Vec::new());
    let header: Vec<&str> = axes.iter().map(|(k, _)| k.as_str()).chain(CSV_HEADER).collect();
    table.write_record(&header).map_err(|e| CliError::Output(e.to_string()))?;
    for combo in &combos {
        let name = combo
            .iter()
            .map(|(k, v)| format!("{}-{}", slug(k), slug(v)))
            .collect::<Vec<_>>()
            .join("_");
        let dir = root.join(&name);
        let mut pairs = base.clone();
        pairs.extend(combo.iter().cloned());
        pairs.push(("output_dir".into(), serde_json::Value::String(dir.display().to_string()).to_string()));
        let cfg = ScenarioConfig::from_file(config, &pairs, None)?;
        let run = run_scenario(&cfg)?;
        emit_outputs(&run, &dir)?;
        for r in &run.reports {
            let row: Vec<String> = combo.iter().map(|(_, v)| v.clone()).chain(csv_record(r)).collect();
            table.write_record(&row).map_err(|e| CliError::Output(e.to_string()))?;
        }
        let _ = writeln!(out, "{name}: {} rows", run.reports.len());
    }
    let bytes = table.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
    let path = root.join("sweep.csv");
    std::fs::write(&path, bytes).map_err(|source| CliError::Io { path: path.clone(), source })?;
    let _ = writeln!(out, "{} scenarios, summary in {}", combos.len(), path.display());
    Ok(())
}

fn verify_command(level: Level, out: &mut dyn Write) -> i32 {
    let checks = verify::run(level);
    let mut failed = 0;
    for c in &checks {
        let _ = write!(out, "{c}");
        if !c.passed {
            failed += 1;
        }
    }
    let _ = writeln!(out, "{} of {} checks passed", checks.len() - failed, checks.len());
    i32::from(failed > 0)
}
