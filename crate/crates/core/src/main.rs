use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use callias::harness::{
    builtin, builtin_names, emit_report, load_scenario, report_text, run_scenario, sweep_scenario,
    Format, Scenario, Stage,
};
use callias::Error;

#[derive(Parser)]
#[command(
    name = "callias",
    version,
    about = "Analytic versus topological index of Callias-type operators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one built-in scenario or scenario file.
    Run {
        scenario: String,
        #[command(flatten)]
        common: Common,
    },
    /// List the built-in scenarios.
    List,
    /// Recompute the analytic index at several grid resolutions.
    Sweep {
        scenario: String,
        /// Grid points per axis, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        resolutions: Vec<usize>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory; defaults to `out/<scenario name>`.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "json", value_parser = |s: &str| s.parse::<Format>().map_err(|e| e.to_string()))]
    format: Format,
    /// Comma-separated `key=value` tolerance overrides.
    #[arg(long)]
    tol_overrides: Option<String>,
}

impl Common {
    fn scenario(&self, name: &str) -> Result<Scenario, Error> {
        let mut s = load_scenario(name)?;
        if let Some(seed) = self.seed {
            s.seed = seed;
        }
        if let Some(o) = &self.tol_overrides {
            s.apply_overrides(o)?;
        }
        Ok(s)
    }

    fn out_dir(&self, s: &Scenario) -> PathBuf {
        self.out
            .clone()
            .unwrap_or_else(|| PathBuf::from("out").join(&s.name))
    }
}

fn fail(stage: Stage, e: &Error) -> ExitCode {
    eprintln!("error ({stage:?}): {e}");
    ExitCode::from(stage.exit_code() as u8)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match Cli::parse().command {
        Command::List => {
            for name in builtin_names() {
                let s = builtin(name).expect("listed names resolve");
                let analytic = if s.kind.has_analytic() {
                    "analytic + topological"
                } else {
                    "topological only"
                };
                println!("{name:<22} {:<18} {analytic}", format!("{:?}", s.kind));
            }
            ExitCode::SUCCESS
        }
        Command::Run { scenario, common } => {
            let s = match common.scenario(&scenario) {
                Ok(s) => s,
                Err(e) => return fail(Stage::of_setup_error(&e), &e),
            };
            let report = run_scenario(&s);
            print!("{}", report_text(&report));
            match emit_report(&report, common.format, &common.out_dir(&s)) {
                Ok(files) => {
                    for f in files {
                        println!("wrote {}", f.display());
                    }
                }
                Err(e) => return fail(Stage::Io, &e),
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Command::Sweep {
            scenario,
            resolutions,
            common,
        } => {
            let s = match common.scenario(&scenario) {
                Ok(s) => s,
                Err(e) => return fail(Stage::of_setup_error(&e), &e),
            };
            let points = match sweep_scenario(&s, &resolutions) {
                Ok(p) => p,
                Err(e @ Error::Validation(_)) => return fail(Stage::Validation, &e),
                Err(e) => return fail(Stage::Analytic, &e),
            };
            for p in &points {
                println!(
                    "N = {:<6} index {:<4} gap ratio {}",
                    p.resolution,
                    p.index.map_or("?".into(), |i| i.to_string()),
                    p.gap_ratio.map_or("-".into(), |g| format!("{g:.1}"))
                );
            }
            let dir = common.out_dir(&s);
            let written = match common.format {
                Format::Text => return ExitCode::SUCCESS,
                Format::Json => {
                    let body = serde_json::to_string_pretty(&points)
                        .expect("sweep points serialize")
                        + "\n";
                    let path = dir.join("sweep.json");
                    std::fs::create_dir_all(&dir)
                        .and_then(|_| std::fs::write(&path, body))
                        .map(|_| path)
                }
                Format::Csv => {
                    let mut body = String::from("resolution,index,gap_ratio\n");
                    for p in &points {
                        body += &format!(
                            "{},{},{}\n",
                            p.resolution,
                            p.index.map_or(String::new(), |i| i.to_string()),
                            p.gap_ratio.map_or(String::new(), |g| g.to_string())
                        );
                    }
                    let path = dir.join("sweep.csv");
                    std::fs::create_dir_all(&dir)
                        .and_then(|_| std::fs::write(&path, body))
                        .map(|_| path)
                }
            };
            match written {
                Ok(path) => {
                    println!("wrote {}", path.display());
                    ExitCode::SUCCESS
                }
                Err(e) => fail(
                    Stage::Io,
                    &Error::Io {
                        path: dir,
                        source: e,
                    },
                ),
            }
        }
    }
}
