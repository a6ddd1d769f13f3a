use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use pradius::campaign::{replay, run_campaign, summarize, CampaignConfig, ReplayParams};
use pradius::inequalities::list_registry;
use pradius::io::read_matrix;
use pradius::schatten::{p_num_radius, schatten_norm, w2_exact, PExponent};
use pradius::transforms::{aluthge_fg, FunctionPair};

#[derive(Parser)]
#[command(name = "pradius", version, about = "Schatten norms, p-numerical radii and an inequality harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one quantity on a matrix file.
    Compute {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, default_value = "2")]
        p: PExponent,
        #[arg(long, value_enum)]
        quantity: Quantity,
        /// t-Aluthge exponent.
        #[arg(long, conflicts_with = "pair")]
        t: Option<f64>,
        /// Scaled power pair `a,c`: f = c x^a, g = x^(1-a)/c.
        #[arg(long)]
        pair: Option<String>,
        #[arg(long, default_value_t = 720)]
        grid: usize,
        #[arg(long)]
        refine: bool,
    },
    /// Run a campaign described by a config file.
    Campaign {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: ReportFormat,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        threads: usize,
        /// Record wall-clock runtime in the report (breaks byte reproducibility).
        #[arg(long)]
        timing: bool,
    },
    /// Regenerate one record from its check id, seed and parameters.
    Replay {
        #[arg(long)]
        check: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// `key=value` pairs: n, p, t, nu, q, c, variant, witness, grid, refine.
        #[arg(long, num_args = 0..)]
        params: Vec<String>,
    },
    /// Print the inequality registry.
    ListChecks {
        #[arg(long, value_enum, default_value = "table")]
        format: ListFormat,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Quantity {
    Schatten,
    Wp,
    W2,
    Aluthge,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum ListFormat {
    Json,
    Table,
}

fn parse_pair(text: &str) -> pradius::Result<FunctionPair> {
    let bad = || pradius::Error::Parse(format!("--pair expects `a,c`, got `{text}`"));
    let (a, c) = text.split_once(',').ok_or_else(bad)?;
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let c: f64 = c.trim().parse().map_err(|_| bad())?;
    FunctionPair::scaled_power(a, c)
}

fn run(cli: Cli) -> pradius::Result<u8> {
    match cli.command {
        Command::Compute {
            matrix,
            p,
            quantity,
            t,
            pair,
            grid,
            refine,
        } => {
            let m = read_matrix(matrix)?;
            match quantity {
                Quantity::Schatten => println!("{}", schatten_norm(&m, p)?),
                Quantity::W2 => println!("{}", w2_exact(&m)),
                Quantity::Wp => {
                    let r = p_num_radius(&m, p, grid, refine)?;
                    println!("[{}, {}]", r.lower, r.upper);
                }
                Quantity::Aluthge => {
                    let pair = match (t, pair) {
                        (_, Some(text)) => parse_pair(&text)?,
                        (t, None) => FunctionPair::power(t.unwrap_or(0.5))?,
                    };
                    println!("{}", pradius::io::matrix_to_json(&aluthge_fg(&m, pair)?));
                }
            }
            Ok(0)
        }
        Command::Campaign {
            config,
            out,
            format,
            threads,
            timing,
        } => {
            let text = std::fs::read_to_string(&config)?;
            let cfg = CampaignConfig::from_json(&text)?;
            let start = Instant::now();
            let mut report = run_campaign(&cfg, threads)?;
            if timing {
                report.runtime_s = Some(start.elapsed().as_secs_f64());
            }
            let mut w = BufWriter::new(File::create(&out)?);
            match format {
                ReportFormat::Json => report.write_json(&mut w)?,
                ReportFormat::Csv => report.write_csv(&mut w)?,
            }
            w.flush()?;
            eprint!("{}", summarize(&report));
            Ok(report.exit_code() as u8)
        }
        Command::Replay { check, seed, params } => {
            let params = ReplayParams::parse(&params)?;
            let rec = replay(&check, seed, &params)?;
            println!("{}", serde_json::to_string_pretty(&rec)?);
            Ok(0)
        }
        Command::ListChecks { format } => {
            let reg = list_registry();
            match format {
                ListFormat::Json => {
                    let mut entries = Vec::with_capacity(reg.len());
                    for e in reg {
                        let mut v = serde_json::to_value(e)?;
                        v["theorem_level"] = e.theorem_level().into();
                        v["variants"] = serde_json::to_value(e.variant_list())?;
                        entries.push(v);
                    }
                    println!("{}", serde_json::to_string_pretty(&entries)?);
                }
                ListFormat::Table => {
                    println!("{:<18} {:>5} {:<12} {:<6} {:<8} description", "id", "arity", "p", "axis", "level");
                    for e in reg {
                        let axis = serde_json::to_value(e.axis)?;
                        let level = if e.theorem_level() { "theorem" } else { "variant" };
                        println!(
                            "{:<18} {:>5} {:<12} {:<6} {:<8} {}",
                            e.id,
                            e.arity,
                            e.p_range.label(),
                            axis.as_str().unwrap_or("-"),
                            level,
                            e.description
                        );
                    }
                }
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors share exit code 1 with config errors
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
