use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use saddle::game::exact_nash;
use saddle::harness::{bias_curve, load_game, records_csv, run_experiment, write_file, ExperimentConfig, Reference};
use saddle::param_est::{estimate_delta, estimate_sigma, DEFAULT_SAMPLE_CAP};
use saddle::resolving::{run_two_phase, write_trace_csv, ResolveConfig};
use saddle::sampling::{empirical_matrix, uniform_budget_scan, BanditOracle, NoiseModel};
use saddle::support_id::{identify_support, StepOutcome, SupportPair};
use saddle::{Error, Result};

/// Nash equilibria of zero-sum matrix games from noisy bandit feedback.
#[derive(Parser)]
#[command(name = "saddle", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// CSV output path.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Noise model: noiseless, bernoulli_sign, uniform_slack, truncated_gaussian(s).
    #[arg(long, global = true)]
    noise: Option<NoiseModel>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for experiments; all cores by default.
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Exact equilibrium by linear programming.
    Solve { matrix: PathBuf },
    /// Support identification from a uniform scan of N samples.
    Support {
        matrix: PathBuf,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        eps: f64,
    },
    /// Two-phase resolving; --out writes the per-step trace.
    Resolve {
        matrix: PathBuf,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        n1: u64,
        /// Number of resolving steps, replacing the formula.
        #[arg(long)]
        horizon: Option<u64>,
        /// Leading constant of the horizon formula.
        #[arg(long)]
        constant: Option<f64>,
    },
    /// Estimate the minimum nonzero gap.
    EstimateDelta {
        matrix: PathBuf,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = DEFAULT_SAMPLE_CAP)]
        cap: u64,
    },
    /// Estimate the smallest singular value on a support.
    EstimateSigma {
        matrix: PathBuf,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = DEFAULT_SAMPLE_CAP)]
        cap: u64,
        /// Row support, comma separated; defaults to the exact support.
        #[arg(long, value_delimiter = ',')]
        rows: Option<Vec<usize>>,
        #[arg(long, value_delimiter = ',')]
        cols: Option<Vec<usize>>,
    },
    /// Monte-Carlo experiment from a config file.
    Experiment { config: PathBuf },
    /// Bias sweep with a fitted log-log slope.
    BiasCurve { config: PathBuf },
}

fn vec_str(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn noise_or_default(common: &Common) -> NoiseModel {
    common.noise.unwrap_or(NoiseModel::Noiseless)
}

fn oracle(matrix: &Path, common: &Common) -> Result<BanditOracle> {
    let g = load_game(matrix)?;
    Ok(BanditOracle::new(
        g,
        noise_or_default(common),
        common.seed.unwrap_or(0),
        0,
    ))
}

fn emit(common: &Common, csv: &str) -> Result<()> {
    match &common.out {
        Some(p) => write_file(p, csv),
        None => Ok(()),
    }
}

fn experiment_config(path: &Path, common: &Common) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::load(path)?;
    if let Some(n) = common.noise {
        cfg.noise = n;
    }
    if let Some(s) = common.seed {
        cfg.master_seed = s;
    }
    if let Some(o) = &common.out {
        cfg.output = Some(o.clone());
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<String> {
    let common = &cli.common;
    let mut out = String::new();
    match &cli.command {
        Command::Solve { matrix } => {
            let g = load_game(matrix)?;
            let c = exact_nash(&g);
            writeln!(out, "value {}", c.value).unwrap();
            writeln!(out, "x* {}", vec_str(&c.x_star)).unwrap();
            writeln!(out, "y* {}", vec_str(&c.y_star)).unwrap();
            let sp = SupportPair::new(c.row_support(), c.column_support())?;
            writeln!(out, "support {sp}").unwrap();
            let mut csv = String::from("side,index,probability\n");
            for (side, v) in [("row", &c.x_star), ("column", &c.y_star)] {
                for (k, p) in v.iter().enumerate() {
                    writeln!(csv, "{side},{k},{p}").unwrap();
                }
            }
            emit(common, &csv)?;
        }
        Command::Support { matrix, n, eps } => {
            let mut o = oracle(matrix, common)?;
            let h = uniform_budget_scan(&mut o, *n)?;
            let (a_hat, _) = empirical_matrix(&h);
            let (sp, report) = identify_support(&a_hat, *n as f64, *eps)?;
            writeln!(out, "support {sp}").unwrap();
            writeln!(out, "value {}", report.value).unwrap();
            writeln!(out, "terminated_by {:?}", report.terminated_by).unwrap();
            let mut csv = String::from("phase,index,outcome,value,sigma,threshold\n");
            for s in &report.row_trace {
                writeln!(csv, "row,{},{:?},{},,", s.index, s.outcome, s.value).unwrap();
            }
            for s in &report.column_trace {
                if s.outcome == StepOutcome::NotVisited {
                    writeln!(csv, "column,{},{:?},,,", s.index, s.outcome).unwrap();
                } else {
                    writeln!(
                        csv,
                        "column,{},{:?},{},{},{}",
                        s.index, s.outcome, s.value, s.sigma, s.threshold
                    )
                    .unwrap();
                }
            }
            emit(common, &csv)?;
        }
        Command::Resolve {
            matrix,
            eps,
            n1,
            horizon,
            constant,
        } => {
            let mut o = oracle(matrix, common)?;
            let cfg = ResolveConfig {
                horizon_override: *horizon,
                constant_override: *constant,
                trace: common.out.is_some(),
                ..ResolveConfig::new(*eps, *n1)
            };
            let r = run_two_phase(&mut o, &cfg)?;
            writeln!(out, "support {}", r.support).unwrap();
            writeln!(out, "x_bar {}", vec_str(&r.x_bar)).unwrap();
            writeln!(out, "sigma_prime {}", r.sigma_prime).unwrap();
            writeln!(
                out,
                "n1 {} n2 {} horizon {} doubling_rounds {}",
                r.n1, r.n2, r.horizon, r.doubling_rounds
            )
            .unwrap();
            writeln!(out, "total_samples {}", r.total_samples).unwrap();
            writeln!(
                out,
                "clipped_steps {} fallback_steps {}",
                r.clip_count, r.fallback_count
            )
            .unwrap();
            if let Some(d) = &r.diagnostics {
                let tau = d.tau.map_or("none".to_string(), |t| t.to_string());
                writeln!(
                    out,
                    "kappa {} eta {} tau {} n0_prime {}",
                    d.kappa, d.eta, tau, d.n0_prime
                )
                .unwrap();
            }
            if let (Some(p), Some(trace)) = (&common.out, &r.trace) {
                let mut buf = Vec::new();
                write_trace_csv(&mut buf, trace).expect("writing to memory");
                write_file(p, &String::from_utf8(buf).expect("ascii csv"))?;
            }
        }
        Command::EstimateDelta { matrix, eps, cap } => {
            let mut o = oracle(matrix, common)?;
            let e = estimate_delta(&mut o, *eps, *cap)?;
            writeln!(out, "delta_hat {}", e.delta_hat).unwrap();
            writeln!(out, "delta1_hat {} delta2_hat {}", e.delta1_hat, e.delta2_hat).unwrap();
            writeln!(out, "samples_used {}", e.samples_used).unwrap();
            emit(
                common,
                &format!(
                    "delta_hat,delta1_hat,delta2_hat,samples_used\n{},{},{},{}\n",
                    e.delta_hat, e.delta1_hat, e.delta2_hat, e.samples_used
                ),
            )?;
        }
        Command::EstimateSigma {
            matrix,
            eps,
            cap,
            rows,
            cols,
        } => {
            let mut o = oracle(matrix, common)?;
            let sp = match (rows, cols) {
                (Some(r), Some(c)) => SupportPair::new(r.clone(), c.clone())?,
                (None, None) => Reference::new(load_game(matrix)?)?.support,
                _ => return Err(Error::BadArguments("give both --rows and --cols or neither".into())),
            };
            let e = estimate_sigma(&mut o, &sp, *eps, *cap)?;
            writeln!(out, "support {sp}").unwrap();
            writeln!(out, "sigma_hat {}", e.sigma_hat).unwrap();
            writeln!(out, "samples_used {}", e.samples_used).unwrap();
            emit(
                common,
                &format!("sigma_hat,samples_used\n{},{}\n", e.sigma_hat, e.samples_used),
            )?;
        }
        Command::Experiment { config } => {
            let cfg = experiment_config(config, common)?;
            let records = run_experiment(&cfg, common.workers)?;
            for r in &records {
                eprintln!("horizon {}: {:.3}s", r.horizon, r.wall_time.as_secs_f64());
            }
            out.push_str(&records_csv(&records));
        }
        Command::BiasCurve { config } => {
            let cfg = experiment_config(config, common)?;
            let curve = bias_curve(&cfg, common.workers)?;
            out.push_str(&curve.data_file());
            if let Some(why) = &curve.skipped {
                writeln!(out, "# slope skipped: {why}").unwrap();
            }
        }
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_algorithmic() { 3 } else { 2 })
        }
    }
}
