//! File formats, experiment configuration, seeded Monte-Carlo replication and
//! CSV reporting.
//!
//! Matrix files hold a `m1 m2` header line followed by `m1` rows of `m2`
//! numbers; lines whose first non-blank character is `#` are ignored.
//! Config files are flat `key = value` lines with the same comment rule.

use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::dual_player::solve_both_players;
use crate::error::{Error, Result};
use crate::game::{distance_to_ne_set, generate_instance, suboptimality_gap, GameMatrix, InstanceKind, Side};
use crate::linalg::{augmented_game_matrix, singular_values, Matrix};
use crate::param_est::{estimate_delta, estimate_sigma, min_nonzero_gap_enum};
use crate::resolving::{run_two_phase, ResolveConfig};
use crate::sampling::{derive_stream, empirical_matrix, uniform_budget_scan, BanditOracle, NoiseModel};
use crate::support_id::{identify_support, SupportPair};

/// First line of every CSV this module writes.
pub const CSV_VERSION_LINE: &str = "# saddle experiment csv v1";
pub const CSV_COLUMNS: &str =
    "instance,algorithm,noise,horizon,replications,bias,mean_gap,gap_of_mean,success_fraction,mean_samples,mean_estimate";

/// Sample count standing in for "infinitely many" when identifying the
/// support of a known matrix.
const EXACT_SAMPLES: f64 = 1e30;

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

/// Meaningful lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(k, line)| {
        let t = line.trim_start();
        (!t.is_empty() && !t.starts_with('#')).then_some((k + 1, line))
    })
}

/// Whitespace-separated tokens with their 1-based character columns.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut rest = line;
    let mut offset = 0;
    std::iter::from_fn(move || {
        let start = rest.find(|c: char| !c.is_whitespace())?;
        let tail = &rest[start..];
        let len = tail.find(char::is_whitespace).unwrap_or(tail.len());
        let col = line[..offset + start].chars().count() + 1;
        let tok = &tail[..len];
        offset += start + len;
        rest = &tail[len..];
        Some((col, tok))
    })
}

pub fn parse_game(text: &str, path: &Path) -> Result<GameMatrix> {
    let err = |line: usize, column: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        column,
        message,
    };
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| err(1, 1, "missing `m1 m2` header".into()))?;
    let dims: Vec<(usize, &str)> = tokens(header).collect();
    if dims.len() != 2 {
        return Err(err(
            hline,
            1,
            format!("header needs two dimensions, found {} fields", dims.len()),
        ));
    }
    let mut parsed = [0usize; 2];
    for (k, &(col, tok)) in dims.iter().enumerate() {
        parsed[k] = match tok.parse::<usize>() {
            Ok(v) if v > 0 => v,
            _ => return Err(err(hline, col, format!("expected a positive integer, found `{tok}`"))),
        };
    }
    let [m1, m2] = parsed;
    let mut data = Vec::with_capacity(m1 * m2);
    let mut last_line = hline;
    for row in 0..m1 {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| err(last_line + 1, 1, format!("expected {m1} rows, found {row}")))?;
        last_line = ln;
        let mut count = 0;
        for (col, tok) in tokens(line) {
            if count == m2 {
                return Err(err(ln, col, format!("row {} has more than {m2} entries", row + 1)));
            }
            let v = tok
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| err(ln, col, format!("expected a finite number, found `{tok}`")))?;
            data.push(v);
            count += 1;
        }
        if count < m2 {
            return Err(err(
                ln,
                line.chars().count() + 1,
                format!("row {} has {count} of {m2} entries", row + 1),
            ));
        }
    }
    if let Some((ln, line)) = lines.next() {
        let col = tokens(line).next().map_or(1, |(c, _)| c);
        return Err(err(ln, col, format!("unexpected content after {m1} rows")));
    }
    GameMatrix::new(Matrix::new(m1, m2, data)?)
}

pub fn load_game(path: impl AsRef<Path>) -> Result<GameMatrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    parse_game(&text, path)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    SupportId,
    Resolve,
    BothPlayers,
    EstimateDelta,
    EstimateSigma,
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "support_id" => Self::SupportId,
            "resolve" => Self::Resolve,
            "both_players" => Self::BothPlayers,
            "estimate_delta" => Self::EstimateDelta,
            "estimate_sigma" => Self::EstimateSigma,
            _ => return Err(Error::Config(format!("unknown algorithm `{s}`"))),
        })
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::SupportId => "support_id",
            Self::Resolve => "resolve",
            Self::BothPlayers => "both_players",
            Self::EstimateDelta => "estimate_delta",
            Self::EstimateSigma => "estimate_sigma",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InstanceSpec {
    Generated {
        kind: InstanceKind,
        dims: (usize, usize),
        seed: u64,
    },
    File(PathBuf),
}

impl InstanceSpec {
    pub fn load(&self) -> Result<GameMatrix> {
        match self {
            Self::Generated { kind, dims, seed } => generate_instance(*kind, *dims, *seed),
            Self::File(p) => load_game(p),
        }
    }

    pub fn id(&self) -> String {
        match self {
            Self::Generated { kind, dims, seed } => match kind {
                InstanceKind::MatchingPennies | InstanceKind::RockPaperScissors | InstanceKind::Dominant => {
                    kind.to_string()
                }
                _ => format!("{kind}[{}x{};seed={seed}]", dims.0, dims.1),
            },
            Self::File(p) => p.display().to_string(),
        }
    }
}

/// What one horizon `T` means per algorithm: the resolving horizon for
/// `resolve`/`both_players`, the uniform budget `N` for `support_id`, and
/// the sample cap for the two estimators.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub instance: InstanceSpec,
    pub noise: NoiseModel,
    pub algorithm: Algorithm,
    pub eps: f64,
    pub n1: u64,
    pub horizons: Vec<u64>,
    pub replications: u64,
    pub master_seed: u64,
    pub constant: Option<f64>,
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(instance: InstanceSpec, algorithm: Algorithm, horizons: Vec<u64>) -> Self {
        Self {
            instance,
            noise: NoiseModel::Noiseless,
            algorithm,
            eps: 0.1,
            n1: 400,
            horizons,
            replications: 1,
            master_seed: 0,
            constant: None,
            output: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::Config("replications must be at least 1".into()));
        }
        if self.horizons.is_empty() {
            return Err(Error::Config("horizons must list at least one value".into()));
        }
        if self.horizons.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("horizons must be strictly increasing".into()));
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::Config(format!("eps must lie in (0, 1), got {}", self.eps)));
        }
        if let InstanceSpec::File(p) = &self.instance {
            if !p.is_file() {
                return Err(Error::Config(format!("matrix file {} does not exist", p.display())));
            }
        }
        Ok(())
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let err = |line: usize, column: usize, message: String| Error::Parse {
            path: path.to_path_buf(),
            line,
            column,
            message,
        };
        let mut kind = None;
        let mut dims = None;
        let mut instance_seed = 0;
        let mut matrix = None;
        let mut noise = NoiseModel::Noiseless;
        let mut algorithm = None;
        let mut eps = 0.1;
        let mut n1 = 400;
        let mut horizons = None;
        let mut replications = 1;
        let mut master_seed = 0;
        let mut constant = None;
        let mut output = None;
        let base = path.parent().unwrap_or(Path::new(""));

        for (ln, line) in content_lines(text) {
            let Some(eq) = line.find('=') else {
                return Err(err(ln, 1, "expected `key = value`".into()));
            };
            let key = line[..eq].trim();
            let raw = &line[eq + 1..];
            let value = raw.trim();
            let vcol = line[..eq + 1].chars().count() + raw.chars().take_while(|c| c.is_whitespace()).count() + 1;
            let kcol = line.chars().take_while(|c| c.is_whitespace()).count() + 1;
            let bad = |what: &str| err(ln, vcol, format!("invalid {what} `{value}` for `{key}`"));
            macro_rules! num {
                ($t:ty, $what:expr) => {
                    value.parse::<$t>().map_err(|_| bad($what))?
                };
            }
            match key {
                "instance" => kind = Some(value.parse::<InstanceKind>().map_err(|_| bad("instance kind"))?),
                "dims" => {
                    let (a, b) = value.split_once('x').ok_or_else(|| bad("dimensions"))?;
                    let a = a.trim().parse::<usize>().map_err(|_| bad("dimensions"))?;
                    let b = b.trim().parse::<usize>().map_err(|_| bad("dimensions"))?;
                    dims = Some((a, b));
                }
                "instance_seed" => instance_seed = num!(u64, "integer"),
                "matrix" => matrix = Some(base.join(value)),
                "noise" => noise = value.parse().map_err(|_| bad("noise model"))?,
                "algorithm" => algorithm = Some(value.parse::<Algorithm>().map_err(|_| bad("algorithm"))?),
                "eps" => eps = num!(f64, "number"),
                "n1" => n1 = num!(u64, "integer"),
                "horizons" => {
                    let list: std::result::Result<Vec<u64>, _> =
                        value.split(',').map(|s| s.trim().parse::<u64>()).collect();
                    horizons = Some(list.map_err(|_| bad("horizon list"))?);
                }
                "replications" => replications = num!(u64, "integer"),
                "master_seed" => master_seed = num!(u64, "integer"),
                "constant" => constant = Some(num!(f64, "number")),
                "output" => output = Some(base.join(value)),
                _ => return Err(err(ln, kcol, format!("unknown key `{key}`"))),
            }
        }

        let instance = match (kind, matrix) {
            (Some(_), Some(_)) => return Err(Error::Config("set either `instance` or `matrix`, not both".into())),
            (None, None) => return Err(Error::Config("missing `instance` or `matrix`".into())),
            (None, Some(p)) => InstanceSpec::File(p),
            (Some(kind), None) => {
                let dims = match (dims, kind) {
                    (Some(d), _) => d,
                    (None, InstanceKind::MatchingPennies | InstanceKind::Dominant) => (2, 2),
                    (None, InstanceKind::RockPaperScissors) => (3, 3),
                    (None, _) => return Err(Error::Config(format!("`dims` is required for {kind}"))),
                };
                InstanceSpec::Generated {
                    kind,
                    dims,
                    seed: instance_seed,
                }
            }
        };
        let cfg = Self {
            instance,
            noise,
            algorithm: algorithm.ok_or_else(|| Error::Config("missing `algorithm`".into()))?,
            eps,
            n1,
            horizons: horizons.ok_or_else(|| Error::Config("missing `horizons`".into()))?,
            replications,
            master_seed,
            constant,
            output,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
        Self::parse(&text, path)
    }
}

/// Full-information reference quantities for scoring replications.
#[derive(Debug, Clone, PartialEq)]
pub struct Reference {
    pub game: GameMatrix,
    /// The support the elimination returns on the exact matrix.
    pub support: SupportPair,
    /// `min(δ₁, δ₂)` of the exact matrix, when enumeration is possible.
    pub delta: Option<f64>,
    /// Smallest singular value of the augmented support matrix, when square.
    pub sigma: Option<f64>,
}

impl Reference {
    pub fn new(game: GameMatrix) -> Result<Self> {
        let (support, _) = identify_support(game.matrix(), EXACT_SAMPLES, 0.5)?;
        let delta = min_nonzero_gap_enum(game.matrix()).ok().map(|(a, b)| a.min(b));
        let sigma = support.is_square().then(|| {
            let m = augmented_game_matrix(game.matrix(), &support.rows, &support.cols).expect("valid support");
            singular_values(&m).smallest
        });
        Ok(Self {
            game,
            support,
            delta,
            sigma,
        })
    }
}

/// What a single replication produced.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationOutcome {
    /// Row strategy, then column strategy for `both_players`.
    pub strategies: Vec<Vec<f64>>,
    pub support_correct: bool,
    pub samples: u64,
    pub estimate: Option<f64>,
}

/// Oracle stream of replication `r` at horizon `t`.
pub fn replication_stream(master_seed: u64, t: u64, r: u64) -> u64 {
    derive_stream(&[master_seed, t, r])
}

fn within_factor_two(estimate: f64, truth: Option<f64>) -> bool {
    truth.is_some_and(|t| estimate / 2.0 <= t && t <= 2.0 * estimate)
}

pub fn run_replication(cfg: &ExperimentConfig, reference: &Reference, t: u64, r: u64) -> Result<ReplicationOutcome> {
    let stream = replication_stream(cfg.master_seed, t, r);
    let game = reference.game.clone();
    let mut oracle = BanditOracle::new(game.clone(), cfg.noise, cfg.master_seed, stream);
    let resolve_cfg = ResolveConfig {
        constant_override: cfg.constant,
        ..ResolveConfig::new(cfg.eps, cfg.n1).with_horizon(t)
    };
    let outcome = match cfg.algorithm {
        Algorithm::SupportId => {
            let h = uniform_budget_scan(&mut oracle, t)?;
            let (a_hat, _) = empirical_matrix(&h);
            let (sp, _) = identify_support(&a_hat, t as f64, cfg.eps)?;
            ReplicationOutcome {
                strategies: Vec::new(),
                support_correct: sp == reference.support,
                samples: t,
                estimate: None,
            }
        }
        Algorithm::Resolve => {
            let out = run_two_phase(&mut oracle, &resolve_cfg)?;
            ReplicationOutcome {
                support_correct: out.support == reference.support,
                samples: out.total_samples,
                strategies: vec![out.x_bar],
                estimate: Some(out.sigma_prime),
            }
        }
        Algorithm::BothPlayers => {
            let (x, y, report) = solve_both_players(stream, &game, cfg.noise, &resolve_cfg)?;
            ReplicationOutcome {
                strategies: vec![x, y],
                support_correct: report.row.support == reference.support,
                samples: report.total_samples,
                estimate: None,
            }
        }
        Algorithm::EstimateDelta => {
            let est = estimate_delta(&mut oracle, cfg.eps, t)?;
            ReplicationOutcome {
                strategies: Vec::new(),
                support_correct: within_factor_two(est.delta_hat, reference.delta),
                samples: est.samples_used,
                estimate: Some(est.delta_hat),
            }
        }
        Algorithm::EstimateSigma => {
            let est = estimate_sigma(&mut oracle, &reference.support, cfg.eps, t)?;
            ReplicationOutcome {
                strategies: Vec::new(),
                support_correct: within_factor_two(est.sigma_hat, reference.sigma),
                samples: est.samples_used,
                estimate: Some(est.sigma_hat),
            }
        }
    };
    Ok(outcome)
}

/// One CSV row. `bias` and the gaps are absent for algorithms without a
/// strategy output; for estimators `success_fraction` is the factor-two
/// containment rate of the true constant.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRecord {
    pub instance: String,
    pub algorithm: Algorithm,
    pub noise: NoiseModel,
    pub horizon: u64,
    pub replications: u64,
    /// Distance from the replication mean of `x̄` to the equilibrium set.
    pub bias: Option<f64>,
    pub mean_gap: Option<f64>,
    pub gap_of_mean: Option<f64>,
    pub success_fraction: f64,
    pub mean_samples: f64,
    pub mean_estimate: Option<f64>,
    /// Reported on stderr only, never written to CSV.
    pub wall_time: Duration,
}

fn side_of(k: usize) -> Side {
    if k == 0 {
        Side::Row
    } else {
        Side::Column
    }
}

/// Reduces outcomes in index order, so the result is independent of the
/// order replications were executed in.
pub fn aggregate(
    cfg: &ExperimentConfig,
    reference: &Reference,
    t: u64,
    outcomes: &[ReplicationOutcome],
) -> Result<ExperimentRecord> {
    let r = outcomes.len() as f64;
    let sides = outcomes.first().map_or(0, |o| o.strategies.len());
    let (mut bias, mut mean_gap, mut gap_of_mean) = (None, None, None);
    if sides > 0 {
        let (mut b2, mut mg, mut gm) = (0.0, 0.0, 0.0);
        for k in 0..sides {
            let side = side_of(k);
            let dim = outcomes[0].strategies[k].len();
            let mut mean = vec![0.0; dim];
            let mut gap_sum = 0.0;
            for o in outcomes {
                for (m, v) in mean.iter_mut().zip(&o.strategies[k]) {
                    *m += v;
                }
                gap_sum += suboptimality_gap(&reference.game, &o.strategies[k], side)?;
            }
            mean.iter_mut().for_each(|m| *m /= r);
            b2 += distance_to_ne_set(&reference.game, &mean, side)?.powi(2);
            mg += gap_sum / r;
            gm += suboptimality_gap(&reference.game, &mean, side)?;
        }
        bias = Some(b2.sqrt());
        mean_gap = Some(mg);
        gap_of_mean = Some(gm);
    }
    let success = outcomes.iter().filter(|o| o.support_correct).count() as f64 / r;
    let mean_samples = outcomes.iter().map(|o| o.samples as f64).sum::<f64>() / r;
    let mean_estimate = outcomes.iter().map(|o| o.estimate).sum::<Option<f64>>().map(|s| s / r);
    Ok(ExperimentRecord {
        instance: cfg.instance.id(),
        algorithm: cfg.algorithm,
        noise: cfg.noise,
        horizon: t,
        replications: outcomes.len() as u64,
        bias,
        mean_gap,
        gap_of_mean,
        success_fraction: success,
        mean_samples,
        mean_estimate,
        wall_time: Duration::ZERO,
    })
}

fn thread_pool(workers: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        if w == 0 {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        b = b.num_threads(w);
    }
    b.build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))
}

/// Runs every `(T, r)` pair on a pool of `workers` threads (all cores when
/// `None`) and writes the CSV to `cfg.output` if set.
pub fn run_experiment(cfg: &ExperimentConfig, workers: Option<usize>) -> Result<Vec<ExperimentRecord>> {
    cfg.validate()?;
    let reference = Reference::new(cfg.instance.load()?)?;
    let pool = thread_pool(workers)?;
    let mut records = Vec::with_capacity(cfg.horizons.len());
    for &t in &cfg.horizons {
        let start = Instant::now();
        let outcomes: Vec<Result<ReplicationOutcome>> = pool.install(|| {
            (0..cfg.replications)
                .into_par_iter()
                .map(|r| {
                    run_replication(cfg, &reference, t, r).map_err(|e| Error::Replication {
                        horizon: t,
                        replication: r,
                        source: Box::new(e),
                    })
                })
                .collect()
        });
        let outcomes = outcomes.into_iter().collect::<Result<Vec<_>>>()?;
        let mut rec = aggregate(cfg, &reference, t, &outcomes)?;
        rec.wall_time = start.elapsed();
        records.push(rec);
    }
    if let Some(path) = &cfg.output {
        write_file(path, &records_csv(&records))?;
    }
    Ok(records)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

pub fn records_csv(records: &[ExperimentRecord]) -> String {
    let mut out = format!("{CSV_VERSION_LINE}\n{CSV_COLUMNS}\n");
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            csv_field(&r.instance),
            r.algorithm,
            csv_field(&r.noise.to_string()),
            r.horizon,
            r.replications,
            opt(r.bias),
            opt(r.mean_gap),
            opt(r.gap_of_mean),
            r.success_fraction,
            r.mean_samples,
            opt(r.mean_estimate),
        )
        .expect("writing to a String");
    }
    out
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| io_error(path, e))
}

/// Least-squares slope of `ln y` on `ln x` and its standard error; the error
/// is `None` with only two points.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<(f64, Option<f64>)> {
    if points.len() < 2 || points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return None;
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let se = (points.len() > 2).then(|| {
        let sse: f64 = xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| (y - my - slope * (x - mx)).powi(2))
            .sum();
        (sse / (n - 2.0) / sxx).sqrt()
    });
    Some((slope, se))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BiasCurve {
    pub records: Vec<ExperimentRecord>,
    pub points: Vec<(u64, f64)>,
    pub slope: Option<f64>,
    pub slope_stderr: Option<f64>,
    /// Why no slope was fitted, if none was.
    pub skipped: Option<String>,
}

impl BiasCurve {
    /// Two-column `T bias` text for plotting tools.
    pub fn data_file(&self) -> String {
        let mut out = String::from("# T bias\n");
        for (t, b) in &self.points {
            writeln!(out, "{t} {b}").expect("writing to a String");
        }
        if let Some(s) = self.slope {
            writeln!(out, "# slope {s}").expect("writing to a String");
        }
        if let Some(se) = self.slope_stderr {
            writeln!(out, "# slope_stderr {se}").expect("writing to a String");
        }
        out
    }
}

/// Runs the sweep and fits the log-log decay of the bias. The slope is not
/// fitted for noiseless oracles, where the bias carries no decay signal.
pub fn bias_curve(cfg: &ExperimentConfig, workers: Option<usize>) -> Result<BiasCurve> {
    if cfg.horizons.len() < 2 {
        return Err(Error::Config("a bias curve needs at least two horizons".into()));
    }
    if !matches!(cfg.algorithm, Algorithm::Resolve | Algorithm::BothPlayers) {
        return Err(Error::Config(format!(
            "a bias curve needs a strategy output, not {}",
            cfg.algorithm
        )));
    }
    let records = run_experiment(cfg, workers)?;
    let points: Vec<(u64, f64)> = records
        .iter()
        .map(|r| (r.horizon, r.bias.expect("strategy output")))
        .collect();
    let (mut slope, mut slope_stderr, mut skipped) = (None, None, None);
    if cfg.noise == NoiseModel::Noiseless {
        skipped = Some("noiseless oracle".to_string());
    } else {
        let pts: Vec<(f64, f64)> = points.iter().map(|&(t, b)| (t as f64, b)).collect();
        match loglog_slope(&pts) {
            Some((s, se)) => {
                slope = Some(s);
                slope_stderr = se;
            }
            None => skipped = Some("zero bias at some horizon".to_string()),
        }
    }
    let curve = BiasCurve {
        records,
        points,
        slope,
        slope_stderr,
        skipped,
    };
    if let Some(path) = &cfg.output {
        write_file(&path.with_extension("dat"), &curve.data_file())?;
    }
    Ok(curve)
}
