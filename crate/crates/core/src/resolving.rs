//! The two-phase resolving algorithm: a doubling search for a square support,
//! then repeated solves of the empirical support system with a self-correcting
//! right-hand side, averaged over the horizon.

use std::io::Write;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{augmented_game_matrix, lu_solve, norm2, singular_values};
use crate::param_est::{estimate_sigma, DEFAULT_SAMPLE_CAP};
use crate::sampling::{empirical_matrix, uniform_budget_scan, BanditOracle, SampleHistory};
use crate::support_id::{identify_support, SupportPair};

/// Leading constant of the horizon formula.
pub const HORIZON_CONSTANT: f64 = 4120.0;
pub const DEFAULT_RADIUS: f64 = 4.0;
pub const MAX_DOUBLINGS: u32 = 30;

#[derive(Debug, Clone, PartialEq)]
pub struct ResolveConfig {
    pub eps: f64,
    pub n1: u64,
    /// Projection radius `L`.
    pub radius: f64,
    /// Replaces the formula for `N − N₂`.
    pub horizon_override: Option<u64>,
    /// Replaces the leading constant of the formula.
    pub constant_override: Option<f64>,
    pub trace: bool,
    pub sigma_sample_cap: u64,
}

impl ResolveConfig {
    pub fn new(eps: f64, n1: u64) -> Self {
        Self {
            eps,
            n1,
            radius: DEFAULT_RADIUS,
            horizon_override: None,
            constant_override: None,
            trace: false,
            sigma_sample_cap: DEFAULT_SAMPLE_CAP,
        }
    }

    pub fn with_horizon(mut self, steps: u64) -> Self {
        self.horizon_override = Some(steps);
        self
    }

    fn validate(&self, m: usize) -> Result<()> {
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::BadArguments(format!("eps must lie in (0, 1), got {}", self.eps)));
        }
        if self.n1 < m as u64 {
            return Err(Error::BudgetTooSmall {
                budget: self.n1,
                entries: m as u64,
            });
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(Error::BadArguments(format!(
                "projection radius must be positive, got {}",
                self.radius
            )));
        }
        Ok(())
    }
}

/// Euclidean projection onto `{(x, μ): x ⪰ 0, ‖(x, μ)‖₂ ≤ L}`. Returns the
/// projected pair and whether anything changed.
pub fn project_capped_nonneg(x: &[f64], mu: f64, radius: f64) -> (Vec<f64>, f64, bool) {
    let mut clipped = false;
    let mut px: Vec<f64> = x
        .iter()
        .map(|&v| {
            if v < 0.0 {
                clipped = true;
                0.0
            } else {
                v
            }
        })
        .collect();
    let norm = (px.iter().map(|v| v * v).sum::<f64>() + mu * mu).sqrt();
    let mut pmu = mu;
    if norm > radius {
        clipped = true;
        let s = radius / norm;
        px.iter_mut().for_each(|v| *v *= s);
        pmu *= s;
    }
    (px, pmu, clipped)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DoublingOutcome {
    pub support: SupportPair,
    /// Total samples consumed, `2N′ − N₁`.
    pub n2: u64,
    /// Number of identification rounds.
    pub rounds: u32,
    pub final_budget: u64,
}

/// Fresh uniform scans of `N′ = N₁, 2N₁, 4N₁, …` samples until the identified
/// support is square; round `k` runs at failure probability `eps/(8k²)`.
pub fn doubling_phase(o: &mut BanditOracle, eps: f64, n1: u64) -> Result<DoublingOutcome> {
    let m = o.m() as u64;
    if n1 < m {
        return Err(Error::BudgetTooSmall { budget: n1, entries: m });
    }
    let mut budget = n1;
    for k in 1..=MAX_DOUBLINGS {
        let h = uniform_budget_scan(o, budget)?;
        let (a_hat, _) = empirical_matrix(&h);
        let round_eps = eps / (8.0 * f64::from(k) * f64::from(k));
        let (support, _) = identify_support(&a_hat, budget as f64, round_eps)?;
        if support.is_square() {
            return Ok(DoublingOutcome {
                support,
                n2: 2 * budget - n1,
                rounds: k,
                final_budget: budget,
            });
        }
        budget = budget.checked_mul(2).ok_or(Error::BudgetExhausted { rounds: k })?;
    }
    Err(Error::BudgetExhausted { rounds: MAX_DOUBLINGS })
}

/// `N₂ + ⌈C·d^{7.5}/σ′³ · ln(m/eps)/eps⌉`.
pub fn compute_horizon(n2: u64, d: usize, sigma_prime: f64, eps: f64, m: usize, constant: f64) -> Result<u64> {
    if d == 0 {
        return Err(Error::BadArguments("support size must be at least 1".into()));
    }
    if !(sigma_prime > 0.0 && sigma_prime.is_finite()) {
        return Err(Error::BadArguments(format!(
            "sigma' must be positive, got {sigma_prime}"
        )));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::BadArguments(format!("eps must lie in (0, 1), got {eps}")));
    }
    if !(constant >= 0.0 && constant.is_finite()) {
        return Err(Error::BadArguments(format!(
            "horizon constant must be nonnegative, got {constant}"
        )));
    }
    let steps = (constant * (d as f64).powf(7.5) / sigma_prime.powi(3) * (m as f64 / eps).ln() / eps).ceil();
    if steps.is_nan() || steps >= 1e18 {
        return Err(Error::BadArguments(format!("horizon {steps:e} is not representable")));
    }
    Ok(n2 + steps as u64)
}

/// Mutable state of the resolving loop.
#[derive(Debug, Clone)]
pub struct ResolveState {
    /// Current step, counted from `N₂ + 1`.
    pub n: u64,
    pub n2: u64,
    pub horizon: u64,
    /// Budget vector indexed by position in the column support.
    pub a: Vec<f64>,
    /// Phase-2 observations only.
    pub history: SampleHistory,
    pub x_sum: Vec<f64>,
    pub mu_sum: f64,
}

impl ResolveState {
    pub fn new(sp: &SupportPair, m1: usize, m2: usize, n2: u64, horizon: u64) -> Self {
        Self {
            n: n2 + 1,
            n2,
            horizon,
            a: vec![0.0; sp.cols.len()],
            history: SampleHistory::new(m1, m2),
            x_sum: vec![0.0; m1],
            mu_sum: 0.0,
        }
    }

    /// `ã = a/(N − n + 1)`.
    pub fn scaled_budget(&self) -> Vec<f64> {
        let remaining = (self.horizon + 1 - self.n) as f64;
        self.a.iter().map(|v| v / remaining).collect()
    }
}

/// One resolving step as it happened.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub n: u64,
    /// `ã` before the step.
    pub scaled_budget: Vec<f64>,
    /// Budget vector after the step.
    pub a_next: Vec<f64>,
    pub clipped: bool,
    /// The empirical system was singular and the uniform fallback was used.
    pub fallback: bool,
    pub i: usize,
    pub j: usize,
    pub observation: f64,
    /// Projected strategy on the row support, then `μ`.
    pub x: Vec<f64>,
    pub mu: f64,
}

/// Solves the empirical support system with right-hand side `(ã, 1)`.
/// `block` is the `d×d` empirical matrix on the support.
pub fn solve_resolving_system(block: &crate::linalg::Matrix, scaled_budget: &[f64]) -> Result<(Vec<f64>, f64)> {
    let d = block.rows();
    let idx: Vec<usize> = (0..d).collect();
    let m = augmented_game_matrix(block, &idx, &idx)?;
    let mut rhs = scaled_budget.to_vec();
    rhs.push(1.0);
    let mut sol = lu_solve(&m, &rhs)?;
    let mu = sol.pop().expect("d + 1 entries");
    Ok((sol, mu))
}

/// `a ← a − d²·Ã·x_i·h_j + μ·e`.
pub fn budget_update(a: &mut [f64], d: usize, observation: f64, x_i: f64, j_pos: usize, mu: f64) {
    a[j_pos] -= (d * d) as f64 * observation * x_i;
    a.iter_mut().for_each(|v| *v += mu);
}

/// Advances `state` by one step. `rng` drives the uniform choice of entry.
pub fn resolve_step(
    state: &mut ResolveState,
    o: &mut BanditOracle,
    sp: &SupportPair,
    radius: f64,
    rng: &mut ChaCha8Rng,
) -> Result<StepRecord> {
    let d = sp.require_square()?;
    if state.n <= state.n2 || state.n > state.horizon {
        return Err(Error::BadArguments(format!(
            "step {} outside the resolving window {}..={}",
            state.n,
            state.n2 + 1,
            state.horizon
        )));
    }
    let scaled = state.scaled_budget();
    let block = state.history.empirical_block(&sp.rows, &sp.cols);
    let (raw_x, raw_mu, fallback) = match solve_resolving_system(&block, &scaled) {
        Ok((x, mu)) => (x, mu, false),
        Err(Error::SingularMatrix) => (vec![1.0 / d as f64; d], 0.0, true),
        Err(e) => return Err(e),
    };
    let (x, mu, clipped) = project_capped_nonneg(&raw_x, raw_mu, radius);

    let ip = rng.gen_range(0..d);
    let jp = rng.gen_range(0..d);
    let (i, j) = (sp.rows[ip], sp.cols[jp]);
    let observation = o.observe(i, j)?;
    state.history.push(i, j, observation);
    budget_update(&mut state.a, d, observation, x[ip], jp, mu);

    for (k, &row) in sp.rows.iter().enumerate() {
        state.x_sum[row] += x[k];
    }
    state.mu_sum += mu;
    let record = StepRecord {
        n: state.n,
        scaled_budget: scaled,
        a_next: state.a.clone(),
        clipped,
        fallback,
        i,
        j,
        observation,
        x,
        mu,
    };
    state.n += 1;
    Ok(record)
}

/// Convergence diagnostics evaluated on the run, for inspection only.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    /// Condition number of the final empirical support matrix.
    pub kappa: f64,
    /// `1/(8√d·κ)`.
    pub eta: f64,
    /// First step with `‖ã‖_∞ > η`, if any.
    pub tau: Option<u64>,
    /// `32d⁴·κ²/‖M‖₂²·ln(2d²/ϵ)` with `ϵ = eps/(N − N₂ + 1)²`.
    pub n0_prime: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResolveOutput {
    pub x_bar: Vec<f64>,
    pub mu_bar: f64,
    pub support: SupportPair,
    pub sigma_prime: f64,
    pub sigma_samples: u64,
    pub n1: u64,
    pub n2: u64,
    pub horizon: u64,
    pub doubling_rounds: u32,
    /// Every oracle query made by the run.
    pub total_samples: u64,
    pub clip_count: u64,
    pub fallback_count: u64,
    pub final_budget: Vec<f64>,
    pub trace: Option<Vec<StepRecord>>,
    pub diagnostics: Option<Diagnostics>,
}

/// Doubling phase, σ′ estimate at `eps/12`, horizon, then the resolving loop.
pub fn run_two_phase(o: &mut BanditOracle, cfg: &ResolveConfig) -> Result<ResolveOutput> {
    cfg.validate(o.m())?;
    let start_queries = o.total_queries();
    let doubling = doubling_phase(o, cfg.eps, cfg.n1)?;
    let sp = doubling.support.clone();
    let d = sp.d();
    let sigma = estimate_sigma(o, &sp, cfg.eps / 12.0, cfg.sigma_sample_cap)?;
    let horizon = match cfg.horizon_override {
        Some(steps) => doubling.n2 + steps,
        None => compute_horizon(
            doubling.n2,
            d,
            sigma.sigma_hat,
            cfg.eps,
            o.m(),
            cfg.constant_override.unwrap_or(HORIZON_CONSTANT),
        )?,
    };
    let steps = horizon - doubling.n2;
    if steps == 0 {
        return Err(Error::BadArguments("resolving horizon is empty".into()));
    }

    let mut rng = o.fork_rng();
    let mut state = ResolveState::new(&sp, o.m1(), o.m2(), doubling.n2, horizon);
    let mut trace = cfg.trace.then(Vec::new);
    let (mut clip_count, mut fallback_count) = (0, 0);
    while state.n <= horizon {
        let rec = resolve_step(&mut state, o, &sp, cfg.radius, &mut rng)?;
        clip_count += u64::from(rec.clipped);
        fallback_count += u64::from(rec.fallback);
        if let Some(t) = trace.as_mut() {
            t.push(rec);
        }
    }

    let t = steps as f64;
    let x_bar: Vec<f64> = state.x_sum.iter().map(|v| v / t).collect();
    let diagnostics = trace.as_ref().map(|tr| diagnostics(&state, &sp, tr, cfg.eps));
    Ok(ResolveOutput {
        x_bar,
        mu_bar: state.mu_sum / t,
        support: sp,
        sigma_prime: sigma.sigma_hat,
        sigma_samples: sigma.samples_used,
        n1: cfg.n1,
        n2: doubling.n2,
        horizon,
        doubling_rounds: doubling.rounds,
        total_samples: o.total_queries() - start_queries,
        clip_count,
        fallback_count,
        final_budget: state.a,
        trace,
        diagnostics,
    })
}

fn diagnostics(state: &ResolveState, sp: &SupportPair, trace: &[StepRecord], eps: f64) -> Diagnostics {
    let d = sp.d();
    let block = state.history.empirical_block(&sp.rows, &sp.cols);
    let idx: Vec<usize> = (0..d).collect();
    let m = augmented_game_matrix(&block, &idx, &idx).expect("nonempty support");
    let sv = singular_values(&m);
    let kappa = sv.condition_number;
    let eta = 1.0 / (8.0 * (d as f64).sqrt() * kappa);
    let tau = trace
        .iter()
        .find(|r| r.scaled_budget.iter().any(|v| v.abs() > eta))
        .map(|r| r.n);
    let steps = (state.horizon - state.n2) as f64;
    let fail = eps / ((steps + 1.0) * (steps + 1.0));
    let top = sv.singular_values[0];
    let n0_prime = 32.0 * (d as f64).powi(4) * kappa * kappa / (top * top) * (2.0 * (d * d) as f64 / fail).ln();
    Diagnostics {
        kappa,
        eta,
        tau,
        n0_prime,
    }
}

/// One CSV row per step: `n,a,clipped,i,j,observation` with the budget vector
/// joined by `;`.
pub fn write_trace_csv<W: Write>(mut w: W, trace: &[StepRecord]) -> std::io::Result<()> {
    writeln!(w, "n,a,clipped,i,j,observation")?;
    for r in trace {
        let a: Vec<String> = r.a_next.iter().map(|v| format!("{v:.17e}")).collect();
        writeln!(
            w,
            "{},{},{},{},{},{}",
            r.n,
            a.join(";"),
            u8::from(r.clipped),
            r.i,
            r.j,
            r.observation
        )?;
    }
    Ok(())
}

/// `‖x‖₂` of the stacked pair, used by callers checking the projection set.
pub fn pair_norm(x: &[f64], mu: f64) -> f64 {
    (norm2(x).powi(2) + mu * mu).sqrt()
}
