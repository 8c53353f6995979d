//! Bandit feedback: noise models, the query oracle, sample histories and the
//! Hoeffding radius.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::game::GameMatrix;
use crate::linalg::Matrix;

/// Zero-mean noise keeping every observation inside `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseModel {
    Noiseless,
    /// `+1` with probability `(1 + a)/2`, else `-1`.
    BernoulliSign,
    /// `a + U[-c, c]` with `c = 1 - |a|`.
    UniformSlack,
    /// A Gaussian truncated to `[-1, 1]` whose location is shifted so the
    /// truncated mean is exactly `a`.
    TruncatedGaussian {
        sigma: f64,
    },
}

impl FromStr for NoiseModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "noiseless" | "none" | "zero" => return Ok(Self::Noiseless),
            "bernoulli_sign" => return Ok(Self::BernoulliSign),
            "uniform_slack" => return Ok(Self::UniformSlack),
            _ => {}
        }
        let sigma = s
            .strip_prefix("truncated_gaussian(")
            .and_then(|r| r.strip_suffix(')'))
            .and_then(|r| r.trim().parse::<f64>().ok())
            .ok_or_else(|| Error::BadArguments(format!("unknown noise model `{s}`")))?;
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::BadArguments(format!(
                "truncated_gaussian sigma must be positive, got {sigma}"
            )));
        }
        Ok(Self::TruncatedGaussian { sigma })
    }
}

impl fmt::Display for NoiseModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Noiseless => write!(f, "noiseless"),
            Self::BernoulliSign => write!(f, "bernoulli_sign"),
            Self::UniformSlack => write!(f, "uniform_slack"),
            Self::TruncatedGaussian { sigma } => write!(f, "truncated_gaussian({sigma})"),
        }
    }
}

impl NoiseModel {
    /// One observation of an entry with mean `a`.
    pub fn sample<R: Rng + ?Sized>(&self, a: f64, rng: &mut R) -> f64 {
        match *self {
            Self::Noiseless => a,
            Self::BernoulliSign => {
                if rng.gen::<f64>() < 0.5 * (1.0 + a) {
                    1.0
                } else {
                    -1.0
                }
            }
            Self::UniformSlack => {
                let c = 1.0 - a.abs();
                if c <= 0.0 {
                    a
                } else {
                    (a + rng.gen_range(-c..=c)).clamp(-1.0, 1.0)
                }
            }
            Self::TruncatedGaussian { sigma } => TruncatedNormal::with_mean(a, sigma).sample(rng),
        }
    }
}

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

fn ln_phi(z: f64) -> f64 {
    -0.5 * z * z - LN_SQRT_2PI
}

/// `ln P(Z > z)` for a standard normal, accurate deep into the upper tail.
fn ln_upper_tail(z: f64) -> f64 {
    if z < 37.0 {
        (0.5 * libm::erfc(z / std::f64::consts::SQRT_2)).ln()
    } else {
        let z2 = z * z;
        ln_phi(z) - z.ln() + (1.0 - 1.0 / z2 + 3.0 / (z2 * z2)).ln()
    }
}

/// `N(loc, sigma²)` conditioned on `[-1, 1]`.
#[derive(Debug, Clone, Copy)]
struct TruncatedNormal {
    loc: f64,
    sigma: f64,
    /// Point mass used when the mean sits on the boundary.
    atom: Option<f64>,
    /// Untruncated probability of `[-1, 1]`; rejection sampling when large.
    mass: f64,
}

const REJECTION_MIN_MASS: f64 = 0.25;

impl TruncatedNormal {
    fn with_mean(a: f64, sigma: f64) -> Self {
        if a.abs() >= 1.0 {
            return Self {
                loc: a,
                sigma,
                atom: Some(a.signum()),
                mass: 0.0,
            };
        }
        // The truncated mean is increasing in the location parameter.
        let (mut lo, mut hi) = (-1.0, 1.0);
        while truncated_mean(lo, sigma) > a {
            lo = 2.0 * lo - 1.0;
        }
        while truncated_mean(hi, sigma) < a {
            hi = 2.0 * hi + 1.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if truncated_mean(mid, sigma) < a {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let loc = 0.5 * (lo + hi);
        let phi = |t: f64| 0.5 * libm::erfc(-t / std::f64::consts::SQRT_2);
        Self {
            loc,
            sigma,
            atom: None,
            mass: phi((1.0 - loc) / sigma) - phi((-1.0 - loc) / sigma),
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        if let Some(v) = self.atom {
            return v;
        }
        if self.mass >= REJECTION_MIN_MASS {
            loop {
                let z: f64 = rng.sample(StandardNormal);
                let v = self.loc + self.sigma * z;
                if (-1.0..=1.0).contains(&v) {
                    return v;
                }
            }
        }
        let alpha = (-1.0 - self.loc) / self.sigma;
        let beta = (1.0 - self.loc) / self.sigma;
        let u: f64 = rng.gen();
        // Inverse CDF by bisection on the standardized scale; mirrored so the
        // tail arithmetic always runs in the upper tail.
        let (a, b, u, flip) = if alpha >= 0.0 {
            (alpha, beta, u, false)
        } else if beta <= 0.0 {
            (-beta, -alpha, 1.0 - u, true)
        } else {
            (alpha, beta, u, false)
        };
        let cdf = |z: f64| standardized_cdf(a, b, z);
        let (mut lo, mut hi) = (a, b);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if cdf(mid) < u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let z = 0.5 * (lo + hi);
        let z = if flip { -z } else { z };
        (self.loc + self.sigma * z).clamp(-1.0, 1.0)
    }
}

/// `P(a < Z ≤ z) / P(a < Z ≤ b)` for a standard normal `Z`.
fn standardized_cdf(a: f64, b: f64, z: f64) -> f64 {
    if a >= 0.0 {
        let la = ln_upper_tail(a);
        let num = -(ln_upper_tail(z) - la).exp_m1();
        let den = -(ln_upper_tail(b) - la).exp_m1();
        num / den
    } else {
        let phi = |t: f64| 0.5 * libm::erfc(-t / std::f64::consts::SQRT_2);
        (phi(z) - phi(a)) / (phi(b) - phi(a))
    }
}

/// Mean of `N(loc, sigma²)` conditioned on `[-1, 1]`.
fn truncated_mean(loc: f64, sigma: f64) -> f64 {
    let alpha = (-1.0 - loc) / sigma;
    let beta = (1.0 - loc) / sigma;
    loc + sigma * standardized_offset(alpha, beta)
}

/// `E[Z | a < Z < b]` for a standard normal.
fn standardized_offset(a: f64, b: f64) -> f64 {
    if a >= 0.0 {
        let la = ln_upper_tail(a);
        let ratio = (ln_phi(a) - la).exp();
        let phi_part = -(ln_phi(b) - ln_phi(a)).exp_m1();
        let tail_part = -(ln_upper_tail(b) - la).exp_m1();
        ratio * phi_part / tail_part
    } else if b <= 0.0 {
        -standardized_offset(-b, -a)
    } else {
        let pdf = |t: f64| (ln_phi(t)).exp();
        let phi = |t: f64| 0.5 * libm::erfc(-t / std::f64::consts::SQRT_2);
        (pdf(a) - pdf(b)) / (phi(b) - phi(a))
    }
}

/// SplitMix64 finalizer, used to derive independent stream ids.
fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Folds a tuple of labels into one stream id.
pub fn derive_stream(parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(0x5851_f42d_4c95_7f2d, |acc, &p| splitmix(acc ^ splitmix(p)))
}

/// Independent generator for `(master_seed, stream_id)`.
pub fn stream_rng(master_seed: u64, stream_id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stream_id);
    rng
}

/// Noisy access to a hidden game, one entry per query.
#[derive(Debug, Clone)]
pub struct BanditOracle {
    game: GameMatrix,
    noise: NoiseModel,
    rng: ChaCha8Rng,
    counts: Vec<u64>,
    total_queries: u64,
    truncated: Vec<Option<TruncatedNormal>>,
}

impl BanditOracle {
    pub fn new(game: GameMatrix, noise: NoiseModel, master_seed: u64, stream_id: u64) -> Self {
        let m = game.m();
        Self {
            game,
            noise,
            rng: stream_rng(master_seed, stream_id),
            counts: vec![0; m],
            total_queries: 0,
            truncated: vec![None; m],
        }
    }

    pub fn m1(&self) -> usize {
        self.game.m1()
    }

    pub fn m2(&self) -> usize {
        self.game.m2()
    }

    pub fn m(&self) -> usize {
        self.game.m()
    }

    pub fn noise(&self) -> NoiseModel {
        self.noise
    }

    pub fn total_queries(&self) -> u64 {
        self.total_queries
    }

    /// Queries issued for entry `(i, j)` so far.
    pub fn count(&self, i: usize, j: usize) -> u64 {
        self.counts[i * self.m2() + j]
    }

    /// Independent generator for the learner's own randomization, derived
    /// from (and advancing) this oracle's stream.
    pub fn fork_rng(&mut self) -> ChaCha8Rng {
        let seed: u64 = self.rng.gen();
        let stream: u64 = self.rng.gen();
        stream_rng(seed, stream)
    }

    pub fn observe(&mut self, i: usize, j: usize) -> Result<f64> {
        if i >= self.m1() {
            return Err(Error::IndexOutOfRange {
                index: i,
                bound: self.m1(),
            });
        }
        if j >= self.m2() {
            return Err(Error::IndexOutOfRange {
                index: j,
                bound: self.m2(),
            });
        }
        let k = i * self.m2() + j;
        let a = self.game.entry(i, j);
        let v = match self.noise {
            NoiseModel::TruncatedGaussian { sigma } => {
                let tn = *self.truncated[k].get_or_insert_with(|| TruncatedNormal::with_mean(a, sigma));
                tn.sample(&mut self.rng)
            }
            other => other.sample(a, &mut self.rng),
        };
        self.counts[k] += 1;
        self.total_queries += 1;
        Ok(v)
    }
}

/// Ordered observation log with per-entry counts and running means.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleHistory {
    m1: usize,
    m2: usize,
    records: Vec<(usize, usize, f64)>,
    counts: Vec<u64>,
    means: Vec<f64>,
}

impl SampleHistory {
    pub fn new(m1: usize, m2: usize) -> Self {
        Self {
            m1,
            m2,
            records: Vec::new(),
            counts: vec![0; m1 * m2],
            means: vec![0.0; m1 * m2],
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.m1, self.m2)
    }

    /// Panics if `(i, j)` is outside the history's dimensions.
    pub fn push(&mut self, i: usize, j: usize, value: f64) {
        assert!(
            i < self.m1 && j < self.m2,
            "record ({i}, {j}) outside {}x{}",
            self.m1,
            self.m2
        );
        let k = i * self.m2 + j;
        self.counts[k] += 1;
        // Running mean, exact when every value at an entry is identical.
        self.means[k] += (value - self.means[k]) / self.counts[k] as f64;
        self.records.push((i, j, value));
    }

    pub fn records(&self) -> &[(usize, usize, f64)] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn count(&self, i: usize, j: usize) -> u64 {
        self.counts[i * self.m2 + j]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn mean(&self, i: usize, j: usize) -> f64 {
        self.means[i * self.m2 + j]
    }

    /// Empirical means restricted to `rows × cols`, unobserved entries zero.
    pub fn empirical_block(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(rows.len(), cols.len());
        for (r, &i) in rows.iter().enumerate() {
            for (c, &j) in cols.iter().enumerate() {
                out[(r, c)] = self.mean(i, j);
            }
        }
        out
    }
}

/// Entry-wise sample means and counts (row-major). Unobserved entries are 0
/// and carry a zero count.
pub fn empirical_matrix(h: &SampleHistory) -> (Matrix, Vec<u64>) {
    let (m1, m2) = h.dims();
    let a = Matrix::new(m1, m2, h.means.clone()).expect("finite means");
    (a, h.counts.clone())
}

/// Samples every entry `⌊N/m⌋` times in row-major passes, then one extra time
/// for the first `N mod m` entries.
pub fn uniform_budget_scan(o: &mut BanditOracle, n_total: u64) -> Result<SampleHistory> {
    let m = o.m() as u64;
    if n_total < m {
        return Err(Error::BudgetTooSmall {
            budget: n_total,
            entries: m,
        });
    }
    let (m1, m2) = (o.m1(), o.m2());
    let mut h = SampleHistory::new(m1, m2);
    for _ in 0..n_total / m {
        for i in 0..m1 {
            for j in 0..m2 {
                h.push(i, j, o.observe(i, j)?);
            }
        }
    }
    for k in 0..(n_total % m) as usize {
        let (i, j) = (k / m2, k % m2);
        h.push(i, j, o.observe(i, j)?);
    }
    Ok(h)
}

/// Hoeffding radius `√(ln(2/eps) / (2n))`.
pub fn rad(n: f64, eps: f64) -> Result<f64> {
    if !(n > 0.0 && n.is_finite()) {
        return Err(Error::BadArguments(format!("rad needs n > 0, got {n}")));
    }
    if !(eps > 0.0 && eps <= 2.0) {
        return Err(Error::BadArguments(format!("rad needs eps in (0, 2], got {eps}")));
    }
    Ok(((2.0 / eps).ln() / (2.0 * n)).sqrt())
}
