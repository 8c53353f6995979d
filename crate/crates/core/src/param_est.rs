//! Sample-based estimation of the gap δ and the singular value σ, and the
//! minimum nonzero gap oracle in two forms: plain subset enumeration and a
//! branch-and-bound over the zeroed set.

use crate::error::{Error, Result};
use crate::linalg::{augmented_game_matrix, singular_values, Matrix};
use crate::lp::{build_primal_restricted, dual_value, primal_value, solve_lp, LinearProgram, Sense};
use crate::sampling::{empirical_matrix, rad, BanditOracle, SampleHistory};
use crate::support_id::{SupportPair, TAU_EQ};

/// Differences at or below this are treated as zero gaps.
pub const TAU_GAP: f64 = 1e-7;

/// Largest dimension the subset enumeration accepts.
pub const ENUM_LIMIT: usize = 12;

/// Default sample cap for both estimators.
pub const DEFAULT_SAMPLE_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct GapEstimate {
    pub delta_hat: f64,
    pub delta1_hat: f64,
    pub delta2_hat: f64,
    pub samples_used: u64,
    pub stopped_at_n: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SigmaEstimate {
    pub sigma_hat: f64,
    pub samples_used: u64,
}

fn nonempty_subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u32..(1u32 << n)).map(move |mask| (0..n).filter(|&k| mask >> k & 1 == 1).collect())
}

fn check_enum_dims(m1: usize, m2: usize) -> Result<()> {
    let dim = m1.max(m2);
    if dim > ENUM_LIMIT {
        return Err(Error::DimensionTooLarge { dim, limit: ENUM_LIMIT });
    }
    Ok(())
}

/// `(δ₁, δ₂)` of `a_hat` by enumerating every row support and, for δ₂, every
/// column support. Components with no positive gap are `+∞`.
pub fn min_nonzero_gap_enum(a_hat: &Matrix) -> Result<(f64, f64)> {
    let (m1, m2) = (a_hat.rows(), a_hat.cols());
    check_enum_dims(m1, m2)?;
    let all_rows: Vec<usize> = (0..m1).collect();
    let all_cols: Vec<usize> = (0..m2).collect();
    let v = primal_value(a_hat, &all_rows).ok_or(Error::EmptyIndexSet)?;

    let mut delta1 = f64::INFINITY;
    for rows in nonempty_subsets(m1) {
        if let Some(vi) = primal_value(a_hat, &rows) {
            let gap = vi - v;
            if gap > TAU_GAP {
                delta1 = delta1.min(gap);
            }
        }
    }

    let mut delta2 = f64::INFINITY;
    for rows in nonempty_subsets(m1) {
        let Some(full) = dual_value(a_hat, &rows, &all_cols) else {
            continue;
        };
        if (full - v).abs() > TAU_EQ {
            continue;
        }
        for cols in nonempty_subsets(m2) {
            if let Some(vj) = dual_value(a_hat, &rows, &cols) {
                let gap = full - vj;
                if gap > TAU_GAP {
                    delta2 = delta2.min(gap);
                }
            }
        }
    }
    Ok((delta1, delta2))
}

/// A minimization LP together with the variables that may be forced to zero.
/// Every candidate must have lower bound zero.
#[derive(Debug, Clone, PartialEq)]
pub struct GapFamily {
    pub lp: LinearProgram,
    pub candidates: Vec<usize>,
}

impl GapFamily {
    pub fn new(lp: LinearProgram, candidates: Vec<usize>) -> Result<Self> {
        lp.validate()?;
        if lp.sense != Sense::Minimize {
            return Err(Error::BadArguments("gap families are minimization programs".into()));
        }
        for &k in &candidates {
            if k >= lp.num_vars() {
                return Err(Error::IndexOutOfRange {
                    index: k,
                    bound: lp.num_vars(),
                });
            }
            if lp.lower[k] != 0.0 {
                return Err(Error::BadArguments(format!("candidate {k} must have lower bound 0")));
            }
        }
        Ok(Self { lp, candidates })
    }

    /// Row-support family of a game: zeroing `x_i` removes row `i`.
    pub fn primal_game(a: &Matrix) -> Self {
        let rows: Vec<usize> = (0..a.rows()).collect();
        let lp = build_primal_restricted(a, &rows).expect("nonempty").lp;
        Self { lp, candidates: rows }
    }

    pub fn base_value(&self) -> Option<f64> {
        self.zeroed_value(&[])
    }

    /// Optimal value with the listed candidates (by position) fixed at zero.
    pub fn zeroed_value(&self, zeroed: &[usize]) -> Option<f64> {
        let mut lp = self.lp.clone();
        for &pos in zeroed {
            let k = self.candidates[pos];
            lp.set_bounds(k, 0.0, 0.0);
        }
        let sol = solve_lp(&lp);
        sol.is_optimal().then_some(sol.objective)
    }
}

/// Smallest gap `V_Z − V > τ_gap` over nonempty zeroed sets `Z`; `+∞` when
/// none exists.
pub fn min_gap_enum(family: &GapFamily) -> Result<f64> {
    let n = family.candidates.len();
    if n > 2 * ENUM_LIMIT {
        return Err(Error::DimensionTooLarge {
            dim: n,
            limit: 2 * ENUM_LIMIT,
        });
    }
    let v = family.base_value().ok_or(Error::Infeasible)?;
    let mut best = f64::INFINITY;
    for zeroed in nonempty_subsets(n) {
        if let Some(vz) = family.zeroed_value(&zeroed) {
            let gap = vz - v;
            if gap > TAU_GAP {
                best = best.min(gap);
            }
        }
    }
    Ok(best)
}

/// Smallest gap `V_Z − V ≥ eps_guard` over nonempty zeroed sets, by
/// depth-first branch-and-bound on the zero/keep decision per candidate.
///
/// A node fixes a zeroed set `F0` and a kept set `F1`. Because zeroing more
/// variables can only raise the value, `V_{F0}` bounds every completion from
/// below and `V_{¬F1}` bounds it from above.
pub fn min_gap_mip(family: &GapFamily, eps_guard: f64) -> Result<f64> {
    if !(eps_guard > 0.0 && eps_guard.is_finite()) {
        return Err(Error::BadArguments(format!(
            "eps_guard must be positive, got {eps_guard}"
        )));
    }
    let n = family.candidates.len();
    let v = family.base_value().ok_or(Error::Infeasible)?;
    let mut incumbent = f64::INFINITY;
    let mut stack: Vec<(Vec<usize>, Vec<usize>)> = vec![(Vec::new(), Vec::new())];
    while let Some((zeroed, kept)) = stack.pop() {
        let lower = match family.zeroed_value(&zeroed) {
            Some(vz) => vz - v,
            None => continue,
        };
        if lower >= incumbent {
            continue;
        }
        if !zeroed.is_empty() && lower >= eps_guard {
            incumbent = lower;
            continue;
        }
        let rest: Vec<usize> = (0..n).filter(|k| !kept.contains(k)).collect();
        if let Some(upper) = family.zeroed_value(&rest).map(|vz| vz - v) {
            if upper < eps_guard {
                continue;
            }
        }
        let depth = zeroed.len() + kept.len();
        if depth == n {
            continue;
        }
        // Candidates are decided in index order; the zero branch is explored first.
        let mut kept_branch = kept.clone();
        kept_branch.push(depth);
        let mut zero_branch = zeroed.clone();
        zero_branch.push(depth);
        stack.push((zeroed, kept_branch));
        stack.push((zero_branch, kept));
    }
    if incumbent.is_finite() {
        Ok(incumbent)
    } else {
        Err(Error::Infeasible)
    }
}

/// Samples all entries in row-major rotation until the estimated gap clears
/// `4·√(m·ln(2m/eps)/(2n))`.
pub fn estimate_delta(o: &mut BanditOracle, eps: f64, max_samples: u64) -> Result<GapEstimate> {
    check_eps(eps)?;
    let (m1, m2) = (o.m1(), o.m2());
    check_enum_dims(m1, m2)?;
    let m = (m1 * m2) as f64;
    let mut h = SampleHistory::new(m1, m2);
    for n in 1..=max_samples {
        let k = ((n - 1) % (m1 * m2) as u64) as usize;
        let (i, j) = (k / m2, k % m2);
        h.push(i, j, o.observe(i, j)?);
        if n < (m1 * m2) as u64 {
            continue;
        }
        let threshold = 4.0 * rad(n as f64 / m, eps / m)?;
        // Gaps between values in [-1, 1] never exceed 2.
        if threshold > 2.0 {
            continue;
        }
        let (a_hat, _) = empirical_matrix(&h);
        let (d1, d2) = min_nonzero_gap_enum(&a_hat)?;
        let delta = d1.min(d2);
        if delta.is_finite() && delta >= threshold {
            return Ok(GapEstimate {
                delta_hat: delta,
                delta1_hat: d1,
                delta2_hat: d2,
                samples_used: n,
                stopped_at_n: n,
            });
        }
    }
    Err(Error::NoPositiveGap { samples: max_samples })
}

/// Samples `I × J` in row-major rotation until the smallest singular value of
/// the empirical augmented matrix clears `2d′·√(d′²·ln(2d′²/eps)/(2n))`.
pub fn estimate_sigma(o: &mut BanditOracle, sp: &SupportPair, eps: f64, max_samples: u64) -> Result<SigmaEstimate> {
    check_eps(eps)?;
    let d = sp.require_square()?;
    sp.check_bounds(o.m1(), o.m2())?;
    let cells = (d * d) as u64;
    let dd = (d * d) as f64;
    let mut h = SampleHistory::new(o.m1(), o.m2());
    for n in 1..=max_samples {
        let k = ((n - 1) % cells) as usize;
        let (i, j) = (sp.rows[k / d], sp.cols[k % d]);
        h.push(i, j, o.observe(i, j)?);
        if n < cells {
            continue;
        }
        let block = h.empirical_block(&sp.rows, &sp.cols);
        let idx: Vec<usize> = (0..d).collect();
        let sigma = singular_values(&augmented_game_matrix(&block, &idx, &idx)?).smallest;
        if sigma >= 2.0 * d as f64 * rad(n as f64 / dd, eps / dd)? {
            return Ok(SigmaEstimate {
                sigma_hat: sigma,
                samples_used: n,
            });
        }
    }
    Err(Error::NoPositiveSigma { samples: max_samples })
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::BadArguments(format!("eps must lie in (0, 1), got {eps}")))
    }
}
