//! Support identification: greedy elimination of rows, then columns, from an
//! empirical game matrix, followed by the basic solution of the resulting
//! square system.

use crate::error::{Error, Result};
use crate::linalg::{augmented_game_matrix, lu_solve, singular_values, Matrix};
use crate::lp::{dual_value, primal_value};

/// Two LP values count as equal within this tolerance.
pub const TAU_EQ: f64 = 1e-7;

/// Sorted, nonempty row and column index sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SupportPair {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl SupportPair {
    /// Sorts and deduplicates; rejects empty sets.
    pub fn new(mut rows: Vec<usize>, mut cols: Vec<usize>) -> Result<Self> {
        rows.sort_unstable();
        rows.dedup();
        cols.sort_unstable();
        cols.dedup();
        if rows.is_empty() || cols.is_empty() {
            return Err(Error::EmptyIndexSet);
        }
        Ok(Self { rows, cols })
    }

    pub fn full(m1: usize, m2: usize) -> Self {
        Self {
            rows: (0..m1).collect(),
            cols: (0..m2).collect(),
        }
    }

    pub fn is_square(&self) -> bool {
        self.rows.len() == self.cols.len()
    }

    /// `|I|`.
    pub fn d(&self) -> usize {
        self.rows.len()
    }

    fn check_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::SizeMismatch {
                rows: self.rows.len(),
                cols: self.cols.len(),
            })
        }
    }

    pub(crate) fn require_square(&self) -> Result<usize> {
        self.check_square().map(|_| self.d())
    }

    pub fn check_bounds(&self, m1: usize, m2: usize) -> Result<()> {
        for (set, bound) in [(&self.rows, m1), (&self.cols, m2)] {
            if let Some(&bad) = set.iter().find(|&&k| k >= bound) {
                return Err(Error::IndexOutOfRange { index: bad, bound });
            }
        }
        Ok(())
    }
}

impl std::fmt::Display for SupportPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let join = |v: &[usize]| v.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "({{{}}}, {{{}}})", join(&self.rows), join(&self.cols))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepOutcome {
    Removed,
    Kept,
    /// The loop stopped before reaching this index.
    NotVisited,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RowStep {
    pub index: usize,
    pub outcome: StepOutcome,
    /// Value with the index removed; NaN when that program is infeasible.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ColumnStep {
    pub index: usize,
    pub outcome: StepOutcome,
    pub value: f64,
    pub sigma: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    ColumnsExhausted,
    SizeMatched,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupportIdReport {
    pub value: f64,
    pub row_trace: Vec<RowStep>,
    pub column_trace: Vec<ColumnStep>,
    pub terminated_by: Termination,
}

fn equal_values(a: Option<f64>, b: f64) -> bool {
    a.is_some_and(|v| (v - b).abs() <= TAU_EQ)
}

/// `√(m·ln(2m/eps) / (2N′))`, the column-test radius.
pub fn rank_test_radius(m: usize, n_prime: f64, eps: f64) -> Result<f64> {
    crate::sampling::rad(n_prime / m as f64, eps / m as f64)
}

/// Runs the elimination on `a_hat`, whose entries average `n_prime / m`
/// samples each. Never empties either set; `|J| > |I|` on exit is possible.
pub fn identify_support(a_hat: &Matrix, n_prime: f64, eps: f64) -> Result<(SupportPair, SupportIdReport)> {
    let (m1, m2) = (a_hat.rows(), a_hat.cols());
    if m1 == 0 || m2 == 0 {
        return Err(Error::EmptyIndexSet);
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::BadArguments(format!("eps must lie in (0, 1), got {eps}")));
    }
    let radius = rank_test_radius(m1 * m2, n_prime, eps)?;

    let mut rows: Vec<usize> = (0..m1).collect();
    let value = primal_value(a_hat, &rows).expect("full game LP is solvable");
    let mut row_trace = Vec::with_capacity(m1);
    for i in 0..m1 {
        let trial: Vec<usize> = rows.iter().copied().filter(|&k| k != i).collect();
        let v = primal_value(a_hat, &trial);
        let removed = equal_values(v, value);
        if removed {
            rows = trial;
        }
        row_trace.push(RowStep {
            index: i,
            outcome: if removed {
                StepOutcome::Removed
            } else {
                StepOutcome::Kept
            },
            value: v.unwrap_or(f64::NAN),
        });
    }

    let mut cols: Vec<usize> = (0..m2).collect();
    let mut column_trace = Vec::with_capacity(m2);
    let mut terminated_by = Termination::ColumnsExhausted;
    for j in 0..m2 {
        let trial: Vec<usize> = cols.iter().copied().filter(|&k| k != j).collect();
        let v = dual_value(a_hat, &rows, &trial);
        let threshold = (rows.len() * trial.len()) as f64 * radius;
        let sigma = augmented_game_matrix(a_hat, &rows, &trial)
            .map(|m| singular_values(&m).smallest)
            .unwrap_or(0.0);
        let removed = equal_values(v, value) && sigma > threshold;
        if removed {
            cols = trial;
        }
        column_trace.push(ColumnStep {
            index: j,
            outcome: if removed {
                StepOutcome::Removed
            } else {
                StepOutcome::Kept
            },
            value: v.unwrap_or(f64::NAN),
            sigma,
            threshold,
        });
        if cols.len() == rows.len() {
            terminated_by = Termination::SizeMatched;
            column_trace.extend((j + 1..m2).map(|k| ColumnStep {
                index: k,
                outcome: StepOutcome::NotVisited,
                value: f64::NAN,
                sigma: f64::NAN,
                threshold: f64::NAN,
            }));
            break;
        }
    }

    let pair = SupportPair { rows, cols };
    Ok((
        pair,
        SupportIdReport {
            value,
            row_trace,
            column_trace,
            terminated_by,
        },
    ))
}

/// Solves the square support system for `(x, μ)`; `x` is zero off `sp.rows`
/// and is not clamped.
pub fn basic_solution(a: &Matrix, sp: &SupportPair) -> Result<(Vec<f64>, f64)> {
    let d = sp.require_square()?;
    sp.check_bounds(a.rows(), a.cols())?;
    let m = augmented_game_matrix(a, &sp.rows, &sp.cols)?;
    let mut rhs = vec![0.0; d + 1];
    rhs[d] = 1.0;
    let sol = lu_solve(&m, &rhs)?;
    let mut x = vec![0.0; a.rows()];
    for (k, &i) in sp.rows.iter().enumerate() {
        x[i] = sol[k];
    }
    Ok((x, sol[d]))
}
