//! The column player's side, obtained by running the row-player pipeline on
//! the transformed game `−Aᵀ`.

use crate::error::{Error, Result};
use crate::game::GameMatrix;
use crate::linalg::Matrix;
use crate::lp::{build_primal_restricted_pair, dual_value};
use crate::param_est::{ENUM_LIMIT, TAU_GAP};
use crate::resolving::{run_two_phase, ResolveConfig, ResolveOutput};
use crate::sampling::{derive_stream, BanditOracle, NoiseModel};
use crate::support_id::TAU_EQ;

/// Stream labels of the two independent oracles.
const ROW_STREAM: u64 = 0x524f57;
const COLUMN_STREAM: u64 = 0x434f4c;

/// `−Aᵀ`. Its row player's problem is the column player's problem of `g`
/// with the value negated.
pub fn dualize(g: &GameMatrix) -> GameMatrix {
    let t = g.matrix().transpose();
    let neg: Vec<f64> = t.as_slice().iter().map(|v| -v).collect();
    let m = Matrix::new(t.rows(), t.cols(), neg).expect("same shape");
    GameMatrix::new(m).expect("negated transpose stays in range")
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualReduction {
    pub original: GameMatrix,
    pub transformed: GameMatrix,
}

impl DualReduction {
    pub fn new(original: GameMatrix) -> Self {
        let transformed = dualize(&original);
        Self { original, transformed }
    }

    /// `|V_transformed + V_original|`; zero up to LP tolerance.
    pub fn value_residual(&self) -> f64 {
        (self.transformed.value() + self.original.value()).abs()
    }
}

fn primal_pair_value(a: &Matrix, rows: &[usize], cols: &[usize]) -> Option<f64> {
    let r = build_primal_restricted_pair(a, rows, cols).ok()?.solve();
    r.solution.is_optimal().then_some(r.value)
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u32..1 << n).map(move |mask| (0..n).filter(|&k| mask >> k & 1 == 1).collect())
}

/// `(δ₁^Dual, δ₂^Dual)` of the true matrix by enumeration. `δ₁^Dual` is the
/// smallest positive drop of the column player's value from restricting its
/// support; `δ₂^Dual` the smallest positive rise of the row player's value
/// from restricting rows, over column sets that keep the full value.
pub fn dual_gap_constants(g: &GameMatrix) -> Result<(f64, f64)> {
    let (m1, m2) = (g.m1(), g.m2());
    let dim = m1.max(m2);
    if dim > ENUM_LIMIT {
        return Err(Error::DimensionTooLarge { dim, limit: ENUM_LIMIT });
    }
    let a = g.matrix();
    let all_rows: Vec<usize> = (0..m1).collect();
    let v = g.value();

    let mut delta1 = f64::INFINITY;
    for cols in subsets(m2) {
        if let Some(vj) = dual_value(a, &all_rows, &cols) {
            let gap = v - vj;
            if gap > TAU_GAP {
                delta1 = delta1.min(gap);
            }
        }
    }

    let mut delta2 = f64::INFINITY;
    for cols in subsets(m2) {
        let Some(full) = primal_pair_value(a, &all_rows, &cols) else {
            continue;
        };
        if (full - v).abs() > TAU_EQ {
            continue;
        }
        for rows in subsets(m1) {
            if let Some(vi) = primal_pair_value(a, &rows, &cols) {
                let gap = vi - full;
                if gap > TAU_GAP {
                    delta2 = delta2.min(gap);
                }
            }
        }
    }
    Ok((delta1, delta2))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BothPlayersReport {
    pub row: ResolveOutput,
    /// Run on `−Aᵀ`; its `x_bar` is the column strategy.
    pub column: ResolveOutput,
    pub total_samples: u64,
}

/// Runs the pipeline on `g` and on `−Aᵀ` with independent oracles, in parallel.
pub fn solve_both_players(
    master_seed: u64,
    g: &GameMatrix,
    noise: NoiseModel,
    cfg: &ResolveConfig,
) -> Result<(Vec<f64>, Vec<f64>, BothPlayersReport)> {
    let dual = dualize(g);
    let (row, column) = rayon::join(
        || {
            let mut o = BanditOracle::new(g.clone(), noise, master_seed, derive_stream(&[ROW_STREAM]));
            run_two_phase(&mut o, cfg)
        },
        || {
            let mut o = BanditOracle::new(dual, noise, master_seed, derive_stream(&[COLUMN_STREAM]));
            run_two_phase(&mut o, cfg)
        },
    );
    let (row, column) = (row?, column?);
    let total_samples = row.total_samples + column.total_samples;
    Ok((
        row.x_bar.clone(),
        column.x_bar.clone(),
        BothPlayersReport {
            row,
            column,
            total_samples,
        },
    ))
}
