//! Dense two-phase simplex with Bland's rule, plus builders for the restricted
//! game LPs.
//!
//! The solver works on tiny, frequently degenerate problems, so it favours
//! determinism over speed: every pivot choice is the lowest eligible index and
//! the final primal/dual pair is recomputed from the optimal basis by a direct
//! solve to clean up accumulated pivoting error.

use crate::error::{Error, Result};
use crate::linalg::{lu_solve, Matrix};

/// Reduced-cost and ratio-test tolerance.
pub const PIVOT_TOL: f64 = 1e-9;
const FEASIBILITY_TOL: f64 = 1e-9;
const MAX_PIVOTS: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintKind {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coefficients: Vec<f64>,
    pub kind: ConstraintKind,
    pub rhs: f64,
}

/// `opt cᵀx` subject to linear rows and per-variable bounds. Bounds may be
/// infinite in either direction.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub labels: Vec<String>,
}

impl LinearProgram {
    /// New program over `objective.len()` variables, all bounded below by zero.
    pub fn new(sense: Sense, objective: Vec<f64>) -> Self {
        let n = objective.len();
        Self {
            sense,
            objective,
            constraints: Vec::new(),
            lower: vec![0.0; n],
            upper: vec![f64::INFINITY; n],
            labels: (0..n).map(|j| format!("v{j}")).collect(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_constraint(&mut self, coefficients: Vec<f64>, kind: ConstraintKind, rhs: f64) -> &mut Self {
        assert_eq!(coefficients.len(), self.num_vars(), "constraint width");
        self.constraints.push(Constraint {
            coefficients,
            kind,
            rhs,
        });
        self
    }

    pub fn set_bounds(&mut self, var: usize, lower: f64, upper: f64) -> &mut Self {
        self.lower[var] = lower;
        self.upper[var] = upper;
        self
    }

    pub fn set_free(&mut self, var: usize) -> &mut Self {
        self.set_bounds(var, f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn set_label(&mut self, var: usize, label: impl Into<String>) -> &mut Self {
        self.labels[var] = label.into();
        self
    }

    /// Checks block dimensions and finiteness.
    pub fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.lower.len() != n || self.upper.len() != n || self.labels.len() != n {
            return Err(Error::BadArguments(
                "bound/label vectors do not match variable count".into(),
            ));
        }
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(Error::BadArguments("non-finite objective coefficient".into()));
        }
        for c in &self.constraints {
            if c.coefficients.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: c.coefficients.len(),
                });
            }
            if !c.rhs.is_finite() || c.coefficients.iter().any(|v| !v.is_finite()) {
                return Err(Error::BadArguments("non-finite constraint data".into()));
            }
        }
        for j in 0..n {
            if self.lower[j].is_nan()
                || self.upper[j].is_nan()
                || self.lower[j] == f64::INFINITY
                || self.upper[j] == f64::NEG_INFINITY
            {
                return Err(Error::BadArguments(format!("bad bounds on {}", self.labels[j])));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// In the program's own sense. NaN unless optimal.
    pub objective: f64,
    pub primal: Vec<f64>,
    /// One multiplier per constraint, the sensitivity `∂objective/∂rhs`.
    pub dual: Vec<f64>,
    /// Variables with a basic column in the final tableau, ascending.
    pub basis: Vec<usize>,
}

impl LpSolution {
    fn non_optimal(status: LpStatus, lp: &LinearProgram) -> Self {
        Self {
            status,
            objective: f64::NAN,
            primal: vec![f64::NAN; lp.num_vars()],
            dual: vec![f64::NAN; lp.constraints.len()],
            basis: Vec::new(),
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

/// How a standard-form column maps back onto an original variable.
#[derive(Debug, Clone, Copy)]
struct ColumnMap {
    var: usize,
    sign: f64,
    offset: f64,
}

struct StandardForm {
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    c: Vec<f64>,
    /// Structural columns come first, then slacks.
    columns: Vec<Option<ColumnMap>>,
    /// Row sign flips applied to make `b ⪰ 0`.
    flipped: Vec<bool>,
}

fn to_standard_form(lp: &LinearProgram) -> Option<StandardForm> {
    let n = lp.num_vars();
    let sign = if lp.sense == Sense::Minimize { 1.0 } else { -1.0 };
    let mut columns: Vec<Option<ColumnMap>> = Vec::new();
    let mut upper_rows: Vec<(usize, f64)> = Vec::new();
    for j in 0..n {
        let (l, u) = (lp.lower[j], lp.upper[j]);
        if l.is_finite() {
            if u.is_finite() {
                if u < l {
                    return None;
                }
                upper_rows.push((columns.len(), u - l));
            }
            columns.push(Some(ColumnMap {
                var: j,
                sign: 1.0,
                offset: l,
            }));
        } else if u.is_finite() {
            columns.push(Some(ColumnMap {
                var: j,
                sign: -1.0,
                offset: u,
            }));
        } else {
            columns.push(Some(ColumnMap {
                var: j,
                sign: 1.0,
                offset: 0.0,
            }));
            columns.push(Some(ColumnMap {
                var: j,
                sign: -1.0,
                offset: 0.0,
            }));
        }
    }
    let n_struct = columns.len();
    let rows_total = lp.constraints.len() + upper_rows.len();
    let n_slack = lp.constraints.iter().filter(|c| c.kind != ConstraintKind::Eq).count() + upper_rows.len();
    let width = n_struct + n_slack;

    let mut a = Vec::with_capacity(rows_total);
    let mut b = Vec::with_capacity(rows_total);
    let mut slack = n_struct;
    for con in &lp.constraints {
        let mut row = vec![0.0; width];
        let mut rhs = con.rhs;
        for (k, col) in columns.iter().enumerate() {
            let cm = col.expect("structural");
            let coef = con.coefficients[cm.var];
            row[k] = coef * cm.sign;
        }
        for (j, &coef) in con.coefficients.iter().enumerate() {
            let off = column_offset(&columns, j);
            rhs -= coef * off;
        }
        match con.kind {
            ConstraintKind::Le => {
                row[slack] = 1.0;
                slack += 1;
            }
            ConstraintKind::Ge => {
                row[slack] = -1.0;
                slack += 1;
            }
            ConstraintKind::Eq => {}
        }
        a.push(row);
        b.push(rhs);
    }
    for &(col, range) in &upper_rows {
        let mut row = vec![0.0; width];
        row[col] = 1.0;
        row[slack] = 1.0;
        slack += 1;
        a.push(row);
        b.push(range);
    }
    columns.extend(std::iter::repeat_n(None, n_slack));

    let mut flipped = vec![false; rows_total];
    for r in 0..rows_total {
        if b[r] < 0.0 {
            b[r] = -b[r];
            a[r].iter_mut().for_each(|v| *v = -*v);
            flipped[r] = true;
        }
    }

    let mut c = vec![0.0; width];
    for (k, col) in columns.iter().enumerate().take(n_struct) {
        let cm = col.expect("structural");
        c[k] = sign * lp.objective[cm.var] * cm.sign;
    }
    Some(StandardForm {
        a,
        b,
        c,
        columns,
        flipped,
    })
}

fn column_offset(columns: &[Option<ColumnMap>], var: usize) -> f64 {
    columns
        .iter()
        .flatten()
        .find(|cm| cm.var == var)
        .map_or(0.0, |cm| cm.offset)
}

/// Dense tableau over `[structural | slack | artificial]` columns.
struct Tableau {
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    cost: Vec<f64>,
    basis: Vec<usize>,
}

enum Phase {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn pivot(&mut self, r: usize, k: usize) {
        let p = self.rows[r][k];
        self.rows[r].iter_mut().for_each(|v| *v /= p);
        self.rhs[r] /= p;
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r];
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let f = self.rows[i][k];
            if f != 0.0 {
                for (v, pv) in self.rows[i].iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                self.rows[i][k] = 0.0;
                self.rhs[i] -= f * pivot_rhs;
            }
        }
        let f = self.cost[k];
        if f != 0.0 {
            for (v, pv) in self.cost.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
            self.cost[k] = 0.0;
        }
        self.basis[r] = k;
    }

    /// Sets the reduced-cost row from raw costs.
    fn price(&mut self, raw: &[f64]) {
        self.cost = raw.to_vec();
        for (r, &bk) in self.basis.iter().enumerate() {
            let cb = raw[bk];
            if cb != 0.0 {
                for (v, a) in self.cost.iter_mut().zip(&self.rows[r]) {
                    *v -= cb * a;
                }
            }
        }
    }

    fn run(&mut self, allowed: &[bool]) -> Phase {
        for _ in 0..MAX_PIVOTS {
            // Bland: lowest-index improving column.
            let Some(k) = (0..self.cost.len()).find(|&k| allowed[k] && self.cost[k] < -PIVOT_TOL) else {
                return Phase::Optimal;
            };
            let mut best: Option<(usize, f64)> = None;
            for r in 0..self.rows.len() {
                let a = self.rows[r][k];
                if a > PIVOT_TOL {
                    let ratio = self.rhs[r].max(0.0) / a;
                    best = match best {
                        None => Some((r, ratio)),
                        Some((br, bratio)) => {
                            let tie = (ratio - bratio).abs() <= 1e-12 * (1.0 + bratio.abs());
                            if (tie && self.basis[r] < self.basis[br]) || (!tie && ratio < bratio) {
                                Some((r, ratio))
                            } else {
                                Some((br, bratio))
                            }
                        }
                    };
                }
            }
            match best {
                None => return Phase::Unbounded,
                Some((r, _)) => self.pivot(r, k),
            }
        }
        panic!("simplex exceeded {MAX_PIVOTS} pivots; Bland's rule should have terminated");
    }
}

/// Solves `lp`. Infeasible and unbounded programs are reported through the
/// status, never as errors.
pub fn solve_lp(lp: &LinearProgram) -> LpSolution {
    let Some(sf) = to_standard_form(lp) else {
        return LpSolution::non_optimal(LpStatus::Infeasible, lp);
    };
    let m = sf.a.len();
    let width = sf.c.len();
    let total = width + m;

    let rows: Vec<Vec<f64>> =
        sf.a.iter()
            .enumerate()
            .map(|(r, row)| {
                let mut full = row.clone();
                full.extend((0..m).map(|i| if i == r { 1.0 } else { 0.0 }));
                full
            })
            .collect();
    let mut tab = Tableau {
        rows,
        rhs: sf.b.clone(),
        cost: vec![0.0; total],
        basis: (width..total).collect(),
    };

    // Phase 1: minimize the artificial sum.
    let mut phase1_cost = vec![0.0; total];
    phase1_cost[width..].iter_mut().for_each(|v| *v = 1.0);
    tab.price(&phase1_cost);
    let all = vec![true; total];
    tab.run(&all);
    let infeasibility: f64 = tab
        .basis
        .iter()
        .zip(&tab.rhs)
        .filter(|(&k, _)| k >= width)
        .map(|(_, v)| v.max(0.0))
        .sum();
    let scale = 1.0 + sf.b.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    if infeasibility > FEASIBILITY_TOL * scale {
        return LpSolution::non_optimal(LpStatus::Infeasible, lp);
    }
    // Drive remaining artificials out; rows with no eligible pivot are redundant.
    for r in 0..m {
        if tab.basis[r] >= width {
            if let Some(k) = (0..width).find(|&k| tab.rows[r][k].abs() > PIVOT_TOL) {
                tab.pivot(r, k);
            }
        }
    }

    // Phase 2.
    let mut phase2_cost = sf.c.clone();
    phase2_cost.extend(std::iter::repeat_n(0.0, m));
    tab.price(&phase2_cost);
    let mut allowed = vec![true; total];
    allowed[width..].iter_mut().for_each(|v| *v = false);
    if let Phase::Unbounded = tab.run(&allowed) {
        return LpSolution::non_optimal(LpStatus::Unbounded, lp);
    }

    // Recover (x_B, y) from the optimal basis by direct solves.
    let column = |k: usize, r: usize| {
        if k < width {
            sf.a[r][k]
        } else if k - width == r {
            1.0
        } else {
            0.0
        }
    };
    let mut bmat = Matrix::zeros(m, m);
    for r in 0..m {
        for (c, &k) in tab.basis.iter().enumerate() {
            bmat[(r, c)] = column(k, r);
        }
    }
    let cb: Vec<f64> = tab.basis.iter().map(|&k| phase2_cost[k]).collect();
    let xb = lu_solve(&bmat, &sf.b).unwrap_or_else(|_| tab.rhs.clone());
    let y = lu_solve(&bmat.transpose(), &cb).unwrap_or_else(|_| {
        // Fall back to reading multipliers off the artificial columns.
        (0..m).map(|r| -tab.cost[width + r]).collect()
    });

    let mut std_x = vec![0.0; width];
    for (r, &k) in tab.basis.iter().enumerate() {
        if k < width {
            std_x[k] = xb[r].max(0.0);
        }
    }
    let mut primal = vec![0.0; lp.num_vars()];
    let mut seen = vec![false; lp.num_vars()];
    for (k, col) in sf.columns.iter().enumerate() {
        if let Some(cm) = col {
            if !seen[cm.var] {
                primal[cm.var] = cm.offset;
                seen[cm.var] = true;
            }
            primal[cm.var] += cm.sign * std_x[k];
        }
    }
    let sense_sign = if lp.sense == Sense::Minimize { 1.0 } else { -1.0 };
    let dual = (0..lp.constraints.len())
        .map(|r| {
            let flip = if sf.flipped[r] { -1.0 } else { 1.0 };
            sense_sign * flip * y[r]
        })
        .collect();
    let mut basis: Vec<usize> = tab
        .basis
        .iter()
        .filter_map(|&k| sf.columns.get(k).copied().flatten().map(|cm| cm.var))
        .collect();
    basis.sort_unstable();
    basis.dedup();
    let objective = lp.objective.iter().zip(&primal).map(|(c, x)| c * x).sum();

    LpSolution {
        status: LpStatus::Optimal,
        objective,
        primal,
        dual,
        basis,
    }
}

/// Optimality residuals of a claimed solution, all in absolute terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KktReport {
    pub primal_infeasibility: f64,
    pub dual_infeasibility: f64,
    pub complementarity: f64,
    pub duality_gap: f64,
    pub dual_objective: f64,
}

impl KktReport {
    pub fn worst(&self) -> f64 {
        self.primal_infeasibility
            .max(self.dual_infeasibility)
            .max(self.complementarity)
            .max(self.duality_gap)
    }
}

/// Evaluates primal/dual feasibility, complementary slackness, and the duality
/// gap of an optimal `sol`, treating bounds as implicit constraints.
pub fn kkt_report(lp: &LinearProgram, sol: &LpSolution) -> KktReport {
    // Work in minimization form: multipliers y with ∂z/∂b semantics.
    let s = if lp.sense == Sense::Minimize { 1.0 } else { -1.0 };
    let c: Vec<f64> = lp.objective.iter().map(|v| s * v).collect();
    let y: Vec<f64> = sol.dual.iter().map(|v| s * v).collect();
    let x = &sol.primal;

    let mut primal_inf = 0.0_f64;
    let mut dual_inf = 0.0_f64;
    let mut comp = 0.0_f64;
    let mut dual_obj = 0.0;
    for (con, &yi) in lp.constraints.iter().zip(&y) {
        let ax: f64 = con.coefficients.iter().zip(x).map(|(a, v)| a * v).sum();
        let slack = ax - con.rhs;
        match con.kind {
            ConstraintKind::Le => {
                primal_inf = primal_inf.max(slack);
                dual_inf = dual_inf.max(yi);
            }
            ConstraintKind::Ge => {
                primal_inf = primal_inf.max(-slack);
                dual_inf = dual_inf.max(-yi);
            }
            ConstraintKind::Eq => primal_inf = primal_inf.max(slack.abs()),
        }
        if con.kind != ConstraintKind::Eq {
            comp = comp.max((yi * slack).abs());
        }
        dual_obj += con.rhs * yi;
    }
    for j in 0..lp.num_vars() {
        let (l, u) = (lp.lower[j], lp.upper[j]);
        primal_inf = primal_inf.max(l - x[j]).max(x[j] - u);
        let aty: f64 = lp
            .constraints
            .iter()
            .zip(&y)
            .map(|(con, yi)| con.coefficients[j] * yi)
            .sum();
        let r = c[j] - aty;
        // r = z_l − z_u with z_l ≥ 0 only for finite l and z_u ≥ 0 only for finite u.
        let (zl, zu) = (r.max(0.0), (-r).max(0.0));
        if !l.is_finite() {
            dual_inf = dual_inf.max(zl);
        } else {
            dual_obj += l * zl;
            comp = comp.max(zl * (x[j] - l).abs());
        }
        if !u.is_finite() {
            dual_inf = dual_inf.max(zu);
        } else {
            dual_obj -= u * zu;
            comp = comp.max(zu * (u - x[j]).abs());
        }
    }
    let primal_obj: f64 = c.iter().zip(x).map(|(a, b)| a * b).sum();
    KktReport {
        primal_infeasibility: primal_inf.max(0.0),
        dual_infeasibility: dual_inf,
        complementarity: comp,
        duality_gap: (primal_obj - dual_obj).abs(),
        dual_objective: s * dual_obj,
    }
}

fn check_indices(set: &[usize], bound: usize) -> Result<()> {
    if set.is_empty() {
        return Err(Error::EmptyIndexSet);
    }
    if let Some(&bad) = set.iter().find(|&&i| i >= bound) {
        return Err(Error::IndexOutOfRange { index: bad, bound });
    }
    Ok(())
}

/// A game LP whose strategy variables cover only `support`; the eliminated
/// coordinates are implicitly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct RestrictedGameLp {
    pub lp: LinearProgram,
    /// Strategy coordinates kept as variables, ascending. Variable `k` of the
    /// LP is coordinate `support[k]`; the last variable is the value.
    pub support: Vec<usize>,
    /// Length of the full strategy vector.
    pub dimension: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RestrictedValue {
    pub status: LpStatus,
    /// NaN unless optimal.
    pub value: f64,
    /// Full-length strategy, zero outside the support.
    pub strategy: Vec<f64>,
    pub solution: LpSolution,
}

impl RestrictedGameLp {
    pub fn solve(&self) -> RestrictedValue {
        let solution = solve_lp(&self.lp);
        let mut strategy = vec![0.0; self.dimension];
        let value = if solution.is_optimal() {
            for (k, &i) in self.support.iter().enumerate() {
                strategy[i] = solution.primal[k];
            }
            solution.objective
        } else {
            f64::NAN
        };
        RestrictedValue {
            status: solution.status,
            value,
            strategy,
            solution,
        }
    }
}

/// `min μ` s.t. `μ·e ⪰ Aᵀx` over all columns, `eᵀx = 1`, `x ⪰ 0`, `x` zero off `rows`.
pub fn build_primal_restricted(a: &Matrix, rows: &[usize]) -> Result<RestrictedGameLp> {
    let cols: Vec<usize> = (0..a.cols()).collect();
    build_primal_restricted_pair(a, rows, &cols)
}

/// As [`build_primal_restricted`] but keeping only the column constraints in `cols`.
pub fn build_primal_restricted_pair(a: &Matrix, rows: &[usize], cols: &[usize]) -> Result<RestrictedGameLp> {
    check_indices(rows, a.rows())?;
    check_indices(cols, a.cols())?;
    let k = rows.len();
    let mut objective = vec![0.0; k + 1];
    objective[k] = 1.0;
    let mut lp = LinearProgram::new(Sense::Minimize, objective);
    lp.set_free(k).set_label(k, "mu");
    for (v, &i) in rows.iter().enumerate() {
        lp.set_label(v, format!("x{i}"));
    }
    for &j in cols {
        let mut coef: Vec<f64> = rows.iter().map(|&i| -a[(i, j)]).collect();
        coef.push(1.0);
        lp.add_constraint(coef, ConstraintKind::Ge, 0.0);
    }
    let mut sum = vec![1.0; k];
    sum.push(0.0);
    lp.add_constraint(sum, ConstraintKind::Eq, 1.0);
    Ok(RestrictedGameLp {
        lp,
        support: rows.to_vec(),
        dimension: a.rows(),
    })
}

/// `max ν` s.t. `ν·e ⪯ A_{rows,:} y`, `eᵀy = 1`, `y ⪰ 0`, `y` zero off `cols`.
pub fn build_dual_restricted(a: &Matrix, rows: &[usize], cols: &[usize]) -> Result<RestrictedGameLp> {
    check_indices(rows, a.rows())?;
    check_indices(cols, a.cols())?;
    let k = cols.len();
    let mut objective = vec![0.0; k + 1];
    objective[k] = 1.0;
    let mut lp = LinearProgram::new(Sense::Maximize, objective);
    lp.set_free(k).set_label(k, "nu");
    for (v, &j) in cols.iter().enumerate() {
        lp.set_label(v, format!("y{j}"));
    }
    for &i in rows {
        let mut coef: Vec<f64> = cols.iter().map(|&j| a[(i, j)]).collect();
        coef.push(-1.0);
        lp.add_constraint(coef, ConstraintKind::Ge, 0.0);
    }
    let mut sum = vec![1.0; k];
    sum.push(0.0);
    lp.add_constraint(sum, ConstraintKind::Eq, 1.0);
    Ok(RestrictedGameLp {
        lp,
        support: cols.to_vec(),
        dimension: a.cols(),
    })
}

/// Optimal value of the primal game LP with `x` supported on `rows`; `None`
/// when `rows` is empty or the program is not solved to optimality.
pub fn primal_value(a: &Matrix, rows: &[usize]) -> Option<f64> {
    let r = build_primal_restricted(a, rows).ok()?.solve();
    r.solution.is_optimal().then_some(r.value)
}

/// Optimal value of the dual game LP keeping the rows `rows` and with `y`
/// supported on `cols`.
pub fn dual_value(a: &Matrix, rows: &[usize], cols: &[usize]) -> Option<f64> {
    let r = build_dual_restricted(a, rows, cols).ok()?.solve();
    r.solution.is_optimal().then_some(r.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pennies() -> Matrix {
        Matrix::from_rows(&[[1.0, -1.0], [-1.0, 1.0]])
    }

    fn dominant() -> Matrix {
        Matrix::from_rows(&[[0.5, 0.2], [0.9, 0.8]])
    }

    #[test]
    fn min_x_at_least_one() {
        let mut lp = LinearProgram::new(Sense::Minimize, vec![1.0]);
        lp.add_constraint(vec![1.0], ConstraintKind::Ge, 1.0);
        let s = solve_lp(&lp);
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective - 1.0).abs() < 1e-12);
        assert!((s.primal[0] - 1.0).abs() < 1e-12);
        assert!((s.dual[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unbounded_max() {
        let lp = LinearProgram::new(Sense::Maximize, vec![1.0]);
        assert_eq!(solve_lp(&lp).status, LpStatus::Unbounded);
    }

    #[test]
    fn infeasible_rows_and_bounds() {
        let mut lp = LinearProgram::new(Sense::Minimize, vec![1.0]);
        lp.add_constraint(vec![1.0], ConstraintKind::Le, -1.0);
        assert_eq!(solve_lp(&lp).status, LpStatus::Infeasible);
        let mut lp = LinearProgram::new(Sense::Minimize, vec![1.0]);
        lp.set_bounds(0, 2.0, 1.0);
        assert_eq!(solve_lp(&lp).status, LpStatus::Infeasible);
    }

    #[test]
    fn general_bounds_and_duals() {
        // max 3a + 2b, a + b ≤ 4, a ≤ 3, b ∈ [−1, ∞), a ∈ (−∞, 3]
        let mut lp = LinearProgram::new(Sense::Maximize, vec![3.0, 2.0]);
        lp.add_constraint(vec![1.0, 1.0], ConstraintKind::Le, 4.0);
        lp.set_bounds(0, f64::NEG_INFINITY, 3.0)
            .set_bounds(1, -1.0, f64::INFINITY);
        let s = solve_lp(&lp);
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective - 11.0).abs() < 1e-9, "{s:?}");
        assert!((s.primal[0] - 3.0).abs() < 1e-9 && (s.primal[1] - 1.0).abs() < 1e-9);
        assert!((s.dual[0] - 2.0).abs() < 1e-9);
        let k = kkt_report(&lp, &s);
        assert!(k.worst() < 1e-9, "{k:?}");
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's classic cycling LP; Bland's rule must terminate at −1/20.
        let mut lp = LinearProgram::new(Sense::Minimize, vec![-0.75, 150.0, -0.02, 6.0]);
        lp.add_constraint(vec![0.25, -60.0, -0.04, 9.0], ConstraintKind::Le, 0.0);
        lp.add_constraint(vec![0.5, -90.0, -0.02, 3.0], ConstraintKind::Le, 0.0);
        lp.add_constraint(vec![0.0, 0.0, 1.0, 0.0], ConstraintKind::Le, 1.0);
        let s = solve_lp(&lp);
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective + 0.05).abs() < 1e-9);
        assert!(kkt_report(&lp, &s).worst() < 1e-9);
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::new(Sense::Minimize, vec![1.0, 1.0]);
        lp.add_constraint(vec![1.0, 1.0], ConstraintKind::Eq, 1.0);
        lp.add_constraint(vec![2.0, 2.0], ConstraintKind::Eq, 2.0);
        let s = solve_lp(&lp);
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective - 1.0).abs() < 1e-12);
    }

    #[test]
    fn primal_game_lp_pennies() {
        let r = build_primal_restricted(&pennies(), &[0, 1]).unwrap().solve();
        assert!(r.value.abs() < 1e-12);
        assert!((r.strategy[0] - 0.5).abs() < 1e-12 && (r.strategy[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn primal_restricted_dominant() {
        let r = build_primal_restricted(&dominant(), &[0]).unwrap().solve();
        assert!((r.value - 0.5).abs() < 1e-12);
        assert_eq!(r.strategy, vec![1.0, 0.0]);
        let r = build_primal_restricted(&dominant(), &[1]).unwrap().solve();
        assert!((r.value - 0.9).abs() < 1e-12);
        assert_eq!(build_primal_restricted(&dominant(), &[]), Err(Error::EmptyIndexSet));
    }

    #[test]
    fn dual_restricted_examples() {
        let r = build_dual_restricted(&pennies(), &[0, 1], &[0, 1]).unwrap().solve();
        assert!(r.value.abs() < 1e-12);
        assert!((r.strategy[0] - 0.5).abs() < 1e-12);
        let r = build_dual_restricted(&dominant(), &[0], &[1]).unwrap().solve();
        assert!((r.value - 0.2).abs() < 1e-12);
        let r = build_dual_restricted(&pennies(), &[0, 1], &[0]).unwrap().solve();
        assert!((r.value + 1.0).abs() < 1e-12);
        assert_eq!(build_dual_restricted(&pennies(), &[0], &[]), Err(Error::EmptyIndexSet));
    }

    #[test]
    fn deterministic() {
        let a = Matrix::from_rows(&[[0.0, 0.0], [0.0, 0.0]]);
        let lp = build_primal_restricted(&a, &[0, 1]).unwrap();
        assert_eq!(solve_lp(&lp.lp), solve_lp(&lp.lp));
    }

    fn game(max: usize) -> impl Strategy<Value = Matrix> {
        (1..=max, 1..=max).prop_flat_map(|(r, c)| {
            prop::collection::vec(-1.0f64..1.0, r * c).prop_map(move |d| Matrix::new(r, c, d).unwrap())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn strong_duality(a in game(6)) {
            let rows: Vec<usize> = (0..a.rows()).collect();
            let cols: Vec<usize> = (0..a.cols()).collect();
            let p = build_primal_restricted(&a, &rows).unwrap();
            let d = build_dual_restricted(&a, &rows, &cols).unwrap();
            let (ps, ds) = (p.solve(), d.solve());
            prop_assert!((ps.value - ds.value).abs() <= 1e-8);
            prop_assert!(kkt_report(&p.lp, &ps.solution).worst() <= 1e-8);
            prop_assert!(kkt_report(&d.lp, &ds.solution).worst() <= 1e-8);
        }

        #[test]
        fn lemma_pairing(a in game(6)) {
            // Multipliers of the column constraints form an optimal column strategy.
            let rows: Vec<usize> = (0..a.rows()).collect();
            let p = build_primal_restricted(&a, &rows).unwrap().solve();
            let y = &p.solution.dual[..a.cols()];
            prop_assert!(y.iter().all(|&v| v >= -1e-9));
            prop_assert!((y.iter().sum::<f64>() - 1.0).abs() <= 1e-8);
            let ay = a.mul_vec(y);
            prop_assert!(ay.iter().all(|&v| v >= p.value - 1e-8));
        }

        #[test]
        fn restriction_monotone(a in game(5), drop_row in 0usize..5, drop_col in 0usize..5) {
            let rows: Vec<usize> = (0..a.rows()).collect();
            let cols: Vec<usize> = (0..a.cols()).collect();
            let full = build_primal_restricted(&a, &rows).unwrap().solve().value;
            let fewer: Vec<usize> = rows.iter().copied().filter(|&i| i != drop_row % a.rows()).collect();
            if !fewer.is_empty() {
                let v = build_primal_restricted(&a, &fewer).unwrap().solve().value;
                prop_assert!(v >= full - 1e-9);
            }
            let dfull = build_dual_restricted(&a, &rows, &cols).unwrap().solve().value;
            let fewer: Vec<usize> = cols.iter().copied().filter(|&j| j != drop_col % a.cols()).collect();
            if !fewer.is_empty() {
                let v = build_dual_restricted(&a, &rows, &fewer).unwrap().solve().value;
                prop_assert!(v <= dfull + 1e-9);
            }
        }
    }
}
