//! Ground-truth games: the payoff matrix, an exact Nash oracle, the two
//! closeness measures, and synthetic instance generators.
//!
//! Orientation: the row player picks `x` to minimize `max_j (Aᵀx)_j`, the
//! column player picks `y` to maximize `min_i (Ay)_i`.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{dist2, Matrix};
use crate::lp::{build_dual_restricted, build_primal_restricted, solve_lp, ConstraintKind, LinearProgram, Sense};

/// Coordinates below this count as outside a strategy's support.
pub const SUPPORT_TOL: f64 = 1e-9;

const FW_GAP_TOL: f64 = 1e-16;
const FW_MAX_ITERS: usize = 100_000;
const FACE_SLACK: f64 = 1e-9;

/// Which player a strategy belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Row,
    Column,
}

/// Payoff matrix with entries in `[-1, 1]`.
pub struct GameMatrix {
    a: Matrix,
    cert: OnceLock<NashCertificate>,
}

impl GameMatrix {
    pub fn new(a: Matrix) -> Result<Self> {
        if a.rows() == 0 || a.cols() == 0 {
            return Err(Error::InvalidMatrix(
                "game needs at least one row and one column".into(),
            ));
        }
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                let v = a[(i, j)];
                if !(-1.0..=1.0).contains(&v) {
                    return Err(Error::EntryOutOfRange {
                        row: i,
                        col: j,
                        value: v,
                    });
                }
            }
        }
        Ok(Self {
            a,
            cert: OnceLock::new(),
        })
    }

    /// Panics on out-of-range entries; for literals.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        Self::new(Matrix::from_rows(rows)).expect("valid game")
    }

    pub fn m1(&self) -> usize {
        self.a.rows()
    }

    pub fn m2(&self) -> usize {
        self.a.cols()
    }

    /// Number of entries, `m1·m2`.
    pub fn m(&self) -> usize {
        self.m1() * self.m2()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.a
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.a[(i, j)]
    }

    /// Cached [`exact_nash`].
    pub fn nash(&self) -> &NashCertificate {
        self.cert.get_or_init(|| compute_nash(&self.a))
    }

    pub fn value(&self) -> f64 {
        self.nash().value
    }
}

impl Clone for GameMatrix {
    fn clone(&self) -> Self {
        let cert = OnceLock::new();
        if let Some(c) = self.cert.get() {
            let _ = cert.set(c.clone());
        }
        Self {
            a: self.a.clone(),
            cert,
        }
    }
}

impl PartialEq for GameMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a
    }
}

impl fmt::Debug for GameMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GameMatrix").field("a", &self.a).finish()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NashCertificate {
    pub x_star: Vec<f64>,
    pub y_star: Vec<f64>,
    pub value: f64,
    /// Strategy coordinates basic in the optimal primal basis.
    pub primal_basis: Vec<usize>,
    /// Strategy coordinates basic in the optimal dual basis.
    pub dual_basis: Vec<usize>,
}

impl NashCertificate {
    pub fn row_support(&self) -> Vec<usize> {
        support_of(&self.x_star)
    }

    pub fn column_support(&self) -> Vec<usize> {
        support_of(&self.y_star)
    }
}

pub fn support_of(v: &[f64]) -> Vec<usize> {
    (0..v.len()).filter(|&k| v[k] > SUPPORT_TOL).collect()
}

/// Solves both game LPs on the true matrix.
pub fn exact_nash(g: &GameMatrix) -> NashCertificate {
    g.nash().clone()
}

fn compute_nash(a: &Matrix) -> NashCertificate {
    let rows: Vec<usize> = (0..a.rows()).collect();
    let cols: Vec<usize> = (0..a.cols()).collect();
    let primal = build_primal_restricted(a, &rows).expect("nonempty").solve();
    let dual = build_dual_restricted(a, &rows, &cols).expect("nonempty").solve();
    assert!(
        primal.solution.is_optimal() && dual.solution.is_optimal(),
        "game LPs are always feasible and bounded"
    );
    let clean = |v: Vec<f64>| v.into_iter().map(|t| t.max(0.0)).collect::<Vec<_>>();
    NashCertificate {
        x_star: clean(primal.strategy),
        y_star: clean(dual.strategy),
        value: primal.value,
        primal_basis: primal
            .solution
            .basis
            .iter()
            .copied()
            .filter(|&k| k < a.rows())
            .collect(),
        dual_basis: dual.solution.basis.iter().copied().filter(|&k| k < a.cols()).collect(),
    }
}

fn check_len(v: &[f64], expected: usize) -> Result<()> {
    if v.len() != expected {
        return Err(Error::DimensionMismatch { expected, got: v.len() });
    }
    Ok(())
}

/// Row side: `max_j (Aᵀx)_j − V`. Column side: `V − min_i (Ay)_i`.
pub fn suboptimality_gap(g: &GameMatrix, strategy: &[f64], side: Side) -> Result<f64> {
    let v = g.value();
    match side {
        Side::Row => {
            check_len(strategy, g.m1())?;
            let worst = g.a.tr_mul_vec(strategy).into_iter().fold(f64::NEG_INFINITY, f64::max);
            Ok(worst - v)
        }
        Side::Column => {
            check_len(strategy, g.m2())?;
            let worst = g.a.mul_vec(strategy).into_iter().fold(f64::INFINITY, f64::min);
            Ok(v - worst)
        }
    }
}

/// Euclidean distance from `strategy` to the set of optimal strategies of
/// `side`.
pub fn distance_to_ne_set(g: &GameMatrix, strategy: &[f64], side: Side) -> Result<f64> {
    let v = g.value();
    let face = match side {
        Side::Row => {
            check_len(strategy, g.m1())?;
            let mut lp = LinearProgram::new(Sense::Minimize, vec![0.0; g.m1()]);
            for j in 0..g.m2() {
                let coef = (0..g.m1()).map(|i| g.entry(i, j)).collect();
                lp.add_constraint(coef, ConstraintKind::Le, v + FACE_SLACK);
            }
            lp.add_constraint(vec![1.0; g.m1()], ConstraintKind::Eq, 1.0);
            lp
        }
        Side::Column => {
            check_len(strategy, g.m2())?;
            let mut lp = LinearProgram::new(Sense::Minimize, vec![0.0; g.m2()]);
            for i in 0..g.m1() {
                lp.add_constraint(g.a.row(i).to_vec(), ConstraintKind::Ge, v - FACE_SLACK);
            }
            lp.add_constraint(vec![1.0; g.m2()], ConstraintKind::Eq, 1.0);
            lp
        }
    };
    Ok(frank_wolfe_distance(face, strategy))
}

/// Away-step Frank–Wolfe on `½‖z − target‖²` over the feasible set of `face`,
/// using the simplex solver as the linear minimization oracle.
fn frank_wolfe_distance(mut face: LinearProgram, target: &[f64]) -> f64 {
    let mut lmo = |grad: &[f64]| -> Vec<f64> {
        face.objective = grad.to_vec();
        let sol = solve_lp(&face);
        assert!(sol.is_optimal(), "optimal face is nonempty");
        sol.primal
    };
    let neg: Vec<f64> = target.iter().map(|t| -t).collect();
    let first = lmo(&neg);
    let mut z = first.clone();
    let mut active: Vec<(Vec<f64>, f64)> = vec![(first, 1.0)];
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(p, q)| p * q).sum::<f64>();

    for _ in 0..FW_MAX_ITERS {
        let grad: Vec<f64> = z.iter().zip(target).map(|(a, b)| a - b).collect();
        let s = lmo(&grad);
        let d_fw: Vec<f64> = s.iter().zip(&z).map(|(a, b)| a - b).collect();
        let gap = -dot(&grad, &d_fw);
        if gap <= FW_GAP_TOL {
            break;
        }
        let (away, _) = active.iter().enumerate().map(|(k, (v, _))| (k, dot(&grad, v))).fold(
            (0, f64::NEG_INFINITY),
            |best, cur| if cur.1 > best.1 { cur } else { best },
        );
        let d_away: Vec<f64> = z.iter().zip(&active[away].0).map(|(a, b)| a - b).collect();
        let away_gain = -dot(&grad, &d_away);

        let (dir, gamma_max, is_fw) = if gap >= away_gain || active.len() == 1 {
            (d_fw, 1.0, true)
        } else {
            let alpha = active[away].1;
            (d_away, alpha / (1.0 - alpha), false)
        };
        let dd = dot(&dir, &dir);
        if dd <= 0.0 {
            break;
        }
        let gamma = (-dot(&grad, &dir) / dd).clamp(0.0, gamma_max);
        if gamma <= 0.0 {
            break;
        }
        for (zk, dk) in z.iter_mut().zip(&dir) {
            *zk += gamma * dk;
        }
        if is_fw {
            for (_, w) in active.iter_mut() {
                *w *= 1.0 - gamma;
            }
            match active.iter_mut().find(|(v, _)| dist2(v, &s) < 1e-12) {
                Some((_, w)) => *w += gamma,
                None => active.push((s, gamma)),
            }
            if gamma >= 1.0 {
                active.retain(|(v, _)| dist2(v, &z) < 1e-12);
                if let Some(first) = active.first_mut() {
                    first.1 = 1.0;
                }
            }
        } else {
            for (_, w) in active.iter_mut() {
                *w *= 1.0 + gamma;
            }
            active[away].1 -= gamma;
            if gamma >= gamma_max {
                active.remove(away);
            }
        }
        active.retain(|(_, w)| *w > 0.0);
    }
    dist2(&z, target)
}

/// Synthetic game families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceKind {
    MatchingPennies,
    RockPaperScissors,
    Dominant,
    Zeros,
    UniformRandom,
    PlantedSupport(usize),
}

impl FromStr for InstanceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        Ok(match s {
            "matching_pennies" => Self::MatchingPennies,
            "rps" => Self::RockPaperScissors,
            "dominant" => Self::Dominant,
            "zeros" => Self::Zeros,
            "uniform_random" => Self::UniformRandom,
            _ => {
                let d = s
                    .strip_prefix("planted_support(")
                    .and_then(|r| r.strip_suffix(')'))
                    .and_then(|r| r.trim().parse::<usize>().ok())
                    .ok_or_else(|| Error::UnknownKind(s.to_string()))?;
                Self::PlantedSupport(d)
            }
        })
    }
}

impl fmt::Display for InstanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::MatchingPennies => write!(f, "matching_pennies"),
            Self::RockPaperScissors => write!(f, "rps"),
            Self::Dominant => write!(f, "dominant"),
            Self::Zeros => write!(f, "zeros"),
            Self::UniformRandom => write!(f, "uniform_random"),
            Self::PlantedSupport(d) => write!(f, "planted_support({d})"),
        }
    }
}

pub fn matching_pennies() -> GameMatrix {
    GameMatrix::from_rows(&[[1.0, -1.0], [-1.0, 1.0]])
}

pub fn rock_paper_scissors() -> GameMatrix {
    GameMatrix::from_rows(&[[0.0, 1.0, -1.0], [-1.0, 0.0, 1.0], [1.0, -1.0, 0.0]])
}

pub fn dominant_game() -> GameMatrix {
    GameMatrix::from_rows(&[[0.5, 0.2], [0.9, 0.8]])
}

/// Deterministic in `(kind, dims, seed)`. Fixed instances ignore the seed but
/// still require their own dimensions.
pub fn generate_instance(kind: InstanceKind, dims: (usize, usize), seed: u64) -> Result<GameMatrix> {
    let (m1, m2) = dims;
    let bad = |detail: String| Error::BadDims {
        kind: kind.to_string(),
        detail,
    };
    let fixed = |want: (usize, usize), g: GameMatrix| {
        if dims == want {
            Ok(g)
        } else {
            Err(bad(format!("expected {}x{}, got {m1}x{m2}", want.0, want.1)))
        }
    };
    if m1 == 0 || m2 == 0 {
        return Err(bad("dimensions must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        InstanceKind::MatchingPennies => fixed((2, 2), matching_pennies()),
        InstanceKind::RockPaperScissors => fixed((3, 3), rock_paper_scissors()),
        InstanceKind::Dominant => fixed((2, 2), dominant_game()),
        InstanceKind::Zeros => GameMatrix::new(Matrix::zeros(m1, m2)),
        InstanceKind::UniformRandom => {
            let data = (0..m1 * m2).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            GameMatrix::new(Matrix::new(m1, m2, data)?)
        }
        InstanceKind::PlantedSupport(d) => {
            if d == 0 || d > m1.min(m2) {
                return Err(bad(format!("support size {d} must lie in 1..={}", m1.min(m2))));
            }
            planted_support(d, m1, m2, &mut rng).ok_or_else(|| bad("no fully mixed block found".into()))
        }
    }
}

const PLANTED_MARGIN: f64 = 0.1;
const PLANTED_ATTEMPTS: usize = 1000;

/// A random circulant `d×d` block in the top-left corner, padded with rows
/// that strictly dominate a block row (worse for the minimizer) and columns
/// strictly dominated by a block column.
fn planted_support(d: usize, m1: usize, m2: usize, rng: &mut ChaCha8Rng) -> Option<GameMatrix> {
    for _ in 0..PLANTED_ATTEMPTS {
        let c: Vec<f64> = (0..d).map(|_| rng.gen_range(-0.5..=0.5)).collect();
        let mut a = Matrix::zeros(m1, m2);
        for i in 0..d {
            for k in 0..d {
                a[(i, k)] = c[(k + d - i) % d];
            }
        }
        let i0 = rng.gen_range(0..d);
        let j0 = rng.gen_range(0..d);
        let row_margin: Vec<f64> = (d..m1).map(|_| PLANTED_MARGIN + rng.gen_range(0.0..0.3)).collect();
        let col_margin: Vec<f64> = (d..m2).map(|_| PLANTED_MARGIN + rng.gen_range(0.0..0.3)).collect();
        for (r, mr) in (d..m1).zip(&row_margin) {
            for k in 0..d {
                a[(r, k)] = a[(i0, k)] + mr;
            }
        }
        for (col, mc) in (d..m2).zip(&col_margin) {
            for i in 0..d {
                a[(i, col)] = a[(i, j0)] - mc;
            }
        }
        for r in d..m1 {
            for col in d..m2 {
                let lo = a[(i0, col)] + PLANTED_MARGIN;
                let hi = a[(r, j0)] - PLANTED_MARGIN;
                a[(r, col)] = if hi > lo {
                    rng.gen_range(lo..=hi)
                } else {
                    0.5 * (lo + hi)
                };
            }
        }
        let g = GameMatrix::new(a).ok()?;
        let cert = g.nash();
        if cert.row_support().len() == d && cert.column_support().len() == d {
            return Some(g);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::{any, prop_assert, prop_assert_eq, proptest, ProptestConfig};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn nash_examples() {
        let c = exact_nash(&matching_pennies());
        assert!(dist2(&c.x_star, &[0.5, 0.5]) < 1e-12 && dist2(&c.y_star, &[0.5, 0.5]) < 1e-12);
        assert!(c.value.abs() < 1e-12);

        let c = exact_nash(&rock_paper_scissors());
        let third = [1.0 / 3.0; 3];
        assert!(dist2(&c.x_star, &third) < 1e-12 && dist2(&c.y_star, &third) < 1e-12);
        assert!(c.value.abs() < 1e-12);

        let c = exact_nash(&dominant_game());
        assert!(dist2(&c.x_star, &[1.0, 0.0]) < 1e-12 && dist2(&c.y_star, &[1.0, 0.0]) < 1e-12);
        assert!(close(c.value, 0.5, 1e-12));
    }

    #[test]
    fn gap_examples() {
        let mp = matching_pennies();
        assert!(suboptimality_gap(&mp, &[0.5, 0.5], Side::Row).unwrap().abs() < 1e-12);
        let dom = dominant_game();
        assert!(close(
            suboptimality_gap(&dom, &[0.5, 0.5], Side::Row).unwrap(),
            0.2,
            1e-12
        ));
        assert!(suboptimality_gap(&dom, &[1.0, 0.0], Side::Row).unwrap().abs() < 1e-12);
        assert_eq!(
            suboptimality_gap(&dom, &[1.0], Side::Row),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        );
    }

    #[test]
    fn distance_examples() {
        let mp = matching_pennies();
        assert!(distance_to_ne_set(&mp, &[0.5, 0.5], Side::Row).unwrap() < 1e-8);
        assert!(close(
            distance_to_ne_set(&mp, &[1.0, 0.0], Side::Row).unwrap(),
            0.5f64.sqrt(),
            1e-8
        ));
        let z = generate_instance(InstanceKind::Zeros, (2, 2), 0).unwrap();
        assert!(distance_to_ne_set(&z, &[0.3, 0.7], Side::Row).unwrap() < 1e-8);
        assert!(distance_to_ne_set(&z, &[0.9, 0.1], Side::Column).unwrap() < 1e-8);
    }

    #[test]
    fn distance_to_a_nontrivial_face() {
        // Rows 0 and 1 are both optimal, row 2 is not: the face is the edge
        // between e0 and e1, so the distance is the projection onto that edge.
        let g = GameMatrix::from_rows(&[[0.0, 0.0], [0.0, 0.0], [0.5, 0.5]]);
        let x = [0.2, 0.2, 0.6];
        let expected = dist2(&x, &[0.5, 0.5, 0.0]);
        assert!(close(distance_to_ne_set(&g, &x, Side::Row).unwrap(), expected, 1e-8));
        let y_face = GameMatrix::from_rows(&[[0.0, 0.0, -0.5]]);
        let y = [0.6, 0.2, 0.2];
        let expected = dist2(&y, &[0.7, 0.3, 0.0]);
        assert!(close(
            distance_to_ne_set(&y_face, &y, Side::Column).unwrap(),
            expected,
            1e-8
        ));
    }

    #[test]
    fn instance_examples() {
        assert_eq!(
            generate_instance(InstanceKind::MatchingPennies, (2, 2), 99).unwrap(),
            matching_pennies()
        );
        let z = generate_instance(InstanceKind::Zeros, (3, 4), 1).unwrap();
        assert_eq!(z.matrix(), &Matrix::zeros(3, 4));
        let p = generate_instance(InstanceKind::PlantedSupport(2), (4, 4), 7).unwrap();
        assert_eq!(p.nash().row_support().len(), 2);
        assert_eq!(p.nash().column_support().len(), 2);
        assert!(matches!(
            generate_instance(InstanceKind::Dominant, (3, 2), 0),
            Err(Error::BadDims { .. })
        ));
        assert!(matches!("chess".parse::<InstanceKind>(), Err(Error::UnknownKind(_))));
        assert_eq!(
            "planted_support(3)".parse::<InstanceKind>().unwrap(),
            InstanceKind::PlantedSupport(3)
        );
        assert_eq!(
            generate_instance(InstanceKind::UniformRandom, (3, 5), 11).unwrap(),
            generate_instance(InstanceKind::UniformRandom, (3, 5), 11).unwrap()
        );
    }

    #[test]
    fn entry_range_checked() {
        let err = GameMatrix::new(Matrix::from_rows(&[[1.0, 2.0], [0.0, 0.0]])).unwrap_err();
        assert_eq!(
            err,
            Error::EntryOutOfRange {
                row: 0,
                col: 1,
                value: 2.0
            }
        );
    }

    fn random_game(m1: usize, m2: usize, seed: u64) -> GameMatrix {
        generate_instance(InstanceKind::UniformRandom, (m1, m2), seed).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn certificate_invariants(m1 in 1usize..6, m2 in 1usize..6, seed in any::<u64>()) {
            let g = random_game(m1, m2, seed);
            let c = g.nash();
            prop_assert!((c.x_star.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
            prop_assert!((c.y_star.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
            prop_assert!(c.x_star.iter().chain(&c.y_star).all(|&v| v >= -1e-12));
            prop_assert!(g.matrix().tr_mul_vec(&c.x_star).iter().all(|&v| v <= c.value + 1e-8));
            prop_assert!(g.matrix().mul_vec(&c.y_star).iter().all(|&v| v >= c.value - 1e-8));
            prop_assert!((-1.0..=1.0).contains(&c.value));
            prop_assert!(suboptimality_gap(&g, &c.x_star, Side::Row).unwrap() <= 1e-8);
            prop_assert!(suboptimality_gap(&g, &c.y_star, Side::Column).unwrap() <= 1e-8);
            prop_assert!(distance_to_ne_set(&g, &c.x_star, Side::Row).unwrap() <= 1e-6);
        }

        #[test]
        fn planted_support_sizes(d in 1usize..4, extra1 in 0usize..3, extra2 in 0usize..3, seed in any::<u64>()) {
            let g = generate_instance(InstanceKind::PlantedSupport(d), (d + extra1, d + extra2), seed).unwrap();
            prop_assert_eq!(g.nash().row_support().len(), d);
            prop_assert_eq!(g.nash().column_support().len(), d);
            prop_assert!(suboptimality_gap(&g, &g.nash().x_star, Side::Row).unwrap() <= 1e-8);
        }

        #[test]
        fn worst_case_payoff_is_lipschitz(m1 in 1usize..6, m2 in 1usize..6, seed in any::<u64>(), s1 in any::<u64>(), s2 in any::<u64>()) {
            let g = random_game(m1, m2, seed);
            let draw = |s: u64| {
                let mut rng = ChaCha8Rng::seed_from_u64(s);
                let raw: Vec<f64> = (0..m1).map(|_| rng.gen_range(0.0..1.0)).collect();
                let total: f64 = raw.iter().sum::<f64>().max(1e-12);
                raw.into_iter().map(|v| v / total).collect::<Vec<_>>()
            };
            let (x, xp) = (draw(s1), draw(s2));
            let gx = suboptimality_gap(&g, &x, Side::Row).unwrap();
            let gxp = suboptimality_gap(&g, &xp, Side::Row).unwrap();
            prop_assert!(gx - gxp <= g.matrix().spectral_norm() * dist2(&x, &xp) + 1e-12);
        }

        #[test]
        fn two_by_two_grid_search(seed in any::<u64>()) {
            let g = random_game(2, 2, seed);
            let grid = (0..=1000)
                .map(|k| {
                    let x1 = k as f64 / 1000.0;
                    g.matrix().tr_mul_vec(&[x1, 1.0 - x1]).into_iter().fold(f64::NEG_INFINITY, f64::max)
                })
                .fold(f64::INFINITY, f64::min);
            prop_assert!((g.value() - grid).abs() <= 2e-3);
        }

        #[test]
        fn distance_is_sound(m1 in 1usize..5, m2 in 1usize..5, seed in any::<u64>(), s in any::<u64>()) {
            // Distance never exceeds the distance to the certified point, and
            // zero distance coincides with zero gap.
            let g = random_game(m1, m2, seed);
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let raw: Vec<f64> = (0..m1).map(|_| rng.gen_range(0.0..1.0)).collect();
            let total: f64 = raw.iter().sum::<f64>().max(1e-12);
            let x: Vec<f64> = raw.into_iter().map(|v| v / total).collect();
            let d = distance_to_ne_set(&g, &x, Side::Row).unwrap();
            prop_assert!(d <= dist2(&x, &g.nash().x_star) + 1e-9);
            prop_assert!(suboptimality_gap(&g, &x, Side::Row).unwrap() <= g.matrix().spectral_norm() * d + 1e-6);
        }
    }
}
