//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Failing criteria are reported, not hidden; set `SADDLE_ACCEPTANCE_STRICT=1`
//! to turn any failure into a nonzero exit.

use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use saddle::dual_player::{solve_both_players, DualReduction};
use saddle::game::{
    distance_to_ne_set, dominant_game, exact_nash, generate_instance, matching_pennies, rock_paper_scissors,
    GameMatrix, InstanceKind, Side,
};
use saddle::harness::{bias_curve, run_experiment, Algorithm, ExperimentConfig, InstanceSpec};
use saddle::linalg::{dist2, Matrix};
use saddle::lp::{
    build_primal_restricted, dual_value, kkt_report, primal_value, solve_lp, ConstraintKind, LinearProgram, Sense,
};
use saddle::param_est::{
    estimate_delta, estimate_sigma, min_gap_enum, min_gap_mip, min_nonzero_gap_enum, GapFamily, DEFAULT_SAMPLE_CAP,
    TAU_GAP,
};
use saddle::resolving::{budget_update, run_two_phase, ResolveConfig};
use saddle::sampling::{empirical_matrix, uniform_budget_scan, BanditOracle, NoiseModel};
use saddle::support_id::{identify_support, SupportPair};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn random_game(rng: &mut ChaCha8Rng, max_dim: usize) -> GameMatrix {
    let (m1, m2) = (rng.gen_range(1..=max_dim), rng.gen_range(1..=max_dim));
    generate_instance(InstanceKind::UniformRandom, (m1, m2), rng.gen()).unwrap()
}

fn lp_core() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut gap, mut kkt) = (0.0f64, 0.0f64);
    for _ in 0..200 {
        let g = random_game(&mut rng, 6);
        let rows: Vec<usize> = (0..g.m1()).collect();
        let cols: Vec<usize> = (0..g.m2()).collect();
        let vp = primal_value(g.matrix(), &rows).unwrap();
        let vd = dual_value(g.matrix(), &rows, &cols).unwrap();
        gap = gap.max((vp - vd).abs());
        let lp = build_primal_restricted(g.matrix(), &rows).unwrap().lp;
        let sol = solve_lp(&lp);
        kkt = kkt.max(kkt_report(&lp, &sol).worst());
    }
    verdict(
        gap <= 1e-8 && kkt <= 1e-8,
        format!("max |Vp - Vd| = {gap:.2e}, max KKT residual = {kkt:.2e}"),
    )
}

fn grid_value(a: &Matrix) -> f64 {
    (0..=1000)
        .map(|k| {
            let p = f64::from(k) / 1000.0;
            (0..2)
                .map(|j| p * a[(0, j)] + (1.0 - p) * a[(1, j)])
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .fold(f64::INFINITY, f64::min)
}

fn two_by_two_grid() -> Verdict {
    let mut worst = 0.0f64;
    for seed in 0..100 {
        let g = generate_instance(InstanceKind::UniformRandom, (2, 2), 1000 + seed).unwrap();
        worst = worst.max((exact_nash(&g).value - grid_value(g.matrix())).abs());
    }
    verdict(worst <= 2e-3, format!("max |V - V_grid| = {worst:.2e}"))
}

fn generated(kind: InstanceKind, dims: (usize, usize)) -> InstanceSpec {
    InstanceSpec::Generated { kind, dims, seed: 0 }
}

fn support_identification() -> Verdict {
    let mut cfg = ExperimentConfig::new(
        generated(InstanceKind::Dominant, (2, 2)),
        Algorithm::SupportId,
        vec![40_000],
    );
    cfg.noise = NoiseModel::BernoulliSign;
    cfg.eps = 0.05;
    cfg.replications = 200;
    let rec = &run_experiment(&cfg, None).unwrap()[0];
    let target = SupportPair::new(vec![0], vec![0]).unwrap();
    let (exact, _) = identify_support(dominant_game().matrix(), 1e30, 0.05).unwrap();
    verdict(
        exact == target && rec.success_fraction >= 0.95,
        format!(
            "correct support {target} in {:.1}% of 200 runs",
            100.0 * rec.success_fraction
        ),
    )
}

fn golden_traces() -> Verdict {
    let zeros = GameMatrix::new(Matrix::zeros(2, 2)).unwrap();
    let cases = [
        ("matching_pennies", matching_pennies(), SupportPair::full(2, 2)),
        ("dominant", dominant_game(), SupportPair::new(vec![0], vec![0]).unwrap()),
        ("zeros", zeros, SupportPair::new(vec![1], vec![1]).unwrap()),
    ];
    let mut detail = Vec::new();
    let mut pass = true;
    for (name, g, want) in cases {
        let mut o = BanditOracle::new(g, NoiseModel::Noiseless, 0, 0);
        let h = uniform_budget_scan(&mut o, 400).unwrap();
        let (a_hat, _) = empirical_matrix(&h);
        let (got, _) = identify_support(&a_hat, 400.0, 0.05).unwrap();
        pass &= got == want;
        detail.push(format!("{name} -> {got}"));
    }
    verdict(pass, detail.join(", "))
}

fn resolving_fixed_point() -> Verdict {
    let cfg = ResolveConfig::new(0.1, 400).with_horizon(1000);
    let mut detail = Vec::new();
    let mut pass = true;
    for (name, g) in [("matching_pennies", matching_pennies()), ("dominant", dominant_game())] {
        let x_star = g.nash().x_star.clone();
        let mut o = BanditOracle::new(g, NoiseModel::Noiseless, 0, 0);
        let out = run_two_phase(&mut o, &cfg).unwrap();
        let d = dist2(&out.x_bar, &x_star);
        pass &= d <= 2e-3;
        detail.push(format!("{name} |x_bar - x*| = {d:.2e}"));
    }
    verdict(pass, detail.join(", "))
}

fn bias_decay() -> Verdict {
    let mut cfg = ExperimentConfig::new(
        generated(InstanceKind::MatchingPennies, (2, 2)),
        Algorithm::Resolve,
        vec![1 << 9, 1 << 11, 1 << 13],
    );
    cfg.noise = NoiseModel::BernoulliSign;
    cfg.replications = 1000;
    let curve = bias_curve(&cfg, None).unwrap();
    let slope = curve.slope.unwrap_or(f64::NAN);
    let (b0, b2) = (curve.points[0].1, curve.points[2].1);
    let biases: Vec<String> = curve.points.iter().map(|(t, b)| format!("{t}:{b:.2e}")).collect();
    verdict(
        (-1.25..=-0.75).contains(&slope) && b2 <= b0 / 4.0,
        format!(
            "bias {}, slope {slope:.3} (se {:.3}), ratio {:.2}",
            biases.join(" "),
            curve.slope_stderr.unwrap_or(f64::NAN),
            b0 / b2
        ),
    )
}

fn drift_unbiasedness() -> Verdict {
    let g = rock_paper_scissors();
    let x = [0.2, 0.3, 0.5];
    let target = g.matrix().tr_mul_vec(&x);
    let d = 3;
    let mut o = BanditOracle::new(g, NoiseModel::BernoulliSign, 7, 0);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let draws = 1_000_000u32;
    let (mut sum, mut sq) = ([0.0f64; 3], [0.0f64; 3]);
    for _ in 0..draws {
        let (i, j) = (rng.gen_range(0..d), rng.gen_range(0..d));
        let obs = o.observe(i, j).unwrap();
        let mut a = vec![0.0; d];
        budget_update(&mut a, d, obs, x[i], j, 0.0);
        for k in 0..d {
            let term = -a[k];
            sum[k] += term;
            sq[k] += term * term;
        }
    }
    let n = f64::from(draws);
    let mut worst = 0.0f64;
    for k in 0..d {
        let mean = sum[k] / n;
        let se = ((sq[k] / n - mean * mean) / n).sqrt();
        worst = worst.max((mean - target[k]).abs() / se);
    }
    verdict(
        worst <= 3.0,
        format!("max |mean - A'x| / se = {worst:.2} over {draws} draws"),
    )
}

fn delta_estimator() -> Verdict {
    let mut good = 0;
    let mut max_samples = 0;
    for seed in 0..100 {
        let mut o = BanditOracle::new(matching_pennies(), NoiseModel::BernoulliSign, seed, 0);
        let e = estimate_delta(&mut o, 0.05, DEFAULT_SAMPLE_CAP).unwrap();
        if e.delta_hat / 2.0 <= 1.0 && 1.0 <= 2.0 * e.delta_hat && e.samples_used <= 366 {
            good += 1;
        }
        max_samples = max_samples.max(e.samples_used);
    }
    let mut o = BanditOracle::new(matching_pennies(), NoiseModel::Noiseless, 0, 0);
    let stopped = estimate_delta(&mut o, 0.05, DEFAULT_SAMPLE_CAP).unwrap().stopped_at_n;
    verdict(
        good >= 95 && stopped == 163,
        format!("{good}/100 contained within 366 samples (max used {max_samples}), zero-noise stop at {stopped}"),
    )
}

fn sigma_estimator() -> Verdict {
    let sp = SupportPair::full(2, 2);
    let sigma = 2f64.sqrt();
    let mut good = 0;
    for seed in 0..100 {
        let mut o = BanditOracle::new(matching_pennies(), NoiseModel::BernoulliSign, seed, 0);
        let e = estimate_sigma(&mut o, &sp, 0.05, DEFAULT_SAMPLE_CAP).unwrap();
        if e.sigma_hat / 2.0 <= sigma && sigma <= 2.0 * e.sigma_hat {
            good += 1;
        }
    }
    let mut o = BanditOracle::new(matching_pennies(), NoiseModel::Noiseless, 0, 0);
    let used = estimate_sigma(&mut o, &sp, 0.05, DEFAULT_SAMPLE_CAP)
        .unwrap()
        .samples_used;
    verdict(
        good >= 95 && used == 82,
        format!("{good}/100 contained, zero-noise samples {used}"),
    )
}

fn covering_family(m0: usize, rng: &mut ChaCha8Rng) -> GapFamily {
    let c: Vec<f64> = (0..m0).map(|_| rng.gen_range(0.1..1.0)).collect();
    let mut lp = LinearProgram::new(Sense::Minimize, c);
    for k in 0..m0 {
        lp.set_bounds(k, 0.0, 1.0);
    }
    for _ in 0..rng.gen_range(1..=3) {
        let coef: Vec<f64> = (0..m0).map(|_| rng.gen_range(0.0..1.0)).collect();
        let need = rng.gen_range(0.05..0.5) * coef.iter().sum::<f64>();
        lp.add_constraint(coef.iter().map(|v| -v).collect(), ConstraintKind::Le, -need);
    }
    GapFamily::new(lp, (0..m0).collect()).unwrap()
}

fn agree(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= 1e-9
}

fn gap_oracle() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst = 0.0f64;
    let mut mismatches = 0;
    for k in 0..50 {
        let (fam, reference) = if k % 2 == 0 {
            let m1 = rng.gen_range(1..=8);
            let m2 = rng.gen_range(1..=4);
            let g = generate_instance(InstanceKind::UniformRandom, (m1, m2), rng.gen()).unwrap();
            (
                GapFamily::primal_game(g.matrix()),
                min_nonzero_gap_enum(g.matrix()).unwrap().0,
            )
        } else {
            let fam = covering_family(rng.gen_range(1..=8), &mut rng);
            let reference = min_gap_enum(&fam).unwrap();
            (fam, reference)
        };
        let mip = min_gap_mip(&fam, TAU_GAP).unwrap_or(f64::INFINITY);
        if !agree(mip, reference) {
            mismatches += 1;
        }
        if mip.is_finite() && reference.is_finite() {
            worst = worst.max((mip - reference).abs());
        }
    }
    verdict(
        mismatches == 0,
        format!("{mismatches} mismatches, max finite difference {worst:.2e}"),
    )
}

fn dual_reduction() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        worst = worst.max(DualReduction::new(random_game(&mut rng, 6)).value_residual());
    }
    let cfg = ResolveConfig::new(0.1, 400).with_horizon(1000);
    let g = dominant_game();
    let (x, y, _) = solve_both_players(0, &g, NoiseModel::Noiseless, &cfg).unwrap();
    let dx = distance_to_ne_set(&g, &x, Side::Row).unwrap();
    let dy = distance_to_ne_set(&g, &y, Side::Column).unwrap();
    verdict(
        worst <= 1e-8 && dx <= 2e-3 && dy <= 2e-3,
        format!("max |V + V_dual| = {worst:.2e}, PSNE distances {dx:.2e} / {dy:.2e}"),
    )
}

fn end_to_end() -> Verdict {
    let mut cfg = ExperimentConfig::new(
        generated(InstanceKind::Dominant, (2, 2)),
        Algorithm::Resolve,
        vec![1 << 13],
    );
    cfg.noise = NoiseModel::BernoulliSign;
    cfg.replications = 500;
    let rec = &run_experiment(&cfg, None).unwrap()[0];
    let gap = rec.gap_of_mean.unwrap();
    verdict(
        gap <= 0.05,
        format!(
            "gap of mean x_bar = {gap:.2e} (mean per-run gap {:.2e})",
            rec.mean_gap.unwrap()
        ),
    )
}

fn run_cli(args: &[&str], dir: &Path, out_name: &str) -> (i32, Vec<u8>, Vec<u8>) {
    let out = dir.join(out_name);
    let o = Command::new(env!("CARGO_BIN_EXE_saddle"))
        .args(args)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    let file = fs::read(&out).unwrap_or_default();
    (o.status.code().unwrap_or(-1), o.stdout, file)
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    fs::write(p.join("mp.txt"), "2 2\n1 -1\n-1 1\n").unwrap();
    fs::write(
        p.join("exp.cfg"),
        "instance = matching_pennies\nnoise = bernoulli_sign\nalgorithm = resolve\nhorizons = 64, 256\nreplications = 16\nmaster_seed = 5\n",
    )
    .unwrap();
    let m = p.join("mp.txt");
    let c = p.join("exp.cfg");
    let (m, c) = (m.to_str().unwrap(), c.to_str().unwrap());
    let commands: Vec<Vec<&str>> = vec![
        vec!["solve", m],
        vec![
            "support",
            m,
            "--n",
            "4000",
            "--eps",
            "0.05",
            "--noise",
            "bernoulli_sign",
        ],
        vec![
            "resolve",
            m,
            "--eps",
            "0.1",
            "--n1",
            "400",
            "--horizon",
            "500",
            "--noise",
            "bernoulli_sign",
        ],
        vec!["estimate-delta", m, "--eps", "0.05", "--noise", "bernoulli_sign"],
        vec!["estimate-sigma", m, "--eps", "0.05", "--noise", "bernoulli_sign"],
        vec!["experiment", c],
        vec!["bias-curve", c],
    ];
    let mut failures = Vec::new();
    for cmd in &commands {
        let mut runs = Vec::new();
        for (k, workers) in ["1", "1", "8"].iter().enumerate() {
            let mut args = cmd.clone();
            args.extend(["--seed", "17", "--workers", workers]);
            let (code, stdout, file) = run_cli(&args, p, &format!("out{k}.csv"));
            let dat = fs::read(p.join(format!("out{k}.dat"))).unwrap_or_default();
            runs.push((code, stdout, file, dat));
        }
        if runs[0].0 != 0 || runs.windows(2).any(|w| w[0] != w[1]) || runs[0].1.is_empty() {
            failures.push(cmd[0]);
        }
    }
    verdict(
        failures.is_empty(),
        format!(
            "{} commands x 3 runs (1, 1, 8 workers); differing: {failures:?}",
            commands.len()
        ),
    )
}

type Criterion = (&'static str, Duration, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 13] = [
        (
            "LP strong duality and complementary slackness",
            Duration::from_secs(10),
            lp_core,
        ),
        (
            "2x2 exact value against grid search",
            Duration::from_secs(5),
            two_by_two_grid,
        ),
        (
            "support identification success rate",
            Duration::from_secs(60),
            support_identification,
        ),
        ("noiseless support golden traces", Duration::MAX, golden_traces),
        (
            "resolving fixed point at T = 1000",
            Duration::from_secs(5),
            resolving_fixed_point,
        ),
        ("bias decay slope", Duration::from_secs(15 * 60), bias_decay),
        ("drift unbiasedness", Duration::from_secs(30), drift_unbiasedness),
        ("gap estimator", Duration::from_secs(60), delta_estimator),
        ("singular value estimator", Duration::from_secs(60), sigma_estimator),
        ("gap oracle equivalence", Duration::from_secs(60), gap_oracle),
        ("dual reduction", Duration::MAX, dual_reduction),
        ("end-to-end suboptimality", Duration::from_secs(10 * 60), end_to_end),
        ("CLI determinism", Duration::MAX, determinism),
    ];
    let mut passed = 0;
    for (k, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = run();
        let elapsed = start.elapsed();
        let in_time = elapsed < *limit;
        let pass = v.pass && in_time;
        passed += usize::from(pass);
        let timing = if in_time {
            format!("{:.2}s", elapsed.as_secs_f64())
        } else {
            format!("{:.2}s, over the {}s limit", elapsed.as_secs_f64(), limit.as_secs())
        };
        println!(
            "{} {:>2} {name}: {} ({timing})",
            if pass { "PASS" } else { "FAIL" },
            k + 1,
            v.detail
        );
    }
    println!("{passed}/{} criteria passed", criteria.len());
    if passed < criteria.len() && std::env::var_os("SADDLE_ACCEPTANCE_STRICT").is_some() {
        std::process::exit(1);
    }
}
