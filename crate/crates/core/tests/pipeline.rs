use saddle::dual_player::solve_both_players;
use saddle::game::{distance_to_ne_set, generate_instance, rock_paper_scissors, suboptimality_gap, InstanceKind, Side};
use saddle::resolving::{run_two_phase, ResolveConfig};
use saddle::sampling::{BanditOracle, NoiseModel};
use saddle::support_id::{identify_support, SupportPair};

#[test]
fn exact_elimination_recovers_planted_supports() {
    for seed in 0..20 {
        let d = 1 + seed as usize % 3;
        let g = generate_instance(InstanceKind::PlantedSupport(d), (4, 5), seed).unwrap();
        let cert = g.nash();
        let want = SupportPair::new(cert.row_support(), cert.column_support()).unwrap();
        let (got, _) = identify_support(g.matrix(), 1e30, 0.05).unwrap();
        assert_eq!(got, want, "seed {seed}");
    }
}

#[test]
fn noisy_runs_approach_equilibrium_on_planted_games() {
    for seed in 0..4 {
        let g = generate_instance(InstanceKind::PlantedSupport(2), (3, 3), seed).unwrap();
        let mut o = BanditOracle::new(g.clone(), NoiseModel::UniformSlack, seed, 1);
        let out = run_two_phase(&mut o, &ResolveConfig::new(0.05, 20_000).with_horizon(40_000)).unwrap();
        let (want, _) = identify_support(g.matrix(), 1e30, 0.05).unwrap();
        assert_eq!(out.support, want, "seed {seed}");
        let gap = suboptimality_gap(&g, &out.x_bar, Side::Row).unwrap();
        assert!(gap < 0.05, "seed {seed}: gap {gap}");
    }
}

#[test]
fn rock_paper_scissors_both_players() {
    let g = rock_paper_scissors();
    let cfg = ResolveConfig::new(0.1, 900).with_horizon(50_000);
    let (x, y, report) = solve_both_players(3, &g, NoiseModel::TruncatedGaussian { sigma: 0.5 }, &cfg).unwrap();
    assert_eq!(report.row.support, SupportPair::full(3, 3));
    assert_eq!(report.column.support, SupportPair::full(3, 3));
    assert!(distance_to_ne_set(&g, &x, Side::Row).unwrap() < 0.05);
    assert!(distance_to_ne_set(&g, &y, Side::Column).unwrap() < 0.05);
}
