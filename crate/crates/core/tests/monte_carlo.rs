use graph_energy::exec::Execution;
use graph_energy::experiments::{self, ExperimentConfig, ExperimentKind};
use graph_energy::graphs::PartitionSpec;
use graph_energy::laws;

#[test]
fn balanced_bipartite_matches_square_case() {
    let config = ExperimentConfig {
        n: 2000,
        parts: Some(PartitionSpec::equal(2).unwrap()),
        trials: 4,
        seed: 7,
        centered: false,
        ..ExperimentConfig::new(ExperimentKind::Bipartite)
    };
    let record = experiments::run_with(&config, Execution::default()).unwrap();
    let mean = record.aggregate.unwrap().mean;
    let target = laws::bipartite_coeff(0.5, 0.5, 0.5).unwrap();
    assert!((target - 0.30010544).abs() < 1e-8);
    assert!((mean - target).abs() / target < 0.05, "{mean} vs {target}");
}

#[test]
fn vanishing_parts_approach_er_coefficient() {
    let config = ExperimentConfig {
        n: 1600,
        vanishing_parts: true,
        trials: 4,
        seed: 7,
        centered: false,
        ..ExperimentConfig::new(ExperimentKind::Multipartite)
    };
    let record = experiments::run_with(&config, Execution::default()).unwrap();
    assert!(record.failures.is_empty());
    let mean = record.aggregate.unwrap().mean;
    let target = laws::er_energy_coeff(0.5).unwrap();
    assert!((mean - target).abs() / target < 0.06, "{mean} vs {target}");
}

#[test]
fn balanced_two_part_esd_converges() {
    let config = ExperimentConfig {
        m: Some(2),
        n_list: Some(vec![250, 500, 1000]),
        trials: 1,
        seed: 7,
        ..ExperimentConfig::new(ExperimentKind::Convergence)
    };
    let record = experiments::run_with(&config, Execution::default()).unwrap();
    let ks: Vec<f64> = record.ladder.iter().map(|l| l.mean_ks).collect();
    assert_eq!(ks.len(), 3);
    assert!(ks[2] < 0.06 && ks[2] < ks[0], "{ks:?}");
}
