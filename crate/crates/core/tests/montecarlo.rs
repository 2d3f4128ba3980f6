use dftsub::montecarlo::{
    moment_root_of, quarter_circle, run_experiment, sweep_rect, sweep_square_rows, verify_small_moment, ExperimentPlan,
    MatrixSpec, PlanPoint, Scaling,
};
use dftsub::random_sets::SetModel;

fn plan(n: usize, m: usize, trials: usize, seed: u64) -> ExperimentPlan {
    let model = SetModel::fixed(n, m).unwrap();
    ExperimentPlan::new(
        MatrixSpec::Dft { n },
        vec![PlanPoint { label: "p".into(), row_model: model, col_model: model }],
        trials,
        seed,
    )
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let p = plan(96, 30, 40, 123);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| run_experiment(&p).unwrap())
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn different_seeds_differ() {
    assert_ne!(run_experiment(&plan(64, 10, 10, 1)).unwrap(), run_experiment(&plan(64, 10, 10, 2)).unwrap());
}

#[test]
fn single_entry_submatrices_have_norm_inverse_root_n() {
    let mut p = plan(100, 1, 25, 0);
    p.scaling = Scaling::InverseSqrtDelta;
    let s = &run_experiment(&p).unwrap()[0];
    assert!((s.mean - 1.0).abs() < 1e-12 && s.std_dev < 1e-12);
}

#[test]
fn square_means_approach_the_quarter_circle() {
    let rows = sweep_square_rows(256, &[0.1, 0.25, 0.4], 40, 9).unwrap();
    for r in &rows {
        assert!((r.unscaled.mean - r.curve).abs() < 0.1, "delta={}: {} vs {}", r.delta, r.unscaled.mean, r.curve);
        assert!((r.scaled.mean - r.unscaled.mean / (r.m as f64 / 256.0).sqrt()).abs() < 1e-12);
    }
}

#[test]
fn equal_rect_rates_reduce_to_the_square_sweep() {
    let rect = sweep_rect(64, &[0.25], &[0.25], 30, 4, false).unwrap();
    let square = sweep_square_rows(64, &[0.25], 30, 4).unwrap();
    assert!((rect[0].summary.mean - square[0].unscaled.mean).abs() < 1e-12);
    assert!((rect[0].trend - quarter_circle(0.25)).abs() < 1e-15);
}

#[test]
fn moment_root_of_two_point_law() {
    // x in {0, 1} equally often: (E x^{2q})^{1/2q} = 2^{-1/2q}
    let xs: Vec<f64> = (0..1000).map(|i| (i % 2) as f64).collect();
    let e = moment_root_of(&xs, 4);
    assert!((e.root - 0.5f64.powf(1.0 / 8.0)).abs() < 1e-12);
    assert!(e.upper_edge >= e.root);
}

#[test]
fn small_moment_verifier_passes_at_moderate_size() {
    let r = verify_small_moment(1024, 14, 5000, 3).unwrap();
    assert!(r.holds, "{r:?}");
    assert!((r.bound - 28.0 / 32.0).abs() < 1e-15);
}
