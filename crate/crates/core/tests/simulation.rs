use maxdep::{
    empirical_variogram, enumerate_subsets, logistic_variogram, rank_transform, sample_logistic,
    EstimationOptions, LogisticModel, SimulationSpec, SubsetIndex,
};

fn sample(alpha: f64, k: usize, n: usize, seed: u64) -> maxdep::BlockMaximaTable {
    let model = LogisticModel::new(alpha, k).unwrap();
    sample_logistic(&SimulationSpec::new(model, n, seed).unwrap()).unwrap()
}

#[test]
fn pairs_are_exchangeable() {
    let t = sample(0.6, 4, 20_000, 21);
    let p = rank_transform(&t, EstimationOptions::default());
    let pair_values: Vec<f64> = enumerate_subsets(4, 2)
        .unwrap()
        .into_iter()
        .filter(|s| s.len() == 2)
        .map(|s| empirical_variogram(&p, &s).unwrap())
        .collect();
    let lo = pair_values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = pair_values
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    assert!(hi - lo < 0.04, "{pair_values:?}");

    // Same rows, columns reversed: identical estimate on the full set.
    let reversed = t.select_columns(&[3, 2, 1, 0]).unwrap();
    let full = SubsetIndex::full(4).unwrap();
    let a = empirical_variogram(&p, &full).unwrap();
    let b = empirical_variogram(
        &rank_transform(&reversed, EstimationOptions::default()),
        &full,
    )
    .unwrap();
    assert_eq!(a, b);
}

#[test]
fn higher_dimensional_closed_form_matches_simulation() {
    // k = 4 and 5 go beyond the acceptance grid, where the full-set
    // variogram no longer reduces to the pairwise one.
    for (alpha, k, seed) in [(0.5, 4, 31), (0.35, 5, 32)] {
        let truth = logistic_variogram(&LogisticModel::new(alpha, k).unwrap()).unwrap();
        let t = sample(alpha, k, 50_000, seed);
        let est = empirical_variogram(
            &rank_transform(&t, EstimationOptions::default()),
            &SubsetIndex::full(k).unwrap(),
        )
        .unwrap();
        assert!(
            (est - truth).abs() <= 0.02,
            "alpha={alpha} k={k}: {est} vs {truth}"
        );
    }
}

#[test]
fn subsets_of_a_logistic_sample_follow_the_lower_dimensional_model() {
    // Margins of a logistic vector are logistic with the same alpha.
    let t = sample(0.45, 5, 40_000, 33);
    let p = rank_transform(&t, EstimationOptions::default());
    for s in [vec![0, 2], vec![1, 3, 4], vec![0, 1, 2, 3]] {
        let m = s.len();
        let est = empirical_variogram(&p, &SubsetIndex::new(s, 5).unwrap()).unwrap();
        let truth = logistic_variogram(&LogisticModel::new(0.45, m).unwrap()).unwrap();
        assert!((est - truth).abs() <= 0.02, "m={m}: {est} vs {truth}");
    }
}
