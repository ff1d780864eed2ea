//! Cross-module pipeline checks on simulated data: scan/selection coherence,
//! preprocessing interactions and CSV file round trips.

use exdir::io::{read_csv_matrix, write_matrix_csv};
use exdir::{
    empirical_direction_counts, rank_transform, sample_asymptotic_dependent,
    sample_asymptotic_independent, scan, select_joint, select_local, standardize_margins,
    Criterion, GridSpec,
};

#[test]
fn scan_argmin_reproduces_joint_selection() {
    let (x, _) = sample_asymptotic_independent(5, 2_000, 7).unwrap();
    let grid: Vec<usize> = (1..=20).map(|i| i * 20).collect(); // 20, 40, ..., 400
    let table = scan(&x, &grid, Criterion::Qaic).unwrap();
    let (k_best, entry) = table.arg_min().unwrap();
    let joint = select_joint(&x, &grid, Criterion::Qaic).unwrap();
    assert_eq!(joint.k_hat, Some(k_best));
    assert_eq!(joint.s_hat, entry.best_s);
    assert_eq!(joint.diagnostics.r_hat, entry.r_hat);
}

#[test]
fn local_selection_on_axis_dominated_data() {
    // three Pareto axes, no joint blocks: the consistent criteria recover
    // the number of axes once the threshold is extreme enough (k = 0.01 n;
    // at this low total tail mass a 5% threshold is not extreme yet)
    let (x, truth) = sample_asymptotic_dependent(3, 0, 0, 3, 20_000, 123).unwrap();
    assert_eq!(truth.s_star, 3);
    for criterion in [Criterion::Bicu, Criterion::Qaic, Criterion::Bicl] {
        let result = select_local(&x, 200, criterion).unwrap();
        assert_eq!(result.s_hat, 3, "{criterion}");
        let mut indices: Vec<Vec<u32>> =
            result.directions.iter().map(|d| d.indices()).collect();
        indices.sort();
        assert_eq!(indices, vec![vec![1], vec![2], vec![3]], "{criterion}");
        assert!((result.p_star.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn alpha_one_standardization_is_identity() {
    let (x, _) = sample_asymptotic_independent(4, 400, 5).unwrap();
    let same = standardize_margins(&x, 1.0).unwrap();
    assert_eq!(x, same);
    let k = 20;
    assert_eq!(
        empirical_direction_counts(&x, k).unwrap(),
        empirical_direction_counts(&same, k).unwrap()
    );
}

#[test]
fn nontrivial_standardization_keeps_exceedances_bounded() {
    // direction sets may change under alpha != 1, but the number of strict
    // exceedances never exceeds k
    let (x, _) = sample_asymptotic_independent(4, 400, 6).unwrap();
    let k = 20;
    for alpha in [0.5, 2.0, 10.7] {
        let t = standardize_margins(&x, alpha).unwrap();
        let counts = empirical_direction_counts(&t, k).unwrap();
        assert!(counts.num_exceedances() <= k as u64, "alpha = {alpha}");
    }
}

#[test]
fn rank_transform_feeds_the_pipeline() {
    let (x, _) = sample_asymptotic_dependent(2, 1, 0, 5, 2_000, 8).unwrap();
    let t = rank_transform(&x);
    assert_eq!((t.n(), t.d()), (x.n(), x.d()));
    // transformed entries live on the discrete Pareto scale
    assert!(t.entries().iter().all(|&v| v >= 1.0));
    let result = select_local(&t, 100, Criterion::Mseic).unwrap();
    assert!(result.s_hat >= 1);
}

#[test]
fn csv_file_round_trip() {
    let (x, _) = sample_asymptotic_independent(3, 50, 99).unwrap();
    let dir = std::env::temp_dir().join(format!("exdir-pipeline-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("sample.csv");
    write_matrix_csv(&x, &path).unwrap();
    let back = read_csv_matrix(&path).unwrap();
    assert_eq!(x, back);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn selection_json_is_stable_and_complete() {
    let (x, _) = sample_asymptotic_dependent(2, 1, 0, 4, 1_000, 13).unwrap();
    let result = select_local(&x, 50, Criterion::Bicl).unwrap();
    let json = exdir::io::to_json(&result).unwrap();
    assert_eq!(json, exdir::io::to_json(&result).unwrap());
    let value: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(value["criterion"], "bicl");
    assert!(value["k_hat"].is_null());
    assert_eq!(value["s_hat"].as_u64().unwrap() as usize, result.s_hat);
    assert_eq!(value["directions"].as_array().unwrap().len(), result.s_hat);
    assert_eq!(value["p_star"].as_array().unwrap().len(), result.diagnostics.r_hat);
    assert_eq!(value["diagnostics"]["k"], 50);
    // directions serialize as 1-based index arrays
    assert!(value["directions"][0].as_array().unwrap()[0].as_u64().unwrap() >= 1);
}

#[test]
fn counts_round_trip_through_scan_csv() {
    let (x, _) = sample_asymptotic_independent(4, 800, 21).unwrap();
    let grid = GridSpec::Default.resolve(x.n(), x.d()).unwrap();
    let table = scan(&x, &grid, Criterion::Mseic).unwrap();
    let csv = exdir::io::scan_to_csv(&table);
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "k,r_hat,best_s,ic_value,skipped");
    let body: Vec<&str> = lines.collect();
    assert_eq!(body.len(), table.rows.len());
    for (line, row) in body.iter().zip(&table.rows) {
        let k: usize = line.split(',').next().unwrap().parse().unwrap();
        assert_eq!(k, row.k);
        assert!(line.ends_with("false") || line.ends_with("true"));
    }
}
