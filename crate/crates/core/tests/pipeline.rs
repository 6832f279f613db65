use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use toppr::io::{read_features, read_npy, write_npy, write_npy_as, NpyDtype};
use toppr::scoring::{dataset_seed, estimate_support};
use toppr::synth::{self, long_tail_diversity, LongTailSpec, ScenarioKind, ScenarioSpec};
use toppr::{top_pr, Error, FeatureMatrix, Kernel, PipelineConfig};

fn normal(rows: usize, cols: usize, seed: u64) -> FeatureMatrix {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let data = (0..rows * cols).map(|_| StandardNormal.sample(&mut rng)).collect();
    FeatureMatrix::new(rows, cols, data).unwrap()
}

#[test]
fn far_outlier_is_outside_its_own_support() {
    let mut rows: Vec<Vec<f64>> = normal(500, 2, 9).row_iter().map(|r| r.to_vec()).collect();
    rows.push(vec![30.0, 30.0]);
    let x = FeatureMatrix::from_rows(&rows).unwrap();
    for kernel in [Kernel::Uniform, Kernel::Gaussian, Kernel::Epanechnikov, Kernel::Cosine] {
        let cfg = PipelineConfig::default().with_proj_dim(None).with_kernel(kernel);
        let est = estimate_support(&x, &cfg, dataset_seed(cfg.master_seed, &x)).unwrap();
        assert!(est.model.eval(&[30.0, 30.0]) <= est.band.c, "{kernel}");
        assert!(!est.contains(&[30.0, 30.0]));
    }
}

#[test]
fn coincident_points_are_degenerate() {
    let x = FeatureMatrix::new(100, 3, vec![0.25; 300]).unwrap();
    let cfg = PipelineConfig::default().with_proj_dim(None);
    let err = estimate_support(&x, &cfg, 1).unwrap_err();
    assert!(matches!(err, Error::DegenerateData(_)), "{err}");
}

#[test]
fn support_estimate_is_deterministic() {
    let x = normal(300, 4, 2);
    let cfg = PipelineConfig::default().with_proj_dim(None);
    let a = estimate_support(&x, &cfg, 77).unwrap();
    let b = estimate_support(&x, &cfg, 77).unwrap();
    assert_eq!(a.band, b.band);
    assert_eq!(a.model.bandwidth(), b.model.bandwidth());
}

#[test]
fn self_score_is_one_for_every_kernel() {
    let x = normal(250, 12, 4);
    for kernel in [Kernel::Uniform, Kernel::Gaussian, Kernel::Epanechnikov, Kernel::Cosine] {
        let cfg = PipelineConfig::default().with_proj_dim(Some(6)).with_kernel(kernel);
        let r = top_pr(&x, &x, &cfg).unwrap();
        assert_eq!((r.top_p, r.top_r, r.f1), (1.0, 1.0, 1.0), "{kernel}");
    }
}

#[test]
fn report_counts_match_ratios() {
    let spec = ScenarioSpec::new(ScenarioKind::Shift).sizes(300, 260).dim(8).mu(0.3).seed(5);
    let (real, fake) = synth::gen_shift_pair(&spec).unwrap();
    let cfg = PipelineConfig::default().with_proj_dim(Some(4)).with_seed(3);
    let r = top_pr(&real, &fake, &cfg).unwrap();
    assert_eq!(r.top_p, r.n_fake_in_both as f64 / r.n_fake_in_own_support as f64);
    assert_eq!(r.top_r, r.n_real_in_both as f64 / r.n_real_in_own_support as f64);
    assert_eq!((r.n_real, r.n_fake), (301, 261));
    assert_eq!(r.proj_dim_used, Some(4));
}

#[test]
fn mismatched_columns_are_rejected() {
    let cfg = PipelineConfig::default().with_proj_dim(None);
    let err = top_pr(&normal(20, 3, 1), &normal(20, 4, 1), &cfg).unwrap_err();
    assert!(matches!(err, Error::DimMismatch { left: 3, right: 4 }), "{err}");
}

#[test]
fn npy_and_csv_files_agree() {
    let dir = tempfile::tempdir().unwrap();
    let x = FeatureMatrix::new(3, 2, vec![0.5, -1.0, 2.25, 4.0, -0.125, 8.0]).unwrap();

    let f8 = dir.path().join("x.npy");
    write_npy(&f8, &x).unwrap();
    assert_eq!(read_npy(&f8).unwrap(), x);

    // these values are exact in f32
    let f4 = dir.path().join("x4.npy");
    write_npy_as(&f4, &x, NpyDtype::F32).unwrap();
    assert_eq!(read_npy(&f4).unwrap(), x);

    let csv = dir.path().join("x.CSV");
    std::fs::write(&csv, "a,b\n0.5,-1\n2.25,4\n-0.125,8\n").unwrap();
    assert_eq!(read_features(&csv, true).unwrap(), x);
}

#[test]
fn long_tail_minor_decay_loses_eight_of_seventy() {
    let layout = LongTailSpec::default();
    let drop = long_tail_diversity(&layout, 500) - long_tail_diversity(&layout, 100);
    // four minors of 500 shrink to 100 against six majors of 2000
    assert!((drop - 0.8 / 7.0).abs() < 1e-12, "{drop}");
}
