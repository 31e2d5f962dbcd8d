//! Cross-kind behaviour: separable blobs, oracle equality, determinism,
//! degenerate inputs, and file round trips.

use classifiers::{evaluate, train_classifier, ClassifierKind, ClassifierModel, Hyper};
use numcore::{Matrix, Prng};

/// Two well-separated 2-D Gaussian blobs (margin of a couple of sigma).
fn blobs(n: usize, seed: u64) -> (Matrix, Vec<i64>) {
    let mut rng = Prng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    for i in 0..n {
        let cls = (i % 2) as i64;
        let c = if cls == 0 { -2.0 } else { 2.0 };
        rows.push(vec![c + rng.next_normal(), c + rng.next_normal()]);
        y.push(cls);
    }
    (Matrix::from_rows(&rows).unwrap(), y)
}

#[test]
fn every_kind_reaches_95_percent_on_separable_blobs() {
    let (x, y) = blobs(200, 1);
    let hyper = Hyper::default();
    for kind in ClassifierKind::ALL {
        let model = train_classifier(&x, &y, kind, &hyper, 42).unwrap();
        let pred = model.predict(&x).unwrap();
        let m = evaluate(&y, &pred, &model.labels).unwrap();
        assert!(
            m.accuracy >= 0.95,
            "{kind}: training accuracy {} < 0.95",
            m.accuracy
        );
    }
}

/// Brute-force KNN oracle with the same tie rules, written independently:
/// full sort by (distance, training index), majority vote, vote ties to
/// the smaller class label.
fn knn_oracle(x: &Matrix, y: &[i64], labels: &[i64], query: &[f64], k: usize) -> i64 {
    let mut all: Vec<(f64, usize)> = (0..x.rows())
        .map(|i| {
            let d: f64 = x
                .row(i)
                .iter()
                .zip(query)
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            (d, i)
        })
        .collect();
    all.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut votes = vec![0usize; labels.len()];
    for &(_, i) in all.iter().take(k) {
        let cls = labels.iter().position(|&l| l == y[i]).unwrap();
        votes[cls] += 1;
    }
    let mut best = 0;
    for c in 0..votes.len() {
        if votes[c] > votes[best] {
            best = c;
        }
    }
    labels[best]
}

#[test]
fn knn_matches_brute_force_oracle_on_50_random_queries() {
    let mut rng = Prng::seed_from_u64(77);
    let (x, y) = blobs(80, 2);
    let model = train_classifier(&x, &y, ClassifierKind::Knn, &Hyper::default(), 0).unwrap();
    // the model stores f32-rounded training data; the oracle scans the same
    let stored = x.quantize_f32();
    let mut queries = Vec::new();
    for _ in 0..50 {
        queries.push(vec![rng.next_normal() * 3.0, rng.next_normal() * 3.0]);
    }
    let qm = Matrix::from_rows(&queries).unwrap();
    let preds = model.predict(&qm).unwrap();
    for (q, &pred) in queries.iter().zip(&preds) {
        let expect = knn_oracle(&stored, &y, &model.labels, q, 5);
        assert_eq!(pred, expect, "query {q:?}");
    }
}

#[test]
fn knn_k1_returns_training_point_label() {
    let (x, y) = blobs(30, 3);
    let hyper = Hyper {
        knn_k: 1,
        ..Hyper::default()
    };
    let model = train_classifier(&x, &y, ClassifierKind::Knn, &hyper, 0).unwrap();
    let preds = model.predict(&x).unwrap();
    assert_eq!(preds, y);
}

#[test]
fn argmax_of_proba_equals_predict_for_all_kinds() {
    let (x, y) = blobs(60, 4);
    let mut rng = Prng::seed_from_u64(5);
    let mut queries = Vec::new();
    for _ in 0..40 {
        queries.push(vec![rng.next_normal() * 2.5, rng.next_normal() * 2.5]);
    }
    let qm = Matrix::from_rows(&queries).unwrap();
    for kind in ClassifierKind::ALL {
        let model = train_classifier(&x, &y, kind, &Hyper::default(), 7).unwrap();
        let proba = model.predict_proba(&qm).unwrap();
        let preds = model.predict(&qm).unwrap();
        for r in 0..qm.rows() {
            let row = proba.row(r);
            let sum: f64 = row.iter().sum();
            assert!((sum - 1.0).abs() < 1e-9, "{kind}: proba row sums to {sum}");
            let mut best = 0;
            for (c, &v) in row.iter().enumerate() {
                if v > row[best] {
                    best = c;
                }
            }
            assert_eq!(preds[r], model.labels[best], "{kind} row {r}");
        }
    }
}

#[test]
fn zero_weight_logreg_gives_uniform_probabilities() {
    let (x, y) = blobs(20, 6);
    let hyper = Hyper {
        logreg_epochs: 0,
        ..Hyper::default()
    };
    let model = train_classifier(&x, &y, ClassifierKind::LogReg, &hyper, 0).unwrap();
    let p = model.predict_proba(&x).unwrap();
    for r in 0..p.rows() {
        assert!((p.get(r, 0) - 0.5).abs() < 1e-12);
        assert!((p.get(r, 1) - 0.5).abs() < 1e-12);
    }
}

#[test]
fn single_class_data_predicts_that_class() {
    let x = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0], vec![5.0, 6.0]]).unwrap();
    let y = vec![7i64, 7, 7];
    for kind in ClassifierKind::ALL {
        let model = train_classifier(&x, &y, kind, &Hyper::default(), 0).unwrap();
        let preds = model.predict(&x).unwrap();
        assert_eq!(preds, y, "{kind}");
    }
}

#[test]
fn row_label_mismatch_and_nan_are_errors() {
    let x = Matrix::from_rows(&[vec![1.0], vec![2.0]]).unwrap();
    let err = train_classifier(&x, &[0], ClassifierKind::Knn, &Hyper::default(), 0).unwrap_err();
    assert!(matches!(err, classifiers::Error::Contract(_)));

    let bad = Matrix::from_vec(2, 1, vec![1.0, f64::NAN]).unwrap();
    let err =
        train_classifier(&bad, &[0, 1], ClassifierKind::Knn, &Hyper::default(), 0).unwrap_err();
    assert!(matches!(err, classifiers::Error::Integrity(_)));
}

#[test]
fn retraining_with_same_seed_is_bit_reproducible() {
    let (x, y) = blobs(80, 8);
    let hyper = Hyper {
        trees: 20,
        ..Hyper::default()
    };
    let mut rng = Prng::seed_from_u64(9);
    let qm = rng.normal_matrix(25, 2, 2.0);
    for kind in ClassifierKind::ALL {
        let a = train_classifier(&x, &y, kind, &hyper, 1234).unwrap();
        let b = train_classifier(&x, &y, kind, &hyper, 1234).unwrap();
        assert_eq!(a.to_bytes(), b.to_bytes(), "{kind}: differing model bytes");
        assert_eq!(
            a.predict_proba(&qm).unwrap(),
            b.predict_proba(&qm).unwrap(),
            "{kind}"
        );
    }
}

#[test]
fn file_round_trip_is_bit_identical() {
    let (x, y) = blobs(60, 10);
    let hyper = Hyper {
        trees: 10,
        ..Hyper::default()
    };
    let dir = tempfile::tempdir().unwrap();
    let mut rng = Prng::seed_from_u64(11);
    let qm = rng.normal_matrix(20, 2, 2.0);
    for kind in ClassifierKind::ALL {
        let model = train_classifier(&x, &y, kind, &hyper, 3).unwrap();
        let path = dir.path().join(format!("{kind}.mvcl"));
        model.save(&path).unwrap();
        let loaded = ClassifierModel::load(&path).unwrap();
        assert_eq!(
            model.predict_proba(&qm).unwrap(),
            loaded.predict_proba(&qm).unwrap(),
            "{kind}"
        );
        assert_eq!(model.to_bytes(), loaded.to_bytes(), "{kind}");
    }
}

#[test]
fn corrupted_files_raise_format_errors() {
    let (x, y) = blobs(30, 12);
    let model = train_classifier(&x, &y, ClassifierKind::LogReg, &Hyper::default(), 0).unwrap();
    let bytes = model.to_bytes();

    let mut bad_magic = bytes.clone();
    bad_magic[0] = b'Z';
    assert!(matches!(
        ClassifierModel::from_bytes(&bad_magic),
        Err(classifiers::Error::Format(_))
    ));

    let mut bad_version = bytes.clone();
    bad_version[4] = 0xFF;
    assert!(ClassifierModel::from_bytes(&bad_version)
        .unwrap_err()
        .to_string()
        .contains("version"));

    assert!(matches!(
        ClassifierModel::from_bytes(&bytes[..bytes.len() - 3]),
        Err(classifiers::Error::Format(_))
    ));
}

#[test]
fn dimension_mismatch_at_predict_is_an_error() {
    let (x, y) = blobs(30, 13);
    let model = train_classifier(&x, &y, ClassifierKind::Svm, &Hyper::default(), 0).unwrap();
    let wrong = Matrix::zeros(4, 5);
    assert!(matches!(
        model.predict(&wrong),
        Err(classifiers::Error::FeatureDim { .. })
    ));
}
