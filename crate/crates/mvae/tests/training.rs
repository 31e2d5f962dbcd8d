//! Training-loop behaviour on synthetic two-view data.

use mvae::{train_mvae, ModelKind, MvaeConfig};
use numcore::{Matrix, Prng};
use textviews::{Provenance, ViewMatrix};

/// Two views driven by shared low-rank factors plus noise, so that a
/// joint latent can reconstruct both.
fn synthetic_views(rows: usize, dim: usize, seed: u64) -> Vec<ViewMatrix> {
    let mut rng = Prng::seed_from_u64(seed);
    let factors = rng.normal_matrix(rows, 3, 1.0);
    let mut views = Vec::new();
    for v in 0..2 {
        let mix = rng.normal_matrix(3, dim, 1.0);
        let noise = rng.normal_matrix(rows, dim, 0.1);
        let x = factors.matmul(&mix).unwrap().add(&noise).unwrap();
        views.push(ViewMatrix::new(
            format!("v{v}"),
            x,
            Provenance::Fitted,
        ));
    }
    views
}

fn quick_cfg(kind: ModelKind, seed: u64) -> MvaeConfig {
    MvaeConfig {
        hidden_dim: 32,
        epochs: 25,
        batch_size: 32,
        seed,
        ..MvaeConfig::new(kind, 4)
    }
}

#[test]
fn epochs_zero_returns_usable_initialized_model() {
    let views = synthetic_views(50, 6, 1);
    for kind in ModelKind::ALL {
        let cfg = MvaeConfig {
            epochs: 0,
            ..quick_cfg(kind, 9)
        };
        let model = train_mvae(&views, &cfg).unwrap();
        assert!(model.loss_history.is_empty());
        let z = model
            .encode_joint(&[views[0].matrix.clone(), views[1].matrix.clone()])
            .unwrap();
        assert_eq!(z.shape(), (50, 4));
        assert!(z.is_finite());
    }
}

#[test]
fn row_count_mismatch_is_integrity_error() {
    let mut views = synthetic_views(100, 6, 2);
    let trimmed = views[1].matrix.select_rows(&(0..99).collect::<Vec<_>>());
    views[1] = ViewMatrix::new("v1", trimmed, Provenance::Fitted);
    let err = train_mvae(&views, &quick_cfg(ModelKind::JointAae, 1)).unwrap_err();
    assert!(matches!(err, mvae::Error::Integrity(_)), "{err}");
}

#[test]
fn loss_decreases_for_every_kind() {
    let views = synthetic_views(120, 6, 3);
    for kind in ModelKind::ALL {
        let model = train_mvae(&views, &quick_cfg(kind, 11)).unwrap();
        assert_eq!(model.loss_history.len(), 25, "kind {kind}");
        let first = model.loss_history[0].recon;
        let last = model.loss_history.last().unwrap().recon;
        assert!(
            last.is_finite() && first.is_finite(),
            "kind {kind}: non-finite losses"
        );
        assert!(
            last < first,
            "kind {kind}: recon loss did not decrease ({first} -> {last})"
        );
    }
}

#[test]
fn reseeded_rerun_is_bit_identical() {
    let views = synthetic_views(80, 5, 4);
    for kind in ModelKind::ALL {
        let a = train_mvae(&views, &quick_cfg(kind, 21)).unwrap();
        let b = train_mvae(&views, &quick_cfg(kind, 21)).unwrap();
        assert_eq!(a.loss_history, b.loss_history, "kind {kind}");
        let za = a
            .encode_joint(&[views[0].matrix.clone(), views[1].matrix.clone()])
            .unwrap();
        let zb = b
            .encode_joint(&[views[0].matrix.clone(), views[1].matrix.clone()])
            .unwrap();
        assert_eq!(za, zb, "kind {kind}");
    }
}

#[test]
fn jointaae_encode_joint_is_mean_of_views() {
    // with identical per-view encoders and identical inputs, the fused
    // representation equals each per-view latent
    let views = synthetic_views(30, 6, 5);
    let model = train_mvae(&views, &quick_cfg(ModelKind::JointAae, 31)).unwrap();
    let inputs = [views[0].matrix.clone(), views[1].matrix.clone()];
    let encoded = model.encode_views(&inputs).unwrap();
    let mean = mvae::joint_mean(
        &encoded.iter().map(|(mu, _)| mu.clone()).collect::<Vec<_>>(),
    )
    .unwrap();
    let z = model.encode_joint(&inputs).unwrap();
    assert_eq!(z, mean);
}
