use mvae::{load_mvae, mvae_from_bytes, mvae_to_bytes, save_mvae, train_mvae, ModelKind, MvaeConfig};
use numcore::Prng;
use textviews::{Provenance, ViewMatrix};

fn small_model(kind: ModelKind) -> (mvae::TrainedMvae, Vec<ViewMatrix>) {
    let mut rng = Prng::seed_from_u64(8);
    let views = vec![
        ViewMatrix::new("a", rng.normal_matrix(40, 5, 1.0), Provenance::Fitted),
        ViewMatrix::new("b", rng.normal_matrix(40, 3, 1.0), Provenance::Fitted),
    ];
    let cfg = MvaeConfig {
        hidden_dim: 16,
        epochs: 3,
        batch_size: 16,
        seed: 77,
        ..MvaeConfig::new(kind, 4)
    };
    let model = train_mvae(&views, &cfg).unwrap();
    (model, views)
}

#[test]
fn round_trip_is_bit_identical_for_every_kind() {
    let dir = tempfile::tempdir().unwrap();
    for kind in ModelKind::ALL {
        let (model, views) = small_model(kind);
        let path = dir.path().join(format!("{kind}.mvae"));
        save_mvae(&model, &path).unwrap();
        let loaded = load_mvae(&path).unwrap();

        let inputs = [views[0].matrix.clone(), views[1].matrix.clone()];
        let z0 = model.encode_joint(&inputs).unwrap();
        let z1 = loaded.encode_joint(&inputs).unwrap();
        assert_eq!(z0, z1, "kind {kind}");

        // a second trip through bytes is also stable
        let again = mvae_from_bytes(&mvae_to_bytes(&loaded)).unwrap();
        assert_eq!(again.encode_joint(&inputs).unwrap(), z1);
    }
}

#[test]
fn wrong_magic_is_format_error() {
    let (model, _) = small_model(ModelKind::MVae);
    let mut bytes = mvae_to_bytes(&model);
    bytes[0] = b'X';
    let err = mvae_from_bytes(&bytes).unwrap_err();
    assert!(matches!(err, mvae::Error::Format(_)), "{err}");
    assert!(err.to_string().contains("magic"), "{err}");
}

#[test]
fn bad_version_is_format_error() {
    let (model, _) = small_model(ModelKind::MVae);
    let mut bytes = mvae_to_bytes(&model);
    bytes[4] = 0xFF;
    bytes[5] = 0xFF;
    let err = mvae_from_bytes(&bytes).unwrap_err();
    assert!(err.to_string().contains("version"), "{err}");
}

#[test]
fn kind_byte_out_of_range_is_format_error() {
    let (model, _) = small_model(ModelKind::MVae);
    let mut bytes = mvae_to_bytes(&model);
    bytes[6] = 42; // kind byte follows magic + version
    let err = mvae_from_bytes(&bytes).unwrap_err();
    assert!(err.to_string().contains("out of range"), "{err}");
}

#[test]
fn truncation_is_format_error() {
    let (model, _) = small_model(ModelKind::JointAae);
    let bytes = mvae_to_bytes(&model);
    for cut in [bytes.len() / 4, bytes.len() / 2, bytes.len() - 1] {
        let err = mvae_from_bytes(&bytes[..cut]).unwrap_err();
        assert!(matches!(err, mvae::Error::Format(_)), "cut {cut}: {err}");
    }
}

#[test]
fn trailing_garbage_is_format_error() {
    let (model, _) = small_model(ModelKind::Dvcca);
    let mut bytes = mvae_to_bytes(&model);
    bytes.push(0);
    let err = mvae_from_bytes(&bytes).unwrap_err();
    assert!(err.to_string().contains("trailing"), "{err}");
}
