//! Finite-difference checks of every model-kind loss, generator and
//! discriminator side, against the engine's gradients.

use mvae::train::LossProbe;
use mvae::{ModelKind, MvaeConfig};
use numcore::{Matrix, Prng};

const H: f64 = 1e-5;
const REL_TOL: f64 = 1e-4;

fn tiny_cfg(kind: ModelKind, seed: u64) -> MvaeConfig {
    MvaeConfig {
        hidden_dim: 5,
        seed,
        ..MvaeConfig::new(kind, 3)
    }
}

fn tiny_batch(seed: u64) -> Vec<Matrix> {
    let mut rng = Prng::seed_from_u64(seed);
    vec![rng.normal_matrix(4, 3, 1.0), rng.normal_matrix(4, 2, 1.0)]
}

fn check_gen_loss(kind: ModelKind, seed: u64) {
    let cfg = tiny_cfg(kind, seed);
    let mut probe = LossProbe::new(&cfg, tiny_batch(seed ^ 0xABCD), seed ^ 0x1234);
    let (_, grads) = probe.gen_loss_and_grads().unwrap();
    for p in 0..probe.gen_param_count() {
        for j in 0..grads[p].data().len() {
            let orig = probe.gen_param(p).data()[j];
            probe.gen_param_mut(p).data_mut()[j] = orig + H;
            let plus = probe.gen_loss().unwrap();
            probe.gen_param_mut(p).data_mut()[j] = orig - H;
            let minus = probe.gen_loss().unwrap();
            probe.gen_param_mut(p).data_mut()[j] = orig;
            let fd = (plus - minus) / (2.0 * H);
            let an = grads[p].data()[j];
            let rel = (an - fd).abs() / an.abs().max(fd.abs()).max(1.0);
            assert!(
                rel < REL_TOL,
                "{} gen seed {seed} param {p} entry {j}: analytic {an} vs fd {fd}",
                kind.name()
            );
        }
    }
}

fn check_disc_loss(kind: ModelKind, seed: u64) {
    let cfg = tiny_cfg(kind, seed);
    let mut probe = LossProbe::new(&cfg, tiny_batch(seed ^ 0xBEEF), seed ^ 0x5678);
    let (_, grads) = probe.disc_loss_and_grads().unwrap();
    for p in 0..probe.disc_param_count() {
        for j in 0..grads[p].data().len() {
            let orig = probe.disc_param(p).data()[j];
            probe.disc_param_mut(p).data_mut()[j] = orig + H;
            let plus = probe.disc_loss().unwrap();
            probe.disc_param_mut(p).data_mut()[j] = orig - H;
            let minus = probe.disc_loss().unwrap();
            probe.disc_param_mut(p).data_mut()[j] = orig;
            let fd = (plus - minus) / (2.0 * H);
            let an = grads[p].data()[j];
            let rel = (an - fd).abs() / an.abs().max(fd.abs()).max(1.0);
            assert!(
                rel < REL_TOL,
                "{} disc seed {seed} param {p} entry {j}: analytic {an} vs fd {fd}",
                kind.name()
            );
        }
    }
}

#[test]
fn fd_every_model_kind_generator_loss() {
    for kind in ModelKind::ALL {
        for seed in 0..3u64 {
            check_gen_loss(kind, 50 + seed);
        }
    }
}

#[test]
fn fd_adversarial_discriminator_losses() {
    for kind in [ModelKind::JointAae, ModelKind::WAae] {
        for seed in 0..3u64 {
            check_disc_loss(kind, 90 + seed);
        }
    }
}
