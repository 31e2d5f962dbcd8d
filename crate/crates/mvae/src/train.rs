//! The multi-view autoencoder training loop.
//!
//! One graph per optimization step (define-by-run). Adversarial kinds
//! alternate a discriminator/critic step with a generator step, 1:1.
//! Everything is single-threaded and driven by one seeded generator, so
//! a rerun with the same seed reproduces the loss history bit for bit.

use crate::config::{ModelKind, MvaeConfig};
use crate::error::{Error, Result};
use crate::loss::{
    adversarial_gen_term, critic_base, critic_gen_term, discriminator_bce, kl_pair_term, kl_term,
    mean_nodes, poe_nodes, recon_term,
};
use crate::model::{DecoderParams, EncoderParams, EpochLoss, TrainedMvae, ViewStats};
use numcore::graph::{Graph, NodeId};
use numcore::{derive_seed, AdamState, Matrix, Prng};
use textviews::ViewMatrix;

const DISC_HIDDEN: usize = 64;

#[derive(Clone, Copy)]
struct EncIdx {
    w1: usize,
    b1: usize,
    w_mu: usize,
    b_mu: usize,
    w_lv: Option<usize>,
    b_lv: Option<usize>,
}

#[derive(Clone, Copy)]
struct DecIdx {
    w1: usize,
    b1: usize,
    w2: usize,
    b2: usize,
}

/// Flat parameter storage for one optimizer group.
struct Pack {
    mats: Vec<Matrix>,
}

impl Pack {
    fn push(&mut self, m: Matrix) -> usize {
        self.mats.push(m);
        self.mats.len() - 1
    }

    fn insert_params(&self, g: &mut Graph) -> Vec<NodeId> {
        self.mats.iter().map(|m| g.parameter(m.clone())).collect()
    }

    fn insert_consts(&self, g: &mut Graph) -> Vec<NodeId> {
        self.mats.iter().map(|m| g.constant(m.clone())).collect()
    }
}

struct Trainer {
    kind: ModelKind,
    gen: Pack,
    enc_idx: Vec<EncIdx>,
    dec_idx: Vec<DecIdx>,
    disc: Option<Pack>,
}

impl Trainer {
    fn init(cfg: &MvaeConfig, stats: &[ViewStats]) -> Trainer {
        let variational = cfg.kind.is_variational();
        let mut gen = Pack { mats: Vec::new() };
        let mut enc_idx = Vec::new();
        let mut dec_idx = Vec::new();

        for (v, s) in stats.iter().enumerate() {
            let e = EncoderParams::init(
                s.dim,
                cfg.hidden_dim,
                cfg.latent_dim,
                variational,
                derive_seed(cfg.seed, &[1, v as u64]),
            );
            enc_idx.push(EncIdx {
                w1: gen.push(e.w1),
                b1: gen.push(e.b1),
                w_mu: gen.push(e.w_mu),
                b_mu: gen.push(e.b_mu),
                w_lv: e.w_lv.map(|m| gen.push(m)),
                b_lv: e.b_lv.map(|m| gen.push(m)),
            });
        }
        for (v, s) in stats.iter().enumerate() {
            let d = DecoderParams::init(
                cfg.latent_dim,
                cfg.hidden_dim,
                s.dim,
                derive_seed(cfg.seed, &[2, v as u64]),
            );
            dec_idx.push(DecIdx {
                w1: gen.push(d.w1),
                b1: gen.push(d.b1),
                w2: gen.push(d.w2),
                b2: gen.push(d.b2),
            });
        }

        let disc = cfg.kind.is_adversarial().then(|| {
            let mut rng = Prng::seed_from_u64(derive_seed(cfg.seed, &[3]));
            let mut p = Pack { mats: Vec::new() };
            p.push(rng.normal_matrix(
                cfg.latent_dim,
                DISC_HIDDEN,
                (2.0 / cfg.latent_dim as f64).sqrt(),
            ));
            p.push(Matrix::zeros(1, DISC_HIDDEN));
            p.push(rng.normal_matrix(DISC_HIDDEN, 1, (1.0 / DISC_HIDDEN as f64).sqrt()));
            p.push(Matrix::zeros(1, 1));
            p
        });

        Trainer {
            kind: cfg.kind,
            gen,
            enc_idx,
            dec_idx,
            disc,
        }
    }

    fn encoder_params(&self) -> Vec<EncoderParams> {
        self.enc_idx
            .iter()
            .map(|i| EncoderParams {
                w1: self.gen.mats[i.w1].clone(),
                b1: self.gen.mats[i.b1].clone(),
                w_mu: self.gen.mats[i.w_mu].clone(),
                b_mu: self.gen.mats[i.b_mu].clone(),
                w_lv: i.w_lv.map(|j| self.gen.mats[j].clone()),
                b_lv: i.b_lv.map(|j| self.gen.mats[j].clone()),
            })
            .collect()
    }
}

fn enc_forward(
    g: &mut Graph,
    x: NodeId,
    idx: EncIdx,
    nodes: &[NodeId],
) -> Result<(NodeId, Option<NodeId>)> {
    let xw = g.matmul(x, nodes[idx.w1])?;
    let pre = g.add(xw, nodes[idx.b1])?;
    let h = g.relu(pre);
    let hm = g.matmul(h, nodes[idx.w_mu])?;
    let mu = g.add(hm, nodes[idx.b_mu])?;
    let lv = match (idx.w_lv, idx.b_lv) {
        (Some(w), Some(b)) => {
            let hl = g.matmul(h, nodes[w])?;
            Some(g.add(hl, nodes[b])?)
        }
        _ => None,
    };
    Ok((mu, lv))
}

fn dec_forward(g: &mut Graph, z: NodeId, idx: DecIdx, nodes: &[NodeId]) -> Result<NodeId> {
    let zw = g.matmul(z, nodes[idx.w1])?;
    let pre = g.add(zw, nodes[idx.b1])?;
    let h = g.relu(pre);
    let hw = g.matmul(h, nodes[idx.w2])?;
    g.add(hw, nodes[idx.b2]).map_err(Into::into)
}

/// Discriminator / critic forward: latent -> ReLU(64) -> scalar logit.
fn disc_forward(g: &mut Graph, z: NodeId, nodes: &[NodeId]) -> Result<NodeId> {
    let zw = g.matmul(z, nodes[0])?;
    let pre = g.add(zw, nodes[1])?;
    let h = g.relu(pre);
    let hw = g.matmul(h, nodes[2])?;
    g.add(hw, nodes[3]).map_err(Into::into)
}

/// Generator-side loss for one batch. Returns (loss node, recon node).
#[allow(clippy::too_many_arguments)]
fn build_gen_loss(
    g: &mut Graph,
    trainer: &Trainer,
    nodes: &[NodeId],
    disc_nodes: Option<&[NodeId]>,
    xs: &[NodeId],
    cfg: &MvaeConfig,
    rng: &mut Prng,
) -> Result<(NodeId, NodeId)> {
    let rows = g.value(xs[0]).rows();
    let latent = cfg.latent_dim;
    let n_views = xs.len();

    let mut mus = Vec::with_capacity(n_views);
    let mut lvs = Vec::with_capacity(n_views);
    for (v, &x) in xs.iter().enumerate() {
        let (mu, lv) = enc_forward(g, x, trainer.enc_idx[v], nodes)?;
        mus.push(mu);
        if let Some(lv) = lv {
            lvs.push(lv);
        }
    }

    let decode_all = |g: &mut Graph, z: NodeId| -> Result<Vec<NodeId>> {
        (0..n_views)
            .map(|v| dec_forward(g, z, trainer.dec_idx[v], nodes))
            .collect()
    };

    match trainer.kind {
        ModelKind::JointAae | ModelKind::WAae => {
            let z = mean_nodes(g, &mus)?;
            let recons = decode_all(g, z)?;
            let recon = recon_term(g, xs, &recons)?;
            let logit = disc_forward(g, z, disc_nodes.expect("adversarial kinds have a disc"))?;
            let adv = if trainer.kind == ModelKind::JointAae {
                adversarial_gen_term(g, logit)?
            } else {
                critic_gen_term(g, logit)?
            };
            let weighted = g.scale(adv, cfg.gamma);
            let loss = g.add(recon, weighted)?;
            Ok((loss, recon))
        }
        ModelKind::MVae => {
            let posts: Vec<(NodeId, NodeId)> = mus.iter().copied().zip(lvs.iter().copied()).collect();
            let (mu_j, lv_j) = poe_nodes(g, &posts, true)?;
            let eps = rng.normal_matrix(rows, latent, 1.0);
            let z = g.reparam_sample(mu_j, lv_j, eps)?;
            let recons = decode_all(g, z)?;
            let recon = recon_term(g, xs, &recons)?;
            let kl = kl_term(g, mu_j, lv_j)?;
            let weighted = g.scale(kl, cfg.beta);
            let loss = g.add(recon, weighted)?;
            Ok((loss, recon))
        }
        ModelKind::MeMVae => {
            let posts: Vec<(NodeId, NodeId)> = mus.iter().copied().zip(lvs.iter().copied()).collect();
            let (mu_j, lv_j) = poe_nodes(g, &posts, true)?;
            let eps = rng.normal_matrix(rows, latent, 1.0);
            let z = g.reparam_sample(mu_j, lv_j, eps)?;
            let recons = decode_all(g, z)?;
            let joint_recon = recon_term(g, xs, &recons)?;
            let kl = kl_term(g, mu_j, lv_j)?;
            let weighted = g.scale(kl, cfg.beta);
            let mut loss = g.add(joint_recon, weighted)?;
            let mut recon_parts = vec![joint_recon];
            // separate ELBO per view, through the single-view product
            for &post in &posts {
                let (mu_s, lv_s) = poe_nodes(g, &[post], true)?;
                let eps_v = rng.normal_matrix(rows, latent, 1.0);
                let z_v = g.reparam_sample(mu_s, lv_s, eps_v)?;
                let recons_v = decode_all(g, z_v)?;
                let recon_v = recon_term(g, xs, &recons_v)?;
                let kl_v = kl_term(g, mu_s, lv_s)?;
                let kl_w = g.scale(kl_v, cfg.beta);
                let elbo = g.add(recon_v, kl_w)?;
                loss = g.add(loss, elbo)?;
                recon_parts.push(recon_v);
            }
            let mut recon_total = recon_parts[0];
            for &r in &recon_parts[1..] {
                recon_total = g.add(recon_total, r)?;
            }
            Ok((loss, recon_total))
        }
        ModelKind::Dvcca => {
            let mu_f = mean_nodes(g, &mus)?;
            let lv_f = mean_nodes(g, &lvs)?;
            let eps = rng.normal_matrix(rows, latent, 1.0);
            let z = g.reparam_sample(mu_f, lv_f, eps)?;
            let recons = decode_all(g, z)?;
            let recon = recon_term(g, xs, &recons)?;
            let kl = kl_term(g, mu_f, lv_f)?;
            let weighted = g.scale(kl, cfg.beta);
            let loss = g.add(recon, weighted)?;
            Ok((loss, recon))
        }
        ModelKind::MoPoeVae => {
            let posts: Vec<(NodeId, NodeId)> = mus.iter().copied().zip(lvs.iter().copied()).collect();
            let mut terms = Vec::new();
            let mut recon_nodes = Vec::new();
            for mask in 1u32..(1 << n_views) {
                let subset: Vec<(NodeId, NodeId)> = (0..n_views)
                    .filter(|&v| mask & (1 << v) != 0)
                    .map(|v| posts[v])
                    .collect();
                let (mu_s, lv_s) = poe_nodes(g, &subset, true)?;
                let eps = rng.normal_matrix(rows, latent, 1.0);
                let z_s = g.reparam_sample(mu_s, lv_s, eps)?;
                let recons = decode_all(g, z_s)?;
                let recon_s = recon_term(g, xs, &recons)?;
                let kl_s = kl_term(g, mu_s, lv_s)?;
                let kl_w = g.scale(kl_s, cfg.beta);
                terms.push(g.add(recon_s, kl_w)?);
                recon_nodes.push(recon_s);
            }
            let loss = mean_nodes(g, &terms)?;
            let recon = mean_nodes(g, &recon_nodes)?;
            Ok((loss, recon))
        }
        ModelKind::MvtCae => {
            let posts: Vec<(NodeId, NodeId)> = mus.iter().copied().zip(lvs.iter().copied()).collect();
            let (mu_j, lv_j) = poe_nodes(g, &posts, true)?;
            let eps = rng.normal_matrix(rows, latent, 1.0);
            let z = g.reparam_sample(mu_j, lv_j, eps)?;
            let recons = decode_all(g, z)?;
            let recon = recon_term(g, xs, &recons)?;
            let kl_prior = kl_term(g, mu_j, lv_j)?;
            let mut kl_sum: Option<NodeId> = None;
            for &(mu_v, lv_v) in &posts {
                let k = kl_pair_term(g, mu_j, lv_j, mu_v, lv_v)?;
                kl_sum = Some(match kl_sum {
                    Some(t) => g.add(t, k)?,
                    None => k,
                });
            }
            let kl_views = g.scale(kl_sum.unwrap(), 1.0 / n_views as f64);
            let kl_all = g.add(kl_prior, kl_views)?;
            let weighted = g.scale(kl_all, cfg.beta);
            let loss = g.add(recon, weighted)?;
            Ok((loss, recon))
        }
    }
}

/// Discriminator/critic loss for one batch. The generator enters as
/// constants; disc parameters arrive already inserted in `disc_nodes`.
fn build_disc_loss(
    g: &mut Graph,
    trainer: &Trainer,
    disc_nodes: &[NodeId],
    xs: &[NodeId],
    cfg: &MvaeConfig,
    rng: &mut Prng,
) -> Result<NodeId> {
    let rows = g.value(xs[0]).rows();
    let gen_nodes = trainer.gen.insert_consts(g);

    let mut mus = Vec::new();
    for (v, &x) in xs.iter().enumerate() {
        let (mu, _) = enc_forward(g, x, trainer.enc_idx[v], &gen_nodes)?;
        mus.push(mu);
    }
    let z_fake_node = mean_nodes(g, &mus)?;
    let z_fake = g.value(z_fake_node).clone();
    let z_prior = rng.normal_matrix(rows, cfg.latent_dim, 1.0);

    let disc = trainer.disc.as_ref().expect("adversarial kind");
    let fake = g.constant(z_fake.clone());
    let real = g.constant(z_prior.clone());
    let logit_fake = disc_forward(g, fake, disc_nodes)?;
    let logit_real = disc_forward(g, real, disc_nodes)?;

    match trainer.kind {
        ModelKind::JointAae => discriminator_bce(g, logit_real, logit_fake),
        ModelKind::WAae => {
            let base = critic_base(g, logit_real, logit_fake)?;
            // gradient penalty at interpolates; ReLU masks are constants,
            // which is exact almost everywhere
            let mut xhat = Matrix::zeros(rows, cfg.latent_dim);
            for r in 0..rows {
                let t = rng.next_f64();
                for c in 0..cfg.latent_dim {
                    let v = t * z_fake.get(r, c) + (1.0 - t) * z_prior.get(r, c);
                    xhat.set(r, c, v);
                }
            }
            let pre = xhat.matmul(&disc.mats[0])?.add(&disc.mats[1])?;
            let mask = pre.map(|x| if x > 0.0 { 1.0 } else { 0.0 });

            let mask_c = g.constant(mask);
            let w2_t = g.transpose(disc_nodes[2]);
            let gated = g.mul(mask_c, w2_t)?;
            let w1_t = g.transpose(disc_nodes[0]);
            let input_grad = g.matmul(gated, w1_t)?;
            let sq = g.mul(input_grad, input_grad)?;
            let row_sq = g.sum_rows(sq);
            let safe = g.add_scalar(row_sq, 1e-12);
            let norm = g.sqrt(safe)?;
            let dev = g.add_scalar(norm, -1.0);
            let dev2 = g.mul(dev, dev)?;
            let s = g.sum(dev2);
            let gp = g.scale(s, 1.0 / rows as f64);
            let gp_w = g.scale(gp, cfg.lambda_gp);
            g.add(base, gp_w).map_err(Into::into)
        }
        _ => unreachable!("disc loss only exists for adversarial kinds"),
    }
}

/// One discriminator/critic update.
fn disc_step(
    trainer: &mut Trainer,
    batch: &[Matrix],
    cfg: &MvaeConfig,
    rng: &mut Prng,
    adam: &mut AdamState,
    epoch: usize,
    batch_no: usize,
) -> Result<()> {
    let mut g = Graph::new();
    let disc_nodes = trainer
        .disc
        .as_ref()
        .expect("adversarial kind")
        .insert_params(&mut g);
    let xs: Vec<NodeId> = batch.iter().map(|b| g.constant(b.clone())).collect();
    let loss = build_disc_loss(&mut g, trainer, &disc_nodes, &xs, cfg, rng)?;

    let loss_val = g.scalar_value(loss);
    if !loss_val.is_finite() {
        return Err(Error::NonFiniteLoss {
            epoch,
            batch: batch_no,
        });
    }
    let grads = g.backward(loss)?;
    let grad_mats: Vec<Matrix> = grads.into_vec().into_iter().map(|(_, m)| m).collect();
    let disc = trainer.disc.as_mut().unwrap();
    adam
        .step(&mut disc.mats, &grad_mats)
        .map_err(|e| Error::Training {
            epoch,
            batch: batch_no,
            msg: e.to_string(),
        })
}

/// Train on views whose rows are the training split. Loss history gets one
/// entry per epoch; epochs = 0 returns the initialized model.
pub fn train_mvae(views: &[ViewMatrix], cfg: &MvaeConfig) -> Result<TrainedMvae> {
    cfg.validate()?;
    if views.is_empty() {
        return Err(Error::Contract("train_mvae requires at least one view".into()));
    }
    let rows = views[0].docs();
    for v in views {
        if v.docs() != rows {
            return Err(Error::Integrity(format!(
                "view {} has {} rows, view {} has {}",
                views[0].name,
                rows,
                v.name,
                v.docs()
            )));
        }
    }
    if rows == 0 {
        return Err(Error::Integrity("training views have no rows".into()));
    }
    if !cfg.input_dims.is_empty() {
        if cfg.input_dims.len() != views.len() {
            return Err(Error::Contract(format!(
                "config declares {} views, got {}",
                cfg.input_dims.len(),
                views.len()
            )));
        }
        for (v, &d) in views.iter().zip(&cfg.input_dims) {
            if v.feature_dim() != d {
                return Err(Error::ViewDim {
                    view: v.name.clone(),
                    expected: d,
                    got: v.feature_dim(),
                });
            }
        }
    }
    if cfg.kind == ModelKind::MoPoeVae && views.len() > 16 {
        return Err(Error::Contract(
            "MoPoEVAE training enumerates view subsets; more than 16 views is unsupported".into(),
        ));
    }

    let stats: Vec<ViewStats> = views
        .iter()
        .map(|v| ViewStats::fit(&v.name, &v.matrix))
        .collect();
    let normalized: Vec<Matrix> = views
        .iter()
        .zip(&stats)
        .map(|(v, s)| s.normalize(&v.matrix))
        .collect();

    let mut trainer = Trainer::init(cfg, &stats);
    let mut gen_adam = AdamState::for_params(cfg.lr, &trainer.gen.mats);
    let mut disc_adam = trainer
        .disc
        .as_ref()
        .map(|d| AdamState::for_params(cfg.lr, &d.mats));
    let mut rng = Prng::seed_from_u64(derive_seed(cfg.seed, &[100]));

    let batch_size = cfg.batch_size.min(rows);
    let mut history = Vec::with_capacity(cfg.epochs);
    let mut order: Vec<usize> = (0..rows).collect();

    for epoch in 0..cfg.epochs {
        rng.shuffle(&mut order);
        let mut total_acc = 0.0;
        let mut recon_acc = 0.0;
        let mut batches = 0usize;

        for (batch_no, chunk) in order.chunks(batch_size).enumerate() {
            let batch: Vec<Matrix> = normalized.iter().map(|m| m.select_rows(chunk)).collect();

            if trainer.kind.is_adversarial() {
                disc_step(
                    &mut trainer,
                    &batch,
                    cfg,
                    &mut rng,
                    disc_adam.as_mut().unwrap(),
                    epoch,
                    batch_no,
                )?;
            }

            let mut g = Graph::new();
            let gen_nodes = trainer.gen.insert_params(&mut g);
            let disc_nodes = trainer.disc.as_ref().map(|d| d.insert_consts(&mut g));
            let xs: Vec<NodeId> = batch.iter().map(|b| g.constant(b.clone())).collect();
            let (loss, recon) = build_gen_loss(
                &mut g,
                &trainer,
                &gen_nodes,
                disc_nodes.as_deref(),
                &xs,
                cfg,
                &mut rng,
            )?;

            let loss_val = g.scalar_value(loss);
            let recon_val = g.scalar_value(recon);
            if !loss_val.is_finite() {
                return Err(Error::NonFiniteLoss {
                    epoch,
                    batch: batch_no,
                });
            }
            let grads = g.backward(loss)?;
            let grad_mats: Vec<Matrix> = grads.into_vec().into_iter().map(|(_, m)| m).collect();
            gen_adam
                .step(&mut trainer.gen.mats, &grad_mats)
                .map_err(|e| Error::Training {
                    epoch,
                    batch: batch_no,
                    msg: e.to_string(),
                })?;

            total_acc += loss_val;
            recon_acc += recon_val;
            batches += 1;
        }

        history.push(EpochLoss {
            total: total_acc / batches as f64,
            recon: recon_acc / batches as f64,
        });
    }

    let mut model = TrainedMvae {
        kind: cfg.kind,
        latent_dim: cfg.latent_dim,
        hidden_dim: cfg.hidden_dim,
        views: stats,
        encoders: trainer.encoder_params(),
        loss_history: history,
    };
    model.quantize_f32();
    Ok(model)
}

/// Test seam: evaluates the per-kind losses as pure functions of the
/// parameter vectors, for finite-difference gradient checks. Noise draws
/// are re-seeded per call so the loss surface is fixed.
#[doc(hidden)]
pub struct LossProbe {
    trainer: Trainer,
    cfg: MvaeConfig,
    batch: Vec<Matrix>,
    eps_seed: u64,
}

#[doc(hidden)]
impl LossProbe {
    pub fn new(cfg: &MvaeConfig, batch: Vec<Matrix>, eps_seed: u64) -> LossProbe {
        let stats: Vec<ViewStats> = batch
            .iter()
            .enumerate()
            .map(|(v, m)| ViewStats {
                name: format!("v{v}"),
                dim: m.cols(),
                mean: vec![0.0; m.cols()],
                std: vec![1.0; m.cols()],
            })
            .collect();
        LossProbe {
            trainer: Trainer::init(cfg, &stats),
            cfg: cfg.clone(),
            batch,
            eps_seed,
        }
    }

    pub fn gen_param_count(&self) -> usize {
        self.trainer.gen.mats.len()
    }

    pub fn gen_param(&self, i: usize) -> &Matrix {
        &self.trainer.gen.mats[i]
    }

    pub fn gen_param_mut(&mut self, i: usize) -> &mut Matrix {
        &mut self.trainer.gen.mats[i]
    }

    pub fn disc_param_count(&self) -> usize {
        self.trainer.disc.as_ref().map_or(0, |d| d.mats.len())
    }

    pub fn disc_param(&self, i: usize) -> &Matrix {
        &self.trainer.disc.as_ref().unwrap().mats[i]
    }

    pub fn disc_param_mut(&mut self, i: usize) -> &mut Matrix {
        &mut self.trainer.disc.as_mut().unwrap().mats[i]
    }

    /// Generator-side loss value and gradients over generator params.
    pub fn gen_loss_and_grads(&self) -> Result<(f64, Vec<Matrix>)> {
        let mut g = Graph::new();
        let gen_nodes = self.trainer.gen.insert_params(&mut g);
        let disc_nodes = self.trainer.disc.as_ref().map(|d| d.insert_consts(&mut g));
        let xs: Vec<NodeId> = self.batch.iter().map(|b| g.constant(b.clone())).collect();
        let mut rng = Prng::seed_from_u64(self.eps_seed);
        let (loss, _) = build_gen_loss(
            &mut g,
            &self.trainer,
            &gen_nodes,
            disc_nodes.as_deref(),
            &xs,
            &self.cfg,
            &mut rng,
        )?;
        let value = g.scalar_value(loss);
        let grads = g.backward(loss)?;
        Ok((value, grads.into_vec().into_iter().map(|(_, m)| m).collect()))
    }

    pub fn gen_loss(&self) -> Result<f64> {
        Ok(self.gen_loss_and_grads()?.0)
    }

    /// Discriminator/critic loss value and gradients over disc params.
    pub fn disc_loss_and_grads(&self) -> Result<(f64, Vec<Matrix>)> {
        let mut g = Graph::new();
        let disc_nodes = self
            .trainer
            .disc
            .as_ref()
            .expect("adversarial kind")
            .insert_params(&mut g);
        let xs: Vec<NodeId> = self.batch.iter().map(|b| g.constant(b.clone())).collect();
        let mut rng = Prng::seed_from_u64(self.eps_seed);
        let loss = build_disc_loss(&mut g, &self.trainer, &disc_nodes, &xs, &self.cfg, &mut rng)?;
        let value = g.scalar_value(loss);
        let grads = g.backward(loss)?;
        Ok((value, grads.into_vec().into_iter().map(|(_, m)| m).collect()))
    }

    pub fn disc_loss(&self) -> Result<f64> {
        Ok(self.disc_loss_and_grads()?.0)
    }
}
