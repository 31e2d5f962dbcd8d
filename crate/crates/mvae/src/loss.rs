//! Graph-level loss assembly, shared between the trainer and the tests
//! that pin per-kind loss values. Reconstruction terms are means over
//! entries; KL and adversarial terms are per-sample means, so losses are
//! invariant to batch size.

use crate::error::Result;
use numcore::graph::{Graph, NodeId};

/// Sum over views of mean-squared reconstruction error.
pub fn recon_term(g: &mut Graph, xs: &[NodeId], recons: &[NodeId]) -> Result<NodeId> {
    assert_eq!(xs.len(), recons.len());
    let mut total: Option<NodeId> = None;
    for (&x, &xr) in xs.iter().zip(recons) {
        let m = g.mse(x, xr)?;
        total = Some(match total {
            Some(t) => g.add(t, m)?,
            None => m,
        });
    }
    Ok(total.expect("at least one view"))
}

/// Per-sample mean KL(q || N(0, I)) from batched (mu, logvar) nodes.
pub fn kl_term(g: &mut Graph, mu: NodeId, logvar: NodeId) -> Result<NodeId> {
    let rows = g.value(mu).rows();
    let kl = g.kl_std_normal(mu, logvar)?;
    Ok(g.scale(kl, 1.0 / rows as f64))
}

/// Per-sample mean KL(q1 || q2) between diagonal Gaussians.
pub fn kl_pair_term(
    g: &mut Graph,
    mu1: NodeId,
    lv1: NodeId,
    mu2: NodeId,
    lv2: NodeId,
) -> Result<NodeId> {
    let rows = g.value(mu1).rows();
    let kl = g.kl_diag(mu1, lv1, mu2, lv2)?;
    Ok(g.scale(kl, 1.0 / rows as f64))
}

/// Non-saturating generator term from discriminator logits:
/// mean(-ln sigmoid(logit)) = mean(softplus(-logit)).
pub fn adversarial_gen_term(g: &mut Graph, logit: NodeId) -> Result<NodeId> {
    let rows = g.value(logit).rows();
    let neg = g.scale(logit, -1.0);
    let sp = g.softplus(neg);
    let s = g.sum(sp);
    Ok(g.scale(s, 1.0 / rows as f64))
}

/// Binary cross-entropy for the discriminator, from logits:
/// mean(softplus(-logit_real)) + mean(softplus(logit_fake)).
pub fn discriminator_bce(g: &mut Graph, logit_real: NodeId, logit_fake: NodeId) -> Result<NodeId> {
    let rows = g.value(logit_real).rows() as f64;
    let neg_real = g.scale(logit_real, -1.0);
    let sp_real = g.softplus(neg_real);
    let sp_fake = g.softplus(logit_fake);
    let a = g.sum(sp_real);
    let b = g.sum(sp_fake);
    let a = g.scale(a, 1.0 / rows);
    let rows_f = g.value(logit_fake).rows() as f64;
    let b = g.scale(b, 1.0 / rows_f);
    g.add(a, b).map_err(Into::into)
}

/// Wasserstein critic objective: mean(score_fake) - mean(score_real).
pub fn critic_base(g: &mut Graph, score_real: NodeId, score_fake: NodeId) -> Result<NodeId> {
    let rf = g.value(score_fake).rows() as f64;
    let rr = g.value(score_real).rows() as f64;
    let sf = g.sum(score_fake);
    let sf = g.scale(sf, 1.0 / rf);
    let sr = g.sum(score_real);
    let sr = g.scale(sr, -1.0 / rr);
    g.add(sf, sr).map_err(Into::into)
}

/// Generator side of the Wasserstein objective: -mean(score_fake).
pub fn critic_gen_term(g: &mut Graph, score_fake: NodeId) -> Result<NodeId> {
    let rows = g.value(score_fake).rows() as f64;
    let s = g.sum(score_fake);
    Ok(g.scale(s, -1.0 / rows))
}

/// Product of Gaussian experts in graph form, so gradients flow back into
/// every expert's (mu, logvar). `posts` pairs are (mu, logvar) nodes.
pub fn poe_nodes(
    g: &mut Graph,
    posts: &[(NodeId, NodeId)],
    include_prior: bool,
) -> Result<(NodeId, NodeId)> {
    assert!(!posts.is_empty());
    let mut total_prec: Option<NodeId> = None;
    let mut weighted: Option<NodeId> = None;
    for &(mu, lv) in posts {
        let neg = g.scale(lv, -1.0);
        let prec = g.exp(neg);
        total_prec = Some(match total_prec {
            Some(t) => g.add(t, prec)?,
            None => prec,
        });
        let w = g.mul(mu, prec)?;
        weighted = Some(match weighted {
            Some(t) => g.add(t, w)?,
            None => w,
        });
    }
    let mut total = total_prec.unwrap();
    if include_prior {
        total = g.add_scalar(total, 1.0);
    }
    let mu = g.div(weighted.unwrap(), total)?;
    let log_prec = g.log(total)?;
    let lv = g.scale(log_prec, -1.0);
    Ok((mu, lv))
}

/// Elementwise mean of a list of equally shaped nodes.
pub fn mean_nodes(g: &mut Graph, xs: &[NodeId]) -> Result<NodeId> {
    assert!(!xs.is_empty());
    let mut acc = xs[0];
    for &x in &xs[1..] {
        acc = g.add(acc, x)?;
    }
    Ok(g.scale(acc, 1.0 / xs.len() as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use numcore::Matrix;

    #[test]
    fn perfect_reconstruction_and_standard_posterior_give_zero_loss() {
        let mut g = Graph::new();
        let x = g.constant(Matrix::from_rows(&[vec![1.0, -2.0], vec![0.5, 3.0]]).unwrap());
        let recon = recon_term(&mut g, &[x], &[x]).unwrap();
        assert_eq!(g.scalar_value(recon), 0.0);

        let mu = g.constant(Matrix::zeros(2, 2));
        let lv = g.constant(Matrix::zeros(2, 2));
        let kl = kl_term(&mut g, mu, lv).unwrap();
        let total = g.add(recon, kl).unwrap();
        assert_eq!(g.scalar_value(total), 0.0);
    }

    #[test]
    fn gen_term_at_half_confidence_is_ln2() {
        // discriminator output 0.5 <=> logit 0 <=> -ln 0.5 per sample
        let mut g = Graph::new();
        let logit = g.constant(Matrix::zeros(4, 1));
        let t = adversarial_gen_term(&mut g, logit).unwrap();
        assert!((g.scalar_value(t) - std::f64::consts::LN_2).abs() < 1e-12);
        assert!((g.scalar_value(t) - 0.693).abs() < 1e-3);
    }

    #[test]
    fn vae_loss_reduces_to_recon_when_joint_equals_prior() {
        let mut g = Graph::new();
        let x = g.constant(Matrix::from_rows(&[vec![1.0, 2.0]]).unwrap());
        let xr = g.constant(Matrix::from_rows(&[vec![0.0, 2.0]]).unwrap());
        let recon = recon_term(&mut g, &[x], &[xr]).unwrap();
        let mu = g.constant(Matrix::zeros(1, 3));
        let lv = g.constant(Matrix::zeros(1, 3));
        let kl = kl_term(&mut g, mu, lv).unwrap();
        let beta_kl = g.scale(kl, 1.0);
        let loss = g.add(recon, beta_kl).unwrap();
        assert_eq!(g.scalar_value(loss), g.scalar_value(recon));
        assert!((g.scalar_value(loss) - 0.5).abs() < 1e-12); // mse of [1,0] errors
    }

    #[test]
    fn poe_nodes_match_closed_form() {
        use crate::joint::{joint_poe, GaussianPosterior};
        let mu_a = Matrix::from_rows(&[vec![0.0, 1.0]]).unwrap();
        let lv_a = Matrix::from_rows(&[vec![0.0, 0.5]]).unwrap();
        let mu_b = Matrix::from_rows(&[vec![2.0, -1.0]]).unwrap();
        let lv_b = Matrix::from_rows(&[vec![0.0, -0.3]]).unwrap();

        let mut g = Graph::new();
        let a = (g.constant(mu_a.clone()), g.constant(lv_a.clone()));
        let b = (g.constant(mu_b.clone()), g.constant(lv_b.clone()));
        let (mu_n, lv_n) = poe_nodes(&mut g, &[a, b], true).unwrap();

        let plain = joint_poe(
            &[
                GaussianPosterior::new(mu_a, lv_a).unwrap(),
                GaussianPosterior::new(mu_b, lv_b).unwrap(),
            ],
            true,
        )
        .unwrap();
        for i in 0..2 {
            assert!((g.value(mu_n).data()[i] - plain.mu.data()[i]).abs() < 1e-12);
            assert!((g.value(lv_n).data()[i] - plain.logvar.data()[i]).abs() < 1e-12);
        }
    }
}
