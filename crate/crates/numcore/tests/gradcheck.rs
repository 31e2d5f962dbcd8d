//! Central finite-difference checks for every differentiable op.
//!
//! The oracle perturbs each parameter entry by +-h and compares the
//! resulting loss slope against the backward pass, independent of the
//! engine's own adjoint formulas.

use numcore::graph::{Graph, NodeId};
use numcore::matrix::Matrix;
use numcore::rng::Prng;

const H: f64 = 1e-5;
const REL_TOL: f64 = 1e-4;

/// Builds a scalar loss from parameter matrices and returns (loss node, params).
type BuildFn = fn(&mut Graph, &[Matrix]) -> NodeId;

fn random_mats(rng: &mut Prng, shapes: &[(usize, usize)]) -> Vec<Matrix> {
    shapes
        .iter()
        .map(|&(r, c)| {
            let mut m = Matrix::zeros(r, c);
            for v in m.data_mut() {
                // keep away from relu/sqrt kinks and log's domain edge
                let x = rng.next_normal();
                *v = x + 0.3 * x.signum();
            }
            m
        })
        .collect()
}

fn eval_loss(build: BuildFn, mats: &[Matrix]) -> f64 {
    let mut g = Graph::new();
    let loss = build(&mut g, mats);
    g.scalar_value(loss)
}

fn check_gradients(name: &str, build: BuildFn, shapes: &[(usize, usize)], seed: u64) {
    let mut rng = Prng::seed_from_u64(seed);
    let mats = random_mats(&mut rng, shapes);

    let mut g = Graph::new();
    let loss = build(&mut g, &mats);
    let grads = g.backward(loss).expect("backward");
    let analytic: Vec<Matrix> = grads.into_vec().into_iter().map(|(_, m)| m).collect();
    assert_eq!(analytic.len(), mats.len(), "{name}: one grad per param");

    for (pi, grad) in analytic.iter().enumerate() {
        for j in 0..grad.data().len() {
            let mut plus = mats.to_vec();
            plus[pi].data_mut()[j] += H;
            let mut minus = mats.to_vec();
            minus[pi].data_mut()[j] -= H;
            let fd = (eval_loss(build, &plus) - eval_loss(build, &minus)) / (2.0 * H);
            let an = grad.data()[j];
            let denom = an.abs().max(fd.abs()).max(1.0);
            let rel = (an - fd).abs() / denom;
            assert!(
                rel < REL_TOL,
                "{name} seed {seed} param {pi} entry {j}: analytic {an} vs fd {fd} (rel {rel})"
            );
        }
    }
}

fn check_over_seeds(name: &str, build: BuildFn, shapes: &[(usize, usize)]) {
    for seed in 0..10 {
        check_gradients(name, build, shapes, 1000 + seed);
    }
}

fn params(g: &mut Graph, mats: &[Matrix]) -> Vec<NodeId> {
    mats.iter().map(|m| g.parameter(m.clone())).collect()
}

#[test]
fn fd_matmul() {
    check_over_seeds(
        "matmul",
        |g, m| {
            let p = params(g, m);
            let c = g.matmul(p[0], p[1]).unwrap();
            let sq = g.mul(c, c).unwrap();
            g.sum(sq)
        },
        &[(3, 4), (4, 2)],
    );
}

#[test]
fn fd_transpose() {
    check_over_seeds(
        "transpose",
        |g, m| {
            let p = params(g, m);
            let t = g.transpose(p[0]);
            let c = g.matmul(t, p[1]).unwrap();
            let sq = g.mul(c, c).unwrap();
            g.sum(sq)
        },
        &[(4, 3), (4, 2)],
    );
}

#[test]
fn fd_add_sub_with_bias_broadcast() {
    check_over_seeds(
        "add/sub broadcast",
        |g, m| {
            let p = params(g, m);
            let a = g.add(p[0], p[1]).unwrap();
            let b = g.sub(a, p[2]).unwrap();
            let sq = g.mul(b, b).unwrap();
            g.sum(sq)
        },
        &[(3, 4), (1, 4), (3, 4)],
    );
}

#[test]
fn fd_mul_div() {
    check_over_seeds(
        "mul/div",
        |g, m| {
            let p = params(g, m);
            let sq = g.mul(p[1], p[1]).unwrap();
            let denom = g.add_scalar(sq, 1.0); // strictly positive
            let q = g.div(p[0], denom).unwrap();
            let s = g.mul(q, q).unwrap();
            g.sum(s)
        },
        &[(3, 3), (3, 3)],
    );
}

#[test]
fn fd_unary_activations() {
    check_over_seeds(
        "relu/tanh/sigmoid/softplus",
        |g, m| {
            let p = params(g, m);
            let r = g.relu(p[0]);
            let t = g.tanh(p[1]);
            let s = g.sigmoid(p[2]);
            let sp = g.softplus(p[3]);
            let a = g.add(r, t).unwrap();
            let b = g.add(s, sp).unwrap();
            let c = g.add(a, b).unwrap();
            let sq = g.mul(c, c).unwrap();
            g.sum(sq)
        },
        &[(2, 5), (2, 5), (2, 5), (2, 5)],
    );
}

#[test]
fn fd_exp_log_sqrt() {
    check_over_seeds(
        "exp/log/sqrt",
        |g, m| {
            let p = params(g, m);
            let e = g.exp(p[0]);
            // exp is strictly positive: safe domain for log and sqrt
            let l = g.log(e).unwrap();
            let one = g.add_scalar(e, 1.0);
            let sq = g.sqrt(one).unwrap();
            let s = g.add(l, sq).unwrap();
            let m2 = g.mul(s, s).unwrap();
            g.sum(m2)
        },
        &[(3, 3)],
    );
}

#[test]
fn fd_scale_add_scalar_sum_rows() {
    check_over_seeds(
        "scale/add_scalar/sum_rows",
        |g, m| {
            let p = params(g, m);
            let sc = g.scale(p[0], -2.5);
            let off = g.add_scalar(sc, 0.75);
            let rows = g.sum_rows(off);
            let sq = g.mul(rows, rows).unwrap();
            g.sum(sq)
        },
        &[(4, 3)],
    );
}

#[test]
fn fd_log_softmax() {
    check_over_seeds(
        "log_softmax",
        |g, m| {
            let p = params(g, m);
            let ls = g.log_softmax(p[0]);
            let w = g.mul(ls, p[1]).unwrap();
            g.sum(w)
        },
        &[(3, 5), (3, 5)],
    );
}

#[test]
fn fd_reparam_sample_and_kl() {
    check_over_seeds(
        "reparam/kl",
        |g, m| {
            let p = params(g, m);
            let mut rng = Prng::seed_from_u64(77);
            let eps = rng.normal_matrix(3, 4, 1.0);
            let z = g.reparam_sample(p[0], p[1], eps).unwrap();
            let sq = g.mul(z, z).unwrap();
            let recon = g.sum(sq);
            let kl = g.kl_std_normal(p[0], p[1]).unwrap();
            g.add(recon, kl).unwrap()
        },
        &[(3, 4), (3, 4)],
    );
}

#[test]
fn fd_kl_diag() {
    check_over_seeds(
        "kl_diag",
        |g, m| {
            let p = params(g, m);
            g.kl_diag(p[0], p[1], p[2], p[3]).unwrap()
        },
        &[(2, 3), (2, 3), (2, 3), (2, 3)],
    );
}

#[test]
fn fd_spec_example_quadratic_form() {
    // loss = sum((P*W)^2) against finite differences
    check_over_seeds(
        "sum((P*W)^2)",
        |g, m| {
            let p = params(g, m);
            let pw = g.matmul(p[0], p[1]).unwrap();
            let sq = g.mul(pw, pw).unwrap();
            g.sum(sq)
        },
        &[(2, 3), (3, 2)],
    );
}
