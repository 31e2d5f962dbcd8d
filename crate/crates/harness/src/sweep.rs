//! Experiment grids: the (latent dim x autoencoder x classifier) sweep,
//! single-view baselines, and the all-subsets view-combination study.
//!
//! Grid cells run in parallel; every cell derives its seed from the sweep
//! seed and its own coordinates, so results are identical for any worker
//! count. A failing cell becomes a failed record, never an abort.

use crate::error::Result;
use crate::records::{ExperimentRecord, RecordStatus};
use classifiers::{evaluate, train_classifier, ClassifierKind, Hyper};
use mvae::{mvae_to_bytes, train_mvae, ModelKind, MvaeConfig, TrainedMvae};
use numcore::{derive_seed, Matrix};
use rayon::prelude::*;
use sha2::{Digest, Sha256};
use std::time::Instant;
use textviews::ViewMatrix;

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn loss_history_digest(model: &TrainedMvae) -> String {
    let mut bytes = Vec::with_capacity(model.loss_history.len() * 16);
    for e in &model.loss_history {
        bytes.extend_from_slice(&e.total.to_le_bytes());
        bytes.extend_from_slice(&e.recon.to_le_bytes());
    }
    sha256_hex(&bytes)
}

/// Autoencoder knobs shared by every grid cell.
#[derive(Debug, Clone)]
pub struct TrainKnobs {
    pub epochs: usize,
    pub batch_size: usize,
    pub hidden_dim: usize,
    pub lr: f64,
    pub gamma: f64,
    pub beta: f64,
    pub lambda_gp: f64,
}

impl Default for TrainKnobs {
    fn default() -> Self {
        TrainKnobs {
            epochs: 200,
            batch_size: 64,
            hidden_dim: 256,
            lr: 1e-3,
            gamma: 1.0,
            beta: 1.0,
            lambda_gp: 10.0,
        }
    }
}

impl TrainKnobs {
    fn to_config(&self, kind: ModelKind, latent_dim: usize, seed: u64) -> MvaeConfig {
        MvaeConfig {
            kind,
            latent_dim,
            input_dims: Vec::new(),
            hidden_dim: self.hidden_dim,
            epochs: self.epochs,
            batch_size: self.batch_size,
            lr: self.lr,
            seed,
            gamma: self.gamma,
            beta: self.beta,
            lambda_gp: self.lambda_gp,
        }
    }
}

pub struct SweepInput<'a> {
    pub dataset: &'a str,
    pub views: &'a [ViewMatrix],
    pub labels: &'a [i64],
    pub train_idx: &'a [usize],
    pub test_idx: &'a [usize],
    pub knobs: TrainKnobs,
    pub hyper: Hyper,
    pub seed: u64,
    pub workers: usize,
}

#[derive(Debug, Clone)]
pub struct SweepGrid {
    pub latent_dims: Vec<usize>,
    pub ae_kinds: Vec<ModelKind>,
    pub classifiers: Vec<ClassifierKind>,
}

impl SweepGrid {
    pub fn full_scale() -> SweepGrid {
        SweepGrid {
            latent_dims: vec![7, 21, 70, 350, 700, 3500],
            ae_kinds: ModelKind::ALL.to_vec(),
            classifiers: ClassifierKind::ALL.to_vec(),
        }
    }
}

/// Dry-run enumeration of every sweep cell, in record order.
pub fn sweep_plan(grid: &SweepGrid) -> Vec<(usize, ModelKind, ClassifierKind)> {
    let mut out = Vec::new();
    for &dim in &grid.latent_dims {
        for &ae in &grid.ae_kinds {
            for &clf in &grid.classifiers {
                out.push((dim, ae, clf));
            }
        }
    }
    out
}

/// Dry-run enumeration of the combination study: all non-empty view
/// subsets as bitmasks, ascending.
pub fn combos_plan(n_views: usize) -> Vec<u64> {
    (1..(1u64 << n_views)).collect()
}

fn pool(workers: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("thread pool")
}

fn slice_views(views: &[ViewMatrix], idx: &[usize]) -> Vec<ViewMatrix> {
    views
        .iter()
        .map(|v| ViewMatrix::new(v.name.clone(), v.matrix.select_rows(idx), v.provenance))
        .collect()
}

fn select_labels(labels: &[i64], idx: &[usize]) -> Vec<i64> {
    idx.iter().map(|&i| labels[i]).collect()
}

struct TrainedCell {
    model: TrainedMvae,
    z_train: Matrix,
    z_test: Matrix,
    ae_time: f64,
    model_digest: String,
    loss_digest: String,
}

fn train_cell(
    views: &[ViewMatrix],
    train_idx: &[usize],
    test_idx: &[usize],
    cfg: &MvaeConfig,
) -> Result<TrainedCell> {
    let t0 = Instant::now();
    let train_views = slice_views(views, train_idx);
    let model = train_mvae(&train_views, cfg)?;
    let ae_time = t0.elapsed().as_secs_f64();

    let train_inputs: Vec<Matrix> = train_views.into_iter().map(|v| v.matrix).collect();
    let z_train = model.encode_joint(&train_inputs)?;
    let test_inputs: Vec<Matrix> = views
        .iter()
        .map(|v| v.matrix.select_rows(test_idx))
        .collect();
    let z_test = model.encode_joint(&test_inputs)?;

    let bytes = mvae_to_bytes(&model);
    Ok(TrainedCell {
        model_digest: sha256_hex(&bytes),
        loss_digest: loss_history_digest(&model),
        model,
        z_train,
        z_test,
        ae_time,
    })
}

#[allow(clippy::too_many_arguments)]
fn classify_cell(
    input: &SweepInput,
    cell: &TrainedCell,
    clf: ClassifierKind,
    clf_seed: u64,
    ae_name: &str,
    latent_dim: usize,
    views_names: &[String],
) -> ExperimentRecord {
    let y_train = select_labels(input.labels, input.train_idx);
    let y_test = select_labels(input.labels, input.test_idx);
    let t0 = Instant::now();
    let outcome = train_classifier(&cell.z_train, &y_train, clf, &input.hyper, clf_seed)
        .and_then(|m| {
            let pred = m.predict(&cell.z_test)?;
            evaluate(&y_test, &pred, &m.labels).map_err(Into::into)
        });
    let clf_time = t0.elapsed().as_secs_f64();

    let mut rec = ExperimentRecord {
        dataset: input.dataset.to_string(),
        ae_model: ae_name.to_string(),
        latent_dim,
        classifier: clf.name().to_string(),
        views: views_names.to_vec(),
        seed: clf_seed,
        accuracy: None,
        f1_macro: None,
        train_time_s: cell.ae_time + clf_time,
        status: RecordStatus::Ok,
        error: String::new(),
        loss_digest: cell.loss_digest.clone(),
        model_digest: cell.model_digest.clone(),
        better_than_all: None,
    };
    match outcome {
        Ok(metrics) => {
            rec.accuracy = Some(metrics.accuracy);
            rec.f1_macro = Some(metrics.macro_f);
        }
        Err(e) => {
            rec.status = RecordStatus::Failed;
            rec.error = e.to_string();
        }
    }
    rec
}

fn failed_record(
    input: &SweepInput,
    ae_name: &str,
    latent_dim: usize,
    clf: ClassifierKind,
    seed: u64,
    views_names: &[String],
    error: String,
    time: f64,
) -> ExperimentRecord {
    ExperimentRecord {
        dataset: input.dataset.to_string(),
        ae_model: ae_name.to_string(),
        latent_dim,
        classifier: clf.name().to_string(),
        views: views_names.to_vec(),
        seed,
        accuracy: None,
        f1_macro: None,
        train_time_s: time,
        status: RecordStatus::Failed,
        error,
        loss_digest: String::new(),
        model_digest: String::new(),
        better_than_all: None,
    }
}

/// The full grid. One autoencoder is trained per (latent dim, kind) pair
/// and shared by every classifier in that pair.
pub fn run_sweep(input: &SweepInput, grid: &SweepGrid) -> Vec<ExperimentRecord> {
    let view_names: Vec<String> = input.views.iter().map(|v| v.name.clone()).collect();
    let pairs: Vec<(usize, ModelKind)> = grid
        .latent_dims
        .iter()
        .flat_map(|&dim| grid.ae_kinds.iter().map(move |&ae| (dim, ae)))
        .collect();

    let results: Vec<Vec<ExperimentRecord>> = pool(input.workers).install(|| {
        pairs
            .par_iter()
            .map(|&(dim, ae)| {
                let ae_seed = derive_seed(input.seed, &[10, dim as u64, ae.code() as u64]);
                let cfg = input.knobs.to_config(ae, dim, ae_seed);
                let t0 = Instant::now();
                match train_cell(input.views, input.train_idx, input.test_idx, &cfg) {
                    Ok(cell) => grid
                        .classifiers
                        .iter()
                        .map(|&clf| {
                            let clf_seed = derive_seed(
                                input.seed,
                                &[11, dim as u64, ae.code() as u64, clf.code() as u64],
                            );
                            classify_cell(input, &cell, clf, clf_seed, ae.name(), dim, &view_names)
                        })
                        .collect(),
                    Err(e) => {
                        let elapsed = t0.elapsed().as_secs_f64();
                        grid.classifiers
                            .iter()
                            .map(|&clf| {
                                let clf_seed = derive_seed(
                                    input.seed,
                                    &[11, dim as u64, ae.code() as u64, clf.code() as u64],
                                );
                                failed_record(
                                    input,
                                    ae.name(),
                                    dim,
                                    clf,
                                    clf_seed,
                                    &view_names,
                                    e.to_string(),
                                    elapsed,
                                )
                            })
                            .collect()
                    }
                }
            })
            .collect()
    });

    results.into_iter().flatten().collect()
}

/// One record per (view, classifier), training directly on the raw view.
pub fn run_baselines(
    input: &SweepInput,
    classifiers_kinds: &[ClassifierKind],
) -> Vec<ExperimentRecord> {
    let y_train = select_labels(input.labels, input.train_idx);
    let y_test = select_labels(input.labels, input.test_idx);

    let cells: Vec<(usize, ClassifierKind)> = (0..input.views.len())
        .flat_map(|v| classifiers_kinds.iter().map(move |&c| (v, c)))
        .collect();

    pool(input.workers).install(|| {
        cells
            .par_iter()
            .map(|&(v, clf)| {
                let view = &input.views[v];
                let seed = derive_seed(input.seed, &[12, v as u64, clf.code() as u64]);
                let x_train = view.matrix.select_rows(input.train_idx);
                let x_test = view.matrix.select_rows(input.test_idx);
                let t0 = Instant::now();
                let outcome = train_classifier(&x_train, &y_train, clf, &input.hyper, seed)
                    .and_then(|m| {
                        let pred = m.predict(&x_test)?;
                        evaluate(&y_test, &pred, &m.labels).map_err(Into::into)
                    });
                let time = t0.elapsed().as_secs_f64();
                let mut rec = ExperimentRecord {
                    dataset: input.dataset.to_string(),
                    ae_model: "none".to_string(),
                    latent_dim: view.feature_dim(),
                    classifier: clf.name().to_string(),
                    views: vec![view.name.clone()],
                    seed,
                    accuracy: None,
                    f1_macro: None,
                    train_time_s: time,
                    status: RecordStatus::Ok,
                    error: String::new(),
                    loss_digest: String::new(),
                    model_digest: String::new(),
                    better_than_all: None,
                };
                match outcome {
                    Ok(m) => {
                        rec.accuracy = Some(m.accuracy);
                        rec.f1_macro = Some(m.macro_f);
                    }
                    Err(e) => {
                        rec.status = RecordStatus::Failed;
                        rec.error = e.to_string();
                    }
                }
                rec
            })
            .collect()
    })
}

/// All 2^n - 1 non-empty view subsets through one autoencoder kind and
/// classifier. Each record is flagged when its macro-F strictly beats the
/// all-views run (the all-views record itself is flagged false).
pub fn run_view_combinations(
    input: &SweepInput,
    ae: ModelKind,
    latent_dim: usize,
    clf: ClassifierKind,
) -> Vec<ExperimentRecord> {
    let n = input.views.len();
    let masks = combos_plan(n);

    let mut records: Vec<ExperimentRecord> = pool(input.workers).install(|| {
        masks
            .par_iter()
            .map(|&mask| {
                let subset: Vec<usize> = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
                let sub_views: Vec<ViewMatrix> = subset
                    .iter()
                    .map(|&v| input.views[v].clone())
                    .collect();
                let names: Vec<String> = sub_views.iter().map(|v| v.name.clone()).collect();
                let ae_seed = derive_seed(
                    input.seed,
                    &[13, mask, latent_dim as u64, ae.code() as u64],
                );
                let clf_seed = derive_seed(
                    input.seed,
                    &[14, mask, latent_dim as u64, ae.code() as u64, clf.code() as u64],
                );
                let cfg = input.knobs.to_config(ae, latent_dim, ae_seed);
                let t0 = Instant::now();
                match train_cell(&sub_views, input.train_idx, input.test_idx, &cfg) {
                    Ok(cell) => {
                        let sub_input = SweepInput {
                            views: &sub_views,
                            ..*input
                        };
                        classify_cell(&sub_input, &cell, clf, clf_seed, ae.name(), latent_dim, &names)
                    }
                    Err(e) => failed_record(
                        input,
                        ae.name(),
                        latent_dim,
                        clf,
                        clf_seed,
                        &names,
                        e.to_string(),
                        t0.elapsed().as_secs_f64(),
                    ),
                }
            })
            .collect()
    });

    let full_mask = (1u64 << n) - 1;
    let all_views_f1 = masks
        .iter()
        .position(|&m| m == full_mask)
        .and_then(|i| records[i].f1_macro);
    for (i, rec) in records.iter_mut().enumerate() {
        rec.better_than_all = match (masks[i] == full_mask, rec.f1_macro, all_views_f1) {
            (true, _, _) => Some(false),
            (false, Some(f1), Some(all)) => Some(f1 > all),
            _ => None,
        };
    }
    records
}
