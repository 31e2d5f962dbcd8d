//! Report emission: above/below-mean counts per component, per-kind
//! accuracy distribution summaries, and the view-subset grid, as CSV
//! tables plus static SVG charts.

use crate::error::{Error, Result};
use crate::records::{ExperimentRecord, RecordStatus};
use crate::svg;
use std::path::Path;

#[derive(Debug, Clone, PartialEq)]
pub struct GroupCount {
    pub component: String,
    pub value: String,
    pub above_or_equal: usize,
    pub below: usize,
}

#[derive(Debug, Clone)]
pub struct BoxStats {
    pub ae_model: String,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

#[derive(Debug, Clone)]
pub struct ComboRow {
    pub views: String,
    pub f1_macro: Option<f64>,
    pub better_than_all: bool,
}

#[derive(Debug, Clone)]
pub struct Summary {
    pub mean_accuracy: f64,
    pub counts: Vec<GroupCount>,
    pub boxes: Vec<BoxStats>,
    pub combos: Vec<ComboRow>,
}

/// Linear-interpolation quantile on sorted data.
fn quantile(sorted: &[f64], p: f64) -> f64 {
    if sorted.len() == 1 {
        return sorted[0];
    }
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let frac = h - lo as f64;
    if lo + 1 < sorted.len() {
        sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
    } else {
        sorted[lo]
    }
}

fn distinct_in_order(values: impl Iterator<Item = String>) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for v in values {
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

pub fn summarize(records: &[ExperimentRecord]) -> Summary {
    let ok: Vec<&ExperimentRecord> = records
        .iter()
        .filter(|r| r.status == RecordStatus::Ok && r.accuracy.is_some())
        .collect();
    let mean_accuracy = if ok.is_empty() {
        0.0
    } else {
        ok.iter().map(|r| r.accuracy.unwrap()).sum::<f64>() / ok.len() as f64
    };

    let mut counts = Vec::new();
    let components: [(&str, Box<dyn Fn(&ExperimentRecord) -> String>); 3] = [
        ("latent_dim", Box::new(|r| r.latent_dim.to_string())),
        ("ae_model", Box::new(|r| r.ae_model.clone())),
        ("classifier", Box::new(|r| r.classifier.clone())),
    ];
    for (component, key) in &components {
        for value in distinct_in_order(ok.iter().map(|r| key(r))) {
            let group: Vec<&&ExperimentRecord> =
                ok.iter().filter(|r| key(r) == value).collect();
            let above = group
                .iter()
                .filter(|r| r.accuracy.unwrap() >= mean_accuracy)
                .count();
            counts.push(GroupCount {
                component: component.to_string(),
                value,
                above_or_equal: above,
                below: group.len() - above,
            });
        }
    }

    let mut boxes = Vec::new();
    for value in distinct_in_order(ok.iter().map(|r| r.ae_model.clone())) {
        let mut accs: Vec<f64> = ok
            .iter()
            .filter(|r| r.ae_model == value)
            .map(|r| r.accuracy.unwrap())
            .collect();
        accs.sort_by(f64::total_cmp);
        boxes.push(BoxStats {
            ae_model: value,
            min: accs[0],
            q1: quantile(&accs, 0.25),
            median: quantile(&accs, 0.5),
            q3: quantile(&accs, 0.75),
            max: *accs.last().unwrap(),
        });
    }

    let combos = records
        .iter()
        .filter_map(|r| {
            r.better_than_all.map(|flag| ComboRow {
                views: r.views_field(),
                f1_macro: r.f1_macro,
                better_than_all: flag,
            })
        })
        .collect();

    Summary {
        mean_accuracy,
        counts,
        boxes,
        combos,
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Emit all report tables and charts into `dir`. Empty groups render as
/// empty tables, never an error.
pub fn emit_reports(records: &[ExperimentRecord], dir: &Path) -> Result<Summary> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.display().to_string(),
        source,
    })?;
    let summary = summarize(records);

    let mut fig3 = String::from("component,value,above_or_equal,below\n");
    for c in &summary.counts {
        fig3.push_str(&format!(
            "{},{},{},{}\n",
            c.component, c.value, c.above_or_equal, c.below
        ));
    }
    write_file(&dir.join("fig3_counts.csv"), &fig3)?;

    let mut fig4 = String::from("ae_model,min,q1,median,q3,max\n");
    for b in &summary.boxes {
        fig4.push_str(&format!(
            "{},{},{},{},{},{}\n",
            b.ae_model, b.min, b.q1, b.median, b.q3, b.max
        ));
    }
    write_file(&dir.join("fig4_box.csv"), &fig4)?;

    let mut fig5 = String::from("views,f1_macro,better_than_all\n");
    for c in &summary.combos {
        fig5.push_str(&format!(
            "{},{},{}\n",
            c.views,
            c.f1_macro.map(|v| v.to_string()).unwrap_or_default(),
            c.better_than_all
        ));
    }
    write_file(&dir.join("fig5_combos.csv"), &fig5)?;

    write_file(
        &dir.join("fig3_counts.svg"),
        &svg::grouped_count_chart(&summary.counts, summary.mean_accuracy),
    )?;
    write_file(&dir.join("fig4_box.svg"), &svg::box_chart(&summary.boxes))?;
    write_file(&dir.join("fig5_combos.svg"), &svg::combo_grid(&summary.combos))?;

    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::records::RecordStatus;

    fn rec(dim: usize, ae: &str, clf: &str, acc: f64) -> ExperimentRecord {
        ExperimentRecord {
            dataset: "d".into(),
            ae_model: ae.into(),
            latent_dim: dim,
            classifier: clf.into(),
            views: vec!["cv".into()],
            seed: 0,
            accuracy: Some(acc),
            f1_macro: Some(acc),
            train_time_s: 0.0,
            status: RecordStatus::Ok,
            error: String::new(),
            loss_digest: String::new(),
            model_digest: String::new(),
            better_than_all: None,
        }
    }

    #[test]
    fn counts_partition_every_grouping() {
        let records: Vec<_> = (0..12)
            .map(|i| {
                rec(
                    if i % 2 == 0 { 4 } else { 8 },
                    if i % 3 == 0 { "a" } else { "b" },
                    "logreg",
                    i as f64 / 12.0,
                )
            })
            .collect();
        let s = summarize(&records);
        for component in ["latent_dim", "ae_model", "classifier"] {
            let total: usize = s
                .counts
                .iter()
                .filter(|c| c.component == component)
                .map(|c| c.above_or_equal + c.below)
                .sum();
            assert_eq!(total, 12, "{component}");
        }
    }

    #[test]
    fn single_record_median_is_its_accuracy() {
        let s = summarize(&[rec(4, "a", "knn", 0.625)]);
        assert_eq!(s.boxes.len(), 1);
        assert_eq!(s.boxes[0].median, 0.625);
        assert_eq!(s.boxes[0].min, 0.625);
        assert_eq!(s.boxes[0].max, 0.625);
    }

    #[test]
    fn empty_records_summarize_cleanly() {
        let s = summarize(&[]);
        assert!(s.counts.is_empty());
        assert!(s.boxes.is_empty());
        assert!(s.combos.is_empty());
    }
}
