//! Hand-rolled static SVG charts for the report files. Deliberately plain:
//! rectangles, circles, and text.

use crate::report::{BoxStats, ComboRow, GroupCount};

const BLUE: &str = "#4878cf";
const RED: &str = "#d65f5f";
const GREEN: &str = "#59a14f";
const GREY: &str = "#888888";

fn header(width: usize, height: usize) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\" font-family=\"sans-serif\" font-size=\"11\">\n\
         <rect width=\"{width}\" height=\"{height}\" fill=\"white\"/>\n"
    )
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Per component, one bar pair per value: configurations at or above the
/// sweep mean (blue) and below it (red).
pub fn grouped_count_chart(counts: &[GroupCount], mean_accuracy: f64) -> String {
    let components: Vec<&str> = {
        let mut seen = Vec::new();
        for c in counts {
            if !seen.contains(&c.component.as_str()) {
                seen.push(&c.component);
            }
        }
        seen
    };
    let panel_h = 150;
    let width = 640;
    let height = panel_h * components.len().max(1) + 40;
    let mut out = header(width, height);
    out.push_str(&format!(
        "<text x=\"10\" y=\"16\">configurations at/above (blue) and below (red) the mean accuracy {mean_accuracy:.4}</text>\n"
    ));

    let max_count = counts
        .iter()
        .map(|c| c.above_or_equal.max(c.below))
        .max()
        .unwrap_or(1)
        .max(1) as f64;

    for (pi, comp) in components.iter().enumerate() {
        let values: Vec<&GroupCount> = counts.iter().filter(|c| &c.component == comp).collect();
        let top = 30 + pi * panel_h;
        out.push_str(&format!(
            "<text x=\"10\" y=\"{}\" font-weight=\"bold\">{}</text>\n",
            top + 10,
            esc(comp)
        ));
        let plot_h = 80.0;
        let base = top as f64 + 100.0;
        let slot = (width as f64 - 60.0) / values.len().max(1) as f64;
        for (i, v) in values.iter().enumerate() {
            let x0 = 40.0 + i as f64 * slot;
            let bw = (slot / 2.5).min(28.0);
            let ha = v.above_or_equal as f64 / max_count * plot_h;
            let hb = v.below as f64 / max_count * plot_h;
            out.push_str(&format!(
                "<rect x=\"{:.1}\" y=\"{:.1}\" width=\"{bw:.1}\" height=\"{ha:.1}\" fill=\"{BLUE}\"/>\n",
                x0,
                base - ha
            ));
            out.push_str(&format!(
                "<rect x=\"{:.1}\" y=\"{:.1}\" width=\"{bw:.1}\" height=\"{hb:.1}\" fill=\"{RED}\"/>\n",
                x0 + bw + 2.0,
                base - hb
            ));
            out.push_str(&format!(
                "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>\n",
                x0 + bw,
                base + 14.0,
                esc(&v.value)
            ));
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Five-number accuracy summaries per autoencoder kind.
pub fn box_chart(boxes: &[BoxStats]) -> String {
    let width = 640;
    let height = 260;
    let mut out = header(width, height);
    out.push_str("<text x=\"10\" y=\"16\">accuracy distribution per autoencoder kind</text>\n");
    let plot_top = 40.0;
    let plot_h = 160.0;
    let y_of = |acc: f64| plot_top + (1.0 - acc) * plot_h;
    // axis marks at 0, 0.5, 1
    for t in [0.0, 0.5, 1.0] {
        out.push_str(&format!(
            "<line x1=\"35\" y1=\"{0:.1}\" x2=\"{1}\" y2=\"{0:.1}\" stroke=\"#dddddd\"/>\n\
             <text x=\"5\" y=\"{2:.1}\">{t:.1}</text>\n",
            y_of(t),
            width - 10,
            y_of(t) + 4.0
        ));
    }
    let slot = (width as f64 - 60.0) / boxes.len().max(1) as f64;
    for (i, b) in boxes.iter().enumerate() {
        let cx = 40.0 + (i as f64 + 0.5) * slot;
        let bw = (slot * 0.4).min(30.0);
        out.push_str(&format!(
            "<line x1=\"{cx:.1}\" y1=\"{:.1}\" x2=\"{cx:.1}\" y2=\"{:.1}\" stroke=\"{GREY}\"/>\n",
            y_of(b.max),
            y_of(b.min)
        ));
        out.push_str(&format!(
            "<rect x=\"{:.1}\" y=\"{:.1}\" width=\"{:.1}\" height=\"{:.1}\" fill=\"{BLUE}\" fill-opacity=\"0.6\" stroke=\"{GREY}\"/>\n",
            cx - bw / 2.0,
            y_of(b.q3),
            bw,
            (y_of(b.q1) - y_of(b.q3)).max(0.5)
        ));
        out.push_str(&format!(
            "<line x1=\"{:.1}\" y1=\"{1:.1}\" x2=\"{2:.1}\" y2=\"{1:.1}\" stroke=\"black\" stroke-width=\"2\"/>\n",
            cx - bw / 2.0,
            y_of(b.median),
            cx + bw / 2.0
        ));
        out.push_str(&format!(
            "<text x=\"{cx:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>\n",
            plot_top + plot_h + 24.0,
            esc(&b.ae_model)
        ));
    }
    out.push_str("</svg>\n");
    out
}

/// View-subset grid: one column per subset, one row per view; a dot marks
/// membership, green columns beat the all-views run.
pub fn combo_grid(combos: &[ComboRow]) -> String {
    let mut views: Vec<String> = Vec::new();
    for c in combos {
        for v in c.views.split('+') {
            if !views.contains(&v.to_string()) {
                views.push(v.to_string());
            }
        }
    }
    let cell = 16.0;
    let left = 90.0;
    let top = 30.0;
    let width = (left + combos.len() as f64 * cell + 20.0) as usize;
    let height = (top + views.len() as f64 * cell + 60.0) as usize;
    let mut out = header(width.max(200), height.max(120));
    out.push_str("<text x=\"10\" y=\"16\">view subsets (green: better macro-F than all views)</text>\n");

    for (r, v) in views.iter().enumerate() {
        out.push_str(&format!(
            "<text x=\"5\" y=\"{:.1}\">{}</text>\n",
            top + (r as f64 + 0.7) * cell,
            esc(v)
        ));
    }
    for (i, c) in combos.iter().enumerate() {
        let x = left + i as f64 * cell;
        if c.better_than_all {
            out.push_str(&format!(
                "<rect x=\"{x:.1}\" y=\"{top:.1}\" width=\"{cell:.1}\" height=\"{:.1}\" fill=\"{GREEN}\" fill-opacity=\"0.35\"/>\n",
                views.len() as f64 * cell
            ));
        }
        let members: Vec<&str> = c.views.split('+').collect();
        for (r, v) in views.iter().enumerate() {
            if members.contains(&v.as_str()) {
                out.push_str(&format!(
                    "<circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"4\" fill=\"black\"/>\n",
                    x + cell / 2.0,
                    top + (r as f64 + 0.5) * cell
                ));
            }
        }
        if let Some(f1) = c.f1_macro {
            out.push_str(&format!(
                "<text x=\"{:.1}\" y=\"{:.1}\" transform=\"rotate(90 {0:.1} {1:.1})\" font-size=\"8\">{f1:.3}</text>\n",
                x + cell / 2.0,
                top + views.len() as f64 * cell + 6.0
            ));
        }
    }
    out.push_str("</svg>\n");
    out
}
