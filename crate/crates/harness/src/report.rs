//! Report emission: a fixed-header CSV and a single static SVG plot.

use crate::experiments::{ExperimentRow, OneTwoRandomReport};
use crate::{HarnessError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Svg,
}

const CSV_HEADER: &str =
    "param,n,heuristic_len,partial_len,opt,opt_tag,ratio_num,ratio_den,paper_bound_num,paper_bound_den";

/// Render experiment rows. CSV output is byte-identical across runs with the
/// same arguments; the SVG plots the ratio column against log3(n) together
/// with the bound column.
pub fn emit_report(rows: &[ExperimentRow], format: ReportFormat) -> Result<String> {
    if rows.is_empty() {
        return Err(HarnessError::EmptyReport);
    }
    match format {
        ReportFormat::Csv => Ok(emit_csv(rows)),
        ReportFormat::Svg => Ok(emit_svg(rows)),
    }
}

fn emit_csv(rows: &[ExperimentRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            row.param,
            row.n,
            row.heuristic_len,
            row.partial_len_scaled,
            row.opt_scaled,
            row.opt_tag,
            row.ratio.numer(),
            row.ratio.denom(),
            row.bound.numer(),
            row.bound.denom(),
        ));
    }
    out
}

/// Fixed-header CSV for the randomized 1-2 check.
pub fn random_report_csv(reports: &[OneTwoRandomReport]) -> Result<String> {
    if reports.is_empty() {
        return Err(HarnessError::EmptyReport);
    }
    let mut out =
        String::from("n,trials,seed,max_ratio_num,max_ratio_den,bound_num,bound_den,optimal_trials\n");
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.n,
            r.trials,
            r.seed,
            r.max_ratio.numer(),
            r.max_ratio.denom(),
            r.bound.numer(),
            r.bound.denom(),
            r.optimal_trials,
        ));
    }
    Ok(out)
}

fn ratio_f64(r: &num_rational::Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn polyline(points: &[(f64, f64)], color: &str) -> String {
    let coords: Vec<String> = points
        .iter()
        .map(|&(x, y)| format!("{x:.2},{y:.2}"))
        .collect();
    format!(
        "  <polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
        coords.join(" ")
    )
}

fn emit_svg(rows: &[ExperimentRow]) -> String {
    const WIDTH: f64 = 640.0;
    const HEIGHT: f64 = 420.0;
    const MARGIN_L: f64 = 62.0;
    const MARGIN_R: f64 = 20.0;
    const MARGIN_T: f64 = 24.0;
    const MARGIN_B: f64 = 46.0;
    let plot_w = WIDTH - MARGIN_L - MARGIN_R;
    let plot_h = HEIGHT - MARGIN_T - MARGIN_B;

    let xs: Vec<f64> = rows
        .iter()
        .map(|r| (r.n as f64).ln() / 3f64.ln())
        .collect();
    let ratio_ys: Vec<f64> = rows.iter().map(|r| ratio_f64(&r.ratio)).collect();
    let bound_ys: Vec<f64> = rows.iter().map(|r| ratio_f64(&r.bound)).collect();

    let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for &x in &xs {
        x_min = x_min.min(x);
        x_max = x_max.max(x);
    }
    let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for &y in ratio_ys.iter().chain(bound_ys.iter()) {
        y_min = y_min.min(y);
        y_max = y_max.max(y);
    }
    if (x_max - x_min).abs() < 1e-9 {
        x_max = x_min + 1.0;
    }
    if (y_max - y_min).abs() < 1e-9 {
        y_max = y_min + 1.0;
    }
    let x_pad = 0.05 * (x_max - x_min);
    let y_pad = 0.08 * (y_max - y_min);
    let (x_min, x_max) = (x_min - x_pad, x_max + x_pad);
    let (y_min, y_max) = (y_min - y_pad, y_max + y_pad);

    let map = |x: f64, y: f64| -> (f64, f64) {
        (
            MARGIN_L + (x - x_min) / (x_max - x_min) * plot_w,
            MARGIN_T + (1.0 - (y - y_min) / (y_max - y_min)) * plot_h,
        )
    };

    let ratio_pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(&ratio_ys)
        .map(|(&x, &y)| map(x, y))
        .collect();
    let bound_pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(&bound_ys)
        .map(|(&x, &y)| map(x, y))
        .collect();

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str(&format!(
        "  <rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));
    // axes
    svg.push_str(&format!(
        "  <line x1=\"{MARGIN_L}\" y1=\"{MARGIN_T}\" x2=\"{MARGIN_L}\" y2=\"{}\" stroke=\"black\"/>\n",
        MARGIN_T + plot_h
    ));
    svg.push_str(&format!(
        "  <line x1=\"{MARGIN_L}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        MARGIN_T + plot_h,
        MARGIN_L + plot_w,
        MARGIN_T + plot_h
    ));
    // tick labels at the data points
    for (&x, row) in xs.iter().zip(rows.iter()) {
        let (px, _) = map(x, y_min);
        svg.push_str(&format!(
            "  <text x=\"{px:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"middle\">n={}</text>\n",
            MARGIN_T + plot_h + 16.0,
            row.n
        ));
    }
    for frac in [0.0, 0.5, 1.0] {
        let y = y_min + frac * (y_max - y_min);
        let (_, py) = map(x_min, y);
        svg.push_str(&format!(
            "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"end\">{y:.3}</text>\n",
            MARGIN_L - 6.0,
            py + 4.0
        ));
    }
    svg.push_str(&format!(
        "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"middle\">log3(n)</text>\n",
        MARGIN_L + plot_w / 2.0,
        HEIGHT - 10.0
    ));
    svg.push_str(&format!(
        "  <text x=\"14\" y=\"{:.2}\" font-size=\"12\" transform=\"rotate(-90 14 {:.2})\" \
         text-anchor=\"middle\">ratio</text>\n",
        MARGIN_T + plot_h / 2.0,
        MARGIN_T + plot_h / 2.0
    ));
    svg.push_str(&polyline(&ratio_pts, "#1f77b4"));
    svg.push_str(&polyline(&bound_pts, "#d62728"));
    svg.push_str(&format!(
        "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" fill=\"#1f77b4\">measured ratio</text>\n",
        MARGIN_L + 8.0,
        MARGIN_T + 14.0
    ));
    svg.push_str(&format!(
        "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" fill=\"#d62728\">bound</text>\n",
        MARGIN_L + 8.0,
        MARGIN_T + 28.0
    ));
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::run_gk_experiment;
    use tsplab_core::instances::GkKind;

    #[test]
    fn csv_has_the_fixed_header_and_one_line_per_row() {
        let rows = run_gk_experiment(1, GkKind::L1).unwrap();
        let csv = emit_report(&rows, ReportFormat::Csv).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 3);
        // full greedy tour: certified 29 plus the closing edge of length 9
        assert_eq!(lines[2], "1,26,38,29,26,exact,29,26,10,9");
    }

    #[test]
    fn csv_is_byte_identical_across_runs() {
        let a = emit_report(&run_gk_experiment(2, GkKind::L1).unwrap(), ReportFormat::Csv)
            .unwrap();
        let b = emit_report(&run_gk_experiment(2, GkKind::L1).unwrap(), ReportFormat::Csv)
            .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn empty_rows_are_refused() {
        assert!(matches!(
            emit_report(&[], ReportFormat::Csv),
            Err(HarnessError::EmptyReport)
        ));
    }

    #[test]
    fn svg_is_balanced_with_one_polyline_per_series() {
        let rows = run_gk_experiment(2, GkKind::L1).unwrap();
        let svg = emit_report(&rows, ReportFormat::Svg).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 2);
        // every opened tag is closed or self-closing
        let mut stack: Vec<String> = Vec::new();
        let mut rest = svg.as_str();
        while let Some(start) = rest.find('<') {
            let end = rest[start..].find('>').map(|e| start + e).unwrap();
            let tag = &rest[start + 1..end];
            if let Some(name) = tag.strip_prefix('/') {
                assert_eq!(stack.pop().as_deref(), Some(name.trim()));
            } else if !tag.ends_with('/') {
                let name = tag.split_whitespace().next().unwrap();
                stack.push(name.to_string());
            }
            rest = &rest[end + 1..];
        }
        assert!(stack.is_empty(), "unbalanced tags: {stack:?}");
    }
}
