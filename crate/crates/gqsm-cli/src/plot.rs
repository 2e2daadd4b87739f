//! SVG line plots of result CSVs: SNR on the x axis, bits on the y axis, one
//! polyline per curve. Curves are grouped by (experiment, scheme, design,
//! density, inner size); continuous groups contribute total (solid),
//! I_s (dashed), and I_A (dotted) series.

use std::fmt::Write as _;
use std::path::Path;

use crate::csvio::{parse_csv, ResultRow};
use crate::CliError;

const WIDTH: f64 = 860.0;
const HEIGHT: f64 = 560.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 250.0;
const MARGIN_T: f64 = 30.0;
const MARGIN_B: f64 = 60.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

struct Series {
    label: String,
    dash: &'static str,
    color: &'static str,
    points: Vec<(f64, f64)>,
}

fn group_key(row: &ResultRow) -> (String, String, String, String, u64) {
    (
        row.experiment_id.clone(),
        row.scheme.clone(),
        row.design_method.clone(),
        row.density_method.clone(),
        row.n_inner,
    )
}

fn build_series(rows: &[ResultRow]) -> Vec<Series> {
    let mut keys: Vec<_> = rows.iter().map(group_key).collect();
    keys.sort();
    keys.dedup();

    let mut series = Vec::new();
    for (group_idx, key) in keys.iter().enumerate() {
        let mut members: Vec<&ResultRow> = rows.iter().filter(|r| &group_key(r) == key).collect();
        members.sort_by(|a, b| a.snr_db.total_cmp(&b.snr_db));
        let color = PALETTE[group_idx % PALETTE.len()];
        let base_label = {
            let (_, scheme, design, density, n_inner) = key;
            let mut label = format!("{scheme} {design} {density}");
            if *n_inner > 0 {
                let _ = write!(label, "(N={n_inner})");
            }
            label
        };

        let total: Vec<(f64, f64)> = members.iter().map(|r| (r.snr_db, r.i_total)).collect();
        series.push(Series {
            label: base_label.clone(),
            dash: "",
            color,
            points: total,
        });
        let i_s: Vec<(f64, f64)> = members
            .iter()
            .filter_map(|r| r.i_s.map(|v| (r.snr_db, v)))
            .collect();
        // A decomposition identical to the total (single-quantity rows) would
        // just repaint the same polyline.
        let has_split = members.iter().any(|r| r.i_a.is_some());
        if has_split && !i_s.is_empty() {
            series.push(Series {
                label: format!("{base_label} I_s"),
                dash: "9,5",
                color,
                points: i_s,
            });
        }
        let i_a: Vec<(f64, f64)> = members
            .iter()
            .filter_map(|r| r.i_a.map(|v| (r.snr_db, v)))
            .collect();
        if !i_a.is_empty() {
            series.push(Series {
                label: format!("{base_label} I_A"),
                dash: "2,4",
                color,
                points: i_a,
            });
        }
    }
    series
}

fn nice_step(span: f64, target_ticks: usize) -> f64 {
    let raw = span / target_ticks as f64;
    let magnitude = 10f64.powf(raw.log10().floor());
    for mult in [1.0, 2.0, 5.0, 10.0] {
        if magnitude * mult >= raw {
            return magnitude * mult;
        }
    }
    magnitude * 10.0
}

pub fn emit_plot(csv_path: &Path, out_path: &Path) -> Result<(), CliError> {
    let text = std::fs::read_to_string(csv_path)?;
    let rows = parse_csv(&text).map_err(CliError::Config)?;
    if rows.is_empty() {
        return Err(CliError::Config(format!(
            "{}: no data rows to plot",
            csv_path.display()
        )));
    }
    let series = build_series(&rows);

    let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y_min, mut y_max) = (0.0f64, f64::NEG_INFINITY);
    for s in &series {
        for &(x, y) in &s.points {
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
    }
    if x_max == x_min {
        x_min -= 1.0;
        x_max += 1.0;
    }
    if y_max <= y_min {
        y_max = y_min + 1.0;
    }
    y_max *= 1.05;

    let plot_w = WIDTH - MARGIN_L - MARGIN_R;
    let plot_h = HEIGHT - MARGIN_T - MARGIN_B;
    let sx = |x: f64| MARGIN_L + (x - x_min) / (x_max - x_min) * plot_w;
    let sy = |y: f64| MARGIN_T + plot_h - (y - y_min) / (y_max - y_min) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);

    // axes
    let _ = writeln!(
        svg,
        r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
        MARGIN_L,
        MARGIN_T + plot_h,
        MARGIN_L + plot_w,
        MARGIN_T + plot_h
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
        MARGIN_L,
        MARGIN_T,
        MARGIN_L,
        MARGIN_T + plot_h
    );

    let x_step = nice_step(x_max - x_min, 8);
    let mut tick = (x_min / x_step).ceil() * x_step;
    while tick <= x_max + 1e-9 {
        let px = sx(tick);
        let _ = writeln!(
            svg,
            r##"<line x1="{px}" y1="{}" x2="{px}" y2="{}" stroke="#cccccc"/>"##,
            MARGIN_T,
            MARGIN_T + plot_h
        );
        let _ = writeln!(
            svg,
            r#"<text x="{px}" y="{}" font-size="12" text-anchor="middle">{tick}</text>"#,
            MARGIN_T + plot_h + 20.0
        );
        tick += x_step;
    }
    let y_step = nice_step(y_max - y_min, 8);
    let mut tick = (y_min / y_step).ceil() * y_step;
    while tick <= y_max + 1e-9 {
        let py = sy(tick);
        let _ = writeln!(
            svg,
            r##"<line x1="{}" y1="{py}" x2="{}" y2="{py}" stroke="#cccccc"/>"##,
            MARGIN_L,
            MARGIN_L + plot_w
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-size="12" text-anchor="end">{:.3}</text>"#,
            MARGIN_L - 8.0,
            py + 4.0,
            tick
        );
        tick += y_step;
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-size="14" text-anchor="middle">SNR (dB)</text>"#,
        MARGIN_L + plot_w / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{}" font-size="14" text-anchor="middle" transform="rotate(-90 18 {})">AMI (bits)</text>"#,
        MARGIN_T + plot_h / 2.0,
        MARGIN_T + plot_h / 2.0
    );

    for (idx, s) in series.iter().enumerate() {
        let coords: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let dash_attr = if s.dash.is_empty() {
            String::new()
        } else {
            format!(r#" stroke-dasharray="{}""#, s.dash)
        };
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{}" stroke-width="1.8"{} points="{}"/>"#,
            s.color,
            dash_attr,
            coords.join(" ")
        );
        for &(x, y) in &s.points {
            let _ = writeln!(
                svg,
                r#"<circle cx="{:.2}" cy="{:.2}" r="2.4" fill="{}"/>"#,
                sx(x),
                sy(y),
                s.color
            );
        }
        // legend entry
        let ly = MARGIN_T + 14.0 + idx as f64 * 18.0;
        let lx = MARGIN_L + plot_w + 14.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{}" stroke-width="1.8"{}/>"#,
            lx + 26.0,
            s.color,
            dash_attr
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-size="12">{}</text>"#,
            lx + 32.0,
            ly + 4.0,
            s.label
        );
    }
    let _ = writeln!(svg, "</svg>");

    std::fs::write(out_path, svg)?;
    Ok(())
}
