//! CSV tables and SVG plots.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::matrix::{summarize, BenchRecord, CellSummary};
use crate::BenchError;

/// Column order of the per-trial CSV.
pub const RECORD_HEADER: [&str; 11] = [
    "trial_id",
    "algorithm",
    "threads",
    "w",
    "eps",
    "outcome",
    "cost",
    "wall_time",
    "edges_evaluated",
    "states_expanded",
    "threads_spawned",
];

pub fn records_to_csv(records: &[BenchRecord]) -> Result<String, BenchError> {
    to_csv(records)
}

pub fn summaries_to_csv(cells: &[CellSummary]) -> Result<String, BenchError> {
    to_csv(cells)
}

fn to_csv<T: serde::Serialize>(rows: &[T]) -> Result<String, BenchError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| BenchError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn records_from_csv(text: &str) -> Result<Vec<BenchRecord>, BenchError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let headers = r.headers()?.clone();
    if headers.iter().ne(RECORD_HEADER) {
        return Err(BenchError::Config(format!("unexpected CSV header {headers:?}")));
    }
    r.deserialize().map(|row| row.map_err(BenchError::from)).collect()
}

pub fn emit_csv(records: &[BenchRecord], path: &Path) -> Result<(), BenchError> {
    write(path, &records_to_csv(records)?)
}

pub fn read_csv(path: &Path) -> Result<Vec<BenchRecord>, BenchError> {
    records_from_csv(&fs::read_to_string(path)?)
}

fn write(path: &Path, text: &str) -> Result<(), BenchError> {
    fs::write(path, text).map_err(|e| BenchError::Write(path.to_path_buf(), e))
}

/// Writes `records.csv`, `summary.csv`, `speedup.svg` and `edges.svg` into
/// `dir`.
pub fn emit_all(records: &[BenchRecord], dir: &Path) -> Result<Vec<CellSummary>, BenchError> {
    if records.is_empty() {
        return Err(BenchError::Config("no records to report".into()));
    }
    fs::create_dir_all(dir).map_err(|e| BenchError::Write(dir.to_path_buf(), e))?;
    let cells = summarize(records);
    emit_csv(records, &dir.join("records.csv"))?;
    write(&dir.join("summary.csv"), &summaries_to_csv(&cells)?)?;
    emit_plots(&cells, dir)?;
    Ok(cells)
}

pub fn emit_plots(cells: &[CellSummary], dir: &Path) -> Result<(), BenchError> {
    let speed = series(cells, |c| c.speedup);
    write(
        &dir.join("speedup.svg"),
        &render_svg("Speedup over wA*", "threads", "speedup", &speed),
    )?;
    let edges = series(cells, |c| c.mean_edges);
    write(
        &dir.join("edges.svg"),
        &render_svg("Edges evaluated", "threads", "mean edges evaluated", &edges),
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

/// One series per algorithm (per algorithm and (w, ε) when the cells
/// span several pairs), x = threads. Cells with a non-finite metric are
/// skipped.
pub fn series(cells: &[CellSummary], metric: impl Fn(&CellSummary) -> f64) -> Vec<Series> {
    let pairs: BTreeSet<(u64, u64)> = cells.iter().map(|c| (c.w.to_bits(), c.eps.to_bits())).collect();
    let label = |c: &CellSummary| {
        if pairs.len() > 1 {
            format!("{} (w={}, eps={})", c.algorithm, c.w, c.eps)
        } else {
            c.algorithm.to_string()
        }
    };
    let mut out: Vec<Series> = Vec::new();
    for c in cells {
        let y = metric(c);
        if !y.is_finite() {
            continue;
        }
        let l = label(c);
        match out.iter_mut().find(|s| s.label == l) {
            Some(s) => s.points.push((c.threads as f64, y)),
            None => out.push(Series {
                label: l,
                points: vec![(c.threads as f64, y)],
            }),
        }
    }
    for s in &mut out {
        s.points.sort_by(|a, b| a.0.total_cmp(&b.0));
    }
    out
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

/// A self-contained line chart.
pub fn render_svg(title: &str, xlabel: &str, ylabel: &str, series: &[Series]) -> String {
    let (w, h) = (640.0, 420.0);
    let (left, right, top, bottom) = (70.0, 170.0, 40.0, 50.0);
    let pw = w - left - right;
    let ph = h - top - bottom;
    let all = series.iter().flat_map(|s| s.points.iter());
    let (mut x0, mut x1, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, 0.0f64);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        (x0, x1) = (0.0, 1.0);
    }
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    if y1 <= 0.0 {
        y1 = 1.0;
    }
    y1 *= 1.05;
    let sx = |x: f64| left + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| top + ph - y / y1 * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#, left + pw / 2.0, escape(title));
    let _ = writeln!(
        s,
        r#"<path d="M{left},{top} V{} H{}" fill="none" stroke="black"/>"#,
        top + ph,
        left + pw
    );
    for i in 0..=5 {
        let y = y1 * i as f64 / 5.0;
        let py = sy(y);
        let _ = writeln!(
            s,
            r##"<line x1="{left}" y1="{py:.1}" x2="{}" y2="{py:.1}" stroke="#ddd"/><text x="{}" y="{:.1}" text-anchor="end">{}</text>"##,
            left + pw,
            left - 6.0,
            py + 4.0,
            tick(y)
        );
    }
    let xs: BTreeSet<u64> = series.iter().flat_map(|s| s.points.iter().map(|p| p.0.to_bits())).collect();
    for bits in xs {
        let x = f64::from_bits(bits);
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{}" text-anchor="middle">{}</text>"#,
            sx(x),
            top + ph + 16.0,
            tick(x)
        );
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, left + pw / 2.0, h - 12.0, escape(xlabel));
    let _ = writeln!(
        s,
        r#"<text transform="translate(18,{}) rotate(-90)" text-anchor="middle">{}</text>"#,
        top + ph / 2.0,
        escape(ylabel)
    );
    for (i, ser) in series.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let pts: Vec<String> = ser.points.iter().map(|&(x, y)| format!("{:.1},{:.1}", sx(x), sy(y))).collect();
        let _ = writeln!(
            s,
            r#"<polyline class="series" points="{}" fill="none" stroke="{colour}" stroke-width="2"/>"#,
            pts.join(" ")
        );
        for &(x, y) in &ser.points {
            let _ = writeln!(s, r#"<circle cx="{:.1}" cy="{:.1}" r="3" fill="{colour}"/>"#, sx(x), sy(y));
        }
        let ly = top + 10.0 + 18.0 * i as f64;
        let lx = left + pw + 12.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{colour}" stroke-width="2"/><text x="{}" y="{}">{}</text>"#,
            lx + 18.0,
            lx + 24.0,
            ly + 4.0,
            escape(&ser.label)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn tick(v: f64) -> String {
    if v == v.round() && v.abs() < 1e6 {
        format!("{}", v as i64)
    } else if v.abs() >= 100.0 {
        format!("{v:.0}")
    } else {
        format!("{v:.2}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Fixed-width text table of cell summaries.
pub fn summary_table(cells: &[CellSummary]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<8} {:>4} {:>5} {:>5} {:>7} {:>10} {:>10} {:>10} {:>8}",
        "algo", "N_t", "w", "eps", "solved", "mean_s", "median_s", "edges", "speedup"
    );
    for c in cells {
        let _ = writeln!(
            s,
            "{:<8} {:>4} {:>5} {:>5} {:>3}/{:<3} {:>10.4} {:>10.4} {:>10.1} {:>8.2}",
            c.algorithm.to_string(),
            c.threads,
            c.w,
            c.eps,
            c.solved,
            c.trials,
            c.mean_time,
            c.median_time,
            c.mean_edges,
            c.speedup
        );
    }
    s
}
