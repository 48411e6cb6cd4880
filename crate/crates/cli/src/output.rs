//! Tables, reports and their CSV/JSON/SVG serialisation.

use std::fs::{self, File};
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use epr_geometry::verify::ResidualReport;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::args::{Format, RunConfig};

/// A named numeric table. Flags are stored as 0/1, missing values as NaN.
#[derive(Debug, Clone, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

/// A residual report labelled with the part of the run it belongs to.
#[derive(Debug, Clone, Serialize)]
pub struct LabelledReport {
    pub suite: String,
    #[serde(flatten)]
    pub report: ResidualReport,
}

/// Everything one command produces.
#[derive(Debug, Default)]
pub struct RunOutput {
    pub tables: Vec<Table>,
    pub reports: Vec<LabelledReport>,
    pub summary: Map<String, Value>,
    pub plots: Vec<Plot>,
}

impl RunOutput {
    pub fn report(&mut self, suite: &str, report: ResidualReport) {
        self.reports.push(LabelledReport { suite: suite.into(), report });
    }

    pub fn note(&mut self, key: &str, value: impl Serialize) {
        self.summary.insert(key.into(), serde_json::to_value(value).unwrap_or(Value::Null));
    }

    pub fn all_passed(&self) -> bool {
        self.reports.iter().all(|r| r.report.passed)
    }
}

/// Creates `dir` and checks that a file can be written there.
pub fn ensure_writable(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create output directory {}", dir.display()))?;
    let probe = dir.join(".epr-geometry-write-probe");
    File::create(&probe).with_context(|| format!("output directory {} is not writable", dir.display()))?;
    fs::remove_file(&probe).ok();
    Ok(())
}

fn header(cfg: &RunConfig, command: &str) -> String {
    cfg.entries(command).into_iter().map(|(k, v)| format!("# {k} = {v}\n")).collect()
}

fn write_csv(path: &Path, head: &str, columns: &[String], rows: impl Iterator<Item = Vec<String>>) -> Result<()> {
    let mut file = File::create(path).with_context(|| format!("writing {}", path.display()))?;
    file.write_all(head.as_bytes())?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record(columns)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

const REPORT_COLUMNS: [&str; 13] = [
    "suite",
    "equation",
    "grid_lo",
    "grid_hi",
    "grid_n",
    "max_residual",
    "rms_residual",
    "normalization",
    "normalized_max",
    "tolerance",
    "passed",
    "evaluated",
    "skipped",
];

fn report_row(r: &LabelledReport) -> Vec<String> {
    let rep = &r.report;
    let eq = serde_json::to_value(rep.equation).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
    vec![
        r.suite.clone(),
        eq,
        rep.grid.lo.to_string(),
        rep.grid.hi.to_string(),
        rep.grid.count.to_string(),
        format!("{:e}", rep.max_residual),
        format!("{:e}", rep.rms_residual),
        format!("{:e}", rep.normalization),
        format!("{:e}", rep.normalized_max),
        format!("{:e}", rep.tolerance),
        rep.passed.to_string(),
        rep.evaluated.to_string(),
        rep.skipped.to_string(),
    ]
}

/// Writes all artifacts and returns the paths written.
pub fn write(cfg: &RunConfig, command: &str, out: &RunOutput) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    match cfg.format {
        Format::Csv => {
            let head = header(cfg, command);
            for t in &out.tables {
                let path = cfg.out.join(format!("{}.csv", t.name));
                write_csv(&path, &head, &t.columns, t.rows.iter().map(|r| r.iter().map(|v| v.to_string()).collect()))?;
                written.push(path);
            }
            if !out.reports.is_empty() {
                let path = cfg.out.join("reports.csv");
                let cols: Vec<String> = REPORT_COLUMNS.iter().map(|c| c.to_string()).collect();
                write_csv(&path, &head, &cols, out.reports.iter().map(report_row))?;
                written.push(path);
            }
            if !out.summary.is_empty() {
                let path = cfg.out.join("summary.json");
                fs::write(&path, serde_json::to_string_pretty(&Value::Object(out.summary.clone()))?)?;
                written.push(path);
            }
        }
        Format::Json => {
            let params: Map<String, Value> = cfg.entries(command).into_iter().map(|(k, v)| (k, Value::String(v))).collect();
            let doc = json!({
                "command": command,
                "params": params,
                "reports": out.reports,
                "summary": out.summary,
                "artifacts": out.tables,
            });
            let path = cfg.out.join(format!("{command}.json"));
            fs::write(&path, serde_json::to_string_pretty(&doc)?).with_context(|| format!("writing {}", path.display()))?;
            written.push(path);
        }
    }
    if cfg.plots {
        for p in &out.plots {
            let path = cfg.out.join(format!("{}.svg", p.name));
            fs::write(&path, p.to_svg())?;
            written.push(path);
        }
    }
    Ok(written)
}

/// Minimal multi-series line plot.
#[derive(Debug, Clone)]
pub struct Plot {
    pub name: String,
    pub title: String,
    pub x_label: String,
    pub x: Vec<f64>,
    pub series: Vec<(String, Vec<f64>)>,
}

const COLORS: [&str; 5] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];

impl Plot {
    pub fn from_table(t: &Table, name: &str, title: &str, x: &str, ys: &[&str]) -> Option<Self> {
        Some(Self {
            name: name.into(),
            title: title.into(),
            x_label: x.into(),
            x: t.column(x)?,
            series: ys.iter().filter_map(|y| Some((y.to_string(), t.column(y)?))).collect(),
        })
    }

    pub fn to_svg(&self) -> String {
        let (w, h, pad) = (640.0, 400.0, 50.0);
        let finite = |v: &f64| v.is_finite();
        let xs = self.x.iter().copied().filter(finite);
        let (x0, x1) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
        let ys = self.series.iter().flat_map(|(_, s)| s.iter().copied().filter(finite));
        let (mut y0, mut y1) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
        if !(y1 > y0) {
            y0 -= 1.0;
            y1 += 1.0;
        }
        let sx = |v: f64| pad + (v - x0) / (x1 - x0) * (w - 2.0 * pad);
        let sy = |v: f64| h - pad - (v - y0) / (y1 - y0) * (h - 2.0 * pad);
        let mut svg = format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" font-family=\"sans-serif\" font-size=\"12\">\n\
             <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
             <text x=\"{}\" y=\"20\" text-anchor=\"middle\">{}</text>\n\
             <rect x=\"{pad}\" y=\"{pad}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n\
             <text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n\
             <text x=\"{pad}\" y=\"{}\">{x0:.3}</text><text x=\"{}\" y=\"{}\" text-anchor=\"end\">{x1:.3}</text>\n\
             <text x=\"5\" y=\"{}\">{y1:.3}</text><text x=\"5\" y=\"{}\">{y0:.3}</text>\n",
            w / 2.0,
            self.title,
            w - 2.0 * pad,
            h - 2.0 * pad,
            w / 2.0,
            h - 10.0,
            self.x_label,
            h - pad + 15.0,
            w - pad,
            h - pad + 15.0,
            pad + 4.0,
            h - pad,
        );
        for (i, (label, ys)) in self.series.iter().enumerate() {
            let color = COLORS[i % COLORS.len()];
            // Break the polyline at NaN so gaps stay visible.
            let mut segment = Vec::new();
            let flush = |seg: &mut Vec<String>, svg: &mut String| {
                if seg.len() > 1 {
                    svg.push_str(&format!("<polyline fill=\"none\" stroke=\"{color}\" points=\"{}\"/>\n", seg.join(" ")));
                }
                seg.clear();
            };
            for (x, y) in self.x.iter().zip(ys) {
                if x.is_finite() && y.is_finite() {
                    segment.push(format!("{:.2},{:.2}", sx(*x), sy(*y)));
                } else {
                    flush(&mut segment, &mut svg);
                }
            }
            flush(&mut segment, &mut svg);
            svg.push_str(&format!(
                "<text x=\"{}\" y=\"{}\" fill=\"{color}\">{label}</text>\n",
                w - pad - 100.0,
                pad + 15.0 * (i as f64 + 1.0)
            ));
        }
        svg.push_str("</svg>\n");
        svg
    }
}
