//! CSV and SVG emission. CSV is the interchange format: mandatory headers,
//! comma separators, "." decimals, floats printed with 17 significant digits
//! so repeated runs are byte-identical. SVG plots are written directly,
//! without external tooling.

use crate::analysis::{BoundReport, DiagnosticsSeries};
use crate::numerics::fmt_f64;
use crate::solver::{laplacian, SimState};
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

/// Snapshot filename with the time encoded as fixed-point microseconds.
pub fn snapshot_filename(time: f64) -> String {
    format!("snapshot_t{:012}.csv", (time * 1e6).round() as u64)
}

/// One CSV per snapshot: `cell_index[, cell_index_y], x[, y], n, p, w`.
pub fn write_snapshot_csv(dir: &Path, state: &SimState) -> io::Result<PathBuf> {
    let p = state
        .pressure()
        .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e.to_string()))?;
    let mut w = laplacian(&p);
    if !state.growth.is_zero() {
        for (wi, &pi) in w.values.iter_mut().zip(&p.values) {
            *wi += state
                .growth
                .g(pi)
                .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e.to_string()))?;
        }
    }
    let path = dir.join(snapshot_filename(state.time));
    let mut out = String::new();
    let g = &state.n.grid;
    match g.dim {
        1 => {
            out.push_str("cell_index,x,n,p,w\n");
            for i in 0..g.cells {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    i,
                    fmt_f64(g.x(i)),
                    fmt_f64(state.n.values[i]),
                    fmt_f64(p.values[i]),
                    fmt_f64(w.values[i])
                ));
            }
        }
        _ => {
            out.push_str("cell_index,cell_index_y,x,y,n,p,w\n");
            for j in 0..g.cells {
                for i in 0..g.cells {
                    let (x, y) = g.xy(i, j);
                    let k = j * g.cells + i;
                    out.push_str(&format!(
                        "{},{},{},{},{},{},{}\n",
                        i,
                        j,
                        fmt_f64(x),
                        fmt_f64(y),
                        fmt_f64(state.n.values[k]),
                        fmt_f64(p.values[k]),
                        fmt_f64(w.values[k])
                    ));
                }
            }
        }
    }
    fs::write(&path, out)?;
    Ok(path)
}

pub const DIAGNOSTICS_HEADER: &str = "time,mass,min_w,sup_weighted_neg_w,l1_weighted_neg_w,l2_weighted_neg_w_sq,complementarity_r1,complementarity_r2,max_pxx";

pub fn write_diagnostics_csv(path: &Path, series: &DiagnosticsSeries) -> io::Result<()> {
    let mut out = String::from(DIAGNOSTICS_HEADER);
    out.push('\n');
    for i in 0..series.len() {
        let row = [
            series.times[i],
            series.mass[i],
            series.min_w[i],
            series.sup_weighted_neg_w[i],
            series.l1_weighted_neg_w[i],
            series.l2_weighted_neg_w_sq[i],
            series.complementarity_r1[i],
            series.complementarity_r2[i],
            series.max_pxx[i],
        ];
        let cells: Vec<String> = row.iter().map(|&v| fmt_f64(v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    fs::write(path, out)
}

pub fn read_diagnostics_csv(path: &Path) -> io::Result<DiagnosticsSeries> {
    let (header, rows) = read_csv(path)?;
    let col = |name: &str| -> io::Result<usize> {
        header.iter().position(|h| h == name).ok_or_else(|| {
            io::Error::new(io::ErrorKind::InvalidData, format!("missing column {name}"))
        })
    };
    let idx = [
        col("time")?,
        col("mass")?,
        col("min_w")?,
        col("sup_weighted_neg_w")?,
        col("l1_weighted_neg_w")?,
        col("l2_weighted_neg_w_sq")?,
        col("complementarity_r1")?,
        col("complementarity_r2")?,
        col("max_pxx")?,
    ];
    let mut series = DiagnosticsSeries::new();
    for row in &rows {
        series.push(crate::analysis::DiagnosticsRow {
            time: row[idx[0]],
            mass: row[idx[1]],
            min_w: row[idx[2]],
            sup_weighted_neg_w: row[idx[3]],
            l1_weighted_neg_w: row[idx[4]],
            l2_weighted_neg_w_sq: row[idx[5]],
            complementarity_r1: row[idx[6]],
            complementarity_r2: row[idx[7]],
            max_pxx: row[idx[8]],
        });
    }
    Ok(series)
}

/// Bound-report CSV: one row per checked time.
pub fn write_bound_csv(path: &Path, report: &BoundReport) -> io::Result<()> {
    let mut out = String::from("time,measured,bound,margin\n");
    for i in 0..report.times.len() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt_f64(report.times[i]),
            fmt_f64(report.measured[i]),
            fmt_f64(report.bound[i]),
            fmt_f64(report.margins[i])
        ));
    }
    fs::write(path, out)
}

/// Plain CSV reader: header row plus float data rows.
pub fn read_csv(path: &Path) -> io::Result<(Vec<String>, Vec<Vec<f64>>)> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidData, "empty CSV"))?
        .split(',')
        .map(|s| s.trim().to_string())
        .collect();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let mut row = Vec::with_capacity(header.len());
        for cell in line.split(',') {
            row.push(cell.trim().parse::<f64>().map_err(|_| {
                io::Error::new(
                    io::ErrorKind::InvalidData,
                    format!("{}:{}: bad number `{cell}`", path.display(), i + 2),
                )
            })?);
        }
        if row.len() != header.len() {
            return Err(io::Error::new(
                io::ErrorKind::InvalidData,
                format!("{}:{}: column count mismatch", path.display(), i + 2),
            ));
        }
        rows.push(row);
    }
    Ok((header, rows))
}

/// Reads one named column from a CSV file.
pub fn read_csv_column(path: &Path, name: &str) -> io::Result<Vec<f64>> {
    let (header, rows) = read_csv(path)?;
    let k = header.iter().position(|h| h == name).ok_or_else(|| {
        io::Error::new(
            io::ErrorKind::InvalidData,
            format!("{}: missing column `{name}`", path.display()),
        )
    })?;
    Ok(rows.iter().map(|r| r[k]).collect())
}

/// Summary text block, one section per theorem check.
pub fn summary_text(reports: &[BoundReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&format!("theorem {}\n", r.theorem));
        out.push_str(&format!("  constants: {}\n", r.constants));
        out.push_str(&format!(
            "  worst margin: {} at t = {}\n",
            fmt_f64(r.worst_margin),
            fmt_f64(r.worst_time)
        ));
        out.push_str(&format!("  tolerance: {}\n", fmt_f64(r.tol_rel)));
        out.push_str(&format!("  verdict: {}\n", if r.passed { "PASS" } else { "FAIL" }));
    }
    out
}

/// One plotted series.
pub struct SvgSeries<'a> {
    pub label: &'a str,
    pub color: &'a str,
    pub dashed: bool,
    pub points: Vec<(f64, f64)>,
}

const SVG_W: f64 = 640.0;
const SVG_H: f64 = 480.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 55.0;

/// Log-log plot of the given series (points with nonpositive coordinates are
/// dropped). Axes are decorated with decade ticks.
pub fn write_svg_loglog(
    path: &Path,
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[SvgSeries],
) -> io::Result<()> {
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for s in series {
        pts.extend(s.points.iter().filter(|(x, y)| *x > 0.0 && *y > 0.0));
    }
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SVG_W}\" height=\"{SVG_H}\" viewBox=\"0 0 {SVG_W} {SVG_H}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"24\" font-family=\"monospace\" font-size=\"15\" text-anchor=\"middle\">{}</text>\n",
        SVG_W / 2.0,
        xml_escape(title)
    ));
    if pts.is_empty() {
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"13\" text-anchor=\"middle\">no positive data to plot</text>\n",
            SVG_W / 2.0,
            SVG_H / 2.0
        ));
        svg.push_str("</svg>\n");
        return fs::write(path, svg);
    }
    let (mut x0, mut x1) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &pts {
        x0 = x0.min(x.log10());
        x1 = x1.max(x.log10());
        y0 = y0.min(y.log10());
        y1 = y1.max(y.log10());
    }
    if x1 - x0 < 1e-12 {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if y1 - y0 < 1e-12 {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let pad_x = 0.05 * (x1 - x0);
    let pad_y = 0.05 * (y1 - y0);
    let (x0, x1, y0, y1) = (x0 - pad_x, x1 + pad_x, y0 - pad_y, y1 + pad_y);
    let to_px = |lx: f64| MARGIN_L + (lx - x0) / (x1 - x0) * (SVG_W - MARGIN_L - MARGIN_R);
    let to_py = |ly: f64| SVG_H - MARGIN_B - (ly - y0) / (y1 - y0) * (SVG_H - MARGIN_T - MARGIN_B);

    svg.push_str(&format!(
        "<rect x=\"{MARGIN_L}\" y=\"{MARGIN_T}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
        SVG_W - MARGIN_L - MARGIN_R,
        SVG_H - MARGIN_T - MARGIN_B
    ));

    for d in (x0.ceil() as i64)..=(x1.floor() as i64) {
        let px = to_px(d as f64);
        svg.push_str(&format!(
            "<line x1=\"{px:.2}\" y1=\"{MARGIN_T}\" x2=\"{px:.2}\" y2=\"{}\" stroke=\"#dddddd\"/>\n",
            SVG_H - MARGIN_B
        ));
        svg.push_str(&format!(
            "<text x=\"{px:.2}\" y=\"{}\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"middle\">1e{d}</text>\n",
            SVG_H - MARGIN_B + 16.0
        ));
    }
    for d in (y0.ceil() as i64)..=(y1.floor() as i64) {
        let py = to_py(d as f64);
        svg.push_str(&format!(
            "<line x1=\"{MARGIN_L}\" y1=\"{py:.2}\" x2=\"{}\" y2=\"{py:.2}\" stroke=\"#dddddd\"/>\n",
            SVG_W - MARGIN_R
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{py:.2}\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"end\">1e{d}</text>\n",
            MARGIN_L - 6.0
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
        (MARGIN_L + SVG_W - MARGIN_R) / 2.0,
        SVG_H - 12.0,
        xml_escape(x_label)
    ));
    svg.push_str(&format!(
        "<text x=\"16\" y=\"{}\" font-family=\"monospace\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">{}</text>\n",
        (MARGIN_T + SVG_H - MARGIN_B) / 2.0,
        (MARGIN_T + SVG_H - MARGIN_B) / 2.0,
        xml_escape(y_label)
    ));

    for (si, s) in series.iter().enumerate() {
        let good: Vec<(f64, f64)> =
            s.points.iter().copied().filter(|(x, y)| *x > 0.0 && *y > 0.0).collect();
        if good.is_empty() {
            continue;
        }
        let coords: Vec<String> = good
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", to_px(x.log10()), to_py(y.log10())))
            .collect();
        let dash = if s.dashed { " stroke-dasharray=\"6,4\"" } else { "" };
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"{} points=\"{}\"/>\n",
            s.color,
            dash,
            coords.join(" ")
        ));
        let ly = MARGIN_T + 16.0 + 16.0 * si as f64;
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{ly:.2}\" x2=\"{}\" y2=\"{ly:.2}\" stroke=\"{}\"{} stroke-width=\"1.5\"/>\n",
            SVG_W - 190.0,
            SVG_W - 160.0,
            s.color,
            dash
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"11\">{}</text>\n",
            SVG_W - 152.0,
            ly + 4.0,
            xml_escape(s.label)
        ));
    }
    svg.push_str("</svg>\n");
    fs::write(path, svg)
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Writes the log-log plot of one bound report. Lower bounds on min w are
/// plotted through their absolute values.
pub fn write_bound_svg(path: &Path, report: &BoundReport, flip_sign: bool) -> io::Result<()> {
    let take = |vals: &[f64]| -> Vec<(f64, f64)> {
        report
            .times
            .iter()
            .zip(vals)
            .map(|(&t, &v)| (t, if flip_sign { -v } else { v }))
            .collect()
    };
    let (m_label, b_label) = if flip_sign {
        ("-measured", "-bound")
    } else {
        ("measured", "bound")
    };
    write_svg_loglog(
        path,
        &format!("{} ({})", report.theorem, if report.passed { "PASS" } else { "FAIL" }),
        "t",
        "value",
        &[
            SvgSeries { label: m_label, color: "#1f77b4", dashed: false, points: take(&report.measured) },
            SvgSeries { label: b_label, color: "#d62728", dashed: true, points: take(&report.bound) },
        ],
    )
}

/// Minimal JSON writer for the weight-verification summary: string keys with
/// float, string, bool or null values, emitted in insertion order.
pub struct JsonBlock {
    items: Vec<(String, String)>,
}

impl JsonBlock {
    pub fn new() -> Self {
        Self { items: Vec::new() }
    }

    pub fn float(&mut self, key: &str, v: f64) -> &mut Self {
        self.items.push((key.to_string(), fmt_f64(v)));
        self
    }

    pub fn maybe_float(&mut self, key: &str, v: Option<f64>) -> &mut Self {
        let rendered = v.map_or("null".to_string(), fmt_f64);
        self.items.push((key.to_string(), rendered));
        self
    }

    pub fn string(&mut self, key: &str, v: &str) -> &mut Self {
        self.items.push((key.to_string(), format!("\"{v}\"")));
        self
    }

    pub fn bool(&mut self, key: &str, v: bool) -> &mut Self {
        self.items.push((key.to_string(), v.to_string()));
        self
    }

    pub fn int(&mut self, key: &str, v: i64) -> &mut Self {
        self.items.push((key.to_string(), v.to_string()));
        self
    }

    pub fn nested(&mut self, key: &str, block: JsonBlock) -> &mut Self {
        self.items.push((key.to_string(), block.render()));
        self
    }

    pub fn render(&self) -> String {
        let body: Vec<String> =
            self.items.iter().map(|(k, v)| format!("  \"{k}\": {v}")).collect();
        format!("{{\n{}\n}}", body.join(",\n"))
    }
}

impl Default for JsonBlock {
    fn default() -> Self {
        Self::new()
    }
}

pub fn write_text(path: &Path, text: &str) -> io::Result<()> {
    let mut f = fs::File::create(path)?;
    f.write_all(text.as_bytes())
}
