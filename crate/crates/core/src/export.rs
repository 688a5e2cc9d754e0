//! Plain-text writers: CSV point tables, OBJ meshes, SVG curve plots and the
//! run manifest. Numbers are written with fixed formatting so identical runs
//! produce identical bytes.

use std::fmt::Write as _;

use crate::extract::{GridSpec, Polyline, TriangleMesh};

/// One row of a point table.
#[derive(Debug, Clone, PartialEq)]
pub struct PointRecord {
    pub coords: Vec<f64>,
    pub residual: f64,
    pub cos_sq: Option<f64>,
}

const AXES: [&str; 8] = ["x", "y", "z", "w", "x5", "x6", "x7", "x8"];

fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:e}")
    } else {
        String::new()
    }
}

/// CSV with one column per coordinate, then `residual`, then `cos_sq` when
/// any record carries it.
pub fn csv(records: &[PointRecord], dim: usize) -> String {
    let with_cos = records.iter().any(|r| r.cos_sq.is_some());
    let mut out = String::new();
    let mut header: Vec<&str> = AXES[..dim].to_vec();
    header.push("residual");
    if with_cos {
        header.push("cos_sq");
    }
    out.push_str(&header.join(","));
    out.push('\n');
    for r in records {
        let mut cells: Vec<String> = r.coords.iter().map(|&x| num(x)).collect();
        cells.push(num(r.residual));
        if with_cos {
            cells.push(r.cos_sq.map(num).unwrap_or_default());
        }
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Coordinate columns of a CSV written by [`csv`] (or any table whose leading
/// columns are coordinates). Non-numeric header rows are skipped.
pub fn read_csv_points(text: &str, dim: usize) -> Result<Vec<Vec<f64>>, String> {
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() < dim {
            return Err(format!("line {}: expected at least {dim} columns", k + 1));
        }
        let parsed: Result<Vec<f64>, _> = cells[..dim].iter().map(|c| c.trim().parse::<f64>()).collect();
        match parsed {
            Ok(p) => out.push(p),
            Err(_) if k == 0 => continue,
            Err(e) => return Err(format!("line {}: {e}", k + 1)),
        }
    }
    Ok(out)
}

/// Wavefront OBJ with `v` and `f` statements only.
pub fn obj(mesh: &TriangleMesh) -> String {
    let mut out = String::with_capacity(mesh.vertices.len() * 40 + mesh.triangles.len() * 24);
    for v in &mesh.vertices {
        let _ = writeln!(out, "v {:.9} {:.9} {:.9}", v[0], v[1], v[2]);
    }
    for t in &mesh.triangles {
        let _ = writeln!(out, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1);
    }
    out
}

/// SVG of traced curves over the grid box, with a 5% margin and `y` pointing up.
/// `segments` are drawn as marked line segments (the fixed simplexes in 2D).
pub fn svg(polylines: &[Polyline], grid: &GridSpec, segments: &[[[f64; 2]; 2]]) -> String {
    let [(x0, x1), (y0, y1)] = [grid.bounds()[0], grid.bounds()[1]];
    let (mx, my) = (0.05 * (x1 - x0), 0.05 * (y1 - y0));
    let (w, h) = (x1 - x0 + 2.0 * mx, y1 - y0 + 2.0 * my);
    let stroke = 0.002 * w.max(h);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.6} {:.6} {:.6} {:.6}">"#,
        x0 - mx,
        -(y1 + my),
        w,
        h
    );
    let _ = writeln!(
        out,
        r#"<rect x="{:.6}" y="{:.6}" width="{:.6}" height="{:.6}" fill="none" stroke="lightgray" stroke-width="{stroke:.6}"/>"#,
        x0,
        -y1,
        x1 - x0,
        y1 - y0
    );
    let _ = writeln!(
        out,
        r#"<g fill="none" stroke="black" stroke-width="{stroke:.6}" stroke-linejoin="round">"#
    );
    for p in polylines {
        let mut d = String::new();
        for (k, q) in p.points.iter().enumerate() {
            let _ = write!(d, "{}{:.6} {:.6}", if k == 0 { "M" } else { " L" }, q[0], -q[1]);
        }
        if p.closed {
            d.push_str(" Z");
        }
        let _ = writeln!(out, r#"<path d="{d}"/>"#);
    }
    out.push_str("</g>\n");
    let marker = 4.0 * stroke;
    for (k, s) in segments.iter().enumerate() {
        let _ = writeln!(
            out,
            r#"<line class="simplex" x1="{:.6}" y1="{:.6}" x2="{:.6}" y2="{:.6}" stroke="{}" stroke-width="{:.6}"/>"#,
            s[0][0],
            -s[0][1],
            s[1][0],
            -s[1][1],
            if k == 0 { "crimson" } else { "royalblue" },
            2.0 * stroke
        );
        for q in s {
            let _ = writeln!(
                out,
                r#"<circle cx="{:.6}" cy="{:.6}" r="{marker:.6}" fill="black"/>"#,
                q[0], -q[1]
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Summary of a residual column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualStats {
    pub count: usize,
    pub max: f64,
    pub mean: f64,
    pub above: usize,
}

impl ResidualStats {
    /// Sequential statistics; `above` counts entries over `tolerance` (and non-finite ones).
    pub fn of(residuals: impl IntoIterator<Item = f64>, tolerance: f64) -> Self {
        let (mut count, mut max, mut sum, mut above) = (0usize, 0.0f64, 0.0f64, 0usize);
        for r in residuals {
            count += 1;
            if r.is_finite() {
                max = max.max(r);
                sum += r;
            }
            if r.is_nan() || r > tolerance {
                above += 1;
            }
        }
        Self {
            count,
            max,
            mean: if count > 0 { sum / count as f64 } else { 0.0 },
            above,
        }
    }
}

/// Ordered `key: value` lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Manifest {
    lines: Vec<(String, String)>,
}

impl Manifest {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl std::fmt::Display) -> &mut Self {
        self.lines.push((key.into(), value.to_string()));
        self
    }

    pub fn push_stats(&mut self, stats: &ResidualStats) -> &mut Self {
        self.push("residual_count", stats.count)
            .push("residual_max", format!("{:e}", stats.max))
            .push("residual_mean", format!("{:e}", stats.mean))
            .push("residual_above_tolerance", stats.above)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.lines.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        self.lines.iter().map(|(k, v)| format!("{k}: {v}\n")).collect()
    }
}
