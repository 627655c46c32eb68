//! Static SVG renderings of report data.

use std::f64::consts::TAU;
use std::fmt::{self, Write as _};

use holonorm::geometry::RecessionCone;
use num_complex::Complex64;
use serde_json::Value;

use crate::report::{find_key, Report};
use crate::CliError;

const WIDTH: f64 = 480.0;
const HEIGHT: f64 = 360.0;
const MARGIN: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum PlotKind {
    SupHistory,
    WitnessPath,
    ConeDiagram,
}

impl PlotKind {
    pub fn name(self) -> &'static str {
        match self {
            PlotKind::SupHistory => "sup-history",
            PlotKind::WitnessPath => "witness-path",
            PlotKind::ConeDiagram => "cone-diagram",
        }
    }
}

impl fmt::Display for PlotKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Affine map from a data window onto the drawing area, `y` pointing up.
struct Frame {
    lo: Complex64,
    scale: f64,
}

impl Frame {
    fn fit(points: &[Complex64]) -> Self {
        let (mut lo, mut hi) = (Complex64::new(f64::INFINITY, f64::INFINITY), Complex64::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
        for p in points {
            lo = Complex64::new(lo.re.min(p.re), lo.im.min(p.im));
            hi = Complex64::new(hi.re.max(p.re), hi.im.max(p.im));
        }
        let span = (hi.re - lo.re).max(hi.im - lo.im).max(1e-12);
        let pad = 0.05 * span;
        let lo = lo - Complex64::new(pad, pad);
        let scale = (WIDTH - 2.0 * MARGIN).min(HEIGHT - 2.0 * MARGIN) / (span + 2.0 * pad);
        Self { lo, scale }
    }

    fn map(&self, z: Complex64) -> (f64, f64) {
        (MARGIN + (z.re - self.lo.re) * self.scale, HEIGHT - MARGIN - (z.im - self.lo.im) * self.scale)
    }

    fn path(&self, pts: &[Complex64]) -> String {
        pts.iter()
            .map(|z| {
                let (x, y) = self.map(*z);
                format!("{x:.2},{y:.2}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn header(title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <text x=\"{MARGIN}\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">{title}</text>\n"
    )
}

fn complex_list(v: &Value) -> Option<Vec<Complex64>> {
    serde_json::from_value(v.clone()).ok()
}

/// Render `kind` from the data stored in `report`.
pub fn emit_plot(report: &Report, kind: PlotKind) -> Result<String, CliError> {
    let missing = |what| CliError::MissingData { kind: kind.name(), what };
    match kind {
        PlotKind::SupHistory => {
            let history: Vec<f64> = find_key(&report.results, "history")
                .and_then(|v| serde_json::from_value(v.clone()).ok())
                .filter(|h: &Vec<f64>| !h.is_empty())
                .ok_or_else(|| missing("probe history"))?;
            Ok(sup_history(&history))
        }
        PlotKind::WitnessPath => {
            let points = find_key(&report.results, "witness")
                .and_then(|w| w.get("points"))
                .and_then(complex_list)
                .filter(|p| !p.is_empty())
                .ok_or_else(|| missing("divergence witness"))?;
            let outline = report
                .config
                .domain
                .as_ref()
                .and_then(|d| d.build().ok())
                .filter(|d| d.is_bounded())
                .map(|d| d.boundary_points(24))
                .unwrap_or_default();
            Ok(witness_path(&points, &outline))
        }
        PlotKind::ConeDiagram => {
            let cone: RecessionCone = find_key(&report.results, "cone")
                .and_then(|v| serde_json::from_value(v.clone()).ok())
                .ok_or_else(|| missing("recession cone"))?;
            Ok(cone_diagram(&cone))
        }
    }
}

fn sup_history(history: &[f64]) -> String {
    let n = history.len();
    let (lo, hi) = history
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    let span = (hi - lo).max(1e-12 * hi.abs().max(1.0));
    let x = |i: usize| MARGIN + (WIDTH - 2.0 * MARGIN) * i as f64 / (n.max(2) - 1) as f64;
    let y = |v: f64| HEIGHT - MARGIN - (HEIGHT - 2.0 * MARGIN) * (v - lo) / span;
    let mut s = header("sup estimate per refinement round");
    let pts: Vec<String> = history.iter().enumerate().map(|(i, v)| format!("{:.2},{:.2}", x(i), y(*v))).collect();
    let _ = writeln!(
        s,
        "<line x1=\"{MARGIN}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n\
         <line x1=\"{MARGIN}\" y1=\"{MARGIN}\" x2=\"{MARGIN}\" y2=\"{b}\" stroke=\"black\"/>",
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    );
    let _ = writeln!(s, "<polyline points=\"{}\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\"/>", pts.join(" "));
    for (i, v) in history.iter().enumerate() {
        let _ = writeln!(s, "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"steelblue\"/>", x(i), y(*v));
    }
    let _ = writeln!(
        s,
        "<text x=\"4\" y=\"{:.2}\" font-size=\"10\">{lo:.6e}</text>\n<text x=\"4\" y=\"{:.2}\" font-size=\"10\">{hi:.6e}</text>",
        y(lo),
        y(hi)
    );
    s + "</svg>\n"
}

fn witness_path(points: &[Complex64], outline: &[Complex64]) -> String {
    let all: Vec<Complex64> = points.iter().chain(outline).copied().collect();
    let frame = Frame::fit(&all);
    let mut s = header("divergence witness");
    if !outline.is_empty() {
        let _ = writeln!(s, "<polygon points=\"{}\" fill=\"#eef\" stroke=\"gray\"/>", frame.path(outline));
    }
    let _ = writeln!(s, "<polyline points=\"{}\" fill=\"none\" stroke=\"firebrick\"/>", frame.path(points));
    for (i, z) in points.iter().enumerate() {
        let (x, y) = frame.map(*z);
        let _ = writeln!(s, "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"3\" fill=\"firebrick\"><title>{i}</title></circle>");
    }
    s + "</svg>\n"
}

fn cone_diagram(cone: &RecessionCone) -> String {
    let (cx, cy, r) = (WIDTH / 2.0, HEIGHT / 2.0 + 10.0, 120.0);
    let at = |a: f64| (cx + r * a.cos(), cy - r * a.sin());
    let mut s = header(&format!("recession cone, width {:.6} deg", cone.width_degrees()));
    let _ = writeln!(s, "<circle cx=\"{cx}\" cy=\"{cy}\" r=\"{r}\" fill=\"none\" stroke=\"gray\"/>");
    let arrow = |s: &mut String, h: Complex64| {
        let (x, y) = at(h.arg());
        let _ = writeln!(s, "<line x1=\"{cx}\" y1=\"{cy}\" x2=\"{x:.2}\" y2=\"{y:.2}\" stroke=\"darkgreen\" stroke-width=\"3\"/>");
    };
    match *cone {
        RecessionCone::Empty => {
            let _ = writeln!(s, "<text x=\"{cx}\" y=\"{cy}\" text-anchor=\"middle\" font-size=\"12\">bounded</text>");
        }
        RecessionCone::Single { direction } => arrow(&mut s, direction),
        RecessionCone::AntipodalPair { direction } => {
            arrow(&mut s, direction);
            arrow(&mut s, -direction);
        }
        RecessionCone::Arc { start, end } => {
            let (x0, y0) = at(start);
            let (x1, y1) = at(end);
            let large = if end - start > TAU / 2.0 { 1 } else { 0 };
            let _ = writeln!(
                s,
                "<path d=\"M {cx} {cy} L {x0:.2} {y0:.2} A {r} {r} 0 {large} 0 {x1:.2} {y1:.2} Z\" fill=\"darkgreen\" fill-opacity=\"0.35\" stroke=\"darkgreen\"/>"
            );
        }
        RecessionCone::FullCircle => {
            let _ = writeln!(s, "<circle cx=\"{cx}\" cy=\"{cy}\" r=\"{r}\" fill=\"darkgreen\" fill-opacity=\"0.35\"/>");
        }
    }
    s + "</svg>\n"
}
