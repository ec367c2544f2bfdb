//! SVG 1.1 figures: amoeba rasters as run-length rows, spines as polylines,
//! text labels, and graph drawings. Element order and number formatting are
//! fixed so that identical scenes give identical bytes.

use std::f64::consts::TAU;
use std::fmt::Write as _;
use syz_core::amoeba::{AmoebaRaster, TropicalSpine, Window};
use syz_core::gamma::{GammaGraph, VertexKind};
use thiserror::Error;

const CANVAS: f64 = 600.0;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SvgError {
    #[error("nothing to draw")]
    EmptyScene,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Label {
    pub at: [f64; 2],
    pub text: String,
}

/// Node positions and edges of a graph drawing.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphLayout {
    /// Position and whether the node is drawn filled.
    pub nodes: Vec<([f64; 2], bool)>,
    pub edges: Vec<(usize, usize)>,
}

impl GraphLayout {
    /// Vertices on the unit circle in id order, Positive vertices filled.
    pub fn circular(g: &GammaGraph) -> Self {
        let ids: Vec<usize> = g.vertices().map(|v| v.id).collect();
        let n = ids.len().max(1) as f64;
        let nodes = g
            .vertices()
            .enumerate()
            .map(|(k, v)| {
                let t = TAU * k as f64 / n;
                ([t.cos(), t.sin()], v.kind == VertexKind::Positive)
            })
            .collect();
        let index = |id: usize| ids.binary_search(&id).expect("vertex ids are sorted");
        let edges = g.edges().map(|e| (index(e.a), index(e.b))).collect();
        Self { nodes, edges }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Scene<'a> {
    pub raster: Option<&'a AmoebaRaster>,
    pub spine: Option<&'a TropicalSpine>,
    pub labels: Vec<Label>,
    pub graph: Option<GraphLayout>,
}

impl Scene<'_> {
    fn is_empty(&self) -> bool {
        self.raster.is_none() && self.spine.is_none() && self.labels.is_empty() && self.graph.is_none()
    }
}

/// World rectangle mapped onto the square canvas, y pointing up.
struct View {
    xmin: f64,
    xmax: f64,
    ymin: f64,
    ymax: f64,
}

impl View {
    fn from_window(w: &Window) -> Self {
        Self {
            xmin: w.xmin,
            xmax: w.xmax,
            ymin: w.ymin,
            ymax: w.ymax,
        }
    }

    fn around(points: &[[f64; 2]]) -> Self {
        let mut v = Self {
            xmin: f64::INFINITY,
            xmax: f64::NEG_INFINITY,
            ymin: f64::INFINITY,
            ymax: f64::NEG_INFINITY,
        };
        for p in points {
            v.xmin = v.xmin.min(p[0]);
            v.xmax = v.xmax.max(p[0]);
            v.ymin = v.ymin.min(p[1]);
            v.ymax = v.ymax.max(p[1]);
        }
        if !v.xmin.is_finite() {
            return Self {
                xmin: -1.0,
                xmax: 1.0,
                ymin: -1.0,
                ymax: 1.0,
            };
        }
        let pad = 0.5 * (v.xmax - v.xmin).max(v.ymax - v.ymin).max(2.0);
        Self {
            xmin: v.xmin - pad,
            xmax: v.xmax + pad,
            ymin: v.ymin - pad,
            ymax: v.ymax + pad,
        }
    }

    fn x(&self, x: f64) -> f64 {
        (x - self.xmin) / (self.xmax - self.xmin) * CANVAS
    }

    fn y(&self, y: f64) -> f64 {
        (self.ymax - y) / (self.ymax - self.ymin) * CANVAS
    }

    fn sx(&self, dx: f64) -> f64 {
        dx / (self.xmax - self.xmin) * CANVAS
    }

    fn sy(&self, dy: f64) -> f64 {
        dy / (self.ymax - self.ymin) * CANVAS
    }
}

/// Fixed-precision number with `-0.000` normalized to `0.000`.
fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Parameter interval of `p + t d`, `t ∈ [t0, t1]`, inside the view.
fn clip(v: &View, p: [f64; 2], d: [f64; 2], mut t0: f64, mut t1: f64) -> Option<(f64, f64)> {
    for (k, (lo, hi)) in [(v.xmin, v.xmax), (v.ymin, v.ymax)].into_iter().enumerate() {
        if d[k] == 0.0 {
            if p[k] < lo || p[k] > hi {
                return None;
            }
        } else {
            let (a, b) = ((lo - p[k]) / d[k], (hi - p[k]) / d[k]);
            t0 = t0.max(a.min(b));
            t1 = t1.min(a.max(b));
        }
    }
    (t0 <= t1).then_some((t0, t1))
}

pub fn render_svg(scene: &Scene) -> Result<String, SvgError> {
    if scene.is_empty() {
        return Err(SvgError::EmptyScene);
    }
    let view = match (scene.raster, scene.spine) {
        (Some(r), _) => View::from_window(r.window()),
        (None, Some(s)) => {
            let mut pts: Vec<[f64; 2]> = (0..s.vertex_count()).map(|k| s.vertex(k)).collect();
            pts.extend(scene.labels.iter().map(|l| l.at));
            View::around(&pts)
        }
        (None, None) if scene.graph.is_some() => View {
            xmin: -1.2,
            xmax: 1.2,
            ymin: -1.2,
            ymax: 1.2,
        },
        (None, None) => View::around(&scene.labels.iter().map(|l| l.at).collect::<Vec<_>>()),
    };

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" height=\"{0}\" viewBox=\"0 0 {0} {0}\">",
        CANVAS
    );
    let _ = writeln!(out, "<rect x=\"0\" y=\"0\" width=\"{0}\" height=\"{0}\" fill=\"white\"/>", CANVAS);

    if let Some(r) = scene.raster {
        let w = r.window();
        let n = r.resolution();
        let (pw, ph) = (view.sx(w.dx()), view.sy(w.dy()));
        out.push_str("<g id=\"raster\" fill=\"#a0a0a0\" stroke=\"none\">\n");
        for j in 0..n {
            let mut d = String::new();
            let mut i = 0;
            while i < n {
                if !r.is_member(i, j) {
                    i += 1;
                    continue;
                }
                let start = i;
                while i < n && r.is_member(i, j) {
                    i += 1;
                }
                let x = view.x(w.xmin + start as f64 * w.dx());
                let y = view.y(w.ymin + (j + 1) as f64 * w.dy());
                let len = (i - start) as f64 * pw;
                let _ = write!(d, "M{} {}h{}v{}h{}z", num(x), num(y), num(len), num(ph), num(-len));
            }
            if !d.is_empty() {
                let _ = writeln!(out, "<path d=\"{d}\"/>");
            }
        }
        out.push_str("</g>\n");
    }

    if let Some(s) = scene.spine {
        out.push_str("<g id=\"spine\" fill=\"none\" stroke=\"black\" stroke-width=\"2\">\n");
        for e in s.edges() {
            let (p, d, t0, t1) = s.parametric(e);
            let Some((a, b)) = clip(&view, p, d, t0, t1) else {
                continue;
            };
            let q0 = [p[0] + a * d[0], p[1] + a * d[1]];
            let q1 = [p[0] + b * d[0], p[1] + b * d[1]];
            let _ = writeln!(
                out,
                "<polyline points=\"{},{} {},{}\"/>",
                num(view.x(q0[0])),
                num(view.y(q0[1])),
                num(view.x(q1[0])),
                num(view.y(q1[1]))
            );
        }
        out.push_str("</g>\n");
    }

    if let Some(g) = &scene.graph {
        out.push_str("<g id=\"graph\" stroke=\"black\" stroke-width=\"1\">\n");
        for &(a, b) in &g.edges {
            let (p, q) = (g.nodes[a].0, g.nodes[b].0);
            let _ = writeln!(
                out,
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
                num(view.x(p[0])),
                num(view.y(p[1])),
                num(view.x(q[0])),
                num(view.y(q[1]))
            );
        }
        for (p, filled) in &g.nodes {
            let _ = writeln!(
                out,
                "<circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"{}\"/>",
                num(view.x(p[0])),
                num(view.y(p[1])),
                if *filled { "black" } else { "white" }
            );
        }
        out.push_str("</g>\n");
    }

    if !scene.labels.is_empty() {
        out.push_str("<g id=\"labels\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">\n");
        for l in &scene.labels {
            let _ = writeln!(
                out,
                "<text x=\"{}\" y=\"{}\">{}</text>",
                num(view.x(l.at[0])),
                num(view.y(l.at[1])),
                escape(&l.text)
            );
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    Ok(out)
}
