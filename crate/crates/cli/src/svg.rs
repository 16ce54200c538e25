//! Level-curve panels, one per stratum, with dotted lines joining the
//! components that belong to the same chain.

use std::fmt::Write as _;
use std::path::Path;

use surftop_core::levelsets::StratumKind;
use surftop_core::planecurve::component_samples;
use surftop_core::Error;

use crate::Figure;

const PANEL: f64 = 200.0;
const GAP: f64 = 24.0;
const TOP: f64 = 32.0;
const PER_INTERVAL: usize = 64;
const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"];

struct Frame {
    window: [[f64; 2]; 2],
}

impl Frame {
    /// Panel coordinates of a working-frame point, `y` growing upwards.
    fn place(&self, panel: usize, p: [f64; 2]) -> [f64; 2] {
        let [[x0, x1], [y0, y1]] = self.window;
        let left = GAP + panel as f64 * (PANEL + GAP);
        [left + (p[0] - x0) / (x1 - x0) * PANEL, TOP + (y1 - p[1]) / (y1 - y0) * PANEL]
    }
}

fn level_label(fig: &Figure, i: usize) -> String {
    let st = &fig.stratification.strata[i];
    let axis = fig.stratification.axis;
    match st.kind {
        StratumKind::CriticalValue => format!("{axis} = {:.4} (critical)", st.level.approx),
        StratumKind::OpenInterval => format!("{axis} = {:.4}", st.level.approx),
    }
}

/// The whole document. Equal figures give equal text.
pub fn render(fig: &Figure) -> String {
    let strata = &fig.stratification.strata;
    let empty = strata.iter().all(|s| s.curve.graph().components.is_empty());
    let panels = if empty { 1 } else { strata.len() };
    let width = GAP + panels as f64 * (PANEL + GAP);
    let height = TOP + PANEL + GAP;
    let frame = Frame { window: fig.window };
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let _ = writeln!(out, r#"<defs>"#);
    for p in 0..panels {
        let left = GAP + p as f64 * (PANEL + GAP);
        let _ = writeln!(out, r#"<clipPath id="clip{p}"><rect x="{left:.2}" y="{TOP:.2}" width="{PANEL:.2}" height="{PANEL:.2}"/></clipPath>"#);
    }
    let _ = writeln!(out, r#"</defs>"#);
    if empty {
        let _ = writeln!(out, r#"<g class="panel" id="panel0">"#);
        let _ = writeln!(out, r#"<rect x="{GAP:.2}" y="{TOP:.2}" width="{PANEL:.2}" height="{PANEL:.2}" fill="none" stroke="gray"/>"#);
        let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">empty</text>"#, GAP + PANEL / 2.0, TOP - 10.0);
        let _ = writeln!(out, "</g>\n</svg>");
        return out;
    }
    for (i, st) in strata.iter().enumerate() {
        let left = GAP + i as f64 * (PANEL + GAP);
        let _ = writeln!(out, r#"<g class="panel" id="panel{i}">"#);
        let _ = writeln!(out, r#"<rect x="{left:.2}" y="{TOP:.2}" width="{PANEL:.2}" height="{PANEL:.2}" fill="none" stroke="gray"/>"#);
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="middle">{}</text>"#,
            left + PANEL / 2.0,
            TOP - 10.0,
            level_label(fig, i)
        );
        let _ = writeln!(out, r#"<g clip-path="url(#clip{i})" fill="none" stroke="black" stroke-width="1.2">"#);
        let g = st.curve.graph();
        for line in st.curve.edge_polylines(PER_INTERVAL) {
            let pts: Vec<String> = line
                .iter()
                .map(|&p| {
                    let [u, v] = frame.place(i, p);
                    format!("{u:.2},{v:.2}")
                })
                .collect();
            let _ = writeln!(out, r#"<polyline points="{}"/>"#, pts.join(" "));
        }
        for v in g.vertices.iter().filter(|v| v.kind == surftop_core::planecurve::VertexKind::Isolated) {
            let [u, w] = frame.place(i, [v.x, v.y]);
            let _ = writeln!(out, r#"<circle cx="{u:.2}" cy="{w:.2}" r="2.5" fill="black"/>"#);
        }
        let _ = writeln!(out, "</g>\n</g>");
    }
    if let Some(chains) = &fig.chains {
        let anchors: Vec<Vec<[f64; 2]>> = strata.iter().map(|s| component_samples(s.curve.graph()).iter().map(|c| c.point).collect()).collect();
        let anchor = |node: usize| {
            let n = &chains.nodes[node];
            frame.place(n.stratum, anchors[n.stratum][n.component])
        };
        let mut chain_of = vec![0; chains.nodes.len()];
        for (k, c) in chains.chains.iter().enumerate() {
            for &n in c {
                chain_of[n] = k;
            }
        }
        for (k, c) in chains.chains.iter().enumerate() {
            let color = PALETTE[k % PALETTE.len()];
            let _ = writeln!(out, r#"<g class="chain" id="chain{k}" stroke="{color}" fill="{color}" stroke-width="1" stroke-dasharray="2,3">"#);
            for l in chains.links.iter().filter(|l| chain_of[l[0]] == k) {
                let ([a, b], [c2, d]) = (anchor(l[0]), anchor(l[1]));
                let _ = writeln!(out, r#"<line x1="{a:.2}" y1="{b:.2}" x2="{c2:.2}" y2="{d:.2}"/>"#);
            }
            for &n in c {
                let [a, b] = anchor(n);
                let _ = writeln!(out, r#"<circle cx="{a:.2}" cy="{b:.2}" r="2" stroke="none"/>"#);
            }
            let _ = writeln!(out, "</g>");
        }
    }
    let _ = writeln!(out, "</svg>");
    out
}

pub fn emit_svg(fig: &Figure, path: &Path) -> Result<(), Error> {
    std::fs::write(path, render(fig)).map_err(|e| Error::IoError(format!("{}: {e}", path.display())))
}
