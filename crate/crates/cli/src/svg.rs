//! Static SVG drawings of a terrain and, optionally, a guard solution.

use std::fmt::Write as _;

use orthoguard::{GuardSolution, Terrain};

const TARGET_WIDTH: f64 = 800.0;
const MARGIN: f64 = 20.0;

struct Frame {
    unit: f64,
    x_min: i64,
    y_max: i64,
}

impl Frame {
    fn new(t: &Terrain) -> (Self, f64, f64) {
        let (x_min, x_max) = t.x_range();
        let y_min = t.vertices().iter().map(|p| p.y).min().unwrap_or(0);
        let y_max = t.vertices().iter().map(|p| p.y).max().unwrap_or(0);
        let span = (x_max - x_min).max(y_max - y_min).max(1) as f64;
        let unit = TARGET_WIDTH / span;
        let w = (x_max - x_min) as f64 * unit + 2.0 * MARGIN;
        let h = (y_max - y_min) as f64 * unit + 2.0 * MARGIN;
        (Frame { unit, x_min, y_max }, w, h)
    }

    fn at(&self, t: &Terrain, i: usize) -> (f64, f64) {
        let p = t.vertex(i);
        (MARGIN + (p.x - self.x_min) as f64 * self.unit, MARGIN + (self.y_max - p.y) as f64 * self.unit)
    }
}

pub fn render(t: &Terrain, sol: Option<&GuardSolution>) -> String {
    let (frame, w, h) = Frame::new(t);
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.2}" height="{h:.2}" viewBox="0 0 {w:.2} {h:.2}">"#
    );
    let points: Vec<String> = (0..t.len())
        .map(|i| {
            let (x, y) = frame.at(t, i);
            format!("{x:.2},{y:.2}")
        })
        .collect();
    let _ = writeln!(out, r#"  <polyline class="terrain" fill="none" stroke="black" stroke-width="2" points="{}"/>"#, points.join(" "));
    if let Some(sol) = sol {
        for (g, e) in &sol.guards {
            let (gx, gy) = frame.at(t, *g);
            for &wi in &e.witnesses {
                let (wx, wy) = frame.at(t, wi);
                let _ = writeln!(
                    out,
                    r#"  <line class="witness" x1="{gx:.2}" y1="{gy:.2}" x2="{wx:.2}" y2="{wy:.2}" stroke="steelblue" stroke-dasharray="4 3"/>"#
                );
            }
        }
        for g in sol.guards.keys() {
            let (gx, gy) = frame.at(t, *g);
            let _ = writeln!(out, r#"  <circle class="guard" cx="{gx:.2}" cy="{gy:.2}" r="5" fill="crimson"><title>{g}</title></circle>"#);
        }
    }
    out.push_str("</svg>\n");
    out
}
