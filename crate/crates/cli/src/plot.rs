//! SVG rendering of an uncertainty diagram.
//!
//! Styling: the hyperbola n_a·n_b = d dashed, the line n_a + n_b = d + 1
//! dot-dashed, present points on the hyperbola as red squares, other present
//! points as blue diamonds, holes as red circles. Holes strictly below the
//! hyperbola are not drawn; the bound already excludes them.

use std::fmt::Write;

use kd_uncd::diagram::{PointStatus, UncertaintyDiagram};

const CELL: f64 = 40.0;
const MARGIN: f64 = 60.0;
const MARK: f64 = 7.0;
const RED: &str = "#d62728";
const BLUE: &str = "#1f4fb4";
const GRAY: &str = "#888888";

struct Frame {
    d: usize,
}

impl Frame {
    fn size(&self) -> f64 {
        2.0 * MARGIN + CELL * self.d as f64
    }

    fn x(&self, n_a: f64) -> f64 {
        MARGIN + CELL * (n_a - 0.5)
    }

    fn y(&self, n_b: f64) -> f64 {
        self.size() - MARGIN - CELL * (n_b - 0.5)
    }
}

pub fn render_svg(diagram: &UncertaintyDiagram) -> String {
    let d = diagram.d;
    let f = Frame { d };
    let size = f.size();
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size:.0}" height="{size:.0}" viewBox="0 0 {size:.0} {size:.0}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);

    // axes
    let (x0, y0) = (MARGIN, size - MARGIN);
    let (x1, y1) = (size - MARGIN, MARGIN);
    let _ = writeln!(s, r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y0:.2}" stroke="black"/>"#);
    let _ = writeln!(s, r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x0:.2}" y2="{y1:.2}" stroke="black"/>"#);
    for k in 1..=d {
        let (tx, ty) = (f.x(k as f64), f.y(k as f64));
        let _ = writeln!(s, r#"<line x1="{tx:.2}" y1="{y0:.2}" x2="{tx:.2}" y2="{:.2}" stroke="black"/>"#, y0 + 5.0);
        let _ = writeln!(s, r#"<text x="{tx:.2}" y="{:.2}" text-anchor="middle">{k}</text>"#, y0 + 20.0);
        let _ = writeln!(s, r#"<line x1="{:.2}" y1="{ty:.2}" x2="{x0:.2}" y2="{ty:.2}" stroke="black"/>"#, x0 - 5.0);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{k}</text>"#, x0 - 9.0, ty + 4.0);
    }
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">n_A</text>"#, (x0 + x1) / 2.0, size - 15.0);
    let _ = writeln!(
        s,
        r#"<text x="15" y="{:.2}" text-anchor="middle" transform="rotate(-90 15 {:.2})">n_B</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    );
    let _ = writeln!(s, r#"<text x="{:.2}" y="25" text-anchor="middle">d = {d}</text>"#, size / 2.0);

    // hyperbola, sampled on [1, d]
    let dd = d as f64;
    let samples = 40 * d.max(1);
    let pts: Vec<String> = (0..=samples)
        .map(|k| {
            let a = 1.0 + (dd - 1.0) * k as f64 / samples as f64;
            format!("{:.2},{:.2}", f.x(a), f.y(dd / a))
        })
        .collect();
    let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="black" stroke-dasharray="6,4"/>"#, pts.join(" "));
    let _ = writeln!(
        s,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black" stroke-dasharray="8,3,2,3"/>"#,
        f.x(1.0),
        f.y(dd),
        f.x(dd),
        f.y(1.0)
    );

    for p in &diagram.points {
        let (cx, cy) = (f.x(p.n_a as f64), f.y(p.n_b as f64));
        match p.status {
            PointStatus::Present if p.on_hyperbola(d) => {
                let _ = writeln!(
                    s,
                    r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{RED}"/>"#,
                    cx - MARK,
                    cy - MARK,
                    2.0 * MARK,
                    2.0 * MARK
                );
            }
            PointStatus::Present => {
                let _ = writeln!(
                    s,
                    r#"<polygon points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="{BLUE}"/>"#,
                    cx,
                    cy - MARK,
                    cx + MARK,
                    cy,
                    cx,
                    cy + MARK,
                    cx - MARK,
                    cy
                );
            }
            PointStatus::Hole if p.n_a * p.n_b >= d => {
                let _ = writeln!(
                    s,
                    r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="{MARK:.2}" fill="none" stroke="{RED}" stroke-width="2"/>"#
                );
            }
            PointStatus::Hole => {}
            PointStatus::Unknown => {
                let _ =
                    writeln!(s, r#"<text x="{cx:.2}" y="{:.2}" text-anchor="middle" fill="{GRAY}">?</text>"#, cy + 4.0);
            }
        }
    }
    s.push_str("</svg>\n");
    s
}
