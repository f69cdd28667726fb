use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use rotor_core::{Point, Polyline};

/// One `<line>` per segment, in a viewBox fitted to the path and `marker`.
pub fn render(path: &Polyline, marker: Option<Point>) -> String {
    let mut pts: Vec<Point> = path.vertices().to_vec();
    pts.extend(marker);
    let (mut lo, mut hi) = (Point::new(f64::INFINITY, f64::INFINITY), Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
    for p in &pts {
        lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let pad = 0.05 * (hi.x - lo.x).max(hi.y - lo.y).max(1e-6);
    let (w, h) = (hi.x - lo.x + 2.0 * pad, hi.y - lo.y + 2.0 * pad);
    let stroke = (w.max(h) / 400.0).max(1e-9);
    let mut s = String::new();
    // y is flipped so the picture has the usual orientation.
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {w} {h}">"#,
        lo.x - pad,
        -hi.y - pad
    );
    for seg in path.vertices().windows(2) {
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="{stroke}"/>"#,
            seg[0].x, -seg[0].y, seg[1].x, -seg[1].y
        );
    }
    if let Some(m) = marker {
        let _ = writeln!(s, r#"<circle cx="{}" cy="{}" r="{}" fill="red"/>"#, m.x, -m.y, 2.0 * stroke);
    }
    s.push_str("</svg>\n");
    s
}

pub fn write(file: &Path, path: &Polyline, marker: Option<Point>) -> io::Result<()> {
    fs::write(file, render(path, marker))
}
