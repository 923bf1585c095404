//! SVG pictures for inspection. Coordinates become floats only here.

use std::fmt::Write;

use crate::exact_geom::RatPoint;
use crate::jordan::{Arrangement, CrossingKind, PolyJordanCurve};
use crate::packing::PackingSpec;
use crate::torus::{Mark, StaircasePath, TorusDiagram};

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

struct Frame {
    min: (f64, f64),
    scale: f64,
    height: f64,
}

impl Frame {
    fn fit<'a>(pts: impl Iterator<Item = &'a RatPoint>, size: f64) -> Frame {
        let (mut lo, mut hi) = ((f64::MAX, f64::MAX), (f64::MIN, f64::MIN));
        for p in pts {
            let (x, y) = p.to_f64();
            lo = (lo.0.min(x), lo.1.min(y));
            hi = (hi.0.max(x), hi.1.max(y));
        }
        if lo.0 > hi.0 {
            lo = (0.0, 0.0);
            hi = (1.0, 1.0);
        }
        let span = (hi.0 - lo.0).max(hi.1 - lo.1).max(1e-9);
        let scale = (size - 40.0) / span;
        Frame { min: (lo.0 - 20.0 / scale, lo.1 - 20.0 / scale), scale, height: (hi.1 - lo.1) * scale + 40.0 }
    }

    fn map(&self, p: &RatPoint) -> (f64, f64) {
        let (x, y) = p.to_f64();
        ((x - self.min.0) * self.scale, self.height - (y - self.min.1) * self.scale)
    }

    fn points(&self, pts: &[RatPoint]) -> String {
        pts.iter()
            .map(|p| {
                let (x, y) = self.map(p);
                format!("{x:.2},{y:.2}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn open(w: f64, h: f64) -> String {
    format!("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.2} {h:.2}\">\n")
}

/// Closed curves, each with a stroke colour and a translucent fill.
pub fn curves(list: &[(&PolyJordanCurve, &str)]) -> String {
    let f = Frame::fit(list.iter().flat_map(|(k, _)| k.vertices().iter()), 600.0);
    let mut s = open(600.0, f.height);
    for (k, colour) in list {
        writeln!(
            s,
            "<polygon points=\"{}\" fill=\"{colour}\" fill-opacity=\"0.12\" stroke=\"{colour}\" stroke-width=\"1.5\"/>",
            f.points(k.vertices())
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

pub fn pair(k: &PolyJordanCurve, kt: &PolyJordanCurve) -> String {
    curves(&[(k, PALETTE[0]), (kt, PALETTE[1])])
}

/// Two packings drawn on top of each other.
pub fn overlay(a: &PackingSpec, b: &PackingSpec) -> String {
    let mut list: Vec<(&PolyJordanCurve, &str)> = vec![(&a.rect.curve, "#555555"), (&b.rect.curve, "#aaaaaa")];
    list.extend(a.pieces.iter().map(|k| (k, PALETTE[0])));
    list.extend(b.pieces.iter().map(|k| (k, PALETTE[1])));
    curves(&list)
}

/// Faces of an arrangement, coloured by which domains contain them.
pub fn arrangement(arr: &Arrangement) -> String {
    let pts: Vec<RatPoint> = arr.arcs.iter().flat_map(|a| a.points.iter().cloned()).collect();
    let f = Frame::fit(pts.iter(), 600.0);
    let mut s = open(600.0, f.height);
    for face in arr.faces.iter().filter(|x| !x.unbounded) {
        let colour = match (face.in_k, face.in_kt) {
            (true, true) => "#9467bd",
            (true, false) => PALETTE[0],
            (false, true) => PALETTE[1],
            (false, false) => "#dddddd",
        };
        writeln!(
            s,
            "<polygon points=\"{}\" fill=\"{colour}\" fill-opacity=\"0.5\" stroke=\"black\" stroke-width=\"0.5\"/>",
            f.points(&arr.face_polygon(face))
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

/// The torus square in doubled coordinates: constraint grid lines, crossing
/// marks (filled for P) and optionally a staircase path.
pub fn torus(d: &TorusDiagram, gamma: Option<&StaircasePath>) -> String {
    let p = d.period() as f64;
    let cell = (480.0 / p).max(6.0);
    let side = cell * p;
    let sx = |x: f64| 20.0 + x * cell;
    let sy = |y: f64| 20.0 + side - y * cell;
    let mut s = open(side + 40.0, side + 40.0);
    writeln!(s, "<rect x=\"20\" y=\"20\" width=\"{side:.2}\" height=\"{side:.2}\" fill=\"none\" stroke=\"black\"/>").unwrap();
    for (i, m) in d.cols.iter().enumerate() {
        if let Mark::Constraint(_) = m {
            let x = sx(2.0 * i as f64);
            writeln!(s, "<line x1=\"{x:.2}\" y1=\"20\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"#888\"/>", 20.0 + side).unwrap();
        }
    }
    for (i, m) in d.rows.iter().enumerate() {
        if let Mark::Constraint(_) = m {
            let y = sy(2.0 * i as f64);
            writeln!(s, "<line x1=\"20\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"#888\"/>", 20.0 + side).unwrap();
        }
    }
    let names = d.crossing_names();
    for c in 0..d.n_crossings() {
        let (x, y) = d.crossing_point(c);
        let fill = if d.kinds[c] == CrossingKind::P { "black" } else { "white" };
        let (cx, cy) = (sx(x as f64), sy(y as f64));
        writeln!(s, "<circle cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"{:.2}\" fill=\"{fill}\" stroke=\"black\"/>", cell * 0.35).unwrap();
        writeln!(s, "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"10\">{}</text>", cx + 4.0, cy - 4.0, names[c]).unwrap();
    }
    if let Some(g) = gamma {
        let per = d.period();
        let (x0, y0) = (g.start.0.rem_euclid(per) - g.start.0, g.start.1.rem_euclid(per) - g.start.1);
        let verts = g.vertices();
        writeln!(s, "<clipPath id=\"sq\"><rect x=\"20\" y=\"20\" width=\"{side:.2}\" height=\"{side:.2}\"/></clipPath>").unwrap();
        for (dx, dy) in [(0, 0), (-per, 0), (0, -per), (-per, -per)] {
            let pts: Vec<String> = verts
                .iter()
                .map(|&(x, y)| format!("{:.2},{:.2}", sx((x + x0 + dx) as f64), sy((y + y0 + dy) as f64)))
                .collect();
            writeln!(
                s,
                "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\" clip-path=\"url(#sq)\"/>",
                pts.join(" "),
                PALETTE[2]
            )
            .unwrap();
        }
    }
    s.push_str("</svg>\n");
    s
}
