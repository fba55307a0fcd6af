//! Deterministic CSV and SVG output for projected point sets and cells.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::layers::LayerSet;
use crate::layers_a::Cell;
use crate::oracle::DomainPoint;
use crate::words::LatticePoint;

pub const CSV_HEADER: &str = "x,y,letter,length,level";

/// One projected point ready for output.
#[derive(Clone, Debug, PartialEq)]
pub struct RenderPoint {
    pub lattice: LatticePoint,
    pub x: f64,
    pub y: f64,
    /// Color index; `-1` for the origin.
    pub letter: i32,
    pub level: i32,
}

impl RenderPoint {
    pub fn length(&self) -> i64 {
        self.lattice.length()
    }
}

/// Oracle points. The level column is `-1` for the origin and `n` otherwise.
pub fn from_domain(points: &[DomainPoint], n: usize, frame: &Frame) -> Vec<RenderPoint> {
    points
        .iter()
        .map(|p| {
            let q = frame.project(&p.lattice);
            RenderPoint {
                lattice: p.lattice.clone(),
                x: q.x(),
                y: q.y(),
                letter: p.letter.map_or(-1, i32::from),
                level: if p.lattice.is_zero() { -1 } else { n as i32 },
            }
        })
        .collect()
}

/// Layer points; the letter column carries the sublevel or slot tag.
pub fn from_layers(set: &LayerSet, frame: &Frame) -> Vec<RenderPoint> {
    set.points()
        .iter()
        .map(|p| {
            let q = frame.project(&p.lattice);
            RenderPoint {
                lattice: p.lattice.clone(),
                x: q.x(),
                y: q.y(),
                letter: p.tag.map_or(-1, i32::from),
                level: p.level,
            }
        })
        .collect()
}

/// Canonical emission order: `(length, lattice)`, stable for equal keys.
pub fn sort_points(points: &mut [RenderPoint]) {
    points.sort_by(|a, b| {
        a.length()
            .cmp(&b.length())
            .then_with(|| a.lattice.cmp(&b.lattice))
    });
}

fn fixed9(v: f64) -> String {
    let s = format!("{v:.9}");
    if s.starts_with('-') && s[1..].bytes().all(|b| b == b'0' || b == b'.') {
        s[1..].to_string()
    } else {
        s
    }
}

/// At most nine significant digits, no exponent, trailing zeros removed.
fn sig9(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return "0".to_string();
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (8 - magnitude).clamp(0, 20) as usize;
    let mut s = format!("{v:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".to_string();
    }
    s
}

pub fn to_csv(points: &[RenderPoint]) -> String {
    let mut sorted = points.to_vec();
    sort_points(&mut sorted);
    let mut out = String::with_capacity(48 * (sorted.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for p in &sorted {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            fixed9(p.x),
            fixed9(p.y),
            p.letter,
            p.length(),
            p.level
        );
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct CsvRow {
    pub x: f64,
    pub y: f64,
    pub letter: i32,
    pub length: i64,
    pub level: i32,
}

pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        other => return Err(Error::Parse(format!("bad CSV header {other:?}"))),
    }
    lines
        .enumerate()
        .map(|(k, line)| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 5 {
                return Err(Error::Parse(format!("row {}: expected 5 fields", k + 1)));
            }
            let bad = |what: &str| Error::Parse(format!("row {}: bad {what}", k + 1));
            Ok(CsvRow {
                x: f[0].parse().map_err(|_| bad("x"))?,
                y: f[1].parse().map_err(|_| bad("y"))?,
                letter: f[2].parse().map_err(|_| bad("letter"))?,
                length: f[3].parse().map_err(|_| bad("length"))?,
                level: f[4].parse().map_err(|_| bad("level"))?,
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Draw {
    Points,
    Cells,
    #[default]
    Both,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RenderSpec {
    /// Dot radius in plane units.
    pub radius: f64,
    /// Fill per color index; indices wrap around.
    pub palette: Vec<String>,
    /// Fill for the origin.
    pub origin_color: String,
    /// SVG pixels per plane unit, equal on both axes.
    pub scale: f64,
    /// `[min_x, min_y, max_x, max_y]`; `None` fits the data with a 5% margin.
    pub viewport: Option<[f64; 4]>,
    pub draw: Draw,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            radius: 0.01,
            palette: ["#d62728", "#2ca02c", "#1f77b4", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2"]
                .map(String::from)
                .to_vec(),
            origin_color: "#000000".to_string(),
            scale: 400.0,
            viewport: None,
            draw: Draw::Both,
        }
    }
}

impl RenderSpec {
    pub fn color(&self, letter: i32) -> &str {
        if letter < 0 || self.palette.is_empty() {
            &self.origin_color
        } else {
            &self.palette[letter as usize % self.palette.len()]
        }
    }
}

fn fit(points: &[RenderPoint], cells: &[Cell]) -> [f64; 4] {
    let coords = points.iter().map(|p| (p.x, p.y)).chain(
        cells
            .iter()
            .flat_map(|c| c.vertices.iter().map(|v| (v.x(), v.y()))),
    );
    let mut b = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
    for (x, y) in coords {
        b = [b[0].min(x), b[1].min(y), b[2].max(x), b[3].max(y)];
    }
    if !b[0].is_finite() {
        return [-1.0, -1.0, 1.0, 1.0];
    }
    let margin = 0.05 * (b[2] - b[0]).max(b[3] - b[1]).max(1e-9);
    [b[0] - margin, b[1] - margin, b[2] + margin, b[3] + margin]
}

/// SVG 1.1 document. The plane's y axis points up.
pub fn to_svg(points: &[RenderPoint], cells: &[Cell], spec: &RenderSpec) -> Result<String> {
    if points.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
        return Err(Error::DegenerateInput("non-finite coordinate".into()));
    }
    let [x0, y0, x1, y1] = spec.viewport.unwrap_or_else(|| fit(points, cells));
    let (w, h) = (x1 - x0, y1 - y0);
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"{} {} {} {}\">",
        sig9(w * spec.scale),
        sig9(h * spec.scale),
        sig9(x0),
        sig9(-y1),
        sig9(w),
        sig9(h)
    );
    out.push_str("<rect x=\"");
    let _ = writeln!(
        out,
        "{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>",
        sig9(x0),
        sig9(-y1),
        sig9(w),
        sig9(h)
    );
    if spec.draw != Draw::Points && !cells.is_empty() {
        out.push_str("<g fill=\"none\" stroke=\"#555555\" stroke-width=\"");
        let _ = writeln!(out, "{}\">", sig9(spec.radius / 4.0));
        for c in cells {
            let pts: Vec<String> = c
                .vertices
                .iter()
                .map(|v| format!("{},{}", sig9(v.x()), sig9(-v.y())))
                .collect();
            let _ = writeln!(out, "<polygon points=\"{}\"/>", pts.join(" "));
        }
        out.push_str("</g>\n");
    }
    if spec.draw != Draw::Cells {
        let mut sorted = points.to_vec();
        sort_points(&mut sorted);
        let _ = writeln!(out, "<g stroke=\"none\">");
        for p in &sorted {
            let _ = writeln!(
                out,
                "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{}\"/>",
                sig9(p.x),
                sig9(-p.y),
                sig9(spec.radius),
                spec.color(p.letter)
            );
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::PlanePoint;
    use crate::layers_a::build_layers_a;
    use crate::oracle::{enumerate_domain, DomainOptions};
    use crate::words::Substitution;
    use crate::Strategy;
    use proptest::prelude::*;

    fn point(coords: [i64; 3], x: f64, y: f64, letter: i32) -> RenderPoint {
        RenderPoint {
            lattice: LatticePoint::from(coords),
            x,
            y,
            letter,
            level: 0,
        }
    }

    #[test]
    fn origin_row() {
        let o = RenderPoint {
            lattice: LatticePoint::zero(3),
            x: 0.0,
            y: -0.0,
            letter: -1,
            level: -1,
        };
        assert_eq!(
            to_csv(&[o]),
            "x,y,letter,length,level\n0.000000000,0.000000000,-1,0,-1\n"
        );
    }

    #[test]
    fn oracle_level_three_rows() {
        let pts = enumerate_domain(&Substitution::rauzy(), 3, &DomainOptions::default()).unwrap();
        let csv = to_csv(&from_domain(&pts, 3, &Frame::rauzy()));
        assert_eq!(csv.lines().count(), 9);
        assert!(!csv.contains('\r'));
        let rows = parse_csv(&csv).unwrap();
        let lengths: Vec<i64> = rows.iter().map(|r| r.length).collect();
        assert_eq!(lengths, (0..8).collect::<Vec<_>>());
    }

    #[test]
    fn rows_sorted_by_length() {
        let pts = vec![
            point([2, 1, 1], 0.1, 0.2, 0),
            point([1, 0, 0], 0.3, 0.4, 0),
            point([1, 1, 0], 0.5, 0.6, 1),
        ];
        let rows = parse_csv(&to_csv(&pts)).unwrap();
        assert_eq!(rows.iter().map(|r| r.length).collect::<Vec<_>>(), vec![1, 2, 4]);
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(parse_csv("a,b\n").is_err());
        assert!(parse_csv("x,y,letter,length,level\n1,2,3\n").is_err());
        assert!(parse_csv("x,y,letter,length,level\n1,2,z,0,0\n").is_err());
    }

    #[test]
    fn sig9_formatting() {
        assert_eq!(sig9(0.0), "0");
        assert_eq!(sig9(-0.0), "0");
        assert_eq!(sig9(1.0), "1");
        assert_eq!(sig9(0.123456789123), "0.123456789");
        assert_eq!(sig9(-12345.6789012), "-12345.6789");
        assert_eq!(sig9(1e-12), "0.000000000001");
    }

    #[test]
    fn svg_is_deterministic() {
        let set = build_layers_a(2, Strategy::default());
        let pts = from_layers(&set, &Frame::rauzy());
        let mut reversed = pts.clone();
        reversed.reverse();
        let spec = RenderSpec::default();
        let a = to_svg(&pts, &[], &spec).unwrap();
        assert_eq!(a, to_svg(&pts, &[], &spec).unwrap());
        assert_eq!(a, to_svg(&reversed, &[], &spec).unwrap());
        assert_eq!(to_csv(&pts), to_csv(&reversed));
    }

    #[test]
    fn svg_circles_take_palette_colors() {
        let pts = vec![
            point([1, 0, 0], 0.0, 0.0, 0),
            point([1, 1, 0], 1.0, 0.0, 1),
            point([2, 1, 1], 0.0, 1.0, 2),
        ];
        let spec = RenderSpec::default();
        let svg = to_svg(&pts, &[], &spec).unwrap();
        assert_eq!(svg.matches("<circle").count(), 3);
        for k in 0..3 {
            assert!(svg.contains(&format!("fill=\"{}\"", spec.palette[k])));
        }
        assert_ne!(spec.palette[0], spec.palette[1]);
        assert_ne!(spec.palette[1], spec.palette[2]);
    }

    #[test]
    fn svg_polygon_per_cell() {
        let hex: Vec<PlanePoint> = (0..6)
            .map(|k| {
                let t = k as f64 * std::f64::consts::PI / 3.0;
                PlanePoint::new([t.cos(), t.sin()])
            })
            .collect();
        let cell = Cell {
            parent: LatticePoint::zero(3),
            center: PlanePoint::zero(2),
            vertices: hex,
        };
        let svg = to_svg(&[], &[cell.clone(), cell], &RenderSpec::default()).unwrap();
        assert_eq!(svg.matches("<polygon").count(), 2);
        let first = svg.lines().find(|l| l.starts_with("<polygon")).unwrap();
        assert_eq!(first.matches(',').count(), 6);
        let only_points = RenderSpec {
            draw: Draw::Points,
            ..RenderSpec::default()
        };
        assert!(!to_svg(&[], &[], &only_points).unwrap().contains("<polygon"));
    }

    #[test]
    fn empty_input_is_a_valid_canvas() {
        let svg = to_svg(&[], &[], &RenderSpec::default()).unwrap();
        assert!(svg.starts_with("<?xml"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(to_csv(&[]), "x,y,letter,length,level\n");
    }

    #[test]
    fn axes_equally_scaled() {
        let pts = vec![point([1, 0, 0], 0.0, 0.0, 0), point([1, 1, 0], 4.0, 1.0, 1)];
        let svg = to_svg(&pts, &[], &RenderSpec::default()).unwrap();
        let head = svg.lines().nth(1).unwrap();
        let attr = |name: &str| -> Vec<f64> {
            let start = head.find(&format!("{name}=\"")).unwrap() + name.len() + 2;
            let end = start + head[start..].find('"').unwrap();
            head[start..end].split(' ').map(|v| v.parse().unwrap()).collect()
        };
        let (w, h, vb) = (attr("width")[0], attr("height")[0], attr("viewBox"));
        assert!((w / vb[2] - h / vb[3]).abs() < 1e-6);
        // 5% margin on the longer side
        assert!((vb[2] - 4.4).abs() < 1e-9);
    }

    #[test]
    fn non_finite_rejected() {
        let pts = vec![point([1, 0, 0], f64::NAN, 0.0, 0)];
        assert!(to_svg(&pts, &[], &RenderSpec::default()).is_err());
    }

    proptest! {
        #[test]
        fn csv_round_trip(raw in prop::collection::vec((-1e3f64..1e3, -1e3f64..1e3, -1i32..3, 0i64..1000), 0..40)) {
            let pts: Vec<RenderPoint> = raw
                .iter()
                .enumerate()
                .map(|(k, &(x, y, letter, len))| point([len, k as i64, 0], x, y, letter))
                .collect();
            let rows = parse_csv(&to_csv(&pts)).unwrap();
            let mut sorted = pts.clone();
            sort_points(&mut sorted);
            prop_assert_eq!(rows.len(), sorted.len());
            for (r, p) in rows.iter().zip(&sorted) {
                prop_assert!((r.x - p.x).abs() < 1e-9 && (r.y - p.y).abs() < 1e-9);
                prop_assert_eq!(r.letter, p.letter);
                prop_assert_eq!(r.length, p.length());
            }
        }
    }
}
