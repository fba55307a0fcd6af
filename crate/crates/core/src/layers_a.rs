//! Construction A: tribonacci b-points, A-layers with sublevels, the six
//! children of a point and the hexagonal cell they span.

use crate::error::{Error, Result};
use crate::exec::Strategy;
use crate::frame::{Frame, PlanePoint};
use crate::layers::{build_boundary, build_layers, AncestorCheck, ChildRule, LayerSet};
use crate::words::LatticePoint;

/// Word vectors `b_0..=b_n` of the tribonacci words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BPoints {
    b: Vec<LatticePoint>,
}

impl BPoints {
    pub fn get(&self, n: usize) -> &LatticePoint {
        &self.b[n]
    }

    /// `b_i^{(j)} = b_{3i+j}`.
    pub fn at(&self, level: usize, sub: usize) -> &LatticePoint {
        &self.b[3 * level + sub]
    }

    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }

    pub fn as_slice(&self) -> &[LatticePoint] {
        &self.b
    }
}

/// `b_0 = (1,0,0)`, `b_1 = (1,1,0)`, `b_2 = (2,1,1)`, then
/// `b_{n+3} = b_{n+2} + b_{n+1} + b_n`.
pub fn b_points(max_index: usize) -> BPoints {
    let seed = [
        LatticePoint::from([1, 0, 0]),
        LatticePoint::from([1, 1, 0]),
        LatticePoint::from([2, 1, 1]),
    ];
    let mut b: Vec<LatticePoint> = seed.into_iter().take(max_index + 1).collect();
    while b.len() <= max_index {
        let k = b.len();
        let next = &(&b[k - 1] + &b[k - 2]) + &b[k - 3];
        b.push(next);
    }
    BPoints { b }
}

/// Offsets of the six children at `level`, with sublevels `0,1,1,2,2,2`.
pub fn a_offsets(level: usize, b: &BPoints) -> [(LatticePoint, u8); 6] {
    let (b0, b1, b2) = (b.at(level, 0), b.at(level, 1), b.at(level, 2));
    [
        (b0.clone(), 0),
        (b1.clone(), 1),
        (b0 + b1, 1),
        (b2.clone(), 2),
        (b0 + b2, 2),
        (b1 + b2, 2),
    ]
}

/// The six children of `x` at `level`.
pub fn children_a(x: &LatticePoint, level: usize, b: &BPoints) -> [(LatticePoint, u8); 6] {
    a_offsets(level, b).map(|(o, tag)| (x + &o, tag))
}

#[derive(Clone, Debug)]
pub struct ARule {
    b: BPoints,
}

impl ARule {
    /// Rule with enough b-points for levels `0..=max_level`.
    pub fn new(max_level: usize) -> Self {
        ARule {
            b: b_points(3 * max_level + 3),
        }
    }

    pub fn b(&self) -> &BPoints {
        &self.b
    }
}

impl ChildRule for ARule {
    fn dim(&self) -> usize {
        3
    }

    fn offsets(&self, level: usize) -> Vec<(LatticePoint, u8)> {
        a_offsets(level, &self.b).to_vec()
    }
}

/// A-layers `V_{-1}..=V_{max_level}`.
pub fn build_layers_a(max_level: i32, strategy: Strategy) -> LayerSet {
    let rule = ARule::new(max_level.max(0) as usize);
    build_layers(&rule, max_level, strategy)
}

/// Boundary points of the A-layers.
pub fn boundary_a(
    max_level: i32,
    frame: &Frame,
    check: AncestorCheck,
    strategy: Strategy,
) -> Result<LayerSet> {
    let rule = ARule::new(max_level.max(0) as usize + 1);
    build_boundary(&rule, frame, max_level, check, strategy)
}

/// Hexagon spanned by the six children of a parent point.
#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub parent: LatticePoint,
    pub center: PlanePoint,
    /// Counterclockwise around `center`.
    pub vertices: Vec<PlanePoint>,
}

impl Cell {
    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for a in &self.vertices {
            for b in &self.vertices {
                d = d.max(a.distance(b));
            }
        }
        d
    }

    pub fn translate(&self, by: &PlanePoint, lattice_by: &LatticePoint) -> Cell {
        Cell {
            parent: &self.parent + lattice_by,
            center: &self.center + by,
            vertices: self.vertices.iter().map(|v| v + by).collect(),
        }
    }
}

pub const CELL_VERTEX_EPS: f64 = 1e-12;
pub const CELL_BOUNDARY_EPS: f64 = 1e-9;

/// Sorts the children by angle around the projected parent.
pub fn cell_of(parent: &LatticePoint, center: &PlanePoint, children: &[PlanePoint]) -> Result<Cell> {
    for i in 0..children.len() {
        for j in i + 1..children.len() {
            if children[i].distance(&children[j]) < CELL_VERTEX_EPS {
                return Err(Error::DegenerateCell(i, j));
            }
        }
    }
    let mut vertices = children.to_vec();
    let angle = |p: &PlanePoint| (p.y() - center.y()).atan2(p.x() - center.x());
    vertices.sort_by(|a, b| angle(a).total_cmp(&angle(b)));
    Ok(Cell {
        parent: parent.clone(),
        center: center.clone(),
        vertices,
    })
}

fn distance_to_segment(p: &PlanePoint, a: &PlanePoint, b: &PlanePoint) -> f64 {
    let (dx, dy) = (b.x() - a.x(), b.y() - a.y());
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.x() - a.x()) * dx + (p.y() - a.y()) * dy) / len2).clamp(0.0, 1.0)
    };
    let (cx, cy) = (a.x() + t * dx, a.y() + t * dy);
    ((p.x() - cx).powi(2) + (p.y() - cy).powi(2)).sqrt()
}

/// Even-odd test; points within [`CELL_BOUNDARY_EPS`] of an edge count as inside.
pub fn point_in_cell(p: &PlanePoint, cell: &Cell) -> bool {
    let vs = &cell.vertices;
    let n = vs.len();
    let mut inside = false;
    for k in 0..n {
        let a = &vs[k];
        let b = &vs[(k + 1) % n];
        if distance_to_segment(p, a, b) <= CELL_BOUNDARY_EPS {
            return true;
        }
        if (a.y() > p.y()) != (b.y() > p.y()) {
            let xi = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
            if p.x() < xi {
                inside = !inside;
            }
        }
    }
    inside
}
