//! Level-indexed point families with genealogy, shared by both layered
//! constructions and by self-replicating domains.
//!
//! A [`ChildRule`] supplies, for each level, the lattice offsets that turn a
//! source point into its children. [`build_layers`] applies the rule to every
//! point of all earlier levels; [`build_boundary`] applies it only to the
//! survivors of the previous level, dropping children that fall inside the
//! cell of an ancestor.
//!
//! Identity is the exact lattice vector. A point keeps its first (lowest)
//! level; within a level the first candidate in (source order, offset order)
//! wins. Each finished level is sorted by `(length, lattice)`, so the result
//! is the same for any worker count.

use std::collections::{HashMap, HashSet};

use crate::error::Result;
use crate::exec::Strategy;
use crate::frame::{Frame, PlanePoint};
use crate::layers_a::{cell_of, point_in_cell, Cell};
use crate::words::LatticePoint;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerPoint {
    pub lattice: LatticePoint,
    /// `-1` for the origin.
    pub level: i32,
    /// Sublevel (construction A) or slot (prefix-sum constructions) of the
    /// offset that produced the point. `None` for the origin.
    pub tag: Option<u8>,
    /// Index of the parent in the owning [`LayerSet`].
    pub parent: Option<usize>,
}

impl LayerPoint {
    pub fn length(&self) -> i64 {
        self.lattice.length()
    }
}

#[derive(Clone, Debug)]
pub struct LayerSet {
    points: Vec<LayerPoint>,
    index: HashMap<LatticePoint, usize>,
    /// `level_starts[k]` is the first index of level `k - 1`.
    level_starts: Vec<usize>,
    /// Candidates generated per level before deduplication.
    generated: Vec<usize>,
}

impl LayerSet {
    /// The set `{0}` at level -1.
    pub fn origin(d: usize) -> Self {
        let origin = LayerPoint {
            lattice: LatticePoint::zero(d),
            level: -1,
            tag: None,
            parent: None,
        };
        let mut index = HashMap::new();
        index.insert(origin.lattice.clone(), 0);
        LayerSet {
            points: vec![origin],
            index,
            level_starts: vec![0, 1],
            generated: vec![1],
        }
    }

    pub fn points(&self) -> &[LayerPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn max_level(&self) -> i32 {
        self.level_starts.len() as i32 - 3
    }

    /// Points first reached at `level`.
    pub fn level(&self, level: i32) -> &[LayerPoint] {
        let k = (level + 1) as usize;
        if level < -1 || k + 1 >= self.level_starts.len() {
            return &[];
        }
        &self.points[self.level_starts[k]..self.level_starts[k + 1]]
    }

    /// Index range of `level` within [`LayerSet::points`].
    pub fn level_range(&self, level: i32) -> std::ops::Range<usize> {
        let k = (level + 1) as usize;
        if level < -1 || k + 1 >= self.level_starts.len() {
            return 0..0;
        }
        self.level_starts[k]..self.level_starts[k + 1]
    }

    /// Candidate count at `level` before deduplication.
    pub fn generated_at(&self, level: i32) -> usize {
        self.generated
            .get((level + 1) as usize)
            .copied()
            .unwrap_or(0)
    }

    pub fn contains(&self, p: &LatticePoint) -> bool {
        self.index.contains_key(p)
    }

    pub fn get(&self, p: &LatticePoint) -> Option<&LayerPoint> {
        self.index.get(p).map(|&i| &self.points[i])
    }

    pub fn parent(&self, p: &LayerPoint) -> Option<&LayerPoint> {
        p.parent.map(|i| &self.points[i])
    }

    pub fn lattice_set(&self) -> HashSet<LatticePoint> {
        self.index.keys().cloned().collect()
    }

    /// Lattice points of levels `-1..=level`.
    pub fn union_up_to(&self, level: i32) -> HashSet<LatticePoint> {
        let end = self.level_range(level.min(self.max_level())).end.max(1);
        self.points[..end]
            .iter()
            .map(|p| p.lattice.clone())
            .collect()
    }

    fn push_level(&mut self, mut fresh: Vec<LayerPoint>, generated: usize) {
        fresh.sort_by(|a, b| {
            a.length()
                .cmp(&b.length())
                .then_with(|| a.lattice.cmp(&b.lattice))
        });
        let base = self.points.len();
        for (k, p) in fresh.iter().enumerate() {
            self.index.insert(p.lattice.clone(), base + k);
        }
        self.points.extend(fresh);
        self.level_starts.push(self.points.len());
        self.generated.push(generated);
    }
}

/// Source of per-level child offsets.
pub trait ChildRule: Sync {
    fn dim(&self) -> usize;

    /// Offsets added to a source point to form its children at `level`,
    /// each with its tag.
    fn offsets(&self, level: usize) -> Vec<(LatticePoint, u8)>;

    /// Offsets whose children span the cell of a point at `level - 1`.
    fn cell_offsets(&self, level: usize) -> Vec<LatticePoint> {
        self.offsets(level)
            .into_iter()
            .take(6)
            .map(|(o, _)| o)
            .collect()
    }
}

struct Candidate {
    lattice: LatticePoint,
    tag: u8,
    parent: usize,
}

fn merge_level(set: &mut LayerSet, level: i32, batches: Vec<Vec<Candidate>>) {
    let generated = batches.iter().map(Vec::len).sum();
    let mut seen: HashSet<LatticePoint> = HashSet::new();
    let mut fresh = Vec::new();
    for c in batches.into_iter().flatten() {
        if set.contains(&c.lattice) || !seen.insert(c.lattice.clone()) {
            continue;
        }
        fresh.push(LayerPoint {
            lattice: c.lattice,
            level,
            tag: Some(c.tag),
            parent: Some(c.parent),
        });
    }
    set.push_level(fresh, generated);
}

/// Full layered construction: level `i` is formed from every point of levels
/// `-1..i`.
pub fn build_layers<R: ChildRule>(rule: &R, max_level: i32, strategy: Strategy) -> LayerSet {
    let mut set = LayerSet::origin(rule.dim());
    for level in 0..=max_level {
        let offsets = rule.offsets(level as usize);
        let indexed: Vec<usize> = (0..set.len()).collect();
        let sources = &set.points;
        let batches = strategy.map(&indexed, |&i| {
            offsets
                .iter()
                .map(|(o, tag)| Candidate {
                    lattice: &sources[i].lattice + o,
                    tag: *tag,
                    parent: i,
                })
                .collect::<Vec<_>>()
        });
        merge_level(&mut set, level, batches);
    }
    set
}

/// Which ancestor cells a candidate is tested against.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum AncestorCheck {
    /// Only the grandparent's cell.
    #[default]
    Grandparent,
    /// Every ancestor from the grandparent up to the origin.
    AllAncestors,
}

/// The cell of the point `x`: the hexagon of its children at `x.level + 1`.
pub fn cell_for<R: ChildRule>(rule: &R, frame: &Frame, x: &LayerPoint) -> Result<Cell> {
    let level = (x.level + 1) as usize;
    let center = frame.project(&x.lattice);
    let children: Vec<PlanePoint> = rule
        .cell_offsets(level)
        .iter()
        .map(|o| frame.project(&(&x.lattice + o)))
        .collect();
    cell_of(&x.lattice, &center, &children)
}

/// Boundary-only construction. Level 0 is the children of the origin; each
/// later level is formed from the previous level's survivors only. A child
/// survives unless it lies inside the cell of an ancestor (see
/// [`AncestorCheck`]); points without a grandparent always survive.
pub fn build_boundary<R: ChildRule>(
    rule: &R,
    frame: &Frame,
    max_level: i32,
    check: AncestorCheck,
    strategy: Strategy,
) -> Result<LayerSet> {
    let mut set = LayerSet::origin(rule.dim());
    for level in 0..=max_level {
        let offsets = rule.offsets(level as usize);
        let sources: Vec<usize> = set.level_range(level - 1).collect();
        let current = &set;
        let batches = strategy.map(&sources, |&i| -> Result<Vec<Candidate>> {
            let x = &current.points[i];
            let mut cells = Vec::new();
            let mut ancestor = current.parent(x);
            while let Some(a) = ancestor {
                cells.push(cell_for(rule, frame, a)?);
                if check == AncestorCheck::Grandparent {
                    break;
                }
                ancestor = current.parent(a);
            }
            let mut out = Vec::with_capacity(offsets.len());
            for (o, tag) in &offsets {
                let y = &x.lattice + o;
                if current.contains(&y) {
                    continue;
                }
                let py = frame.project(&y);
                if cells.iter().any(|c| point_in_cell(&py, c)) {
                    continue;
                }
                out.push(Candidate {
                    lattice: y,
                    tag: *tag,
                    parent: i,
                });
            }
            Ok(out)
        });
        let batches = batches.into_iter().collect::<Result<Vec<_>>>()?;
        merge_level(&mut set, level, batches);
    }
    Ok(set)
}

/// Cells of every point at `level`.
pub fn cells_at<R: ChildRule>(
    rule: &R,
    frame: &Frame,
    set: &LayerSet,
    level: i32,
) -> Result<Vec<Cell>> {
    set.level(level)
        .iter()
        .map(|p| cell_for(rule, frame, p))
        .collect()
}
