//! Construction B: s-vectors built from a trimming pattern, and the
//! seven-children B-layers generated by their prefix sums.
//!
//! The same table drives self-replicating domains; only the trim counts
//! differ.

use crate::error::{Error, Result};
use crate::exec::Strategy;
use crate::frame::Frame;
use crate::layers::{build_boundary, build_layers, AncestorCheck, ChildRule, LayerSet};
use crate::words::{LatticePoint, Word};

/// How many units to drop from the right for each letter of the pattern word.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TrimRule {
    /// Letter `k` trims `k` units.
    #[default]
    Plain,
    /// As `Plain`, except letter 2 trims 3 units. With the word `0102010`
    /// this reproduces the tribonacci words.
    LetterTwoTrimsThree,
}

impl TrimRule {
    pub fn trim(self, letter: usize) -> usize {
        match (self, letter) {
            (TrimRule::LetterTwoTrimsThree, 2) => 3,
            _ => letter,
        }
    }

    /// Trim count for every position of `word`.
    pub fn trims(self, word: &Word) -> Result<Vec<usize>> {
        let n = word.len();
        word.letters()
            .iter()
            .map(|&l| {
                let t = self.trim(l as usize);
                if t >= n {
                    Err(Error::InvalidWord(format!(
                        "letter {l} trims {t} units from a word of length {n}"
                    )))
                } else {
                    Ok(t)
                }
            })
            .collect()
    }
}

/// The pattern word `0102010` of construction B.
pub fn rauzy_pattern() -> Word {
    Word::parse("0102010", 3).expect("valid word")
}

/// `s(i, j)` for levels `0..=max_level` and slots `0..width`, in lattice
/// coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct STable {
    rows: Vec<Vec<LatticePoint>>,
}

impl STable {
    /// `s(0, j) = e_{w_j}`, `s(i+1, j) = sum_{k <= width-1-t_j} s(i, k)`.
    pub fn build(word: &Word, rule: TrimRule, max_level: usize) -> Result<Self> {
        let trims = rule.trims(word)?;
        let d = word.d();
        let width = word.len();
        let mut rows = vec![word
            .letters()
            .iter()
            .map(|&l| LatticePoint::unit(d, l as usize))
            .collect::<Vec<_>>()];
        for _ in 0..max_level {
            let prev = rows.last().expect("at least one row");
            let prefix = prefix_sums_checked(prev)?;
            let next = trims.iter().map(|&t| prefix[width - 1 - t].clone()).collect();
            rows.push(next);
        }
        Ok(STable { rows })
    }

    pub fn s(&self, level: usize, slot: usize) -> &LatticePoint {
        &self.rows[level][slot]
    }

    pub fn row(&self, level: usize) -> &[LatticePoint] {
        &self.rows[level]
    }

    pub fn width(&self) -> usize {
        self.rows[0].len()
    }

    pub fn max_level(&self) -> usize {
        self.rows.len() - 1
    }

    /// `sum_{k <= j} s(level, k)` for every slot `j`.
    pub fn prefix_sums(&self, level: usize) -> Vec<LatticePoint> {
        prefix_sums_checked(&self.rows[level]).expect("table rows were built with checked sums")
    }
}

fn prefix_sums_checked(row: &[LatticePoint]) -> Result<Vec<LatticePoint>> {
    let mut out: Vec<LatticePoint> = Vec::with_capacity(row.len());
    for s in row {
        let next = match out.last() {
            Some(acc) => acc.checked_add(s)?,
            None => s.clone(),
        };
        out.push(next);
    }
    Ok(out)
}

/// The s-table of construction B.
pub fn s_table(max_level: usize) -> STable {
    STable::build(&rauzy_pattern(), TrimRule::LetterTwoTrimsThree, max_level)
        .expect("Rauzy table fits in i64 for supported levels")
}

/// `x + sum_{k<=j} s(level, k)` for each slot `j`.
pub fn children_b(x: &LatticePoint, level: usize, s: &STable) -> Vec<(LatticePoint, u8)> {
    s.prefix_sums(level)
        .iter()
        .enumerate()
        .map(|(j, o)| (x + o, j as u8))
        .collect()
}

/// Prefix-sum child rule over an [`STable`]. The cell is spanned by the first
/// six slots.
#[derive(Clone, Debug)]
pub struct PrefixSumRule {
    table: STable,
    offsets: Vec<Vec<(LatticePoint, u8)>>,
    d: usize,
}

impl PrefixSumRule {
    pub fn new(table: STable, d: usize) -> Self {
        let offsets = (0..=table.max_level())
            .map(|i| {
                table
                    .prefix_sums(i)
                    .into_iter()
                    .enumerate()
                    .map(|(j, o)| (o, j as u8))
                    .collect()
            })
            .collect();
        PrefixSumRule { table, offsets, d }
    }

    pub fn table(&self) -> &STable {
        &self.table
    }
}

impl ChildRule for PrefixSumRule {
    fn dim(&self) -> usize {
        self.d
    }

    fn offsets(&self, level: usize) -> Vec<(LatticePoint, u8)> {
        self.offsets[level].clone()
    }
}

/// B-layers `W_{-1}..=W_{max_level}`.
pub fn build_layers_b(max_level: i32, strategy: Strategy) -> LayerSet {
    let rule = PrefixSumRule::new(s_table(max_level.max(0) as usize), 3);
    build_layers(&rule, max_level, strategy)
}

/// Boundary points of the B-layers, cells from slots `0..6`.
pub fn boundary_b(
    max_level: i32,
    frame: &Frame,
    check: AncestorCheck,
    strategy: Strategy,
) -> Result<LayerSet> {
    let rule = PrefixSumRule::new(s_table(max_level.max(0) as usize + 1), 3);
    build_boundary(&rule, frame, max_level, check, strategy)
}
