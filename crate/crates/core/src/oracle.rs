//! Brute-force Pisot domain: every prefix word vector of `[w_n]`.
//!
//! This is the reference set the layered constructions are checked against.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::spectral::spectrum_of;
use crate::words::{LatticePoint, Substitution, DEFAULT_MAX_WORD_LEN};

pub const DEFAULT_MAX_POINTS: usize = 10_000_000;

/// Which character colors the point reached by the prefix of length `l`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ColorConvention {
    /// `w_{l-1}`: the letter whose step created the point. The origin has none.
    #[default]
    StepLetter,
    /// `w_l`: the character following the prefix. The endpoint has none.
    NextLetter,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DomainPoint {
    pub lattice: LatticePoint,
    pub length: usize,
    /// `None` is the no-color sentinel.
    pub letter: Option<u8>,
}

impl DomainPoint {
    pub fn color(&self) -> Option<usize> {
        self.letter.map(usize::from)
    }
}

#[derive(Clone, Debug)]
pub struct DomainOptions {
    /// Skip the Pisot check.
    pub force: bool,
    pub color: ColorConvention,
    pub max_points: usize,
}

impl Default for DomainOptions {
    fn default() -> Self {
        DomainOptions {
            force: false,
            color: ColorConvention::StepLetter,
            max_points: DEFAULT_MAX_POINTS,
        }
    }
}

/// Prefix vectors of `[w_n]` for lengths `0..=L(w_n)`, in length order.
pub fn enumerate_domain(
    sub: &Substitution,
    n: usize,
    opts: &DomainOptions,
) -> Result<Vec<DomainPoint>> {
    if !opts.force {
        spectrum_of(sub)?.require_pisot()?;
    }
    let cap = opts.max_points.saturating_sub(1).min(DEFAULT_MAX_WORD_LEN);
    let word = sub.iterate_capped(n, cap).map_err(|e| match e {
        Error::ResourceCap { requested, .. } => Error::ResourceCap {
            what: "domain points",
            requested: requested + 1,
            limit: opts.max_points as u128,
        },
        other => other,
    })?;
    let letters = word.letters();
    let mut out = Vec::with_capacity(letters.len() + 1);
    let mut v = LatticePoint::zero(sub.d());
    for length in 0..=letters.len() {
        if length > 0 {
            v.increment(letters[length - 1] as usize);
        }
        let letter = match opts.color {
            ColorConvention::StepLetter => length.checked_sub(1).map(|i| letters[i]),
            ColorConvention::NextLetter => letters.get(length).copied(),
        };
        out.push(DomainPoint {
            lattice: v.clone(),
            length,
            letter,
        });
    }
    Ok(out)
}

/// Lattice set of prefixes of the tribonacci word `[a_n]` with length `< limit`.
pub fn rauzy_prefix_set(n: usize, limit: usize) -> Result<HashSet<LatticePoint>> {
    let word = Substitution::rauzy().iterate(n)?;
    Ok(word
        .prefix_vectors()
        .into_iter()
        .take(limit.min(word.len() + 1))
        .collect())
}

/// All prefixes of `[a_n]`, endpoint included.
pub fn rauzy_domain_set(n: usize) -> Result<HashSet<LatticePoint>> {
    rauzy_prefix_set(n, usize::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Word;

    fn rauzy_domain(n: usize) -> Vec<DomainPoint> {
        enumerate_domain(&Substitution::rauzy(), n, &DomainOptions::default()).unwrap()
    }

    #[test]
    fn level_three_has_eight_points() {
        let pts = rauzy_domain(3);
        assert_eq!(pts.len(), 8);
        assert_eq!(pts[0].lattice, LatticePoint::zero(3));
        assert_eq!(pts[0].letter, None);
        assert_eq!(pts[4].lattice, LatticePoint::from([2, 1, 1]));
        for (i, p) in pts.iter().enumerate() {
            assert_eq!(p.length, i);
        }
    }

    #[test]
    fn level_zero_is_origin_and_e0() {
        let pts = rauzy_domain(0);
        assert_eq!(pts.len(), 2);
        assert_eq!(pts[1].lattice, LatticePoint::from([1, 0, 0]));
    }

    #[test]
    fn level_nine_count() {
        // lengths 1,2,4,7,13,24,44,81,149,274
        assert_eq!(rauzy_domain(9).len(), 275);
    }

    #[test]
    fn colors_follow_the_step_letter() {
        let pts = rauzy_domain(3);
        assert_eq!(pts[1].color(), Some(0));
        assert_eq!(pts[4].color(), Some(2));
        assert_eq!(pts[7].color(), Some(0));
    }

    #[test]
    fn next_letter_convention_shifts_by_one() {
        let opts = DomainOptions {
            color: ColorConvention::NextLetter,
            ..Default::default()
        };
        let pts = enumerate_domain(&Substitution::rauzy(), 3, &opts).unwrap();
        assert_eq!(pts[0].color(), Some(0));
        assert_eq!(pts[3].color(), Some(2));
        assert_eq!(pts[7].color(), None);
    }

    #[test]
    fn non_pisot_needs_force() {
        let sub = Substitution::identity(3);
        assert!(matches!(
            enumerate_domain(&sub, 2, &DomainOptions::default()),
            Err(Error::NotPisot { .. })
        ));
        let forced = DomainOptions {
            force: true,
            ..Default::default()
        };
        assert_eq!(enumerate_domain(&sub, 2, &forced).unwrap().len(), 2);
    }

    #[test]
    fn point_cap_is_enforced() {
        let opts = DomainOptions {
            max_points: 100,
            ..Default::default()
        };
        assert!(matches!(
            enumerate_domain(&Substitution::rauzy(), 10, &opts),
            Err(Error::ResourceCap { .. })
        ));
        assert_eq!(
            enumerate_domain(&Substitution::rauzy(), 7, &opts).unwrap().len(),
            82
        );
    }

    #[test]
    fn nesting_and_steps() {
        let small = rauzy_domain(8);
        let big = rauzy_domain(11);
        assert_eq!(&big[..small.len()], &small[..]);
        for pair in big.windows(2) {
            let diff = &pair[1].lattice - &pair[0].lattice;
            assert_eq!(diff.length(), 1);
            let letter = pair[1].letter.unwrap() as usize;
            assert_eq!(diff, LatticePoint::unit(3, letter));
        }
        let set: HashSet<_> = big.iter().map(|p| p.lattice.clone()).collect();
        assert_eq!(set.len(), big.len());
        for p in &big {
            assert_eq!(p.lattice.length(), p.length as i64);
        }
    }

    #[test]
    fn prefix_set_matches_enumeration() {
        let w = Word::parse("0102010", 3).unwrap();
        let set = rauzy_prefix_set(3, 7).unwrap();
        assert_eq!(set.len(), 7);
        assert!(!set.contains(&w.word_vector()));
    }

    #[test]
    fn other_presets_enumerate() {
        for i in 1..4 {
            let sub = Substitution::preset(i).unwrap();
            let pts = enumerate_domain(&sub, 12, &DomainOptions::default()).unwrap();
            assert_eq!(pts.len() as u128, sub.iterate_lengths(12)[12] + 1);
        }
    }
}
