//! Self-replicating words: replicates, the limit direction of their word
//! vectors, the domain `W` built from prefix sums, and a desk-scale check of
//! how translated copies of `W` fit together.

use std::collections::{BTreeSet, HashSet};

use kiddo::{KdTree, SquaredEuclidean};

use crate::error::{Error, Result};
use crate::exec::Strategy;
use crate::frame::{Frame, PlanePoint};
use crate::layers::{build_layers, LayerSet};
use crate::layers_b::{PrefixSumRule, STable, TrimRule};
use crate::words::{concat_all, LatticePoint, Word, DEFAULT_MAX_WORD_LEN};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_MAX_STEPS: usize = 200;
/// Translated copies closer than this are counted as touching.
pub const TILING_MIN_DISTANCE: f64 = 1e-6;
const COVERAGE_GRID: usize = 32;

/// `n`-th replicate as a string. Component `i` at depth `n` is the
/// concatenation of components `0..=l - t_i` at depth `n - 1`.
pub fn replicate(word: &Word, n: usize, rule: TrimRule) -> Result<Word> {
    replicate_capped(word, n, rule, DEFAULT_MAX_WORD_LEN)
}

pub fn replicate_capped(word: &Word, n: usize, rule: TrimRule, cap: usize) -> Result<Word> {
    let trims = rule.trims(word)?;
    let d = word.d();
    let last = word.len() - 1;
    let mut comps: Vec<Word> = word
        .letters()
        .iter()
        .map(|&l| Word::new(vec![l], d))
        .collect::<Result<_>>()?;
    for _ in 0..n {
        let lens: Vec<u128> = comps.iter().map(|c| c.len() as u128).collect();
        let next_lens: Vec<u128> = trims
            .iter()
            .map(|&t| lens[..=last - t].iter().sum())
            .collect();
        let total: u128 = next_lens.iter().sum();
        if total > cap as u128 {
            return Err(Error::ResourceCap {
                what: "replicate length",
                requested: total,
                limit: cap as u128,
            });
        }
        comps = trims
            .iter()
            .map(|&t| concat_all(&comps[..=last - t], d))
            .collect::<Result<_>>()?;
    }
    concat_all(&comps, d)
}

/// Vector form of the replicate recursion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfRepSystem {
    word: Word,
    trims: Vec<usize>,
    component_vectors: Vec<LatticePoint>,
    n: usize,
}

impl SelfRepSystem {
    pub fn new(word: &Word, rule: TrimRule) -> Result<Self> {
        if word.is_empty() {
            return Err(Error::InvalidWord("empty word".into()));
        }
        let trims = rule.trims(word)?;
        let component_vectors = word
            .letters()
            .iter()
            .map(|&l| LatticePoint::unit(word.d(), l as usize))
            .collect();
        Ok(SelfRepSystem {
            word: word.clone(),
            trims,
            component_vectors,
            n: 0,
        })
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn depth(&self) -> usize {
        self.n
    }

    pub fn component_vectors(&self) -> &[LatticePoint] {
        &self.component_vectors
    }

    /// Word vector of the current replicate.
    pub fn total(&self) -> LatticePoint {
        let mut acc = LatticePoint::zero(self.word.d());
        for c in &self.component_vectors {
            acc = &acc + c;
        }
        acc
    }

    pub fn normalized_total(&self) -> Vec<f64> {
        normalize(&self.total().to_f64())
    }

    /// One replicate step in exact integer arithmetic.
    pub fn step(&self) -> Result<Self> {
        let last = self.word.len() - 1;
        let mut prefix: Vec<LatticePoint> = Vec::with_capacity(self.component_vectors.len());
        for c in &self.component_vectors {
            let next = match prefix.last() {
                Some(acc) => acc.checked_add(c)?,
                None => c.clone(),
            };
            prefix.push(next);
        }
        let component_vectors = self
            .trims
            .iter()
            .map(|&t| prefix[last - t].clone())
            .collect();
        Ok(SelfRepSystem {
            component_vectors,
            n: self.n + 1,
            ..self.clone()
        })
    }

    pub fn advance(&self, steps: usize) -> Result<Self> {
        let mut sys = self.clone();
        for _ in 0..steps {
            sys = sys.step()?;
        }
        Ok(sys)
    }
}

fn normalize(v: &[f64]) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x / n).collect()
}

/// Limit of the normalized replicate word vectors. The recursion runs in
/// floating point, renormalized every step, so depth is not limited by
/// integer width.
pub fn limit_direction(word: &Word, rule: TrimRule, tol: f64, max_steps: usize) -> Result<Vec<f64>> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidWord(format!("tolerance must be positive, got {tol}")));
    }
    let trims = rule.trims(word)?;
    let d = word.d();
    let last = word.len() - 1;
    let mut comps: Vec<Vec<f64>> = word
        .letters()
        .iter()
        .map(|&l| {
            let mut e = vec![0.0; d];
            e[l as usize] = 1.0;
            e
        })
        .collect();
    let total_of = |comps: &[Vec<f64>]| -> Vec<f64> {
        (0..d).map(|k| comps.iter().map(|c| c[k]).sum()).collect()
    };
    let mut prev = normalize(&total_of(&comps));
    for _ in 0..max_steps {
        let mut prefix: Vec<Vec<f64>> = Vec::with_capacity(comps.len());
        for c in &comps {
            let next = match prefix.last() {
                Some(acc) => acc.iter().zip(c).map(|(a, b)| a + b).collect(),
                None => c.clone(),
            };
            prefix.push(next);
        }
        comps = trims.iter().map(|&t| prefix[last - t].clone()).collect();
        let total = total_of(&comps);
        let scale = total.iter().map(|x| x * x).sum::<f64>().sqrt();
        for c in comps.iter_mut() {
            c.iter_mut().for_each(|x| *x /= scale);
        }
        let cur = normalize(&total);
        let delta = cur
            .iter()
            .zip(&prev)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        prev = cur;
        if delta < tol {
            return Ok(prev);
        }
    }
    Err(Error::NotSelfReplicating { steps: max_steps })
}

/// s-table of width `L(w)`: `s(0, j) = e_{w_j}`,
/// `s(i+1, j) = sum_{k <= l - t_j} s(i, k)`.
pub fn selfrep_s_table(word: &Word, rule: TrimRule, max_level: usize) -> Result<STable> {
    STable::build(word, rule, max_level)
}

/// Domain `W` up to `max_level`, lattice-deduplicated.
pub fn build_domain_w(
    word: &Word,
    rule: TrimRule,
    max_level: i32,
    strategy: Strategy,
) -> Result<LayerSet> {
    let table = selfrep_s_table(word, rule, max_level.max(0) as usize)?;
    let prule = PrefixSumRule::new(table, word.d());
    Ok(build_layers(&prule, max_level, strategy))
}

/// Frame on the word's limit direction.
pub fn selfrep_frame(word: &Word, rule: TrimRule) -> Result<Frame> {
    Frame::build(&limit_direction(word, rule, DEFAULT_TOL, DEFAULT_MAX_STEPS)?)
}

/// `(u_0 - u_1, u_1 - u_2, u_0 - u_2)`.
pub fn tiling_offsets(frame: &Frame) -> [PlanePoint; 3] {
    let (u0, u1, u2) = (frame.u(0), frame.u(1), frame.u(2));
    [u0 - u1, u1 - u2, u0 - u2]
}

/// Lattice translation `c01 (e0-e1) + c12 (e1-e2) + c02 (e0-e2)`.
pub fn translation_vector(c: [i64; 3]) -> LatticePoint {
    let [c01, c12, c02] = c;
    LatticePoint::from([c01 + c02, -c01 + c12, -c12 - c02])
}

#[derive(Clone, Debug, PartialEq)]
pub struct TilingReport {
    pub word: String,
    pub level: i32,
    pub radius: i64,
    pub domain_points: usize,
    /// Number of integer triples `c` with every `|c_ij| <= radius`.
    pub offsets: usize,
    /// Distinct translation vectors among those triples.
    pub translations: usize,
    /// Pairs of distinct translated copies compared.
    pub pairs_checked: usize,
    /// Pairs of copies sharing at least one lattice point.
    pub colliding_pairs: usize,
    /// Shared lattice points summed over all pairs.
    pub shared_points: usize,
    /// Smallest distance between points of two distinct copies.
    pub min_distance: f64,
    /// Fraction of a grid over the central window hit by some copy.
    pub coverage: f64,
}

impl TilingReport {
    pub fn disjoint(&self) -> bool {
        self.colliding_pairs == 0 && self.min_distance > TILING_MIN_DISTANCE
    }
}

/// Compares the copies `W + sum c_ij u_ij` for `|c_ij| <= radius`. Triples
/// giving the same translation (e.g. `(1,1,0)` and `(0,0,1)`) describe the same
/// copy and are compared once.
pub fn tiling_check(
    word: &Word,
    rule: TrimRule,
    level: i32,
    radius: i64,
    strategy: Strategy,
) -> Result<TilingReport> {
    let frame = selfrep_frame(word, rule)?;
    let domain = build_domain_w(word, rule, level, strategy)?;
    let lattice: Vec<LatticePoint> = domain.points().iter().map(|p| p.lattice.clone()).collect();
    let lattice_set: HashSet<&LatticePoint> = lattice.iter().collect();
    let projected: Vec<PlanePoint> = lattice.iter().map(|p| frame.project(p)).collect();

    let mut tree: KdTree<f64, 2> = KdTree::new();
    for (i, p) in projected.iter().enumerate() {
        tree.add(&[p.x(), p.y()], i as u64);
    }

    let mut translations: BTreeSet<LatticePoint> = BTreeSet::new();
    let mut offsets = 0;
    for c01 in -radius..=radius {
        for c12 in -radius..=radius {
            for c02 in -radius..=radius {
                translations.insert(translation_vector([c01, c12, c02]));
                offsets += 1;
            }
        }
    }
    let translations: Vec<LatticePoint> = translations.into_iter().collect();
    let mut pairs = Vec::new();
    for a in 0..translations.len() {
        for b in a + 1..translations.len() {
            pairs.push(&translations[b] - &translations[a]);
        }
    }
    // Copies a and b overlap exactly when W and W + (t_b - t_a) do.
    let results = strategy.map(&pairs, |delta| {
        let shift = frame.project(delta);
        let shared = lattice
            .iter()
            .filter(|p| lattice_set.contains(&(*p + delta)))
            .count();
        let nearest = projected
            .iter()
            .map(|p| {
                tree.nearest_one::<SquaredEuclidean>(&[p.x() + shift.x(), p.y() + shift.y()])
                    .distance
            })
            .fold(f64::INFINITY, f64::min)
            .sqrt();
        (shared, nearest)
    });

    let colliding_pairs = results.iter().filter(|(s, _)| *s > 0).count();
    let shared_points = results.iter().map(|(s, _)| s).sum();
    let min_distance = results
        .iter()
        .map(|(_, d)| *d)
        .fold(f64::INFINITY, f64::min);

    let shifts: Vec<PlanePoint> = translations.iter().map(|t| frame.project(t)).collect();
    let coverage = window_coverage(&frame, &projected, &shifts);

    Ok(TilingReport {
        word: word.to_string(),
        level,
        radius,
        domain_points: lattice.len(),
        offsets,
        translations: translations.len(),
        pairs_checked: pairs.len(),
        colliding_pairs,
        shared_points,
        min_distance,
        coverage,
    })
}

/// Occupied fraction of a `32 x 32` grid on the square centred at the origin
/// with half-width half the shortest tiling offset.
fn window_coverage(frame: &Frame, points: &[PlanePoint], shifts: &[PlanePoint]) -> f64 {
    let half = 0.5
        * tiling_offsets(frame)
            .iter()
            .map(PlanePoint::norm)
            .fold(f64::INFINITY, f64::min);
    let cell = 2.0 * half / COVERAGE_GRID as f64;
    let mut hit = vec![false; COVERAGE_GRID * COVERAGE_GRID];
    for s in shifts {
        for p in points {
            let (x, y) = (p.x() + s.x() + half, p.y() + s.y() + half);
            if x < 0.0 || y < 0.0 {
                continue;
            }
            let (i, j) = ((x / cell) as usize, (y / cell) as usize);
            if i < COVERAGE_GRID && j < COVERAGE_GRID {
                hit[j * COVERAGE_GRID + i] = true;
            }
        }
    }
    hit.iter().filter(|&&h| h).count() as f64 / hit.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layers_b::{build_layers_b, rauzy_pattern, s_table};
    use crate::words::tribonacci;
    use approx::assert_abs_diff_eq;

    fn w(s: &str) -> Word {
        Word::parse(s, 3).unwrap()
    }

    #[test]
    fn replicate_depth_one_of_0120() {
        // components 0120 | 012 | 01 | 0120
        let r = replicate(&w("0120"), 1, TrimRule::Plain).unwrap();
        assert_eq!(r, w("0120012010120"));
    }

    #[test]
    fn replicate_depth_zero_is_identity() {
        for s in ["0120", "2010", "0102010"] {
            assert_eq!(replicate(&w(s), 0, TrimRule::Plain).unwrap(), w(s));
        }
    }

    #[test]
    fn exception_reproduces_tribonacci() {
        let a3 = rauzy_pattern();
        let with = replicate(&a3, 1, TrimRule::LetterTwoTrimsThree).unwrap();
        assert_eq!(with, tribonacci(6).unwrap());
        assert_eq!(
            replicate(&a3, 2, TrimRule::LetterTwoTrimsThree).unwrap(),
            tribonacci(9).unwrap()
        );
        let without = replicate(&a3, 1, TrimRule::Plain).unwrap();
        assert_ne!(without, tribonacci(6).unwrap());
        // slot 3 keeps 5 characters instead of 4
        assert_eq!(without.len(), tribonacci(6).unwrap().len() + 1);
    }

    #[test]
    fn replicate_cap() {
        assert!(matches!(
            replicate_capped(&w("0120"), 10, TrimRule::Plain, 1000),
            Err(Error::ResourceCap { .. })
        ));
    }

    #[test]
    fn vector_step_of_0120() {
        let sys = SelfRepSystem::new(&w("0120"), TrimRule::Plain).unwrap();
        assert_eq!(sys.total(), w("0120").word_vector());
        let one = sys.step().unwrap();
        assert_eq!(one.total(), LatticePoint::from([6, 4, 3]));
        assert_eq!(
            one.component_vectors(),
            &[
                LatticePoint::from([2, 1, 1]),
                LatticePoint::from([1, 1, 1]),
                LatticePoint::from([1, 1, 0]),
                LatticePoint::from([2, 1, 1]),
            ]
        );
    }

    #[test]
    fn string_and_vector_engines_agree() {
        for (s, rule) in [
            ("0120", TrimRule::Plain),
            ("1201", TrimRule::Plain),
            ("0201", TrimRule::Plain),
            ("0102010", TrimRule::Plain),
            ("0102010", TrimRule::LetterTwoTrimsThree),
        ] {
            let mut sys = SelfRepSystem::new(&w(s), rule).unwrap();
            for n in 0..=3 {
                assert_eq!(
                    replicate(&w(s), n, rule).unwrap().word_vector(),
                    sys.total(),
                    "{s} n={n}"
                );
                sys = sys.step().unwrap();
            }
        }
    }

    #[test]
    fn vector_engine_reaches_table_value() {
        let sys = SelfRepSystem::new(&w("0120"), TrimRule::Plain)
            .unwrap()
            .advance(20)
            .unwrap();
        let v = sys.normalized_total();
        for (k, want) in [0.756, 0.521, 0.397].iter().enumerate() {
            assert_abs_diff_eq!(v[k], want, epsilon = 1e-3);
        }
    }

    #[test]
    fn vector_engine_reports_overflow() {
        let sys = SelfRepSystem::new(&w("0102010"), TrimRule::Plain).unwrap();
        assert!(matches!(sys.advance(200), Err(Error::Overflow)));
    }

    #[test]
    fn limits_match_float_and_integer_engines() {
        let lim = limit_direction(&w("2010"), TrimRule::Plain, DEFAULT_TOL, DEFAULT_MAX_STEPS)
            .unwrap();
        let sys = SelfRepSystem::new(&w("2010"), TrimRule::Plain)
            .unwrap()
            .advance(25)
            .unwrap();
        for (a, b) in lim.iter().zip(sys.normalized_total()) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-8);
        }
    }

    #[test]
    fn non_converging_word_is_reported() {
        // a single letter 0 never trims: the component count stays one
        let lim = limit_direction(&w("0"), TrimRule::Plain, DEFAULT_TOL, 10).unwrap();
        assert_eq!(lim, vec![1.0, 0.0, 0.0]);
        assert!(limit_direction(&w("0120"), TrimRule::Plain, 0.0, 10).is_err());
        assert!(matches!(
            limit_direction(&w("0120"), TrimRule::Plain, 1e-300, 5),
            Err(Error::NotSelfReplicating { steps: 5 })
        ));
    }

    #[test]
    fn rauzy_table_via_selfrep_path() {
        let a = selfrep_s_table(&rauzy_pattern(), TrimRule::LetterTwoTrimsThree, 8).unwrap();
        assert_eq!(a, s_table(8));
    }

    #[test]
    fn s_table_of_0120() {
        let t = selfrep_s_table(&w("0120"), TrimRule::Plain, 4).unwrap();
        assert_eq!(t.s(1, 0), &LatticePoint::from([2, 1, 1]));
        assert_eq!(t.s(1, 0), &w("0120").word_vector());
        for i in 0..=4 {
            assert_eq!(t.s(i, 0), t.s(i, 3));
        }
    }

    #[test]
    fn domain_matches_b_layers_with_exception() {
        let d = build_domain_w(&rauzy_pattern(), TrimRule::LetterTwoTrimsThree, 2, Strategy::default())
            .unwrap();
        let b = build_layers_b(2, Strategy::default());
        assert_eq!(d.lattice_set(), b.lattice_set());
        let origin_only = build_domain_w(&w("0120"), TrimRule::Plain, -1, Strategy::default()).unwrap();
        assert_eq!(origin_only.len(), 1);
    }

    #[test]
    fn domain_growth_before_dedup() {
        let d = build_domain_w(&w("0120"), TrimRule::Plain, 4, Strategy::default()).unwrap();
        let mut sources = 1;
        for level in 0..=4 {
            assert_eq!(d.generated_at(level), 4 * sources);
            sources += d.level(level).len();
        }
    }

    #[test]
    fn offsets_telescope() {
        let f = selfrep_frame(&w("0120"), TrimRule::Plain).unwrap();
        let [u01, u12, u02] = tiling_offsets(&f);
        assert!((&u01 + &u12).distance(&u02) < 1e-12);
    }

    #[test]
    fn symmetric_direction_gives_equal_offsets() {
        let f = Frame::build(&[1.0, 1.0, 1.0]).unwrap();
        let norms = tiling_offsets(&f).map(|u| u.norm());
        assert_abs_diff_eq!(norms[0], norms[1], epsilon = 1e-12);
        assert_abs_diff_eq!(norms[1], norms[2], epsilon = 1e-12);
    }

    #[test]
    fn translation_vectors() {
        assert_eq!(translation_vector([0, 0, 0]), LatticePoint::zero(3));
        assert_eq!(translation_vector([1, 1, 0]), translation_vector([0, 0, 1]));
        assert_eq!(translation_vector([1, 0, 0]), LatticePoint::from([1, -1, 0]));
        for c in [[1, -1, 1], [0, 1, -1], [-1, 0, 1]] {
            assert_eq!(translation_vector(c).length(), 0);
        }
    }

    #[test]
    fn tiling_report_shape() {
        let r = tiling_check(&w("0120"), TrimRule::Plain, 2, 1, Strategy::default()).unwrap();
        assert_eq!(r.offsets, 27);
        assert_eq!(r.translations, 19);
        assert_eq!(r.pairs_checked, 19 * 18 / 2);
        assert!(r.coverage > 0.0 && r.coverage <= 1.0);
    }

    #[test]
    fn rauzy_copies_are_disjoint() {
        let r = tiling_check(
            &rauzy_pattern(),
            TrimRule::LetterTwoTrimsThree,
            2,
            1,
            Strategy::default(),
        )
        .unwrap();
        assert_eq!(r.colliding_pairs, 0);
        assert!(r.disjoint(), "{r:?}");
    }

    #[test]
    fn coverage_grows_with_level() {
        let cov: Vec<f64> = (2..=4)
            .map(|level| {
                tiling_check(&w("0120"), TrimRule::Plain, level, 1, Strategy::default())
                    .unwrap()
                    .coverage
            })
            .collect();
        assert!(cov[0] <= cov[1] && cov[1] <= cov[2], "{cov:?}");
    }
}
