//! Substitution matrices and their Perron data: the Pisot number, the
//! expanding eigenvector and the moduli of the remaining roots.

use std::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::words::{LatticePoint, Substitution};

pub const POWER_ITERATION_MAX_STEPS: usize = 100_000;
/// Margin used when deciding `|root| < 1` and `lambda > 1`.
pub const PISOT_MARGIN: f64 = 1e-9;
const POWER_TOL: f64 = 1e-14;

/// Integer `d x d` matrix with `v_{n+1} = M v_n` for word vectors: column `j`
/// is the word vector of the image of letter `j`.
#[derive(Clone, PartialEq, Eq)]
pub struct SubstitutionMatrix {
    d: usize,
    entries: Vec<i64>,
}

impl SubstitutionMatrix {
    pub fn from_rows(rows: &[&[i64]]) -> Self {
        let d = rows.len();
        assert!(rows.iter().all(|r| r.len() == d), "matrix must be square");
        SubstitutionMatrix {
            d,
            entries: rows.iter().flat_map(|r| r.iter().copied()).collect(),
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.entries[row * self.d + col]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.d).map(|r| r.to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let d = self.d;
        let mut entries = vec![0; d * d];
        for r in 0..d {
            for c in 0..d {
                entries[c * d + r] = self.get(r, c);
            }
        }
        SubstitutionMatrix { d, entries }
    }

    pub fn mul_vec(&self, v: &LatticePoint) -> LatticePoint {
        LatticePoint::new(
            (0..self.d).map(|r| (0..self.d).map(|c| self.get(r, c) * v.coords()[c]).sum()),
        )
    }

    fn mul_f64(&self, v: &[f64]) -> Vec<f64> {
        (0..self.d)
            .map(|r| (0..self.d).map(|c| self.get(r, c) as f64 * v[c]).sum())
            .collect()
    }

    fn mat_mul(&self, other: &[i64]) -> Vec<i64> {
        let d = self.d;
        let mut out = vec![0; d * d];
        for r in 0..d {
            for c in 0..d {
                out[r * d + c] = (0..d).map(|k| self.get(r, k) * other[k * d + c]).sum();
            }
        }
        out
    }

    /// Coefficients `[c_0, c_1, ..., c_{d-1}, 1]` of `det(xI - M)`, computed
    /// exactly with the Faddeev–LeVerrier recursion.
    pub fn characteristic_polynomial(&self) -> Vec<i64> {
        let d = self.d;
        let mut coeffs = vec![0i64; d + 1];
        coeffs[d] = 1;
        let mut m_k = vec![0i64; d * d];
        for k in 1..=d {
            let mut next = self.mat_mul(&m_k);
            for i in 0..d {
                next[i * d + i] += coeffs[d - k + 1];
            }
            let am = self.mat_mul(&next);
            let trace: i64 = (0..d).map(|i| am[i * d + i]).sum();
            debug_assert_eq!(trace % k as i64, 0);
            coeffs[d - k] = -trace / k as i64;
            m_k = next;
        }
        coeffs
    }
}

impl fmt::Debug for SubstitutionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rows())
    }
}

impl fmt::Display for SubstitutionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(|c| c.to_string()).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// Column `j` is the word vector of the image of `j`.
pub fn matrix_of(sub: &Substitution) -> SubstitutionMatrix {
    let d = sub.d();
    let mut entries = vec![0; d * d];
    for (col, rule) in sub.rules().iter().enumerate() {
        for (row, &count) in rule.word_vector().coords().iter().enumerate() {
            entries[row * d + col] = count;
        }
    }
    SubstitutionMatrix { d, entries }
}

/// Evaluates a polynomial given low-to-high coefficients.
pub fn eval_poly(coeffs: &[i64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c as f64)
}

fn eval_poly_derivative(coeffs: &[i64], x: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(0.0, |acc, (k, &c)| acc * x + k as f64 * c as f64)
}

#[derive(Clone, Debug)]
pub struct PisotSpectrum {
    /// Dominant real eigenvalue.
    pub lambda: f64,
    /// Unit eigenvector for `lambda`, entries positive.
    pub v_inf: Vec<f64>,
    pub is_pisot: bool,
    /// Moduli of the other `d - 1` roots, descending.
    pub other_root_moduli: Vec<f64>,
}

impl PisotSpectrum {
    pub fn largest_other_modulus(&self) -> f64 {
        self.other_root_moduli.first().copied().unwrap_or(0.0)
    }

    pub fn require_pisot(&self) -> Result<()> {
        if self.is_pisot {
            Ok(())
        } else {
            Err(Error::NotPisot {
                lambda: self.lambda,
                other: self.largest_other_modulus(),
            })
        }
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Power iteration from the all-ones vector.
pub fn dominant_eigenpair(m: &SubstitutionMatrix) -> Result<(f64, Vec<f64>)> {
    let d = m.d();
    let mut v = vec![1.0 / (d as f64).sqrt(); d];
    for _ in 0..POWER_ITERATION_MAX_STEPS {
        let y = m.mul_f64(&v);
        let n = norm(&y);
        if n == 0.0 {
            return Err(Error::DegenerateInput("matrix annihilates the start vector".into()));
        }
        let next: Vec<f64> = y.iter().map(|x| x / n).collect();
        let delta = next
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        v = next;
        if delta < POWER_TOL {
            let lambda = norm(&m.mul_f64(&v));
            return Ok((lambda, v));
        }
    }
    Err(Error::NonConvergent {
        steps: POWER_ITERATION_MAX_STEPS,
    })
}

/// Moduli of the roots of `poly / (x - lambda)`.
fn deflated_moduli(poly: &[i64], lambda: f64, m: &SubstitutionMatrix) -> Vec<f64> {
    let d = m.d();
    let mut moduli = if d == 3 {
        // x^3 + a x^2 + b x + c = (x - lambda)(x^2 + p x + q)
        let (a, b) = (poly[2] as f64, poly[1] as f64);
        let p = a + lambda;
        let q = b + lambda * p;
        let disc = p * p - 4.0 * q;
        if disc < 0.0 {
            // complex pair, |z|^2 = q
            let r = q.sqrt();
            vec![r, r]
        } else {
            let s = disc.sqrt();
            vec![((-p + s) / 2.0).abs(), ((-p - s) / 2.0).abs()]
        }
    } else {
        let dm = DMatrix::from_fn(d, d, |r, c| m.get(r, c) as f64);
        let mut eig: Vec<_> = dm.complex_eigenvalues().iter().copied().collect();
        if let Some(pos) = eig
            .iter()
            .enumerate()
            .min_by(|(_, x), (_, y)| {
                let dx = (x.re - lambda).abs() + x.im.abs();
                let dy = (y.re - lambda).abs() + y.im.abs();
                dx.total_cmp(&dy)
            })
            .map(|(i, _)| i)
        {
            eig.remove(pos);
        }
        eig.iter().map(|z| z.norm()).collect()
    };
    moduli.sort_by(|a, b| b.total_cmp(a));
    moduli
}

pub fn spectrum(m: &SubstitutionMatrix) -> Result<PisotSpectrum> {
    let (mut lambda, v_inf) = dominant_eigenpair(m)?;
    let poly = m.characteristic_polynomial();
    // polish on the exact characteristic polynomial
    for _ in 0..3 {
        let der = eval_poly_derivative(&poly, lambda);
        if der.abs() < 1e-12 {
            break;
        }
        let step = eval_poly(&poly, lambda) / der;
        if step.abs() > 1e-9 {
            break;
        }
        lambda -= step;
    }
    let other_root_moduli = deflated_moduli(&poly, lambda, m);
    let is_pisot = lambda > 1.0 + PISOT_MARGIN
        && other_root_moduli.iter().all(|&r| r < 1.0 - PISOT_MARGIN);
    Ok(PisotSpectrum {
        lambda,
        v_inf,
        is_pisot,
        other_root_moduli,
    })
}

/// Matrix and spectrum of a substitution in one call.
pub fn spectrum_of(sub: &Substitution) -> Result<PisotSpectrum> {
    spectrum(&matrix_of(sub))
}
