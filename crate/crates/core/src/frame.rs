//! The contracting plane orthogonal to the expanding direction, an orthonormal
//! basis for it, and projection of lattice points onto that basis.

use std::fmt;
use std::ops::{Add, Sub};

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::spectral::spectrum_of;
use crate::words::{LatticePoint, Substitution};

const GS_EPS: f64 = 1e-12;

/// Coordinates in the contracting plane (two reals when `d = 3`).
#[derive(Clone, PartialEq, Default)]
pub struct PlanePoint(SmallVec<[f64; 3]>);

impl PlanePoint {
    pub fn new(coords: impl IntoIterator<Item = f64>) -> Self {
        PlanePoint(coords.into_iter().collect())
    }

    pub fn zero(dim: usize) -> Self {
        PlanePoint(smallvec::smallvec![0.0; dim])
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn x(&self) -> f64 {
        self.0[0]
    }

    pub fn y(&self) -> f64 {
        self.0.get(1).copied().unwrap_or(0.0)
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn distance(&self, other: &PlanePoint) -> f64 {
        (self - other).norm()
    }

    pub fn scale(&self, k: f64) -> PlanePoint {
        PlanePoint(self.0.iter().map(|c| c * k).collect())
    }
}

impl fmt::Debug for PlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

impl Add for &PlanePoint {
    type Output = PlanePoint;

    fn add(self, rhs: &PlanePoint) -> PlanePoint {
        PlanePoint(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &PlanePoint {
    type Output = PlanePoint;

    fn sub(self, rhs: &PlanePoint) -> PlanePoint {
        PlanePoint(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Expanding direction, in-plane orthonormal basis `r_0..r_{d-2}` and the
/// projected standard basis `u_0..u_{d-1}`.
#[derive(Clone, Debug)]
pub struct Frame {
    v_inf: Vec<f64>,
    r: Vec<Vec<f64>>,
    u: Vec<PlanePoint>,
}

impl Frame {
    /// Gram–Schmidt on `{v, e_0, ..., e_{d-2}}`.
    pub fn build(v_inf: &[f64]) -> Result<Self> {
        let d = v_inf.len();
        if d < 2 {
            return Err(Error::DegenerateInput(format!("dimension {d} has no plane")));
        }
        if v_inf.iter().any(|c| !c.is_finite()) {
            return Err(Error::DegenerateInput("non-finite direction".into()));
        }
        let n = dot(v_inf, v_inf).sqrt();
        if n < GS_EPS {
            return Err(Error::DegenerateInput("zero direction vector".into()));
        }
        let v: Vec<f64> = v_inf.iter().map(|c| c / n).collect();

        let mut basis: Vec<Vec<f64>> = vec![v.clone()];
        for k in 0..d - 1 {
            let mut e = vec![0.0; d];
            e[k] = 1.0;
            for b in &basis {
                let c = dot(&e, b);
                for (ei, bi) in e.iter_mut().zip(b) {
                    *ei -= c * bi;
                }
            }
            let en = dot(&e, &e).sqrt();
            if en < GS_EPS {
                return Err(Error::DegenerateInput(format!(
                    "e_{k} is dependent on the earlier Gram-Schmidt vectors"
                )));
            }
            e.iter_mut().for_each(|c| *c /= en);
            basis.push(e);
        }
        let r: Vec<Vec<f64>> = basis.split_off(1);
        let u = (0..d)
            .map(|i| PlanePoint::new(r.iter().map(|rk| rk[i])))
            .collect();
        Ok(Frame { v_inf: v, r, u })
    }

    /// Frame on the Perron eigenvector of the substitution matrix.
    pub fn from_substitution(sub: &Substitution) -> Result<Self> {
        Frame::build(&spectrum_of(sub)?.v_inf)
    }

    /// Frame on the word vector of `[w_n]`, the long-word approximation of
    /// the expanding direction.
    pub fn from_word_vector(sub: &Substitution, n: usize) -> Result<Self> {
        Frame::build(&sub.iterate(n)?.word_vector().to_f64())
    }

    pub fn rauzy() -> Self {
        Frame::from_substitution(&Substitution::rauzy()).expect("Rauzy frame exists")
    }

    pub fn d(&self) -> usize {
        self.v_inf.len()
    }

    pub fn v_inf(&self) -> &[f64] {
        &self.v_inf
    }

    pub fn r(&self) -> &[Vec<f64>] {
        &self.r
    }

    /// Image of `e_i` in plane coordinates.
    pub fn u(&self, i: usize) -> &PlanePoint {
        &self.u[i]
    }

    pub fn us(&self) -> &[PlanePoint] {
        &self.u
    }

    /// `coords_k = p . r_k`; equal to projecting first because `r_k` is
    /// orthogonal to the expanding direction.
    pub fn project(&self, p: &LatticePoint) -> PlanePoint {
        debug_assert_eq!(p.dim(), self.d());
        PlanePoint::new(self.r.iter().map(|rk| {
            p.coords()
                .iter()
                .zip(rk)
                .map(|(&c, r)| c as f64 * r)
                .sum::<f64>()
        }))
    }

    pub fn project_real(&self, p: &[f64]) -> PlanePoint {
        PlanePoint::new(self.r.iter().map(|rk| dot(p, rk)))
    }

    /// Explicit route: `pi(p) = p - (p . v) v`, then dot with each `r_k`.
    pub fn project_via_plane(&self, p: &[f64]) -> PlanePoint {
        let c = dot(p, &self.v_inf);
        let pi: Vec<f64> = p.iter().zip(&self.v_inf).map(|(x, v)| x - c * v).collect();
        PlanePoint::new(self.r.iter().map(|rk| dot(&pi, rk)))
    }
}
