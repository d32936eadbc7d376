//! Spatial-mode unitaries and multi-photon evolution.
//!
//! A [`SpatialUnitary`] acts on the spatial index of every photon and is the
//! identity on the internal index. Creation operators transform as
//! `in_j† → ∑_k U[k][j] out_k†`, so column `j` of `U` is the image of input
//! mode `j`. Two-mode unitaries act on `(a, b)`, three-mode ones on
//! `(γ, a, b)`.

mod engine;
pub mod permanent;

use std::f64::consts::FRAC_1_SQRT_2;
use std::ops::Mul;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::fock::Spatial;

pub use engine::{evolve, evolve_permanent, evolve_substitution, scattering_distribution, Engine};

/// Deviation from `U·U† = 1` tolerated at construction.
pub const UNITARITY_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct SpatialUnitary {
    dim: usize,
    entries: Vec<C64>,
}

impl SpatialUnitary {
    /// Checked constructor from row-major entries; `dim` must be 2 or 3.
    pub fn new(dim: usize, entries: Vec<C64>) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::UnsupportedDimension(dim));
        }
        if entries.len() != dim * dim {
            return Err(Error::InvalidParameter(format!(
                "{} entries for a {dim}x{dim} matrix",
                entries.len()
            )));
        }
        let u = Self { dim, entries };
        let dev = u.unitarity_deviation();
        if dev.is_nan() || dev > UNITARITY_TOL {
            return Err(Error::NotUnitary(dev));
        }
        Ok(u)
    }

    pub fn from_real_rows<const D: usize>(rows: [[f64; D]; D]) -> Result<Self> {
        let entries = rows.iter().flatten().map(|&x| C64::new(x, 0.0)).collect();
        Self::new(D, entries)
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let entries = (0..dim * dim)
            .map(|k| if k / dim == k % dim { C64::new(1.0, 0.0) } else { C64::default() })
            .collect();
        Self::new(dim, entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[row * self.dim + col]
    }

    /// Row/column index of a spatial mode, or `None` if the unitary does not
    /// act on it.
    pub fn slot(&self, spatial: Spatial) -> Option<usize> {
        match (self.dim, spatial) {
            (2, Spatial::Gamma) => None,
            (2, Spatial::A) => Some(0),
            (2, Spatial::B) => Some(1),
            (_, s) => Some(s.index()),
        }
    }

    /// Spatial mode addressed by row/column `k`.
    pub fn spatial_at(&self, k: usize) -> Spatial {
        if self.dim == 2 {
            [Spatial::A, Spatial::B][k]
        } else {
            Spatial::ALL[k]
        }
    }

    /// `max |(U U†)_ij − δ_ij|`.
    pub fn unitarity_deviation(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let mut acc = C64::default();
                for k in 0..d {
                    acc += self.get(i, k) * self.get(j, k).conj();
                }
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((acc - target).norm());
            }
        }
        worst
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let entries = (0..d * d).map(|k| self.get(k % d, k / d).conj()).collect();
        Self { dim: d, entries }
    }

    /// `self · rhs`, i.e. apply `rhs` first.
    pub fn matmul(&self, rhs: &SpatialUnitary) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::InvalidParameter(format!(
                "cannot multiply {}x{} by {}x{}",
                self.dim, self.dim, rhs.dim, rhs.dim
            )));
        }
        let d = self.dim;
        let mut entries = vec![C64::default(); d * d];
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    entries[i * d + j] += self.get(i, k) * rhs.get(k, j);
                }
            }
        }
        Ok(Self { dim: d, entries })
    }
}

impl Mul for &SpatialUnitary {
    type Output = SpatialUnitary;

    fn mul(self, rhs: &SpatialUnitary) -> SpatialUnitary {
        self.matmul(rhs).expect("dimension mismatch in unitary product")
    }
}

/// Variable beam splitter `[[cos θ, sin θ], [sin θ, −cos θ]]` on `(a, b)`.
pub fn vbs(theta: f64) -> Result<SpatialUnitary> {
    if !theta.is_finite() {
        return Err(Error::InvalidParameter(format!("theta must be finite, got {theta}")));
    }
    let (s, c) = theta.sin_cos();
    SpatialUnitary::from_real_rows([[c, s], [s, -c]])
}

/// 50:50 splitter mixing `γ` and `a`, leaving `b` alone:
/// `γ† → (γ† + a†)/√2`, `a† → (γ† − a†)/√2`.
///
/// With this sign choice `γ†₀ a†₀ → ½(γ†₀² − a†₀²)`, matching the
/// intermediate state of the single-photon addition scheme term by term.
pub fn balanced_bs_3mode() -> SpatialUnitary {
    let h = FRAC_1_SQRT_2;
    SpatialUnitary::from_real_rows([[h, h, 0.0], [h, -h, 0.0], [0.0, 0.0, 1.0]])
        .expect("balanced splitter is unitary")
}

/// [`haar_random`] drawn from a ChaCha8 generator seeded with `seed`.
pub fn haar_random_seeded(dim: usize, seed: u64) -> Result<SpatialUnitary> {
    haar_random(dim, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Haar-distributed unitary: Gram–Schmidt on the columns of a complex
/// Gaussian matrix (equivalently QR with a positive diagonal in R).
pub fn haar_random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<SpatialUnitary> {
    if dim != 2 && dim != 3 {
        return Err(Error::UnsupportedDimension(dim));
    }
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<C64> = (0..dim)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        for q in &cols {
            let proj: C64 = q.iter().zip(&v).map(|(qi, vi)| qi.conj() * vi).sum();
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= proj * qi;
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            // degenerate draw; measure zero but cheap to retry
            continue;
        }
        cols.push(v.into_iter().map(|x| x / norm).collect());
    }
    let entries = (0..dim * dim).map(|k| cols[k % dim][k / dim]).collect();
    SpatialUnitary::new(dim, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn vbs_endpoints() {
        let t = vbs(0.0).unwrap();
        assert_eq!(t, SpatialUnitary::from_real_rows([[1.0, 0.0], [0.0, -1.0]]).unwrap());
        let r = vbs(FRAC_PI_2).unwrap();
        for (i, j, v) in [(0, 0, 0.0), (0, 1, 1.0), (1, 0, 1.0), (1, 1, 0.0)] {
            assert!((r.get(i, j).re - v).abs() < 1e-15);
        }
        let b = vbs(FRAC_PI_4).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((b.get(i, j).norm_sqr() - 0.5).abs() < 1e-15);
            }
        }
        assert!(vbs(f64::NAN).is_err());
    }

    #[test]
    fn balanced_bs_is_involutive_and_unitary() {
        let u = balanced_bs_3mode();
        assert!(u.unitarity_deviation() < 1e-15);
        let sq = &u * &u;
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((sq.get(i, j).re.abs() - expect).abs() < 1e-15);
            }
        }
        for j in 0..3 {
            let norm: f64 = (0..3).map(|i| u.get(i, j).norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_non_unitary() {
        let e = SpatialUnitary::from_real_rows([[1.0, 1.0], [0.0, 1.0]]);
        assert!(matches!(e, Err(Error::NotUnitary(_))));
        assert!(matches!(SpatialUnitary::identity(4), Err(Error::UnsupportedDimension(4))));
    }

    #[test]
    fn haar_samples_are_unitary_and_seeded() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let u = haar_random(2, &mut rng).unwrap();
        let v = haar_random(3, &mut rng).unwrap();
        assert!(u.unitarity_deviation() < 1e-13);
        assert!(v.unitarity_deviation() < 1e-13);
        let mut again = ChaCha8Rng::seed_from_u64(7);
        assert_eq!(haar_random(2, &mut again).unwrap(), u);
        assert_eq!(haar_random_seeded(2, 7).unwrap(), u);
    }

    #[test]
    fn adjoint_inverts() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = haar_random(3, &mut rng).unwrap();
        let p = &u.adjoint() * &u;
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((p.get(i, j) - expect).norm() < 1e-13);
            }
        }
    }
}
