//! Matrix permanents for multi-photon transition amplitudes.
//!
//! Two independent routes: cofactor (Laplace) expansion, which enumerates all
//! `n!` permutations, and Ryser's inclusion–exclusion formula walked in Gray
//! code order so that each subset differs from the previous one by a single
//! column and the row sums update in O(n).

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<C64>,
}

impl SquareMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![C64::default(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::InvalidParameter(format!(
                    "matrix is not square: row of length {} in {n}-row matrix",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(Self { n, data })
    }

    pub fn from_fn<F: FnMut(usize, usize) -> C64>(n: usize, mut f: F) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.n + j]
    }
}

/// Permanent, dispatching to cofactor expansion for `n ≤ 3` and Ryser's
/// formula otherwise. Intended for `n ≤ 6`.
pub fn permanent(m: &SquareMatrix) -> C64 {
    if m.size() <= 3 {
        permanent_laplace(m)
    } else {
        permanent_ryser(m)
    }
}

/// Cofactor expansion along the first row; O(n!) but transparent.
pub fn permanent_laplace(m: &SquareMatrix) -> C64 {
    fn expand(m: &SquareMatrix, row: usize, used: u64) -> C64 {
        if row == m.size() {
            return C64::new(1.0, 0.0);
        }
        let mut acc = C64::default();
        for col in 0..m.size() {
            if used & (1 << col) == 0 {
                let entry = m.get(row, col);
                if entry != C64::default() {
                    acc += entry * expand(m, row + 1, used | (1 << col));
                }
            }
        }
        acc
    }
    expand(m, 0, 0)
}

/// Ryser's formula `perm(A) = (−1)ⁿ ∑_S (−1)^|S| ∏_i ∑_{j∈S} a_ij` with
/// Gray-code subset iteration, O(2ⁿ n).
pub fn permanent_ryser(m: &SquareMatrix) -> C64 {
    let n = m.size();
    if n == 0 {
        return C64::new(1.0, 0.0);
    }
    assert!(n < 64, "permanent of a {n}x{n} matrix is out of reach");
    let mut row_sums = vec![C64::default(); n];
    let mut subset: u64 = 0;
    let mut total = C64::default();
    for k in 1u64..(1u64 << n) {
        // Gray code g(k) = k ^ (k >> 1) differs from g(k-1) in bit tz(k)
        let col = k.trailing_zeros() as usize;
        let bit = 1u64 << col;
        let adding = subset & bit == 0;
        subset ^= bit;
        for (i, s) in row_sums.iter_mut().enumerate() {
            if adding {
                *s += m.get(i, col);
            } else {
                *s -= m.get(i, col);
            }
        }
        let prod: C64 = row_sums.iter().product();
        if (n - subset.count_ones() as usize).is_multiple_of(2) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    total
}
