use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::complex_gaussian_vec;

/// Tolerance for `U^dagger U = I` checks at construction.
pub const UNITARY_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl LinearMap {
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::invalid("linear map dimensions must be positive"));
        }
        if entries.len() != rows * cols {
            return Err(Error::invalid(format!(
                "expected {} entries for a {rows}x{cols} map, got {}",
                rows * cols,
                entries.len()
            )));
        }
        if entries
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::invalid("linear map entries must be finite"));
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(rows > 0 && cols > 0);
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        Self {
            rows,
            cols,
            entries,
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| ZERO)
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, dim, |r, c| if r == c { ONE } else { ZERO })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub(crate) fn entries_mut(&mut self) -> &mut [Complex64] {
        &mut self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn apply_to(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.cols {
            return Err(Error::invalid(format!(
                "vector of length {} does not match map with {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok(self.mul_vec(v))
    }

    pub(crate) fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn matmul(&self, rhs: &LinearMap) -> Result<LinearMap> {
        if self.cols != rhs.rows {
            return Err(Error::invalid(format!(
                "cannot compose {}x{} with {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = vec![ZERO; self.rows * rhs.cols];
        for r in 0..self.rows {
            let out_row = &mut out[r * rhs.cols..(r + 1) * rhs.cols];
            for (k, a) in self.row(r).iter().enumerate() {
                if *a == ZERO {
                    continue;
                }
                for (o, b) in out_row.iter_mut().zip(rhs.row(k)) {
                    *o += a * b;
                }
            }
        }
        Ok(LinearMap {
            rows: self.rows,
            cols: rhs.cols,
            entries: out,
        })
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> LinearMap {
        LinearMap::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    /// Kronecker product; `self` acts on the high-order index.
    pub fn kron(&self, rhs: &LinearMap) -> LinearMap {
        LinearMap::from_fn(self.rows * rhs.rows, self.cols * rhs.cols, |r, c| {
            self.get(r / rhs.rows, c / rhs.cols) * rhs.get(r % rhs.rows, c % rhs.cols)
        })
    }

    pub fn max_abs_diff(&self, other: &LinearMap) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        crate::spectral::max_abs_diff(&self.entries, &other.entries)
    }

    /// `max |(A^dagger A - I)_{rc}|`.
    pub fn isometry_deviation(&self) -> f64 {
        let gram = self.adjoint().matmul(self).expect("shapes agree");
        gram.max_abs_diff(&LinearMap::identity(self.cols))
    }
}

/// A square map with `U^dagger U = I = U U^dagger`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMap(LinearMap);

impl UnitaryMap {
    pub fn new(map: LinearMap) -> Result<Self> {
        if !map.is_square() {
            return Err(Error::invalid("unitary map must be square"));
        }
        let deviation = map
            .isometry_deviation()
            .max(map.adjoint().isometry_deviation());
        if deviation > UNITARY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self(map))
    }

    /// Skips the O(N^3) check for maps that are unitary by construction.
    pub(crate) fn new_unchecked(map: LinearMap) -> Self {
        debug_assert!(map.is_square());
        Self(map)
    }

    pub fn identity(dim: usize) -> Self {
        Self(LinearMap::identity(dim))
    }

    pub fn hadamard() -> Self {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Self(LinearMap::new(2, 2, vec![h, h, h, -h]).expect("2x2"))
    }

    /// Haar-like random unitary: modified Gram-Schmidt on the columns of a
    /// complex Gaussian matrix.
    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        assert!(dim > 0);
        let mut cols: Vec<Vec<Complex64>> =
            (0..dim).map(|_| complex_gaussian_vec(rng, dim)).collect();
        for i in 0..dim {
            for j in 0..i {
                let (done, rest) = cols.split_at_mut(i);
                let proj: Complex64 = done[j]
                    .iter()
                    .zip(&rest[0])
                    .map(|(q, v)| q.conj() * v)
                    .sum();
                for (v, q) in rest[0].iter_mut().zip(&done[j]) {
                    *v -= proj * q;
                }
            }
            let norm = crate::spectral::l2_norm(&cols[i]);
            for v in cols[i].iter_mut() {
                *v /= norm;
            }
        }
        Self(LinearMap::from_fn(dim, dim, |r, c| cols[c][r]))
    }

    pub fn dim(&self) -> usize {
        self.0.rows
    }

    pub fn as_linear(&self) -> &LinearMap {
        &self.0
    }

    pub fn into_linear(self) -> LinearMap {
        self.0
    }

    pub fn adjoint(&self) -> UnitaryMap {
        UnitaryMap(self.0.adjoint())
    }

    pub fn kron(&self, rhs: &UnitaryMap) -> UnitaryMap {
        UnitaryMap(self.0.kron(&rhs.0))
    }

    pub fn compose(&self, rhs: &UnitaryMap) -> Result<UnitaryMap> {
        Ok(UnitaryMap(self.0.matmul(&rhs.0)?))
    }
}
