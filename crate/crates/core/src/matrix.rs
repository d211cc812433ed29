//! Dense matrices over a prime field: rank, right kernel and determinant by
//! pivoted Gaussian elimination.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::PrimeField;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl FpMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from rows of residues (reduced on the way in).
    pub fn from_rows(field: PrimeField, rows: &[Vec<u64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let data = rows.iter().flatten().map(|&x| field.reduce(x)).collect();
        Ok(Self { field, rows: rows.len(), cols, data })
    }

    /// Like [`FpMatrix::from_rows`] with an explicit column count, so that a
    /// matrix with zero rows still knows its width.
    pub fn from_row_list(field: PrimeField, cols: usize, rows: Vec<Vec<u64>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "row length");
            data.extend(r.into_iter().map(|x| field.reduce(x)));
        }
        Self { field, rows: n, cols, data }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = self.field.reduce(v);
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        let f = self.field;
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    fn rref(&mut self) -> Vec<usize> {
        let f = self.field;
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if pr != r {
                for k in 0..cols {
                    self.data.swap(pr * cols + k, r * cols + k);
                }
            }
            let inv = f.inv(self.data[r * cols + c]);
            for k in c..cols {
                self.data[r * cols + k] = f.mul(self.data[r * cols + k], inv);
            }
            let (before, rest) = self.data.split_at_mut(r * cols);
            let (pivot_row, after) = rest.split_at_mut(cols);
            for other in before.chunks_mut(cols).chain(after.chunks_mut(cols)) {
                let factor = other[c];
                if factor == 0 {
                    continue;
                }
                for k in c..cols {
                    other[k] = f.sub(other[k], f.mul(factor, pivot_row[k]));
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Row echelon reduction (no back substitution); returns the rank.
    fn echelon_rank(&mut self) -> usize {
        let f = self.field;
        let (rows, cols) = (self.rows, self.cols);
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if pr != r {
                for k in 0..cols {
                    self.data.swap(pr * cols + k, r * cols + k);
                }
            }
            let inv = f.inv(self.data[r * cols + c]);
            let (head, tail) = self.data.split_at_mut((r + 1) * cols);
            let pivot_row = &head[r * cols..];
            for other in tail.chunks_mut(cols) {
                let factor = other[c];
                if factor == 0 {
                    continue;
                }
                let factor = f.mul(factor, inv);
                for k in c..cols {
                    other[k] = f.sub(other[k], f.mul(factor, pivot_row[k]));
                }
            }
            r += 1;
        }
        r
    }

    pub fn rank(&self) -> usize {
        // eliminate along the short side
        if self.cols > self.rows {
            self.transpose().echelon_rank_owned()
        } else {
            self.clone().echelon_rank()
        }
    }

    fn echelon_rank_owned(mut self) -> usize {
        self.echelon_rank()
    }

    /// Basis of `{v : M v = 0}`, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<u64>> {
        let f = self.field;
        let mut m = self.clone();
        let pivots = m.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![0; self.cols];
                v[free] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(m.get(r, free));
                }
                v
            })
            .collect()
    }

    /// A uniformly random combination of the kernel basis, redrawn until
    /// nonzero. Deterministic in `(p, seed)`.
    pub fn random_kernel_vector(&self, seed: u64) -> Result<Vec<u64>> {
        let basis = self.kernel_basis();
        if basis.is_empty() {
            return Err(Error::EmptyKernel);
        }
        let f = self.field;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let coeffs: Vec<u64> = basis.iter().map(|_| f.random(&mut rng)).collect();
            let mut v = vec![0; self.cols];
            for (c, b) in coeffs.iter().zip(&basis) {
                for (vi, &bi) in v.iter_mut().zip(b) {
                    *vi = f.add(*vi, f.mul(*c, bi));
                }
            }
            if v.iter().any(|&x| x != 0) {
                return Ok(v);
            }
        }
    }

    /// Inverse of a square matrix, `None` if singular.
    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut aug = Self::zeros(self.field, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, 1);
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(self.field, n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, aug.get(r, n + c));
            }
        }
        Some(inv)
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    /// Determinant of a square matrix.
    pub fn determinant(&self) -> u64 {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let f = self.field;
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = 1u64;
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| a[i * n + c] != 0) else {
                return 0;
            };
            if pr != c {
                for k in 0..n {
                    a.swap(pr * n + k, c * n + k);
                }
                det = f.neg(det);
            }
            let piv = a[c * n + c];
            det = f.mul(det, piv);
            let inv = f.inv(piv);
            for r in c + 1..n {
                let factor = a[r * n + c];
                if factor == 0 {
                    continue;
                }
                let factor = f.mul(factor, inv);
                for k in c..n {
                    a[r * n + k] = f.sub(a[r * n + k], f.mul(factor, a[c * n + k]));
                }
            }
        }
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn random_matrix(f: PrimeField, rows: usize, cols: usize, seed: u64) -> FpMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data: Vec<Vec<u64>> =
            (0..rows).map(|_| (0..cols).map(|_| f.random(&mut rng)).collect()).collect();
        FpMatrix::from_rows(f, &data).unwrap()
    }

    /// Product of two random factors with inner dimension `k`: rank <= k.
    fn low_rank(f: PrimeField, rows: usize, cols: usize, k: usize, seed: u64) -> FpMatrix {
        let a = random_matrix(f, rows, k, seed);
        let b = random_matrix(f, k, cols, seed ^ 0xabcdef);
        let mut m = FpMatrix::zeros(f, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                let v = (0..k).fold(0, |acc, i| f.add(acc, f.mul(a.get(r, i), b.get(i, c))));
                m.set(r, c, v);
            }
        }
        m
    }

    #[test]
    fn identity_and_zero() {
        let f = PrimeField::default();
        assert_eq!(FpMatrix::identity(f, 3).rank(), 3);
        assert_eq!(FpMatrix::zeros(f, 4, 6).rank(), 0);
        assert!(FpMatrix::identity(f, 3).kernel_basis().is_empty());
        assert_eq!(FpMatrix::identity(f, 3).random_kernel_vector(1), Err(Error::EmptyKernel));
    }

    #[test]
    fn coordinate_hyperplane_kernel() {
        let f = PrimeField::default();
        let m = FpMatrix::from_rows(f, &[vec![1, 0, 0]]).unwrap();
        let k = m.kernel_basis();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(v[0], 0);
        }
        let span = FpMatrix::from_rows(f, &k).unwrap();
        assert_eq!(span.rank(), 2);
    }

    #[test]
    fn zero_matrix_kernel_vector_is_deterministic() {
        let f = PrimeField::default();
        let z = FpMatrix::zeros(f, 2, 2);
        let v = z.random_kernel_vector(1).unwrap();
        assert!(v.iter().any(|&x| x != 0));
        assert_eq!(v, z.random_kernel_vector(1).unwrap());
    }

    #[test]
    fn determinant_matches_rank() {
        let f = PrimeField::default();
        let m = random_matrix(f, 6, 6, 9);
        assert_ne!(m.determinant(), 0);
        assert_eq!(low_rank(f, 6, 6, 4, 2).determinant(), 0);
        let m = FpMatrix::from_rows(f, &[vec![2, 1], vec![7, 4]]).unwrap();
        assert_eq!(m.determinant(), 1);
    }

    proptest! {
        #[test]
        fn rank_transpose_and_kernel(rows in 1usize..9, cols in 1usize..9, k in 0usize..6, seed in any::<u64>()) {
            let f = PrimeField::default();
            let m = low_rank(f, rows, cols, k, seed);
            let r = m.rank();
            prop_assert!(r <= k.min(rows).min(cols));
            prop_assert_eq!(r, m.transpose().rank());
            let ker = m.kernel_basis();
            prop_assert_eq!(ker.len(), cols - r);
            for v in &ker {
                prop_assert!(m.mul_vec(v).iter().all(|&x| x == 0));
            }
            if r < cols {
                let v = m.random_kernel_vector(seed).unwrap();
                prop_assert!(m.mul_vec(&v).iter().all(|&x| x == 0));
            }
        }

        #[test]
        fn rank_is_permutation_invariant(seed in any::<u64>(), k in 0usize..5) {
            let f = PrimeField::default();
            let m = low_rank(f, 5, 7, k, seed);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut rp: Vec<usize> = (0..5).collect();
            let mut cp: Vec<usize> = (0..7).collect();
            use rand::seq::SliceRandom;
            rp.shuffle(&mut rng);
            cp.shuffle(&mut rng);
            let mut q = FpMatrix::zeros(f, 5, 7);
            for (r, &pr) in rp.iter().enumerate() {
                for (c, &pc) in cp.iter().enumerate() {
                    q.set(r, c, m.get(pr, pc));
                }
            }
            prop_assert_eq!(m.rank(), q.rank());
        }
    }
}
