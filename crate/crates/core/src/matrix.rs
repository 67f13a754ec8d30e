//! Dense complex matrices and vectors.
//!
//! `ComplexMatrix` is the universal operand of the crate: a dense,
//! row-major matrix of `Complex<f64>` entries. Construction validates
//! shape and finiteness; arithmetic on validated values panics on shape
//! mismatch (public entry points validate shapes up front and return
//! [`Error`](crate::Error) instead).

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix, entries stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, validating shape and finiteness.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch {
                context: format!("matrix dimensions must be positive (got {rows}x{cols})"),
            });
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: format!(
                    "expected {rows}x{cols} = {} entries, got {}",
                    rows * cols,
                    entries.len()
                ),
            });
        }
        if let Some(k) = entries
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite {
                context: format!("entry {} of {rows}x{cols} matrix is not finite", k),
            });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from nested rows of complex entries.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch {
                context: "rows have unequal lengths".into(),
            });
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Builds a real matrix from nested rows of `f64`.
    pub fn from_real_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::from_rows(
            rows.into_iter()
                .map(|row| row.into_iter().map(|x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Complex64::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::ONE;
        }
        m
    }

    /// `c * I` of size `n`.
    pub fn scalar(n: usize, c: Complex64) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c;
        }
        m
    }

    /// Diagonal matrix from real entries.
    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self {
            rows,
            cols,
            entries,
        }
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

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Sum of diagonal entries. Errors on non-square input.
    pub fn trace(&self) -> Result<Complex64> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok((0..self.rows).map(|i| self[(i, i)]).sum())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z * c).collect(),
        }
    }

    pub fn scale_re(&self, x: f64) -> Self {
        self.scale(Complex64::new(x, 0.0))
    }

    /// Largest entry modulus. Zero for the zero matrix.
    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    /// Entrywise (Frobenius) norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.frobenius_norm_sq().sqrt()
    }

    /// Sum of squared entry moduli.
    pub fn frobenius_norm_sq(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Largest modulus of the entrywise difference to `other`.
    /// Panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "max_abs_diff requires equal shapes"
        );
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(0.0, |acc, (a, b)| acc.max((a - b).norm()))
    }

    /// Largest entry modulus of `A - A*`; zero iff the matrix is exactly Hermitian.
    pub fn hermitian_deviation(&self) -> Result<f64> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            dev = dev.max(self[(i, i)].im.abs() * 2.0);
            for j in (i + 1)..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        Ok(dev)
    }

    /// `(A + A*) / 2`. The diagonal comes out exactly real.
    pub fn hermitian_part(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(self[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                let z = (self[(i, j)] + self[(j, i)].conj()).scale(0.5);
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        Ok(m)
    }

    /// Matrix-vector product. Panics on shape mismatch.
    pub fn apply(&self, v: &Vector) -> Vector {
        assert_eq!(self.cols, v.dim(), "apply requires cols == vector dim");
        let mut out = vec![Complex64::ZERO; self.rows];
        for i in 0..self.rows {
            let mut acc = Complex64::ZERO;
            for j in 0..self.cols {
                acc += self[(i, j)] * v[j];
            }
            out[i] = acc;
        }
        Vector::from_entries(out)
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "matrix addition requires equal shapes"
        );
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "matrix subtraction requires equal shapes"
        );
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            self.cols, rhs.rows,
            "matrix product requires lhs cols == rhs rows"
        );
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

/// Dense complex vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector {
    entries: Vec<Complex64>,
}

impl Vector {
    /// Validating constructor; rejects empty and non-finite input.
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::DimensionMismatch {
                context: "vector dimension must be positive".into(),
            });
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite {
                context: "vector entry is not finite".into(),
            });
        }
        Ok(Self { entries })
    }

    pub(crate) fn from_entries(entries: Vec<Complex64>) -> Self {
        Self { entries }
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            entries: vec![Complex64::ZERO; dim],
        }
    }

    /// Standard basis vector `e_k`.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index out of range");
        let mut v = Self::zeros(dim);
        v.entries[k] = Complex64::ONE;
        v
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Inner product, linear in the first argument: `<u, v> = sum u_k conj(v_k)`.
    pub fn inner(&self, other: &Vector) -> Complex64 {
        assert_eq!(self.dim(), other.dim(), "inner product dimension mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a * b.conj())
            .sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            entries: self.entries.iter().map(|z| z * c).collect(),
        }
    }
}

impl std::ops::Index<usize> for Vector {
    type Output = Complex64;
    #[inline]
    fn index(&self, k: usize) -> &Complex64 {
        &self.entries[k]
    }
}

impl Add for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        assert_eq!(self.dim(), rhs.dim(), "vector addition dimension mismatch");
        Vector {
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        assert_eq!(
            self.dim(),
            rhs.dim(),
            "vector subtraction dimension mismatch"
        );
        Vector {
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// Rank-one operator `x (x) y`: applying the result to `z` gives `<z, y> x`.
pub fn rank_one(x: &Vector, y: &Vector) -> ComplexMatrix {
    ComplexMatrix::from_fn(x.dim(), y.dim(), |i, j| x[i] * y[j].conj())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn adjoint_conjugates_1x1() {
        let a = ComplexMatrix::from_rows(vec![vec![c(0.0, 1.0)]]).unwrap();
        assert_eq!(a.adjoint()[(0, 0)], c(0.0, -1.0));
    }

    #[test]
    fn adjoint_transposes_real() {
        let a = ComplexMatrix::from_real_rows(vec![vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let expected =
            ComplexMatrix::from_real_rows(vec![vec![1.0, 3.0], vec![2.0, 4.0]]).unwrap();
        assert_eq!(a.adjoint(), expected);
    }

    #[test]
    fn adjoint_is_involution_bitwise() {
        // fixed pseudo-random 4x3 with nonzero imaginary parts
        let a = ComplexMatrix::from_fn(4, 3, |i, j| {
            c(
                ((i * 7 + j * 3) as f64).sin(),
                ((i + 5 * j) as f64).cos() * 0.7,
            )
        });
        assert_eq!(a.adjoint().adjoint(), a);
    }

    #[test]
    fn rank_one_examples() {
        let x = Vector::from_real(&[1.0, 0.0]).unwrap();
        let y = Vector::from_real(&[0.0, 1.0]).unwrap();
        let m = rank_one(&x, &y);
        assert_eq!(
            m,
            ComplexMatrix::from_real_rows(vec![vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap()
        );
        let p = rank_one(&x, &x);
        assert_eq!(
            p,
            ComplexMatrix::from_real_rows(vec![vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap()
        );
    }

    #[test]
    fn rank_one_action_matches_inner_product() {
        let x = Vector::new((0..5).map(|k| c(0.3 * k as f64, 1.0 - k as f64)).collect()).unwrap();
        let y = Vector::new((0..5).map(|k| c((k as f64).cos(), 0.2 * k as f64)).collect()).unwrap();
        let z = Vector::new((0..5).map(|k| c(0.5 - k as f64, (k as f64).sin())).collect()).unwrap();
        let lhs = rank_one(&x, &y).apply(&z);
        let rhs = x.scale(z.inner(&y));
        let diff: f64 = lhs
            .entries()
            .iter()
            .zip(rhs.entries())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(diff <= 1e-14 * x.norm() * y.norm() * z.norm());
    }

    #[test]
    fn trace_examples() {
        assert_eq!(
            ComplexMatrix::identity(3).trace().unwrap(),
            c(3.0, 0.0)
        );
        assert_eq!(
            ComplexMatrix::diagonal(&[1.0, -1.0]).trace().unwrap(),
            c(0.0, 0.0)
        );
        let a = ComplexMatrix::from_fn(5, 5, |i, j| c((i * j) as f64 * 0.1, (i + j) as f64 * 0.2));
        assert_eq!(a.adjoint().trace().unwrap(), a.trace().unwrap().conj());
        let wide = ComplexMatrix::zeros(2, 3);
        assert!(matches!(wide.trace(), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn constructor_rejects_bad_input() {
        assert!(matches!(
            ComplexMatrix::new(2, 2, vec![Complex64::ZERO; 3]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            ComplexMatrix::new(1, 1, vec![c(f64::NAN, 0.0)]),
            Err(Error::NonFinite { .. })
        ));
        assert!(matches!(
            ComplexMatrix::new(0, 1, vec![]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn hermitian_part_and_deviation() {
        let a = ComplexMatrix::from_rows(vec![
            vec![c(1.0, 0.5), c(2.0, 1.0)],
            vec![c(2.0, -1.0), c(3.0, 0.0)],
        ])
        .unwrap();
        // off-diagonal already conjugate-symmetric; deviation comes from diag imag
        assert!((a.hermitian_deviation().unwrap() - 1.0).abs() < 1e-15);
        let h = a.hermitian_part().unwrap();
        assert_eq!(h.hermitian_deviation().unwrap(), 0.0);
        assert_eq!(h[(0, 0)], c(1.0, 0.0));
    }
}
