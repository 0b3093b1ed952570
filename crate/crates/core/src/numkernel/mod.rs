//! Dense complex linear algebra for small square operators.
//!
//! Everything here is generic over the real scalar type [`Real`] (implemented
//! for `f32` and `f64`); the physics layers use the `f64` aliases exported at
//! the crate root. Matrices are stored row-major as `Complex<T>`.

mod eigen;
mod expm;

pub use eigen::{eig_hermitian, HermitianEigen};
pub use expm::{expm, solve, EXPM_NORM_GUARD};

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use num_complex::Complex;
use num_traits::{Float, FloatConst, NumAssign};
use thiserror::Error;

/// Real scalar backing the complex entries.
pub trait Real:
    Float + FloatConst + NumAssign + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into this scalar (rounding for `f32`).
    fn lit(x: f64) -> Self;
    fn to_f64(self) -> f64;
}

impl Real for f32 {
    fn lit(x: f64) -> Self {
        x as f32
    }
    fn to_f64(self) -> f64 {
        self as f64
    }
}

impl Real for f64 {
    fn lit(x: f64) -> Self {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
    #[error("matrix is not Hermitian: ||H - H^dag||_F = {asymmetry:e} (relative {relative:e})")]
    NotHermitian { asymmetry: f64, relative: f64 },
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },
    #[error("1-norm {norm:e} exceeds the exponential guard {limit:e}")]
    NormGuard { norm: f64, limit: f64 },
    #[error("singular matrix in linear solve")]
    Singular,
    #[error("non-finite entry produced by {0}")]
    NonFinite(&'static str),
    #[error("entry count {len} is not a square of dimension {dim}")]
    BadShape { dim: usize, len: usize },
}

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex::new(T::zero(), T::zero()); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// Builds a matrix from row-major entries.
    pub fn from_vec(dim: usize, data: Vec<Complex<T>>) -> Result<Self, KernelError> {
        if data.len() != dim * dim {
            return Err(KernelError::BadShape {
                dim,
                len: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    /// Real diagonal matrix.
    pub fn from_diag(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex::new(d, T::zero());
        }
        m
    }

    /// `|ket><bra|`
    pub fn outer(ket: &[Complex<T>], bra: &[Complex<T>]) -> Self {
        assert_eq!(ket.len(), bra.len(), "outer product of unequal lengths");
        Self::from_fn(ket.len(), |i, j| ket[i] * bra[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * factor).collect(),
        }
    }

    pub fn scale_real(&self, factor: T) -> Self {
        self.scale(Complex::new(factor, T::zero()))
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).map(|i| self[(i, i)]).fold(Complex::new(T::zero(), T::zero()), |a, b| a + b)
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> T {
        (0..self.dim)
            .map(|j| (0..self.dim).map(|i| self[(i, j)].norm()).sum::<T>())
            .fold(T::zero(), T::max)
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `||M - M^dag||_F`
    pub fn hermitian_defect(&self) -> T {
        let mut acc = T::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matmul dimension mismatch");
        let n = self.dim;
        let zero = Complex::new(T::zero(), T::zero());
        let mut out = vec![zero; n * n];
        for i in 0..n {
            let row = &mut out[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == zero {
                    continue;
                }
                let rrow = &rhs.data[k * n..(k + 1) * n];
                for (o, &b) in row.iter_mut().zip(rrow) {
                    *o += a * b;
                }
            }
        }
        Self { dim: n, data: out }
    }

    pub fn apply(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(self.dim, v.len(), "matrix-vector dimension mismatch");
        let n = self.dim;
        (0..n)
            .map(|i| {
                self.data[i * n..(i + 1) * n]
                    .iter()
                    .zip(v)
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    /// `<u| M |v>`
    pub fn sandwich(&self, u: &[Complex<T>], v: &[Complex<T>]) -> Complex<T> {
        inner(u, &self.apply(v))
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = Complex<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.dim + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.dim + j]
    }
}

impl<T: Real> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: Self) -> Matrix<T> {
        self.matmul(rhs)
    }
}

impl<T: Real> Add for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: Self) -> Matrix<T> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<T: Real> Sub for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: Self) -> Matrix<T> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<T: Real> Neg for &Matrix<T> {
    type Output = Matrix<T>;
    fn neg(self) -> Matrix<T> {
        self.scale_real(-T::one())
    }
}

impl<T: Real> AddAssign<&Matrix<T>> for Matrix<T> {
    fn add_assign(&mut self, rhs: &Matrix<T>) {
        assert_eq!(self.dim, rhs.dim, "addition dimension mismatch");
        for (a, &b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

impl<T: Real> SubAssign<&Matrix<T>> for Matrix<T> {
    fn sub_assign(&mut self, rhs: &Matrix<T>) {
        assert_eq!(self.dim, rhs.dim, "subtraction dimension mismatch");
        for (a, &b) in self.data.iter_mut().zip(&rhs.data) {
            *a -= b;
        }
    }
}

/// Tensor product with `a` as the leftmost (most significant) factor.
pub fn kron<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    let (na, nb) = (a.dim, b.dim);
    Matrix::from_fn(na * nb, |i, j| a[(i / nb, j / nb)] * b[(i % nb, j % nb)])
}

/// `[a, b] = ab - ba`
pub fn commutator<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    &(a * b) - &(b * a)
}

pub fn frobenius_distance<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> Result<T, KernelError> {
    if a.dim != b.dim {
        return Err(KernelError::DimMismatch {
            left: a.dim,
            right: b.dim,
        });
    }
    Ok(a
        .data
        .iter()
        .zip(&b.data)
        .map(|(&x, &y)| (x - y).norm_sqr())
        .sum::<T>()
        .sqrt())
}

/// `<a|b>`, antilinear in `a`.
pub fn inner<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter()
        .zip(b)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| acc + x.conj() * y)
}

pub fn vector_norm<T: Real>(v: &[Complex<T>]) -> T {
    v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sigma_z() -> Matrix<f64> {
        Matrix::from_diag(&[1.0, -1.0])
    }

    fn sigma_x() -> Matrix<f64> {
        Matrix::from_vec(2, vec![c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]).unwrap()
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let i2 = Matrix::<f64>::identity(2);
        assert_eq!(kron(&i2, &i2), Matrix::identity(4));
    }

    #[test]
    fn kron_sigma_z_identity() {
        let k = kron(&sigma_z(), &Matrix::identity(2));
        assert_eq!(k, Matrix::from_diag(&[1.0, 1.0, -1.0, -1.0]));
    }

    #[test]
    fn kron_flips_first_two_qubits() {
        let xxi = kron(&kron(&sigma_x(), &sigma_x()), &Matrix::identity(2));
        // brute force: flipping bits 2 and 1 (MSB first) of every basis index
        for idx in 0..8usize {
            let mut e = vec![c(0., 0.); 8];
            e[idx] = c(1., 0.);
            let out = xxi.apply(&e);
            let flipped = idx ^ 0b110;
            for (k, z) in out.iter().enumerate() {
                let want = if k == flipped { 1.0 } else { 0.0 };
                assert_eq!(*z, c(want, 0.));
            }
        }
    }

    #[test]
    fn frobenius_distance_cases() {
        let i = Matrix::<f64>::identity(2);
        assert_eq!(frobenius_distance(&i, &i).unwrap(), 0.0);
        let d = frobenius_distance(&sigma_z(), &(-&sigma_z())).unwrap();
        assert!((d - 2.0 * 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(
            frobenius_distance(&i, &Matrix::identity(4)),
            Err(KernelError::DimMismatch { left: 2, right: 4 })
        );
    }

    #[test]
    fn from_vec_rejects_bad_shape() {
        assert!(Matrix::<f64>::from_vec(2, vec![c(0., 0.); 3]).is_err());
    }

    #[test]
    fn hermitian_defect_and_norms() {
        let mut m = sigma_x();
        assert_eq!(m.hermitian_defect(), 0.0);
        m[(0, 1)] = c(0., 1.);
        assert!(m.hermitian_defect() > 1.0);
        assert_eq!(sigma_z().norm_one(), 1.0);
        assert_eq!(sigma_z().trace(), c(0., 0.));
    }

    #[test]
    fn generic_over_f32() {
        let a = Matrix::<f32>::identity(2);
        let b = kron(&a, &a);
        assert_eq!(b.trace().re, 4.0f32);
    }
}
