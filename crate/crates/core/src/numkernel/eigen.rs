use num_complex::Complex;

use super::{KernelError, Matrix, Real};

const MAX_SWEEPS: usize = 64;

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors
/// stored as columns.
#[derive(Clone, Debug)]
pub struct HermitianEigen<T> {
    pub eigenvalues: Vec<T>,
    pub eigenvectors: Matrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    pub fn eigenvector(&self, k: usize) -> Vec<Complex<T>> {
        let n = self.eigenvectors.dim();
        (0..n).map(|i| self.eigenvectors[(i, k)]).collect()
    }

    /// `V diag(λ) V^dag`
    pub fn reconstruct(&self) -> Matrix<T> {
        let v = &self.eigenvectors;
        let vl = Matrix::from_fn(v.dim(), |i, j| v[(i, j)] * self.eigenvalues[j]);
        &vl * &v.adjoint()
    }
}

/// Cyclic complex Jacobi eigensolver for Hermitian matrices.
///
/// Rejects inputs with `||h - h^dag||_F > tol * ||h||_F`; the Hermitian part
/// is diagonalised. No rotation is applied inside degenerate eigenspaces, so
/// callers must not rely on the basis chosen there.
pub fn eig_hermitian<T: Real>(h: &Matrix<T>, tol: T) -> Result<HermitianEigen<T>, KernelError> {
    let n = h.dim();
    let scale = h.frobenius_norm();
    let asym = h.hermitian_defect();
    if asym > tol * scale {
        let relative = if scale > T::zero() { asym / scale } else { asym };
        return Err(KernelError::NotHermitian {
            asymmetry: asym.to_f64(),
            relative: relative.to_f64(),
        });
    }

    let half = T::lit(0.5);
    let mut a = Matrix::from_fn(n, |i, j| (h[(i, j)] + h[(j, i)].conj()) * half);
    for i in 0..n {
        a[(i, i)].im = T::zero();
    }
    let mut v = Matrix::identity(n);
    let threshold = T::epsilon() * scale;

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off <= threshold || off == T::zero() {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(KernelError::NoConvergence {
                sweeps,
                off: off.to_f64(),
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
    let eigenvalues = order.iter().map(|&k| a[(k, k)].re).collect();
    let eigenvectors = Matrix::from_fn(n, |i, j| v[(i, order[j])]);
    if !eigenvectors.is_finite() {
        return Err(KernelError::NonFinite("eig_hermitian"));
    }
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm<T: Real>(a: &Matrix<T>) -> T {
    let n = a.dim();
    let mut acc = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Zeroes `a[p][q]` with the unitary `G = [[c, s e], [-s e*, c]]` on rows and
/// columns `p, q`, where `e` is the phase of `a[p][q]`.
fn rotate<T: Real>(a: &mut Matrix<T>, v: &mut Matrix<T>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag <= T::min_positive_value() {
        return;
    }
    let e = apq / mag;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (T::lit(2.0) * mag);
    let t = if theta >= T::zero() {
        T::one() / (theta + theta.hypot(T::one()))
    } else {
        -T::one() / (-theta + theta.hypot(T::one()))
    };
    let c = T::one() / t.hypot(T::one());
    let s = t * c;
    let cc = Complex::new(c, T::zero());
    let se = e * s;
    let se_conj = e.conj() * s;
    let n = a.dim();

    // A <- A G
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = cc * akp - se_conj * akq;
        a[(k, q)] = se * akp + cc * akq;
    }
    // A <- G^dag A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = cc * apk - se * aqk;
        a[(q, k)] = se_conj * apk + cc * aqk;
    }
    a[(p, q)] = Complex::new(T::zero(), T::zero());
    a[(q, p)] = Complex::new(T::zero(), T::zero());
    a[(p, p)].im = T::zero();
    a[(q, q)].im = T::zero();

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = cc * vkp - se_conj * vkq;
        v[(k, q)] = se * vkp + cc * vkq;
    }
}
