use num_complex::Complex;

use super::{KernelError, Matrix, Real};

/// Inputs with a larger 1-norm are rejected by [`expm`].
pub const EXPM_NORM_GUARD: f64 = 1e4;

// Degree-13 Padé numerator coefficients.
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

/// Matrix exponential by scaling and squaring with a [13/13] Padé approximant.
pub fn expm<T: Real>(m: &Matrix<T>) -> Result<Matrix<T>, KernelError> {
    let n = m.dim();
    let norm = m.norm_one().to_f64();
    if !norm.is_finite() || norm > EXPM_NORM_GUARD {
        return Err(KernelError::NormGuard {
            norm,
            limit: EXPM_NORM_GUARD,
        });
    }
    let squarings = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let a = m.scale_real(T::lit(2f64.powi(-squarings)));

    let b: Vec<T> = PADE13.iter().map(|&x| T::lit(x)).collect();
    let ident = Matrix::identity(n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let comb = |c6: T, c4: T, c2: T, c0: T| -> Matrix<T> {
        let mut out = a6.scale_real(c6);
        out += &a4.scale_real(c4);
        out += &a2.scale_real(c2);
        out += &ident.scale_real(c0);
        out
    };
    let u_inner = &a6 * &comb(b[13], b[11], b[9], T::zero());
    let u_tail = comb(b[7], b[5], b[3], b[1]);
    let u = &a * &(&u_inner + &u_tail);
    let v_inner = &a6 * &comb(b[12], b[10], b[8], T::zero());
    let v = &v_inner + &comb(b[6], b[4], b[2], b[0]);

    let mut r = solve(&(&v - &u), &(&v + &u))?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    if !r.is_finite() {
        return Err(KernelError::NonFinite("expm"));
    }
    Ok(r)
}

/// Solves `a X = b` by LU with partial pivoting.
pub fn solve<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>, KernelError> {
    let n = a.dim();
    if b.dim() != n {
        return Err(KernelError::DimMismatch {
            left: n,
            right: b.dim(),
        });
    }
    let mut lu = a.clone();
    let mut x = b.clone();
    let zero = Complex::new(T::zero(), T::zero());
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| lu[(i, col)].norm().partial_cmp(&lu[(j, col)].norm()).unwrap())
            .unwrap();
        if lu[(pivot, col)].norm() <= T::min_positive_value() {
            return Err(KernelError::Singular);
        }
        if pivot != col {
            for k in 0..n {
                let tmp = lu[(col, k)];
                lu[(col, k)] = lu[(pivot, k)];
                lu[(pivot, k)] = tmp;
                let tmp = x[(col, k)];
                x[(col, k)] = x[(pivot, k)];
                x[(pivot, k)] = tmp;
            }
        }
        let d = lu[(col, col)];
        for row in (col + 1)..n {
            let f = lu[(row, col)] / d;
            if f == zero {
                continue;
            }
            for k in col..n {
                let t = lu[(col, k)];
                lu[(row, k)] -= f * t;
            }
            for k in 0..n {
                let t = x[(col, k)];
                x[(row, k)] -= f * t;
            }
        }
    }
    for col in (0..n).rev() {
        let d = lu[(col, col)];
        for k in 0..n {
            let mut acc = x[(col, k)];
            for j in (col + 1)..n {
                acc -= lu[(col, j)] * x[(j, k)];
            }
            x[(col, k)] = acc / d;
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::frobenius_distance;
    use num_complex::Complex64;

    #[test]
    fn exp_of_zero_is_identity() {
        let e = expm(&Matrix::<f64>::zeros(4)).unwrap();
        assert!(frobenius_distance(&e, &Matrix::identity(4)).unwrap() < 1e-15);
    }

    #[test]
    fn pauli_rotation_by_half_pi() {
        let x = Matrix::from_vec(
            2,
            vec![
                Complex64::new(0., 0.),
                Complex64::new(1., 0.),
                Complex64::new(1., 0.),
                Complex64::new(0., 0.),
            ],
        )
        .unwrap();
        let gen = x.scale(Complex64::new(0.0, -std::f64::consts::FRAC_PI_2));
        let e = expm(&gen).unwrap();
        let want = x.scale(Complex64::new(0.0, -1.0));
        assert!(frobenius_distance(&e, &want).unwrap() < 1e-14);
    }

    #[test]
    fn diagonal_exponential() {
        let d = Matrix::<f64>::from_diag(&[1.0, -2.0, 30.0]);
        let e = expm(&d).unwrap();
        for (k, x) in [1.0f64, -2.0, 30.0].iter().enumerate() {
            assert!((e[(k, k)].re / x.exp() - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn rejects_huge_norm() {
        let d = Matrix::<f64>::from_diag(&[2e4, 0.0]);
        assert!(matches!(expm(&d), Err(KernelError::NormGuard { .. })));
    }

    #[test]
    fn solve_detects_singularity() {
        assert_eq!(
            solve(&Matrix::<f64>::zeros(2), &Matrix::identity(2)),
            Err(KernelError::Singular)
        );
    }

    #[test]
    fn solve_recovers_inverse() {
        let a = Matrix::from_vec(
            2,
            vec![
                Complex64::new(0., 0.),
                Complex64::new(2., 1.),
                Complex64::new(1., 0.),
                Complex64::new(3., 0.),
            ],
        )
        .unwrap();
        let inv = solve(&a, &Matrix::identity(2)).unwrap();
        assert!(frobenius_distance(&(&a * &inv), &Matrix::identity(2)).unwrap() < 1e-15);
    }
}
