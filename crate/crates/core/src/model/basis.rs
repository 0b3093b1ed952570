use num_complex::Complex64;

use crate::{CMatrix, Ket};

/// Labels of the coupled-spin eigenbasis `|s12, s, m>`, in storage order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisLabel {
    Ground,
    Excited,
    W,
    WPrime,
    Psi1,
    Psi1Prime,
    Psi2,
    Psi2Prime,
}

impl BasisLabel {
    pub const ALL: [BasisLabel; 8] = [
        BasisLabel::Ground,
        BasisLabel::Excited,
        BasisLabel::W,
        BasisLabel::WPrime,
        BasisLabel::Psi1,
        BasisLabel::Psi1Prime,
        BasisLabel::Psi2,
        BasisLabel::Psi2Prime,
    ];

    /// The four states spanned by the ideal entangling dynamics.
    pub const SYMMETRIC: [BasisLabel; 4] = [
        BasisLabel::Ground,
        BasisLabel::Excited,
        BasisLabel::W,
        BasisLabel::WPrime,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            BasisLabel::Ground => "000",
            BasisLabel::Excited => "111",
            BasisLabel::W => "W",
            BasisLabel::WPrime => "W'",
            BasisLabel::Psi1 => "psi1",
            BasisLabel::Psi1Prime => "psi1'",
            BasisLabel::Psi2 => "psi2",
            BasisLabel::Psi2Prime => "psi2'",
        }
    }
}

#[derive(Clone, Debug)]
pub struct BasisState {
    pub label: BasisLabel,
    pub s12: f64,
    pub s: f64,
    pub m: f64,
    pub vector: Ket,
}

#[derive(Clone, Debug)]
pub struct SymmetricBasis {
    states: Vec<BasisState>,
}

impl SymmetricBasis {
    pub fn states(&self) -> &[BasisState] {
        &self.states
    }

    pub fn ket(&self, label: BasisLabel) -> &Ket {
        &self.states[label.index()].vector
    }

    /// `|a><b|`
    pub fn transition(&self, a: BasisLabel, b: BasisLabel) -> CMatrix {
        CMatrix::outer(self.ket(a), self.ket(b))
    }

    pub fn projector(&self, label: BasisLabel) -> CMatrix {
        self.transition(label, label)
    }

    /// Unitary whose columns are the basis vectors in storage order.
    pub fn change_of_basis(&self) -> CMatrix {
        CMatrix::from_fn(8, |i, j| self.states[j].vector[i])
    }

    /// Populations `<n|ρ|n>` for every basis state.
    pub fn populations(&self, rho: &CMatrix) -> [f64; 8] {
        let mut out = [0.0; 8];
        for (o, st) in out.iter_mut().zip(&self.states) {
            *o = rho.sandwich(&st.vector, &st.vector).re;
        }
        out
    }
}

/// Computational basis vector from a bit string such as `"011"`.
pub fn computational_ket(bits: &str) -> Ket {
    let idx = usize::from_str_radix(bits, 2).expect("binary label");
    let mut v = vec![Complex64::new(0.0, 0.0); 8];
    v[idx] = Complex64::new(1.0, 0.0);
    v
}

fn combination(terms: &[(f64, &str)], norm: f64) -> Ket {
    let mut v = vec![Complex64::new(0.0, 0.0); 8];
    for &(c, bits) in terms {
        let e = computational_ket(bits);
        for (x, y) in v.iter_mut().zip(e) {
            *x += y * (c / norm);
        }
    }
    v
}

pub fn symmetric_basis() -> SymmetricBasis {
    let s3 = 3f64.sqrt();
    let s2 = 2f64.sqrt();
    let s6 = 6f64.sqrt();
    let st = |label, s12, s, m, vector| BasisState {
        label,
        s12,
        s,
        m,
        vector,
    };
    let states = vec![
        st(BasisLabel::Ground, 1.0, 1.5, -1.5, computational_ket("000")),
        st(BasisLabel::Excited, 1.0, 1.5, 1.5, computational_ket("111")),
        st(
            BasisLabel::W,
            1.0,
            1.5,
            -0.5,
            combination(&[(1.0, "100"), (1.0, "010"), (1.0, "001")], s3),
        ),
        st(
            BasisLabel::WPrime,
            1.0,
            1.5,
            0.5,
            combination(&[(1.0, "011"), (1.0, "101"), (1.0, "110")], s3),
        ),
        st(
            BasisLabel::Psi1,
            0.0,
            0.5,
            -0.5,
            combination(&[(1.0, "100"), (-1.0, "010")], s2),
        ),
        st(
            BasisLabel::Psi1Prime,
            0.0,
            0.5,
            0.5,
            combination(&[(1.0, "011"), (-1.0, "101")], s2),
        ),
        st(
            BasisLabel::Psi2,
            1.0,
            0.5,
            -0.5,
            combination(&[(1.0, "100"), (1.0, "010"), (-2.0, "001")], s6),
        ),
        st(
            BasisLabel::Psi2Prime,
            1.0,
            0.5,
            0.5,
            combination(&[(1.0, "011"), (1.0, "101"), (-2.0, "110")], s6),
        ),
    ];
    SymmetricBasis { states }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{collective_spin, Axis};
    use crate::numkernel::{frobenius_distance, inner};

    #[test]
    fn psi2_prime_components() {
        let b = symmetric_basis();
        let v = b.ket(BasisLabel::Psi2Prime);
        let s6 = 6f64.sqrt();
        assert!((v[0b011].re - 1.0 / s6).abs() < 1e-15);
        assert!((v[0b101].re - 1.0 / s6).abs() < 1e-15);
        assert!((v[0b110].re + 2.0 / s6).abs() < 1e-15);
        assert_eq!(v.iter().filter(|z| z.norm() > 0.0).count(), 3);
    }

    #[test]
    fn gram_matrix_is_identity() {
        let b = symmetric_basis();
        let u = b.change_of_basis();
        let gram = &u.adjoint() * &u;
        assert!(frobenius_distance(&gram, &CMatrix::identity(8)).unwrap() < 1e-12);
    }

    #[test]
    fn quantum_numbers_match_collective_spin() {
        let b = symmetric_basis();
        let sz = collective_spin(Axis::Z);
        let sx = collective_spin(Axis::X);
        let sy = collective_spin(Axis::Y);
        let s2 = &(&(&sx * &sx) + &(&sy * &sy)) + &(&sz * &sz);
        for st in b.states() {
            let v = &st.vector;
            let m = inner(v, &sz.apply(v)).re;
            let ss = inner(v, &s2.apply(v)).re;
            assert!((m - st.m).abs() < 1e-12, "{:?}", st.label);
            assert!((ss - st.s * (st.s + 1.0)).abs() < 1e-12, "{:?}", st.label);
        }
    }

    #[test]
    fn sz_on_w_prime_by_brute_force() {
        // S_z = Σ σz/2 with σz = ±1 per bit: each term of W' has two excited bits.
        let b = symmetric_basis();
        let w = b.ket(BasisLabel::WPrime);
        let mut out = [Complex64::new(0.0, 0.0); 8];
        for (idx, amp) in w.iter().enumerate() {
            let ones = idx.count_ones() as f64;
            out[idx] = amp * (ones - (3.0 - ones)) / 2.0;
        }
        for (o, a) in out.iter().zip(w) {
            assert!((o - a * 0.5).norm() < 1e-15);
        }
        let sz = collective_spin(Axis::Z);
        let via_op = sz.apply(w);
        for (o, a) in out.iter().zip(via_op) {
            assert!((o - a).norm() < 1e-15);
        }
    }
}
