use num_complex::Complex64;

use super::basis::{symmetric_basis, BasisLabel};
use super::{ModelError, ProtocolParams};
use crate::numkernel::kron;
use crate::{CMatrix, Ket};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
    /// Raising operator `|1><0|`.
    Plus,
    /// Lowering operator `|0><1|`.
    Minus,
}

/// Which form of the entangling Hamiltonian to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CouplingMode {
    /// Pairwise XY + ZZ couplings term by term.
    Literal,
    /// Diagonal in the coupled-spin basis with the tabulated eigenenergies.
    #[default]
    Spectral,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Single-qubit operator in the `(|0>, |1>)` basis.
pub fn single_qubit(axis: Axis) -> CMatrix {
    let z = c(0., 0.);
    let entries = match axis {
        Axis::X => vec![z, c(1., 0.), c(1., 0.), z],
        Axis::Y => vec![z, c(0., 1.), c(0., -1.), z],
        Axis::Z => vec![c(-1., 0.), z, z, c(1., 0.)],
        Axis::Plus => vec![z, z, c(1., 0.), z],
        Axis::Minus => vec![z, c(1., 0.), z, z],
    };
    CMatrix::from_vec(2, entries).expect("2x2")
}

pub(crate) fn embed(qubit: usize, op: &CMatrix) -> CMatrix {
    let id = CMatrix::identity(2);
    let factors: Vec<&CMatrix> = (1..=3).map(|q| if q == qubit { op } else { &id }).collect();
    kron(&kron(factors[0], factors[1]), factors[2])
}

/// Pauli or ladder operator acting on `qubit` (1-based) of the three-qubit register.
pub fn pauli_op(qubit: usize, axis: Axis) -> Result<CMatrix, ModelError> {
    if !(1..=3).contains(&qubit) {
        return Err(ModelError::QubitIndex(qubit));
    }
    Ok(embed(qubit, &single_qubit(axis)))
}

/// Collective spin component `S_a = Σ_j σ_a^j / 2`.
pub fn collective_spin(axis: Axis) -> CMatrix {
    let s = single_qubit(axis).scale_real(0.5);
    let mut out = CMatrix::zeros(8);
    for q in 1..=3 {
        out += &embed(q, &s);
    }
    out
}

/// `(ω/2)σz + (ω/2)(e^{iβ}σ- + e^{-iβ}σ+)` on one qubit.
pub fn rotation_qubit_hamiltonian(omega: f64, beta: f64) -> CMatrix {
    let phase = Complex64::from_polar(1.0, beta);
    let mut h = single_qubit(Axis::Z).scale_real(omega / 2.0);
    h += &single_qubit(Axis::Minus).scale(phase * (omega / 2.0));
    h += &single_qubit(Axis::Plus).scale(phase.conj() * (omega / 2.0));
    h
}

pub fn build_rotation_hamiltonian(p: &ProtocolParams, beta: f64) -> CMatrix {
    let h1 = rotation_qubit_hamiltonian(p.omega, beta);
    let mut out = CMatrix::zeros(8);
    for q in 1..=3 {
        out += &embed(q, &h1);
    }
    out
}

/// Energies of the coupled-spin eigenstates, in [`BasisLabel`] order.
pub fn spectral_energies(p: &ProtocolParams) -> [f64; 8] {
    let (w, g, gt) = (p.omega, p.g, p.gtilde);
    let s3 = 3f64.sqrt();
    let psi = -(g + gt / 2.0);
    [
        -1.5 * (w - gt),
        1.5 * (w + gt),
        -0.5 * (s3 * w - 4.0 * g + gt),
        0.5 * (s3 * w + 4.0 * g - gt),
        psi,
        psi,
        psi,
        psi,
    ]
}

pub fn build_coupling_hamiltonian(p: &ProtocolParams, mode: CouplingMode) -> CMatrix {
    match mode {
        CouplingMode::Spectral => {
            let basis = symmetric_basis();
            let energies = spectral_energies(p);
            let mut h = CMatrix::zeros(8);
            for (label, e) in BasisLabel::ALL.iter().zip(energies) {
                h += &basis.projector(*label).scale_real(e);
            }
            h
        }
        CouplingMode::Literal => {
            let x: Vec<CMatrix> = (1..=3).map(|q| embed(q, &single_qubit(Axis::X))).collect();
            let y: Vec<CMatrix> = (1..=3).map(|q| embed(q, &single_qubit(Axis::Y))).collect();
            let z: Vec<CMatrix> = (1..=3).map(|q| embed(q, &single_qubit(Axis::Z))).collect();
            let mut h = CMatrix::zeros(8);
            for i in 0..3 {
                let j = (i + 1) % 3;
                h += &z[i].scale_real(p.omega / 2.0);
                let xy = &(&x[i] * &x[j]) + &(&y[i] * &y[j]);
                h += &xy.scale_real(p.g / 2.0);
                h += &(&z[i] * &z[j]).scale_real(p.gtilde / 2.0);
            }
            h
        }
    }
}

/// Closed-form dressed eigenstates `(|ψ_ε>, |ψ_-ε>)` of the single-qubit
/// rotation Hamiltonian, ε = ω/√2.
pub fn dressed_states(beta: f64) -> (Ket, Ket) {
    let a = (2.0 + 2f64.sqrt()).sqrt() / 2.0;
    let b = (2.0 - 2f64.sqrt()).sqrt() / 2.0;
    let ph = Complex64::from_polar(1.0, -beta);
    let plus = vec![c(b, 0.), ph * a];
    let minus = vec![c(-a, 0.), ph * b];
    (plus, minus)
}
