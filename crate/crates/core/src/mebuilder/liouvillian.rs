use num_complex::Complex64;

use super::{DissipationChannel, MeError};
use crate::model::StageSpec;
use crate::numkernel::kron;
use crate::CMatrix;

/// Lindblad generator of one stage, as a superoperator on column-stacked
/// density matrices.
#[derive(Clone, Debug)]
pub struct Liouvillian {
    pub matrix: CMatrix,
    pub hamiltonian: CMatrix,
    pub channels: Vec<DissipationChannel>,
    pub stage: Option<StageSpec>,
    // Σ γ A†A
    anticomm: CMatrix,
}

/// `D[A] = Ā⊗A - ½ I⊗A†A - ½ (A†A)ᵀ⊗I` for column stacking.
pub fn dissipator_superop(a: &CMatrix) -> CMatrix {
    let n = a.dim();
    let id = CMatrix::identity(n);
    let ada = &a.adjoint() * a;
    let mut d = kron(&a.conj(), a);
    d -= &kron(&id, &ada).scale_real(0.5);
    d -= &kron(&ada.transpose(), &id).scale_real(0.5);
    d
}

/// `L = -i(I⊗H - Hᵀ⊗I) + Σ γ D[A]`. Channels with zero rate are dropped.
pub fn assemble_liouvillian(
    h: &CMatrix,
    channels: Vec<DissipationChannel>,
) -> Result<Liouvillian, MeError> {
    let n = h.dim();
    for ch in &channels {
        if ch.jump.dim() != n {
            return Err(MeError::ChannelDim {
                channel: ch.jump.dim(),
                hamiltonian: n,
            });
        }
    }
    let channels: Vec<_> = channels.into_iter().filter(|c| c.rate != 0.0).collect();
    let id = CMatrix::identity(n);
    let mut matrix = (&kron(&id, h) - &kron(&h.transpose(), &id)).scale(-Complex64::i());
    let mut anticomm = CMatrix::zeros(n);
    for ch in &channels {
        matrix += &ch.dissipator().scale_real(ch.rate);
        anticomm += &(&ch.jump.adjoint() * &ch.jump).scale_real(ch.rate);
    }
    Ok(Liouvillian {
        matrix,
        hamiltonian: h.clone(),
        channels,
        stage: None,
        anticomm,
    })
}

impl Liouvillian {
    pub fn with_stage(mut self, stage: StageSpec) -> Self {
        self.stage = Some(stage);
        self
    }

    /// Hilbert-space dimension.
    pub fn system_dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    /// `max_k |Σ_i L[(i,i),k]|`: the adjoint applied to the identity.
    pub fn trace_defect(&self) -> f64 {
        let n = self.system_dim();
        let n2 = n * n;
        (0..n2)
            .map(|k| {
                (0..n)
                    .map(|i| self.matrix[(i * n + i, k)])
                    .sum::<Complex64>()
                    .norm()
            })
            .fold(0.0, f64::max)
    }

    /// `L(ρ)` evaluated in operator form, without the superoperator matrix.
    pub fn rhs(&self, rho: &CMatrix) -> CMatrix {
        let h = &self.hamiltonian;
        let mut out = (&(h * rho) - &(rho * h)).scale(-Complex64::i());
        for ch in &self.channels {
            let a = &ch.jump;
            out += &(&(a * rho) * &a.adjoint()).scale_real(ch.rate);
        }
        let k = &self.anticomm;
        out -= &(&(k * rho) + &(rho * k)).scale_real(0.5);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mebuilder::{stage_channels, SpectralDensity};
    use crate::model::{
        build_coupling_hamiltonian, dressed_states, rotation_qubit_hamiltonian, CouplingMode,
        ProtocolParams,
    };
    use crate::numkernel::{expm, frobenius_distance};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn vec_col(rho: &CMatrix) -> Vec<Complex64> {
        let n = rho.dim();
        (0..n * n).map(|k| rho[(k % n, k / n)]).collect()
    }

    fn unvec_col(v: &[Complex64]) -> CMatrix {
        let n = (v.len() as f64).sqrt() as usize;
        CMatrix::from_fn(n, |i, j| v[j * n + i])
    }

    fn random_density(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
        let g = CMatrix::from_fn(n, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let r = &g * &g.adjoint();
        let tr = r.trace().re;
        r.scale_real(1.0 / tr)
    }

    fn stage2_liouvillian() -> Liouvillian {
        let p = ProtocolParams::new(5.0, 0.1, 1e-3, 1e-3).unwrap();
        let h = build_coupling_hamiltonian(&p, CouplingMode::Spectral);
        let chs = stage_channels(&h, &SpectralDensity::from_params(&p)).unwrap();
        assemble_liouvillian(&h, chs).unwrap()
    }

    #[test]
    fn superop_matches_operator_form() {
        let l = stage2_liouvillian();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let rho = random_density(&mut rng, 8);
            let a = unvec_col(&l.matrix.apply(&vec_col(&rho)));
            assert!(frobenius_distance(&a, &l.rhs(&rho)).unwrap() < 1e-12);
        }
    }

    #[test]
    fn trace_is_preserved() {
        let l = stage2_liouvillian();
        assert!(l.trace_defect() < 1e-10);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let rho = random_density(&mut rng, 8);
            assert!(l.rhs(&rho).trace().norm() < 1e-10);
        }
    }

    #[test]
    fn closed_generator_is_unitary_conjugation() {
        let h = rotation_qubit_hamiltonian(2.0, 1.3);
        let l = assemble_liouvillian(&h, Vec::new()).unwrap();
        let t = 0.7;
        let prop = expm(&l.matrix.scale_real(t)).unwrap();
        let u = expm(&h.scale(Complex64::new(0.0, -t))).unwrap();
        let rho = CMatrix::from_diag(&[1.0, 0.0]);
        let got = unvec_col(&prop.apply(&vec_col(&rho)));
        let want = &(&u * &rho) * &u.adjoint();
        assert!(frobenius_distance(&got, &want).unwrap() < 1e-12);
    }

    #[test]
    fn zero_rate_channels_dropped() {
        let h = rotation_qubit_hamiltonian(2.0, 1.3);
        let sd = SpectralDensity { gamma0: 0.0, alpha: 0.0 };
        assert!(matches!(stage_channels(&h, &sd), Err(MeError::ChannelDim { .. })));
        let ch = DissipationChannel {
            bath: 1,
            bohr: 0.0,
            jump: CMatrix::identity(2),
            rate: 0.0,
        };
        let l = assemble_liouvillian(&h, vec![ch]).unwrap();
        assert!(l.channels.is_empty());
        let bad = DissipationChannel {
            bath: 1,
            bohr: 0.0,
            jump: CMatrix::identity(4),
            rate: 1.0,
        };
        assert!(matches!(
            assemble_liouvillian(&h, vec![bad]),
            Err(MeError::ChannelDim { .. })
        ));
    }

    #[test]
    fn single_qubit_relaxes_to_lower_dressed_state() {
        let (omega, beta) = (2.0, std::f64::consts::PI * (1.0 / 2f64.sqrt() + 1.0));
        let h = rotation_qubit_hamiltonian(omega, beta);
        let sd = SpectralDensity {
            gamma0: 1e-3,
            alpha: 1e-3,
        };
        let eig = crate::numkernel::eig_hermitian(&h, 1e-12).unwrap();
        let tol = super::super::secular_tolerance(&eig.eigenvalues);
        let x = crate::model::single_qubit(crate::model::Axis::X);
        let chs = super::super::jump_operators(&h, &x, tol)
            .unwrap()
            .into_iter()
            .map(|(bohr, jump)| DissipationChannel {
                bath: 1,
                bohr,
                rate: sd.rate(bohr, tol).unwrap(),
                jump,
            })
            .collect();
        let l = assemble_liouvillian(&h, chs).unwrap();
        let prop = expm(&l.matrix.scale_real(200.0)).unwrap();
        let mut v = vec_col(&CMatrix::from_diag(&[0.0, 1.0]));
        for _ in 0..50 {
            v = prop.apply(&v);
        }
        let rho = unvec_col(&v);
        let (_, minus) = dressed_states(beta);
        let target = CMatrix::outer(&minus, &minus);
        assert!(frobenius_distance(&rho, &target).unwrap() < 1e-6);
    }
}
