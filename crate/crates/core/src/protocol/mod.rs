//! The three-stage protocol: stage chaining, fidelities, leakage and sweeps.

mod sweep;

pub use sweep::{condition_grid, sweep, write_sweep_csv, SweepRecord, SWEEP_HEADER};

use log::warn;
use num_complex::Complex64;
use thiserror::Error;

use crate::dynamics::{propagate, propagate_sampled, DensityMatrix, DynamicsError, EvolutionMethod};
use crate::mebuilder::{assemble_liouvillian, stage_channels, Liouvillian, MeError, SpectralDensity};
use crate::model::{
    build_coupling_hamiltonian, build_rotation_hamiltonian, caption_phase, computational_ket,
    ghz_target, symmetric_basis, BasisLabel, CouplingMode, ModelError, ProtocolParams, StageKind,
    StageSpec,
};
use crate::numkernel::{eig_hermitian, KernelError};
use crate::{CMatrix, Ket};

pub const LEAKAGE_SAMPLES: usize = 32;
/// Coherences below this magnitude have no meaningful phase.
pub const PHASE_EPS: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProtocolError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Me(#[from] MeError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("GHZ phase undefined: |<111|rho|000>| = {coherence:e}")]
    UndefinedPhase { coherence: f64 },
    #[error("sweep grid is empty")]
    EmptyGrid,
    #[error("grid point {0} is not a positive finite frequency")]
    BadGridPoint(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct ProtocolOptions {
    pub method: EvolutionMethod,
    pub coupling: CouplingMode,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Metrics {
    /// `Tr(ρ_exp ρ)` against the closed-system run.
    pub f_protocol: f64,
    /// GHZ fidelity at the closed-form caption phase.
    pub f_ghz: f64,
    /// GHZ fidelity maximised over the relative phase.
    pub f_ghz_optimal: f64,
    pub leakage: f64,
    /// Largest `|Tr ρ - 1|` over all stored states.
    pub trace_err: f64,
    /// Largest negative eigenvalue magnitude over all stored states.
    pub pos_err: f64,
    /// Largest `‖ρ - ρ†‖_F` over all stored states.
    pub hermitian_err: f64,
}

#[derive(Clone, Debug)]
pub struct ProtocolRun {
    pub params: ProtocolParams,
    pub options: ProtocolOptions,
    /// States after stages 1, 2 and 3.
    pub stage_states: [DensityMatrix; 3],
    /// Closed-system counterparts of `stage_states`.
    pub ideal_states: [DensityMatrix; 3],
    /// Open-system stage-2 trajectory, `LEAKAGE_SAMPLES` points.
    pub stage2_samples: Vec<DensityMatrix>,
    pub metrics: Metrics,
}

impl ProtocolRun {
    pub fn final_state(&self) -> &DensityMatrix {
        &self.stage_states[2]
    }

    pub fn ideal_final(&self) -> &DensityMatrix {
        &self.ideal_states[2]
    }
}

fn stage_hamiltonian(p: &ProtocolParams, stage: &StageSpec, mode: CouplingMode) -> CMatrix {
    match (stage.kind, stage.beta) {
        (StageKind::Coupling, _) => build_coupling_hamiltonian(p, mode),
        (_, Some(beta)) => build_rotation_hamiltonian(p, beta),
        (_, None) => unreachable!("rotation stages carry a phase"),
    }
}

/// Generators of the three stages for `p`.
pub fn stage_liouvillians(
    p: &ProtocolParams,
    mode: CouplingMode,
) -> Result<[Liouvillian; 3], ProtocolError> {
    let sd = SpectralDensity::from_params(p);
    let build = |s: StageSpec| -> Result<Liouvillian, ProtocolError> {
        let h = stage_hamiltonian(p, &s, mode);
        let chs = if sd.gamma0 == 0.0 && sd.alpha == 0.0 {
            Vec::new()
        } else {
            stage_channels(&h, &sd)?
        };
        Ok(assemble_liouvillian(&h, chs)?.with_stage(s))
    };
    let [s1, s2, s3] = p.stages();
    Ok([build(s1)?, build(s2)?, build(s3)?])
}

fn initial_state() -> DensityMatrix {
    DensityMatrix::from_pure(&computational_ket("000"))
}

struct Chain {
    states: [DensityMatrix; 3],
    samples: Vec<DensityMatrix>,
}

fn chain(p: &ProtocolParams, opts: &ProtocolOptions) -> Result<Chain, ProtocolError> {
    let [l1, l2, l3] = stage_liouvillians(p, opts.coupling)?;
    let m = opts.method;
    let s1 = propagate(&initial_state(), &l1, p.rotation_time(), m)?;
    let samples = propagate_sampled(&s1, &l2, p.interaction_time(), LEAKAGE_SAMPLES, m)?;
    let s2 = samples.last().cloned().expect("sampled trajectory is nonempty");
    let s3 = propagate(&s2, &l3, p.rotation_time(), m)?;
    Ok(Chain {
        states: [s1, s2, s3],
        samples,
    })
}

/// Final closed-system state from the same numerical pipeline.
pub fn ideal_reference(
    p: &ProtocolParams,
    opts: &ProtocolOptions,
) -> Result<DensityMatrix, ProtocolError> {
    let [_, _, last] = chain(&p.closed(), opts)?.states;
    Ok(last)
}

/// `Re Tr(ρ_exp ρ)`. An imaginary residue above 1e-10 is logged.
pub fn fidelity(rho_exp: &DensityMatrix, rho: &DensityMatrix) -> Result<f64, ProtocolError> {
    if rho_exp.dim() != rho.dim() {
        return Err(KernelError::DimMismatch {
            left: rho_exp.dim(),
            right: rho.dim(),
        }
        .into());
    }
    let tr = (&rho_exp.matrix * &rho.matrix).trace();
    if tr.im.abs() > 1e-10 {
        warn!("fidelity has imaginary residue {:e}", tr.im);
    }
    Ok(tr.re)
}

/// `<GHZ(φ)|ρ|GHZ(φ)>`
pub fn fidelity_ghz(rho: &DensityMatrix, phi: f64) -> f64 {
    let g = ghz_target(phi);
    rho.matrix.sandwich(&g, &g).re
}

/// `max_φ <GHZ(φ)|ρ|GHZ(φ)> = (ρ_00 + ρ_77)/2 + |ρ_70|`
pub fn fidelity_ghz_optimal(rho: &DensityMatrix) -> f64 {
    let m = &rho.matrix;
    0.5 * (m[(0, 0)].re + m[(7, 7)].re) + m[(7, 0)].norm()
}

/// `arg <111|ρ|000>`, the phase maximising the GHZ fidelity.
pub fn relative_phase(rho: &DensityMatrix) -> Result<f64, ProtocolError> {
    let m = &rho.matrix;
    let c = m[(7, 0)];
    if m[(0, 0)].re <= 0.0 || m[(7, 7)].re <= 0.0 || c.norm() <= PHASE_EPS {
        return Err(ProtocolError::UndefinedPhase {
            coherence: c.norm(),
        });
    }
    Ok(c.arg())
}

/// Largest population outside span{|000>, |111>, |W>, |W'>} along a trajectory.
pub fn leakage_of(states: &[DensityMatrix]) -> f64 {
    let b = symmetric_basis();
    let mut proj = CMatrix::zeros(8);
    for l in BasisLabel::SYMMETRIC {
        proj += &b.projector(l);
    }
    states
        .iter()
        .map(|s| 1.0 - (&proj * &s.matrix).trace().re)
        .fold(0.0, f64::max)
}

pub fn leakage(run: &ProtocolRun) -> f64 {
    leakage_of(&run.stage2_samples)
}

/// The dominant eigenvalue and eigenvector of `rho`.
pub fn dominant_state(rho: &DensityMatrix) -> Result<(f64, Ket), ProtocolError> {
    let sym = (&rho.matrix + &rho.matrix.adjoint()).scale_real(0.5);
    let eig = eig_hermitian(&sym, 1e-12)?;
    let k = eig.eigenvalues.len() - 1;
    Ok((eig.eigenvalues[k], eig.eigenvector(k)))
}

pub fn run_protocol(
    p: &ProtocolParams,
    opts: &ProtocolOptions,
) -> Result<ProtocolRun, ProtocolError> {
    p.validate()?;
    let open = chain(p, opts)?;
    let ideal = chain(&p.closed(), opts)?;

    let rho = &open.states[2];
    let f_protocol = fidelity(&ideal.states[2], rho)?;
    let f_ghz = fidelity_ghz(rho, caption_phase(p));
    let f_ghz_optimal = fidelity_ghz_optimal(rho);

    let mut trace_err = 0.0f64;
    let mut pos_err = 0.0f64;
    let mut hermitian_err = 0.0f64;
    for s in open
        .states
        .iter()
        .chain(&ideal.states)
        .chain(&open.samples)
    {
        let d = s.diagnostics()?;
        trace_err = trace_err.max(d.trace_err);
        pos_err = pos_err.max(d.pos_err());
        hermitian_err = hermitian_err.max(d.hermitian_err);
    }
    let leakage = leakage_of(&open.samples);

    Ok(ProtocolRun {
        params: *p,
        options: *opts,
        stage_states: open.states,
        ideal_states: ideal.states,
        stage2_samples: open.samples,
        metrics: Metrics {
            f_protocol,
            f_ghz,
            f_ghz_optimal,
            leakage,
            trace_err,
            pos_err,
            hermitian_err,
        },
    })
}

/// Amplitudes `<000|ψ>` and `<111|ψ>` of a pure state's dominant vector,
/// phase fixed so the first is real non-negative.
pub fn ghz_amplitudes(rho: &DensityMatrix) -> Result<(Complex64, Complex64), ProtocolError> {
    let (_, v) = dominant_state(rho)?;
    let ph = if v[0].norm() > 0.0 {
        v[0].conj() / v[0].norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    Ok((v[0] * ph, v[7] * ph))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{aligned_distance, analytic_reference, ghz_condition_ratio};
    use std::f64::consts::PI;

    fn closed_at_ratio(r: f64) -> ProtocolParams {
        ProtocolParams::from_detuning_ratio(r, 0.1, 0.0, 0.0).unwrap()
    }

    #[test]
    fn fidelity_cases() {
        let a = DensityMatrix::from_pure(&computational_ket("000"));
        let b = DensityMatrix::from_pure(&computational_ket("111"));
        assert_eq!(fidelity(&a, &a).unwrap(), 1.0);
        assert_eq!(fidelity(&a, &b).unwrap(), 0.0);
        let ghz = DensityMatrix::from_pure(&ghz_target(0.0));
        let mixed = DensityMatrix::new(CMatrix::identity(8).scale_real(0.125)).unwrap();
        assert!((fidelity(&ghz, &mixed).unwrap() - 0.125).abs() < 1e-15);
        let small = DensityMatrix::from_pure(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        assert!(fidelity(&a, &small).is_err());
    }

    #[test]
    fn ghz_fidelity_and_phase() {
        for phi in [0.0, 1.0, -2.5, 3.0] {
            let rho = DensityMatrix::from_pure(&ghz_target(phi));
            assert!((fidelity_ghz(&rho, phi) - 1.0).abs() < 1e-14);
            assert!(fidelity_ghz(&rho, phi + PI).abs() < 1e-14);
            assert!((fidelity_ghz_optimal(&rho) - 1.0).abs() < 1e-14);
            let got = relative_phase(&rho).unwrap();
            assert!(((got - phi).rem_euclid(2.0 * PI)).min((phi - got).rem_euclid(2.0 * PI)) < 1e-12);
        }
        let mut dephased = DensityMatrix::from_pure(&ghz_target(0.3)).matrix;
        dephased[(0, 7)] = Complex64::new(0.0, 0.0);
        dephased[(7, 0)] = Complex64::new(0.0, 0.0);
        let rho = DensityMatrix::new(dephased).unwrap();
        assert!(matches!(
            relative_phase(&rho),
            Err(ProtocolError::UndefinedPhase { .. })
        ));
    }

    #[test]
    fn optimal_phase_dominates_any_phase() {
        let p = ProtocolParams::new(4.0, 0.1, 1e-2, 1e-2).unwrap();
        let run = run_protocol(&p, &ProtocolOptions::default()).unwrap();
        let rho = run.final_state();
        let best = fidelity_ghz_optimal(rho);
        for k in 0..64 {
            assert!(fidelity_ghz(rho, k as f64 * PI / 32.0) <= best + 1e-12);
        }
        let phi = relative_phase(rho).unwrap();
        assert!((fidelity_ghz(rho, phi) - best).abs() < 1e-12);
        assert!(run.metrics.f_ghz <= best + 1e-9);
    }

    #[test]
    fn closed_run_matches_closed_form() {
        let p = closed_at_ratio(5.0);
        let run = run_protocol(&p, &ProtocolOptions::default()).unwrap();
        let reference = analytic_reference(&p);
        let (_, v) = dominant_state(run.ideal_final()).unwrap();
        assert!(aligned_distance(&v, &reference.final_state) <= 1e-8);
        assert!((run.metrics.f_protocol - 1.0).abs() < 1e-9);
        assert!(run.metrics.leakage.abs() < 1e-9);
        assert!((run.ideal_final().purity() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn ideal_reference_is_gamma_free() {
        let p = ProtocolParams::new(5.0, 0.1, 1e-2, 1e-2).unwrap();
        let a = ideal_reference(&p, &ProtocolOptions::default()).unwrap();
        let b = ideal_reference(&p.closed(), &ProtocolOptions::default()).unwrap();
        assert_eq!(a.matrix, b.matrix);
    }

    #[test]
    fn condition_point_gives_ghz() {
        let p = closed_at_ratio(ghz_condition_ratio(2).unwrap());
        let rho = ideal_reference(&p, &ProtocolOptions::default()).unwrap();
        assert!((fidelity_ghz_optimal(&rho) - 1.0).abs() < 1e-6);
        let phi = relative_phase(&rho).unwrap();
        assert!((fidelity_ghz(&rho, phi) - 1.0).abs() < 1e-6);
        let theta = crate::model::theta_angle(&p);
        let want = (PI - theta).rem_euclid(2.0 * PI);
        let diff = (phi.rem_euclid(2.0 * PI) - want).abs();
        assert!(diff.min(2.0 * PI - diff) < 1e-6, "{phi} vs {want}");
    }

    #[test]
    fn complement_state_leaks_fully() {
        let b = symmetric_basis();
        let p = closed_at_ratio(5.0);
        let [_, l2, _] = stage_liouvillians(&p, CouplingMode::Spectral).unwrap();
        let rho = DensityMatrix::from_pure(b.ket(BasisLabel::Psi1));
        let traj = propagate_sampled(
            &rho,
            &l2,
            p.interaction_time(),
            LEAKAGE_SAMPLES,
            EvolutionMethod::SuperopExpm,
        )
        .unwrap();
        assert!((leakage_of(&traj) - 1.0).abs() < 1e-12);
    }
}
