//! Secular microscopic Lindblad generators.
//!
//! [`jump_operators`] derives the Bohr-frequency channels of any stage from
//! the eigenstructure of its Hamiltonian; [`closed_form`] holds the tabulated
//! channels used as fixtures, and [`validate_closed_forms`] compares the two.

pub mod closed_form;
mod generic;
mod liouvillian;
mod validation;

pub use closed_form::{
    stage2_closed_form_channels, stage3_closed_form_channels, rotation_frame_unitary, stage1_closed_form_channels,
    TabulatedForm, LabeledChannel,
};
pub use generic::{
    analytic_bohr_frequencies, bohr_frequencies, frequency_collisions, jump_operators,
    secular_tolerance,
};
pub use liouvillian::{assemble_liouvillian, dissipator_superop, Liouvillian};
pub use validation::{validate_closed_forms, ValidationReport, ValidationRow, VALIDATION_TOL};

use thiserror::Error;

use crate::model::{self, pauli_op, Axis, ModelError};
use crate::numkernel::{eig_hermitian, KernelError};
use crate::CMatrix;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("negative Bohr frequency {0} has no rate at zero temperature")]
    NegativeFrequency(f64),
    #[error("channel dimension {channel} does not match Hamiltonian dimension {hamiltonian}")]
    ChannelDim { channel: usize, hamiltonian: usize },
}

/// Ohmic bath: rate `gamma0` at zero frequency, `alpha * ω` elsewhere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralDensity {
    pub gamma0: f64,
    pub alpha: f64,
}

impl SpectralDensity {
    pub fn from_params(p: &model::ProtocolParams) -> Self {
        Self {
            gamma0: p.gamma0,
            alpha: p.alpha,
        }
    }

    pub fn rate(&self, omega: f64, tol: f64) -> Result<f64, MeError> {
        ohmic_rate(self, omega, tol)
    }
}

/// `γ(ω)`; frequencies within `tol` of zero count as zero.
pub fn ohmic_rate(sd: &SpectralDensity, omega: f64, tol: f64) -> Result<f64, MeError> {
    if omega.abs() <= tol {
        Ok(sd.gamma0)
    } else if omega < 0.0 {
        Err(MeError::NegativeFrequency(omega))
    } else {
        Ok(sd.alpha * omega)
    }
}

/// One secular dissipation channel of bath `bath` (1-based).
#[derive(Clone, Debug)]
pub struct DissipationChannel {
    pub bath: usize,
    pub bohr: f64,
    pub jump: CMatrix,
    pub rate: f64,
}

impl DissipationChannel {
    /// Unweighted dissipator superoperator of the jump operator.
    pub fn dissipator(&self) -> CMatrix {
        dissipator_superop(&self.jump)
    }
}

/// Channels of all three baths (coupling σx^j each) for Hamiltonian `h`.
pub fn stage_channels(
    h: &CMatrix,
    sd: &SpectralDensity,
) -> Result<Vec<DissipationChannel>, MeError> {
    if h.dim() != 8 {
        return Err(MeError::ChannelDim {
            channel: 8,
            hamiltonian: h.dim(),
        });
    }
    let eig = eig_hermitian(h, 1e-10)?;
    let tol = secular_tolerance(&eig.eigenvalues);
    let mut out = Vec::new();
    for bath in 1..=3 {
        let coupling = pauli_op(bath, Axis::X)?;
        for (bohr, jump) in generic::jumps_from_eigen(&eig, &coupling, tol) {
            let rate = sd.rate(bohr, tol)?;
            out.push(DissipationChannel {
                bath,
                bohr,
                jump,
                rate,
            });
        }
    }
    Ok(out)
}
