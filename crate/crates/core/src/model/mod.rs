//! Hamiltonians, bases, stage timings and closed-form reference states of the
//! three-qubit GHZ protocol.
//!
//! Conventions: `|0>` is the qubit ground state with `σz|0> = -|0>`; the
//! computational basis `|q1 q2 q3>` has qubit 1 as the most significant bit;
//! all frequencies are in units of the XY coupling `g`.

pub(crate) mod basis;
pub(crate) mod hamiltonian;
mod reference;

pub use basis::{computational_ket, symmetric_basis, BasisLabel, BasisState, SymmetricBasis};
pub use hamiltonian::{
    build_coupling_hamiltonian, build_rotation_hamiltonian, collective_spin, dressed_states,
    pauli_op, rotation_qubit_hamiltonian, single_qubit, spectral_energies, Axis, CouplingMode,
};
pub use reference::{
    alpha_angle, analytic_reference, caption_phase, ghz_condition_ratio, ghz_target,
    aligned_distance, phase_aligned, theta_angle, AnalyticReference,
};

use std::f64::consts::{PI, SQRT_2};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("parameter {name} = {value} out of range: {reason}")]
    Parameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("qubit index {0} out of range 1..=3")]
    QubitIndex(usize),
    #[error("GHZ condition index k must be >= 1")]
    ZeroConditionIndex,
}

/// Physical constants of one protocol run, frequencies in units of `g`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProtocolParams {
    /// Qubit frequency ω/g.
    pub omega: f64,
    /// XY coupling, always 1.
    pub g: f64,
    /// ZZ coupling g̃/g.
    pub gtilde: f64,
    /// Bath rate at zero frequency.
    pub gamma0: f64,
    /// Ohmic slope.
    pub alpha: f64,
}

impl ProtocolParams {
    pub fn new(omega: f64, gtilde: f64, gamma0: f64, alpha: f64) -> Result<Self, ModelError> {
        let p = Self {
            omega,
            g: 1.0,
            gtilde,
            gamma0,
            alpha,
        };
        p.validate()?;
        Ok(p)
    }

    /// Same parameters with the baths switched off.
    pub fn closed(&self) -> Self {
        Self {
            gamma0: 0.0,
            alpha: 0.0,
            ..*self
        }
    }

    pub fn with_omega(&self, omega: f64) -> Result<Self, ModelError> {
        let p = Self { omega, ..*self };
        p.validate()?;
        Ok(p)
    }

    /// Parameters with ω chosen so that ω/(g - g̃) equals `ratio`.
    pub fn from_detuning_ratio(
        ratio: f64,
        gtilde: f64,
        gamma0: f64,
        alpha: f64,
    ) -> Result<Self, ModelError> {
        Self::new(ratio * (1.0 - gtilde), gtilde, gamma0, alpha)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let check = |ok: bool, name, value, reason| {
            if ok {
                Ok(())
            } else {
                Err(ModelError::Parameter {
                    name,
                    value,
                    reason,
                })
            }
        };
        check(
            self.omega.is_finite() && self.omega > 0.0,
            "omega",
            self.omega,
            "must be finite and > 0",
        )?;
        check(self.g == 1.0, "g", self.g, "frequencies are normalised to g = 1")?;
        check(
            self.gtilde >= 0.0 && self.gtilde < self.g,
            "gtilde",
            self.gtilde,
            "must satisfy 0 <= gtilde < g",
        )?;
        check(
            self.gamma0.is_finite() && self.gamma0 >= 0.0,
            "gamma0",
            self.gamma0,
            "must be >= 0",
        )?;
        check(
            self.alpha.is_finite() && self.alpha >= 0.0,
            "alpha",
            self.alpha,
            "must be >= 0",
        )
    }

    /// `g - g̃`
    pub fn coupling_gap(&self) -> f64 {
        self.g - self.gtilde
    }

    /// ω/(g - g̃)
    pub fn detuning_ratio(&self) -> f64 {
        self.omega / self.coupling_gap()
    }

    pub fn rotation_time(&self) -> f64 {
        PI / (SQRT_2 * self.omega)
    }

    pub fn interaction_time(&self) -> f64 {
        PI / (2.0 * self.coupling_gap())
    }

    pub fn total_time(&self) -> f64 {
        2.0 * self.rotation_time() + self.interaction_time()
    }

    pub fn beta_first(&self) -> f64 {
        PI * (1.0 / SQRT_2 + 1.0)
    }

    pub fn beta_third(&self) -> f64 {
        PI * (3.0 + SQRT_2) / 2.0 + PI * (3.0 + 3f64.sqrt()) * self.detuning_ratio() / 8.0
    }

    pub fn stages(&self) -> [StageSpec; 3] {
        [
            StageSpec {
                kind: StageKind::RotationI,
                beta: Some(self.beta_first()),
                duration: self.rotation_time(),
            },
            StageSpec {
                kind: StageKind::Coupling,
                beta: None,
                duration: self.interaction_time(),
            },
            StageSpec {
                kind: StageKind::RotationIII,
                beta: Some(self.beta_third()),
                duration: self.rotation_time(),
            },
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StageKind {
    RotationI,
    Coupling,
    RotationIII,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StageSpec {
    pub kind: StageKind,
    pub beta: Option<f64>,
    pub duration: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_range() {
        assert!(ProtocolParams::new(0.0, 0.1, 0.0, 0.0).is_err());
        assert!(ProtocolParams::new(1.0, 1.0, 0.0, 0.0).is_err());
        assert!(ProtocolParams::new(1.0, -0.1, 0.0, 0.0).is_err());
        assert!(ProtocolParams::new(1.0, 0.1, -1e-3, 0.0).is_err());
        assert!(ProtocolParams::new(1.0, 0.1, 0.0, f64::NAN).is_err());
    }

    #[test]
    fn stage_timings() {
        let p = ProtocolParams::new(5.0, 0.1, 0.0, 0.0).unwrap();
        let [s1, s2, s3] = p.stages();
        assert_eq!(s1.duration, PI / (SQRT_2 * 5.0));
        assert_eq!(s3.duration, s1.duration);
        assert!((s2.duration - PI / 1.8).abs() < 1e-15);
        assert_eq!(s2.beta, None);
        assert!((s1.beta.unwrap() - PI * (1.0 / SQRT_2 + 1.0)).abs() < 1e-15);
        let want3 = PI * (3.0 + SQRT_2) / 2.0 + PI * (3.0 + 3f64.sqrt()) * 5.0 / (8.0 * 0.9);
        assert!((s3.beta.unwrap() - want3).abs() < 1e-12);
        assert!((p.total_time() - (SQRT_2 * PI / 5.0 + PI / 1.8)).abs() < 1e-14);
    }
}
