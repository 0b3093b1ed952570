use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use super::basis::{symmetric_basis, BasisLabel};
use super::{ModelError, ProtocolParams};
use crate::numkernel::{inner, vector_norm};
use crate::Ket;

/// Closed-system states after each stage, written in closed form.
#[derive(Clone, Debug)]
pub struct AnalyticReference {
    pub stage1_state: Ket,
    pub stage2_state: Ket,
    pub final_state: Ket,
    pub alpha_angle: f64,
    pub theta_angle: f64,
}

impl AnalyticReference {
    /// Amplitudes `(A_000, A_111)` of the final state.
    pub fn final_amplitudes(&self) -> (Complex64, Complex64) {
        (self.final_state[0], self.final_state[7])
    }
}

/// α = 3πω(√3 - 1) / (8(g - g̃))
pub fn alpha_angle(p: &ProtocolParams) -> f64 {
    3.0 * PI * (3f64.sqrt() - 1.0) * p.detuning_ratio() / 8.0
}

/// θ = 3π√2/2 + 3πω(√3 + 3) / (8(g - g̃))
pub fn theta_angle(p: &ProtocolParams) -> f64 {
    3.0 * PI * SQRT_2 / 2.0 + 3.0 * PI * (3f64.sqrt() + 3.0) * p.detuning_ratio() / 8.0
}

fn cis(phi: f64) -> Complex64 {
    Complex64::from_polar(1.0, phi)
}

fn superpose(amps: &[(BasisLabel, Complex64)]) -> Ket {
    let basis = symmetric_basis();
    let mut v = vec![Complex64::new(0.0, 0.0); 8];
    for &(label, a) in amps {
        for (x, y) in v.iter_mut().zip(basis.ket(label)) {
            *x += a * y;
        }
    }
    v
}

pub fn analytic_reference(p: &ProtocolParams) -> AnalyticReference {
    let s3 = 3f64.sqrt();
    let norm = 8f64.sqrt().recip();
    let r = p.detuning_ratio();

    let stage1_state = superpose(&[
        (BasisLabel::Ground, Complex64::new(norm, 0.0)),
        (BasisLabel::Excited, cis(-3.0 * PI / SQRT_2) * norm),
        (BasisLabel::W, cis(-PI / SQRT_2) * (s3 * norm)),
        (BasisLabel::WPrime, cis(-SQRT_2 * PI) * (s3 * norm)),
    ]);

    let stage2_state = superpose(&[
        (BasisLabel::Ground, Complex64::new(norm, 0.0)),
        (BasisLabel::Excited, cis(-1.5 * PI * (r + SQRT_2)) * norm),
        (
            BasisLabel::W,
            cis(PI * ((s3 - 3.0) * r / 4.0 - SQRT_2 / 2.0)) * (-s3 * norm),
        ),
        (
            BasisLabel::WPrime,
            cis(-PI * ((s3 + 3.0) * r / 4.0 + SQRT_2)) * (-s3 * norm),
        ),
    ]);

    let alpha = alpha_angle(p);
    let theta = theta_angle(p);
    let i = Complex64::i();
    let a000 = (i + cis(alpha)) * 0.5;
    let a111 = i * cis(-theta) * (i - cis(alpha)) * 0.5;
    let final_state = superpose(&[(BasisLabel::Ground, a000), (BasisLabel::Excited, a111)]);

    AnalyticReference {
        stage1_state,
        stage2_state,
        final_state,
        alpha_angle: alpha,
        theta_angle: theta,
    }
}

/// ω/(g - g̃) at which the final state is an exact GHZ state.
pub fn ghz_condition_ratio(k: u32) -> Result<f64, ModelError> {
    if k == 0 {
        return Err(ModelError::ZeroConditionIndex);
    }
    Ok(8.0 * k as f64 / (3.0 * (3f64.sqrt() - 1.0)))
}

/// `(|000> + e^{iφ}|111>) / √2`
pub fn ghz_target(phi: f64) -> Ket {
    let h = SQRT_2.recip();
    superpose(&[
        (BasisLabel::Ground, Complex64::new(h, 0.0)),
        (BasisLabel::Excited, cis(phi) * h),
    ])
}

/// GHZ phase used for the published F_GHZ curves:
/// φ = (3π/2)(√3 + (3 + √3)/4 · ω/(g - g̃)).
pub fn caption_phase(p: &ProtocolParams) -> f64 {
    let s3 = 3f64.sqrt();
    1.5 * PI * (s3 + (3.0 + s3) / 4.0 * p.detuning_ratio())
}

/// Copy of `v` rotated so its largest-magnitude amplitude is real positive.
/// Ties within 1e-12 go to the lowest index.
pub fn phase_aligned(v: &[Complex64]) -> Ket {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let pivot = v.iter().position(|z| z.norm() >= max - 1e-12);
    match pivot {
        Some(k) if max > 0.0 => {
            let ph = v[k].conj() / v[k].norm();
            v.iter().map(|z| z * ph).collect()
        }
        _ => v.to_vec(),
    }
}

/// `min_φ ||a - e^{iφ} b||`
pub fn aligned_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let ov = inner(b, a);
    let ph = if ov.norm() > 0.0 {
        ov / ov.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let diff: Ket = a.iter().zip(b).map(|(x, y)| x - y * ph).collect();
    vector_norm(&diff)
}
