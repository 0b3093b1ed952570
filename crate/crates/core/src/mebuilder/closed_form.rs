//! Tabulated closed-form jump operators for the three stages.
//!
//! These are fixtures: the generic builder is the reference. Closed-form
//! operators carry their own Bohr frequency, computed from the energies of
//! the states they connect, so they can be matched to generic channels by
//! frequency rather than by their printed index.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use super::{DissipationChannel, MeError, SpectralDensity};
use crate::model::hamiltonian::embed;
use crate::model::{
    dressed_states, spectral_energies, symmetric_basis, BasisLabel, ProtocolParams,
    SymmetricBasis,
};
use crate::CMatrix;

#[derive(Clone, Debug)]
pub struct LabeledChannel {
    /// Printed frequency index, e.g. `"omega5"`, with a `_reversed` suffix
    /// when the tabulated gap is negative and the adjoint is stored.
    pub label: String,
    pub channel: DissipationChannel,
}

/// Which transcription of the entangling-stage table to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TabulatedForm {
    /// Exactly as tabulated; the `|ψ1><W'|` coefficient of bath 2 has the
    /// wrong sign.
    Printed,
    /// Bath-2 `|ψ1><W'|` coefficient with the `(-1)^j` sign that the direct
    /// matrix element `<ψ1|σx²|W'> = +1/√6` requires.
    Corrected,
}

fn labeled(
    label: &str,
    bath: usize,
    bohr: f64,
    jump: CMatrix,
    sd: &SpectralDensity,
) -> Result<LabeledChannel, MeError> {
    // a negative tabulated gap is an absorption operator; keep its emission partner
    let (label, bohr, jump) = if bohr < 0.0 {
        (format!("{label}_reversed"), -bohr, jump.adjoint())
    } else {
        (label.to_string(), bohr, jump)
    };
    let rate = sd.rate(bohr, 1e-9 * bohr.max(1.0))?;
    Ok(LabeledChannel {
        label,
        channel: DissipationChannel {
            bath,
            bohr,
            jump,
            rate,
        },
    })
}

/// First-stage channels: `A(√2ω) = c |ψ_-ε><ψ_ε|` and
/// `A(0) = (cos(π/√2)/√2)(|ψ_-ε><ψ_-ε| - |ψ_ε><ψ_ε|)` on each qubit.
pub fn stage1_closed_form_channels(p: &ProtocolParams) -> Result<Vec<LabeledChannel>, MeError> {
    let sd = SpectralDensity::from_params(p);
    let (plus, minus) = dressed_states(p.beta_first());
    let a = PI / SQRT_2;
    let c_emit = Complex64::new(a.cos() / SQRT_2, -a.sin());
    let emit = CMatrix::outer(&minus, &plus).scale(c_emit);
    let dephase =
        (&CMatrix::outer(&minus, &minus) - &CMatrix::outer(&plus, &plus)).scale_real(a.cos() / SQRT_2);
    let mut out = Vec::new();
    for j in 1..=3 {
        out.push(labeled("omega1", j, SQRT_2 * p.omega, embed(j, &emit), &sd)?);
        out.push(labeled("omega2", j, 0.0, embed(j, &dephase), &sd)?);
    }
    Ok(out)
}

/// The 24 entangling-stage jump operators (8 frequencies, 3 baths) in the
/// computational basis, built from the coupled-spin states.
pub fn stage2_closed_form_channels(
    p: &ProtocolParams,
    form: TabulatedForm,
) -> Result<Vec<LabeledChannel>, MeError> {
    use BasisLabel::*;
    let sd = SpectralDensity::from_params(p);
    let b = symmetric_basis();
    let e = spectral_energies(p);
    let en = |l: BasisLabel| e[l.index()];
    let t = |x: BasisLabel, y: BasisLabel| b.transition(x, y);
    let (s2, s3, s6) = (SQRT_2, 3f64.sqrt(), 6f64.sqrt());

    let mut out = Vec::new();
    for j in 1..=3usize {
        let sign_j = if j % 2 == 0 { 1.0 } else { -1.0 }; // (-1)^j
        let pair = j < 3;
        let lin = |terms: &[(f64, BasisLabel, BasisLabel)]| -> CMatrix {
            let mut m = CMatrix::zeros(8);
            for &(c, x, y) in terms {
                m += &t(x, y).scale_real(c);
            }
            m
        };

        let a1 = lin(&[(1.0 / s3, Ground, W)]);
        let a2 = if pair {
            lin(&[(-sign_j / s2, Ground, Psi1), (1.0 / s6, Ground, Psi2)])
        } else {
            lin(&[(-(2.0f64 / 3.0).sqrt(), Ground, Psi2)])
        };
        let a3 = lin(&[(1.0 / s3, WPrime, Excited)]);
        let a4 = if pair {
            lin(&[(-sign_j / s2, Psi1Prime, Excited), (1.0 / s6, Psi2Prime, Excited)])
        } else {
            lin(&[(-(2.0f64 / 3.0).sqrt(), Psi2Prime, Excited)])
        };
        let a5 = lin(&[(2.0 / 3.0, W, WPrime)]);
        let a6 = if pair {
            lin(&[(sign_j / s6, W, Psi1Prime), (-1.0 / (3.0 * s2), W, Psi2Prime)])
        } else {
            lin(&[(s2 / 3.0, W, Psi2Prime)])
        };
        let a7 = if pair {
            let c = match form {
                TabulatedForm::Printed => -1.0 / s6,
                TabulatedForm::Corrected => sign_j / s6,
            };
            lin(&[(c, Psi1, WPrime), (-1.0 / (3.0 * s2), Psi2, WPrime)])
        } else {
            lin(&[(s2 / 3.0, Psi2, WPrime)])
        };
        let a8 = if pair {
            lin(&[
                (-sign_j / s3, Psi1, Psi2Prime),
                (-sign_j / s3, Psi1Prime, Psi2),
                (-sign_j / s3, Psi2, Psi1Prime),
                (-sign_j / s3, Psi2Prime, Psi1),
                (-2.0 / 3.0, Psi2, Psi2Prime),
                (-2.0 / 3.0, Psi2Prime, Psi2),
            ])
        } else {
            lin(&[
                (-1.0, Psi1, Psi1Prime),
                (-1.0, Psi1Prime, Psi1),
                (1.0 / 3.0, Psi2, Psi2Prime),
                (1.0 / 3.0, Psi2Prime, Psi2),
            ])
        };

        let table = [
            ("omega1", en(W) - en(Ground), a1),
            ("omega2", en(Psi1) - en(Ground), a2),
            ("omega3", en(Excited) - en(WPrime), a3),
            ("omega4", en(Excited) - en(Psi1Prime), a4),
            ("omega5", en(WPrime) - en(W), a5),
            ("omega6", en(Psi1Prime) - en(W), a6),
            ("omega7", en(WPrime) - en(Psi1), a7),
            ("omega8", 0.0, a8),
        ];
        for (label, bohr, jump) in table {
            out.push(labeled(label, j, bohr, jump, &sd)?);
        }
    }
    Ok(out)
}

/// Rotating-frame unitary `T` of the third stage in the computational basis.
/// Its columns map the coupled-spin basis onto eigenstates of the third
/// rotation Hamiltonian.
pub fn rotation_frame_unitary(p: &ProtocolParams) -> CMatrix {
    let beta = p.beta_third();
    let (s2, s3, s6) = (SQRT_2, 3f64.sqrt(), 6f64.sqrt());
    let e = |n: f64| Complex64::from_polar(1.0, -n * beta);
    let r = |x: f64| Complex64::new(x, 0.0);

    let b1 = [
        [r(-(2.0 + s2)), r(-(4.0 - 3.0 * s2)), r(s6), r(-s3 * (2.0 - s2))],
        [
            e(3.0) * -(4.0 - 3.0 * s2),
            e(3.0) * (2.0 + s2),
            e(3.0) * (s3 * (2.0 - s2)),
            e(3.0) * s6,
        ],
        [
            e(1.0) * s6,
            e(1.0) * (s3 * (2.0 - s2)),
            e(1.0) * (3.0 * s2 - 2.0),
            e(1.0) * -(4.0 - s2),
        ],
        [
            e(2.0) * -(s3 * (2.0 - s2)),
            e(2.0) * s6,
            e(2.0) * -(4.0 - s2),
            e(2.0) * -(3.0 * s2 - 2.0),
        ],
    ];
    let b2 = [
        [e(1.0) * 4.0, e(1.0) * (4.0 * (s2 - 1.0))],
        [e(2.0) * (4.0 * (s2 - 1.0)), e(2.0) * -4.0],
    ];

    let mut t_sym = CMatrix::zeros(8);
    for i in 0..4 {
        for k in 0..4 {
            t_sym[(i, k)] = b1[i][k];
        }
    }
    for off in [4, 6] {
        for i in 0..2 {
            for k in 0..2 {
                t_sym[(off + i, off + k)] = b2[i][k];
            }
        }
    }
    let t_sym = t_sym.scale_real((2.0 + s2).sqrt() / 8.0);
    let u = symmetric_basis().change_of_basis();
    &(&u * &t_sym) * &u.adjoint()
}

struct TildeBasis {
    kets: Vec<crate::Ket>,
}

impl TildeBasis {
    fn new(t: &CMatrix, basis: &SymmetricBasis) -> Self {
        let kets = BasisLabel::ALL.iter().map(|&l| t.apply(basis.ket(l))).collect();
        Self { kets }
    }

    fn transition(&self, a: BasisLabel, b: BasisLabel) -> CMatrix {
        CMatrix::outer(&self.kets[a.index()], &self.kets[b.index()])
    }
}

/// Third-stage channels as tabulated in the rotated basis `T|n>`, returned
/// in the computational basis.
pub fn stage3_closed_form_channels(p: &ProtocolParams) -> Result<Vec<LabeledChannel>, MeError> {
    use BasisLabel::*;
    let sd = SpectralDensity::from_params(p);
    let t = rotation_frame_unitary(p);
    let tb = TildeBasis::new(&t, &symmetric_basis());
    let beta = p.beta_third();
    let (s2, s3, s6) = (SQRT_2, 3f64.sqrt(), 6f64.sqrt());
    let cp = Complex64::new(beta.cos(), s2 * beta.sin());
    let cm = cp.conj();

    let lin = |terms: &[(f64, BasisLabel, BasisLabel)]| -> CMatrix {
        let mut m = CMatrix::zeros(8);
        for &(c, x, y) in terms {
            m += &tb.transition(x, y).scale_real(c);
        }
        m
    };

    let mut out = Vec::new();
    for j in 1..=3usize {
        let (emit, dephase) = if j < 3 {
            let up = lin(&[(s2, W, Ground), (s3, Psi1, Ground), (1.0, Psi2, Ground)]);
            let down = lin(&[
                (s2, WPrime, Excited),
                (s3, Psi1Prime, Excited),
                (1.0, Psi2Prime, Excited),
            ]);
            let emit = (&up.scale(cp) + &down.scale(cm)).scale_real(-1.0 / (2.0 * s3));
            let deph = lin(&[
                (3.0, Ground, Ground),
                (-3.0, Excited, Excited),
                (1.0, W, W),
                (-1.0, WPrime, WPrime),
                (2.0, Psi2, Psi2),
                (-2.0, Psi2Prime, Psi2Prime),
            ])
            .scale_real(-beta.cos() / (3.0 * s2));
            (emit, deph)
        } else {
            let up = lin(&[(1.0, W, Ground), (-s2, Psi2, Ground)]);
            let down = lin(&[(1.0, WPrime, Excited), (-s2, Psi2Prime, Excited)]);
            let emit = (&up.scale(cp) + &down.scale(cm)).scale_real(-1.0 / s6);
            let deph = lin(&[
                (3.0, Ground, Ground),
                (-3.0, Excited, Excited),
                (1.0, W, W),
                (-1.0, WPrime, WPrime),
                (3.0, Psi1, Psi1),
                (-3.0, Psi1Prime, Psi1Prime),
                (2.0, Psi2, Psi2),
                (-2.0, Psi2Prime, Psi2Prime),
            ])
            .scale_real(-beta.cos() / (3.0 * s2));
            (emit, deph)
        };
        out.push(labeled("omega1", j, SQRT_2 * p.omega, emit, &sd)?);
        out.push(labeled("omega2", j, 0.0, dephase, &sd)?);
    }
    Ok(out)
}
