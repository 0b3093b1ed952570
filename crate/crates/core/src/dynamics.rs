//! Density matrices and their propagation under a stage Liouvillian.
//!
//! Two integrators are provided: the exact superoperator exponential and a
//! fixed-step RK4 on the operator form of the master equation. Neither
//! renormalises; any invariant violation is returned as an error.

use std::io::{self, Write};

use num_complex::Complex64;
use thiserror::Error;

use crate::mebuilder::Liouvillian;
use crate::model::{symmetric_basis, BasisLabel};
use crate::numkernel::{eig_hermitian, expm, KernelError};
use crate::CMatrix;

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-9;
pub const POSITIVITY_TOL: f64 = 1e-8;
pub const DEFAULT_RK4_FRACTION: f64 = 1e-4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("{what} violated at t = {time}: measured {value:e}, limit {limit:e}")]
    Invariant {
        what: &'static str,
        value: f64,
        limit: f64,
        time: f64,
    },
    #[error("density matrix of dimension {rho} does not fit a generator of dimension {generator}")]
    DimMismatch { rho: usize, generator: usize },
    #[error("vector of length {0} is not a square number")]
    BadVector(usize),
    #[error("negative evolution time {0}")]
    NegativeTime(f64),
    #[error("RK4 step fraction {0} outside (0, 0.01]")]
    BadStep(f64),
}

/// Measured departures from a valid state.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct StateDiagnostics {
    /// `|Tr ρ - 1|`
    pub trace_err: f64,
    /// `‖ρ - ρ†‖_F`
    pub hermitian_err: f64,
    pub min_eigenvalue: f64,
}

impl StateDiagnostics {
    /// Largest negative eigenvalue magnitude, zero if none.
    pub fn pos_err(&self) -> f64 {
        (-self.min_eigenvalue).max(0.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    pub matrix: CMatrix,
    /// Accumulated evolution time.
    pub time: f64,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self, DynamicsError> {
        let rho = Self { matrix, time: 0.0 };
        rho.check()?;
        Ok(rho)
    }

    pub fn from_pure(ket: &[Complex64]) -> Self {
        Self {
            matrix: CMatrix::outer(ket, ket),
            time: 0.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    pub fn diagnostics(&self) -> Result<StateDiagnostics, DynamicsError> {
        let m = &self.matrix;
        let hermitian_err = m.hermitian_defect();
        let sym = (m + &m.adjoint()).scale_real(0.5);
        let eig = eig_hermitian(&sym, 1e-12)?;
        Ok(StateDiagnostics {
            trace_err: (m.trace() - 1.0).norm(),
            hermitian_err,
            min_eigenvalue: eig.eigenvalues[0],
        })
    }

    /// Fails with the first violated invariant.
    pub fn check(&self) -> Result<StateDiagnostics, DynamicsError> {
        if !self.matrix.is_finite() {
            return Err(KernelError::NonFinite("density matrix").into());
        }
        let d = self.diagnostics()?;
        let fail = |what, value, limit| DynamicsError::Invariant {
            what,
            value,
            limit,
            time: self.time,
        };
        if d.hermitian_err > HERMITIAN_TOL {
            return Err(fail("hermiticity", d.hermitian_err, HERMITIAN_TOL));
        }
        if d.trace_err > TRACE_TOL {
            return Err(fail("unit trace", d.trace_err, TRACE_TOL));
        }
        if d.min_eigenvalue < -POSITIVITY_TOL {
            return Err(fail("positivity", -d.min_eigenvalue, POSITIVITY_TOL));
        }
        Ok(d)
    }

    /// Populations of the eight symmetric-basis states.
    pub fn symmetric_populations(&self) -> [f64; 8] {
        symmetric_basis().populations(&self.matrix)
    }
}

/// Column stacking: slot `j*n + i` holds `ρ[i][j]`.
pub fn vectorize(rho: &CMatrix) -> Vec<Complex64> {
    let n = rho.dim();
    let mut v = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            v.push(rho[(i, j)]);
        }
    }
    v
}

pub fn devectorize(v: &[Complex64]) -> Result<CMatrix, DynamicsError> {
    let n = (v.len() as f64).sqrt().round() as usize;
    if n * n != v.len() || n == 0 {
        return Err(DynamicsError::BadVector(v.len()));
    }
    Ok(CMatrix::from_fn(n, |i, j| v[j * n + i]))
}

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub enum EvolutionMethod {
    #[default]
    SuperopExpm,
    /// Fixed step `duration * step_fraction`.
    Rk4 { step_fraction: f64 },
}

impl EvolutionMethod {
    pub fn rk4() -> Self {
        EvolutionMethod::Rk4 {
            step_fraction: DEFAULT_RK4_FRACTION,
        }
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        match *self {
            EvolutionMethod::Rk4 { step_fraction: f }
                if !(f > 0.0 && f <= 0.01) || !f.is_finite() =>
            {
                Err(DynamicsError::BadStep(f))
            }
            _ => Ok(()),
        }
    }
}

fn check_dims(rho: &DensityMatrix, l: &Liouvillian) -> Result<(), DynamicsError> {
    if rho.dim() != l.system_dim() {
        return Err(DynamicsError::DimMismatch {
            rho: rho.dim(),
            generator: l.system_dim(),
        });
    }
    Ok(())
}

fn rk4(l: &Liouvillian, rho: &CMatrix, t: f64, step_fraction: f64) -> CMatrix {
    let steps = (1.0 / step_fraction).ceil() as usize;
    let h = t / steps as f64;
    let mut y = rho.clone();
    for _ in 0..steps {
        let k1 = l.rhs(&y);
        let k2 = l.rhs(&(&y + &k1.scale_real(h / 2.0)));
        let k3 = l.rhs(&(&y + &k2.scale_real(h / 2.0)));
        let k4 = l.rhs(&(&y + &k3.scale_real(h)));
        let mut incr = &k1 + &k4;
        incr += &(&k2 + &k3).scale_real(2.0);
        y += &incr.scale_real(h / 6.0);
    }
    y
}

/// `ρ(t)` under `l`. The result is checked against the state invariants.
pub fn propagate(
    rho: &DensityMatrix,
    l: &Liouvillian,
    t: f64,
    method: EvolutionMethod,
) -> Result<DensityMatrix, DynamicsError> {
    check_dims(rho, l)?;
    method.validate()?;
    if t < 0.0 || !t.is_finite() {
        return Err(DynamicsError::NegativeTime(t));
    }
    if t == 0.0 {
        return Ok(rho.clone());
    }
    let matrix = match method {
        EvolutionMethod::SuperopExpm => {
            let prop = expm(&l.matrix.scale_real(t))?;
            devectorize(&prop.apply(&vectorize(&rho.matrix)))?
        }
        EvolutionMethod::Rk4 { step_fraction } => rk4(l, &rho.matrix, t, step_fraction),
    };
    let out = DensityMatrix {
        matrix,
        time: rho.time + t,
    };
    out.check()?;
    Ok(out)
}

/// States at `samples` equally spaced times `0, t/(samples-1), ..., t`.
/// The last entry equals `propagate(rho, l, t, method)` up to rounding.
pub fn propagate_sampled(
    rho: &DensityMatrix,
    l: &Liouvillian,
    t: f64,
    samples: usize,
    method: EvolutionMethod,
) -> Result<Vec<DensityMatrix>, DynamicsError> {
    check_dims(rho, l)?;
    method.validate()?;
    if t < 0.0 || !t.is_finite() {
        return Err(DynamicsError::NegativeTime(t));
    }
    let mut out = vec![rho.clone()];
    if samples < 2 {
        return Ok(out);
    }
    let dt = t / (samples - 1) as f64;
    match method {
        EvolutionMethod::SuperopExpm => {
            let prop = expm(&l.matrix.scale_real(dt))?;
            let mut v = vectorize(&rho.matrix);
            for k in 1..samples {
                v = prop.apply(&v);
                let s = DensityMatrix {
                    matrix: devectorize(&v)?,
                    time: rho.time + dt * k as f64,
                };
                s.check()?;
                out.push(s);
            }
        }
        EvolutionMethod::Rk4 { step_fraction } => {
            // keep the step length of a single propagation over `t`
            let per_segment = EvolutionMethod::Rk4 {
                step_fraction: (step_fraction * (samples - 1) as f64).min(0.01),
            };
            for _ in 1..samples {
                let next = propagate(out.last().unwrap(), l, dt, per_segment)?;
                out.push(next);
            }
        }
    }
    Ok(out)
}

/// Writes `t,purity,<8 populations>` rows.
pub fn write_trajectory<W: Write>(states: &[DensityMatrix], mut w: W) -> io::Result<()> {
    write!(w, "t,purity")?;
    for l in BasisLabel::ALL {
        write!(w, ",p_{}", l.name())?;
    }
    writeln!(w)?;
    for s in states {
        write!(w, "{:.11e},{:.11e}", s.time, s.purity())?;
        for p in s.symmetric_populations() {
            write!(w, ",{:.11e}", p)?;
        }
        writeln!(w)?;
    }
    Ok(())
}
