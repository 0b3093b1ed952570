use log::warn;

use super::MeError;
use crate::model::ProtocolParams;
use crate::numkernel::{eig_hermitian, HermitianEigen};
use crate::CMatrix;

/// Relative grouping tolerance for transitions.
const SECULAR_RELATIVE: f64 = 1e-9;

/// Absolute grouping tolerance: `1e-9 * max|E_n|`.
pub fn secular_tolerance(eigenvalues: &[f64]) -> f64 {
    SECULAR_RELATIVE * eigenvalues.iter().fold(0.0f64, |m, e| m.max(e.abs()))
}

struct Level {
    energy: f64,
    projector: CMatrix,
}

fn levels(eig: &HermitianEigen<f64>, tol: f64) -> Vec<Level> {
    let n = eig.eigenvalues.len();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for k in 0..n {
        match groups.last_mut() {
            Some(g) if eig.eigenvalues[k] - eig.eigenvalues[*g.last().unwrap()] <= tol => {
                g.push(k)
            }
            _ => groups.push(vec![k]),
        }
    }
    groups
        .into_iter()
        .map(|g| {
            let energy = g.iter().map(|&k| eig.eigenvalues[k]).sum::<f64>() / g.len() as f64;
            let mut projector = CMatrix::zeros(n);
            for &k in &g {
                let v = eig.eigenvector(k);
                projector += &CMatrix::outer(&v, &v);
            }
            Level { energy, projector }
        })
        .collect()
}

/// Distinct non-negative eigenvalue gaps of `h`, merged within `tol`.
pub fn bohr_frequencies(h: &CMatrix, tol: f64) -> Result<Vec<f64>, MeError> {
    let eig = eig_hermitian(h, 1e-10)?;
    let lv = levels(&eig, tol);
    let mut out: Vec<f64> = Vec::new();
    for a in 0..lv.len() {
        for b in a..lv.len() {
            let gap = lv[b].energy - lv[a].energy;
            if !out.iter().any(|w| (w - gap).abs() <= tol) {
                out.push(gap);
            }
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(out)
}

/// `A(ω) = Σ_{E_b - E_a = ω} Π_a X Π_b` for every non-negative Bohr frequency
/// with a non-vanishing operator, ascending in ω.
pub fn jump_operators(
    h: &CMatrix,
    coupling: &CMatrix,
    tol: f64,
) -> Result<Vec<(f64, CMatrix)>, MeError> {
    if coupling.dim() != h.dim() {
        return Err(MeError::ChannelDim {
            channel: coupling.dim(),
            hamiltonian: h.dim(),
        });
    }
    let eig = eig_hermitian(h, 1e-10)?;
    Ok(jumps_from_eigen(&eig, coupling, tol))
}

pub(super) fn jumps_from_eigen(
    eig: &HermitianEigen<f64>,
    coupling: &CMatrix,
    tol: f64,
) -> Vec<(f64, CMatrix)> {
    let lv = levels(eig, tol);
    let cutoff = 1e-12 * coupling.frobenius_norm().max(1.0);
    let mut out: Vec<(f64, CMatrix)> = Vec::new();
    for a in 0..lv.len() {
        let left = &lv[a].projector * coupling;
        for b in a..lv.len() {
            let piece = &left * &lv[b].projector;
            if piece.frobenius_norm() <= cutoff {
                continue;
            }
            let gap = lv[b].energy - lv[a].energy;
            match out.iter_mut().find(|(w, _)| (*w - gap).abs() <= tol) {
                Some((_, acc)) => *acc += &piece,
                None => out.push((gap, piece)),
            }
        }
    }
    out.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    out
}

/// The eight entangling-stage Bohr frequencies in their tabulated order
/// ω1..ω8. Some may be negative for small ω/g.
pub fn analytic_bohr_frequencies(p: &ProtocolParams) -> [f64; 8] {
    let (w, g, gt) = (p.omega, p.g, p.gtilde);
    let s3 = 3f64.sqrt();
    [
        (3.0 - s3) / 2.0 * w + 2.0 * (g - gt),
        1.5 * w - (g + 2.0 * gt),
        (3.0 - s3) / 2.0 * w - 2.0 * (g - gt),
        1.5 * w + (g + 2.0 * gt),
        s3 * w,
        s3 / 2.0 * w + 3.0 * g,
        s3 / 2.0 * w - 3.0 * g,
        0.0,
    ]
}

/// Index pairs `(i, j)` (0-based, i < j) of tabulated frequencies whose
/// magnitudes coincide within `tol`. Each collision is logged as a warning.
pub fn frequency_collisions(p: &ProtocolParams, tol: f64) -> Vec<(usize, usize)> {
    let w = analytic_bohr_frequencies(p);
    let mut out = Vec::new();
    for i in 0..8 {
        for j in (i + 1)..8 {
            if (w[i].abs() - w[j].abs()).abs() <= tol {
                warn!(
                    "Bohr frequencies omega{} and omega{} coincide at omega/g = {}: {} vs {}",
                    i + 1,
                    j + 1,
                    p.omega,
                    w[i],
                    w[j]
                );
                out.push((i, j));
            }
        }
    }
    out
}
