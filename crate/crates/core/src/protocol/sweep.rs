use std::io::{self, Write};

use log::{info, warn};
use rayon::prelude::*;

use super::{run_protocol, Metrics, ProtocolError, ProtocolOptions};
use crate::model::{ghz_condition_ratio, ProtocolParams};

pub const SWEEP_HEADER: &str =
    "omega_over_g,F_protocol,F_ghz_caption,F_ghz_optimal,leakage,trace_err,pos_err";

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRecord {
    pub omega_over_g: f64,
    pub result: Result<Metrics, ProtocolError>,
}

/// ω/g of the GHZ condition points `k` at the given g̃/g.
pub fn condition_grid(ks: &[u32], gtilde: f64) -> Result<Vec<f64>, ProtocolError> {
    ks.iter()
        .map(|&k| Ok(ghz_condition_ratio(k)? * (1.0 - gtilde)))
        .collect()
}

/// Runs every grid point with `template`'s couplings and bath; one record per
/// point, in grid order. Failing points are recorded and the sweep continues.
pub fn sweep(
    grid: &[f64],
    template: &ProtocolParams,
    opts: &ProtocolOptions,
) -> Result<Vec<SweepRecord>, ProtocolError> {
    if grid.is_empty() {
        return Err(ProtocolError::EmptyGrid);
    }
    if let Some(&w) = grid.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
        return Err(ProtocolError::BadGridPoint(w));
    }
    Ok(grid
        .par_iter()
        .map(|&w| {
            let result = template
                .with_omega(w)
                .map_err(ProtocolError::from)
                .and_then(|p| run_protocol(&p, opts))
                .map(|run| run.metrics);
            match &result {
                Ok(m) => info!("omega/g = {w}: F = {:.6}", m.f_protocol),
                Err(e) => warn!("omega/g = {w} failed: {e}"),
            }
            SweepRecord {
                omega_over_g: w,
                result,
            }
        })
        .collect())
}

fn num(x: f64) -> String {
    format!("{:.11e}", x)
}

/// CSV with a fixed header; failed points carry `NaN` in every metric column.
pub fn write_sweep_csv<W: Write>(records: &[SweepRecord], mut w: W) -> io::Result<()> {
    w.write_all(SWEEP_HEADER.as_bytes())?;
    w.write_all(b"\n")?;
    for r in records {
        let cols = match &r.result {
            Ok(m) => [
                m.f_protocol,
                m.f_ghz,
                m.f_ghz_optimal,
                m.leakage,
                m.trace_err,
                m.pos_err,
            ],
            Err(_) => [f64::NAN; 6],
        };
        let mut line = num(r.omega_over_g);
        for c in cols {
            line.push(',');
            line.push_str(&num(c));
        }
        line.push('\n');
        w.write_all(line.as_bytes())?;
    }
    Ok(())
}
