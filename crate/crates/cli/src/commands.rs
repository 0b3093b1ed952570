use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use ghzsim::dynamics::{DensityMatrix, EvolutionMethod};
use ghzsim::mebuilder::validate_closed_forms;
use ghzsim::model::{alpha_angle, theta_angle};
use ghzsim::protocol::{
    relative_phase, run_protocol, sweep, write_sweep_csv, ProtocolError, ProtocolOptions,
};

use crate::config::{parse_config, OmegaSpec, RunConfig};

/// Grid used by `sweep` when the config gives no `omega_over_g`.
pub const DEFAULT_SWEEP: (f64, f64, f64) = (1.0, 20.0, 0.5);
/// Detuning used by `validate` when the config gives none.
pub const DEFAULT_VALIDATE_OMEGA: f64 = 5.0;

/// Command-line values that take precedence over the config file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub output: Option<PathBuf>,
    pub method: Option<String>,
}

pub fn load_config(path: Option<&Path>, ov: &Overrides) -> Result<RunConfig> {
    let source = match path {
        Some(p) => std::fs::read_to_string(p)
            .with_context(|| format!("reading config {}", p.display()))?,
        None => String::new(),
    };
    let mut cfg = parse_config(&source).with_context(|| match path {
        Some(p) => format!("in {}", p.display()),
        None => "in default config".to_string(),
    })?;
    if let Some(out) = &ov.output {
        cfg.output_path = Some(out.clone());
    }
    if let Some(m) = &ov.method {
        let fraction = match cfg.method {
            EvolutionMethod::Rk4 { step_fraction } => step_fraction,
            EvolutionMethod::SuperopExpm => ghzsim::dynamics::DEFAULT_RK4_FRACTION,
        };
        cfg.method = crate::config::parse_method(m, fraction)
            .with_context(|| format!("--method: expected expm or rk4, got {m:?}"))?;
    }
    Ok(cfg)
}

fn options(cfg: &RunConfig) -> ProtocolOptions {
    ProtocolOptions {
        method: cfg.method,
        coupling: cfg.coupling,
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

pub fn write_density_csv<W: Write>(rho: &DensityMatrix, mut w: W) -> io::Result<()> {
    writeln!(w, "row,col,re,im")?;
    let n = rho.dim();
    for i in 0..n {
        for j in 0..n {
            let z = rho.matrix[(i, j)];
            writeln!(w, "{i},{j},{:.15e},{:.15e}", z.re, z.im)?;
        }
    }
    w.flush()
}

/// Single protocol run. Prints `key = value` lines to `out`.
pub fn cmd_run<W: Write>(cfg: &RunConfig, mut out: W) -> Result<()> {
    let omega = match &cfg.omega {
        Some(OmegaSpec::Scalar(w)) => *w,
        Some(OmegaSpec::Grid(g)) if g.len() == 1 => g[0],
        Some(OmegaSpec::Grid(g)) => bail!("run needs a single omega_over_g, config gives {} points", g.len()),
        None => bail!("run needs omega_over_g in the config"),
    };
    let p = cfg.params(omega)?;
    let run = run_protocol(&p, &options(cfg))?;
    let m = &run.metrics;

    writeln!(out, "omega_over_g = {omega}")?;
    writeln!(out, "F = {:.6}", m.f_protocol)?;
    writeln!(out, "F_GHZ_caption = {:.6}", m.f_ghz)?;
    writeln!(out, "F_GHZ_optimal = {:.6}", m.f_ghz_optimal)?;
    match relative_phase(run.final_state()) {
        Ok(phi) => writeln!(out, "relative_phase = {phi:.6}")?,
        Err(ProtocolError::UndefinedPhase { coherence }) => {
            writeln!(out, "relative_phase = undefined (|rho_70| = {coherence:.3e})")?
        }
        Err(e) => return Err(e.into()),
    }
    writeln!(out, "leakage = {:.6e}", m.leakage)?;
    writeln!(out, "alpha = {:.6}", alpha_angle(&p))?;
    writeln!(out, "theta = {:.6}", theta_angle(&p))?;
    writeln!(out, "t1 = {:.6}", p.rotation_time())?;
    writeln!(out, "t_int = {:.6}", p.interaction_time())?;
    writeln!(out, "t3 = {:.6}", p.rotation_time())?;
    writeln!(out, "t_total = {:.6}", p.total_time())?;
    writeln!(out, "trace_err = {:.3e}", m.trace_err)?;
    writeln!(out, "pos_err = {:.3e}", m.pos_err)?;

    if let Some(path) = &cfg.output_path {
        write_density_csv(run.final_state(), create(path)?)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

/// Sweep over the configured grid. With an output path the CSV goes there and
/// progress lines go to `out`; without one the CSV goes to `out` and progress
/// to `err`. Fails only if every point fails.
pub fn cmd_sweep<W: Write, E: Write>(cfg: &RunConfig, mut out: W, mut err: E) -> Result<()> {
    let grid = match &cfg.omega {
        Some(spec) => spec.points(),
        None => {
            let (start, stop, step) = DEFAULT_SWEEP;
            let n = ((stop - start) / step).round() as usize + 1;
            (0..n).map(|i| start + step * i as f64).collect()
        }
    };
    let template = cfg.params(grid[0])?;
    let records = sweep(&grid, &template, &options(cfg))?;

    let progress: &mut dyn Write = if cfg.output_path.is_some() { &mut out } else { &mut err };
    let mut failed = 0;
    for (i, r) in records.iter().enumerate() {
        match &r.result {
            Ok(m) => writeln!(
                progress,
                "[{}/{}] omega/g = {}: F = {:.6}, F_GHZ_optimal = {:.6}",
                i + 1,
                records.len(),
                r.omega_over_g,
                m.f_protocol,
                m.f_ghz_optimal
            )?,
            Err(e) => {
                failed += 1;
                writeln!(progress, "[{}/{}] omega/g = {}: failed: {e}", i + 1, records.len(), r.omega_over_g)?
            }
        }
    }

    match &cfg.output_path {
        Some(path) => {
            let mut w = create(path)?;
            write_sweep_csv(&records, &mut w)?;
            w.flush()?;
            writeln!(out, "wrote {} rows to {}", records.len(), path.display())?;
        }
        None => write_sweep_csv(&records, &mut out)?,
    }
    if failed == records.len() {
        bail!("all {failed} sweep points failed");
    }
    Ok(())
}

/// Checks the closed-form dissipators against the generic construction.
/// Returns whether the gated fixtures match.
pub fn cmd_validate<W: Write>(cfg: &RunConfig, mut out: W) -> Result<bool> {
    let omega = match &cfg.omega {
        Some(OmegaSpec::Scalar(w)) => *w,
        Some(OmegaSpec::Grid(g)) if g.len() == 1 => g[0],
        Some(OmegaSpec::Grid(_)) => bail!("validate needs a single omega_over_g"),
        None => DEFAULT_VALIDATE_OMEGA,
    };
    let report = validate_closed_forms(&cfg.params(omega)?)?;
    out.write_all(report.to_csv().as_bytes())?;
    writeln!(out, "# omega_over_g = {omega}")?;
    writeln!(out, "# T unitarity residual = {:.3e}", report.t_unitarity)?;
    for (stage, fixture) in [(1, "closed"), (2, "corrected"), (2, "printed"), (3, "closed")] {
        writeln!(
            out,
            "# stage {stage} {fixture}: max distance {:.3e}",
            report.max_distance(stage, fixture)
        )?;
    }
    let ok = report.passes();
    writeln!(out, "# {}", if ok { "PASS" } else { "FAIL" })?;
    Ok(ok)
}
