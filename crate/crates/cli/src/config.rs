//! Run configuration: a single flat JSON object.
//!
//! ```json
//! {
//!   "omega_over_g": 5.0,                     // or {"start":1,"stop":20,"step":0.5}
//!                                            // or {"condition_k":[1,2,3]}
//!   "gtilde_over_g": 0.1,
//!   "gamma0": 1e-3,
//!   "alpha": 1e-3,
//!   "method": "expm",                        // or "rk4"
//!   "rk4_step_fraction": 1e-4,
//!   "coupling_mode": "spectral",             // or "literal"
//!   "output_path": "out.csv",
//!   "seed": 0
//! }
//! ```
//!
//! Every key is optional. Unknown keys are rejected. `condition_k` lists are
//! sorted before use.

use std::path::PathBuf;

use ghzsim::dynamics::{EvolutionMethod, DEFAULT_RK4_FRACTION};
use ghzsim::model::{CouplingMode, ProtocolParams};
use ghzsim::protocol::condition_grid;
use serde::Deserialize;
use thiserror::Error;

const MAX_GRID_POINTS: usize = 100_000;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config syntax: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("{key} at {position}: {reason}")]
    Range {
        key: &'static str,
        position: Position,
        reason: String,
    },
}

/// 1-based line and column of a key in the source, `0:0` when absent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl std::fmt::Display for Position {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {} column {}", self.line, self.column)
    }
}

fn locate(source: &str, key: &str) -> Position {
    let needle = format!("\"{key}\"");
    match source.find(&needle) {
        Some(offset) => {
            let before = &source[..offset];
            let line = before.matches('\n').count() + 1;
            let column = offset - before.rfind('\n').map_or(0, |i| i + 1) + 1;
            Position { line, column }
        }
        None => Position::default(),
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawOmega {
    Scalar(f64),
    Range { start: f64, stop: f64, step: f64 },
    Conditions { condition_k: Vec<u32> },
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    omega_over_g: Option<RawOmega>,
    gtilde_over_g: Option<f64>,
    gamma0: Option<f64>,
    alpha: Option<f64>,
    method: Option<String>,
    rk4_step_fraction: Option<f64>,
    coupling_mode: Option<String>,
    output_path: Option<String>,
    seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum OmegaSpec {
    Scalar(f64),
    Grid(Vec<f64>),
}

impl OmegaSpec {
    pub fn points(&self) -> Vec<f64> {
        match self {
            OmegaSpec::Scalar(w) => vec![*w],
            OmegaSpec::Grid(g) => g.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    /// `None` when the key is absent.
    pub omega: Option<OmegaSpec>,
    pub gtilde: f64,
    pub gamma0: f64,
    pub alpha: f64,
    pub method: EvolutionMethod,
    pub coupling: CouplingMode,
    pub output_path: Option<PathBuf>,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            omega: None,
            gtilde: 0.1,
            gamma0: 1e-3,
            alpha: 1e-3,
            method: EvolutionMethod::SuperopExpm,
            coupling: CouplingMode::Spectral,
            output_path: None,
            seed: 0,
        }
    }
}

impl RunConfig {
    /// Protocol parameters at `omega` with this config's couplings and bath.
    pub fn params(&self, omega: f64) -> Result<ProtocolParams, ghzsim::model::ModelError> {
        ProtocolParams::new(omega, self.gtilde, self.gamma0, self.alpha)
    }
}

pub fn parse_method(name: &str, step_fraction: f64) -> Option<EvolutionMethod> {
    match name {
        "expm" => Some(EvolutionMethod::SuperopExpm),
        "rk4" => Some(EvolutionMethod::Rk4 { step_fraction }),
        _ => None,
    }
}

fn range_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>, String> {
    if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
        return Err("start, stop and step must be finite".into());
    }
    if step <= 0.0 {
        return Err(format!("step must be > 0, got {step}"));
    }
    if stop < start {
        return Err(format!("stop {stop} is below start {start}"));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
    if n > MAX_GRID_POINTS {
        return Err(format!("grid has {n} points, limit {MAX_GRID_POINTS}"));
    }
    Ok((0..n).map(|i| start + step * i as f64).collect())
}

pub fn parse_config(source: &str) -> Result<RunConfig, ConfigError> {
    let raw: RawConfig = if source.trim().is_empty() {
        RawConfig::default()
    } else {
        serde_json::from_str(source)?
    };
    let err = |key: &'static str, reason: String| ConfigError::Range {
        key,
        position: locate(source, key),
        reason,
    };
    let mut cfg = RunConfig::default();

    if let Some(g) = raw.gtilde_over_g {
        if !(0.0..1.0).contains(&g) {
            return Err(err("gtilde_over_g", format!("must satisfy 0 <= value < 1, got {g}")));
        }
        cfg.gtilde = g;
    }
    for (key, value, slot) in [
        ("gamma0", raw.gamma0, &mut cfg.gamma0),
        ("alpha", raw.alpha, &mut cfg.alpha),
    ] {
        if let Some(v) = value {
            if !(v.is_finite() && v >= 0.0) {
                return Err(err(key, format!("must be finite and >= 0, got {v}")));
            }
            *slot = v;
        }
    }

    let fraction = raw.rk4_step_fraction.unwrap_or(DEFAULT_RK4_FRACTION);
    if !(fraction > 0.0 && fraction <= 0.01) {
        return Err(err("rk4_step_fraction", format!("must lie in (0, 0.01], got {fraction}")));
    }
    let method = raw.method.as_deref().unwrap_or("expm");
    cfg.method = parse_method(method, fraction)
        .ok_or_else(|| err("method", format!("expected \"expm\" or \"rk4\", got {method:?}")))?;

    if let Some(mode) = raw.coupling_mode.as_deref() {
        cfg.coupling = match mode {
            "spectral" => CouplingMode::Spectral,
            "literal" => CouplingMode::Literal,
            other => {
                return Err(err(
                    "coupling_mode",
                    format!("expected \"spectral\" or \"literal\", got {other:?}"),
                ))
            }
        };
    }

    cfg.omega = match raw.omega_over_g {
        None => None,
        Some(RawOmega::Scalar(w)) => {
            if !(w.is_finite() && w > 0.0) {
                return Err(err("omega_over_g", format!("must be finite and > 0, got {w}")));
            }
            Some(OmegaSpec::Scalar(w))
        }
        Some(RawOmega::Range { start, stop, step }) => {
            let g = range_grid(start, stop, step).map_err(|r| err("omega_over_g", r))?;
            if g[0] <= 0.0 {
                return Err(err("omega_over_g", format!("grid start must be > 0, got {start}")));
            }
            Some(OmegaSpec::Grid(g))
        }
        Some(RawOmega::Conditions { condition_k: mut ks }) => {
            if ks.is_empty() {
                return Err(err("omega_over_g", "condition_k list is empty".into()));
            }
            ks.sort_unstable();
            if ks.windows(2).any(|w| w[1] == w[0]) {
                return Err(err("omega_over_g", "condition_k has repeated entries".into()));
            }
            let g = condition_grid(&ks, cfg.gtilde)
                .map_err(|e| err("omega_over_g", e.to_string()))?;
            Some(OmegaSpec::Grid(g))
        }
    };

    cfg.output_path = raw.output_path.map(PathBuf::from);
    cfg.seed = raw.seed.unwrap_or(0);
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_gives_defaults() {
        for src in ["{}", "", "  \n"] {
            let cfg = parse_config(src).unwrap();
            assert_eq!(cfg, RunConfig::default());
            assert_eq!((cfg.gamma0, cfg.alpha, cfg.gtilde), (1e-3, 1e-3, 0.1));
        }
    }

    #[test]
    fn negative_rate_names_key() {
        let e = parse_config("{\n  \"gamma0\": -1\n}").unwrap_err();
        match &e {
            ConfigError::Range { key, position, .. } => {
                assert_eq!(*key, "gamma0");
                assert_eq!(*position, Position { line: 2, column: 3 });
            }
            other => panic!("{other:?}"),
        }
        assert!(e.to_string().contains("gamma0"));
    }

    #[test]
    fn condition_grid_points() {
        let cfg = parse_config(r#"{"omega_over_g": {"condition_k": [1,2,3]}}"#).unwrap();
        let g = cfg.omega.unwrap().points();
        for (a, b) in g.iter().zip([3.2785, 6.5569, 9.8354]) {
            assert!((a - b).abs() < 1e-4);
        }
    }

    #[test]
    fn condition_list_order_does_not_matter() {
        let a = parse_config(r#"{"omega_over_g": {"condition_k": [3, 1, 2]}}"#).unwrap();
        let b = parse_config(r#"{"omega_over_g": {"condition_k": [1, 2, 3]}}"#).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn range_grid_is_inclusive() {
        let cfg = parse_config(r#"{"omega_over_g": {"start": 1, "stop": 20, "step": 0.5}}"#).unwrap();
        let g = cfg.omega.unwrap().points();
        assert_eq!(g.len(), 39);
        assert_eq!(g[0], 1.0);
        assert_eq!(*g.last().unwrap(), 20.0);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn unknown_key_rejected_with_position() {
        let e = parse_config("{\"gamma0\": 0.1,\n \"beta\": 2}").unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("beta"), "{msg}");
        assert!(msg.contains("line 2"), "{msg}");
    }

    #[test]
    fn malformed_and_range_errors() {
        assert!(matches!(parse_config("{\"gamma0\": }"), Err(ConfigError::Syntax(_))));
        for src in [
            r#"{"method": "euler"}"#,
            r#"{"rk4_step_fraction": 0.5}"#,
            r#"{"gtilde_over_g": 1.0}"#,
            r#"{"omega_over_g": -3}"#,
            r#"{"omega_over_g": {"start": 2, "stop": 1, "step": 0.5}}"#,
            r#"{"omega_over_g": {"start": 0, "stop": 1, "step": 0.5}}"#,
            r#"{"omega_over_g": {"condition_k": []}}"#,
            r#"{"omega_over_g": {"condition_k": [2, 1, 2]}}"#,
            r#"{"coupling_mode": "other"}"#,
        ] {
            assert!(matches!(parse_config(src), Err(ConfigError::Range { .. })), "{src}");
        }
    }

    #[test]
    fn method_and_mode() {
        let cfg = parse_config(
            r#"{"method": "rk4", "rk4_step_fraction": 0.001, "coupling_mode": "literal", "seed": 7}"#,
        )
        .unwrap();
        assert_eq!(cfg.method, EvolutionMethod::Rk4 { step_fraction: 0.001 });
        assert_eq!(cfg.coupling, CouplingMode::Literal);
        assert_eq!(cfg.seed, 7);
    }
}
