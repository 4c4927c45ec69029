use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::fractal::{
    CantorSpec, DEFAULT_DIMENSION_TOL, DEFAULT_STAIRCASE_DEPTH, MAX_STAIRCASE_DEPTH,
};
use crate::systems::{NahmScale, SystemSpec};

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "FRACNAMBU_OUT";
pub const DEFAULT_OUTPUT_DIR: &str = "out";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Dimension,
    Staircase,
    Simulate,
    Check,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Dimension => "dimension",
            Command::Staircase => "staircase",
            Command::Simulate => "simulate",
            Command::Check => "check",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TimeMode {
    Classical,
    PowerLaw,
    ExactStaircase,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum AlphaInput {
    One(f64),
    Many(Vec<f64>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSet {
    c1: Option<f64>,
    c2: Option<f64>,
    epsilon: Option<f64>,
    c0: Option<f64>,
    depth: Option<u32>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSystem {
    name: String,
    #[serde(default)]
    parameters: std::collections::BTreeMap<String, f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTime {
    mode: TimeMode,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    t_min: Option<f64>,
    t_max: Option<f64>,
    samples: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIntegrator {
    s_max: Option<f64>,
    step: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDimension {
    max_depth: Option<u32>,
    tol: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCheck {
    tuples: Option<usize>,
    points: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    command: Command,
    set: Option<RawSet>,
    alpha: Option<AlphaInput>,
    system: Option<RawSystem>,
    time: Option<RawTime>,
    grid: Option<RawGrid>,
    integrator: Option<RawIntegrator>,
    x0: Option<Vec<f64>>,
    seeds: Option<Vec<u64>>,
    paper_faithful: Option<bool>,
    dimension: Option<RawDimension>,
    check: Option<RawCheck>,
    output: Option<RawOutput>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Grid {
    pub t_min: f64,
    pub t_max: f64,
    pub samples: usize,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        match self.samples {
            0 => Vec::new(),
            1 => vec![self.t_min],
            n => (0..n)
                .map(|i| {
                    if i + 1 == n {
                        self.t_max
                    } else {
                        self.t_min + (self.t_max - self.t_min) * i as f64 / (n - 1) as f64
                    }
                })
                .collect(),
        }
    }
}

/// Fully validated run description with every default applied.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub set: CantorSpec,
    pub depth: u32,
    /// Explicit α values; empty means "use the set's own dimension".
    pub alphas: Vec<f64>,
    pub system: SystemSpec,
    pub time_mode: TimeMode,
    pub grid: Grid,
    pub s_max: Option<f64>,
    pub step: f64,
    pub x0: Vec<f64>,
    pub seeds: Vec<u64>,
    pub paper_faithful: bool,
    pub max_depth: u32,
    pub tol: f64,
    pub tuples: usize,
    pub points: usize,
    pub output_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn nahm_scale(&self) -> NahmScale {
        if self.paper_faithful {
            NahmScale::PaperFaithful
        } else {
            NahmScale::DeterminantFaithful
        }
    }

    /// α values to run: the explicit list, or the set's dimension.
    pub fn effective_alphas(&self) -> Vec<f64> {
        if self.alphas.is_empty() {
            vec![self.set.similarity_dimension()]
        } else {
            self.alphas.clone()
        }
    }

    /// Output directory: explicit config, then the environment, then `out`.
    pub fn resolve_output_dir(&self) -> PathBuf {
        self.output_dir
            .clone()
            .or_else(|| std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR))
    }

    pub fn set_depth(&mut self, depth: u32) -> Result<(), CliError> {
        if depth > MAX_STAIRCASE_DEPTH {
            return Err(CliError::config(
                "set.depth",
                format!("depth must be at most {MAX_STAIRCASE_DEPTH}, got {depth}"),
            ));
        }
        self.depth = depth;
        Ok(())
    }
}

fn check_alpha(field: &str, alpha: f64) -> Result<f64, CliError> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(alpha)
    } else {
        Err(CliError::config(
            field,
            format!("alpha must lie in (0,1], got {alpha}"),
        ))
    }
}

fn positive(field: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::config(
            field,
            format!("must be positive and finite, got {v}"),
        ))
    }
}

/// Parses and validates a JSON run configuration.
///
/// Unknown keys are rejected with their path. An empty document counts as `{}`.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let text = if text.trim().is_empty() { "{}" } else { text };
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        CliError::config(
            if path == "." { "<root>" } else { &path },
            e.inner().to_string(),
        )
    })?;

    let set = {
        let s = raw.set.as_ref();
        let c1 = s.and_then(|s| s.c1).unwrap_or(0.0);
        let c2 = s.and_then(|s| s.c2).unwrap_or(1.0);
        let eps = s.and_then(|s| s.epsilon).unwrap_or(1.0 / 3.0);
        let spec =
            CantorSpec::new(c1, c2, eps).map_err(|e| CliError::config("set", e.to_string()))?;
        match s.and_then(|s| s.c0) {
            Some(c0) => spec
                .with_reference(c0)
                .map_err(|e| CliError::config("set.c0", e.to_string()))?,
            None => spec,
        }
    };
    let depth = raw
        .set
        .as_ref()
        .and_then(|s| s.depth)
        .unwrap_or(DEFAULT_STAIRCASE_DEPTH);

    let alphas = match raw.alpha {
        None => Vec::new(),
        Some(AlphaInput::One(a)) => vec![check_alpha("alpha", a)?],
        Some(AlphaInput::Many(list)) => {
            if list.is_empty() {
                return Err(CliError::config("alpha", "alpha list must not be empty"));
            }
            list.iter()
                .enumerate()
                .map(|(i, &a)| check_alpha(&format!("alpha[{i}]"), a))
                .collect::<Result<_, _>>()?
        }
    };

    let system = {
        let spec = match raw.system {
            Some(s) => SystemSpec {
                name: s.name,
                parameters: s.parameters,
            },
            None => SystemSpec::new("nahm"),
        };
        spec.resolved()
            .map_err(|e| CliError::config("system", e.to_string()))?
    };

    let time_mode = raw.time.map(|t| t.mode).unwrap_or(TimeMode::PowerLaw);
    let grid = {
        let g = raw.grid.as_ref();
        let (dmin, dmax) = match time_mode {
            TimeMode::ExactStaircase => (set.c1(), set.c2()),
            _ => (0.0, 10.0),
        };
        let grid = Grid {
            t_min: g.and_then(|g| g.t_min).unwrap_or(dmin),
            t_max: g.and_then(|g| g.t_max).unwrap_or(dmax),
            samples: g.and_then(|g| g.samples).unwrap_or(201),
        };
        if !(grid.t_min < grid.t_max) {
            return Err(CliError::config(
                "grid",
                format!("need t_min < t_max, got {} and {}", grid.t_min, grid.t_max),
            ));
        }
        if grid.samples < 2 {
            return Err(CliError::config(
                "grid.samples",
                format!("need at least 2 samples, got {}", grid.samples),
            ));
        }
        grid
    };

    let integ = raw.integrator.as_ref();
    let step = positive(
        "integrator.step",
        integ.and_then(|i| i.step).unwrap_or(1e-3),
    )?;
    let s_max = integ
        .and_then(|i| i.s_max)
        .map(|s| positive("integrator.s_max", s))
        .transpose()?;

    let x0 = raw.x0.unwrap_or_else(|| vec![1.0, 1.0, 1.0]);
    if let Some(bad) = x0.iter().find(|v| !v.is_finite()) {
        return Err(CliError::config(
            "x0",
            format!("coordinates must be finite, got {bad}"),
        ));
    }

    let dim = raw.dimension.as_ref();
    let max_depth = dim.and_then(|d| d.max_depth).unwrap_or(16);
    if !(4..=crate::fractal::MAX_BUILD_DEPTH).contains(&max_depth) {
        return Err(CliError::config(
            "dimension.max_depth",
            format!(
                "must lie in 4..={}, got {max_depth}",
                crate::fractal::MAX_BUILD_DEPTH
            ),
        ));
    }
    let tol = positive(
        "dimension.tol",
        dim.and_then(|d| d.tol).unwrap_or(DEFAULT_DIMENSION_TOL),
    )?;

    let seeds = raw.seeds.unwrap_or_else(|| vec![1, 2, 3]);
    if seeds.is_empty() {
        return Err(CliError::config("seeds", "seed list must not be empty"));
    }

    let mut cfg = RunConfig {
        command: raw.command,
        set,
        depth: DEFAULT_STAIRCASE_DEPTH,
        alphas,
        system,
        time_mode,
        grid,
        s_max,
        step,
        x0,
        seeds,
        paper_faithful: raw.paper_faithful.unwrap_or(false),
        max_depth,
        tol,
        tuples: raw.check.as_ref().and_then(|c| c.tuples).unwrap_or(100),
        points: raw.check.as_ref().and_then(|c| c.points).unwrap_or(10),
        output_dir: raw.output.and_then(|o| o.dir),
    };
    cfg.set_depth(depth)?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_nahm_uses_published_coefficients() {
        let cfg = parse_config(r#"{"command": "simulate", "system": {"name": "nahm"}}"#).unwrap();
        assert_eq!(cfg.system.parameters["a1"], 0.40452);
        assert_eq!(cfg.system.parameters["a2"], -0.222486);
        assert_eq!(cfg.system.parameters["a3"], 0.494413);
        assert_eq!(cfg.depth, 20);
        assert_eq!(cfg.step, 1e-3);
        assert_eq!(cfg.x0, vec![1.0, 1.0, 1.0]);
        assert!(!cfg.paper_faithful);
        assert_eq!(cfg.time_mode, TimeMode::PowerLaw);
    }

    #[test]
    fn empty_document_names_command() {
        for text in ["", "{}", "  \n"] {
            let err = parse_config(text).unwrap_err();
            assert_eq!(err.exit_code(), 2);
            assert!(err.to_string().contains("command"), "{err}");
        }
    }

    #[test]
    fn alpha_out_of_range() {
        let err = parse_config(r#"{"command": "staircase", "alpha": 1.5}"#).unwrap_err();
        assert!(err.to_string().contains("alpha must lie in (0,1]"), "{err}");
        let err = parse_config(r#"{"command": "simulate", "alpha": [1.0, 0.0]}"#).unwrap_err();
        assert!(err.to_string().contains("alpha[1]"), "{err}");
        assert!(parse_config(r#"{"command": "simulate", "alpha": []}"#).is_err());
    }

    #[test]
    fn unknown_keys_are_rejected_with_path() {
        let err = parse_config(r#"{"command": "simulate", "grid": {"t_max": 3, "tmax": 4}}"#)
            .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("grid") && msg.contains("tmax"), "{msg}");
        let err = parse_config(r#"{"command": "simulate", "bogus": 1}"#).unwrap_err();
        assert!(err.to_string().contains("bogus"));
        let err = parse_config(
            r#"{"command": "simulate", "system": {"name": "nahm", "parameters": {"a4": 1}}}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("a4"));
    }

    #[test]
    fn type_mismatch_reports_expected_type() {
        let err =
            parse_config(r#"{"command": "simulate", "grid": {"samples": "many"}}"#).unwrap_err();
        let msg = err.to_string();
        assert!(
            msg.contains("grid.samples") && msg.contains("expected"),
            "{msg}"
        );
    }

    #[test]
    fn unknown_system_and_command() {
        assert!(
            parse_config(r#"{"command": "simulate", "system": {"name": "pendulum"}}"#).is_err()
        );
        assert!(parse_config(r#"{"command": "plot"}"#).is_err());
    }

    #[test]
    fn grid_defaults_follow_time_mode() {
        let cfg = parse_config(r#"{"command": "simulate", "time": {"mode": "exact-staircase"}}"#)
            .unwrap();
        assert_eq!((cfg.grid.t_min, cfg.grid.t_max), (0.0, 1.0));
        let pts = cfg.grid.points();
        assert_eq!(pts.len(), 201);
        assert_eq!(*pts.last().unwrap(), 1.0);
    }
}
