use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use super::check::run_check_suites;
use super::config::{Command, RunConfig, TimeMode};
use super::CliError;
use crate::dynamics::{
    conservation_report, format_real, integrate_s_time, required_s_max, subordinate, TimeModel,
};
use crate::fractal::{estimate_dimension, measure_table, Staircase};
use crate::nambu::PhasePoint;

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    /// Artifacts written, manifest last.
    pub files: Vec<PathBuf>,
    /// Human-readable lines for stdout.
    pub summary: Vec<String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes through a temp file in the same directory, then renames.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = path.parent().unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err(dir))?;
    tmp.write_all(bytes).map_err(io_err(path))?;
    tmp.as_file().sync_all().map_err(io_err(path))?;
    tmp.persist(path).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        source: e.error,
    })?;
    Ok(())
}

fn alpha_label(alpha: f64) -> String {
    format!("{alpha}")
}

struct Artifacts {
    dir: PathBuf,
    written: Vec<(String, String, usize)>,
}

impl Artifacts {
    fn new(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    fn put(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        write_atomic(&self.dir.join(name), contents.as_bytes())?;
        self.written.push((
            name.to_string(),
            sha256_hex(contents.as_bytes()),
            contents.len(),
        ));
        Ok(())
    }

    fn finish(
        mut self,
        cfg: &RunConfig,
        results: Value,
        summary: Vec<String>,
    ) -> Result<RunOutcome, CliError> {
        self.written.sort();
        let files: Vec<Value> = self
            .written
            .iter()
            .map(|(name, sha, bytes)| json!({"name": name, "sha256": sha, "bytes": bytes}))
            .collect();
        let manifest = json!({
            "command": cfg.command.as_str(),
            "version": env!("CARGO_PKG_VERSION"),
            "config": config_json(cfg),
            "results": results,
            "files": files,
        });
        let mut text = serde_json::to_string_pretty(&manifest).expect("manifest is plain JSON");
        text.push('\n');
        write_atomic(&self.dir.join("manifest.json"), text.as_bytes())?;
        let mut paths: Vec<PathBuf> = self
            .written
            .iter()
            .map(|(n, _, _)| self.dir.join(n))
            .collect();
        paths.push(self.dir.join("manifest.json"));
        Ok(RunOutcome {
            files: paths,
            summary,
        })
    }
}

fn config_json(cfg: &RunConfig) -> Value {
    let set = &cfg.set;
    json!({
        "set": {"c1": set.c1(), "c2": set.c2(), "epsilon": set.epsilon(), "c0": set.c0(), "depth": cfg.depth},
        "alpha": cfg.effective_alphas(),
        "system": {"name": cfg.system.name, "parameters": cfg.system.parameters},
        "time": {"mode": cfg.time_mode},
        "grid": cfg.grid,
        "integrator": {"s_max": cfg.s_max, "step": cfg.step},
        "x0": cfg.x0,
        "seeds": cfg.seeds,
        "paper_faithful": cfg.paper_faithful,
        "dimension": {"max_depth": cfg.max_depth, "tol": cfg.tol},
        "check": {"tuples": cfg.tuples, "points": cfg.points},
    })
}

/// Executes the configured command, writing artifacts under `out_dir`.
pub fn run(cfg: &RunConfig, out_dir: &Path) -> Result<RunOutcome, CliError> {
    let mut art = Artifacts::new(out_dir)?;
    match cfg.command {
        Command::Dimension => run_dimension(cfg, &mut art).and_then(|(r, s)| art.finish(cfg, r, s)),
        Command::Staircase => run_staircase(cfg, &mut art).and_then(|(r, s)| art.finish(cfg, r, s)),
        Command::Simulate => run_simulate(cfg, &mut art).and_then(|(r, s)| art.finish(cfg, r, s)),
        Command::Check => {
            let (results, summary, failed) = run_check(cfg, &mut art)?;
            let outcome = art.finish(cfg, results, summary)?;
            if failed.is_empty() {
                Ok(outcome)
            } else {
                Err(CliError::CheckFailed(failed))
            }
        }
    }
}

type Step = Result<(Value, Vec<String>), CliError>;

fn run_dimension(cfg: &RunConfig, art: &mut Artifacts) -> Step {
    let estimate = estimate_dimension(&cfg.set, cfg.max_depth, cfg.tol)?;
    let mut alphas = vec![estimate];
    alphas.extend(&cfg.alphas);
    let mut csv = String::from("depth,alpha,mu\n");
    for &a in &alphas {
        for row in measure_table(&cfg.set, a, cfg.max_depth)? {
            let _ = writeln!(
                csv,
                "{},{},{}",
                row.depth,
                format_real(row.alpha),
                format_real(row.mu)
            );
        }
    }
    art.put("dimension.csv", &csv)?;
    let exact = cfg.set.similarity_dimension();
    Ok((
        json!({"estimate": estimate, "similarity_dimension": exact}),
        vec![format!(
            "dimension estimate: {estimate:.6} (similarity dimension {exact:.6})"
        )],
    ))
}

fn run_staircase(cfg: &RunConfig, art: &mut Artifacts) -> Step {
    let mut results = Vec::new();
    let mut summary = Vec::new();
    for alpha in cfg.effective_alphas() {
        let st = Staircase::new(cfg.set, alpha, cfg.depth)?;
        let mut csv = String::from("x,S\n");
        for (x, s) in st.sample(cfg.grid.samples) {
            let _ = writeln!(csv, "{},{}", format_real(x), format_real(s));
        }
        let name = format!("staircase_alpha_{}.csv", alpha_label(alpha));
        art.put(&name, &csv)?;
        results.push(json!({"alpha": alpha, "total_measure": st.total_measure(), "file": name}));
        summary.push(format!(
            "alpha {alpha}: total measure {:.9}",
            st.total_measure()
        ));
    }
    Ok((Value::Array(results), summary))
}

fn simulate_alphas(cfg: &RunConfig) -> Vec<f64> {
    match cfg.time_mode {
        TimeMode::Classical => vec![1.0],
        TimeMode::PowerLaw if cfg.alphas.is_empty() => vec![1.0],
        _ => cfg.effective_alphas(),
    }
}

fn run_simulate(cfg: &RunConfig, art: &mut Artifacts) -> Step {
    let system = cfg
        .system
        .build(cfg.nahm_scale())
        .map_err(|e| CliError::config("system", e.to_string()))?;
    if cfg.x0.len() != system.n() {
        return Err(CliError::config(
            "x0",
            format!(
                "expected {} coordinates for `{}`, got {}",
                system.n(),
                system.name(),
                cfg.x0.len()
            ),
        ));
    }
    let x0 = PhasePoint::new(cfg.x0.clone()).map_err(|e| CliError::config("x0", e.to_string()))?;
    let grid = cfg.grid.points();

    let models = simulate_alphas(cfg)
        .into_iter()
        .map(|alpha| match cfg.time_mode {
            TimeMode::Classical => Ok(TimeModel::Classical),
            TimeMode::PowerLaw => TimeModel::power_law(alpha),
            TimeMode::ExactStaircase => {
                Staircase::new(cfg.set, alpha, cfg.depth).map(TimeModel::ExactStaircase)
            }
        })
        .collect::<crate::Result<Vec<_>>>()?;

    let mut needed = 0.0_f64;
    for m in &models {
        needed = needed.max(required_s_max(m, &grid)?);
    }
    let s_max = cfg.s_max.unwrap_or(needed.max(cfg.step));
    let path = integrate_s_time(&system, &x0, s_max, cfg.step)?;

    let runs = models
        .par_iter()
        .map(|m| {
            let traj = subordinate(&path, m, &grid)?;
            let report = conservation_report(&traj, &system);
            Ok((m.alpha(), traj.to_csv_string(), report))
        })
        .collect::<crate::Result<Vec<_>>>()?;

    let mut results = Vec::new();
    let mut summary = Vec::new();
    for (alpha, csv, report) in runs {
        let name = format!("trajectory_alpha_{}.csv", alpha_label(alpha));
        art.put(&name, &csv)?;
        summary.push(format!(
            "{name}: max invariant drift {:.3e}",
            report.max_drift()
        ));
        results.push(json!({"alpha": alpha, "file": name, "conservation": report}));
    }
    Ok((
        json!({
            "system": system.name(),
            "flow_scale": system.flow_scale(),
            "time_mode": cfg.time_mode,
            "s_max": s_max,
            "runs": results,
        }),
        summary,
    ))
}

fn run_check(
    cfg: &RunConfig,
    art: &mut Artifacts,
) -> Result<(Value, Vec<String>, Vec<String>), CliError> {
    let entries = run_check_suites(&cfg.seeds, cfg.tuples, cfg.points, cfg.nahm_scale())?;
    let mut failed: Vec<String> = entries
        .iter()
        .filter(|e| !e.pass)
        .map(|e| format!("{} (seed {})", e.suite, e.seed))
        .collect();
    failed.dedup();
    let report = json!({"pass": failed.is_empty(), "entries": entries});
    let mut text = serde_json::to_string_pretty(&report).expect("report is plain JSON");
    text.push('\n');
    art.put("check_report.json", &text)?;
    let summary = entries
        .iter()
        .map(|e| {
            format!(
                "{:<12} seed {:<4} {} max residual {:.3e} (tol {:.0e})",
                e.suite,
                e.seed,
                if e.pass { "PASS" } else { "FAIL" },
                e.max_residual,
                e.tolerance
            )
        })
        .collect();
    Ok((json!({"pass": failed.is_empty()}), summary, failed))
}
