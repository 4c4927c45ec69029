use super::time::TimeModel;
use super::trajectory::{Sample, Trajectory};
use crate::error::{Error, Result};
use crate::nambu::{NambuSystem, PhasePoint};

/// Solution of `dy/ds = V(y)` on a uniform `s` grid starting at `s = 0`.
#[derive(Debug, Clone)]
pub struct SPath {
    system: NambuSystem,
    s: Vec<f64>,
    states: Vec<Vec<f64>>,
    invariants: Vec<Vec<f64>>,
}

impl SPath {
    pub fn system(&self) -> &NambuSystem {
        &self.system
    }

    pub fn s(&self) -> &[f64] {
        &self.s
    }

    pub fn states(&self) -> &[Vec<f64>] {
        &self.states
    }

    pub fn invariants(&self) -> &[Vec<f64>] {
        &self.invariants
    }

    pub fn s_max(&self) -> f64 {
        *self.s.last().expect("path has at least the initial sample")
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    /// State at `s` by linear interpolation between nodes.
    pub fn state_at(&self, s: f64) -> Result<Vec<f64>> {
        let s_max = self.s_max();
        if !(s >= 0.0 && s <= s_max) {
            return Err(Error::Coverage {
                t: f64::NAN,
                required: s,
                s_max,
            });
        }
        let k = self.s.partition_point(|&node| node <= s).saturating_sub(1);
        if k + 1 >= self.s.len() || self.s[k] == s {
            return Ok(self.states[k].clone());
        }
        let frac = (s - self.s[k]) / (self.s[k + 1] - self.s[k]);
        Ok(self.states[k]
            .iter()
            .zip(&self.states[k + 1])
            .map(|(a, b)| a + frac * (b - a))
            .collect())
    }

    /// The path itself, read as a classical trajectory (`t = s`).
    pub fn to_trajectory(&self) -> Trajectory {
        Trajectory::from_samples(
            self.s
                .iter()
                .zip(&self.states)
                .zip(&self.invariants)
                .map(|((&s, x), h)| Sample {
                    t: s,
                    s,
                    state: x.clone(),
                    invariants: h.clone(),
                })
                .collect(),
        )
    }
}

fn axpy(y: &[f64], h: f64, k: &[f64]) -> Vec<f64> {
    y.iter().zip(k).map(|(a, b)| a + h * b).collect()
}

/// One classical fourth-order Runge-Kutta step.
pub fn rk4_step<F>(f: &F, y: &[f64], h: f64) -> Vec<f64>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let k1 = f(y);
    let k2 = f(&axpy(y, 0.5 * h, &k1));
    let k3 = f(&axpy(y, 0.5 * h, &k2));
    let k4 = f(&axpy(y, h, &k3));
    (0..y.len())
        .map(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect()
}

/// Fixed-step RK4 for `dy/ds = V(y)` on `[0, s_max]`.
///
/// The step is shrunk to `s_max / ceil(s_max / step)` so the last node lands
/// on `s_max`.
pub fn integrate_s_time(
    system: &NambuSystem,
    x0: &PhasePoint,
    s_max: f64,
    step: f64,
) -> Result<SPath> {
    if x0.dim() != system.n() {
        return Err(Error::Arity {
            expected: system.n(),
            got: x0.dim(),
        });
    }
    if !(s_max > 0.0 && s_max.is_finite()) {
        return Err(Error::invalid(
            "s_max",
            format!("s_max must be positive, got {s_max}"),
        ));
    }
    if !(step > 0.0) {
        return Err(Error::invalid(
            "step",
            format!("step must be positive, got {step}"),
        ));
    }
    let ratio = s_max / step;
    let steps = if (ratio - ratio.round()).abs() < 1e-9 * ratio.max(1.0) {
        ratio.round()
    } else {
        ratio.ceil()
    } as usize;
    let h = s_max / steps as f64;

    let field = |y: &[f64]| system.velocity(y);
    let mut s = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut invariants = Vec::with_capacity(steps + 1);
    let mut y = x0.to_vec();
    s.push(0.0);
    invariants.push(system.invariants(&y));
    states.push(y.clone());
    for k in 1..=steps {
        y = rk4_step(&field, &y, h);
        if !y.iter().all(|v| v.is_finite()) {
            return Err(Error::BlowUp { last_valid: k - 1 });
        }
        s.push(if k == steps { s_max } else { k as f64 * h });
        invariants.push(system.invariants(&y));
        states.push(y.clone());
    }
    Ok(SPath {
        system: system.clone(),
        s,
        states,
        invariants,
    })
}

/// `x(t) = y(S(t))` on `t_grid`.
pub fn subordinate(path: &SPath, model: &TimeModel, t_grid: &[f64]) -> Result<Trajectory> {
    if let Some(w) = t_grid.windows(2).find(|w| !(w[0] < w[1])) {
        return Err(Error::invalid(
            "t_grid",
            format!(
                "times must be strictly increasing, found {} then {}",
                w[0], w[1]
            ),
        ));
    }
    let s_max = path.s_max();
    let mut samples = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let s = model.s_of_t(t)?;
        if !(s >= 0.0 && s <= s_max) {
            return Err(Error::Coverage {
                t,
                required: s,
                s_max,
            });
        }
        let state = path.state_at(s)?;
        let invariants = path.system().invariants(&state);
        samples.push(Sample {
            t,
            s,
            state,
            invariants,
        });
    }
    Ok(Trajectory::from_samples(samples))
}

/// `s` range a run over `t_grid` needs under `model`.
pub fn required_s_max(model: &TimeModel, t_grid: &[f64]) -> Result<f64> {
    t_grid
        .iter()
        .map(|&t| model.s_of_t(t))
        .try_fold(0.0_f64, |acc, s| Ok(acc.max(s?)))
}
