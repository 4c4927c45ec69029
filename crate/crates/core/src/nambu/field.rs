use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use crate::error::{Error, Result};

pub type EvalFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type GradFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// Step used when differentiating bracket-valued fields and bivectors.
pub const NESTED_STEP: f64 = 1e-4;

/// A point `(x^1, …, x^n)` of phase space, `n >= 2`, all entries finite.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasePoint(Vec<f64>);

impl PhasePoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::invalid(
                "phase point",
                format!("need n >= 2 coordinates, got {}", coords.len()),
            ));
        }
        if let Some(bad) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::NonFinite(format!("phase point coordinate {bad}")));
        }
        Ok(Self(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for PhasePoint {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Finite-difference step rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepRule {
    /// `h = max(1e-6, 1e-6 |x|)`.
    Relative,
    Fixed(f64),
}

impl StepRule {
    fn step(self, x: f64) -> f64 {
        match self {
            StepRule::Relative => 1e-6_f64.max(1e-6 * x.abs()),
            StepRule::Fixed(h) => h,
        }
    }
}

/// Central difference of `f` along coordinate `i`, divided by the step that
/// was actually representable.
pub fn central_partial(f: &dyn Fn(&[f64]) -> f64, p: &[f64], i: usize, rule: StepRule) -> f64 {
    let h = rule.step(p[i]);
    let mut q = p.to_vec();
    let (up, down) = (p[i] + h, p[i] - h);
    q[i] = up;
    let f_up = f(&q);
    q[i] = down;
    let f_down = f(&q);
    (f_up - f_down) / (up - down)
}

pub fn central_gradient(f: &dyn Fn(&[f64]) -> f64, p: &[f64], rule: StepRule) -> Vec<f64> {
    (0..p.len())
        .map(|i| central_partial(f, p, i, rule))
        .collect()
}

/// Smooth function on n-dimensional phase space.
#[derive(Clone)]
pub struct ScalarField {
    arity: usize,
    eval: EvalFn,
    grad: Option<GradFn>,
    step: StepRule,
    label: String,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField")
            .field("label", &self.label)
            .field("arity", &self.arity)
            .field("analytic_gradient", &self.grad.is_some())
            .field("step", &self.step)
            .finish()
    }
}

impl ScalarField {
    pub fn new<F>(arity: usize, label: impl Into<String>, eval: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        Self {
            arity,
            eval: Arc::new(eval),
            grad: None,
            step: StepRule::Relative,
            label: label.into(),
        }
    }

    pub fn with_gradient<G>(mut self, grad: G) -> Self
    where
        G: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        self.grad = Some(Arc::new(grad));
        self
    }

    pub fn with_step(mut self, step: StepRule) -> Self {
        self.step = step;
        self
    }

    /// The coordinate function `x^i` (0-based).
    pub fn coordinate(arity: usize, i: usize) -> Self {
        assert!(
            i < arity,
            "coordinate index {i} out of range for arity {arity}"
        );
        Self::new(arity, format!("x{}", i + 1), move |p| p[i]).with_gradient(move |_| {
            let mut g = vec![0.0; arity];
            g[i] = 1.0;
            g
        })
    }

    pub fn constant(arity: usize, c: f64) -> Self {
        Self::new(arity, format!("{c}"), move |_| c).with_gradient(move |_| vec![0.0; arity])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn has_gradient(&self) -> bool {
        self.grad.is_some()
    }

    pub fn step_rule(&self) -> StepRule {
        self.step
    }

    pub fn value(&self, p: &[f64]) -> f64 {
        (self.eval)(p)
    }

    /// Analytic gradient when available, central differences otherwise.
    pub fn grad(&self, p: &[f64]) -> Vec<f64> {
        match &self.grad {
            Some(g) => g(p),
            None => central_gradient(&*self.eval, p, self.step),
        }
    }

    pub fn central_grad(&self, p: &[f64]) -> Vec<f64> {
        central_gradient(&*self.eval, p, self.step)
    }

    /// `a · self + b · other`.
    pub fn linear_combination(&self, a: f64, other: &ScalarField, b: f64) -> ScalarField {
        assert_eq!(
            self.arity, other.arity,
            "arity mismatch in linear combination"
        );
        let (f, g) = (self.clone(), other.clone());
        let label = format!("{a}*{} + {b}*{}", self.label, other.label);
        let out = ScalarField::new(self.arity, label, {
            let (f, g) = (f.clone(), g.clone());
            move |p| a * f.value(p) + b * g.value(p)
        });
        if f.has_gradient() && g.has_gradient() {
            out.with_gradient(move |p| {
                f.grad(p)
                    .iter()
                    .zip(g.grad(p))
                    .map(|(x, y)| a * x + b * y)
                    .collect()
            })
        } else {
            out
        }
    }

    /// Pointwise product, with a product-rule gradient when both factors
    /// have analytic gradients.
    pub fn product(&self, other: &ScalarField) -> ScalarField {
        assert_eq!(self.arity, other.arity, "arity mismatch in product");
        let (f, g) = (self.clone(), other.clone());
        let label = format!("({})*({})", self.label, other.label);
        let out = ScalarField::new(self.arity, label, {
            let (f, g) = (f.clone(), g.clone());
            move |p| f.value(p) * g.value(p)
        });
        if f.has_gradient() && g.has_gradient() {
            out.with_gradient(move |p| {
                let (fv, gv) = (f.value(p), g.value(p));
                f.grad(p)
                    .iter()
                    .zip(g.grad(p))
                    .map(|(df, dg)| df * gv + fv * dg)
                    .collect()
            })
        } else {
            out
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GradientScheme {
    Analytic,
    CentralDiff,
}

/// `(∂f/∂x_1, …, ∂f/∂x_n)` at `p`.
pub fn gradient(field: &ScalarField, p: &[f64], scheme: GradientScheme) -> Result<Vec<f64>> {
    if field.arity() != p.len() {
        return Err(Error::Arity {
            expected: field.arity(),
            got: p.len(),
        });
    }
    match scheme {
        GradientScheme::Analytic => match &field.grad {
            Some(g) => Ok(g(p)),
            None => Err(Error::MissingGradient(field.label.clone())),
        },
        GradientScheme::CentralDiff => Ok(field.central_grad(p)),
    }
}
