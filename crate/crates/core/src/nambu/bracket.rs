use std::fmt;

use super::field::{central_partial, ScalarField, StepRule, NESTED_STEP};
use super::linalg::determinant;
use crate::error::{Error, Result};

fn check_fields(fields: &[ScalarField], n: usize) -> Result<()> {
    if fields.len() != n {
        return Err(Error::Arity {
            expected: n,
            got: fields.len(),
        });
    }
    match fields.iter().find(|f| f.arity() != n) {
        Some(f) => Err(Error::Arity {
            expected: n,
            got: f.arity(),
        }),
        None => Ok(()),
    }
}

/// Order-n Nambu bracket `{f_1, …, f_n}(p) = det(∂f_i/∂x_j)`.
pub fn nambu_bracket(fields: &[ScalarField], p: &[f64]) -> Result<f64> {
    check_fields(fields, p.len())?;
    let rows: Vec<Vec<f64>> = fields.iter().map(|f| f.grad(p)).collect();
    Ok(determinant(&rows))
}

/// The bracket `{f_1, …, f_n}` as a field in its own right. Its gradient is
/// taken by central differences with the nested step.
pub fn bracket_field(fields: &[ScalarField]) -> Result<ScalarField> {
    let n = fields.first().map(ScalarField::arity).unwrap_or(0);
    check_fields(fields, n)?;
    let label = format!(
        "{{{}}}",
        fields
            .iter()
            .map(ScalarField::label)
            .collect::<Vec<_>>()
            .join(", ")
    );
    let owned = fields.to_vec();
    Ok(ScalarField::new(n, label, move |p| {
        let rows: Vec<Vec<f64>> = owned.iter().map(|f| f.grad(p)).collect();
        determinant(&rows)
    })
    .with_step(StepRule::Fixed(NESTED_STEP)))
}

/// Phase-space dimension `n` with Hamiltonians `H_1, …, H_{n-1}`.
#[derive(Clone)]
pub struct NambuSystem {
    n: usize,
    hamiltonians: Vec<ScalarField>,
    flow_scale: f64,
    name: String,
}

impl fmt::Debug for NambuSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NambuSystem")
            .field("name", &self.name)
            .field("n", &self.n)
            .field("hamiltonians", &self.hamiltonians)
            .field("flow_scale", &self.flow_scale)
            .finish()
    }
}

impl NambuSystem {
    pub fn new(n: usize, hamiltonians: Vec<ScalarField>) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(
                "n",
                format!("phase space needs n >= 2, got {n}"),
            ));
        }
        if hamiltonians.len() != n - 1 {
            return Err(Error::Arity {
                expected: n - 1,
                got: hamiltonians.len(),
            });
        }
        if let Some(h) = hamiltonians.iter().find(|h| h.arity() != n) {
            return Err(Error::Arity {
                expected: n,
                got: h.arity(),
            });
        }
        Ok(Self {
            n,
            hamiltonians,
            flow_scale: 1.0,
            name: String::from("custom"),
        })
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Multiplies the vector field by a constant. Brackets are unaffected.
    pub fn with_flow_scale(mut self, scale: f64) -> Self {
        self.flow_scale = scale;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn hamiltonians(&self) -> &[ScalarField] {
        &self.hamiltonians
    }

    pub fn flow_scale(&self) -> f64 {
        self.flow_scale
    }

    pub fn invariants(&self, p: &[f64]) -> Vec<f64> {
        self.hamiltonians.iter().map(|h| h.value(p)).collect()
    }

    /// `V_i(p) = {x^i, H_1, …, H_{n-1}}(p)`, times the flow scale.
    pub fn velocity(&self, p: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n);
        rows.push(vec![0.0; n]);
        rows.extend(self.hamiltonians.iter().map(|h| h.grad(p)));
        (0..n)
            .map(|i| {
                rows[0]
                    .iter_mut()
                    .enumerate()
                    .for_each(|(j, v)| *v = f64::from(u8::from(i == j)));
                self.flow_scale * determinant(&rows)
            })
            .collect()
    }
}

/// The Nambu vector field of `system` as a closure.
pub fn nambu_vector_field(system: &NambuSystem) -> impl Fn(&[f64]) -> Vec<f64> + '_ {
    move |p| system.velocity(p)
}

/// `Σ_i ∂V_i/∂x_i` at `p` by central differences of the vector field.
pub fn liouville_divergence(system: &NambuSystem, p: &[f64]) -> Result<f64> {
    if p.len() != system.n() {
        return Err(Error::Arity {
            expected: system.n(),
            got: p.len(),
        });
    }
    Ok((0..p.len())
        .map(|i| central_partial(&|q: &[f64]| system.velocity(q)[i], p, i, StepRule::Relative))
        .sum())
}

/// Jacobian determinant of `map` at `p`, by central differences.
pub fn canonical_jacobian<M>(map: M, p: &[f64]) -> Result<f64>
where
    M: Fn(&[f64]) -> Vec<f64>,
{
    let n = p.len();
    let image = map(p);
    if image.len() != n {
        return Err(Error::Arity {
            expected: n,
            got: image.len(),
        });
    }
    let columns: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let h = 1e-6_f64.max(1e-6 * p[j].abs());
            let (mut up, mut down) = (p.to_vec(), p.to_vec());
            up[j] += h;
            down[j] -= h;
            let width = up[j] - down[j];
            let (fu, fd) = (map(&up), map(&down));
            fu.iter().zip(&fd).map(|(a, b)| (a - b) / width).collect()
        })
        .collect();
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| columns.iter().map(|c| c[i]).collect())
        .collect();
    Ok(determinant(&rows))
}

/// Canonical when the Jacobian determinant is within `tol` of 1.
pub fn is_canonical(jacobian: f64, tol: f64) -> bool {
    (jacobian - 1.0).abs() <= tol
}
