//! Built-in example systems and seeded random polynomial fields.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nambu::{nambu_bracket, NambuSystem, ScalarField};

/// Nahm coefficients used for the published x1/x2/x3 plots.
pub const NAHM_REFERENCE_PARAMS: [f64; 3] = [0.40452, -0.222486, 0.494413];

/// Normalization of the Nahm flow.
///
/// The Jacobian of `H1 = a1 x1² - a2 x2²`, `H2 = a1 x1² - a3 x3²` carries a
/// factor 4 (one 2 from each square) relative to the printed equations
/// `dx1/dt = a2 a3 x2 x3`, etc. `PaperFaithful` divides the field by 4.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NahmScale {
    #[default]
    DeterminantFaithful,
    PaperFaithful,
}

impl NahmScale {
    pub fn factor(self) -> f64 {
        match self {
            NahmScale::DeterminantFaithful => 1.0,
            NahmScale::PaperFaithful => 0.25,
        }
    }
}

/// Free asymmetric top: `H1 = Σ L_i² / 2I_i`, `H2 = ½ Σ L_i²`.
pub fn euler_top(i1: f64, i2: f64, i3: f64) -> Result<NambuSystem> {
    let inertia = [i1, i2, i3];
    if let Some(bad) = inertia.iter().find(|&&i| !(i > 0.0 && i.is_finite())) {
        return Err(Error::invalid(
            "inertia",
            format!("moments of inertia must be positive, got {bad}"),
        ));
    }
    let h1 = ScalarField::new(3, "H1", move |l| {
        (0..3).map(|k| l[k] * l[k] / (2.0 * inertia[k])).sum()
    })
    .with_gradient(move |l| (0..3).map(|k| l[k] / inertia[k]).collect());
    let h2 = ScalarField::new(3, "H2", |l| 0.5 * l.iter().map(|x| x * x).sum::<f64>())
        .with_gradient(|l| l.to_vec());
    Ok(NambuSystem::new(3, vec![h1, h2])?.named("euler-top"))
}

/// Nahm system: `H1 = a1 x1² - a2 x2²`, `H2 = a1 x1² - a3 x3²`.
pub fn nahm(a1: f64, a2: f64, a3: f64, scale: NahmScale) -> Result<NambuSystem> {
    if let Some(bad) = [a1, a2, a3].iter().find(|a| !a.is_finite()) {
        return Err(Error::NonFinite(format!("Nahm coefficient {bad}")));
    }
    let h1 = ScalarField::new(3, "H1", move |x| a1 * x[0] * x[0] - a2 * x[1] * x[1])
        .with_gradient(move |x| vec![2.0 * a1 * x[0], -2.0 * a2 * x[1], 0.0]);
    let h2 = ScalarField::new(3, "H2", move |x| a1 * x[0] * x[0] - a3 * x[2] * x[2])
        .with_gradient(move |x| vec![2.0 * a1 * x[0], 0.0, -2.0 * a3 * x[2]]);
    Ok(NambuSystem::new(3, vec![h1, h2])?
        .named("nahm")
        .with_flow_scale(scale.factor()))
}

/// Invariants of the 2-D oscillator on coordinates `(p1, p2, x1, x2)`:
/// `H1 = p1² + x1²`, `H2 = p2² + x2²`, `H3 = x1 p2 - x2 p1`, `H4 = p1 p2 + x1 x2`.
pub fn harmonic_oscillator_4() -> Vec<ScalarField> {
    const P1: usize = 0;
    const P2: usize = 1;
    const X1: usize = 2;
    const X2: usize = 3;
    vec![
        ScalarField::new(4, "H1", |z| z[P1] * z[P1] + z[X1] * z[X1])
            .with_gradient(|z| vec![2.0 * z[P1], 0.0, 2.0 * z[X1], 0.0]),
        ScalarField::new(4, "H2", |z| z[P2] * z[P2] + z[X2] * z[X2])
            .with_gradient(|z| vec![0.0, 2.0 * z[P2], 0.0, 2.0 * z[X2]]),
        ScalarField::new(4, "H3", |z| z[X1] * z[P2] - z[X2] * z[P1])
            .with_gradient(|z| vec![-z[X2], z[X1], z[P2], -z[P1]]),
        ScalarField::new(4, "H4", |z| z[P1] * z[P2] + z[X1] * z[X2])
            .with_gradient(|z| vec![z[P2], z[P1], z[X2], z[X1]]),
    ]
}

/// `{H1, H2, H3, f}` over `(p1, p2, x1, x2)`.
pub fn oscillator_bracket(f: &ScalarField, z: &[f64]) -> Result<f64> {
    let mut fields: Vec<ScalarField> = harmonic_oscillator_4().into_iter().take(3).collect();
    fields.push(f.clone());
    nambu_bracket(&fields, z)
}

pub const MAX_RANDOM_DEGREE: u32 = 3;

/// Dense polynomial in `n` variables: `(exponents, coefficient)` terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    n: usize,
    terms: Vec<(Vec<u32>, f64)>,
}

impl Polynomial {
    pub fn new(n: usize, terms: Vec<(Vec<u32>, f64)>) -> Result<Self> {
        if let Some((e, _)) = terms.iter().find(|(e, _)| e.len() != n) {
            return Err(Error::Arity {
                expected: n,
                got: e.len(),
            });
        }
        Ok(Self { n, terms })
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(Vec<u32>, f64)] {
        &self.terms
    }

    pub fn coefficients(&self) -> Vec<f64> {
        self.terms.iter().map(|t| t.1).collect()
    }

    pub fn eval(&self, p: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                c * e
                    .iter()
                    .zip(p)
                    .map(|(&k, x)| x.powi(k as i32))
                    .product::<f64>()
            })
            .sum()
    }

    pub fn grad(&self, p: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.n];
        for (e, c) in &self.terms {
            for (d, gd) in g.iter_mut().enumerate() {
                if e[d] == 0 {
                    continue;
                }
                let mut term = c * f64::from(e[d]);
                for (k, (&ek, x)) in e.iter().zip(p).enumerate() {
                    let power = if k == d { ek - 1 } else { ek };
                    term *= x.powi(power as i32);
                }
                *gd += term;
            }
        }
        g
    }

    pub fn into_field(self, label: impl Into<String>) -> ScalarField {
        let n = self.n;
        let eval = self.clone();
        ScalarField::new(n, label, move |p| eval.eval(p)).with_gradient(move |p| self.grad(p))
    }
}

/// Exponent vectors of all monomials of total degree `<= degree`, ordered by
/// degree and then lexicographically.
pub fn monomials(n: usize, degree: u32) -> Vec<Vec<u32>> {
    fn fill(prefix: &mut Vec<u32>, n: usize, left: u32, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == n {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=left).rev() {
            prefix.push(k);
            fill(prefix, n, left - k, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for d in 0..=degree {
        fill(&mut Vec::with_capacity(n), n, d, &mut out);
    }
    out
}

/// Polynomial with coefficients uniform in `[-1, 1]` drawn from a generator
/// seeded by `seed`.
pub fn random_polynomial(seed: u64, n: usize, degree: u32) -> Result<Polynomial> {
    if degree > MAX_RANDOM_DEGREE {
        return Err(Error::OutOfRange {
            name: "degree",
            value: f64::from(degree),
            lo: 0.0,
            hi: f64::from(MAX_RANDOM_DEGREE),
        });
    }
    if n == 0 {
        return Err(Error::invalid("n", "need at least one variable"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let terms = monomials(n, degree)
        .into_iter()
        .map(|e| (e, rng.gen_range(-1.0..=1.0)))
        .collect();
    Polynomial::new(n, terms)
}

pub fn random_polynomial_field(seed: u64, n: usize, degree: u32) -> Result<ScalarField> {
    Ok(random_polynomial(seed, n, degree)?.into_field(format!("poly[seed={seed},deg={degree}]")))
}

/// Seeded points uniform in `[-radius, radius]^n`.
pub fn random_points(seed: u64, n: usize, count: usize, radius: f64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (0..n).map(|_| rng.gen_range(-radius..=radius)).collect())
        .collect()
}

/// Built-in system addressable by name, with its parameter map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub name: String,
    #[serde(default)]
    pub parameters: BTreeMap<String, f64>,
}

impl SystemSpec {
    pub const NAMES: [&'static str; 3] = ["euler-top", "nahm", "oscillator4"];

    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            parameters: BTreeMap::new(),
        }
    }

    fn allowed_keys(&self) -> Result<&'static [&'static str]> {
        match self.name.as_str() {
            "euler-top" => Ok(&["I1", "I2", "I3"]),
            "nahm" => Ok(&["a1", "a2", "a3"]),
            "oscillator4" => Ok(&[]),
            other => Err(Error::invalid(
                "system.name",
                format!(
                    "unknown system `{other}`, expected one of {:?}",
                    Self::NAMES
                ),
            )),
        }
    }

    /// Checks the name and parameter keys, then fills in defaults.
    pub fn resolved(&self) -> Result<SystemSpec> {
        let keys = self.allowed_keys()?;
        if let Some(k) = self.parameters.keys().find(|k| !keys.contains(&k.as_str())) {
            return Err(Error::invalid(
                "system.parameters",
                format!(
                    "unknown parameter `{k}` for `{}`, expected one of {keys:?}",
                    self.name
                ),
            ));
        }
        let defaults: &[f64] = match self.name.as_str() {
            "euler-top" => &[1.0, 2.0, 3.0],
            "nahm" => &NAHM_REFERENCE_PARAMS,
            _ => &[],
        };
        let mut out = self.clone();
        for (k, d) in keys.iter().zip(defaults) {
            out.parameters.entry((*k).to_string()).or_insert(*d);
        }
        Ok(out)
    }

    pub fn build(&self, scale: NahmScale) -> Result<NambuSystem> {
        let spec = self.resolved()?;
        let p = |k: &str| spec.parameters[k];
        match spec.name.as_str() {
            "euler-top" => euler_top(p("I1"), p("I2"), p("I3")),
            "nahm" => nahm(p("a1"), p("a2"), p("a3"), scale),
            _ => Err(Error::invalid(
                "system.name",
                "oscillator4 exposes bracket structure only and has no integrable flow",
            )),
        }
    }
}
