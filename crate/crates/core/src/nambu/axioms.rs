use serde::{Deserialize, Serialize};

use super::bracket::{bracket_field, nambu_bracket};
use super::field::ScalarField;
use super::linalg::permutation_sign;
use crate::error::{Error, Result};

/// Bracket identity to check numerically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Axiom {
    /// `{f_1, …, f_n} = (-1)^ε(σ) {f_σ(1), …, f_σ(n)}` for the given 0-based σ.
    Skew(Vec<usize>),
    /// `{f_1 f_2, f_3, …, f_{n+1}} = f_1 {f_2, f_3, …} + f_2 {f_1, f_3, …}`.
    Leibniz,
    /// `{f_1, …, f_{n-1}, {g_1, …, g_n}} = Σ_i {g_1, …, {f_1, …, f_{n-1}, g_i}, …, g_n}`,
    /// fields given as `f_1, …, f_{n-1}, g_1, …, g_n`. For `n = 2` this is the
    /// Jacobi identity `{f_1,{f_2,f_3}} = {{f_1,f_2},f_3} + {f_2,{f_1,f_3}}`.
    Fundamental,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxiomKind {
    Skew,
    Leibniz,
    Fundamental,
}

impl Axiom {
    pub fn kind(&self) -> AxiomKind {
        match self {
            Axiom::Skew(_) => AxiomKind::Skew,
            Axiom::Leibniz => AxiomKind::Leibniz,
            Axiom::Fundamental => AxiomKind::Fundamental,
        }
    }
}

fn expect_count(fields: &[ScalarField], want: usize) -> Result<()> {
    if fields.len() == want {
        Ok(())
    } else {
        Err(Error::Arity {
            expected: want,
            got: fields.len(),
        })
    }
}

/// `|LHS - RHS|` of the chosen identity at `p`.
pub fn verify_bracket_axiom(axiom: &Axiom, fields: &[ScalarField], p: &[f64]) -> Result<f64> {
    let n = p.len();
    match axiom {
        Axiom::Skew(perm) => {
            expect_count(fields, n)?;
            let mut seen = vec![false; n];
            if perm.len() != n
                || perm
                    .iter()
                    .any(|&i| i >= n || std::mem::replace(&mut seen[i], true))
            {
                return Err(Error::invalid(
                    "permutation",
                    format!("{perm:?} is not a permutation of 0..{n}"),
                ));
            }
            let permuted: Vec<ScalarField> = perm.iter().map(|&i| fields[i].clone()).collect();
            let lhs = nambu_bracket(fields, p)?;
            let rhs = permutation_sign(perm) * nambu_bracket(&permuted, p)?;
            Ok((lhs - rhs).abs())
        }
        Axiom::Leibniz => {
            expect_count(fields, n + 1)?;
            let (f1, f2, rest) = (&fields[0], &fields[1], &fields[2..]);
            let with = |head: &ScalarField| -> Vec<ScalarField> {
                std::iter::once(head.clone())
                    .chain(rest.iter().cloned())
                    .collect()
            };
            let lhs = nambu_bracket(&with(&f1.product(f2)), p)?;
            let rhs = f1.value(p) * nambu_bracket(&with(f2), p)?
                + f2.value(p) * nambu_bracket(&with(f1), p)?;
            Ok((lhs - rhs).abs())
        }
        Axiom::Fundamental => {
            expect_count(fields, 2 * n - 1)?;
            let (f, g) = fields.split_at(n - 1);
            let outer = |inner: ScalarField| -> Vec<ScalarField> {
                f.iter().cloned().chain([inner]).collect()
            };
            let lhs = nambu_bracket(&outer(bracket_field(g)?), p)?;
            let mut rhs = 0.0;
            for i in 0..n {
                let mut args = g.to_vec();
                args[i] = bracket_field(&outer(g[i].clone()))?;
                rhs += nambu_bracket(&args, p)?;
            }
            Ok((lhs - rhs).abs())
        }
    }
}
