use super::bracket::NambuSystem;
use super::linalg::determinant;
use crate::error::{Error, Result};

fn check_index(system: &NambuSystem, r: usize) -> Result<()> {
    if r >= 1 && r < system.n() {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name: "r",
            value: r as f64,
            lo: 1.0,
            hi: (system.n() - 1) as f64,
        })
    }
}

#[allow(clippy::needless_range_loop)]
fn bivector_from_rows(n: usize, r: usize, mut rows: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let unit = |k: usize| {
        (0..n)
            .map(|j| f64::from(u8::from(j == k)))
            .collect::<Vec<f64>>()
    };
    let mut out = vec![vec![0.0; n]; n];
    for i in 0..n {
        rows[0] = unit(i);
        for j in 0..n {
            if i == j {
                continue;
            }
            rows[r] = unit(j);
            out[i][j] = determinant(&rows);
        }
    }
    out
}

/// Bivector `J` induced by singling out `H_r` (1-based):
/// `J_ij = {x^i, H_1, …, H_{r-1}, x^j, H_{r+1}, …, H_{n-1}}`.
///
/// With this slot placement `V_i = Σ_j J_ij ∂_j H_r` holds for every `r`.
pub fn induced_bivector(system: &NambuSystem, r: usize, p: &[f64]) -> Result<Vec<Vec<f64>>> {
    check_index(system, r)?;
    let n = system.n();
    if p.len() != n {
        return Err(Error::Arity {
            expected: n,
            got: p.len(),
        });
    }
    let mut rows = vec![vec![0.0; n]];
    rows.extend(system.hamiltonians().iter().map(|h| h.grad(p)));
    Ok(bivector_from_rows(n, r, rows))
}

/// `max_{i,j,k} |Σ_l (J_il ∂_l J_jk + J_jl ∂_l J_ki + J_kl ∂_l J_ij)|`, with
/// `∂_l J` by central differences of step `step`.
pub fn check_bivector_identity_with_step(
    system: &NambuSystem,
    r: usize,
    p: &[f64],
    step: f64,
) -> Result<f64> {
    let j0 = induced_bivector(system, r, p)?;
    let n = p.len();
    let dj: Vec<Vec<Vec<f64>>> = (0..n)
        .map(|l| {
            let (mut up, mut down) = (p.to_vec(), p.to_vec());
            up[l] += step;
            down[l] -= step;
            let width = up[l] - down[l];
            let (ju, jd) = (
                induced_bivector(system, r, &up)?,
                induced_bivector(system, r, &down)?,
            );
            Ok(ju
                .iter()
                .zip(&jd)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y) / width).collect())
                .collect())
        })
        .collect::<Result<_>>()?;
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let s: f64 = (0..n)
                    .map(|l| {
                        j0[i][l] * dj[l][j][k] + j0[j][l] * dj[l][k][i] + j0[k][l] * dj[l][i][j]
                    })
                    .sum();
                worst = worst.max(s.abs());
            }
        }
    }
    Ok(worst)
}

pub fn check_bivector_identity(system: &NambuSystem, r: usize, p: &[f64]) -> Result<f64> {
    check_bivector_identity_with_step(system, r, p, super::field::NESTED_STEP)
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;
    use crate::nambu::ScalarField;

    fn linear_system() -> NambuSystem {
        let h1 = ScalarField::new(3, "h1", |p| p[0] + 2.0 * p[1] - p[2])
            .with_gradient(|_| vec![1.0, 2.0, -1.0]);
        let h2 = ScalarField::new(3, "h2", |p| 3.0 * p[2] - p[0])
            .with_gradient(|_| vec![-1.0, 0.0, 3.0]);
        NambuSystem::new(3, vec![h1, h2]).unwrap()
    }

    #[test]
    fn constant_bivector_satisfies_identity() {
        let sys = linear_system();
        for r in 1..=2 {
            assert!(check_bivector_identity(&sys, r, &[0.3, 1.1, -0.4]).unwrap() < 1e-12);
        }
    }

    #[test]
    fn antisymmetric_and_reconstructs_field() {
        let sys = linear_system();
        let p = [0.3, 1.1, -0.4];
        let v = sys.velocity(&p);
        for r in 1..=2 {
            let j = induced_bivector(&sys, r, &p).unwrap();
            let g = sys.hamiltonians()[r - 1].grad(&p);
            for i in 0..3 {
                for k in 0..3 {
                    assert_eq!(j[i][k], -j[k][i]);
                }
                let rec: f64 = (0..3).map(|k| j[i][k] * g[k]).sum();
                assert!((rec - v[i]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn index_out_of_range() {
        let sys = linear_system();
        assert!(induced_bivector(&sys, 0, &[0.0; 3]).is_err());
        assert!(induced_bivector(&sys, 3, &[0.0; 3]).is_err());
    }
}
