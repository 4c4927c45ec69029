use std::sync::OnceLock;

/// Largest order evaluated by explicit Levi-Civita expansion.
pub const LEVI_CIVITA_MAX: usize = 4;

/// All permutations of `0..n` with their signs, in lexicographic order.
pub fn permutations(n: usize) -> Vec<(Vec<usize>, f64)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<(Vec<usize>, f64)>) {
        let n = used.len();
        if prefix.len() == n {
            out.push((prefix.clone(), permutation_sign(prefix)));
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

/// `(-1)^(inversions)`; 0 if `perm` repeats an index.
pub fn permutation_sign(perm: &[usize]) -> f64 {
    let mut sign = 1.0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] == perm[j] {
                return 0.0;
            }
            if perm[i] > perm[j] {
                sign = -sign;
            }
        }
    }
    sign
}

type SignedPermutations = Vec<(Vec<usize>, f64)>;

fn cached_permutations(n: usize) -> &'static [(Vec<usize>, f64)] {
    static TABLES: [OnceLock<SignedPermutations>; LEVI_CIVITA_MAX + 1] =
        [const { OnceLock::new() }; LEVI_CIVITA_MAX + 1];
    TABLES[n].get_or_init(|| permutations(n))
}

/// Determinant of a square matrix given as rows.
///
/// Orders up to four use the Levi-Civita expansion `Σ ε_σ Π m[i][σ(i)]`;
/// larger ones use Gaussian elimination with partial pivoting.
pub fn determinant(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len();
    debug_assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
    match n {
        0 => 1.0,
        1 => rows[0][0],
        n if n <= LEVI_CIVITA_MAX => cached_permutations(n)
            .iter()
            .map(|(perm, sign)| {
                sign * perm
                    .iter()
                    .enumerate()
                    .map(|(i, &j)| rows[i][j])
                    .product::<f64>()
            })
            .sum(),
        _ => lu_determinant(rows),
    }
}

#[allow(clippy::needless_range_loop)]
fn lu_determinant(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len();
    let mut m: Vec<Vec<f64>> = rows.to_vec();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .expect("non-empty range");
        if m[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col];
        det *= p;
        for r in col + 1..n {
            let factor = m[r][col] / p;
            if factor != 0.0 {
                for c in col..n {
                    m[r][c] -= factor * m[col][c];
                }
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<f64>> {
        (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect()
    }

    #[test]
    fn signs() {
        assert_eq!(permutation_sign(&[0, 1, 2]), 1.0);
        assert_eq!(permutation_sign(&[1, 0, 2]), -1.0);
        assert_eq!(permutation_sign(&[1, 2, 0]), 1.0);
        assert_eq!(permutation_sign(&[1, 1, 0]), 0.0);
        assert_eq!(permutations(4).len(), 24);
        let total: f64 = permutations(4).iter().map(|p| p.1).sum();
        assert_eq!(total, 0.0);
    }

    #[test]
    fn small_determinants() {
        assert_eq!(determinant(&[vec![2.0, 1.0], vec![1.0, 3.0]]), 5.0);
        let rot = |t: f64| {
            vec![
                vec![t.cos(), -t.sin(), 0.0],
                vec![t.sin(), t.cos(), 0.0],
                vec![0.0, 0.0, 1.0],
            ]
        };
        assert!((determinant(&rot(0.7)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn expansion_agrees_with_elimination() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 2..=4 {
            for _ in 0..50 {
                let m = random_matrix(&mut rng, n);
                assert!((determinant(&m) - lu_determinant(&m)).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn elimination_matches_expansion_for_five() {
        // Laplace expansion along the first row, each minor by Levi-Civita
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let m = random_matrix(&mut rng, 5);
            let laplace: f64 = (0..5)
                .map(|j| {
                    let minor: Vec<Vec<f64>> = m[1..]
                        .iter()
                        .map(|r| {
                            r.iter()
                                .enumerate()
                                .filter(|(c, _)| *c != j)
                                .map(|(_, v)| *v)
                                .collect()
                        })
                        .collect();
                    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                    sign * m[0][j] * determinant(&minor)
                })
                .sum();
            assert!((determinant(&m) - laplace).abs() < 1e-12);
        }
    }

    #[test]
    fn singular_matrix() {
        let m = vec![vec![1.0; 6]; 6];
        assert_eq!(determinant(&m), 0.0);
    }
}
