use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::nambu::{
    check_bivector_identity, liouville_divergence, verify_bracket_axiom, Axiom, NambuSystem,
};
use crate::systems::{
    euler_top, nahm, random_points, random_polynomial_field, NahmScale, NAHM_REFERENCE_PARAMS,
};

pub const SKEW_TOL: f64 = 1e-12;
pub const LEIBNIZ_TOL: f64 = 1e-6;
pub const FUNDAMENTAL_TOL: f64 = 1e-4;
pub const LIOUVILLE_TOL: f64 = 1e-6;
pub const BIVECTOR_TOL: f64 = 1e-5;

const POLY_DEGREE: u32 = 3;
const POINT_RADIUS: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub seed: u64,
    pub points: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl SuiteResult {
    fn new(suite: &str, seed: u64, points: usize, max_residual: f64, tolerance: f64) -> Self {
        Self {
            suite: suite.to_string(),
            seed,
            points,
            max_residual,
            tolerance,
            pass: max_residual.is_finite() && max_residual < tolerance,
        }
    }
}

/// Max residual of `axiom` over `tuples` random polynomial tuples, each
/// probed at `points` random points. `make` picks (n, field count, axiom).
fn axiom_suite<F>(seed: u64, tuples: usize, points: usize, make: F) -> Result<(usize, f64)>
where
    F: Fn(usize, &mut ChaCha8Rng) -> (usize, usize, Axiom),
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0_f64;
    let mut count = 0;
    for t in 0..tuples {
        let (n, nfields, axiom) = make(t, &mut rng);
        let fields = (0..nfields)
            .map(|_| random_polynomial_field(rng.gen(), n, POLY_DEGREE))
            .collect::<Result<Vec<_>>>()?;
        for p in random_points(rng.gen(), n, points, POINT_RADIUS) {
            worst = worst.max(verify_bracket_axiom(&axiom, &fields, &p)?);
            count += 1;
        }
    }
    Ok((count, worst))
}

fn reference_systems(scale: NahmScale) -> Result<Vec<NambuSystem>> {
    let [a1, a2, a3] = NAHM_REFERENCE_PARAMS;
    Ok(vec![euler_top(1.0, 2.0, 3.0)?, nahm(a1, a2, a3, scale)?])
}

fn suites_for_seed(
    seed: u64,
    tuples: usize,
    points: usize,
    scale: NahmScale,
) -> Result<Vec<SuiteResult>> {
    let mut out = Vec::new();

    let (count, worst) = axiom_suite(seed, tuples, points, |t, rng| {
        let n = 2 + t % 3;
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        (n, n, Axiom::Skew(perm))
    })?;
    out.push(SuiteResult::new("skew", seed, count, worst, SKEW_TOL));

    let (count, worst) = axiom_suite(seed ^ 0x1e1b, tuples, points, |_, _| (3, 4, Axiom::Leibniz))?;
    out.push(SuiteResult::new("leibniz", seed, count, worst, LEIBNIZ_TOL));

    let (count, worst) = axiom_suite(seed ^ 0xf1, tuples, points, |t, _| {
        let n = 2 + t % 2;
        (n, 2 * n - 1, Axiom::Fundamental)
    })?;
    out.push(SuiteResult::new(
        "fundamental",
        seed,
        count,
        worst,
        FUNDAMENTAL_TOL,
    ));

    let systems = reference_systems(scale)?;
    let pts = random_points(seed ^ 0x11, 3, tuples * points, 2.0);
    let mut worst = 0.0_f64;
    for sys in &systems {
        for p in &pts {
            worst = worst.max(liouville_divergence(sys, p)?.abs());
        }
    }
    out.push(SuiteResult::new(
        "liouville",
        seed,
        pts.len() * systems.len(),
        worst,
        LIOUVILLE_TOL,
    ));

    let pts = random_points(seed ^ 0xb1, 3, (tuples * points / 10).max(1), 2.0);
    let mut worst = 0.0_f64;
    let mut count = 0;
    for sys in &systems {
        for r in 1..sys.n() {
            for p in &pts {
                worst = worst.max(check_bivector_identity(sys, r, p)?);
                count += 1;
            }
        }
    }
    out.push(SuiteResult::new(
        "bivector",
        seed,
        count,
        worst,
        BIVECTOR_TOL,
    ));

    Ok(out)
}

/// Runs every identity suite once per seed, seeds in parallel.
pub fn run_check_suites(
    seeds: &[u64],
    tuples: usize,
    points: usize,
    scale: NahmScale,
) -> Result<Vec<SuiteResult>> {
    let per_seed = seeds
        .par_iter()
        .map(|&seed| suites_for_seed(seed, tuples, points, scale))
        .collect::<Result<Vec<_>>>()?;
    Ok(per_seed.into_iter().flatten().collect())
}
