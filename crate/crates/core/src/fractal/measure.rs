use statrs::function::gamma::gamma;

use super::cantor::{build_cantor, CantorSpec, FractalApprox};
use crate::error::{Error, Result};

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            "alpha",
            format!("alpha must lie in (0,1], got {alpha}"),
        ))
    }
}

/// `Γ(α + 1)`, the normalization in front of every cell contribution.
pub fn gamma_factor(alpha: f64) -> f64 {
    gamma(alpha + 1.0)
}

/// Coarsest construction level whose intervals are no longer than `mesh`.
fn level_for_mesh(spec: &CantorSpec, mesh: f64) -> u32 {
    let limit = mesh * (1.0 + 1e-12);
    let mut level = 0;
    while spec.interval_length(level) > limit {
        level += 1;
    }
    level
}

/// Coarse-grained measure `μ_δ^α` of the set with mesh bound `δ = mesh`.
///
/// The infimum over partitions is attained by the partition aligned with the
/// coarsest construction level admissible under `mesh`: cells inside gaps
/// contribute nothing, and the slivers needed to isolate a gap shrink to zero.
/// Levels coarser than the approximation are obtained by merging sibling
/// intervals, finer ones by self-similar refinement.
pub fn coarse_measure(approx: &FractalApprox, alpha: f64, mesh: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(mesh > 0.0) {
        return Err(Error::invalid(
            "mesh",
            format!("mesh must be positive, got {mesh}"),
        ));
    }
    let spec = approx.spec();
    let level = level_for_mesh(spec, mesh);
    let depth = approx.depth();
    let ivs = approx.intervals();

    let sum: f64 = if level <= depth {
        let group = 1usize << (depth - level);
        ivs.chunks(group)
            .map(|c| (c[c.len() - 1].hi - c[0].lo).powf(alpha))
            .sum()
    } else {
        let extra = (level - depth) as i32;
        let copies = 2f64.powi(extra);
        let shrink = spec.ratio().powi(extra);
        ivs.iter()
            .map(|iv| copies * (iv.len() * shrink).powf(alpha))
            .sum()
    };
    Ok(gamma_factor(alpha) * sum)
}

/// One row of a depth/measure table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureRow {
    pub depth: u32,
    pub alpha: f64,
    pub mu: f64,
}

/// Coarse measure at mesh = interval length of each depth in `0..=max_depth`.
pub fn measure_table(spec: &CantorSpec, alpha: f64, max_depth: u32) -> Result<Vec<MeasureRow>> {
    check_alpha(alpha)?;
    let approx = build_cantor(spec, max_depth)?;
    (0..=max_depth)
        .map(|depth| {
            let mu = coarse_measure(&approx, alpha, spec.interval_length(depth))?;
            Ok(MeasureRow { depth, alpha, mu })
        })
        .collect()
}

pub const DEFAULT_DIMENSION_TOL: f64 = 1e-3;
const MAX_BISECTION_STEPS: usize = 60;

/// Estimates the fractal dimension by bisection on α.
///
/// At each trial α the growth ratio `μ(depth) / μ(depth - 1)` of the coarse
/// measure between the two finest levels classifies α as diverging
/// (`> 1 + tol`), decaying (`< 1 - tol`) or on the plateau.
pub fn estimate_dimension(spec: &CantorSpec, max_depth: u32, tol: f64) -> Result<f64> {
    if max_depth < 4 {
        return Err(Error::invalid(
            "max_depth",
            format!("need max_depth >= 4, got {max_depth}"),
        ));
    }
    if !(tol > 0.0) {
        return Err(Error::invalid(
            "tol",
            format!("tol must be positive, got {tol}"),
        ));
    }
    let approx = build_cantor(spec, max_depth)?;
    let fine = spec.interval_length(max_depth);
    let coarse = spec.interval_length(max_depth - 1);
    let ratio = |alpha: f64| -> Result<f64> {
        let r = coarse_measure(&approx, alpha, fine)? / coarse_measure(&approx, alpha, coarse)?;
        if r.is_finite() {
            Ok(r)
        } else {
            Err(Error::NonConvergence(format!(
                "growth ratio at alpha = {alpha} is {r} (measure underflow at depth {max_depth}?)"
            )))
        }
    };

    // no decay even at α = 1: the set fills the interval at this resolution
    if ratio(1.0)? >= 1.0 - tol {
        return Ok(1.0);
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    let floor = 1e-9;
    if ratio(floor)? <= 1.0 + tol {
        return Err(Error::NonConvergence(format!(
            "measure does not diverge for small alpha at depth {max_depth}"
        )));
    }
    for _ in 0..MAX_BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        let r = ratio(mid)?;
        if r > 1.0 + tol {
            lo = mid;
        } else if r < 1.0 - tol {
            hi = mid;
        } else {
            return Ok(mid);
        }
    }
    Err(Error::NonConvergence(format!(
        "no plateau within {MAX_BISECTION_STEPS} steps, bracket [{lo}, {hi}]"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fractal::cantor::indicator;

    /// Explicit partition sum: one cell per depth-`k` interval, each gap cut
    /// into a free interior cell flanked by two slivers of width `sliver`
    /// (closed cells touching the set count), all weighted by the indicator.
    /// Returns the total and the part contributed by the slivers.
    fn partition_oracle(spec: &CantorSpec, alpha: f64, k: u32, sliver: f64) -> (f64, f64) {
        let approx = build_cantor(spec, k).unwrap();
        let mut cuts = vec![spec.c1()];
        for (i, iv) in approx.intervals().iter().enumerate() {
            if i > 0 {
                cuts.push(iv.lo - sliver);
                cuts.push(iv.lo);
            }
            cuts.push(iv.hi);
            if i + 1 < approx.intervals().len() {
                cuts.push(iv.hi + sliver);
            }
        }
        let g = gamma_factor(alpha);
        let (mut total, mut slivers) = (0.0, 0.0);
        for w in cuts.windows(2) {
            let term =
                g * (w[1] - w[0]).powf(alpha) * f64::from(indicator(&approx, w[0], w[1]).unwrap());
            total += term;
            if w[1] - w[0] < 2.0 * sliver {
                slivers += term;
            }
        }
        (total, slivers)
    }

    /// Uniform partition of `[c1, c2]` into cells of width `mesh`.
    fn uniform_oracle(spec: &CantorSpec, alpha: f64, mesh: f64, depth: u32) -> f64 {
        let approx = build_cantor(spec, depth).unwrap();
        let n = (spec.length() / mesh).ceil() as usize;
        let g = gamma_factor(alpha);
        (0..n)
            .map(|i| {
                let a = spec.c1() + mesh * i as f64;
                let b = (a + mesh).min(spec.c2());
                g * (b - a).powf(alpha) * f64::from(indicator(&approx, a, b).unwrap())
            })
            .sum()
    }

    #[test]
    fn full_interval_unit_alpha() {
        let spec = CantorSpec::middle_third();
        let a = build_cantor(&spec, 0).unwrap();
        assert!((coarse_measure(&a, 1.0, 1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((coarse_measure(&a, 1.0, 5.0).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn plateau_at_similarity_dimension() {
        let spec = CantorSpec::middle_third();
        let alpha = 2f64.ln() / 3f64.ln();
        let approx = build_cantor(&spec, 12).unwrap();
        let g = gamma_factor(alpha);
        assert!((g - 0.8970).abs() < 1e-3, "{g}");
        for k in 0..=16 {
            let mu = coarse_measure(&approx, alpha, spec.interval_length(k)).unwrap();
            assert!((mu - g).abs() < 1e-9 * g, "k={k} mu={mu}");
        }
    }

    #[test]
    fn unit_alpha_decays_geometrically() {
        let spec = CantorSpec::middle_third();
        let approx = build_cantor(&spec, 10).unwrap();
        for k in 0..=14 {
            let mu = coarse_measure(&approx, 1.0, spec.interval_length(k)).unwrap();
            assert!((mu - (2.0f64 / 3.0).powi(k as i32)).abs() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn matches_explicit_partition_oracle() {
        for &(eps, alpha) in &[(1.0 / 3.0, 0.63), (0.5, 0.5), (0.2, 0.9), (1.0 / 3.0, 1.0)] {
            let spec = CantorSpec::new(0.0, 1.0, eps).unwrap();
            let approx = build_cantor(&spec, 10).unwrap();
            for k in [1, 4, 8] {
                let got = coarse_measure(&approx, alpha, spec.interval_length(k)).unwrap();
                for sliver in [1e-6, 1e-9].map(|f| f * spec.interval_length(k)) {
                    let (want, excess) = partition_oracle(&spec, alpha, k, sliver);
                    assert!(want >= got - 1e-12, "eps={eps} k={k}");
                    assert!(
                        (want - got - excess).abs() < 1e-9 * want.max(1.0),
                        "eps={eps} k={k}: {got} vs {want} (sliver excess {excess})"
                    );
                }
                // any other admissible partition is no smaller
                let uniform =
                    uniform_oracle(&spec, alpha, spec.interval_length(k) * (1.0 - 1e-9), 12);
                assert!(
                    uniform >= got * (1.0 - 1e-9),
                    "eps={eps} k={k}: uniform {uniform} < {got}"
                );
            }
        }
    }

    #[test]
    fn rejects_bad_alpha_and_mesh() {
        let a = build_cantor(&CantorSpec::middle_third(), 2).unwrap();
        assert!(coarse_measure(&a, 0.0, 0.1).is_err());
        assert!(coarse_measure(&a, 1.5, 0.1).is_err());
        assert!(coarse_measure(&a, 0.5, 0.0).is_err());
    }

    /// Least-squares box-counting slope of log N(δ) against log(1/δ), using
    /// midpoints of a fine cover as samples. Independent of the measure code.
    fn box_counting(spec: &CantorSpec) -> f64 {
        let approx = build_cantor(spec, 18).unwrap();
        let points: Vec<f64> = approx
            .intervals()
            .iter()
            .map(|iv| 0.5 * (iv.lo + iv.hi))
            .collect();
        let samples: Vec<(f64, f64)> = (2..=14)
            .map(|k| {
                let size = spec.interval_length(k);
                let mut boxes: Vec<i64> = points
                    .iter()
                    .map(|x| ((x - spec.c1()) / size).floor() as i64)
                    .collect();
                boxes.dedup();
                (-size.ln(), (boxes.len() as f64).ln())
            })
            .collect();
        let n = samples.len() as f64;
        let mx = samples.iter().map(|s| s.0).sum::<f64>() / n;
        let my = samples.iter().map(|s| s.1).sum::<f64>() / n;
        let sxy: f64 = samples.iter().map(|s| (s.0 - mx) * (s.1 - my)).sum();
        let sxx: f64 = samples.iter().map(|s| (s.0 - mx).powi(2)).sum();
        sxy / sxx
    }

    #[test]
    fn dimension_matches_closed_form_and_box_counting() {
        for eps in [1.0 / 3.0, 0.5, 0.2, 0.7] {
            let spec = CantorSpec::new(0.0, 1.0, eps).unwrap();
            let est = estimate_dimension(&spec, 12, DEFAULT_DIMENSION_TOL).unwrap();
            let exact = spec.similarity_dimension();
            assert!((est - exact).abs() < 2e-3, "eps={eps}: {est} vs {exact}");
            assert!((box_counting(&spec) - exact).abs() < 0.05, "eps={eps}");
        }
        assert!((std::f64::consts::LN_2 / 3f64.ln() - 0.6309).abs() < 1e-4);
    }

    #[test]
    fn near_full_interval_has_dimension_one() {
        let spec = CantorSpec::new(0.0, 1.0, 1e-12).unwrap();
        assert_eq!(
            estimate_dimension(&spec, 8, DEFAULT_DIMENSION_TOL).unwrap(),
            1.0
        );
    }

    #[test]
    fn dimension_rejects_shallow_depth() {
        assert!(estimate_dimension(&CantorSpec::middle_third(), 3, 1e-3).is_err());
    }
}
