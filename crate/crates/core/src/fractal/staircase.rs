use super::cantor::{CantorSpec, Interval};
use super::measure::{check_alpha, gamma_factor};
use crate::error::{Error, Result};

pub const DEFAULT_STAIRCASE_DEPTH: u32 = 20;
/// Beyond this the per-cell masses `M / 2^depth` stop being exact binary fractions.
pub const MAX_STAIRCASE_DEPTH: u32 = 50;

/// Integral staircase function `S_F^α` of a middle-ε Cantor set at finite depth.
///
/// Every depth-level interval carries mass `M / 2^depth`, where `M` is the
/// coarse measure of the whole set at that depth. `S` is flat on every gap and
/// linear inside each depth-level interval. Evaluation walks the construction
/// tree (one split per level), so no table is stored; partial sums of the
/// dyadic masses are exact, which makes gap values bit-identical.
#[derive(Debug, Clone, PartialEq)]
pub struct Staircase {
    spec: CantorSpec,
    alpha: f64,
    depth: u32,
    total_measure: f64,
    offset: f64,
}

/// Position of a point in the construction tree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Cell {
    pub interval: Interval,
    /// Cumulative mass to the left of `interval.lo`.
    pub before: f64,
    pub mass: f64,
}

impl Staircase {
    pub fn new(spec: CantorSpec, alpha: f64, depth: u32) -> Result<Self> {
        check_alpha(alpha)?;
        if depth > MAX_STAIRCASE_DEPTH {
            return Err(Error::OutOfRange {
                name: "depth",
                value: depth as f64,
                lo: 0.0,
                hi: MAX_STAIRCASE_DEPTH as f64,
            });
        }
        let total_measure =
            gamma_factor(alpha) * 2f64.powi(depth as i32) * spec.interval_length(depth).powf(alpha);
        let mut stair = Self {
            spec,
            alpha,
            depth,
            total_measure,
            offset: 0.0,
        };
        stair.offset = stair.cumulative(spec.c0());
        Ok(stair)
    }

    /// Staircase at the set's own dimension `ln 2 / ln(2 / (1 - ε))`.
    pub fn at_dimension(spec: CantorSpec, depth: u32) -> Result<Self> {
        Self::new(spec, spec.similarity_dimension().min(1.0), depth)
    }

    pub fn spec(&self) -> &CantorSpec {
        &self.spec
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// `μ^α(F, c1, c2)` at the configured depth.
    pub fn total_measure(&self) -> f64 {
        self.total_measure
    }

    /// Range `[S(c1), S(c2)]` of attained values.
    pub fn range(&self) -> (f64, f64) {
        (-self.offset, self.total_measure - self.offset)
    }

    /// Mass of `[c1, x]`, walking down to the configured depth.
    fn cumulative(&self, x: f64) -> f64 {
        let (mut lo, mut hi) = (self.spec.c1(), self.spec.c2());
        let mut acc = 0.0;
        let mut mass = self.total_measure;
        for _ in 0..self.depth {
            let (left, right) = self.spec.split(lo, hi);
            mass *= 0.5;
            if x < left.hi {
                hi = left.hi;
            } else if x < right.lo {
                // Closed gap [left.hi, right.lo): one value, not a limit.
                return acc + mass;
            } else {
                acc += mass;
                lo = right.lo;
            }
        }
        acc + mass * ((x - lo) / (hi - lo)).clamp(0.0, 1.0)
    }

    fn check_domain(&self, x: f64) -> Result<()> {
        if x >= self.spec.c1() && x <= self.spec.c2() {
            Ok(())
        } else {
            Err(Error::OutOfRange {
                name: "x",
                value: x,
                lo: self.spec.c1(),
                hi: self.spec.c2(),
            })
        }
    }

    /// `S_F^α(x)`: mass of `[c0, x]`, negated to the left of `c0`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        Ok(self.cumulative(x) - self.offset)
    }

    /// Right-continuous generalized inverse `inf { x : S(x) > s }`, with `c2`
    /// returned at the top of the range. Flat stretches map to their right end.
    /// `S(inverse(s)) = s` up to how finely `f64` resolves a depth-level cell.
    pub fn inverse(&self, s: f64) -> Result<f64> {
        let (lo_s, hi_s) = self.range();
        if !(s >= lo_s && s <= hi_s) {
            return Err(Error::OutOfRange {
                name: "s",
                value: s,
                lo: lo_s,
                hi: hi_s,
            });
        }
        let target = (s + self.offset).clamp(0.0, self.total_measure);
        if target >= self.total_measure {
            return Ok(self.spec.c2());
        }
        let (mut lo, mut hi) = (self.spec.c1(), self.spec.c2());
        let mut acc = 0.0;
        let mut mass = self.total_measure;
        for _ in 0..self.depth {
            let (left, right) = self.spec.split(lo, hi);
            mass *= 0.5;
            let mid = acc + mass;
            if target < mid {
                hi = left.hi;
            } else if target == mid {
                return Ok(right.lo);
            } else {
                acc = mid;
                lo = right.lo;
            }
        }
        Ok(lo + (target - acc) / mass * (hi - lo))
    }

    /// Depth-level interval nearest to `x`, with every ancestor from the
    /// root (index 0) down to the depth level.
    pub(crate) fn ancestry(&self, x: f64) -> Vec<Cell> {
        let mut out = Vec::with_capacity(self.depth as usize + 1);
        let mut cell = Cell {
            interval: Interval {
                lo: self.spec.c1(),
                hi: self.spec.c2(),
            },
            before: 0.0,
            mass: self.total_measure,
        };
        out.push(cell);
        for _ in 0..self.depth {
            let (left, right) = self.spec.split(cell.interval.lo, cell.interval.hi);
            let mass = 0.5 * cell.mass;
            let go_right = x > left.hi && (x >= right.lo || right.lo - x < x - left.hi);
            cell = if go_right {
                Cell {
                    interval: right,
                    before: cell.before + mass,
                    mass,
                }
            } else {
                Cell {
                    interval: left,
                    before: cell.before,
                    mass,
                }
            };
            out.push(cell);
        }
        out
    }

    /// Visits every depth-level interval overlapping `[a, b]`, left to right.
    pub(crate) fn for_each_cell_in(&self, a: f64, b: f64, visit: &mut dyn FnMut(&Cell)) {
        fn walk(
            st: &Staircase,
            cell: Cell,
            level: u32,
            a: f64,
            b: f64,
            visit: &mut dyn FnMut(&Cell),
        ) {
            if cell.interval.hi < a || cell.interval.lo > b {
                return;
            }
            if level == st.depth {
                visit(&cell);
                return;
            }
            let (left, right) = st.spec.split(cell.interval.lo, cell.interval.hi);
            let mass = 0.5 * cell.mass;
            walk(
                st,
                Cell {
                    interval: left,
                    before: cell.before,
                    mass,
                },
                level + 1,
                a,
                b,
                visit,
            );
            walk(
                st,
                Cell {
                    interval: right,
                    before: cell.before + mass,
                    mass,
                },
                level + 1,
                a,
                b,
                visit,
            );
        }
        let root = Cell {
            interval: Interval {
                lo: self.spec.c1(),
                hi: self.spec.c2(),
            },
            before: 0.0,
            mass: self.total_measure,
        };
        walk(self, root, 0, a, b, visit);
    }

    /// `samples` evenly spaced `(x, S(x))` pairs over `[c1, c2]`.
    pub fn sample(&self, samples: usize) -> Vec<(f64, f64)> {
        let (c1, c2) = (self.spec.c1(), self.spec.c2());
        match samples {
            0 => Vec::new(),
            1 => vec![(c1, self.cumulative(c1) - self.offset)],
            n => (0..n)
                .map(|i| {
                    let x = if i + 1 == n {
                        c2
                    } else {
                        c1 + (c2 - c1) * i as f64 / (n - 1) as f64
                    };
                    (x, self.cumulative(x) - self.offset)
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fractal::cantor::build_cantor;
    use crate::fractal::measure::coarse_measure;

    fn middle_third(depth: u32) -> Staircase {
        Staircase::at_dimension(CantorSpec::middle_third(), depth).unwrap()
    }

    #[test]
    fn eval_examples() {
        let st = middle_third(20);
        assert_eq!(st.eval(0.0).unwrap(), 0.0);
        let m = st.total_measure();
        assert!((m - 0.8970).abs() < 1e-3);
        assert!((st.eval(1.0).unwrap() - m).abs() < 1e-14);
        assert_eq!(st.eval(0.5).unwrap(), 0.5 * m);

        let approx = build_cantor(st.spec(), 20).unwrap();
        let mu = coarse_measure(&approx, st.alpha(), st.spec().interval_length(20)).unwrap();
        assert!((m - mu).abs() < 1e-6 * m, "{m} vs {mu}");
    }

    #[test]
    fn eval_rejects_outside() {
        let st = middle_third(8);
        assert!(st.eval(-0.1).is_err());
        assert!(st.eval(1.0 + 1e-12).is_err());
    }

    #[test]
    fn inverse_examples() {
        let st = middle_third(20);
        let m = st.total_measure();
        assert_eq!(st.inverse(0.0).unwrap(), 0.0);
        assert!((st.inverse(0.5 * m).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(st.inverse(m).unwrap(), 1.0);
        assert!(st.inverse(-1e-9).is_err());
        assert!(st.inverse(m * 1.001).is_err());
    }

    #[test]
    fn gap_is_exactly_flat() {
        let st = middle_third(20);
        let a = st.eval(0.4).unwrap();
        for x in [1.0 / 3.0 + 1e-9, 0.45, 0.5, 0.6, 0.66] {
            assert_eq!(st.eval(x).unwrap(), a);
        }
        // deep gap: (7/27, 8/27) at level 3
        let b = st.eval(7.2 / 27.0).unwrap();
        assert_eq!(st.eval(7.9 / 27.0).unwrap(), b);
    }

    #[test]
    fn nonzero_reference_point() {
        let spec = CantorSpec::middle_third().with_reference(0.5).unwrap();
        let st = Staircase::at_dimension(spec, 16).unwrap();
        let m = st.total_measure();
        assert_eq!(st.eval(0.5).unwrap(), 0.0);
        assert!((st.eval(0.0).unwrap() + 0.5 * m).abs() < 1e-15);
        assert!((st.eval(1.0).unwrap() - 0.5 * m).abs() < 1e-15);
        let x = st.inverse(-0.25 * m).unwrap();
        assert!((st.eval(x).unwrap() + 0.25 * m).abs() < 1e-14);
    }

    #[test]
    fn unit_alpha_depth_zero_is_identity() {
        let spec = CantorSpec::new(0.0, 10.0, 0.3).unwrap();
        let st = Staircase::new(spec, 1.0, 0).unwrap();
        for x in [0.0, 0.1, 2.5, 7.3, 10.0] {
            assert!((st.eval(x).unwrap() - x).abs() < 1e-14);
            assert!((st.inverse(x).unwrap() - x).abs() < 1e-14);
        }
    }

    #[test]
    fn sample_covers_endpoints() {
        let st = middle_third(10);
        let s = st.sample(5);
        assert_eq!(s.len(), 5);
        assert_eq!(s[0], (0.0, 0.0));
        assert_eq!(s[4].0, 1.0);
        assert_eq!(s[2].1, 0.5 * st.total_measure());
    }
}
