use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest depth for which the interval list is materialized (2^26 intervals).
pub const MAX_BUILD_DEPTH: u32 = 26;

/// Parametric middle-ε Cantor set on `[c1, c2]`, with the staircase reference point `c0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CantorSpec {
    c1: f64,
    c2: f64,
    epsilon: f64,
    c0: f64,
}

impl CantorSpec {
    /// Reference point defaults to the left endpoint.
    pub fn new(c1: f64, c2: f64, epsilon: f64) -> Result<Self> {
        if !(c1.is_finite() && c2.is_finite()) {
            return Err(Error::invalid("c1/c2", "endpoints must be finite"));
        }
        if c1 >= c2 {
            return Err(Error::invalid(
                "c1/c2",
                format!("need c1 < c2, got [{c1}, {c2}]"),
            ));
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::invalid(
                "epsilon",
                format!("epsilon must lie in (0,1), got {epsilon}"),
            ));
        }
        Ok(Self {
            c1,
            c2,
            epsilon,
            c0: c1,
        })
    }

    pub fn middle_third() -> Self {
        Self::new(0.0, 1.0, 1.0 / 3.0).expect("valid constants")
    }

    pub fn with_reference(mut self, c0: f64) -> Result<Self> {
        if !(self.c1..=self.c2).contains(&c0) {
            return Err(Error::OutOfRange {
                name: "c0",
                value: c0,
                lo: self.c1,
                hi: self.c2,
            });
        }
        self.c0 = c0;
        Ok(self)
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn c0(&self) -> f64 {
        self.c0
    }

    pub fn length(&self) -> f64 {
        self.c2 - self.c1
    }

    /// Contraction ratio `(1 - ε) / 2` of each retained piece.
    pub fn ratio(&self) -> f64 {
        (1.0 - self.epsilon) / 2.0
    }

    /// Length of every interval at construction level `level`.
    pub fn interval_length(&self, level: u32) -> f64 {
        self.length() * self.ratio().powi(level as i32)
    }

    /// Closed-form similarity dimension `ln 2 / ln(2 / (1 - ε))`.
    pub fn similarity_dimension(&self) -> f64 {
        std::f64::consts::LN_2 / (2.0 / (1.0 - self.epsilon)).ln()
    }

    /// Splits `[lo, hi]` into its two retained children.
    ///
    /// Every routine that walks the construction goes through here so that
    /// endpoints agree bit for bit.
    #[inline]
    pub(crate) fn split(&self, lo: f64, hi: f64) -> (Interval, Interval) {
        let len = (hi - lo) * self.ratio();
        (Interval { lo, hi: lo + len }, Interval { lo: hi - len, hi })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn distance_to(&self, x: f64) -> f64 {
        if x < self.lo {
            self.lo - x
        } else if x > self.hi {
            x - self.hi
        } else {
            0.0
        }
    }
}

/// Finite-depth cover of the Cantor set: `2^depth` sorted disjoint closed intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct FractalApprox {
    spec: CantorSpec,
    depth: u32,
    intervals: Vec<Interval>,
}

impl FractalApprox {
    pub fn spec(&self) -> &CantorSpec {
        &self.spec
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    /// Index of the covered interval closest to `x`.
    pub fn nearest(&self, x: f64) -> usize {
        let idx = self.intervals.partition_point(|iv| iv.hi < x);
        if idx == self.intervals.len() {
            return idx - 1;
        }
        if idx > 0 && self.intervals[idx - 1].distance_to(x) < self.intervals[idx].distance_to(x) {
            idx - 1
        } else {
            idx
        }
    }

    /// Whether `x` is within half an interval length of the cover.
    pub fn is_near_set(&self, x: f64) -> bool {
        let iv = self.intervals[self.nearest(x)];
        iv.distance_to(x) <= 0.5 * iv.len()
    }
}

/// Repeatedly removes the open middle fraction ε of every interval, `depth` times.
pub fn build_cantor(spec: &CantorSpec, depth: u32) -> Result<FractalApprox> {
    if depth > MAX_BUILD_DEPTH {
        return Err(Error::OutOfRange {
            name: "depth",
            value: depth as f64,
            lo: 0.0,
            hi: MAX_BUILD_DEPTH as f64,
        });
    }
    let mut intervals = vec![Interval {
        lo: spec.c1,
        hi: spec.c2,
    }];
    for _ in 0..depth {
        intervals = intervals
            .iter()
            .flat_map(|iv| {
                let (l, r) = spec.split(iv.lo, iv.hi);
                [l, r]
            })
            .collect();
    }
    Ok(FractalApprox {
        spec: *spec,
        depth,
        intervals,
    })
}

/// `f(F, [a, b])`: 1 when the closed interval meets the cover, 0 otherwise.
pub fn indicator(approx: &FractalApprox, a: f64, b: f64) -> Result<u8> {
    if !(a <= b) {
        return Err(Error::invalid(
            "interval",
            format!("need a <= b, got [{a}, {b}]"),
        ));
    }
    let ivs = approx.intervals();
    let idx = ivs.partition_point(|iv| iv.hi < a);
    Ok(u8::from(idx < ivs.len() && ivs[idx].lo <= b))
}
