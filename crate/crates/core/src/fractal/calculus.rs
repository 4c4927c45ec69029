use super::staircase::Staircase;
use crate::error::{Error, Result};

/// `F^α`-derivative of `h` at `x`: the limit of `(h(y) - h(x)) / (S(y) - S(x))`
/// as `y → x` through points of the set.
///
/// Candidate `y` are the endpoints of the construction intervals containing
/// (or nearest to) `x`, finest level first. The two finest usable quotients
/// are combined so that the first-order error in `S(y) - S(x)` cancels; this
/// is exact whenever `h = g ∘ S` with quadratic `g`. Points farther than half
/// a depth-level interval from the set get 0.
pub fn fractal_derivative<H>(h: H, x: f64, stair: &Staircase) -> Result<f64>
where
    H: Fn(f64) -> f64,
{
    let s_x = stair.eval(x)?;
    let ancestry = stair.ancestry(x);
    let finest = ancestry
        .last()
        .expect("ancestry includes the root")
        .interval;
    if finest.distance_to(x) > 0.5 * finest.len() {
        return Ok(0.0);
    }

    let h_x = h(x);
    let floor = 64.0 * f64::EPSILON * stair.total_measure().max(s_x.abs());
    let mut right: Vec<(f64, f64)> = Vec::new();
    let mut left: Vec<(f64, f64)> = Vec::new();
    for cell in ancestry.iter().rev() {
        for (y, side) in [
            (cell.interval.hi, &mut right),
            (cell.interval.lo, &mut left),
        ] {
            if y == x || side.len() >= 2 {
                continue;
            }
            let ds = stair.eval(y)? - s_x;
            if ds.abs() <= floor
                || side
                    .iter()
                    .any(|&(prev, _)| (prev - ds).abs() < 0.25 * ds.abs())
            {
                continue;
            }
            let q = (h(y) - h_x) / ds;
            if q.is_finite() {
                side.push((ds, q));
            }
        }
    }

    let pair = match (right.first(), left.first()) {
        (Some(&r), Some(&l)) => Some((r, l)),
        _ => {
            let one_side = if right.is_empty() { &left } else { &right };
            match one_side.as_slice() {
                [a, b, ..] => Some((*a, *b)),
                [a] => return Ok(a.1),
                [] => None,
            }
        }
    };
    match pair {
        Some(((ds1, q1), (ds2, q2))) => Ok((q1 * ds2 - q2 * ds1) / (ds2 - ds1)),
        None => Err(Error::IllConditioned(format!(
            "S(y) - S(x) vanishes for every available y near x = {x}"
        ))),
    }
}

/// Riemann-Stieltjes sums of an `F^α`-integral over the depth-level partition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FractalIntegral {
    /// Midpoint-tagged sum.
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

impl FractalIntegral {
    pub fn gap(&self) -> f64 {
        self.upper - self.lower
    }
}

/// `∫_a^b h d_F^α x` over the canonical partition at the staircase depth.
///
/// Gap cells contribute nothing since `S` is flat there. Each covered cell is
/// clipped to `[a, b]`; lower and upper sums take the min/max of `h` over the
/// cell's endpoints and midpoint.
pub fn fractal_integral<H>(h: H, a: f64, b: f64, stair: &Staircase) -> Result<FractalIntegral>
where
    H: Fn(f64) -> f64,
{
    let (c1, c2) = (stair.spec().c1(), stair.spec().c2());
    if !(c1 <= a && a <= b && b <= c2) {
        return Err(Error::invalid(
            "interval",
            format!("need c1 <= a <= b <= c2, got a = {a}, b = {b} on [{c1}, {c2}]"),
        ));
    }
    let mut out = FractalIntegral {
        value: 0.0,
        lower: 0.0,
        upper: 0.0,
    };
    let mut bad = None;
    stair.for_each_cell_in(a, b, &mut |cell| {
        let iv = cell.interval;
        let (u, v) = (iv.lo.max(a), iv.hi.min(b));
        if v < u {
            return;
        }
        let ds = cell.mass * (v - u) / iv.len();
        if ds == 0.0 {
            return;
        }
        let (hu, hm, hv) = (h(u), h(0.5 * (u + v)), h(v));
        out.value += hm * ds;
        out.lower += hu.min(hm).min(hv) * ds;
        out.upper += hu.max(hm).max(hv) * ds;
        if bad.is_none()
            && !(out.value.is_finite() && out.lower.is_finite() && out.upper.is_finite())
        {
            bad = Some(0.5 * (u + v));
        }
    });
    match bad {
        Some(x) => Err(Error::NonFinite(format!(
            "integrand looks unbounded near x = {x}"
        ))),
        None => Ok(out),
    }
}
