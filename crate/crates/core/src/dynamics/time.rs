use crate::error::{Error, Result};
use crate::fractal::Staircase;

/// Map from physical time `t` to staircase time `s = S(t)`.
#[derive(Debug, Clone, PartialEq)]
pub enum TimeModel {
    /// `S(t) = t`.
    Classical,
    /// `S(t) = t^α`, `0 < α <= 1`, for `t >= 0`.
    PowerLaw { alpha: f64 },
    /// `S(t) = S_F^α(t)` from a Cantor staircase; `t` must lie in `[c1, c2]`.
    ExactStaircase(Staircase),
}

impl TimeModel {
    pub fn power_law(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha <= 1.0 {
            Ok(TimeModel::PowerLaw { alpha })
        } else {
            Err(Error::invalid(
                "alpha",
                format!("alpha must lie in (0,1], got {alpha}"),
            ))
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            TimeModel::Classical => "classical",
            TimeModel::PowerLaw { .. } => "power-law",
            TimeModel::ExactStaircase(_) => "exact-staircase",
        }
    }

    pub fn alpha(&self) -> f64 {
        match self {
            TimeModel::Classical => 1.0,
            TimeModel::PowerLaw { alpha } => *alpha,
            TimeModel::ExactStaircase(st) => st.alpha(),
        }
    }

    pub fn s_of_t(&self, t: f64) -> Result<f64> {
        match self {
            TimeModel::Classical => Ok(t),
            TimeModel::PowerLaw { alpha } => {
                if t < 0.0 {
                    Err(Error::OutOfRange {
                        name: "t",
                        value: t,
                        lo: 0.0,
                        hi: f64::INFINITY,
                    })
                } else {
                    Ok(t.powf(*alpha))
                }
            }
            TimeModel::ExactStaircase(st) => st.eval(t),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fractal::CantorSpec;

    #[test]
    fn power_law_values() {
        let m = TimeModel::power_law(0.5).unwrap();
        assert_eq!(m.s_of_t(4.0).unwrap(), 2.0);
        assert!(m.s_of_t(-1.0).is_err());
        assert!(TimeModel::power_law(0.0).is_err());
        assert!(TimeModel::power_law(1.2).is_err());
        assert_eq!(TimeModel::Classical.s_of_t(3.25).unwrap(), 3.25);
    }

    #[test]
    fn staircase_model_is_flat_on_gaps() {
        let st = Staircase::at_dimension(CantorSpec::middle_third(), 20).unwrap();
        let m = TimeModel::ExactStaircase(st);
        assert_eq!(m.s_of_t(0.4).unwrap(), m.s_of_t(0.6).unwrap());
        assert!(m.s_of_t(1.5).is_err());
    }
}
