//! Nambu flows in staircase time, subordinated back to physical time.

mod integrate;
mod time;
mod trajectory;

pub use integrate::{integrate_s_time, required_s_max, rk4_step, subordinate, SPath};
pub use time::TimeModel;
pub use trajectory::{
    conservation_report, format_real, ConservationReport, Drift, Sample, Trajectory,
};
