use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::nambu::NambuSystem;

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub s: f64,
    pub state: Vec<f64>,
    /// `H_1, …, H_{n-1}` at `state`.
    pub invariants: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    samples: Vec<Sample>,
}

impl Trajectory {
    pub fn from_samples(samples: Vec<Sample>) -> Self {
        Self { samples }
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// CSV with header `t,s,x1,…,xn,H1,…,H{n-1}`, 17 significant digits, LF endings.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let Some(first) = self.samples.first() else {
            return out.write_all(b"t,s\n");
        };
        let mut header = vec!["t".to_string(), "s".to_string()];
        header.extend((1..=first.state.len()).map(|i| format!("x{i}")));
        header.extend((1..=first.invariants.len()).map(|i| format!("H{i}")));
        writeln!(out, "{}", header.join(","))?;
        for smp in &self.samples {
            let row: Vec<String> = [smp.t, smp.s]
                .iter()
                .chain(&smp.state)
                .chain(&smp.invariants)
                .map(|v| format_real(*v))
                .collect();
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV is ASCII")
    }
}

/// Locale-independent scientific notation with 17 significant digits.
pub fn format_real(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Drift {
    pub name: String,
    pub max: f64,
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConservationReport {
    pub drifts: Vec<Drift>,
}

impl ConservationReport {
    pub fn max_drift(&self) -> f64 {
        self.drifts.iter().map(|d| d.max).fold(0.0, f64::max)
    }
}

/// Max and mean of `|H_j(x(t)) - H_j(x0)| / max(1, |H_j(x0)|)` over the samples.
pub fn conservation_report(traj: &Trajectory, system: &NambuSystem) -> ConservationReport {
    let Some(first) = traj.samples().first() else {
        return ConservationReport { drifts: Vec::new() };
    };
    let h0 = system.invariants(&first.state);
    let drifts = system
        .hamiltonians()
        .iter()
        .enumerate()
        .map(|(j, h)| {
            let scale = h0[j].abs().max(1.0);
            let values: Vec<f64> = traj
                .samples()
                .iter()
                .map(|smp| (h.value(&smp.state) - h0[j]).abs() / scale)
                .collect();
            Drift {
                name: h.label().to_string(),
                max: values.iter().copied().fold(0.0, f64::max),
                mean: values.iter().sum::<f64>() / values.len() as f64,
            }
        })
        .collect();
    ConservationReport { drifts }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::euler_top;

    #[test]
    fn csv_layout() {
        let tr = Trajectory::from_samples(vec![Sample {
            t: 0.5,
            s: 0.25,
            state: vec![1.0, -2.0, 3.0],
            invariants: vec![0.1, 7.0],
        }]);
        let csv = tr.to_csv_string();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "t,s,x1,x2,x3,H1,H2");
        let row: Vec<f64> = lines
            .next()
            .unwrap()
            .split(',')
            .map(|v| v.parse().unwrap())
            .collect();
        assert_eq!(row, vec![0.5, 0.25, 1.0, -2.0, 3.0, 0.1, 7.0]);
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn real_format_round_trips() {
        for v in [0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, 0.0] {
            assert_eq!(format_real(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn single_sample_has_zero_drift() {
        let top = euler_top(1.0, 2.0, 3.0).unwrap();
        let tr = Trajectory::from_samples(vec![Sample {
            t: 0.0,
            s: 0.0,
            state: vec![1.0, 1.0, 1.0],
            invariants: top.invariants(&[1.0, 1.0, 1.0]),
        }]);
        let rep = conservation_report(&tr, &top);
        assert_eq!(rep.drifts.len(), 2);
        assert!(rep.drifts.iter().all(|d| d.max == 0.0 && d.mean == 0.0));
    }
}
