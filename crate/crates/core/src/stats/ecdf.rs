//! Empirical CDFs of p-values and their distance from uniform.

use super::StatsError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EcdfPoint {
    pub x: f64,
    pub f: f64,
}

/// Step function evaluated at each distinct sample value.
#[derive(Debug, Clone, PartialEq)]
pub struct Ecdf {
    pub points: Vec<EcdfPoint>,
    pub n: usize,
}

impl Ecdf {
    pub fn eval(&self, x: f64) -> f64 {
        let idx = self.points.partition_point(|p| p.x <= x);
        if idx == 0 {
            0.0
        } else {
            self.points[idx - 1].f
        }
    }

    /// Two columns `p,ecdf`, one row per distinct p-value.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("p,ecdf\n");
        for p in &self.points {
            out.push_str(&format!("{},{}\n", p.x, p.f));
        }
        out
    }
}

fn sorted(values: &[f64]) -> Result<Vec<f64>, StatsError> {
    if values.is_empty() {
        return Err(StatsError::Empty);
    }
    if let Some(&bad) = values.iter().find(|v| !(**v >= 0.0 && **v <= 1.0)) {
        return Err(StatsError::InvalidPValue {
            name: "ecdf input".into(),
            value: bad,
        });
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

pub fn ecdf(values: &[f64]) -> Result<Ecdf, StatsError> {
    let v = sorted(values)?;
    let n = v.len();
    let mut points: Vec<EcdfPoint> = Vec::new();
    for (i, &x) in v.iter().enumerate() {
        let f = (i + 1) as f64 / n as f64;
        match points.last_mut() {
            Some(last) if last.x == x => last.f = f,
            _ => points.push(EcdfPoint { x, f }),
        }
    }
    Ok(Ecdf { points, n })
}

/// One-sample Kolmogorov–Smirnov distance from Uniform(0, 1).
pub fn ks_statistic(values: &[f64]) -> Result<f64, StatsError> {
    let v = sorted(values)?;
    let n = v.len() as f64;
    Ok(v.iter()
        .enumerate()
        .map(|(i, &x)| {
            let i = i as f64;
            ((i + 1.0) / n - x).max(x - i / n)
        })
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{Domain, SeedStream};

    #[test]
    fn small_cases() {
        assert!((ks_statistic(&[0.2, 0.4]).unwrap() - 0.6).abs() < 1e-15);
        assert_eq!(ks_statistic(&[0.5]).unwrap(), 0.5);
        assert_eq!(ks_statistic(&[0.0; 4]).unwrap(), 1.0);
        assert!(ks_statistic(&[]).is_err());
        assert!(ks_statistic(&[1.2]).is_err());
    }

    #[test]
    fn centered_grid_is_half_step() {
        let n = 200;
        let grid: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
        assert!((ks_statistic(&grid).unwrap() - 0.5 / n as f64).abs() < 1e-12);
    }

    #[test]
    fn ecdf_steps_and_ties() {
        let e = ecdf(&[0.3, 0.1, 0.3, 0.9]).unwrap();
        assert_eq!(
            e.points,
            vec![
                EcdfPoint { x: 0.1, f: 0.25 },
                EcdfPoint { x: 0.3, f: 0.75 },
                EcdfPoint { x: 0.9, f: 1.0 },
            ]
        );
        assert_eq!(e.eval(0.05), 0.0);
        assert_eq!(e.eval(0.3), 0.75);
        assert_eq!(e.eval(1.0), 1.0);
        assert_eq!(e.to_csv(), "p,ecdf\n0.1,0.25\n0.3,0.75\n0.9,1\n");
    }

    #[test]
    fn uniform_draws_are_close() {
        let mut s = SeedStream::new(7, Domain::Derive, 0, 0);
        let draws: Vec<f64> = (0..2000).map(|_| s.unit()).collect();
        // 1.36 / sqrt(2000) is the 5% critical value.
        assert!(ks_statistic(&draws).unwrap() < 0.0305);
    }
}
