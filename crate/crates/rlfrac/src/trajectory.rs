//! Sampled operator trajectories in regularized form.
//!
//! A family with a t^p blow-up at the origin (p = α-2 ∈ (-1, 0) for the
//! resolvent families here) is stored as the pair (p, G) with
//! f(t) = t^p G(t) and G continuous on [0, ∞). The regular part is what
//! gets sampled, interpolated, and serialized; the singular prefactor is
//! reattached analytically. G(0⁺) is a known limit (x/Γ(α-1) for the
//! families) and anchors the interpolation at t = 0.
//!
//! Interpolation is monotone cubic (Fritsch-Carlson slopes with the
//! three-point edge formula), which avoids overshoot near t = 0 where G
//! varies fastest.

use crate::error::{Error, Result};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::Path;

/// Default bound for the relative deviation of a sample from its
/// neighbors' linear interpolant.
pub const DEFAULT_CONTINUITY_BOUND: f64 = 0.5;

#[derive(Debug, Clone)]
pub struct SingularTrajectory {
    exponent: f64,
    /// Interpolation nodes: 0 followed by the sample grid.
    nodes: Vec<f64>,
    /// G at the nodes; values[0] is g0.
    values: Vec<DMatrix<f64>>,
    slopes: Vec<DMatrix<f64>>,
}

#[derive(Serialize, Deserialize)]
struct Sidecar {
    exponent: f64,
    rows: usize,
    cols: usize,
    g0: Vec<Vec<f64>>,
}

impl SingularTrajectory {
    /// Build a trajectory from the regular samples G(t_i) plus the limit
    /// G(0⁺). The grid must be strictly increasing and positive.
    pub fn new(
        exponent: f64,
        times: Vec<f64>,
        samples: Vec<DMatrix<f64>>,
        g0: DMatrix<f64>,
    ) -> Result<Self> {
        Self::with_continuity_bound(exponent, times, samples, g0, DEFAULT_CONTINUITY_BOUND)
    }

    pub fn with_continuity_bound(
        exponent: f64,
        times: Vec<f64>,
        samples: Vec<DMatrix<f64>>,
        g0: DMatrix<f64>,
        bound: f64,
    ) -> Result<Self> {
        if !exponent.is_finite() {
            return Err(Error::InvalidInput("trajectory exponent must be finite".into()));
        }
        if times.is_empty() || times.len() != samples.len() {
            return Err(Error::InvalidInput(format!(
                "trajectory needs matching grid and samples, got {} times and {} samples",
                times.len(),
                samples.len()
            )));
        }
        if times[0] <= 0.0
            || times.windows(2).any(|w| w[1] <= w[0])
            || times.iter().any(|t| !t.is_finite())
        {
            return Err(Error::InvalidInput(
                "trajectory grid must be strictly increasing and positive".into(),
            ));
        }
        if g0.iter().any(|x| !x.is_finite())
            || samples.iter().any(|s| s.iter().any(|x| !x.is_finite()))
        {
            return Err(Error::InvalidInput("trajectory samples must be finite".into()));
        }
        let shape = g0.shape();
        if samples.iter().any(|s| s.shape() != shape) {
            return Err(Error::InvalidInput("trajectory samples must share one shape".into()));
        }

        let mut nodes = Vec::with_capacity(times.len() + 1);
        nodes.push(0.0);
        nodes.extend_from_slice(&times);
        let mut values = Vec::with_capacity(samples.len() + 1);
        values.push(g0);
        values.extend(samples);

        check_continuity(&nodes, &values, bound)?;
        let slopes = pchip_slopes(&nodes, &values);
        Ok(SingularTrajectory { exponent, nodes, values, slopes })
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn times(&self) -> &[f64] {
        &self.nodes[1..]
    }

    pub fn g0(&self) -> &DMatrix<f64> {
        &self.values[0]
    }

    pub fn samples(&self) -> &[DMatrix<f64>] {
        &self.values[1..]
    }

    pub fn rows(&self) -> usize {
        self.values[0].nrows()
    }

    pub fn cols(&self) -> usize {
        self.values[0].ncols()
    }

    pub fn t_max(&self) -> f64 {
        *self.nodes.last().expect("non-empty grid")
    }

    fn segment(&self, t: f64) -> usize {
        // index i with nodes[i] <= t < nodes[i+1]
        let i = self.nodes.partition_point(|&x| x <= t);
        i.saturating_sub(1).min(self.nodes.len() - 2)
    }

    /// Width of the grid interval containing t (used for stencil steps).
    pub fn local_spacing(&self, t: f64) -> f64 {
        let i = self.segment(t);
        self.nodes[i + 1] - self.nodes[i]
    }

    /// Regular part G(t) for t in [0, t_max].
    pub fn regular(&self, t: f64) -> Result<DMatrix<f64>> {
        if !(0.0..=self.t_max() * (1.0 + 1e-12)).contains(&t) {
            return Err(Error::OutOfRange { t, min: 0.0, max: self.t_max() });
        }
        let t = t.min(self.t_max());
        let i = self.segment(t);
        let h = self.nodes[i + 1] - self.nodes[i];
        let s = (t - self.nodes[i]) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        Ok(&self.values[i] * h00
            + &self.slopes[i] * (h10 * h)
            + &self.values[i + 1] * h01
            + &self.slopes[i + 1] * (h11 * h))
    }

    /// Full value t^p G(t); defined for t > 0 only.
    pub fn value(&self, t: f64) -> Result<DMatrix<f64>> {
        if t <= 0.0 {
            return Err(Error::OutOfRange { t, min: 0.0, max: self.t_max() });
        }
        Ok(self.regular(t)? * t.powf(self.exponent))
    }

    /// Write the CSV trajectory (`t, entries...`, row-major) and its JSON
    /// sidecar (exponent, dimensions, g0).
    pub fn write_files(&self, csv_path: &Path, sidecar_path: &Path) -> Result<()> {
        let (r, c) = (self.rows(), self.cols());
        let mut out = String::from("t");
        for i in 0..r {
            for j in 0..c {
                write!(out, ",a_{i}_{j}").expect("string write");
            }
        }
        out.push('\n');
        for (t, sample) in self.times().iter().zip(self.samples()) {
            write!(out, "{t}").expect("string write");
            for i in 0..r {
                for j in 0..c {
                    write!(out, ",{}", sample[(i, j)]).expect("string write");
                }
            }
            out.push('\n');
        }
        std::fs::write(csv_path, out)?;

        let sidecar = Sidecar {
            exponent: self.exponent,
            rows: r,
            cols: c,
            g0: (0..r)
                .map(|i| (0..c).map(|j| self.g0()[(i, j)]).collect())
                .collect(),
        };
        std::fs::write(sidecar_path, serde_json::to_string_pretty(&sidecar)?)?;
        Ok(())
    }

    pub fn read_files(csv_path: &Path, sidecar_path: &Path) -> Result<Self> {
        let sidecar: Sidecar =
            serde_json::from_str(&std::fs::read_to_string(sidecar_path)?)?;
        if sidecar.g0.len() != sidecar.rows
            || sidecar.g0.iter().any(|row| row.len() != sidecar.cols)
        {
            return Err(Error::InvalidInput("sidecar g0 shape mismatch".into()));
        }
        let g0 = DMatrix::from_row_iterator(
            sidecar.rows,
            sidecar.cols,
            sidecar.g0.iter().flatten().copied(),
        );

        let text = std::fs::read_to_string(csv_path)?;
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::InvalidInput("empty trajectory CSV".into()))?;
        let expected_cols = 1 + sidecar.rows * sidecar.cols;
        if header.split(',').count() != expected_cols {
            return Err(Error::InvalidInput(format!(
                "trajectory CSV has {} columns, sidecar implies {}",
                header.split(',').count(),
                expected_cols
            )));
        }

        let mut times = Vec::new();
        let mut samples = Vec::new();
        for (lineno, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<f64> = line
                .split(',')
                .map(|f| {
                    f.trim().parse::<f64>().map_err(|e| {
                        Error::InvalidInput(format!(
                            "trajectory CSV line {}: {e}",
                            lineno + 2
                        ))
                    })
                })
                .collect::<Result<_>>()?;
            if fields.len() != expected_cols {
                return Err(Error::InvalidInput(format!(
                    "trajectory CSV line {}: wrong field count",
                    lineno + 2
                )));
            }
            times.push(fields[0]);
            samples.push(DMatrix::from_row_iterator(
                sidecar.rows,
                sidecar.cols,
                fields[1..].iter().copied(),
            ));
        }
        Self::new(sidecar.exponent, times, samples, g0)
    }
}

fn check_continuity(nodes: &[f64], values: &[DMatrix<f64>], bound: f64) -> Result<()> {
    for i in 1..nodes.len() - 1 {
        let span = nodes[i + 1] - nodes[i - 1];
        let w = (nodes[i] - nodes[i - 1]) / span;
        let lin = &values[i - 1] * (1.0 - w) + &values[i + 1] * w;
        let dev = (&values[i] - lin).norm();
        let scale = 1.0 + values[i].norm();
        if dev > bound * scale {
            return Err(Error::InvalidInput(format!(
                "trajectory sample at t = {} deviates from its neighbors by {:.3e} (bound {:.3e})",
                nodes[i],
                dev / scale,
                bound
            )));
        }
    }
    Ok(())
}

/// Entrywise Fritsch-Carlson slopes: weighted harmonic mean inside, the
/// usual three-point formula with monotonicity clamps at the ends.
fn pchip_slopes(nodes: &[f64], values: &[DMatrix<f64>]) -> Vec<DMatrix<f64>> {
    let n = nodes.len();
    let (rows, cols) = values[0].shape();
    let mut slopes = vec![DMatrix::<f64>::zeros(rows, cols); n];

    if n == 2 {
        let h = nodes[1] - nodes[0];
        let d = (&values[1] - &values[0]) / h;
        slopes[0] = d.clone();
        slopes[1] = d;
        return slopes;
    }

    let h: Vec<f64> = nodes.windows(2).map(|w| w[1] - w[0]).collect();
    for r in 0..rows {
        for c in 0..cols {
            let delta: Vec<f64> = (0..n - 1)
                .map(|i| (values[i + 1][(r, c)] - values[i][(r, c)]) / h[i])
                .collect();

            for i in 1..n - 1 {
                let (d0, d1) = (delta[i - 1], delta[i]);
                slopes[i][(r, c)] = if d0 * d1 <= 0.0 {
                    0.0
                } else {
                    let w1 = 2.0 * h[i] + h[i - 1];
                    let w2 = h[i] + 2.0 * h[i - 1];
                    (w1 + w2) / (w1 / d0 + w2 / d1)
                };
            }

            slopes[0][(r, c)] = edge_slope(h[0], h[1], delta[0], delta[1]);
            slopes[n - 1][(r, c)] =
                edge_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
        }
    }
    slopes
}

fn edge_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d * d0 <= 0.0 {
        0.0
    } else if d0 * d1 <= 0.0 && d.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn scalar(v: f64) -> DMatrix<f64> {
        DMatrix::from_element(1, 1, v)
    }

    fn power_trajectory(p: f64, g: f64, grid: &[f64]) -> SingularTrajectory {
        SingularTrajectory::new(
            p,
            grid.to_vec(),
            grid.iter().map(|_| scalar(g)).collect(),
            scalar(g),
        )
        .unwrap()
    }

    #[test]
    fn constant_regular_part_is_reproduced_exactly() {
        let traj = power_trajectory(-0.5, 2.0, &[0.25, 0.5, 1.0, 2.0]);
        for &t in &[0.1, 0.3, 0.77, 1.999] {
            assert_relative_eq!(traj.regular(t).unwrap()[(0, 0)], 2.0, max_relative = 1e-14);
            assert_relative_eq!(
                traj.value(t).unwrap()[(0, 0)],
                2.0 * t.powf(-0.5),
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn quadratic_data_interpolates_accurately() {
        let grid: Vec<f64> = (1..=40).map(|i| i as f64 * 0.05).collect();
        let traj = SingularTrajectory::new(
            0.0,
            grid.clone(),
            grid.iter().map(|&t| scalar(t * t)).collect(),
            scalar(0.0),
        )
        .unwrap();
        for &t in &[0.11, 0.52, 1.83] {
            assert_abs_diff_eq!(traj.regular(t).unwrap()[(0, 0)], t * t, epsilon = 1e-10);
        }
    }

    #[test]
    fn monotone_data_does_not_overshoot() {
        // step-like data: a monotone interpolant must stay inside [0, 1]
        let grid = vec![1.0, 2.0, 3.0, 4.0];
        let vals = [0.0, 0.0, 1.0, 1.0];
        let traj = SingularTrajectory::with_continuity_bound(
            0.0,
            grid,
            vals.iter().map(|&v| scalar(v)).collect(),
            scalar(0.0),
            10.0,
        )
        .unwrap();
        for k in 0..200 {
            let t = 1.0 + 3.0 * (k as f64) / 199.0;
            let v = traj.regular(t).unwrap()[(0, 0)];
            assert!((-1e-12..=1.0 + 1e-12).contains(&v), "overshoot at {t}: {v}");
        }
    }

    #[test]
    fn value_requires_positive_time() {
        let traj = power_trajectory(-0.5, 1.0, &[0.5, 1.0]);
        assert!(matches!(traj.value(0.0), Err(Error::OutOfRange { .. })));
        assert!(traj.regular(0.0).is_ok());
        assert!(matches!(traj.value(1.5), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn rejects_disordered_grid() {
        let r = SingularTrajectory::new(
            0.0,
            vec![1.0, 0.5],
            vec![scalar(1.0), scalar(1.0)],
            scalar(1.0),
        );
        assert!(r.is_err());
    }

    #[test]
    fn rejects_discontinuous_samples() {
        let r = SingularTrajectory::new(
            0.0,
            vec![1.0, 1.001, 1.002],
            vec![scalar(1.0), scalar(500.0), scalar(1.0)],
            scalar(1.0),
        );
        assert!(r.is_err());
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let csv = dir.path().join("traj.csv");
        let json = dir.path().join("traj.json");
        let grid = vec![0.25, 0.5, 1.0];
        let samples: Vec<_> = grid
            .iter()
            .map(|&t: &f64| DMatrix::from_row_slice(2, 1, &[t.sin(), t.cos()]))
            .collect();
        let traj = SingularTrajectory::new(
            -0.5,
            grid,
            samples,
            DMatrix::from_row_slice(2, 1, &[0.0, 1.0]),
        )
        .unwrap();
        traj.write_files(&csv, &json).unwrap();
        let back = SingularTrajectory::read_files(&csv, &json).unwrap();
        assert_eq!(back.exponent(), traj.exponent());
        assert_eq!(back.times(), traj.times());
        for (a, b) in back.samples().iter().zip(traj.samples()) {
            assert_eq!(a, b); // Display round-trips f64 exactly
        }
    }
}
