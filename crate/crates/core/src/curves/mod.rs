//! Optimal tradeoff curves between the worst-case total variation error of
//! a von Neumann measurement and the disturbance of its instrument.
//!
//! All four curves share one shape: with `u` the disturbance measure
//! rescaled to `[1/k, 1]`, the minimal error is
//! `(1/k)(√(u(k−1)) − √(1−u))²` for `u ≥ 1/k` and `0` below.

use serde::Serialize;

use crate::error::{invalid, Result};

/// The `u ∈ [1/k, 1]` at which the shared shape equals `δ`.
fn shape_inverse(k: f64, delta: f64) -> f64 {
    let top = 1.0 - 1.0 / k;
    let s = delta.clamp(0.0, top).sqrt();
    let theta = s.acos() - (1.0 / (k - 1.0).sqrt()).atan();
    theta.max(0.0).cos().powi(2)
}

/// `|√a − √b|²` expanded, so that `b = 0` returns `a` exactly.
fn square_diff(a: f64, b: f64) -> f64 {
    let (a, b) = (a.max(0.0), b.max(0.0));
    (a + b - 2.0 * (a * b).sqrt()).max(0.0)
}

/// Minimal `δ_TV` at worst-case fidelity `f`.
pub fn curve_tv_fidelity(d: usize, f: f64) -> f64 {
    let df = d as f64;
    if f <= 1.0 / df {
        return 0.0;
    }
    square_diff(f * (df - 1.0), 1.0 - f) / df
}

/// Minimal `δ_TV` at average fidelity `f̄`.
pub fn curve_tv_avg_fidelity(d: usize, avg: f64) -> f64 {
    let df = d as f64;
    if avg <= 2.0 / (df + 1.0) {
        return 0.0;
    }
    square_diff(
        (avg - 1.0 / (df + 1.0)) * (df * df - 1.0) / df,
        (1.0 - avg) * (df + 1.0) / df,
    ) / df
}

/// Minimal `δ_TV` at worst-case trace-norm disturbance `Δ_TV`.
pub fn curve_tv_trace(d: usize, delta_trace: f64) -> f64 {
    let df = d as f64;
    if delta_trace >= 1.0 - 1.0 / df {
        return 0.0;
    }
    square_diff((1.0 - delta_trace) * (df - 1.0), delta_trace) / df
}

/// Minimal `δ_TV` at diamond distance `Δ⋄` for `m` outcomes; independent of
/// the dimension.
pub fn curve_tv_diamond(m: usize, delta_diamond: f64) -> f64 {
    let mf = m as f64;
    if delta_diamond >= 2.0 - 2.0 / mf {
        return 0.0;
    }
    square_diff((2.0 - delta_diamond) * (mf - 1.0), delta_diamond) / (2.0 * mf)
}

/// Largest worst-case fidelity compatible with error `δ`.
pub fn fidelity_from_tv(d: usize, delta: f64) -> f64 {
    shape_inverse(d as f64, delta)
}

/// Largest average fidelity compatible with error `δ`.
pub fn avg_fidelity_from_tv(d: usize, delta: f64) -> f64 {
    let df = d as f64;
    (df * shape_inverse(df, delta) + 1.0) / (df + 1.0)
}

/// Smallest trace-norm disturbance compatible with error `δ`.
pub fn trace_from_tv(d: usize, delta: f64) -> f64 {
    1.0 - shape_inverse(d as f64, delta)
}

/// Smallest diamond distance compatible with error `δ` for `m` outcomes.
pub fn diamond_from_tv(m: usize, delta: f64) -> f64 {
    2.0 * (1.0 - shape_inverse(m as f64, delta))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurvePair {
    TvFidelity,
    TvAvgFidelity,
    TvTrace,
    TvDiamond,
}

impl CurvePair {
    pub const ALL: [CurvePair; 4] = [
        CurvePair::TvFidelity,
        CurvePair::TvAvgFidelity,
        CurvePair::TvTrace,
        CurvePair::TvDiamond,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CurvePair::TvFidelity => "tv-fidelity",
            CurvePair::TvAvgFidelity => "tv-avg-fidelity",
            CurvePair::TvTrace => "tv-trace",
            CurvePair::TvDiamond => "tv-diamond",
        }
    }

    pub fn disturbance_measure(self) -> &'static str {
        match self {
            CurvePair::TvFidelity => "worst-fidelity",
            CurvePair::TvAvgFidelity => "avg-fidelity",
            CurvePair::TvTrace => "trace-norm",
            CurvePair::TvDiamond => "diamond",
        }
    }

    /// Curve value; `k` is `d`, or `m` for the diamond pair.
    pub fn eval(self, k: usize, x: f64) -> f64 {
        match self {
            CurvePair::TvFidelity => curve_tv_fidelity(k, x),
            CurvePair::TvAvgFidelity => curve_tv_avg_fidelity(k, x),
            CurvePair::TvTrace => curve_tv_trace(k, x),
            CurvePair::TvDiamond => curve_tv_diamond(k, x),
        }
    }

    /// Inverse on the active branch.
    pub fn invert(self, k: usize, delta: f64) -> f64 {
        match self {
            CurvePair::TvFidelity => fidelity_from_tv(k, delta),
            CurvePair::TvAvgFidelity => avg_fidelity_from_tv(k, delta),
            CurvePair::TvTrace => trace_from_tv(k, delta),
            CurvePair::TvDiamond => diamond_from_tv(k, delta),
        }
    }

    /// Active range of the disturbance coordinate, ordered from no
    /// disturbance to the point where the error reaches zero.
    pub fn default_range(self, k: usize) -> (f64, f64) {
        let kf = k as f64;
        match self {
            CurvePair::TvFidelity => (1.0, 1.0 / kf),
            CurvePair::TvAvgFidelity => (1.0, 2.0 / (kf + 1.0)),
            CurvePair::TvTrace => (0.0, 1.0 - 1.0 / kf),
            CurvePair::TvDiamond => (0.0, 2.0 - 2.0 / kf),
        }
    }
}

impl std::str::FromStr for CurvePair {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| invalid(format!("unknown curve pair '{s}'")))
    }
}

/// Evenly spaced points from `start` to `stop`, in either direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Grid {
    pub fn new(start: f64, stop: f64, points: usize) -> Result<Self> {
        if points == 0 {
            return Err(invalid("grid needs at least one point"));
        }
        if !start.is_finite() || !stop.is_finite() {
            return Err(invalid("grid bounds must be finite"));
        }
        Ok(Self {
            start,
            stop,
            points,
        })
    }

    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.start];
        }
        let n = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                let t = i as f64 / n;
                if i + 1 == self.points {
                    self.stop
                } else {
                    self.start + t * (self.stop - self.start)
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TradeoffPoint {
    /// Disturbance coordinate, in the native units of the measure.
    pub disturbance: f64,
    /// Minimal total variation error.
    pub delta: f64,
    /// `d`, or `m` for the diamond pair.
    pub k: usize,
    pub pair: CurvePair,
}

pub fn sweep(pair: CurvePair, k: usize, grid: &Grid) -> Result<Vec<TradeoffPoint>> {
    if k < 2 {
        return Err(invalid("curves need at least two outcomes"));
    }
    Ok(grid
        .values()
        .into_iter()
        .map(|x| TradeoffPoint {
            disturbance: x,
            delta: pair.eval(k, x),
            k,
            pair,
        })
        .collect())
}
