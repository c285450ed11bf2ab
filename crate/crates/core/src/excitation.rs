//! Raised-cosine test signal and its closed-form time-derivative stack.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest accepted number of grid intervals per period.
pub const MIN_GRID: usize = 64;

/// Default number of grid intervals per period.
pub const DEFAULT_GRID: usize = 4096;

/// `offset - amplitude * cos(omega * t)` for `t >= 0`, zero before.
///
/// Level `k` of the stack is the k-th time derivative, so level 0 is the
/// constitutive abscissa, level 1 the first-transformed abscissa, and so on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Excitation {
    pub amplitude: f64,
    pub omega: f64,
    pub offset: f64,
}

impl Default for Excitation {
    fn default() -> Self {
        Excitation {
            amplitude: 1.0,
            omega: 1.0,
            offset: 1.0,
        }
    }
}

impl Excitation {
    pub fn new(amplitude: f64, omega: f64, offset: f64) -> Result<Self> {
        if !(amplitude.is_finite() && amplitude > 0.0) {
            return Err(Error::config("excitation.amplitude", "must be finite and > 0"));
        }
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::config("excitation.omega", "must be finite and > 0"));
        }
        if !offset.is_finite() {
            return Err(Error::config("excitation.offset", "must be finite"));
        }
        Ok(Excitation {
            amplitude,
            omega,
            offset,
        })
    }

    pub fn period(&self) -> f64 {
        TAU / self.omega
    }

    /// Level-th time derivative of the base signal at `t`.
    pub fn excite(&self, t: f64, level: usize) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        let phase = self.omega * t;
        let scale = self.amplitude * self.omega.powi(level as i32);
        let wave = match level % 4 {
            0 => -phase.cos(),
            1 => phase.sin(),
            2 => phase.cos(),
            _ => -phase.sin(),
        };
        let base = scale * wave;
        if level == 0 {
            self.offset + base
        } else {
            base
        }
    }

    /// Range swept by the level-0 signal.
    pub fn span(&self) -> (f64, f64) {
        (self.offset - self.amplitude, self.offset + self.amplitude)
    }

    /// `n + 1` uniform samples over one closed period.
    pub fn grid(&self, n: usize) -> Result<SampleGrid> {
        SampleGrid::new(self.period(), n)
    }
}

/// Uniform samples over `[0, period]`, both endpoints included.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleGrid {
    t_values: Vec<f64>,
    period: f64,
}

impl SampleGrid {
    pub fn new(period: f64, n: usize) -> Result<Self> {
        if n < MIN_GRID {
            return Err(Error::config(
                "grid_n",
                format!("{n} intervals requested, minimum is {MIN_GRID}"),
            ));
        }
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::config("grid.period", "must be finite and > 0"));
        }
        // i * period / n keeps quarter-period samples exact when 4 | n
        let t_values = (0..=n).map(|i| period * i as f64 / n as f64).collect();
        Ok(SampleGrid { t_values, period })
    }

    pub fn t_values(&self) -> &[f64] {
        &self.t_values
    }

    /// Number of samples (`intervals() + 1`).
    pub fn count(&self) -> usize {
        self.t_values.len()
    }

    pub fn intervals(&self) -> usize {
        self.t_values.len() - 1
    }

    pub fn spacing(&self) -> f64 {
        self.period / self.intervals() as f64
    }

    pub fn period(&self) -> f64 {
        self.period
    }
}
