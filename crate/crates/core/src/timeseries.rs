//! Sampled observable records: the universal output shape for every
//! backend and analysis step.

use crate::error::{Error, Result};

/// A labeled series of (time, value) samples on a shared grid.
#[derive(Clone, Debug)]
pub struct TimeSeries {
    pub label: String,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(label: &str, times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::InvalidArgument(format!(
                "series {label:?}: {} times vs {} values",
                times.len(),
                values.len()
            )));
        }
        if times.is_empty() {
            return Err(Error::InvalidArgument(format!("series {label:?} is empty")));
        }
        Ok(TimeSeries { label: label.to_string(), times, values })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// `(time, value)` of the global maximum over the sampled grid.
    pub fn max_point(&self) -> (f64, f64) {
        let mut best = 0;
        for i in 1..self.values.len() {
            if self.values[i] > self.values[best] {
                best = i;
            }
        }
        (self.times[best], self.values[best])
    }

    /// Times of local maxima refined by fitting a parabola through each
    /// sample triple; interior points only.
    pub fn interpolated_peak_times(&self) -> Vec<f64> {
        let mut peaks = Vec::new();
        for i in 1..self.values.len().saturating_sub(1) {
            let (a, b, c) = (self.values[i - 1], self.values[i], self.values[i + 1]);
            if b >= a && b > c {
                let denom = a - 2.0 * b + c;
                let offset = if denom.abs() > 1e-300 { 0.5 * (a - c) / denom } else { 0.0 };
                let dt = self.times[i + 1] - self.times[i];
                peaks.push(self.times[i] + offset * dt);
            }
        }
        peaks
    }
}
