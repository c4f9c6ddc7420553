//! Derived analyses over simulation output: saturation times, the
//! peak-vs-atom-number power-law fit, and the 1-D spatial coherence
//! predictor.

use crate::error::{Error, Result};
use crate::timeseries::TimeSeries;

/// First time the series reaches `target_fraction * n_atoms`, linearly
/// interpolated between the bracketing samples.
pub fn saturation_time(series: &TimeSeries, target_fraction: f64, n_atoms: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&target_fraction) {
        return Err(Error::InvalidArgument(format!(
            "target fraction must be in [0, 1], got {target_fraction}"
        )));
    }
    let target = target_fraction * n_atoms as f64;
    if series.values[0] >= target {
        return Ok(series.times[0]);
    }
    for i in 1..series.len() {
        let (v0, v1) = (series.values[i - 1], series.values[i]);
        if v1 >= target {
            let (t0, t1) = (series.times[i - 1], series.times[i]);
            let frac = (target - v0) / (v1 - v0);
            return Ok(t0 + frac * (t1 - t0));
        }
    }
    Err(Error::NoCrossing(format!(
        "series {:?} never reaches {target} (max {})",
        series.label,
        series.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    )))
}

/// Parameters of the fit `f(N) = a (N - b)^n + c`.
#[derive(Clone, Copy, Debug)]
pub struct FitResult {
    pub amplitude: f64,
    pub offset: f64,
    pub constant: f64,
    pub exponent: f64,
    /// Sum of squared residuals at the optimum.
    pub residual: f64,
    /// Set when the input values are all equal; the other fields then
    /// describe the flat line through them.
    pub flat: bool,
}

/// Least-squares fit of `a (N - b)^n + c` by nested search: for each
/// candidate `(n, b)` on a refining grid the linear subproblem in `(a, c)`
/// is solved exactly; the grid shrinks around the best candidate.
/// Deterministic.
pub fn fit_peak_scaling(points: &[(f64, f64)]) -> Result<FitResult> {
    if points.len() < 4 {
        return Err(Error::InvalidArgument(format!(
            "need at least 4 points for the power-law fit, got {}",
            points.len()
        )));
    }
    let spread = points
        .iter()
        .map(|&(_, y)| y)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), y| (lo.min(y), hi.max(y)));
    if spread.1 - spread.0 < 1e-12 * spread.1.abs().max(1.0) {
        let mean = points.iter().map(|&(_, y)| y).sum::<f64>() / points.len() as f64;
        return Ok(FitResult {
            amplitude: 0.0,
            offset: 0.0,
            constant: mean,
            exponent: 1.0,
            residual: 0.0,
            flat: true,
        });
    }

    let min_x = points.iter().map(|&(x, _)| x).fold(f64::INFINITY, f64::min);

    // residual of the optimal (a, c) for fixed (n, b)
    let eval = |n: f64, b: f64| -> (f64, f64, f64) {
        let m = points.len() as f64;
        let mut su = 0.0;
        let mut sy = 0.0;
        let mut suu = 0.0;
        let mut suy = 0.0;
        for &(x, y) in points {
            let u = (x - b).powf(n);
            su += u;
            sy += y;
            suu += u * u;
            suy += u * y;
        }
        let denom = m * suu - su * su;
        if denom.abs() < 1e-300 {
            return (f64::INFINITY, 0.0, sy / m);
        }
        let a = (m * suy - su * sy) / denom;
        let c = (sy - a * su) / m;
        let mut res = 0.0;
        for &(x, y) in points {
            let r = a * (x - b).powf(n) + c - y;
            res += r * r;
        }
        (res, a, c)
    };

    let mut n_center = 2.0;
    let mut n_half = 2.0; // n in [0, 4] initially
    let mut b_center = 0.0;
    let mut b_half = (min_x - 0.01).max(2.0); // keep N - b > 0
    let mut best = (f64::INFINITY, 0.0, 0.0, 2.0, 0.0); // (res, a, c, n, b)

    for _round in 0..10 {
        let grid = 40;
        for i in 0..=grid {
            let n = n_center - n_half + 2.0 * n_half * i as f64 / grid as f64;
            if n <= 0.05 {
                continue;
            }
            for j in 0..=grid {
                let b = b_center - b_half + 2.0 * b_half * j as f64 / grid as f64;
                if b >= min_x - 1e-6 {
                    continue;
                }
                let (res, a, c) = eval(n, b);
                if res < best.0 {
                    best = (res, a, c, n, b);
                }
            }
        }
        n_center = best.3;
        b_center = best.4;
        n_half *= 0.35;
        b_half *= 0.35;
    }

    Ok(FitResult {
        amplitude: best.1,
        offset: best.4,
        constant: best.2,
        exponent: best.3,
        residual: best.0,
        flat: false,
    })
}

/// Peak coherence predicted for a chain of equally spaced emitters in a 1-D
/// vacuum, anchored to the measured peak at zero separation:
///
/// ```text
/// I_C^max(Δr) = I0 · Σ_{m=1}^{N-1} (N - m) cos(m Δr / λ0) / Σ_{m=1}^{N-1} (N - m)
/// ```
pub fn predicted_max_coherence(
    dr: f64,
    lambda0: f64,
    n_atoms: usize,
    peak_at_zero: f64,
) -> Result<f64> {
    if n_atoms < 2 {
        return Err(Error::InvalidArgument(
            "coherence needs at least two emitters".into(),
        ));
    }
    if dr < 0.0 || lambda0 <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "need dr >= 0 and lambda0 > 0, got {dr} and {lambda0}"
        )));
    }
    let mut weight_sum = 0.0;
    let mut cos_sum = 0.0;
    for m in 1..n_atoms {
        let w = (n_atoms - m) as f64;
        weight_sum += w;
        cos_sum += w * (m as f64 * dr / lambda0).cos();
    }
    Ok(peak_at_zero * cos_sum / weight_sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn saturation_of_constant_series_is_zero() {
        let s = TimeSeries::new("n", vec![0.0, 1.0, 2.0], vec![4.0, 4.0, 4.0]).unwrap();
        assert_eq!(saturation_time(&s, 0.8, 4).unwrap(), 0.0);
    }

    #[test]
    fn saturation_matches_closed_form() {
        // n(t) = N (1 - e^{-2t}), fraction 0.8 -> t = ln(5)/2
        let n_atoms = 3usize;
        let times: Vec<f64> = (0..=400).map(|i| i as f64 * 0.005).collect();
        let values: Vec<f64> = times
            .iter()
            .map(|t| n_atoms as f64 * (1.0 - (-2.0 * t).exp()))
            .collect();
        let s = TimeSeries::new("n", times, values).unwrap();
        let t = saturation_time(&s, 0.8, n_atoms).unwrap();
        let expect = 5f64.ln() / 2.0;
        assert!((t - expect).abs() < 1e-4, "{t} vs {expect}");
    }

    #[test]
    fn saturation_reports_no_crossing() {
        let s = TimeSeries::new("n", vec![0.0, 1.0], vec![0.0, 1.0]).unwrap();
        assert!(matches!(
            saturation_time(&s, 0.8, 4),
            Err(Error::NoCrossing(_))
        ));
    }

    #[test]
    fn fit_recovers_exact_quadratic() {
        let points: Vec<(f64, f64)> = (2..=7).map(|n| (n as f64, (n * n) as f64)).collect();
        let fit = fit_peak_scaling(&points).unwrap();
        assert!((fit.exponent - 2.0).abs() < 0.01, "n = {}", fit.exponent);
        assert!((fit.amplitude - 1.0).abs() < 0.05);
        assert!(fit.residual < 1e-6);
    }

    #[test]
    fn fit_recovers_exact_cubic() {
        let points: Vec<(f64, f64)> =
            (2..=7).map(|n| (n as f64, (n * n * n) as f64)).collect();
        let fit = fit_peak_scaling(&points).unwrap();
        assert!((fit.exponent - 3.0).abs() < 0.01, "n = {}", fit.exponent);
    }

    #[test]
    fn fit_recovers_shifted_scaled_square() {
        let (a, b, c, n) = (0.7, 0.5, 3.0, 2.0);
        let points: Vec<(f64, f64)> = (2..=8)
            .map(|x| (x as f64, a * (x as f64 - b).powf(n) + c))
            .collect();
        let fit = fit_peak_scaling(&points).unwrap();
        assert!((fit.exponent - n).abs() < 0.02, "n = {}", fit.exponent);
    }

    #[test]
    fn flat_data_flags_degenerate_fit() {
        let points: Vec<(f64, f64)> = (2..=6).map(|x| (x as f64, 5.0)).collect();
        let fit = fit_peak_scaling(&points).unwrap();
        assert!(fit.flat);
        assert!((fit.constant - 5.0).abs() < 1e-12);
    }

    #[test]
    fn predictor_anchors_at_zero_separation() {
        for n in 2..=6 {
            let p = predicted_max_coherence(0.0, 0.01, n, 3.7).unwrap();
            assert!((p - 3.7).abs() < 1e-12);
        }
    }

    #[test]
    fn predictor_two_atoms_is_cosine() {
        let lambda0 = 0.01;
        for i in 0..20 {
            let dr = i as f64 * 0.001;
            let p = predicted_max_coherence(dr, lambda0, 2, 1.0).unwrap();
            assert!((p - (dr / lambda0).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn predictor_rejects_single_atom() {
        assert!(predicted_max_coherence(0.0, 0.01, 1, 1.0).is_err());
    }

    #[test]
    fn peak_interpolation_refines_maxima() {
        // samples of sin² with a coarse grid; interpolated peaks should land
        // near π/2 + kπ
        let times: Vec<f64> = (0..200).map(|i| i as f64 * 0.05).collect();
        let values: Vec<f64> = times.iter().map(|t| t.sin().powi(2)).collect();
        let s = TimeSeries::new("sin2", times, values).unwrap();
        let peaks = s.interpolated_peak_times();
        assert!(peaks.len() >= 3);
        for (k, t) in peaks.iter().enumerate() {
            let expect = std::f64::consts::FRAC_PI_2 + k as f64 * std::f64::consts::PI;
            assert!((t - expect).abs() < 0.01, "peak {k}: {t} vs {expect}");
        }
    }
}
