use crate::error::{Error, Result};

pub const DEFAULT_SLOPE_THRESHOLD: f64 = 0.01;

/// Least-squares slope (per slot) of the final half of `series`; stable iff
/// its magnitude is below `slope_threshold`.
pub fn classify_stability(series: &[f64], slope_threshold: f64) -> Result<(bool, f64)> {
    if series.len() < 4 {
        return Err(Error::domain(format!("stability needs at least 4 samples, got {}", series.len())));
    }
    let tail = &series[series.len() / 2..];
    let slope = least_squares_slope(tail);
    Ok((slope.abs() < slope_threshold, slope))
}

fn least_squares_slope(ys: &[f64]) -> f64 {
    let n = ys.len() as f64;
    let x_mean = (n - 1.0) / 2.0;
    let y_mean = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, &y) in ys.iter().enumerate() {
        let dx = i as f64 - x_mean;
        sxy += dx * (y - y_mean);
        sxx += dx * dx;
    }
    sxy / sxx
}

/// Fraction of a scheduling cycle spent in the `4k + 2` control phases.
pub fn overhead_fraction(k: usize, phase_time: f64, cycle_time: f64) -> Result<f64> {
    if phase_time.is_nan() || phase_time < 0.0 || cycle_time.is_nan() || cycle_time <= 0.0 {
        return Err(Error::domain("phase time must be nonnegative and cycle time positive"));
    }
    let control = (4 * k + 2) as f64 * phase_time;
    if cycle_time < control {
        return Err(Error::domain(format!("cycle time {cycle_time} is shorter than the control part {control}")));
    }
    Ok(control / cycle_time)
}
