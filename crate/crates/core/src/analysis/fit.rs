use crate::error::{Error, Result};

/// Samples below this fraction of the initial value are left out of a fit.
pub const FIT_FLOOR: f64 = 1e-12;
/// Minimum number of usable samples.
pub const MIN_FIT_SAMPLES: usize = 10;

/// Least-squares exponential fit `value ≈ exp(intercept - rate · t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    pub rate: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Time range of the samples used.
    pub window: (f64, f64),
}

/// Fits a line through `(t, ln value)`, skipping the first `burn_in_fraction` of the
/// time span and any sample below `FIT_FLOOR · value(0)`.
pub fn fit_decay_rate(series: &[(f64, f64)], burn_in_fraction: f64) -> Result<RateFit> {
    if !(0.0..1.0).contains(&burn_in_fraction) {
        return Err(Error::Input(format!(
            "burn-in fraction must lie in [0, 1), got {burn_in_fraction}"
        )));
    }
    let (Some(&(t0, v0)), Some(&(t_end, _))) = (series.first(), series.last()) else {
        return Err(Error::Fit("empty series".into()));
    };
    let t_start = t0 + burn_in_fraction * (t_end - t0);
    let floor = FIT_FLOOR * v0;
    let pts: Vec<(f64, f64)> = series
        .iter()
        .filter(|&&(t, v)| t >= t_start && v > 0.0 && v >= floor && v.is_finite())
        .map(|&(t, v)| (t, v.ln()))
        .collect();
    if pts.len() < MIN_FIT_SAMPLES {
        return Err(Error::Fit(format!(
            "{} usable samples, need at least {MIN_FIT_SAMPLES}",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let tm = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let ym = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - tm).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - tm) * (p.1 - ym)).sum();
    if sxx <= 0.0 {
        return Err(Error::Fit("samples share a single time value".into()));
    }
    let slope = sxy / sxx;
    let intercept = ym - slope * tm;
    let ss_tot: f64 = pts.iter().map(|p| (p.1 - ym).powi(2)).sum();
    let ss_res: f64 = pts
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    let r_squared = if ss_tot == 0.0 || pts.iter().all(|p| p.1 == pts[0].1) {
        1.0
    } else {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    };
    Ok(RateFit {
        rate: -slope,
        intercept,
        r_squared,
        window: (pts[0].0, pts[pts.len() - 1].0),
    })
}

/// Least-squares slope of `ln y` against `ln x`. `None` if any value is not positive.
pub fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 || points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return None;
    }
    let pts: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = pts.len() as f64;
    let xm = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let ym = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - xm).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - xm) * (p.1 - ym)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample(f: impl Fn(f64) -> f64, n: usize, t_end: f64) -> Vec<(f64, f64)> {
        (0..=n)
            .map(|i| {
                let t = t_end * i as f64 / n as f64;
                (t, f(t))
            })
            .collect()
    }

    #[test]
    fn exact_exponential() {
        let fit = fit_decay_rate(&sample(|t| 5.0 * (-0.3 * t).exp(), 100, 10.0), 0.0).unwrap();
        assert!((fit.rate - 0.3).abs() < 1e-10);
        assert!((fit.intercept - 5f64.ln()).abs() < 1e-10);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert_eq!(fit.window, (0.0, 10.0));
    }

    #[test]
    fn constant_series() {
        let fit = fit_decay_rate(&sample(|_| 2.5, 50, 1.0), 0.0).unwrap();
        assert!(fit.rate.abs() < 1e-12);
        assert_eq!(fit.r_squared, 1.0);
    }

    #[test]
    fn two_modes_after_burn_in() {
        let s = sample(|t| 5.0 * (-0.3 * t).exp() + 0.01 * (-3.0 * t).exp(), 200, 20.0);
        let fit = fit_decay_rate(&s, 0.2).unwrap();
        assert!((fit.rate / 0.3 - 1.0).abs() < 0.01);
        assert!(fit.window.0 >= 4.0);
    }

    #[test]
    fn too_few_samples() {
        assert!(matches!(
            fit_decay_rate(&sample(|t| (-t).exp(), 5, 1.0), 0.0),
            Err(Error::Fit(_))
        ));
        assert!(matches!(
            fit_decay_rate(&sample(|_| 0.0, 50, 1.0), 0.0),
            Err(Error::Fit(_))
        ));
        // values collapsing below the floor are dropped
        let s = sample(|t| if t > 0.05 { 1e-20 } else { 1.0 }, 100, 1.0);
        assert!(fit_decay_rate(&s, 0.0).is_err());
    }

    #[test]
    fn slopes() {
        let pts: Vec<(f64, f64)> = [0.1, 0.05, 0.025].iter().map(|&e| (e, 3.0 * e * e)).collect();
        assert!((log_log_slope(&pts).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(log_log_slope(&[(0.1, 0.0), (0.05, 0.0)]), None);
    }

    proptest! {
        #[test]
        fn scale_invariant(rate in 0.01f64..3.0, scale in 1e-6f64..1e6) {
            let s = sample(|t| (-rate * t).exp(), 80, 5.0);
            let scaled: Vec<_> = s.iter().map(|&(t, v)| (t, scale * v)).collect();
            let a = fit_decay_rate(&s, 0.1).unwrap();
            let b = fit_decay_rate(&scaled, 0.1).unwrap();
            prop_assert!((a.rate - rate).abs() < 1e-10);
            prop_assert!((a.rate - b.rate).abs() < 1e-10);
            prop_assert!((0.0..=1.0).contains(&b.r_squared));
        }
    }
}
