//! Success-rate intervals and the log-log threshold fit.

use serde::Serialize;

use crate::error::{Error, Result};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `successes` out of `trials`; `[0, 1]` when
/// `trials = 0`.
pub fn wilson_interval(successes: usize, trials: usize, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = z / denom * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Aggregate of the trials at one `(n, p)`. Timeouts are censored: they are
/// excluded from the rate and its interval, never counted as failures.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvePoint {
    pub n: usize,
    pub p: f64,
    pub successes: usize,
    pub failures: usize,
    pub timeouts: usize,
    pub trials: usize,
    /// `successes / (successes + failures)`; absent when every trial timed out.
    pub rate: Option<f64>,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

impl CurvePoint {
    pub fn new(n: usize, p: f64, successes: usize, failures: usize, timeouts: usize) -> Self {
        let decided = successes + failures;
        let rate = (decided > 0).then(|| successes as f64 / decided as f64);
        let (ci_lo, ci_hi) = wilson_interval(successes, decided, Z95);
        CurvePoint {
            n,
            p,
            successes,
            failures,
            timeouts,
            trials: decided + timeouts,
            rate,
            ci_lo,
            ci_hi,
        }
    }

    pub fn timeout_rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.timeouts as f64 / self.trials as f64
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    pub stderr: f64,
}

/// Least-squares line through `(ln n, ln p)`.
pub fn fit_threshold_exponent(points: &[(f64, f64)]) -> Result<ExponentFit> {
    if points.len() < 3 {
        return Err(Error::DegenerateFit(format!(
            "need at least 3 points, got {}",
            points.len()
        )));
    }
    if points
        .iter()
        .any(|&(n, p)| !(n > 0.0 && p > 0.0 && n.is_finite() && p.is_finite()))
    {
        return Err(Error::DegenerateFit(
            "n and p must be positive and finite".into(),
        ));
    }
    let mut ns: Vec<f64> = points.iter().map(|p| p.0).collect();
    ns.sort_by(f64::total_cmp);
    if ns.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::DegenerateFit("n values must be distinct".into()));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let stderr = (sse / (k - 2.0) / sxx).sqrt();
    Ok(ExponentFit {
        slope,
        intercept,
        stderr,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_known_values() {
        // 5/10 at 95%: centre 0.5, half-width 0.2775...
        let (lo, hi) = wilson_interval(5, 10, Z95);
        assert!((lo - 0.236_593).abs() < 1e-5 && (hi - 0.763_407).abs() < 1e-5);
        let (lo, hi) = wilson_interval(0, 20, Z95);
        assert_eq!(lo, 0.0);
        assert!((hi - 0.161_125).abs() < 1e-5);
        assert_eq!(wilson_interval(0, 0, Z95), (0.0, 1.0));
    }

    #[test]
    fn curve_point_excludes_timeouts() {
        let c = CurvePoint::new(10, 0.1, 3, 1, 6);
        assert_eq!(c.trials, 10);
        assert_eq!(c.rate, Some(0.75));
        assert!((c.timeout_rate() - 0.6).abs() < 1e-12);
        assert_eq!(CurvePoint::new(10, 0.1, 0, 0, 4).rate, None);
    }

    #[test]
    fn exact_fits() {
        let pts: Vec<(f64, f64)> = [16.0, 24.0, 32.0, 48.0]
            .iter()
            .map(|&n| (n, 1.0 / n))
            .collect();
        let f = fit_threshold_exponent(&pts).unwrap();
        assert!((f.slope + 1.0).abs() < 1e-12 && f.stderr < 1e-12);
        let pts: Vec<(f64, f64)> = [10.0, 100.0, 1000.0]
            .iter()
            .map(|&n: &f64| (n, 3.0 * n.powf(-2.0 / 3.0)))
            .collect();
        let f = fit_threshold_exponent(&pts).unwrap();
        assert!((f.slope + 2.0 / 3.0).abs() < 1e-12);
        assert!((f.intercept - 3f64.ln()).abs() < 1e-12);
        assert!(fit_threshold_exponent(&pts[..2]).is_err());
        assert!(fit_threshold_exponent(&[(5.0, 0.1), (5.0, 0.2), (6.0, 0.1)]).is_err());
        assert!(fit_threshold_exponent(&[(5.0, 0.0), (6.0, 0.2), (7.0, 0.1)]).is_err());
    }
}
