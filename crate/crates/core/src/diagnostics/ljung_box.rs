use crate::error::{Error, Result};
use crate::scalar::{mean, Scalar};
use crate::special::chi2_sf;

use super::{Decision, DegreesOfFreedom, TestResult};

/// Ljung-Box portmanteau test settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LjungBox {
    pub lags: usize,
    /// ARMA parameters estimated before computing the residuals; the
    /// degrees of freedom are `lags - fitted_params`, floored at 1.
    pub fitted_params: usize,
    pub alpha: f64,
}

impl Default for LjungBox {
    fn default() -> Self {
        Self {
            lags: 12,
            fitted_params: 0,
            alpha: 0.05,
        }
    }
}

impl LjungBox {
    pub fn with_lags(lags: usize) -> Self {
        Self { lags, ..Self::default() }
    }

    pub fn df(&self) -> usize {
        self.lags.saturating_sub(self.fitted_params).max(1)
    }

    /// `Q = n (n + 2) sum_k r_k^2 / (n - k)` and its chi-square tail.
    pub fn test<T: Scalar>(&self, residuals: &[T]) -> Result<TestResult> {
        let n = residuals.len();
        if self.lags < 1 {
            return Err(Error::InvalidArgument("Ljung-Box needs at least one lag".into()));
        }
        if n <= self.lags {
            return Err(Error::SeriesTooShort {
                needed: self.lags + 1,
                got: n,
            });
        }
        let m = mean(residuals);
        let centered: Vec<f64> = residuals.iter().map(|&x| (x - m).to_f64_lossy()).collect();
        let denom: f64 = centered.iter().map(|x| x * x).sum();
        let df = self.df();
        if denom == 0.0 {
            return Ok(TestResult {
                statistic: 0.0,
                p_value: 1.0,
                df: DegreesOfFreedom::Single(df),
                alpha: self.alpha,
                decision: Decision::White,
                degenerate: true,
            });
        }
        let nf = n as f64;
        let q = (1..=self.lags)
            .map(|k| {
                let r: f64 = centered[k..].iter().zip(&centered).map(|(a, b)| a * b).sum::<f64>() / denom;
                r * r / (nf - k as f64)
            })
            .sum::<f64>()
            * nf
            * (nf + 2.0);
        Ok(statistic_result(q, df, self.alpha))
    }
}

/// Chi-square decision for a given `Q` statistic.
pub fn statistic_result(q: f64, df: usize, alpha: f64) -> TestResult {
    let p = chi2_sf(q, df as f64);
    TestResult {
        statistic: q,
        p_value: p,
        df: DegreesOfFreedom::Single(df),
        alpha,
        decision: if p < alpha { Decision::Correlated } else { Decision::White },
        degenerate: false,
    }
}

/// Ljung-Box test with `lags` lags and no fitted-parameter correction.
pub fn ljung_box<T: Scalar>(residuals: &[T], lags: usize) -> Result<TestResult> {
    LjungBox::with_lags(lags).test(residuals)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_anchor() {
        let r = statistic_result(17.6853, 12, 0.05);
        assert!((r.p_value - 0.1256).abs() <= 0.0005, "{}", r.p_value);
        assert_eq!(r.decision, Decision::White);
    }

    #[test]
    fn alternating_series_rejected() {
        let x: Vec<f64> = (0..200).map(|k| if k % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let r = ljung_box(&x, 12).unwrap();
        assert!(r.p_value < 1e-6);
        assert_eq!(r.decision, Decision::Correlated);
    }

    #[test]
    fn df_correction() {
        let lb = LjungBox {
            lags: 12,
            fitted_params: 3,
            alpha: 0.05,
        };
        assert_eq!(lb.df(), 9);
        let lb = LjungBox {
            lags: 2,
            fitted_params: 5,
            alpha: 0.05,
        };
        assert_eq!(lb.df(), 1);
    }

    #[test]
    fn contract_errors() {
        assert!(ljung_box(&[1.0, 2.0, 3.0], 3).is_err());
        assert!(ljung_box(&[1.0, 2.0, 3.0], 0).is_err());
        let r = ljung_box(&[2.0; 30], 5).unwrap();
        assert!(r.degenerate);
    }

    #[test]
    fn p_value_decreases_in_q() {
        let mut last = 1.0;
        for i in 0..200 {
            let p = statistic_result(i as f64 * 0.25, 12, 0.05).p_value;
            assert!(p <= last);
            last = p;
        }
    }
}
