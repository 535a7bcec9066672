//! Seasonal ARIMA models: specification, conditional least squares
//! estimation, AIC order search and forecasting.
//!
//! Polynomials follow the sign convention
//! `phi(L) Phi(L^s) (1 - L)^d (1 - L^s)^D y_t = c + theta(L) Theta(L^s) e_t`
//! with `phi(L) = 1 - phi_1 L - ...` and `theta(L) = 1 - theta_1 L - ...`.

mod fit;
mod optim;
mod select;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub use fit::{fit, fit_with, FitOptions, SarimaFit, SarimaSummary};
pub use select::{auto_fit, auto_select, SarimaGrid, MIN_ROOT_MODULUS};

/// Orders of a `SARIMA(p,d,q)(P,D,Q)_s` model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SarimaSpec {
    pub p: usize,
    pub d: usize,
    pub q: usize,
    pub seasonal_p: usize,
    pub seasonal_d: usize,
    pub seasonal_q: usize,
    pub period: usize,
    pub include_constant: bool,
}

impl SarimaSpec {
    /// The constant is included exactly when the model is undifferenced.
    pub fn new(p: usize, d: usize, q: usize, seasonal_p: usize, seasonal_d: usize, seasonal_q: usize, period: usize) -> Self {
        SarimaSpec {
            p,
            d,
            q,
            seasonal_p,
            seasonal_d,
            seasonal_q,
            period,
            include_constant: d + seasonal_d == 0,
        }
    }

    pub fn with_constant(mut self, include: bool) -> Self {
        self.include_constant = include;
        self
    }

    /// Number of AR and MA coefficients.
    pub fn arma_params(&self) -> usize {
        self.p + self.q + self.seasonal_p + self.seasonal_q
    }

    /// Free parameters counted by the information criteria: coefficients,
    /// the constant and the innovation variance.
    pub fn param_count(&self) -> usize {
        self.arma_params() + usize::from(self.include_constant) + 1
    }

    /// Observations consumed by differencing.
    pub fn differencing_loss(&self) -> usize {
        self.d + self.seasonal_d * self.period
    }

    pub fn max_ar_lag(&self) -> usize {
        self.p + self.seasonal_p * self.period
    }

    pub fn max_ma_lag(&self) -> usize {
        self.q + self.seasonal_q * self.period
    }

    pub(crate) fn orders(&self) -> [usize; 6] {
        [self.p, self.d, self.q, self.seasonal_p, self.seasonal_d, self.seasonal_q]
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.period == 0 {
            return Err(Error::InvalidArgument("seasonal period must be at least 1".into()));
        }
        Ok(())
    }
}

impl fmt::Display for SarimaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{})({},{},{})_{}",
            self.p, self.d, self.q, self.seasonal_p, self.seasonal_d, self.seasonal_q, self.period
        )
    }
}

/// Parses `p,d,q,P,D,Q,s`.
impl FromStr for SarimaSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<usize> = s
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::InvalidArgument(format!("invalid SARIMA order '{s}', expected p,d,q,P,D,Q,s")))?;
        let [p, d, q, sp, sd, sq, period] = parts[..] else {
            return Err(Error::InvalidArgument(format!(
                "invalid SARIMA order '{s}', expected 7 comma-separated integers"
            )));
        };
        let spec = SarimaSpec::new(p, d, q, sp, sd, sq, period);
        spec.validate()?;
        Ok(spec)
    }
}

fn lag_difference<T: Scalar>(x: &[T], lag: usize) -> Vec<T> {
    (lag..x.len()).map(|t| x[t] - x[t - lag]).collect()
}

/// Applies `(1 - L)^d` and then `(1 - L^s)^D`. The result is shorter than the
/// input by `d + D*s`.
pub fn difference<T: Scalar>(series: &[T], d: usize, seasonal_d: usize, period: usize) -> Result<Vec<T>> {
    if period == 0 {
        return Err(Error::InvalidArgument("seasonal period must be at least 1".into()));
    }
    let loss = d + seasonal_d * period;
    if series.len() <= loss {
        return Err(Error::SeriesTooShort {
            needed: loss + 1,
            got: series.len(),
        });
    }
    let mut out = series.to_vec();
    for _ in 0..d {
        out = lag_difference(&out, 1);
    }
    for _ in 0..seasonal_d {
        out = lag_difference(&out, period);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ramp_differences_to_constant() {
        let x: Vec<f64> = (0..30).map(|n| 2.5 * n as f64).collect();
        let d = difference(&x, 1, 0, 12).unwrap();
        assert_eq!(d.len(), 29);
        assert!(d.iter().all(|&v| (v - 2.5).abs() < 1e-12));
    }

    #[test]
    fn seasonal_difference_kills_cycle() {
        let x: Vec<f64> = (0..60).map(|n| (n % 12) as f64 * 3.0 - 7.0).collect();
        let d = difference(&x, 0, 1, 12).unwrap();
        assert_eq!(d.len(), 48);
        assert!(d.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn composition_matches_two_passes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x: Vec<f64> = (0..100).map(|_| rng.random_range(-50.0..50.0)).collect();
        let once: Vec<f64> = (1..x.len()).map(|t| x[t] - x[t - 1]).collect();
        let twice: Vec<f64> = (12..once.len()).map(|t| once[t] - once[t - 12]).collect();
        let d = difference(&x, 1, 1, 12).unwrap();
        assert_eq!(d.len(), twice.len());
        for (a, b) in d.iter().zip(&twice) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn too_short_for_differencing() {
        assert!(matches!(
            difference(&[1.0; 13], 1, 1, 12),
            Err(Error::SeriesTooShort { needed: 14, got: 13 })
        ));
    }

    #[test]
    fn spec_parsing_and_display() {
        let s: SarimaSpec = "1, 0, 2, 0, 1, 1, 12".parse().unwrap();
        assert_eq!(s.to_string(), "(1,0,2)(0,1,1)_12");
        assert!(!s.include_constant);
        assert_eq!(s.param_count(), 5);
        assert!("1,0,2".parse::<SarimaSpec>().is_err());
        assert!("1,0,2,0,1,1,0".parse::<SarimaSpec>().is_err());
        assert!(SarimaSpec::new(0, 0, 0, 0, 0, 0, 12).include_constant);
    }
}
