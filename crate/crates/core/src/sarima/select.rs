use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::fit::{fit_with, FitOptions, SarimaFit};
use super::SarimaSpec;

/// Candidates with an AR or MA root closer to the unit circle than this are
/// not selected.
pub const MIN_ROOT_MODULUS: f64 = 1.01;

/// Bounds of the exhaustive order search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SarimaGrid {
    pub max_p: usize,
    pub max_q: usize,
    pub max_seasonal_p: usize,
    pub max_seasonal_q: usize,
    pub max_d: usize,
    pub max_seasonal_d: usize,
    /// Forces the constant on or off; `None` keeps the differencing rule.
    pub constant: Option<bool>,
}

impl Default for SarimaGrid {
    fn default() -> Self {
        SarimaGrid {
            max_p: 3,
            max_q: 3,
            max_seasonal_p: 2,
            max_seasonal_q: 2,
            max_d: 1,
            max_seasonal_d: 1,
            constant: None,
        }
    }
}

impl SarimaGrid {
    pub fn candidates(&self, period: usize) -> Vec<SarimaSpec> {
        let mut out = Vec::new();
        for p in 0..=self.max_p {
            for d in 0..=self.max_d {
                for q in 0..=self.max_q {
                    for sp in 0..=self.max_seasonal_p {
                        for sd in 0..=self.max_seasonal_d {
                            for sq in 0..=self.max_seasonal_q {
                                let mut spec = SarimaSpec::new(p, d, q, sp, sd, sq, period);
                                if let Some(c) = self.constant {
                                    spec = spec.with_constant(c);
                                }
                                out.push(spec);
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// First original-time index every candidate can condition on.
    pub fn common_start(&self, period: usize) -> usize {
        self.max_d + (self.max_seasonal_d + self.max_seasonal_p) * period + self.max_p
    }
}

fn rank<T: Scalar>(a: &SarimaFit<T>, b: &SarimaFit<T>) -> Ordering {
    a.aic
        .to_f64_lossy()
        .total_cmp(&b.aic.to_f64_lossy())
        .then(a.spec.param_count().cmp(&b.spec.param_count()))
        .then(a.spec.orders().cmp(&b.spec.orders()))
}

/// Fits every candidate of the grid on a common conditioning sample and
/// returns the fit with the smallest AIC. Ties go to fewer parameters, then
/// to the lexicographically smallest orders. Candidates that fail to fit or
/// have a polynomial root within [`MIN_ROOT_MODULUS`] of the origin's unit
/// circle are skipped.
pub fn auto_fit<T: Scalar>(series: &[T], period: usize, grid: &SarimaGrid) -> Result<SarimaFit<T>> {
    if period == 0 {
        return Err(Error::InvalidArgument("seasonal period must be at least 1".into()));
    }
    if series.len() < 3 * period {
        return Err(Error::SeriesTooShort {
            needed: 3 * period,
            got: series.len(),
        });
    }
    let opts = FitOptions {
        condition_from: Some(grid.common_start(period)),
        ..Default::default()
    };
    let results: Vec<(SarimaSpec, Result<SarimaFit<T>>)> = grid
        .candidates(period)
        .into_par_iter()
        .map(|spec| (spec, fit_with(series, spec, opts)))
        .collect();

    let mut best: Option<SarimaFit<T>> = None;
    let mut last_error = None;
    for (spec, r) in results {
        match r {
            Ok(f) if !f.roots_beyond(MIN_ROOT_MODULUS) => {
                last_error = Some(format!("{spec}: root within {MIN_ROOT_MODULUS} of the unit circle"))
            }
            Ok(f) if f.aic.is_finite() => {
                if best.as_ref().is_none_or(|b| rank(&f, b) == Ordering::Less) {
                    best = Some(f);
                }
            }
            Ok(_) => last_error = Some(format!("{spec}: non-finite AIC")),
            Err(e) => last_error = Some(format!("{spec}: {e}")),
        }
    }
    best.ok_or_else(|| Error::AllCandidatesFailed(last_error.unwrap_or_else(|| "empty grid".into())))
}

/// Order chosen by [`auto_fit`].
pub fn auto_select<T: Scalar>(series: &[T], period: usize, grid: &SarimaGrid) -> Result<SarimaSpec> {
    auto_fit(series, period, grid).map(|f| f.spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sarima::fit::tests::{noise, simulate};

    #[test]
    fn grid_size_and_order() {
        let c = SarimaGrid::default().candidates(12);
        assert_eq!(c.len(), 4 * 4 * 3 * 3 * 2 * 2);
        assert_eq!(c[0].orders(), [0; 6]);
        assert!(c[0].include_constant);
        assert!(c[1].include_constant);
        assert!(!c[3].include_constant);
    }

    #[test]
    fn too_short_for_selection() {
        assert!(matches!(
            auto_select(&noise(35, 1), 12, &SarimaGrid::default()),
            Err(Error::SeriesTooShort { needed: 36, got: 35 })
        ));
    }

    #[test]
    fn white_noise_selects_mean_model() {
        let grid = SarimaGrid {
            max_p: 1,
            max_q: 1,
            max_seasonal_p: 1,
            max_seasonal_q: 1,
            ..Default::default()
        };
        let hits = (0..5)
            .filter(|&seed| {
                let y: Vec<f64> = noise(300, 100 + seed).iter().map(|v| v + 5.0).collect();
                auto_select(&y, 12, &grid).unwrap().orders() == [0; 6]
            })
            .count();
        assert!(hits >= 3, "{hits}/5");
    }

    #[test]
    fn seasonal_structure_found() {
        let grid = SarimaGrid {
            max_p: 1,
            max_q: 1,
            max_seasonal_p: 1,
            max_seasonal_q: 1,
            ..Default::default()
        };
        // integrate seasonally: (1 - L^12) z = y with seasonal MA
        let e = simulate(600, 0.5, 0.0, 0.0, 0.6, 12, 8);
        let mut z = vec![0.0; 600];
        for t in 0..600 {
            z[t] = e[t] + if t >= 12 { z[t - 12] } else { 0.0 };
        }
        let spec = auto_select(&z, 12, &grid).unwrap();
        assert_eq!((spec.d, spec.seasonal_d), (0, 1), "{spec}");
        assert!(spec.seasonal_q >= 1, "{spec}");
    }
}
