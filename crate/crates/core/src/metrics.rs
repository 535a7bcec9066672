//! Forecast accuracy measures and Taylor-diagram statistics.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{mean, population_variance, Scalar};

/// Accuracy of a prediction against observations.
///
/// Agreement indices that divide by the spread of the observations are
/// `None` when the observations are constant; `pbias` is `None` when the
/// observations sum to zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricReport<T> {
    pub rmse: T,
    pub mae: T,
    /// Symmetric mean absolute percentage error, in percent, within [0, 200].
    pub smape: T,
    /// Willmott's index of agreement.
    pub willmott_d: Option<T>,
    /// `1 - MSE / MSE_ref`.
    pub skill_score: Option<T>,
    /// Percent bias `100 * sum(y - yhat) / sum(y)`; positive means
    /// underestimation.
    pub pbias: Option<T>,
    pub explained_variance: Option<T>,
    /// Legates-McCabe efficiency based on absolute errors.
    pub legates_mccabe_e1: Option<T>,
}

fn check_pair<T>(obs: &[T], pred: &[T]) -> Result<()> {
    if obs.len() != pred.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} observations vs {} predictions",
            obs.len(),
            pred.len()
        )));
    }
    if obs.len() < 2 {
        return Err(Error::SeriesTooShort {
            needed: 2,
            got: obs.len(),
        });
    }
    Ok(())
}

/// Computes all accuracy measures.
///
/// `reference_mse` is the error of the reference forecast for the skill
/// score; by default the climatology reference is used, i.e. the population
/// variance of `obs`.
pub fn compute_metrics<T: Scalar>(obs: &[T], pred: &[T], reference_mse: Option<T>) -> Result<MetricReport<T>> {
    check_pair(obs, pred)?;
    let n = T::count(obs.len());
    let obs_mean = mean(obs);
    let errors: Vec<T> = obs.iter().zip(pred).map(|(&y, &p)| y - p).collect();

    let mse = errors.iter().map(|&e| e * e).sum::<T>() / n;
    let mae = errors.iter().map(|e| e.abs()).sum::<T>() / n;
    let smape = obs
        .iter()
        .zip(pred)
        .map(|(&y, &p)| {
            let denom = (y.abs() + p.abs()) / T::lit(2.0);
            if denom == T::zero() {
                T::zero()
            } else {
                (y - p).abs() / denom
            }
        })
        .sum::<T>()
        * T::lit(100.0)
        / n;

    let obs_var = population_variance(obs);
    let spread = obs_var > T::zero();

    let willmott_d = spread.then(|| {
        let potential: T = obs
            .iter()
            .zip(pred)
            .map(|(&y, &p)| {
                let s = (p - obs_mean).abs() + (y - obs_mean).abs();
                s * s
            })
            .sum();
        T::one() - mse * n / potential
    });
    let reference = reference_mse.or(spread.then_some(obs_var));
    let skill_score = reference.filter(|r| *r > T::zero()).map(|r| T::one() - mse / r);
    let obs_sum: T = obs.iter().copied().sum();
    let pbias = (obs_sum != T::zero()).then(|| T::lit(100.0) * errors.iter().copied().sum::<T>() / obs_sum);
    let explained_variance = spread.then(|| T::one() - population_variance(&errors) / obs_var);
    let legates_mccabe_e1 = spread.then(|| {
        let abs_dev: T = obs.iter().map(|&y| (y - obs_mean).abs()).sum();
        T::one() - mae * n / abs_dev
    });

    Ok(MetricReport {
        rmse: mse.sqrt(),
        mae,
        smape,
        willmott_d,
        skill_score,
        pbias,
        explained_variance,
        legates_mccabe_e1,
    })
}

/// Correlation, standard deviations and centered RMSE of a prediction, all
/// with the population (`1/n`) convention.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaylorStats<T> {
    pub correlation: T,
    pub std_obs: T,
    pub std_pred: T,
    pub centered_rmse: T,
}

pub fn taylor_stats<T: Scalar>(obs: &[T], pred: &[T]) -> Result<TaylorStats<T>> {
    check_pair(obs, pred)?;
    let n = T::count(obs.len());
    let (mo, mp) = (mean(obs), mean(pred));
    let (mut so, mut sp, mut cross, mut diff) = (T::zero(), T::zero(), T::zero(), T::zero());
    for (&y, &p) in obs.iter().zip(pred) {
        let (a, b) = (y - mo, p - mp);
        so += a * a;
        sp += b * b;
        cross += a * b;
        diff += (a - b) * (a - b);
    }
    if so == T::zero() || sp == T::zero() {
        return Err(Error::ZeroVariance);
    }
    Ok(TaylorStats {
        correlation: (cross / (so * sp).sqrt()).max(-T::one()).min(T::one()),
        std_obs: (so / n).sqrt(),
        std_pred: (sp / n).sqrt(),
        centered_rmse: (diff / n).sqrt(),
    })
}

/// Centered RMSE implied by the Taylor-diagram law of cosines.
pub fn centered_rmse_from_geometry<T: Scalar>(correlation: T, std_obs: T, std_pred: T) -> T {
    (std_obs * std_obs + std_pred * std_pred - T::lit(2.0) * std_obs * std_pred * correlation)
        .max(T::zero())
        .sqrt()
}
