use crate::error::{Error, Result};
use crate::linalg::{least_squares, Matrix};
use crate::scalar::Scalar;
use crate::special::f_sf;

use super::{Decision, DegreesOfFreedom, TestResult};

/// Autoregressive order used by [`tsay_test`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArOrder {
    /// Chosen by AIC among `1..=max` on a common estimation sample.
    Auto { max: usize },
    Fixed(usize),
}

impl Default for ArOrder {
    fn default() -> Self {
        ArOrder::Auto { max: 10 }
    }
}

fn min_len(p: usize) -> usize {
    40 + p * p
}

fn lag_rows(x: &[f64], p: usize, from: usize) -> Vec<Vec<f64>> {
    (from..x.len())
        .map(|t| {
            let mut row = Vec::with_capacity(p + 1);
            row.push(1.0);
            row.extend((1..=p).map(|k| x[t - k]));
            row
        })
        .collect()
}

fn select_order(x: &[f64], max: usize) -> Result<usize> {
    let n = x.len();
    let max = (1..=max.max(1)).take_while(|&p| min_len(p) <= n).last().ok_or(Error::SeriesTooShort {
        needed: min_len(1),
        got: n,
    })?;
    let mut best: Option<(f64, usize)> = None;
    for p in 1..=max {
        let rows = lag_rows(x, p, max);
        let y = &x[max..];
        let Ok(ls) = least_squares(&Matrix::from_rows(&rows)?, y) else {
            continue;
        };
        let m = y.len() as f64;
        let aic = m * (ls.rss / m).max(f64::MIN_POSITIVE).ln() + 2.0 * (p as f64 + 1.0);
        if best.is_none_or(|(b, _)| aic < b) {
            best = Some((aic, p));
        }
    }
    best.map(|(_, p)| p)
        .ok_or_else(|| Error::InvalidArgument("no autoregression could be fitted".into()))
}

fn degenerate_linear(alpha: f64, p: usize) -> TestResult {
    let m = p * (p + 1) / 2;
    TestResult {
        statistic: 0.0,
        p_value: 1.0,
        df: DegreesOfFreedom::Pair(m, 0),
        alpha,
        decision: Decision::Linear,
        degenerate: true,
    }
}

/// Tsay's F test for quadratic nonlinearity in an autoregression.
///
/// An AR(p) with intercept is fitted by least squares; its residuals are then
/// regressed on the `p(p+1)/2` distinct products `x_{t-i} x_{t-j}` (with the
/// intercept and lags retained). The F statistic of the product block has
/// `(p(p+1)/2, n_eff - p - p(p+1)/2 - 1)` degrees of freedom, where `n_eff =
/// n - p`. The series is standardized first, so the statistic is invariant to
/// affine rescaling. Constant or otherwise degenerate inputs are reported as
/// linear with the `degenerate` flag set.
pub fn tsay_test<T: Scalar>(series: &[T], order: ArOrder, alpha: f64) -> Result<TestResult> {
    let n = series.len();
    let raw: Vec<f64> = series.iter().map(|v| v.to_f64_lossy()).collect();
    let mean = raw.iter().sum::<f64>() / n.max(1) as f64;
    let var = raw.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n.max(1) as f64;

    let fixed_p = match order {
        ArOrder::Fixed(p) => {
            if p == 0 {
                return Err(Error::InvalidArgument("AR order must be at least 1".into()));
            }
            if n < min_len(p) {
                return Err(Error::SeriesTooShort {
                    needed: min_len(p),
                    got: n,
                });
            }
            Some(p)
        }
        ArOrder::Auto { .. } => {
            if n < min_len(1) {
                return Err(Error::SeriesTooShort {
                    needed: min_len(1),
                    got: n,
                });
            }
            None
        }
    };
    if !(var > 0.0) || !var.is_finite() {
        return Ok(degenerate_linear(alpha, fixed_p.unwrap_or(1)));
    }
    let sd = var.sqrt();
    let x: Vec<f64> = raw.iter().map(|v| (v - mean) / sd).collect();

    let p = match (fixed_p, order) {
        (Some(p), _) => p,
        (None, ArOrder::Auto { max }) => match select_order(&x, max) {
            Ok(p) => p,
            Err(Error::InvalidArgument(_)) => return Ok(degenerate_linear(alpha, 1)),
            Err(e) => return Err(e),
        },
        (None, ArOrder::Fixed(_)) => unreachable!(),
    };

    let m = p * (p + 1) / 2;
    let restricted = lag_rows(&x, p, p);
    let y = &x[p..];
    let n_eff = y.len();
    let df2 = n_eff as isize - p as isize - m as isize - 1;
    if df2 < 1 {
        return Err(Error::SeriesTooShort {
            needed: min_len(p),
            got: n,
        });
    }
    let Ok(ar) = least_squares(&Matrix::from_rows(&restricted)?, y) else {
        return Ok(degenerate_linear(alpha, p));
    };
    let full: Vec<Vec<f64>> = restricted
        .iter()
        .map(|row| {
            let mut r = row.clone();
            for i in 1..=p {
                for j in i..=p {
                    r.push(row[i] * row[j]);
                }
            }
            r
        })
        .collect();
    let Ok(aux) = least_squares(&Matrix::from_rows(&full)?, &ar.residuals) else {
        return Ok(degenerate_linear(alpha, p));
    };

    let ssr0 = ar.rss;
    let ssr1 = aux.rss;
    if !(ssr1 > 1e-12 * ssr0.max(f64::MIN_POSITIVE)) {
        return Ok(degenerate_linear(alpha, p));
    }
    let f = ((ssr0 - ssr1).max(0.0) / m as f64) / (ssr1 / df2 as f64);
    let p_value = f_sf(f, m as f64, df2 as f64);
    Ok(TestResult {
        statistic: f,
        p_value,
        df: DegreesOfFreedom::Pair(m, df2 as usize),
        alpha,
        decision: if p_value < alpha {
            Decision::Nonlinear
        } else {
            Decision::Linear
        },
        degenerate: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn noise(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
    }

    #[test]
    fn constant_is_degenerate_linear() {
        let r = tsay_test(&[4.0; 100], ArOrder::default(), 0.05).unwrap();
        assert!(r.degenerate);
        assert_eq!(r.decision, Decision::Linear);
    }

    #[test]
    fn too_short() {
        assert!(matches!(
            tsay_test(&noise(43, 1), ArOrder::Fixed(2), 0.05),
            Err(Error::SeriesTooShort { needed: 44, .. })
        ));
        assert!(tsay_test(&noise(44, 1), ArOrder::Fixed(2), 0.05).is_ok());
    }

    #[test]
    fn degrees_of_freedom() {
        let r = tsay_test(&noise(300, 2), ArOrder::Fixed(3), 0.05).unwrap();
        // n_eff = 297, m = 6, df2 = 297 - 3 - 6 - 1
        assert_eq!(r.df, DegreesOfFreedom::Pair(6, 287));
    }

    #[test]
    fn quadratic_dependence_detected() {
        let e = noise(600, 3);
        let mut x = vec![0.0; 600];
        for t in 1..600 {
            x[t] = 0.3 * x[t - 1] + 0.5 * (e[t - 1] * e[t - 1] - 1.0) + e[t];
        }
        let r = tsay_test(&x, ArOrder::Fixed(1), 0.05).unwrap();
        assert_eq!(r.decision, Decision::Nonlinear, "{r:?}");
    }

    #[test]
    fn affine_invariance() {
        let x = noise(400, 4);
        let y: Vec<f64> = x.iter().map(|v| -3.5 * v + 120.0).collect();
        let a = tsay_test(&x, ArOrder::default(), 0.05).unwrap();
        let b = tsay_test(&y, ArOrder::default(), 0.05).unwrap();
        assert!((a.statistic - b.statistic).abs() <= 1e-8 * a.statistic.abs().max(1.0));
        assert_eq!(a.df, b.df);
    }
}
