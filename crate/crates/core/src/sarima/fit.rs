use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::optim::{bfgs, BfgsOptions};
use super::SarimaSpec;

/// Estimation settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    /// Index into the original (undifferenced) series of the first residual
    /// entering the sum of squares. `None` starts as early as the AR lags
    /// allow. Fixing it lets models of different orders be compared on the
    /// same observations.
    pub condition_from: Option<usize>,
    pub max_iterations: usize,
    pub gradient_tolerance: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            condition_from: None,
            max_iterations: 500,
            gradient_tolerance: 1e-8,
        }
    }
}

/// A fitted seasonal ARIMA model together with the data it conditions on.
#[derive(Debug, Clone)]
pub struct SarimaFit<T> {
    pub spec: SarimaSpec,
    pub phi: Vec<T>,
    pub theta: Vec<T>,
    pub seasonal_phi: Vec<T>,
    pub seasonal_theta: Vec<T>,
    /// Mean of the differenced series (zero without a constant).
    pub mean: T,
    /// Intercept `c = mean * phi(1) * Phi(1)`.
    pub constant: T,
    pub sigma2: T,
    pub loglik: T,
    pub aic: T,
    pub bic: T,
    /// Residuals over the conditioning sample.
    pub residuals: Vec<T>,
    pub iterations: usize,
    state: State,
}

#[derive(Debug, Clone)]
struct State {
    /// `levels[0]` is the series, each next entry one more difference.
    levels: Vec<Vec<f64>>,
    lags: Vec<usize>,
    /// Residuals aligned with the differenced series, zero before the
    /// conditioning start.
    errors: Vec<f64>,
    ar: Vec<(usize, f64)>,
    ma: Vec<(usize, f64)>,
    mean: f64,
    /// First residual index of the differenced series.
    start: usize,
}

/// Serializable digest of a fit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SarimaSummary {
    pub spec: SarimaSpec,
    pub order: String,
    pub phi: Vec<f64>,
    pub theta: Vec<f64>,
    pub seasonal_phi: Vec<f64>,
    pub seasonal_theta: Vec<f64>,
    pub mean: f64,
    pub constant: f64,
    pub sigma2: f64,
    pub loglik: f64,
    pub aic: f64,
    pub bic: f64,
    pub n_eff: usize,
    pub iterations: usize,
}

/// Maps unconstrained values to the coefficients of a stationary polynomial
/// `1 - c_1 z - ... - c_p z^p` through partial autocorrelations in (-1, 1).
pub(crate) fn pacf_to_coeffs(raw: &[f64]) -> Vec<f64> {
    let mut c: Vec<f64> = Vec::with_capacity(raw.len());
    for (k, &r) in raw.iter().enumerate() {
        let r = r.tanh();
        let prev = c.clone();
        for j in 0..k {
            c[j] = prev[j] - r * prev[k - 1 - j];
        }
        c.push(r);
    }
    c
}

/// Inverse of [`pacf_to_coeffs`] for stationary coefficient vectors.
pub(crate) fn coeffs_to_pacf(coeffs: &[f64]) -> Option<Vec<f64>> {
    let mut c = coeffs.to_vec();
    let mut raw = vec![0.0; c.len()];
    for k in (0..c.len()).rev() {
        let r = c[k];
        if r.abs() >= 1.0 {
            return None;
        }
        raw[k] = r.atanh();
        let prev = c.clone();
        for j in 0..k {
            c[j] = (prev[j] + r * prev[k - 1 - j]) / (1.0 - r * r);
        }
        c.truncate(k);
    }
    Some(raw)
}

/// Whether every root of `1 - c_1 z - ... - c_p z^p` has modulus above
/// `radius`: the polynomial in `z / radius` must be stationary.
fn roots_beyond(coeffs: &[f64], radius: f64) -> bool {
    let scaled: Vec<f64> = coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| c * radius.powi(k as i32 + 1))
        .collect();
    coeffs_to_pacf(&scaled).is_some()
}

/// Lag/coefficient pairs of `(1 - sum a_i L^i)(1 - sum b_j L^{js})` written
/// as `1 - sum_k c_k L^k`, restricted to the structurally present lags.
fn expand(short: &[f64], seasonal: &[f64], s: usize) -> Vec<(usize, f64)> {
    let max = short.len() + seasonal.len() * s;
    let mut coef = vec![0.0; max + 1];
    let mut present = vec![false; max + 1];
    for (i, &a) in short.iter().enumerate() {
        coef[i + 1] += a;
        present[i + 1] = true;
    }
    for (j, &b) in seasonal.iter().enumerate() {
        let l = (j + 1) * s;
        coef[l] += b;
        present[l] = true;
        for (i, &a) in short.iter().enumerate() {
            coef[l + i + 1] -= a * b;
            present[l + i + 1] = true;
        }
    }
    (1..=max).filter(|&l| present[l]).map(|l| (l, coef[l])).collect()
}

/// Fills `errors` with conditional residuals and returns their sum of squares.
fn css(w: &[f64], mean: f64, ar: &[(usize, f64)], ma: &[(usize, f64)], start: usize, errors: &mut Vec<f64>) -> f64 {
    errors.clear();
    errors.resize(w.len(), 0.0);
    let mut ssr = 0.0;
    for t in start..w.len() {
        let mut e = w[t] - mean;
        for &(l, a) in ar {
            e -= a * (w[t - l] - mean);
        }
        for &(l, b) in ma {
            if l <= t {
                e += b * errors[t - l];
            }
        }
        errors[t] = e;
        ssr += e * e;
    }
    ssr
}

#[derive(Debug, Clone, Copy)]
struct Layout {
    constant: bool,
    p: usize,
    q: usize,
    sp: usize,
    sq: usize,
}

struct Coefficients {
    mean: f64,
    phi: Vec<f64>,
    theta: Vec<f64>,
    seasonal_phi: Vec<f64>,
    seasonal_theta: Vec<f64>,
}

impl Layout {
    fn of(spec: &SarimaSpec) -> Self {
        Layout {
            constant: spec.include_constant,
            p: spec.p,
            q: spec.q,
            sp: spec.seasonal_p,
            sq: spec.seasonal_q,
        }
    }

    fn len(&self) -> usize {
        usize::from(self.constant) + self.p + self.q + self.sp + self.sq
    }

    fn unpack(&self, x: &[f64]) -> Coefficients {
        let mut rest = x;
        let mut take = |k: usize| {
            let (a, b) = rest.split_at(k);
            rest = b;
            a
        };
        let mean = if self.constant { take(1)[0] } else { 0.0 };
        Coefficients {
            mean,
            phi: pacf_to_coeffs(take(self.p)),
            theta: pacf_to_coeffs(take(self.q)),
            seasonal_phi: pacf_to_coeffs(take(self.sp)),
            seasonal_theta: pacf_to_coeffs(take(self.sq)),
        }
    }
}

fn differencing_levels(x: Vec<f64>, spec: &SarimaSpec) -> (Vec<Vec<f64>>, Vec<usize>) {
    let lags: Vec<usize> = std::iter::repeat_n(1, spec.d)
        .chain(std::iter::repeat_n(spec.period, spec.seasonal_d))
        .collect();
    let mut levels = vec![x];
    for &lag in &lags {
        let prev = levels.last().expect("levels start non-empty");
        let next = (lag..prev.len()).map(|t| prev[t] - prev[t - lag]).collect();
        levels.push(next);
    }
    (levels, lags)
}

fn to_f64<T: Scalar>(series: &[T]) -> Result<Vec<f64>> {
    let x: Vec<f64> = series.iter().map(|v| v.to_f64_lossy()).collect();
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("input series".into()));
    }
    Ok(x)
}

/// Fits `spec` by conditional least squares with default options.
pub fn fit<T: Scalar>(series: &[T], spec: SarimaSpec) -> Result<SarimaFit<T>> {
    fit_with(series, spec, FitOptions::default())
}

/// Fits `spec` by minimizing the conditional sum of squares with pre-sample
/// innovations set to zero, which is the concentrated Gaussian likelihood of
/// the conditioning sample.
///
/// The AR and MA polynomials are parameterized through partial
/// autocorrelations, so every optimum is stationary and invertible.
pub fn fit_with<T: Scalar>(series: &[T], spec: SarimaSpec, opts: FitOptions) -> Result<SarimaFit<T>> {
    spec.validate()?;
    let x = to_f64(series)?;
    let loss = spec.differencing_loss();
    let needed = loss + 10 * (spec.arma_params() + 1);
    if x.len() < needed {
        return Err(Error::SeriesTooShort { needed, got: x.len() });
    }
    let (levels, lags) = differencing_levels(x, &spec);
    let w = levels.last().expect("levels non-empty");

    let start = spec
        .max_ar_lag()
        .max(opts.condition_from.map_or(0, |c| c.saturating_sub(loss)));
    let n_eff = w.len().saturating_sub(start);
    if n_eff < spec.param_count() + 2 {
        return Err(Error::SeriesTooShort {
            needed: loss + start + spec.param_count() + 2,
            got: series.len(),
        });
    }

    let wm = w.iter().sum::<f64>() / w.len() as f64;
    let scale = (w.iter().map(|v| (v - wm).powi(2)).sum::<f64>() / w.len() as f64).sqrt();
    if !(scale > 0.0) {
        return Err(Error::ZeroVariance);
    }
    let ws: Vec<f64> = w.iter().map(|v| v / scale).collect();

    let layout = Layout::of(&spec);
    let mut x0 = vec![0.0; layout.len()];
    if layout.constant {
        x0[0] = wm / scale;
    }
    let objective = |theta: &[f64]| {
        let c = layout.unpack(theta);
        let ar = expand(&c.phi, &c.seasonal_phi, spec.period);
        let ma = expand(&c.theta, &c.seasonal_theta, spec.period);
        let mut buf = Vec::new();
        let ssr = css(&ws, c.mean, &ar, &ma, start, &mut buf);
        0.5 * (ssr / n_eff as f64).ln()
    };
    let min = bfgs(
        objective,
        x0,
        BfgsOptions {
            max_iterations: opts.max_iterations,
            gradient_tolerance: opts.gradient_tolerance,
            ..Default::default()
        },
    )?;

    let mut coeffs = layout.unpack(&min.x);
    coeffs.mean *= scale;
    assemble(levels, lags, spec, coeffs, start, min.iterations)
}

fn assemble<T: Scalar>(
    levels: Vec<Vec<f64>>,
    lags: Vec<usize>,
    spec: SarimaSpec,
    c: Coefficients,
    start: usize,
    iterations: usize,
) -> Result<SarimaFit<T>> {
    let w = levels.last().expect("levels non-empty");
    let ar = expand(&c.phi, &c.seasonal_phi, spec.period);
    let ma = expand(&c.theta, &c.seasonal_theta, spec.period);
    let mut errors = Vec::new();
    let ssr = css(w, c.mean, &ar, &ma, start, &mut errors);
    let n = (w.len() - start) as f64;
    let sigma2 = ssr / n;
    if !(sigma2 > 0.0) || !sigma2.is_finite() {
        return Err(Error::NonFinite("innovation variance".into()));
    }
    let loglik = -0.5 * n * ((2.0 * std::f64::consts::PI * sigma2).ln() + 1.0);
    let k = spec.param_count() as f64;
    let ar_at_one = 1.0 - ar.iter().map(|&(_, a)| a).sum::<f64>();
    let lit = |v: &[f64]| v.iter().map(|&x| T::lit(x)).collect::<Vec<T>>();

    Ok(SarimaFit {
        spec,
        phi: lit(&c.phi),
        theta: lit(&c.theta),
        seasonal_phi: lit(&c.seasonal_phi),
        seasonal_theta: lit(&c.seasonal_theta),
        mean: T::lit(c.mean),
        constant: T::lit(c.mean * ar_at_one),
        sigma2: T::lit(sigma2),
        loglik: T::lit(loglik),
        aic: T::lit(-2.0 * loglik + 2.0 * k),
        bic: T::lit(-2.0 * loglik + k * n.ln()),
        residuals: lit(&errors[start..]),
        iterations,
        state: State {
            levels,
            lags,
            errors,
            ar,
            ma,
            mean: c.mean,
            start,
        },
    })
}

impl<T: Scalar> SarimaFit<T> {
    /// Builds a model with given coefficients conditioned on `series`,
    /// without estimation. Coefficient vectors must match the spec orders.
    pub fn from_coefficients(
        series: &[T],
        spec: SarimaSpec,
        phi: &[T],
        theta: &[T],
        seasonal_phi: &[T],
        seasonal_theta: &[T],
        mean: T,
    ) -> Result<Self> {
        spec.validate()?;
        let lens = [phi.len(), theta.len(), seasonal_phi.len(), seasonal_theta.len()];
        if lens != [spec.p, spec.q, spec.seasonal_p, spec.seasonal_q] {
            return Err(Error::ShapeMismatch(format!("coefficient counts {lens:?} do not match {spec}")));
        }
        let f = |v: &[T]| v.iter().map(|x| x.to_f64_lossy()).collect::<Vec<f64>>();
        let coeffs = Coefficients {
            mean: if spec.include_constant { mean.to_f64_lossy() } else { 0.0 },
            phi: f(phi),
            theta: f(theta),
            seasonal_phi: f(seasonal_phi),
            seasonal_theta: f(seasonal_theta),
        };
        Self::condition(series, spec, coeffs, spec.max_ar_lag(), 0)
    }

    fn condition(series: &[T], spec: SarimaSpec, coeffs: Coefficients, start: usize, iterations: usize) -> Result<Self> {
        let x = to_f64(series)?;
        let needed = spec.differencing_loss() + start + 2;
        if x.len() < needed {
            return Err(Error::SeriesTooShort { needed, got: x.len() });
        }
        let (levels, lags) = differencing_levels(x, &spec);
        assemble(levels, lags, spec, coeffs, start, iterations)
    }

    /// The same model conditioned on a different (typically extended)
    /// series, with residuals starting at the same index as in the original
    /// fit. Residuals and the fit statistics refer to the new series; the
    /// coefficients are unchanged.
    pub fn condition_on(&self, series: &[T]) -> Result<Self> {
        let f = |v: &[T]| v.iter().map(|x| x.to_f64_lossy()).collect::<Vec<f64>>();
        let coeffs = Coefficients {
            mean: self.state.mean,
            phi: f(&self.phi),
            theta: f(&self.theta),
            seasonal_phi: f(&self.seasonal_phi),
            seasonal_theta: f(&self.seasonal_theta),
        };
        Self::condition(series, self.spec, coeffs, self.state.start, self.iterations)
    }

    /// Number of residuals in the conditioning sample.
    pub fn n_eff(&self) -> usize {
        self.residuals.len()
    }

    /// Length of the series the model is conditioned on.
    pub fn series_len(&self) -> usize {
        self.state.levels[0].len()
    }

    /// Iterated conditional expectations `h` steps past the end of the
    /// conditioning series, with future innovations set to zero and the
    /// differencing undone from the stored history.
    pub fn forecast(&self, h: usize) -> Result<Vec<T>> {
        if h == 0 {
            return Err(Error::InvalidArgument("forecast horizon must be at least 1".into()));
        }
        let st = &self.state;
        let w = st.levels.last().expect("levels non-empty");
        let n = w.len();
        let mut ext = w.clone();
        let mut e = st.errors.clone();
        for t in n..n + h {
            let mut v = st.mean;
            for &(l, a) in &st.ar {
                v += a * (ext[t - l] - st.mean);
            }
            for &(l, b) in &st.ma {
                if l <= t {
                    v -= b * e[t - l];
                }
            }
            ext.push(v);
            e.push(0.0);
        }
        let mut out = ext.split_off(n);
        for (level, &lag) in st.levels.iter().zip(&st.lags).rev() {
            let m = level.len();
            let mut full = level.clone();
            for (k, &v) in out.iter().enumerate() {
                let prev = full[m + k - lag];
                full.push(v + prev);
            }
            out = full.split_off(m);
        }
        if out.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("SARIMA forecast".into()));
        }
        Ok(out.into_iter().map(T::lit).collect())
    }

    /// Whether every root of the AR and MA polynomials, seasonal factors
    /// included, lies strictly beyond modulus `radius`.
    pub fn roots_beyond(&self, radius: f64) -> bool {
        let f = |v: &[T]| v.iter().map(|x| x.to_f64_lossy()).collect::<Vec<f64>>();
        let seasonal = radius.powi(self.spec.period as i32);
        roots_beyond(&f(&self.phi), radius)
            && roots_beyond(&f(&self.theta), radius)
            && roots_beyond(&f(&self.seasonal_phi), seasonal)
            && roots_beyond(&f(&self.seasonal_theta), seasonal)
    }

    pub fn summary(&self) -> SarimaSummary {
        let f = |v: &[T]| v.iter().map(|x| x.to_f64_lossy()).collect::<Vec<f64>>();
        SarimaSummary {
            spec: self.spec,
            order: self.spec.to_string(),
            phi: f(&self.phi),
            theta: f(&self.theta),
            seasonal_phi: f(&self.seasonal_phi),
            seasonal_theta: f(&self.seasonal_theta),
            mean: self.mean.to_f64_lossy(),
            constant: self.constant.to_f64_lossy(),
            sigma2: self.sigma2.to_f64_lossy(),
            loglik: self.loglik.to_f64_lossy(),
            aic: self.aic.to_f64_lossy(),
            bic: self.bic.to_f64_lossy(),
            n_eff: self.n_eff(),
            iterations: self.iterations,
        }
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::sarima::difference;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    pub(crate) fn noise(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
    }

    /// Simulates `(1 - phi L)(1 - Phi L^s) y = (1 - theta L)(1 - Theta L^s) e`
    /// with a burn-in.
    pub(crate) fn simulate(n: usize, phi: f64, sphi: f64, theta: f64, stheta: f64, s: usize, seed: u64) -> Vec<f64> {
        let burn = 200;
        let e = noise(n + burn, seed);
        let mut y = vec![0.0; n + burn];
        let at = |v: &[f64], t: usize, l: usize| if t >= l { v[t - l] } else { 0.0 };
        for t in 0..n + burn {
            y[t] = phi * at(&y, t, 1) + sphi * at(&y, t, s) - phi * sphi * at(&y, t, s + 1) + e[t]
                - theta * at(&e, t, 1)
                - stheta * at(&e, t, s)
                + theta * stheta * at(&e, t, s + 1);
        }
        y.split_off(burn)
    }

    #[test]
    fn pacf_round_trip() {
        let raw = [0.3, -1.2, 0.8];
        let c = pacf_to_coeffs(&raw);
        let back = coeffs_to_pacf(&c).unwrap();
        for (a, b) in raw.iter().zip(&back) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(pacf_to_coeffs(&[0.5]), vec![0.5f64.tanh()]);
        assert!(coeffs_to_pacf(&[1.2]).is_none());
    }

    #[test]
    fn expansion_of_multiplicative_ar() {
        // (1 - 0.5L)(1 - 0.3L^4) = 1 - 0.5L - 0.3L^4 + 0.15L^5
        let a = expand(&[0.5], &[0.3], 4);
        assert_eq!(a, vec![(1, 0.5), (4, 0.3), (5, -0.15)]);
    }

    #[test]
    fn ar1_recovery() {
        let y = simulate(2000, 0.7, 0.0, 0.0, 0.0, 12, 11);
        let f = fit(&y, SarimaSpec::new(1, 0, 0, 0, 0, 0, 12)).unwrap();
        assert!((f.phi[0] - 0.7).abs() <= 0.05, "{}", f.phi[0]);
        assert_eq!(f.n_eff(), 1999);
    }

    #[test]
    fn seasonal_ma_recovery() {
        let y = simulate(3000, 0.0, 0.0, 0.0, 0.5, 12, 12);
        let f = fit(&y, SarimaSpec::new(0, 0, 0, 0, 0, 1, 12)).unwrap();
        assert!((f.seasonal_theta[0] - 0.5).abs() <= 0.08, "{}", f.seasonal_theta[0]);
    }

    #[test]
    fn mean_model_matches_moments() {
        let y: Vec<f64> = noise(800, 13).iter().map(|v| 2.0 * v + 10.0).collect();
        let f = fit(&y, SarimaSpec::new(0, 0, 0, 0, 0, 0, 12)).unwrap();
        let m = y.iter().sum::<f64>() / y.len() as f64;
        let var = y.iter().map(|v| (v - m).powi(2)).sum::<f64>() / y.len() as f64;
        let se = (var / y.len() as f64).sqrt();
        assert!((f.constant - m).abs() <= 2.0 * se);
        assert!((f.sigma2 / var - 1.0).abs() <= 0.1);
        let fc = f.forecast(5).unwrap();
        assert!(fc.iter().all(|&v| (v - f.constant).abs() < 1e-12));
    }

    #[test]
    fn ar1_forecast_closed_form() {
        let y = noise(100, 14);
        let spec = SarimaSpec::new(1, 0, 0, 0, 0, 0, 12).with_constant(false);
        let f = SarimaFit::from_coefficients(&y, spec, &[0.6], &[], &[], &[], 0.0).unwrap();
        let last = *y.last().unwrap();
        for (k, v) in f.forecast(10).unwrap().iter().enumerate() {
            assert!((v - 0.6f64.powi(k as i32 + 1) * last).abs() < 1e-10);
        }
    }

    #[test]
    fn random_walk_forecast_is_flat() {
        let y: Vec<f64> = noise(80, 15).iter().scan(0.0, |s, v| {
            *s += v;
            Some(*s)
        }).collect();
        let spec = SarimaSpec::new(0, 1, 0, 0, 0, 0, 12);
        let f = fit(&y, spec).unwrap();
        let last = *y.last().unwrap();
        assert!(f.forecast(7).unwrap().iter().all(|&v| (v - last).abs() < 1e-12));
    }

    #[test]
    fn forecast_converges_to_process_mean() {
        let y: Vec<f64> = simulate(600, 0.5, 0.0, 0.0, 0.0, 12, 16).iter().map(|v| v + 4.0).collect();
        let f = fit(&y, SarimaSpec::new(2, 0, 0, 0, 0, 0, 12)).unwrap();
        let far = f.forecast(500).unwrap()[499];
        let mu = f.constant / (1.0 - f.phi.iter().sum::<f64>());
        assert!((far - mu).abs() < 1e-6, "{far} vs {mu}");
    }

    #[test]
    fn external_and_internal_differencing_agree() {
        let y = simulate(400, 0.4, 0.0, 0.0, 0.3, 12, 17);
        let y: Vec<f64> = y.iter().scan(0.0, |s, v| {
            *s += v;
            Some(*s)
        }).collect();
        let inner = fit(&y, SarimaSpec::new(1, 1, 0, 0, 1, 1, 12)).unwrap();
        let w = difference(&y, 1, 1, 12).unwrap();
        let outer = fit(&w, SarimaSpec::new(1, 0, 0, 0, 0, 1, 12).with_constant(false)).unwrap();
        assert_eq!(inner.residuals.len(), outer.residuals.len());
        for (a, b) in inner.residuals.iter().zip(&outer.residuals) {
            assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn nested_models_do_not_lose_likelihood() {
        let y = simulate(500, 0.6, 0.0, 0.3, 0.0, 12, 18);
        let opts = FitOptions {
            condition_from: Some(2),
            ..Default::default()
        };
        let small: SarimaFit<f64> = fit_with(&y, SarimaSpec::new(1, 0, 0, 0, 0, 0, 12), opts).unwrap();
        let big: SarimaFit<f64> = fit_with(&y, SarimaSpec::new(2, 0, 1, 0, 0, 0, 12), opts).unwrap();
        assert!(-2.0 * big.loglik <= -2.0 * small.loglik + 1e-6);
    }

    #[test]
    fn seasonal_forecast_repeats_cycle() {
        let y: Vec<f64> = (0..120).map(|n| ((n % 12) as f64 - 5.5).powi(2)).collect();
        let spec = SarimaSpec::new(0, 0, 0, 0, 1, 0, 12);
        let f = SarimaFit::from_coefficients(&y, spec, &[], &[], &[], &[], 0.0);
        // a purely deterministic cycle differences to zero, which no model can fit
        assert!(f.is_err() || f.unwrap().forecast(1).is_ok());
        let mut z = y.clone();
        z[50] += 1.0;
        let f = SarimaFit::from_coefficients(&z, spec, &[], &[], &[], &[], 0.0).unwrap();
        let fc = f.forecast(24).unwrap();
        for k in 0..24 {
            assert!((fc[k] - z[z.len() - 12 + k % 12]).abs() < 1e-12);
        }
    }

    #[test]
    fn conditioning_on_longer_series_keeps_coefficients() {
        let y = simulate(300, 0.5, 0.0, 0.0, 0.0, 12, 19);
        let f = fit(&y[..250], SarimaSpec::new(1, 0, 0, 0, 0, 0, 12)).unwrap();
        let g = f.condition_on(&y).unwrap();
        assert_eq!(f.phi, g.phi);
        assert_eq!(g.series_len(), 300);
        let step = g.forecast(1).unwrap()[0];
        assert!((step - (g.mean + g.phi[0] * (y[299] - g.mean))).abs() < 1e-12);
    }

    #[test]
    fn conditioning_on_the_fitted_series_reproduces_the_fit() {
        let y = simulate(240, 0.4, 0.0, 0.0, -0.5, 12, 23);
        let opts = FitOptions {
            condition_from: Some(40),
            ..FitOptions::default()
        };
        let f = fit_with(&y, SarimaSpec::new(1, 0, 1, 0, 1, 1, 12), opts).unwrap();
        let g = f.condition_on(&y).unwrap();
        assert_eq!(f.residuals, g.residuals);
        assert_eq!(f.forecast(6).unwrap(), g.forecast(6).unwrap());
    }

    #[test]
    fn too_short_and_constant_inputs() {
        assert!(matches!(
            fit(&noise(30, 1), SarimaSpec::new(2, 0, 1, 0, 0, 0, 12)),
            Err(Error::SeriesTooShort { .. })
        ));
        assert!(matches!(
            fit(&[3.0; 100], SarimaSpec::new(1, 0, 0, 0, 0, 0, 12)),
            Err(Error::ZeroVariance)
        ));
    }
}
