#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use wst_core::{TimeSeries, YearMonth};

pub fn gaussian(n: usize, sd: f64, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, sd).unwrap();
    (0..n).map(|_| normal.sample(&mut rng)).collect()
}

/// `x_t = 0.8 x_{t-1}` above zero and `-0.5 x_{t-1}` otherwise, plus noise.
pub fn threshold_ar(n: usize, sd: f64, seed: u64) -> Vec<f64> {
    let e = gaussian(n + 100, sd, seed);
    let mut x = vec![0.0; n + 100];
    for t in 1..n + 100 {
        let prev = x[t - 1];
        x[t] = if prev > 0.0 { 0.8 * prev } else { -0.5 * prev } + e[t];
    }
    x.split_off(100)
}

/// `(1 - phi B)(1 - B^12) y_t = (1 + theta B^12) e_t`.
pub fn seasonal_ar_sma(n: usize, phi: f64, theta: f64, sd: f64, seed: u64) -> Vec<f64> {
    let burn = 120;
    let e = gaussian(n + burn, sd, seed);
    let mut w = vec![0.0; n + burn];
    let mut y = vec![0.0; n + burn];
    for t in 0..n + burn {
        let ar = if t >= 1 { phi * w[t - 1] } else { 0.0 };
        let ma = if t >= 12 { theta * e[t - 12] } else { 0.0 };
        w[t] = ar + e[t] + ma;
        y[t] = w[t] + if t >= 12 { y[t - 12] } else { 0.0 };
    }
    y.split_off(burn)
}

/// Seasonal backbone, an additive threshold-AR component and white noise,
/// around a level of 100.
pub fn composite(n: usize, seed: u64) -> TimeSeries {
    let base = seasonal_ar_sma(n, 0.5, -0.6, 1.0, seed);
    let tar = threshold_ar(n, 2.0, seed.wrapping_add(1000));
    let noise = gaussian(n, 0.5, seed.wrapping_add(2000));
    let values = (0..n)
        .map(|t| {
            let cycle = 8.0 * (2.0 * std::f64::consts::PI * t as f64 / 12.0).sin();
            100.0 + cycle + base[t] + tar[t] + noise[t]
        })
        .collect();
    TimeSeries::new(values, YearMonth::new(1971, 1).unwrap(), 12).unwrap()
}
