use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::filters::{filter_bank, WaveletFamily, WaveletFilterBank};

/// Largest decomposition depth `floor(log2(n / (L - 1)))` for a series of
/// length `n` and a filter of length `L`.
pub fn max_level(n: usize, filter_length: usize) -> Result<usize> {
    if filter_length < 2 {
        return Err(Error::InvalidArgument("filter length must be at least 2".into()));
    }
    if n < filter_length {
        return Err(Error::SeriesTooShort {
            needed: filter_length,
            got: n,
        });
    }
    // largest J with 2^J (L - 1) <= n, in integer arithmetic
    let width = filter_length - 1;
    let mut j = 0;
    while (width << (j + 1)) <= n {
        j += 1;
    }
    Ok(j)
}

/// Hard cap on the transform depth: `floor(log2 n)`.
pub(crate) fn level_cap(n: usize) -> usize {
    if n == 0 {
        0
    } else {
        (usize::BITS - 1 - n.leading_zeros()) as usize
    }
}

/// MODWT wavelet coefficients `W_1..W_J` and the level-`J` scaling
/// coefficients `V_J`, all of the input length. Boundary handling is
/// periodic.
#[derive(Debug, Clone, PartialEq)]
pub struct ModwtCoefficients<T> {
    pub family: WaveletFamily,
    /// `details[j - 1]` holds `W_j`.
    pub details: Vec<Vec<T>>,
    pub smooth: Vec<T>,
}

impl<T: Scalar> ModwtCoefficients<T> {
    pub fn levels(&self) -> usize {
        self.details.len()
    }

    pub fn series_len(&self) -> usize {
        self.smooth.len()
    }

    /// `sum_j ||W_j||^2 + ||V_J||^2`.
    pub fn energy(&self) -> T {
        let sq = |v: &Vec<T>| v.iter().map(|&x| x * x).sum::<T>();
        self.details.iter().map(sq).sum::<T>() + sq(&self.smooth)
    }
}

pub(crate) fn check_levels(n: usize, levels: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::SeriesTooShort { needed: 1, got: 0 });
    }
    if levels < 1 {
        return Err(Error::InvalidArgument("decomposition level must be at least 1".into()));
    }
    let cap = level_cap(n);
    if levels > cap {
        return Err(Error::LevelTooHigh {
            requested: levels,
            max: cap,
        });
    }
    Ok(())
}

/// One analysis step of the pyramid: filters applied with stride
/// `2^(j-1)` and circular indexing.
pub(crate) fn analysis_step<T: Scalar>(v_prev: &[T], fb: &WaveletFilterBank<T>, j: usize) -> (Vec<T>, Vec<T>) {
    let n = v_prev.len();
    let stride = (1usize << (j - 1)) % n;
    let mut w = vec![T::zero(); n];
    let mut v = vec![T::zero(); n];
    for t in 0..n {
        let mut idx = t;
        let (mut acc_w, mut acc_v) = (T::zero(), T::zero());
        for (&h, &g) in fb.h_tilde.iter().zip(&fb.g_tilde) {
            let x = v_prev[idx];
            acc_w += h * x;
            acc_v += g * x;
            idx = if idx >= stride { idx - stride } else { idx + n - stride };
        }
        w[t] = acc_w;
        v[t] = acc_v;
    }
    (w, v)
}

/// One synthesis step: rebuilds `V_{j-1}` from `W_j` and `V_j`. Either input
/// may be `None`, meaning all zeros.
pub(crate) fn synthesis_step<T: Scalar>(
    w: Option<&[T]>,
    v: Option<&[T]>,
    n: usize,
    fb: &WaveletFilterBank<T>,
    j: usize,
) -> Vec<T> {
    let stride = (1usize << (j - 1)) % n;
    let mut out = vec![T::zero(); n];
    for (t, o) in out.iter_mut().enumerate() {
        let mut idx = t;
        let mut acc = T::zero();
        for (&h, &g) in fb.h_tilde.iter().zip(&fb.g_tilde) {
            if let Some(w) = w {
                acc += h * w[idx];
            }
            if let Some(v) = v {
                acc += g * v[idx];
            }
            idx += stride;
            if idx >= n {
                idx -= n;
            }
        }
        *o = acc;
    }
    out
}

/// Forward MODWT to depth `levels` (pyramid algorithm, `V_0 = x`).
///
/// `levels` must be between 1 and `floor(log2 N)`.
pub fn modwt<T: Scalar>(series: &[T], family: WaveletFamily, levels: usize) -> Result<ModwtCoefficients<T>> {
    check_levels(series.len(), levels)?;
    let fb = filter_bank::<T>(family);
    let mut details = Vec::with_capacity(levels);
    let mut v = series.to_vec();
    for j in 1..=levels {
        let (w, v_next) = analysis_step(&v, &fb, j);
        details.push(w);
        v = v_next;
    }
    Ok(ModwtCoefficients {
        family,
        details,
        smooth: v,
    })
}

/// Inverse MODWT.
pub fn imodwt<T: Scalar>(coeffs: &ModwtCoefficients<T>) -> Result<Vec<T>> {
    let n = coeffs.smooth.len();
    if let Some(bad) = coeffs.details.iter().position(|d| d.len() != n) {
        return Err(Error::ShapeMismatch(format!(
            "W_{} has length {}, V_J has length {n}",
            bad + 1,
            coeffs.details[bad].len()
        )));
    }
    if coeffs.details.is_empty() {
        return Ok(coeffs.smooth.clone());
    }
    check_levels(n, coeffs.levels())?;
    let fb = filter_bank::<T>(coeffs.family);
    let mut v = coeffs.smooth.clone();
    for j in (1..=coeffs.levels()).rev() {
        v = synthesis_step(Some(&coeffs.details[j - 1]), Some(&v), n, &fb, j);
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| rng.random_range(-1000.0..1000.0)).collect()
    }

    #[test]
    fn max_level_examples() {
        assert_eq!(max_level(636, 2).unwrap(), 9);
        assert_eq!(max_level(636, 18).unwrap(), 5);
        assert_eq!(max_level(8, 2).unwrap(), 3);
        // formula value for L = 8 (the narrative elsewhere quotes 7)
        assert_eq!(max_level(636, 8).unwrap(), 6);
        assert!(max_level(5, 8).is_err());
    }

    #[test]
    fn max_level_agrees_with_float_formula() {
        for n in 2..2000usize {
            for l in [2usize, 8, 18] {
                if n < l {
                    continue;
                }
                let f = ((n as f64) / (l as f64 - 1.0)).log2().floor() as usize;
                assert_eq!(max_level(n, l).unwrap(), f, "n={n} L={l}");
            }
        }
    }

    #[test]
    fn level_bounds() {
        let x = random(16, 1);
        assert!(matches!(modwt(&x, WaveletFamily::Haar, 0), Err(Error::InvalidArgument(_))));
        assert!(matches!(
            modwt(&x, WaveletFamily::Haar, 5),
            Err(Error::LevelTooHigh { requested: 5, max: 4 })
        ));
        assert!(modwt(&x, WaveletFamily::Haar, 4).is_ok());
    }

    #[test]
    fn haar_level_one_is_half_difference() {
        let x = random(37, 2);
        let c = modwt(&x, WaveletFamily::Haar, 1).unwrap();
        let n = x.len();
        for t in 0..n {
            let prev = x[(t + n - 1) % n];
            assert!((c.details[0][t] - (x[t] - prev) / 2.0).abs() < 1e-12);
            assert!((c.smooth[t] - (x[t] + prev) / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn hand_computed_haar() {
        let c = modwt(&[1.0, 2.0, 3.0, 4.0], WaveletFamily::Haar, 1).unwrap();
        assert_eq!(c.smooth, vec![2.5, 1.5, 2.5, 3.5]);
        assert_eq!(c.details[0], vec![-1.5, 0.5, 0.5, 0.5]);
    }

    #[test]
    fn constant_series_has_zero_details() {
        for fam in WaveletFamily::ALL {
            let x = vec![3.25f64; 64];
            let c = modwt(&x, fam, 3).unwrap();
            let tol = if fam == WaveletFamily::Haar { 0.0 } else { 1e-10 };
            for w in &c.details {
                assert!(w.iter().all(|v| v.abs() <= tol), "{fam}");
            }
            assert!(c.smooth.iter().all(|v| (v - 3.25).abs() <= tol), "{fam}");
        }
    }

    #[test]
    fn zero_coefficients_invert_to_zero() {
        let c = ModwtCoefficients {
            family: WaveletFamily::Daubechies4,
            details: vec![vec![0.0; 20]; 2],
            smooth: vec![0.0; 20],
        };
        assert_eq!(imodwt(&c).unwrap(), vec![0.0; 20]);
    }

    #[test]
    fn inconsistent_lengths_rejected() {
        let c = ModwtCoefficients {
            family: WaveletFamily::Haar,
            details: vec![vec![0.0; 20], vec![0.0; 19]],
            smooth: vec![0.0; 20],
        };
        assert!(matches!(imodwt(&c), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn energy_preserved_db4() {
        let x = random(64, 3);
        let c = modwt(&x, WaveletFamily::Daubechies4, 2).unwrap();
        let ex: f64 = x.iter().map(|v| v * v).sum();
        assert!(((ex - c.energy()) / ex).abs() < 1e-10);
    }

    #[test]
    fn round_trip_f32() {
        let x: Vec<f32> = random(50, 4).iter().map(|&v| v as f32 / 1000.0).collect();
        let c = modwt(&x, WaveletFamily::Symlet4, 2).unwrap();
        let y = imodwt(&c).unwrap();
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).abs() < 1e-5);
        }
    }
}
