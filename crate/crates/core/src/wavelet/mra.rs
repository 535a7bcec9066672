use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::filters::{filter_bank, WaveletFamily};
use super::modwt::{modwt, synthesis_step, ModwtCoefficients};

/// Additive multiresolution decomposition: `x = D_1 + ... + D_J + S_J`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiresolutionDecomposition<T> {
    pub family: WaveletFamily,
    /// `details[j - 1]` holds `D_j`.
    pub details: Vec<Vec<T>>,
    pub smooth: Vec<T>,
}

impl<T: Scalar> MultiresolutionDecomposition<T> {
    pub fn levels(&self) -> usize {
        self.details.len()
    }

    pub fn series_len(&self) -> usize {
        self.smooth.len()
    }

    /// Pointwise sum of all components.
    pub fn reconstruct(&self) -> Vec<T> {
        let mut out = self.smooth.clone();
        for d in &self.details {
            for (o, &v) in out.iter_mut().zip(d) {
                *o += v;
            }
        }
        out
    }

    /// Components in order `D_1, ..., D_J, S_J`.
    pub fn components(&self) -> impl Iterator<Item = &[T]> {
        self.details
            .iter()
            .map(Vec::as_slice)
            .chain(std::iter::once(self.smooth.as_slice()))
    }
}

/// Projects MODWT coefficients onto the additive detail and smooth components.
pub fn mra_from_coefficients<T: Scalar>(coeffs: &ModwtCoefficients<T>) -> MultiresolutionDecomposition<T> {
    let n = coeffs.series_len();
    let levels = coeffs.levels();
    let fb = filter_bank::<T>(coeffs.family);

    let details = (1..=levels)
        .map(|j| {
            let mut v = synthesis_step(Some(&coeffs.details[j - 1]), None, n, &fb, j);
            for k in (1..j).rev() {
                v = synthesis_step(None, Some(&v), n, &fb, k);
            }
            v
        })
        .collect();

    let mut smooth = coeffs.smooth.clone();
    for k in (1..=levels).rev() {
        smooth = synthesis_step(None, Some(&smooth), n, &fb, k);
    }

    MultiresolutionDecomposition {
        family: coeffs.family,
        details,
        smooth,
    }
}

/// MODWT multiresolution analysis of `series` to depth `levels`.
pub fn mra<T: Scalar>(series: &[T], family: WaveletFamily, levels: usize) -> Result<MultiresolutionDecomposition<T>> {
    let coeffs = modwt(series, family, levels)?;
    Ok(mra_from_coefficients(&coeffs))
}

/// Length `(2^J - 1)(L - 1) + 1` of the level-`J` equivalent filter.
pub fn equivalent_filter_length(family: WaveletFamily, levels: usize) -> usize {
    ((1usize << levels) - 1) * (family.filter_length() - 1) + 1
}

/// MRA in which every value depends on the past only.
///
/// With `w = equivalent_filter_length(family, levels)`, the components at
/// time `t` are the last values of the MRA of `series[t + 1 - w..=t]`
/// extended by its mirror image. They are defined for `t >= w - 1`, so the
/// returned components cover `series[w - 1..]`, sum to it exactly and are a
/// fixed linear filter of the last `w` observations.
pub fn causal_mra<T: Scalar>(series: &[T], family: WaveletFamily, levels: usize) -> Result<MultiresolutionDecomposition<T>> {
    if levels == 0 {
        return Err(Error::InvalidArgument("decomposition level must be at least 1".into()));
    }
    let w = equivalent_filter_length(family, levels);
    if series.len() < w {
        return Err(Error::SeriesTooShort {
            needed: w,
            got: series.len(),
        });
    }
    let count = series.len() + 1 - w;
    let mut out = MultiresolutionDecomposition {
        family,
        details: vec![Vec::with_capacity(count); levels],
        smooth: Vec::with_capacity(count),
    };
    let mut ext = Vec::with_capacity(2 * w);
    for end in w..=series.len() {
        let window = &series[end - w..end];
        ext.clear();
        ext.extend_from_slice(window);
        ext.extend(window.iter().rev());
        let d = mra(&ext, family, levels)?;
        for (o, c) in out.details.iter_mut().zip(&d.details) {
            o.push(c[w - 1]);
        }
        out.smooth.push(d.smooth[w - 1]);
    }
    Ok(out)
}
