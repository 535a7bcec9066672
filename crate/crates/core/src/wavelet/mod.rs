//! Maximal overlap discrete wavelet transform (MODWT): filter banks,
//! forward/inverse transforms and the additive multiresolution analysis.

mod filters;
mod modwt;
mod mra;

pub use filters::{filter_bank, WaveletFamily, WaveletFilterBank};
pub use modwt::{imodwt, max_level, modwt, ModwtCoefficients};
pub use mra::{causal_mra, equivalent_filter_length, mra, mra_from_coefficients, MultiresolutionDecomposition};

pub(crate) use modwt::level_cap;

/// Deepest level the transform accepts for `n` samples of `family`: the
/// tighter of the `floor(log2(n / (L - 1)))` bound and `floor(log2 n)`.
pub fn admissible_level(n: usize, family: WaveletFamily) -> crate::Result<usize> {
    Ok(max_level(n, family.filter_length())?.min(level_cap(n)))
}
