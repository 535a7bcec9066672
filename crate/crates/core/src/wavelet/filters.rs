use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::scalar::Scalar;

/// Supported orthogonal wavelet families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WaveletFamily {
    Haar,
    #[serde(rename = "db4")]
    Daubechies4,
    #[serde(rename = "sym4")]
    Symlet4,
    #[serde(rename = "coif3")]
    Coiflet3,
}

impl WaveletFamily {
    pub const ALL: [WaveletFamily; 4] = [
        WaveletFamily::Haar,
        WaveletFamily::Daubechies4,
        WaveletFamily::Symlet4,
        WaveletFamily::Coiflet3,
    ];

    pub fn filter_length(self) -> usize {
        self.scaling_f64().len()
    }

    /// Short name as used on the command line: `haar`, `db4`, `sym4`, `coif3`.
    pub fn short_name(self) -> &'static str {
        match self {
            WaveletFamily::Haar => "haar",
            WaveletFamily::Daubechies4 => "db4",
            WaveletFamily::Symlet4 => "sym4",
            WaveletFamily::Coiflet3 => "coif3",
        }
    }

    /// One-letter tag used in model labels such as `W(H)-ST`.
    pub fn tag(self) -> char {
        match self {
            WaveletFamily::Haar => 'H',
            WaveletFamily::Daubechies4 => 'D',
            WaveletFamily::Symlet4 => 'S',
            WaveletFamily::Coiflet3 => 'C',
        }
    }

    fn scaling_f64(self) -> &'static [f64] {
        match self {
            WaveletFamily::Haar => &HAAR,
            WaveletFamily::Daubechies4 => &DB4,
            WaveletFamily::Symlet4 => &SYM4,
            WaveletFamily::Coiflet3 => &COIF3,
        }
    }
}

impl fmt::Display for WaveletFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for WaveletFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim().to_ascii_lowercase().as_str() {
            "haar" | "db1" => Ok(WaveletFamily::Haar),
            "db4" | "daubechies4" | "daubechies" => Ok(WaveletFamily::Daubechies4),
            "sym4" | "symlet4" | "symlet" => Ok(WaveletFamily::Symlet4),
            "coif3" | "coiflet3" | "coiflet" => Ok(WaveletFamily::Coiflet3),
            _ => Err(Error::UnsupportedFamily(s.to_string())),
        }
    }
}

// Orthonormal scaling (low-pass) filters, sum = sqrt(2), sum of squares = 1.

const HAAR: [f64; 2] = [
    std::f64::consts::FRAC_1_SQRT_2,
    std::f64::consts::FRAC_1_SQRT_2,
];

const DB4: [f64; 8] = [
    0.2303778133088965,
    0.7148465705529157,
    0.6308807679298589,
    -0.027983769416859854,
    -0.18703481171909309,
    0.030841381835560764,
    0.0328830116668852,
    -0.010597401785069032,
];

const SYM4: [f64; 8] = [
    0.0322231006040427,
    -0.012603967262037833,
    -0.09921954357684722,
    0.29785779560527736,
    0.8037387518059161,
    0.49761866763201545,
    -0.02963552764599851,
    -0.07576571478927333,
];

const COIF3: [f64; 18] = [
    -0.003793512864380802,
    0.007782596425672746,
    0.023452696142077168,
    -0.06577191128146936,
    -0.06112339000297255,
    0.40517690240911824,
    0.7937772226260872,
    0.42848347637737,
    -0.07179982161915484,
    -0.08230192710629983,
    0.03455502757329774,
    0.015880544863669452,
    -0.009007976136730624,
    -0.0025745176881367972,
    0.0011175187708306303,
    0.0004662169598204029,
    -7.0983302506379e-05,
    -3.459977319727278e-05,
];

/// DWT filter pair of one family together with the MODWT rescaling.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletFilterBank<T> {
    pub family: WaveletFamily,
    /// Scaling (low-pass) filter.
    pub g: Vec<T>,
    /// Wavelet (high-pass) filter, `h[l] = (-1)^l g[L-1-l]`.
    pub h: Vec<T>,
    /// `g / sqrt(2)`.
    pub g_tilde: Vec<T>,
    /// `h / sqrt(2)`.
    pub h_tilde: Vec<T>,
}

impl<T: Scalar> WaveletFilterBank<T> {
    pub fn len(&self) -> usize {
        self.g.len()
    }

    pub fn is_empty(&self) -> bool {
        self.g.is_empty()
    }
}

const SQRT_2: f64 = std::f64::consts::SQRT_2;

pub fn filter_bank<T: Scalar>(family: WaveletFamily) -> WaveletFilterBank<T> {
    let g64 = family.scaling_f64();
    let l = g64.len();
    let h64: Vec<f64> = (0..l)
        .map(|i| if i % 2 == 0 { g64[l - 1 - i] } else { -g64[l - 1 - i] })
        .collect();
    WaveletFilterBank {
        family,
        g: g64.iter().map(|&v| T::lit(v)).collect(),
        h: h64.iter().map(|&v| T::lit(v)).collect(),
        g_tilde: g64.iter().map(|&v| T::lit(v / SQRT_2)).collect(),
        h_tilde: h64.iter().map(|&v| T::lit(v / SQRT_2)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    #[test]
    fn haar_closed_form() {
        let fb = filter_bank::<f64>(WaveletFamily::Haar);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(fb.g, vec![r, r]);
        assert_eq!(fb.h, vec![r, -r]);
        for (a, b) in fb.g_tilde.iter().zip([0.5, 0.5]) {
            assert!((a - b).abs() < 1e-15);
        }
        for (a, b) in fb.h_tilde.iter().zip([0.5, -0.5]) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn lengths() {
        let lens: Vec<usize> = WaveletFamily::ALL.iter().map(|f| f.filter_length()).collect();
        assert_eq!(lens, vec![2, 8, 8, 18]);
    }

    #[test]
    fn orthonormality_conditions() {
        for fam in WaveletFamily::ALL {
            let fb = filter_bank::<f64>(fam);
            let sg: f64 = fb.g.iter().sum();
            let sh: f64 = fb.h.iter().sum();
            let eg: f64 = fb.g.iter().map(|x| x * x).sum();
            let eh: f64 = fb.h.iter().map(|x| x * x).sum();
            let egt: f64 = fb.g_tilde.iter().map(|x| x * x).sum();
            let eht: f64 = fb.h_tilde.iter().map(|x| x * x).sum();
            assert!((sg - SQRT2).abs() < 1e-10, "{fam}: sum g = {sg}");
            assert!(sh.abs() < 1e-10, "{fam}: sum h = {sh}");
            assert!((eg - 1.0).abs() < 1e-10, "{fam}");
            assert!((eh - 1.0).abs() < 1e-10, "{fam}");
            assert!((egt - 0.5).abs() < 1e-10 && (eht - 0.5).abs() < 1e-10);
            // even-shift orthogonality
            let l = fb.len();
            for shift in (2..l).step_by(2) {
                let dot: f64 = (0..l - shift).map(|i| fb.g[i] * fb.g[i + shift]).sum();
                assert!(dot.abs() < 1e-10, "{fam}: shift {shift} dot {dot}");
            }
        }
    }

    #[test]
    fn quadrature_mirror_relation() {
        for fam in WaveletFamily::ALL {
            let fb = filter_bank::<f64>(fam);
            let l = fb.len();
            for i in 0..l {
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                assert!((fb.h[i] - sign * fb.g[l - 1 - i]).abs() < 1e-10);
            }
        }
    }

    fn moment(h: &[f64], m: i32) -> f64 {
        h.iter().enumerate().map(|(l, &c)| (l as f64).powi(m) * c).sum()
    }

    #[test]
    fn vanishing_moments() {
        // db4 and sym4: 4 vanishing moments; coif3: 6; haar: 1
        for (fam, k) in [
            (WaveletFamily::Haar, 1),
            (WaveletFamily::Daubechies4, 4),
            (WaveletFamily::Symlet4, 4),
            (WaveletFamily::Coiflet3, 6),
        ] {
            let fb = filter_bank::<f64>(fam);
            for m in 0..k {
                let mo = moment(&fb.h, m);
                // moments of order m grow like L^m; scale tolerance accordingly
                let scale = (fb.len() as f64).powi(m).max(1.0);
                assert!(mo.abs() <= 1e-8 * scale, "{fam}: moment {m} = {mo}");
            }
        }
    }

    #[test]
    fn db4_moments_strict() {
        let fb = filter_bank::<f64>(WaveletFamily::Daubechies4);
        for m in 0..4 {
            assert!(moment(&fb.h, m).abs() <= 1e-8, "m={m}");
        }
    }

    #[test]
    fn parse_names() {
        assert_eq!("HAAR".parse::<WaveletFamily>().unwrap(), WaveletFamily::Haar);
        assert_eq!("coif3".parse::<WaveletFamily>().unwrap(), WaveletFamily::Coiflet3);
        assert!(matches!("mexh".parse::<WaveletFamily>(), Err(Error::UnsupportedFamily(_))));
    }
}
