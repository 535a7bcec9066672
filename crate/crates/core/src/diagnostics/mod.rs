//! Residual whiteness and nonlinearity tests, and the component routing
//! built on them.

mod ljung_box;
mod tsay;

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::scalar::Scalar;
use crate::wavelet::MultiresolutionDecomposition;

pub use ljung_box::{ljung_box, statistic_result, LjungBox};
pub use tsay::{tsay_test, ArOrder};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum DegreesOfFreedom {
    Single(usize),
    Pair(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Linear,
    Nonlinear,
    White,
    Correlated,
}

/// Outcome of a hypothesis test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
    pub df: DegreesOfFreedom,
    pub alpha: f64,
    pub decision: Decision,
    /// The input carried no usable variation; the decision is a default.
    pub degenerate: bool,
}

/// One additive component of a decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ComponentId {
    Detail(usize),
    Smooth(usize),
    /// The undecomposed series, for the single-model variants.
    Raw,
}

impl fmt::Display for ComponentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentId::Detail(j) => write!(f, "D{j}"),
            ComponentId::Smooth(j) => write!(f, "S{j}"),
            ComponentId::Raw => f.write_str("X"),
        }
    }
}

impl Serialize for ComponentId {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Model family a component is sent to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Sarima,
    Transformer,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentRoute {
    pub component: ComponentId,
    pub test: TestResult,
    pub route: Route,
}

/// Ids of the components of a `levels`-deep decomposition, in order
/// `D_1..D_J, S_J`.
pub fn component_ids(levels: usize) -> Vec<ComponentId> {
    (1..=levels)
        .map(ComponentId::Detail)
        .chain(std::iter::once(ComponentId::Smooth(levels)))
        .collect()
}

/// Runs the Tsay test on every component: nonlinear components go to the
/// transformer, everything else (including degenerate ones) to SARIMA.
pub fn classify_components<T: Scalar>(
    decomposition: &MultiresolutionDecomposition<T>,
    alpha: f64,
) -> Result<Vec<ComponentRoute>> {
    let ids = component_ids(decomposition.levels());
    let comps: Vec<&[T]> = decomposition.components().collect();
    ids.into_par_iter()
        .zip(comps)
        .map(|(id, comp)| {
            let test = tsay_test(comp, ArOrder::default(), alpha).map_err(|e| e.in_component(id.to_string()))?;
            let route = if test.decision == Decision::Nonlinear {
                Route::Transformer
            } else {
                Route::Sarima
            };
            Ok(ComponentRoute {
                component: id,
                test,
                route,
            })
        })
        .collect()
}
