use std::fmt;

use serde::Serialize;

/// Named validity gates of the constant ledger.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Gate {
    /// rho > max(2, C_H0 bar), needed by the first-iterate bound.
    FirstIterate,
    /// Positivity of the derivative-bound denominators.
    DerivativeDenominator,
    /// L(rho) <= 1/2.
    Lipschitz,
    /// A(rho) < 1/2.
    Contraction,
    /// A < 1 for the relative error M bar.
    RelativeError,
    /// M*(rho) <= M0(rho) for the refined series.
    SeriesRadius,
    /// Lower bound of the shooting rho against the threshold.
    ShootingRadius,
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Gate::FirstIterate => "first-iterate (rho > max(2, CH0bar))",
            Gate::DerivativeDenominator => "derivative denominators positive",
            Gate::Lipschitz => "L <= 1/2",
            Gate::Contraction => "A < 1/2",
            Gate::RelativeError => "A < 1",
            Gate::SeriesRadius => "M* <= M0",
            Gate::ShootingRadius => "shooting rho >= rho*",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error, Serialize)]
#[serde(tag = "kind", content = "detail", rename_all = "snake_case")]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("gate `{gate}` failed at rho = [{rho_lo}, {rho_hi}]: {detail}")]
    Threshold {
        gate: Gate,
        rho_lo: f64,
        rho_hi: f64,
        detail: String,
    },
    #[error("condition `{condition}` never verified; last rho tried = {last_rho}")]
    SearchExhausted { condition: Gate, last_rho: f64 },
    #[error("enclosure width {width:e} exceeded cap {cap:e} at tau = {tau}")]
    WrappingFailure { tau: f64, width: f64, cap: f64 },
    #[error("no crossing of the section within time budget {budget}")]
    NoCrossing { budget: f64 },
    #[error("Bolzano ordering failed: {0}")]
    BolzanoFailure(String),
    #[error("refinement not applicable: {0}")]
    NotApplicable(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
