use std::fmt;

use thiserror::Error;

/// A single failed check on the market primitives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Violation {
    /// A parameter is NaN or infinite.
    NonFinite(&'static str),
    /// `beta > 0`.
    NonPositiveSlope,
    /// `alpha > c`.
    NoMarket,
    /// `c >= 0`.
    NegativeCost,
    /// Assumption 1, lower half: `theta > 0`.
    NonPositiveOwnResistance,
    /// Assumption 1, upper half: `theta < 2 beta`.
    ExcessiveOwnResistance,
    /// Assumption 2, upper half: `theta >= phi`.
    CrossExceedsOwnResistance,
    /// Assumption 2, lower half: `phi >= 0`.
    NegativeCrossResistance,
    /// `theta = phi = 0`: first-period use has no effect on either drug.
    NoResistanceDynamics,
}

impl Violation {
    /// Stable identifier used in CLI output.
    pub fn name(&self) -> &'static str {
        match self {
            Violation::NonFinite(_) => "finite-parameters",
            Violation::NonPositiveSlope => "positive-demand-slope",
            Violation::NoMarket => "positive-market-size",
            Violation::NegativeCost => "nonnegative-cost",
            Violation::NonPositiveOwnResistance => "assumption-1-theta-positive",
            Violation::ExcessiveOwnResistance => "assumption-1-theta-below-2beta",
            Violation::CrossExceedsOwnResistance => "assumption-2-theta-at-least-phi",
            Violation::NegativeCrossResistance => "assumption-2-phi-nonnegative",
            Violation::NoResistanceDynamics => "degenerate-no-resistance",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rule = match self {
            Violation::NonFinite(p) => return write!(f, "{} ({p} is not finite)", self.name()),
            Violation::NonPositiveSlope => "beta > 0",
            Violation::NoMarket => "alpha > c",
            Violation::NegativeCost => "c >= 0",
            Violation::NonPositiveOwnResistance => "0 < theta",
            Violation::ExcessiveOwnResistance => "theta < 2*beta",
            Violation::CrossExceedsOwnResistance => "theta >= phi",
            Violation::NegativeCrossResistance => "phi >= 0",
            Violation::NoResistanceDynamics => "not (theta = phi = 0)",
        };
        write!(f, "{} ({rule})", self.name())
    }
}

/// Every violation found by [`crate::validate`], in check order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvalidParams(pub Vec<Violation>);

impl InvalidParams {
    pub fn violations(&self) -> &[Violation] {
        &self.0
    }

    pub fn contains(&self, v: Violation) -> bool {
        self.0.contains(&v)
    }
}

impl fmt::Display for InvalidParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("invalid model parameters: ")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl std::error::Error for InvalidParams {}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error(transparent)]
    Invalid(#[from] InvalidParams),
    #[error("first-period output must be nonnegative, got {0}")]
    NegativeOutput(f64),
    #[error("entry cost must be nonnegative, got {0}")]
    NegativeEntryCost(f64),
    #[error("entrant market exhausted at X = {x} (alpha - phi X < c beyond X = {limit})")]
    EntrantMarketExhausted { x: f64, limit: f64 },
    #[error("generic entrant (theta = phi): no Bertrand rents, entry regions undefined")]
    GenericEntrant,
    #[error("accommodation region is empty at entry cost {0}")]
    EmptyAccommodation(f64),
    #[error("degenerate grid: {0}")]
    DegenerateGrid(&'static str),
}
