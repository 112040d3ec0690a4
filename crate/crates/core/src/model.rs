//! Market primitives, assumption checks and the no-entry monopoly benchmark.
//!
//! First-period inverse demand is `P(X) = alpha - beta X`. First-period use
//! erodes second-period demand intercepts: `alpha - theta X` for the
//! incumbent's drug and `alpha - phi X` for a prospective entrant's. Both
//! firms produce at constant marginal cost `c`.

use serde::{Deserialize, Serialize};

use crate::error::{InvalidParams, ModelError, Violation};

/// The five market primitives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Demand intercept.
    pub alpha: f64,
    /// Demand slope.
    pub beta: f64,
    /// Own-resistance: erosion of the incumbent's intercept per unit of X.
    pub theta: f64,
    /// Cross-resistance: erosion of the entrant's intercept per unit of X.
    pub phi: f64,
    /// Marginal cost, common to both firms.
    pub c: f64,
}

impl ModelParams {
    pub const fn new(alpha: f64, beta: f64, theta: f64, phi: f64, c: f64) -> Self {
        Self {
            alpha,
            beta,
            theta,
            phi,
            c,
        }
    }

    /// `alpha = 10, beta = 2, theta = 2, phi = 1/2, c = 2`: one differentiated
    /// entrant, deterrence with underproduction at `R = 5`.
    pub const fn reference() -> Self {
        Self::new(10.0, 2.0, 2.0, 0.5, 2.0)
    }
}

/// Numerical comparison rules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Absolute tolerance for parameter equalities such as `theta = phi`.
    pub equality: f64,
    /// Profit comparisons use `profit * (alpha - c)^2 / beta` as an absolute
    /// tolerance.
    pub profit: f64,
    /// A squared-discriminant ratio below this is a double root.
    pub double_root: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            equality: 1e-12,
            profit: 1e-9,
            double_root: 1e-12,
        }
    }
}

/// Check every invariant on the raw primitives and report all violations.
pub fn validate(params: &ModelParams) -> Result<(), InvalidParams> {
    validate_with(params, &Tolerances::default())
}

pub fn validate_with(params: &ModelParams, tol: &Tolerances) -> Result<(), InvalidParams> {
    let ModelParams {
        alpha,
        beta,
        theta,
        phi,
        c,
    } = *params;
    let mut out = Vec::new();
    for (name, v) in [
        ("alpha", alpha),
        ("beta", beta),
        ("theta", theta),
        ("phi", phi),
        ("c", c),
    ] {
        if !v.is_finite() {
            out.push(Violation::NonFinite(name));
        }
    }
    if !out.is_empty() {
        return Err(InvalidParams(out));
    }
    if beta <= 0.0 {
        out.push(Violation::NonPositiveSlope);
    }
    if alpha <= c {
        out.push(Violation::NoMarket);
    }
    if c < 0.0 {
        out.push(Violation::NegativeCost);
    }
    if theta <= 0.0 {
        out.push(Violation::NonPositiveOwnResistance);
    }
    if theta >= 2.0 * beta {
        out.push(Violation::ExcessiveOwnResistance);
    }
    if phi > theta + tol.equality {
        out.push(Violation::CrossExceedsOwnResistance);
    }
    if phi < 0.0 {
        out.push(Violation::NegativeCrossResistance);
    }
    if theta == 0.0 && phi == 0.0 {
        out.push(Violation::NoResistanceDynamics);
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(InvalidParams(out))
    }
}

/// Closed-form landmarks of the game.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedConstants {
    /// Static single-period monopoly output `(alpha - c) / (2 beta)`.
    pub x_static: f64,
    /// Two-period monopoly output `(alpha - c) / (2 beta + theta)`.
    pub x_monopoly: f64,
    /// Crossover between limit pricing and entrant monopoly pricing,
    /// `(alpha - c) / (2 theta - phi)`.
    pub x_tilde: f64,
    /// Maximizer of the limit-pricing branch, `(alpha - c) / (2 theta)`.
    pub x_entrant_peak: f64,
    /// Maximum gross entrant profit.
    pub pi_e_max: f64,
    /// Entry cost at which the lower deterrence boundary reaches `x_monopoly`.
    pub r_bar: f64,
    /// Upper end of the output domain, `alpha / beta`.
    pub x_cap: f64,
}

/// Validated market. All game operations hang off this type.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Market {
    params: ModelParams,
    tol: Tolerances,
}

impl Market {
    pub fn new(params: ModelParams) -> Result<Self, ModelError> {
        Self::with_tolerances(params, Tolerances::default())
    }

    pub fn with_tolerances(params: ModelParams, tol: Tolerances) -> Result<Self, ModelError> {
        validate_with(&params, &tol)?;
        Ok(Self { params, tol })
    }

    pub fn reference() -> Self {
        Self::new(ModelParams::reference()).expect("reference parameters are valid")
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    /// Primary mark-up `alpha - c`.
    pub fn margin(&self) -> f64 {
        self.params.alpha - self.params.c
    }

    /// `theta = phi` within the equality tolerance: the entrant sells a generic.
    pub fn is_generic(&self) -> bool {
        (self.params.theta - self.params.phi).abs() <= self.tol.equality
    }

    /// `theta - phi`, floored at zero for generic markets.
    pub(crate) fn resistance_gap(&self) -> f64 {
        if self.is_generic() {
            0.0
        } else {
            self.params.theta - self.params.phi
        }
    }

    /// Outputs above `alpha / beta` drive the first-period price negative.
    pub fn x_cap(&self) -> f64 {
        self.params.alpha / self.params.beta
    }

    pub fn is_feasible_output(&self, x: f64) -> bool {
        (0.0..=self.x_cap()).contains(&x)
    }

    /// Output at which the entrant's demand intercept falls to `c`, if any.
    pub fn x_entrant_exhausted(&self) -> Option<f64> {
        (self.params.phi > 0.0).then(|| self.margin() / self.params.phi)
    }

    /// Absolute tolerance for comparing profit-valued quantities.
    pub fn profit_tolerance(&self) -> f64 {
        self.tol.profit * self.margin().powi(2) / self.params.beta
    }

    pub(crate) fn check_output(x: f64) -> Result<(), ModelError> {
        if x < 0.0 || x.is_nan() {
            Err(ModelError::NegativeOutput(x))
        } else {
            Ok(())
        }
    }

    /// First-period profit `(alpha - c - beta X) X`. Negative above
    /// `(alpha - c) / beta`.
    pub fn period1_profit(&self, x: f64) -> Result<f64, ModelError> {
        Self::check_output(x)?;
        Ok(self.period1_profit_unchecked(x))
    }

    pub(crate) fn period1_profit_unchecked(&self, x: f64) -> f64 {
        (self.margin() - self.params.beta * x) * x
    }

    /// Second-period monopoly profit `(alpha - c - theta X)^2 / (4 beta)`.
    pub fn monopoly_second_period_profit(&self, x: f64) -> Result<f64, ModelError> {
        Self::check_output(x)?;
        Ok(self.monopoly_second_period_profit_unchecked(x))
    }

    pub(crate) fn monopoly_second_period_profit_unchecked(&self, x: f64) -> f64 {
        let markup = self.margin() - self.params.theta * x;
        markup * markup / (4.0 * self.params.beta)
    }

    /// Two-period monopoly profit, strictly concave and maximized at
    /// `x_monopoly`.
    pub fn two_period_monopoly_profit(&self, x: f64) -> Result<f64, ModelError> {
        Self::check_output(x)?;
        Ok(self.two_period_monopoly_profit_unchecked(x))
    }

    pub(crate) fn two_period_monopoly_profit_unchecked(&self, x: f64) -> f64 {
        self.period1_profit_unchecked(x) + self.monopoly_second_period_profit_unchecked(x)
    }

    /// Slope of the two-period monopoly profit.
    pub fn two_period_monopoly_slope(&self, x: f64) -> f64 {
        let ModelParams { beta, theta, .. } = self.params;
        let m = self.margin();
        m - 2.0 * beta * x - theta * (m - theta * x) / (2.0 * beta)
    }

    pub fn derived_constants(&self) -> DerivedConstants {
        let ModelParams { beta, theta, phi, .. } = self.params;
        let m = self.margin();
        let gap = self.resistance_gap();
        let x_monopoly = m / (2.0 * beta + theta);
        let x_tilde = m / (2.0 * theta - phi);
        debug_assert!(x_monopoly < x_tilde);
        DerivedConstants {
            x_static: m / (2.0 * beta),
            x_monopoly,
            x_tilde,
            x_entrant_peak: m / (2.0 * theta),
            pi_e_max: gap / (beta * theta) * (m / 2.0).powi(2),
            // Limit-pricing branch at x_monopoly, which lies below x_tilde.
            r_bar: 2.0 * gap * m * m / (2.0 * beta + theta).powi(2),
            x_cap: self.x_cap(),
        }
    }
}
