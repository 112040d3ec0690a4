//! Second-period price competition after entry.
//!
//! The two drugs are perfect substitutes that differ only in effectiveness.
//! When both sell, their prices differ by exactly the effectiveness gap
//! `(theta - phi) X`; otherwise one firm undercuts the other. With a positive
//! gap the entrant takes the whole market, either at the limit price
//! `c + gap` or at its own monopoly price, whichever is lower.

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::model::Market;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PricingRegime {
    /// No effectiveness gap: both firms price at marginal cost.
    GenericMarginalCost,
    /// Entrant sets `c + gap`, the highest price the incumbent cannot undercut.
    LimitPricing,
    /// Entrant's unconstrained monopoly price is below the limit price.
    EntrantMonopolyPricing,
}

/// Bertrand equilibrium of the post-entry subgame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PricingOutcome {
    pub regime: PricingRegime,
    pub p_incumbent: f64,
    pub p_entrant: f64,
    pub q_incumbent: f64,
    pub q_entrant: f64,
    pub profit_incumbent: f64,
    pub profit_entrant: f64,
    /// Effectiveness gap `(theta - phi) X`.
    pub gap: f64,
}

/// Second-period pricing when the incumbent keeps the market to itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonopolyPricing {
    pub price: f64,
    pub quantity: f64,
    pub profit: f64,
}

impl Market {
    /// `(theta - phi) X`.
    pub fn effectiveness_gap(&self, x: f64) -> Result<f64, ModelError> {
        Self::check_output(x)?;
        Ok(self.resistance_gap() * x)
    }

    pub fn price_equilibrium(&self, x: f64) -> Result<PricingOutcome, ModelError> {
        Self::check_output(x)?;
        let p = self.params();
        let gap = self.resistance_gap() * x;

        if gap == 0.0 {
            // Indeterminate shares at zero margin; split the market evenly.
            let total = ((p.alpha - p.theta * x - p.c) / p.beta).max(0.0);
            return Ok(PricingOutcome {
                regime: PricingRegime::GenericMarginalCost,
                p_incumbent: p.c,
                p_entrant: p.c,
                q_incumbent: total / 2.0,
                q_entrant: total / 2.0,
                profit_incumbent: 0.0,
                profit_entrant: 0.0,
                gap,
            });
        }

        let entrant_intercept = p.alpha - p.phi * x;
        if entrant_intercept < p.c {
            return Err(ModelError::EntrantMarketExhausted {
                x,
                limit: self.x_entrant_exhausted().unwrap_or(f64::INFINITY),
            });
        }

        let x_tilde = self.margin() / (2.0 * p.theta - p.phi);
        let (regime, p_entrant) = if x < x_tilde {
            (PricingRegime::LimitPricing, p.c + gap)
        } else {
            (
                PricingRegime::EntrantMonopolyPricing,
                (entrant_intercept + p.c) / 2.0,
            )
        };
        let q_entrant = ((entrant_intercept - p_entrant) / p.beta).max(0.0);
        Ok(PricingOutcome {
            regime,
            p_incumbent: p.c,
            p_entrant,
            q_incumbent: 0.0,
            q_entrant,
            profit_incumbent: 0.0,
            profit_entrant: (p_entrant - p.c) * q_entrant,
            gap,
        })
    }

    /// Incumbent's second-period monopoly price, quantity and profit.
    pub fn monopoly_pricing(&self, x: f64) -> Result<MonopolyPricing, ModelError> {
        Self::check_output(x)?;
        let p = self.params();
        let markup = self.margin() - p.theta * x;
        Ok(MonopolyPricing {
            price: (p.alpha - p.theta * x + p.c) / 2.0,
            quantity: markup / (2.0 * p.beta),
            profit: self.monopoly_second_period_profit_unchecked(x),
        })
    }
}
