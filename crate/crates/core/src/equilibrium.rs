//! Backward induction over the incumbent's first-period output.
//!
//! Post-entry the incumbent earns nothing, so accommodating entry is worth
//! first-period profit alone. Deterrence keeps the second-period monopoly
//! rent. With a differentiated entrant deterrence weakly dominates for every
//! `R >= 0`, and when the unconstrained two-period optimum `x_monopoly` would
//! invite entry the incumbent cuts output to the lower boundary `x_low(R)`.

use serde::{Deserialize, Serialize};

use crate::bertrand::{MonopolyPricing, PricingOutcome};
use crate::entry::{check_entry_cost, UpperRoot};
use crate::error::ModelError;
use crate::model::{DerivedConstants, Market};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AccommodationOptimum {
    pub x: f64,
    pub profit: f64,
    /// `false` when `x_static` lies outside the open interval and the value is
    /// a supremum approached at the nearer endpoint.
    pub attained: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeterrenceOptimum {
    pub x: f64,
    pub profit: f64,
    /// `x_monopoly` already deters entry.
    pub blockaded: bool,
}

/// `Pi_D*(R) - Pi_A*(R)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfitAdvantage {
    pub value: f64,
    pub deterrence: DeterrenceOptimum,
    /// `None` when accommodation is infeasible; `value` is then `Pi_D*`.
    pub accommodation: Option<AccommodationOptimum>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    Blockaded,
    Deterred,
    Accommodated,
    GenericNoEntry,
    GenericIndifferent,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Blockaded => "Blockaded",
            Regime::Deterred => "Deterred",
            Regime::Accommodated => "Accommodated",
            Regime::GenericNoEntry => "GenericNoEntry",
            Regime::GenericIndifferent => "GenericIndifferent",
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Second-period market structure on the equilibrium path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SecondPeriod {
    Monopoly(MonopolyPricing),
    Entry(PricingOutcome),
}

/// Outputs the incumbent could pick with a generic entrant at zero entry cost.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenericCandidates {
    /// `x_static`, if entry is predicted.
    pub with_entry: f64,
    /// `x_monopoly`, if it is not. This is the reported `x_star`.
    pub without_entry: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumOutcome {
    pub regime: Regime,
    pub entry_cost: f64,
    pub x_star: f64,
    pub entry: bool,
    pub profit_period1: f64,
    pub profit_period2_incumbent: f64,
    pub total_incumbent: f64,
    pub second_period: SecondPeriod,
    pub accommodation: Option<AccommodationOptimum>,
    pub deterrence: DeterrenceOptimum,
    pub profit_advantage: f64,
    /// The incumbent is indifferent between accommodating and deterring.
    pub indifferent: bool,
    pub generic_candidates: Option<GenericCandidates>,
    pub constants: DerivedConstants,
}

impl Market {
    /// Maximize first-period profit over the open accommodation interval.
    pub fn accommodation_optimum(&self, entry_cost: f64) -> Result<AccommodationOptimum, ModelError> {
        let regions = self.entry_regions(entry_cost)?;
        let (Some(lo), Some(hi)) = (regions.x_low, regions.x_high) else {
            return Err(ModelError::EmptyAccommodation(entry_cost));
        };
        if regions.accommodation_empty {
            return Err(ModelError::EmptyAccommodation(entry_cost));
        }
        let x_static = self.derived_constants().x_static;
        let (x, attained) = if x_static <= lo {
            (lo, false)
        } else {
            match hi {
                UpperRoot::Finite(h) if x_static >= h => (h, false),
                _ => (x_static, true),
            }
        };
        Ok(AccommodationOptimum {
            x,
            profit: self.period1_profit_unchecked(x),
            attained,
        })
    }

    /// Maximize two-period monopoly profit over the deterrence set.
    pub fn deterrence_optimum(&self, entry_cost: f64) -> Result<DeterrenceOptimum, ModelError> {
        check_entry_cost(entry_cost)?;
        let d = self.derived_constants();
        let x = if self.blockades(entry_cost, &d) {
            d.x_monopoly
        } else {
            // Strictly below x_monopoly; the upper boundary is farther away.
            self.entry_regions(entry_cost)?
                .x_low
                .expect("R below r_bar <= pi_e_max has a lower root")
        };
        Ok(DeterrenceOptimum {
            x,
            profit: self.two_period_monopoly_profit_unchecked(x),
            blockaded: x == d.x_monopoly,
        })
    }

    /// `x_monopoly` deters entry: `R >= r_bar`, or the entrant is generic and
    /// `R > 0`.
    fn blockades(&self, entry_cost: f64, d: &DerivedConstants) -> bool {
        if self.is_generic() {
            return entry_cost > 0.0;
        }
        entry_cost + self.profit_tolerance() >= d.r_bar
    }

    pub fn profit_advantage(&self, entry_cost: f64) -> Result<ProfitAdvantage, ModelError> {
        let deterrence = self.deterrence_optimum(entry_cost)?;
        let accommodation = match self.accommodation_optimum(entry_cost) {
            Ok(a) => Some(a),
            Err(ModelError::EmptyAccommodation(_)) => None,
            Err(e) => return Err(e),
        };
        Ok(ProfitAdvantage {
            value: deterrence.profit - accommodation.map_or(0.0, |a| a.profit),
            deterrence,
            accommodation,
        })
    }

    /// Subgame perfect equilibrium for entry cost `R`.
    pub fn solve(&self, entry_cost: f64) -> Result<EquilibriumOutcome, ModelError> {
        check_entry_cost(entry_cost)?;
        if self.is_generic() {
            return self.solve_generic(entry_cost);
        }
        let constants = self.derived_constants();
        let adv = self.profit_advantage(entry_cost)?;

        if entry_cost == 0.0 {
            let acc = adv.accommodation.expect("costless entry is always accommodable");
            let pricing = self.price_equilibrium(acc.x)?;
            return Ok(EquilibriumOutcome {
                regime: Regime::Accommodated,
                entry_cost,
                x_star: acc.x,
                entry: true,
                profit_period1: acc.profit,
                profit_period2_incumbent: pricing.profit_incumbent,
                total_incumbent: acc.profit + pricing.profit_incumbent,
                second_period: SecondPeriod::Entry(pricing),
                accommodation: adv.accommodation,
                deterrence: adv.deterrence,
                profit_advantage: adv.value,
                indifferent: true,
                generic_candidates: None,
                constants,
            });
        }

        let det = adv.deterrence;
        let regime = if det.blockaded {
            Regime::Blockaded
        } else {
            Regime::Deterred
        };
        Ok(self.monopoly_outcome(regime, entry_cost, det.x, adv, None, constants))
    }

    fn solve_generic(&self, entry_cost: f64) -> Result<EquilibriumOutcome, ModelError> {
        let constants = self.derived_constants();
        let x = constants.x_monopoly;
        let deterrence = DeterrenceOptimum {
            x,
            profit: self.two_period_monopoly_profit_unchecked(x),
            blockaded: true,
        };
        if entry_cost > 0.0 {
            let adv = ProfitAdvantage {
                value: deterrence.profit,
                deterrence,
                accommodation: None,
            };
            return Ok(self.monopoly_outcome(Regime::GenericNoEntry, entry_cost, x, adv, None, constants));
        }
        let accommodation = AccommodationOptimum {
            x: constants.x_static,
            profit: self.period1_profit_unchecked(constants.x_static),
            attained: true,
        };
        let adv = ProfitAdvantage {
            value: deterrence.profit - accommodation.profit,
            deterrence,
            accommodation: Some(accommodation),
        };
        let candidates = GenericCandidates {
            with_entry: constants.x_static,
            without_entry: x,
        };
        let mut out = self.monopoly_outcome(
            Regime::GenericIndifferent,
            entry_cost,
            x,
            adv,
            Some(candidates),
            constants,
        );
        out.indifferent = true;
        Ok(out)
    }

    fn monopoly_outcome(
        &self,
        regime: Regime,
        entry_cost: f64,
        x: f64,
        adv: ProfitAdvantage,
        generic_candidates: Option<GenericCandidates>,
        constants: DerivedConstants,
    ) -> EquilibriumOutcome {
        let pricing = self
            .monopoly_pricing(x)
            .expect("equilibrium output is nonnegative");
        let p1 = self.period1_profit_unchecked(x);
        EquilibriumOutcome {
            regime,
            entry_cost,
            x_star: x,
            entry: false,
            profit_period1: p1,
            profit_period2_incumbent: pricing.profit,
            total_incumbent: p1 + pricing.profit,
            second_period: SecondPeriod::Monopoly(pricing),
            accommodation: adv.accommodation,
            deterrence: adv.deterrence,
            profit_advantage: adv.value,
            indifferent: false,
            generic_candidates,
            constants,
        }
    }
}

#[cfg(test)]
mod tests {
    use approx::assert_relative_eq;

    use super::*;
    use crate::model::ModelParams;

    const X_LOW_5: f64 = 1.183_503_419_072_274; // (6 - sqrt 6) / 3

    #[test]
    fn accommodation_values() {
        let m = Market::reference();
        let a = m.accommodation_optimum(5.0).unwrap();
        assert_eq!((a.x, a.profit, a.attained), (2.0, 8.0, true));
        let a = m.accommodation_optimum(0.0).unwrap();
        assert_eq!((a.x, a.profit), (2.0, 8.0));
        // theta = beta makes x_static the entrant peak, always inside.
        let a = m.accommodation_optimum(5.9).unwrap();
        assert_eq!((a.x, a.profit, a.attained), (2.0, 8.0, true));
        assert_eq!(
            m.accommodation_optimum(6.0),
            Err(ModelError::EmptyAccommodation(6.0))
        );
    }

    #[test]
    fn accommodation_supremum_at_endpoint() {
        // theta = 1: x_static = 2 < x_low(3.5) = 4 - sqrt 2.
        let m = Market::new(ModelParams::new(10.0, 2.0, 1.0, 0.5, 2.0)).unwrap();
        let a = m.accommodation_optimum(3.5).unwrap();
        assert!(!a.attained);
        assert_relative_eq!(a.x, 4.0 - 2f64.sqrt(), epsilon = 1e-12);
        assert_relative_eq!(a.profit, 8.0 * 2f64.sqrt() - 4.0, epsilon = 1e-12);
    }

    #[test]
    fn deterrence_values() {
        let m = Market::reference();
        let d = m.deterrence_optimum(5.0).unwrap();
        assert_relative_eq!(d.x, X_LOW_5, epsilon = 1e-12);
        assert_relative_eq!(
            d.profit,
            8.0 + 4.0 * X_LOW_5 - 1.5 * X_LOW_5 * X_LOW_5,
            epsilon = 1e-12
        );
        assert!(!d.blockaded);
        let d = m.deterrence_optimum(6.0).unwrap();
        assert_relative_eq!(d.x, 4.0 / 3.0, epsilon = 1e-12);
        assert_relative_eq!(d.profit, 32.0 / 3.0, epsilon = 1e-12);
        assert!(d.blockaded);
        let d = m.deterrence_optimum(0.0).unwrap();
        assert_eq!((d.x, d.profit), (0.0, 8.0));
    }

    #[test]
    fn advantage_values() {
        let m = Market::reference();
        assert!(m.profit_advantage(0.0).unwrap().value.abs() < 1e-12);
        let expected = 4.0 * X_LOW_5 - 1.5 * X_LOW_5 * X_LOW_5;
        assert_relative_eq!(m.profit_advantage(5.0).unwrap().value, expected, epsilon = 1e-12);
        assert_relative_eq!(expected, 2.63299, epsilon = 1e-5);
        let at_peak = m.profit_advantage(6.0).unwrap();
        assert!(at_peak.accommodation.is_none());
        assert_relative_eq!(at_peak.value, 32.0 / 3.0, epsilon = 1e-12);
        let mid = m.profit_advantage(5.5).unwrap();
        assert_relative_eq!(mid.value, 32.0 / 3.0 - 8.0, epsilon = 1e-12);
    }

    #[test]
    fn solve_reference_cases() {
        let m = Market::reference();
        let out = m.solve(5.0).unwrap();
        assert_eq!(out.regime, Regime::Deterred);
        assert_relative_eq!(out.x_star, X_LOW_5, epsilon = 1e-12);
        assert!(!out.entry);

        let out = m.solve(5.5).unwrap();
        assert_eq!(out.regime, Regime::Blockaded);
        assert_relative_eq!(out.x_star, 4.0 / 3.0, epsilon = 1e-12);

        let out = m.solve(0.0).unwrap();
        assert_eq!(out.regime, Regime::Accommodated);
        assert_eq!(out.x_star, 2.0);
        assert!(out.entry && out.indifferent);
        assert_eq!(out.profit_period2_incumbent, 0.0);
        assert!(matches!(out.second_period, SecondPeriod::Entry(_)));
    }

    #[test]
    fn threshold_is_blockaded() {
        let m = Market::reference();
        assert_eq!(m.solve(16.0 / 3.0).unwrap().regime, Regime::Blockaded);
        assert_eq!(m.solve(5.333).unwrap().regime, Regime::Deterred);
        assert_eq!(m.solve(5.334).unwrap().regime, Regime::Blockaded);
        assert_eq!(m.solve(100.0).unwrap().regime, Regime::Blockaded);
    }

    #[test]
    fn generic_entrant_regimes() {
        let m = Market::new(ModelParams::new(10.0, 2.0, 1.0, 1.0, 2.0)).unwrap();
        let x_m = 8.0 / 5.0;
        let out = m.solve(1.0).unwrap();
        assert_eq!(out.regime, Regime::GenericNoEntry);
        assert_relative_eq!(out.x_star, x_m, epsilon = 1e-12);
        assert!(!out.entry);

        let out = m.solve(0.0).unwrap();
        assert_eq!(out.regime, Regime::GenericIndifferent);
        assert_relative_eq!(out.x_star, x_m, epsilon = 1e-12);
        let c = out.generic_candidates.unwrap();
        assert_eq!(c.with_entry, 2.0);
        assert!(out.indifferent);
    }

    #[test]
    fn profits_add_up() {
        let m = Market::reference();
        for r in [0.0, 1.0, 5.0, 5.5, 7.0] {
            let out = m.solve(r).unwrap();
            assert_relative_eq!(
                out.total_incumbent,
                out.profit_period1 + out.profit_period2_incumbent,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn negative_entry_cost_is_rejected() {
        assert_eq!(
            Market::reference().solve(-0.1),
            Err(ModelError::NegativeEntryCost(-0.1))
        );
    }
}
