//! Entrant profitability, the entry decision and the accommodation and
//! deterrence regions of first-period output.
//!
//! Gross entrant profit is piecewise in `X`: the limit-pricing branch
//! `(theta - phi) X (alpha - c - theta X) / beta` below the crossover
//! `x_tilde`, and the monopoly branch `(alpha - c - phi X)^2 / (4 beta)` from
//! `x_tilde` until the entrant's intercept reaches `c`. The two branches meet
//! with equal value and slope at the crossover.

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::model::Market;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EntrantBranch {
    Limit,
    Monopoly,
}

/// Maximum of the gross entrant profit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntrantPeak {
    pub x: f64,
    pub profit: f64,
    /// Without cross-resistance the maximum holds on the whole ray `[x, inf)`.
    pub plateau: bool,
}

/// Upper root of `pi_E(X) = R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum UpperRoot {
    Finite(f64),
    /// `phi = 0`: entrant profit never falls back to `R`.
    Unbounded,
}

impl UpperRoot {
    pub fn finite(self) -> Option<f64> {
        match self {
            UpperRoot::Finite(x) => Some(x),
            UpperRoot::Unbounded => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedInterval {
    pub lo: f64,
    pub hi: f64,
}

impl ClosedInterval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Partition of `[0, x_cap]` for a given entry cost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryRegions {
    pub entry_cost: f64,
    /// Lower root; absent when `R` exceeds the entrant's maximum profit.
    pub x_low: Option<f64>,
    pub x_high: Option<UpperRoot>,
    /// The open interval `(x_low, x_high)` is empty, including the double-root
    /// case `R = pi_e_max`.
    pub accommodation_empty: bool,
    /// Closed pieces of the deterrence set, clipped to `[0, x_cap]`.
    pub deterrence: Vec<ClosedInterval>,
    pub x_cap: f64,
}

impl EntryRegions {
    /// Membership in the open accommodation interval.
    pub fn accommodates(&self, x: f64) -> bool {
        if self.accommodation_empty {
            return false;
        }
        let (Some(lo), Some(hi)) = (self.x_low, self.x_high) else {
            return false;
        };
        x > lo
            && match hi {
                UpperRoot::Finite(h) => x < h,
                UpperRoot::Unbounded => true,
            }
    }

    pub fn deters(&self, x: f64) -> bool {
        self.deterrence.iter().any(|piece| piece.contains(x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EntryDecision {
    Enter,
    StayOut,
    /// Zero net profit from a generic entry at zero cost.
    Indifferent,
}

impl Market {
    /// One branch of the entrant profit, evaluated without domain restriction.
    pub fn entrant_branch_profit(&self, branch: EntrantBranch, x: f64) -> f64 {
        let p = self.params();
        let m = self.margin();
        match branch {
            EntrantBranch::Limit => self.resistance_gap() * x * (m - p.theta * x) / p.beta,
            EntrantBranch::Monopoly => (m - p.phi * x).powi(2) / (4.0 * p.beta),
        }
    }

    pub fn entrant_branch_slope(&self, branch: EntrantBranch, x: f64) -> f64 {
        let p = self.params();
        let m = self.margin();
        match branch {
            EntrantBranch::Limit => self.resistance_gap() * (m - 2.0 * p.theta * x) / p.beta,
            EntrantBranch::Monopoly => -p.phi * (m - p.phi * x) / (2.0 * p.beta),
        }
    }

    pub(crate) fn x_tilde(&self) -> f64 {
        let p = self.params();
        self.margin() / (2.0 * p.theta - p.phi)
    }

    /// Gross second-period profit of an entrant facing first-period output `x`.
    pub fn entrant_gross_profit(&self, x: f64) -> Result<f64, ModelError> {
        Self::check_output(x)?;
        Ok(self.entrant_gross_profit_unchecked(x))
    }

    pub(crate) fn entrant_gross_profit_unchecked(&self, x: f64) -> f64 {
        if self.is_generic() || x == 0.0 {
            return 0.0;
        }
        if x < self.x_tilde() {
            return self.entrant_branch_profit(EntrantBranch::Limit, x);
        }
        match self.x_entrant_exhausted() {
            Some(limit) if x >= limit => 0.0,
            _ => self.entrant_branch_profit(EntrantBranch::Monopoly, x),
        }
    }

    pub fn entrant_profit_peak(&self) -> Result<EntrantPeak, ModelError> {
        if self.is_generic() {
            return Err(ModelError::GenericEntrant);
        }
        let d = self.derived_constants();
        let plateau = self.params().phi == 0.0;
        Ok(EntrantPeak {
            x: if plateau { d.x_tilde } else { d.x_entrant_peak },
            profit: d.pi_e_max,
            plateau,
        })
    }

    pub fn entry_regions(&self, entry_cost: f64) -> Result<EntryRegions, ModelError> {
        check_entry_cost(entry_cost)?;
        if self.is_generic() {
            return Err(ModelError::GenericEntrant);
        }
        let p = self.params();
        let m = self.margin();
        let x_cap = self.x_cap();
        let blockaded_everywhere = |x_low: Option<f64>, x_high: Option<UpperRoot>| EntryRegions {
            entry_cost,
            x_low,
            x_high,
            accommodation_empty: true,
            deterrence: vec![ClosedInterval { lo: 0.0, hi: x_cap }],
            x_cap,
        };

        // Limit branch: theta X^2 - m X + beta R / (theta - phi) = 0.
        let k = p.beta * entry_cost / self.resistance_gap();
        let disc = m * m - 4.0 * p.theta * k;
        let ratio = disc / (m * m);
        if ratio < -self.tolerances().double_root {
            return Ok(blockaded_everywhere(None, None));
        }
        if ratio <= self.tolerances().double_root {
            let x = m / (2.0 * p.theta);
            let hi = if p.phi == 0.0 {
                UpperRoot::Unbounded
            } else {
                UpperRoot::Finite(x)
            };
            return Ok(blockaded_everywhere(Some(x), Some(hi)));
        }
        let q = 0.5 * (m + disc.sqrt());
        let x_low = k / q;
        let x_high = if p.phi == 0.0 {
            UpperRoot::Unbounded
        } else if entry_cost > self.entrant_branch_profit(EntrantBranch::Monopoly, self.x_tilde()) {
            UpperRoot::Finite(q / p.theta)
        } else {
            UpperRoot::Finite((m - 2.0 * (p.beta * entry_cost).sqrt()) / p.phi)
        };

        let mut deterrence = vec![ClosedInterval {
            lo: 0.0,
            hi: x_low.min(x_cap),
        }];
        if let UpperRoot::Finite(h) = x_high {
            if h <= x_cap {
                deterrence.push(ClosedInterval { lo: h, hi: x_cap });
            }
        }
        Ok(EntryRegions {
            entry_cost,
            x_low: Some(x_low),
            x_high: Some(x_high),
            accommodation_empty: false,
            deterrence,
            x_cap,
        })
    }

    /// Entry happens iff gross profit strictly exceeds `R`; ties stay out.
    pub fn entry_decision(&self, x: f64, entry_cost: f64) -> Result<EntryDecision, ModelError> {
        Self::check_output(x)?;
        check_entry_cost(entry_cost)?;
        if self.is_generic() {
            return Ok(if entry_cost == 0.0 {
                EntryDecision::Indifferent
            } else {
                EntryDecision::StayOut
            });
        }
        Ok(
            if self.entrant_gross_profit_unchecked(x) > entry_cost + self.profit_tolerance() {
                EntryDecision::Enter
            } else {
                EntryDecision::StayOut
            },
        )
    }
}

pub(crate) fn check_entry_cost(r: f64) -> Result<(), ModelError> {
    if r >= 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(ModelError::NegativeEntryCost(r))
    }
}
