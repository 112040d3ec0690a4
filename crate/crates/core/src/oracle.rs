//! Brute-force checks of the closed forms.
//!
//! The subgame oracle searches a price grid using only the two inverse demand
//! curves and a tie rule; it never touches the pricing or entrant-profit
//! formulas. The equilibrium oracle searches a first-period output grid and
//! rebuilds the incumbent's payoff from demand. Its entry test uses the exact
//! gross entrant profit since sampling a strict-inequality boundary on a grid
//! is ill-posed.

use serde::{Deserialize, Serialize};

use crate::entry::check_entry_cost;
use crate::equilibrium::Regime;
use crate::error::ModelError;
use crate::model::Market;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub price_step: f64,
    pub output_step: f64,
    pub x_max: f64,
}

impl GridSpec {
    /// `1e-3 (alpha - c)` price step, `1e-3 x_cap` output step over `[0, x_cap]`.
    pub fn for_market(market: &Market) -> Self {
        Self {
            price_step: 1e-3 * market.margin(),
            output_step: 1e-3 * market.x_cap(),
            x_max: market.x_cap(),
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if !(self.price_step > 0.0 && self.price_step.is_finite()) {
            return Err(ModelError::DegenerateGrid("price_step must be positive"));
        }
        if !(self.output_step > 0.0 && self.output_step.is_finite()) {
            return Err(ModelError::DegenerateGrid("output_step must be positive"));
        }
        if !(self.x_max > 0.0 && self.x_max.is_finite()) {
            return Err(ModelError::DegenerateGrid("x_max must be positive"));
        }
        Ok(())
    }

    fn output_points(&self) -> impl Iterator<Item = f64> + '_ {
        let n = (self.x_max / self.output_step + 1e-9).floor() as usize;
        (0..=n).map(move |k| k as f64 * self.output_step)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub closed_form_value: f64,
    pub brute_force_value: f64,
    pub discrepancy: f64,
    pub tolerance_used: f64,
    pub pass: bool,
}

impl OracleReport {
    pub fn new(closed_form_value: f64, brute_force_value: f64, tolerance_used: f64) -> Self {
        let discrepancy = (closed_form_value - brute_force_value).abs();
        Self {
            closed_form_value,
            brute_force_value,
            discrepancy,
            tolerance_used,
            pass: discrepancy <= tolerance_used,
        }
    }
}

/// Who serves the second-period market at a pair of prices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Allocation {
    pub q_incumbent: f64,
    pub q_entrant: f64,
}

/// Consumers buy the drug with the higher effectiveness net of price; ties go
/// to the entrant. Quantity comes from the chosen drug's inverse demand.
///
/// Surpluses within `1e-12 alpha` of each other count as a tie.
pub fn demand_allocation(market: &Market, x: f64, p_incumbent: f64, p_entrant: f64) -> Allocation {
    let p = market.params();
    let incumbent_surplus = p.alpha - p.theta * x - p_incumbent;
    let entrant_surplus = p.alpha - p.phi * x - p_entrant;
    if entrant_surplus >= incumbent_surplus - 1e-12 * p.alpha.abs().max(1.0) {
        Allocation {
            q_incumbent: 0.0,
            q_entrant: (entrant_surplus / p.beta).max(0.0),
        }
    } else {
        Allocation {
            q_incumbent: (incumbent_surplus / p.beta).max(0.0),
            q_entrant: 0.0,
        }
    }
}

fn price_grid(from: f64, to: f64, step: f64) -> impl Iterator<Item = f64> {
    let n = ((to - from) / step).ceil().max(0.0) as usize;
    (0..=n).map(move |k| from + k as f64 * step)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubgameCheck {
    pub report: OracleReport,
    pub entrant_price: f64,
    pub entrant_quantity: f64,
    /// Best incumbent profit against the entrant's grid best response.
    pub incumbent_profit: f64,
}

/// Discretized best responses in the post-entry pricing game.
pub fn oracle_subgame_profit(market: &Market, x: f64, grid: &GridSpec) -> Result<SubgameCheck, ModelError> {
    grid.validate()?;
    let closed = market.entrant_gross_profit(x)?;
    let p = market.params();
    let step = grid.price_step;

    // Entrant against an incumbent at its cost floor.
    let top = (p.alpha - p.phi * x + p.c) / 2.0 + step;
    let (mut best_price, mut best_profit, mut best_q) = (p.c, f64::NEG_INFINITY, 0.0);
    for pe in price_grid(p.c, top, step) {
        let q = demand_allocation(market, x, p.c, pe).q_entrant;
        let profit = (pe - p.c) * q;
        if profit > best_profit {
            (best_price, best_profit, best_q) = (pe, profit, q);
        }
    }

    // Incumbent against that response; prices below cost are never offered.
    let incumbent_top = (p.alpha - p.theta * x).max(p.c) + step;
    let incumbent_profit = price_grid(p.c, incumbent_top, step)
        .map(|pi| (pi - p.c) * demand_allocation(market, x, pi, best_price).q_incumbent)
        .fold(0.0_f64, f64::max);

    Ok(SubgameCheck {
        report: OracleReport::new(closed, best_profit, 5.0 * step * best_q),
        entrant_price: best_price,
        entrant_quantity: best_q,
        incumbent_profit,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpneCheck {
    pub entry_cost: f64,
    pub report: OracleReport,
    pub oracle_regime: Regime,
    pub solver_regime: Regime,
    pub oracle_x: f64,
    pub solver_x: f64,
    pub oracle_entry: bool,
    pub x_tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy)]
struct Best {
    x: f64,
    value: f64,
}

impl Best {
    fn none() -> Self {
        Self {
            x: f64::NAN,
            value: f64::NEG_INFINITY,
        }
    }

    /// Strict improvement only, so the smallest X wins ties.
    fn offer(&mut self, x: f64, value: f64) {
        if value > self.value {
            *self = Self { x, value };
        }
    }
}

/// Incumbent's second-period rent as a monopolist, from its inverse demand.
fn monopoly_rent(market: &Market, x: f64) -> f64 {
    let p = market.params();
    let intercept = p.alpha - p.theta * x;
    let q = ((intercept - p.c) / (2.0 * p.beta)).max(0.0);
    (intercept - p.beta * q - p.c) * q
}

fn first_period_rent(market: &Market, x: f64) -> f64 {
    let p = market.params();
    (p.alpha - p.beta * x - p.c) * x
}

/// Vertex of the parabola through three equally spaced samples.
fn parabolic_vertex(x_mid: f64, h: f64, left: f64, mid: f64, right: f64) -> f64 {
    let denom = left - 2.0 * mid + right;
    if denom == 0.0 {
        x_mid
    } else {
        x_mid + 0.5 * h * (left - right) / denom
    }
}

/// Exhaustive search over first-period output, compared against `solve`.
pub fn oracle_spne(market: &Market, entry_cost: f64, grid: &GridSpec) -> Result<SpneCheck, ModelError> {
    grid.validate()?;
    check_entry_cost(entry_cost)?;
    let tol = market.profit_tolerance();
    let step = grid.output_step;
    let enters = |x: f64| {
        !market.is_generic()
            && market.entrant_gross_profit(x).expect("grid is nonnegative") > entry_cost + tol
    };

    let mut overall = Best::none();
    let mut accommodating = Best::none();
    let mut monopoly = Best::none();
    let mut samples = Vec::new();
    for x in grid.output_points() {
        let p1 = first_period_rent(market, x);
        let rent = monopoly_rent(market, x);
        let entry = enters(x);
        let value = if entry { p1 } else { p1 + rent };
        overall.offer(x, value);
        if entry {
            accommodating.offer(x, value);
        }
        monopoly.offer(x, p1 + rent);
        samples.push(p1 + rent);
    }

    // Costless entry leaves the incumbent indifferent; take the accommodating
    // branch when it ties within grid resolution.
    let p = market.params();
    let curvature = p.beta + p.theta * p.theta / (4.0 * p.beta);
    let resolution = curvature * step * step + tol;
    let mut chosen = overall;
    if entry_cost == 0.0 && accommodating.value >= overall.value - resolution {
        chosen = accommodating;
    }
    let oracle_entry = enters(chosen.x);

    let k = (monopoly.x / step).round() as usize;
    let x_monopoly = if k > 0 && k + 1 < samples.len() {
        parabolic_vertex(monopoly.x, step, samples[k - 1], samples[k], samples[k + 1])
    } else {
        monopoly.x
    };

    let oracle_regime = if market.is_generic() {
        if entry_cost == 0.0 {
            Regime::GenericIndifferent
        } else {
            Regime::GenericNoEntry
        }
    } else if oracle_entry {
        Regime::Accommodated
    } else if !enters(x_monopoly) {
        Regime::Blockaded
    } else {
        Regime::Deterred
    };

    let solved = market.solve(entry_cost)?;
    let slope = if solved.entry {
        market.margin() - 2.0 * p.beta * solved.x_star
    } else {
        market.two_period_monopoly_slope(solved.x_star)
    };
    let value_tol = resolution + step * slope.abs();
    let report = OracleReport::new(solved.total_incumbent, chosen.value, value_tol);
    let x_tolerance = 2.0 * step;
    let pass =
        report.pass && oracle_regime == solved.regime && (chosen.x - solved.x_star).abs() <= x_tolerance;

    Ok(SpneCheck {
        entry_cost,
        report,
        oracle_regime,
        solver_regime: solved.regime,
        oracle_x: chosen.x,
        solver_x: solved.x_star,
        oracle_entry,
        x_tolerance,
        pass,
    })
}
