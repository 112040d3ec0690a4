//! Subgame perfect equilibrium of a two-period entry-deterrence game.
//!
//! An incumbent antibiotic monopolist picks first-period output `X`, which
//! erodes the effectiveness of its own drug (`theta`) and of a prospective
//! rival's (`phi`). A rival then decides whether to pay a fixed entry cost `R`
//! and compete in prices. [`Market::solve`] runs the backward induction;
//! [`oracle`] checks every closed form by brute force.
//!
//! ```
//! use deterrence_core::{Market, Regime};
//!
//! let market = Market::reference();
//! let out = market.solve(5.0).unwrap();
//! assert_eq!(out.regime, Regime::Deterred);
//! assert!(out.x_star < market.derived_constants().x_monopoly);
//! ```

pub mod bertrand;
pub mod entry;
pub mod equilibrium;
mod error;
pub mod model;
pub mod oracle;

pub use bertrand::{MonopolyPricing, PricingOutcome, PricingRegime};
pub use entry::{ClosedInterval, EntrantBranch, EntrantPeak, EntryDecision, EntryRegions, UpperRoot};
pub use equilibrium::{
    AccommodationOptimum, DeterrenceOptimum, EquilibriumOutcome, GenericCandidates, ProfitAdvantage, Regime,
    SecondPeriod,
};
pub use error::{InvalidParams, ModelError, Violation};
pub use model::{validate, validate_with, DerivedConstants, Market, ModelParams, Tolerances};
pub use oracle::{GridSpec, OracleReport, SpneCheck, SubgameCheck};
